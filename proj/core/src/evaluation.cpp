#include "crosslex/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "crosslex/io.hpp"

namespace crosslex {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_sf_two_sided(double z) { return std::erfc(z / std::sqrt(2.0)); }

struct Counts {
  std::int64_t hits = 0;
  std::int64_t retrieved = 0;
  std::int64_t relevant = 0;
};

EvalReport report_from_counts(const Counts& c) {
  EvalReport r;
  r.hit_count = c.hits;
  r.retrieved_count = c.retrieved;
  r.relevant_count = c.relevant;
  r.zero_retrieved = c.retrieved == 0;
  r.precision = c.retrieved > 0 ? static_cast<double>(c.hits) / static_cast<double>(c.retrieved) : 0.0;
  r.recall = c.relevant > 0 ? static_cast<double>(c.hits) / static_cast<double>(c.relevant) : 0.0;
  r.f1 = (r.precision + r.recall) > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  r.correct_ratio = r.precision;
  return r;
}

Counts pooled_counts(const RankedLists& retrieved, const GroundTruth& truth) {
  Counts c;
  for (const auto& [query, candidates] : retrieved) {
    if (!truth.has_query(query)) {
      throw std::invalid_argument("ground truth has no labels for query '" + query + "'");
    }
    std::set<std::string> unique(candidates.begin(), candidates.end());
    c.retrieved += static_cast<std::int64_t>(unique.size());
    for (const auto& cand : unique) {
      if (truth.relevant(query, cand)) ++c.hits;
    }
    c.relevant += truth.relevant_count(query);
  }
  return c;
}

double micro_f1(const Counts& c) {
  const double p = c.retrieved > 0 ? static_cast<double>(c.hits) / static_cast<double>(c.retrieved) : 0.0;
  const double r = c.relevant > 0 ? static_cast<double>(c.hits) / static_cast<double>(c.relevant) : 0.0;
  return (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

Counts counts_of_run(const BilingualSpace& space, const std::vector<Query>& queries,
                     const GroundTruth& truth,
                     const std::function<std::vector<Candidate>(const Query&)>& retrieve) {
  Counts c;
  for (const auto& q : queries) {
    auto candidates = retrieve(q);
    c.retrieved += static_cast<std::int64_t>(candidates.size());
    for (const auto& cand : candidates) {
      if (truth.relevant(q.key(), cand.word)) ++c.hits;
    }
    c.relevant += truth.relevant_count(q.key());
  }
  (void)space;
  return c;
}

std::string direction_of(const std::vector<Query>& queries) {
  if (queries.empty()) return "?";
  const std::string d = queries.front().language_tag + "->" + queries.front().target_tag;
  for (const auto& q : queries) {
    if (q.language_tag + "->" + q.target_tag != d) return "mixed";
  }
  return d;
}

}  // namespace

EvalReport mrr(const RankedLists& ranked_lists, const GroundTruth& truth) {
  if (ranked_lists.empty()) throw std::invalid_argument("mrr: empty query set");
  double sum_all = 0.0;
  double sum_answerable = 0.0;
  std::int64_t n_answerable = 0;
  EvalReport report;
  for (const auto& [query, candidates] : ranked_lists) {
    if (!truth.has_query(query)) {
      throw std::invalid_argument("ground truth has no labels for query '" + query + "'");
    }
    std::optional<int> rank;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (truth.relevant(query, candidates[i])) {
        rank = static_cast<int>(i) + 1;
        break;
      }
    }
    const double rr = rank ? 1.0 / static_cast<double>(*rank) : 0.0;
    sum_all += rr;
    if (truth.relevant_count(query) > 0) {
      sum_answerable += rr;
      ++n_answerable;
    }
    report.per_query_ranks.emplace(query, rank);
  }
  report.mrr = sum_all / static_cast<double>(ranked_lists.size());
  report.mrr_answerable =
      n_answerable > 0 ? sum_answerable / static_cast<double>(n_answerable) : 0.0;
  return report;
}

EvalReport set_metrics(const RankedLists& retrieved, const GroundTruth& truth) {
  return report_from_counts(pooled_counts(retrieved, truth));
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("wilcoxon: paired lists differ in length (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  std::vector<double> diffs;
  diffs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) {
    throw std::invalid_argument("wilcoxon: all differences are zero, test is degenerate");
  }
  const int n = static_cast<int>(diffs.size());
  if (n < 6) {
    throw std::invalid_argument("wilcoxon: need at least 6 nonzero differences, got " +
                                std::to_string(n));
  }

  // average ranks of |d|
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return std::abs(diffs[x]) < std::abs(diffs[y]); });
  std::vector<double> ranks(n, 0.0);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
    const double avg = (static_cast<double>(i + j)) / 2.0 + 1.0;
    for (int t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }

  WilcoxonResult res;
  res.n = n;
  double sum_r = 0.0, sum_r2 = 0.0, sum_r4 = 0.0;
  for (int t = 0; t < n; ++t) {
    const double r = ranks[t];
    sum_r += r;
    sum_r2 += r * r;
    sum_r4 += r * r * r * r;
    if (diffs[t] > 0) res.w_plus += r;
  }
  res.w_minus = sum_r - res.w_plus;
  res.statistic = std::min(res.w_plus, res.w_minus);

  // W+ = sum r_i B_i with fair Bernoulli B_i, so with average ranks the
  // moments are mu = sum(r)/2, var = sum(r^2)/4 (the classic tie-corrected
  // variance) and fourth cumulant k4 = -sum(r^4)/8.
  const double mu = sum_r / 2.0;
  const double var = sum_r2 / 4.0;
  const double sd = std::sqrt(var);
  const double dev = std::max(0.0, std::abs(res.w_plus - mu) - 0.5);  // continuity correction
  const double z = dev / sd;
  res.z = (res.w_plus >= mu ? z : -z);

  // Normal tail plus the symmetric Edgeworth kurtosis term; the signed-rank
  // null is platykurtic and the plain normal tail is off by up to ~0.04 at
  // n = 6 without it.
  const double g2 = (-sum_r4 / 8.0) / (var * var);
  const double phi = std::exp(-z * z / 2.0) / std::sqrt(2.0 * kPi);
  double p = normal_sf_two_sided(z) + 2.0 * (g2 / 24.0) * (z * z * z - 3.0 * z) * phi;
  res.p_value = std::min(1.0, std::max(0.0, p));
  return res;
}

std::vector<MethodResult> compare_methods(const BilingualSpace& space,
                                          const std::vector<Query>& queries,
                                          const GroundTruth& truth, const MethodGrids& grids) {
  if (queries.empty()) throw std::invalid_argument("compare_methods: no queries");
  for (const auto& q : queries) {
    if (!truth.has_query(q.key())) {
      throw std::invalid_argument("compare_methods: query '" + q.key() +
                                  "' has no ground-truth labels");
    }
  }
  const std::string direction = direction_of(queries);
  std::vector<MethodResult> rows;

  if (!grids.knn_grid.empty()) {
    Counts best;
    double best_f1 = -1.0;
    int best_k = grids.knn_grid.front();
    auto grid = grids.knn_grid;
    std::sort(grid.begin(), grid.end());
    for (int k : grid) {
      Counts c = counts_of_run(space, queries, truth, [&](const Query& q) {
        return nearest_neighbors(space, q, k, q.target_tag);
      });
      const double f1 = micro_f1(c);
      if (f1 > best_f1) {
        best_f1 = f1;
        best = c;
        best_k = k;
      }
    }
    rows.push_back({direction, "k-NN", "k=" + std::to_string(best_k), best.retrieved,
                    report_from_counts(best).correct_ratio, best_f1});
  }

  if (!grids.delta_grid.empty()) {
    Counts best;
    double best_f1 = -1.0;
    auto grid = grids.delta_grid;
    std::sort(grid.begin(), grid.end());
    double best_delta = grid.front();
    for (double delta : grid) {
      Counts c = counts_of_run(space, queries, truth, [&](const Query& q) {
        return expand_threshold(space, q, delta, grids.max_k);
      });
      const double f1 = micro_f1(c);
      if (f1 > best_f1) {
        best_f1 = f1;
        best = c;
        best_delta = delta;
      }
    }
    rows.push_back({direction, "Single Threshold", "delta=" + format_double(best_delta),
                    best.retrieved, report_from_counts(best).correct_ratio, best_f1});
  }

  if (!grids.delta_grid.empty() && grids.dynamic_groups >= 1 &&
      queries.size() >= static_cast<std::size_t>(grids.dynamic_groups)) {
    auto policy = calibrate_dynamic_threshold(space, queries, truth, grids.dynamic_groups,
                                              grids.modularity_k, grids.delta_grid, grids.max_k);
    Counts c = counts_of_run(space, queries, truth, [&](const Query& q) {
      return expand_dynamic(space, q, policy, grids.max_k);
    });
    rows.push_back({direction, "Dynamic Threshold",
                    "groups=" + std::to_string(grids.dynamic_groups), c.retrieved,
                    report_from_counts(c).correct_ratio, micro_f1(c)});
  }
  return rows;
}

RankedLists load_run(const std::filesystem::path& path) {
  struct Item {
    int rank;
    std::string candidate;
  };
  std::map<std::string, std::vector<Item>> raw;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 5) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) +
                               ": expected 'query<TAB>rank<TAB>candidate<TAB>language<TAB>similarity'");
    }
    Item item;
    item.rank = static_cast<int>(parse_count(fields[1], path.string() + " line " + std::to_string(i + 1)));
    item.candidate = std::string(fields[2]);
    raw[std::string(fields[0])].push_back(std::move(item));
  }
  RankedLists out;
  for (auto& [query, items] : raw) {
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.rank < b.rank; });
    auto& list = out[query];
    list.reserve(items.size());
    for (auto& item : items) list.push_back(std::move(item.candidate));
  }
  return out;
}

void save_run(const std::map<std::string, std::vector<Candidate>>& results,
              const std::filesystem::path& path) {
  std::string out;
  for (const auto& [query, candidates] : results) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out += query;
      out += '\t';
      out += std::to_string(i + 1);
      out += '\t';
      out += candidates[i].word;
      out += '\t';
      out += candidates[i].language_tag;
      out += '\t';
      out += format_double(candidates[i].similarity);
      out += '\n';
    }
  }
  write_file(path, out);
}

std::string render_report_tsv(const EvalReport& r) {
  std::string out = "metric\tvalue\n";
  if (r.mrr) {
    out += "mrr\t" + format_double(*r.mrr) + "\n";
    out += "mrr_answerable\t" + format_double(*r.mrr_answerable) + "\n";
  } else {
    out += "precision\t" + format_double(r.precision) + "\n";
    out += "recall\t" + format_double(r.recall) + "\n";
    out += "f1\t" + format_double(r.f1) + "\n";
    out += "correct_ratio\t" + format_double(r.correct_ratio) + "\n";
    out += "retrieved\t" + std::to_string(r.retrieved_count) + "\n";
    out += "relevant\t" + std::to_string(r.relevant_count) + "\n";
    out += "hits\t" + std::to_string(r.hit_count) + "\n";
  }
  return out;
}

std::string render_report_text(const EvalReport& r) {
  std::ostringstream out;
  if (r.mrr) {
    out << "MRR (all queries):        " << *r.mrr << "\n";
    out << "MRR (answerable queries): " << *r.mrr_answerable << "\n";
    int with_rank = 0;
    for (const auto& [q, rank] : r.per_query_ranks) {
      if (rank) ++with_rank;
    }
    out << "queries: " << r.per_query_ranks.size() << ", with a relevant hit: " << with_rank << "\n";
  } else {
    out << "retrieved: " << r.retrieved_count << ", relevant: " << r.relevant_count
        << ", hits: " << r.hit_count << "\n";
    out << "precision (= correct ratio): " << r.precision << "\n";
    out << "recall:                      " << r.recall << "\n";
    out << "F1:                          " << r.f1 << "\n";
    if (r.zero_retrieved) out << "note: nothing retrieved, precision reported as 0\n";
  }
  return out.str();
}

std::string render_comparison_tsv(const std::vector<MethodResult>& rows) {
  std::string out = "Query Direction\tQuery Method\t#Retrieved Items\tCorrect Ratio\tF1\n";
  for (const auto& row : rows) {
    out += row.direction;
    out += '\t';
    out += row.method;
    out += '\t';
    out += std::to_string(row.retrieved);
    out += '\t';
    out += format_double(row.correct_ratio);
    out += '\t';
    out += format_double(row.f1);
    out += '\n';
  }
  return out;
}

}  // namespace crosslex
