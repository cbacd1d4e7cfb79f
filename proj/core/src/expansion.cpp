#include "crosslex/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crosslex/io.hpp"

namespace crosslex {

namespace {

int resolve_query_row(const BilingualSpace& space, const Query& query) {
  auto row = space.find(query.language_tag, query.word);
  if (!row) {
    throw std::invalid_argument("query '" + query.word + "' not in vocabulary of language '" +
                                query.language_tag + "'");
  }
  return *row;
}

struct Scored {
  double sim;
  int row;
};

// Strict total order: similarity desc, word asc, language tag asc.
struct ScoredLess {
  const BilingualSpace& space;
  bool operator()(const Scored& a, const Scored& b) const {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (space.words[a.row] != space.words[b.row]) return space.words[a.row] < space.words[b.row];
    return space.tags[a.row] < space.tags[b.row];
  }
};

// Full brute-force scan over the rows of the requested language, sorted.
std::vector<Scored> scan_language(const BilingualSpace& space, int query_row,
                                  const std::string& language) {
  const bool any = language == "any";
  const int d = space.dim();
  const double* q = space.row(query_row);
  std::vector<Scored> scored;
  scored.reserve(space.size());
  for (int i = 0; i < space.size(); ++i) {
    if (i == query_row) continue;
    if (!any && space.tags[i] != language) continue;
    scored.push_back({cosine_rows(q, space.row(i), d), i});
  }
  std::sort(scored.begin(), scored.end(), ScoredLess{space});
  return scored;
}

std::vector<Candidate> to_candidates(const BilingualSpace& space, const std::vector<Scored>& scored,
                                     std::size_t k) {
  std::vector<Candidate> out;
  out.reserve(std::min(k, scored.size()));
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) {
    out.push_back({space.words[scored[i].row], space.tags[scored[i].row], scored[i].sim});
  }
  return out;
}

std::string other_language(const BilingualSpace& space, const std::string& tag) {
  auto langs = space.languages();
  if (langs.size() != 2) {
    throw std::invalid_argument("expected a two-language space, found " +
                                std::to_string(langs.size()) + " language tags");
  }
  if (tag == langs[0]) return langs[1];
  if (tag == langs[1]) return langs[0];
  throw std::invalid_argument("language '" + tag + "' not present in the space");
}

// Pooled (micro) F1 of expand_threshold at `delta` over a set of queries.
double group_f1(const BilingualSpace& space, const std::vector<const Query*>& queries,
                const GroundTruth& truth, double delta, int max_k) {
  std::int64_t hits = 0, retrieved = 0, relevant = 0;
  for (const Query* q : queries) {
    auto candidates = expand_threshold(space, *q, delta, max_k);
    retrieved += static_cast<std::int64_t>(candidates.size());
    for (const auto& c : candidates) {
      if (truth.relevant(q->key(), c.word)) ++hits;
    }
    relevant += truth.relevant_count(q->key());
  }
  const double p = retrieved > 0 ? static_cast<double>(hits) / static_cast<double>(retrieved) : 0.0;
  const double r = relevant > 0 ? static_cast<double>(hits) / static_cast<double>(relevant) : 0.0;
  return (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

std::vector<Candidate> nearest_neighbors(const BilingualSpace& space, const Query& query, int k,
                                         const std::string& target_language) {
  if (k < 1) throw std::invalid_argument("nearest_neighbors: k must be >= 1");
  const int row = resolve_query_row(space, query);
  auto scored = scan_language(space, row, target_language);
  return to_candidates(space, scored, static_cast<std::size_t>(k));
}

std::vector<Candidate> expand_threshold(const BilingualSpace& space, const Query& query,
                                        double delta, int max_k) {
  if (delta < -1.0 || delta > 1.0) {
    throw std::invalid_argument("expand_threshold: delta must lie in [-1, 1]");
  }
  if (max_k < 1) throw std::invalid_argument("expand_threshold: max_k must be >= 1");
  auto top = nearest_neighbors(space, query, max_k, query.target_tag);
  std::vector<Candidate> out;
  for (auto& c : top) {
    if (c.similarity >= delta) out.push_back(std::move(c));
  }
  return out;
}

ModularityScore modularity(const BilingualSpace& space, const Query& query, int k) {
  if (k < 1) throw std::invalid_argument("modularity: k must be >= 1");
  const int row = resolve_query_row(space, query);
  const std::string own = query.language_tag;
  const std::string other = other_language(space, own);

  auto own_scored = scan_language(space, row, own);
  auto other_scored = scan_language(space, row, other);
  if (own_scored.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("modularity: language '" + own + "' has only " +
                                std::to_string(own_scored.size()) +
                                " words besides the query, need k=" + std::to_string(k));
  }
  if (other_scored.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("modularity: language '" + other + "' has only " +
                                std::to_string(other_scored.size()) + " words, need k=" +
                                std::to_string(k));
  }

  double own_sum = 0.0, other_sum = 0.0;
  for (int i = 0; i < k; ++i) own_sum += own_scored[i].sim;
  for (int i = 0; i < k; ++i) other_sum += other_scored[i].sim;

  ModularityScore score;
  score.query = query.key();
  score.eta_src = own_sum / static_cast<double>(k);
  score.eta_tgt = other_sum / static_cast<double>(k);
  score.m = std::abs(score.eta_src - score.eta_tgt);
  score.k = k;
  return score;
}

int DynamicThresholdPolicy::group_of(double modularity_score) const {
  for (int i = 0; i < n_groups; ++i) {
    if (modularity_score <= group_boundaries[i]) return i;
  }
  return n_groups - 1;  // above the last boundary
}

void DynamicThresholdPolicy::validate() const {
  if (n_groups < 1) throw std::invalid_argument("policy: n_groups must be >= 1");
  if (k < 1) throw std::invalid_argument("policy: k must be >= 1");
  if (static_cast<int>(group_boundaries.size()) != n_groups ||
      static_cast<int>(group_thresholds.size()) != n_groups) {
    throw std::invalid_argument("policy: boundary/threshold row count must equal n_groups");
  }
  for (int i = 1; i < n_groups; ++i) {
    if (!(group_boundaries[i] > group_boundaries[i - 1])) {
      throw std::invalid_argument("policy: group boundaries must be strictly increasing");
    }
  }
  for (double t : group_thresholds) {
    if (t < -1.0 || t > 1.0) {
      throw std::invalid_argument("policy: thresholds must lie in [-1, 1]");
    }
  }
}

DynamicThresholdPolicy calibrate_dynamic_threshold(const BilingualSpace& space,
                                                   const std::vector<Query>& queries,
                                                   const GroundTruth& truth, int n_groups, int k,
                                                   const std::vector<double>& delta_grid,
                                                   int max_k) {
  if (n_groups < 1) throw std::invalid_argument("calibration: n_groups must be >= 1");
  if (queries.size() < static_cast<std::size_t>(n_groups)) {
    throw std::invalid_argument("calibration: need at least n_groups=" + std::to_string(n_groups) +
                                " queries, got " + std::to_string(queries.size()));
  }
  if (delta_grid.empty()) throw std::invalid_argument("calibration: delta grid is empty");
  for (const auto& q : queries) {
    if (!truth.has_query(q.key())) {
      throw std::invalid_argument("calibration: query '" + q.key() + "' has no ground-truth labels");
    }
  }
  std::vector<double> grid = delta_grid;
  std::sort(grid.begin(), grid.end());

  struct Entry {
    const Query* query;
    double m;
  };
  std::vector<Entry> entries;
  entries.reserve(queries.size());
  for (const auto& q : queries) entries.push_back({&q, modularity(space, q, k).m});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.m < b.m; });

  DynamicThresholdPolicy policy;
  policy.n_groups = n_groups;
  policy.k = k;

  const std::size_t n = entries.size();
  const std::size_t base = n / static_cast<std::size_t>(n_groups);
  const std::size_t remainder = n % static_cast<std::size_t>(n_groups);
  std::size_t cursor = 0;
  for (int g = 0; g < n_groups; ++g) {
    const std::size_t size = base + (static_cast<std::size_t>(g) < remainder ? 1 : 0);
    std::vector<const Query*> group;
    group.reserve(size);
    for (std::size_t i = 0; i < size; ++i) group.push_back(entries[cursor + i].query);
    const double boundary = entries[cursor + size - 1].m;
    cursor += size;

    double best_f1 = -1.0;
    double best_delta = grid.front();
    for (double delta : grid) {
      const double f1 = group_f1(space, group, truth, delta, max_k);
      if (f1 > best_f1) {
        best_f1 = f1;
        best_delta = delta;
      }
    }
    policy.group_boundaries.push_back(boundary);
    policy.group_thresholds.push_back(best_delta);
  }
  policy.validate();
  return policy;
}

std::vector<Candidate> expand_dynamic(const BilingualSpace& space, const Query& query,
                                      const DynamicThresholdPolicy& policy, int max_k) {
  policy.validate();
  const double m = modularity(space, query, policy.k).m;
  const int group = policy.group_of(m);
  return expand_threshold(space, query, policy.group_thresholds[group], max_k);
}

void save_policy(const DynamicThresholdPolicy& policy, const std::filesystem::path& path) {
  policy.validate();
  std::string out = "k=" + std::to_string(policy.k) + "\tn_groups=" + std::to_string(policy.n_groups) + "\n";
  for (int g = 0; g < policy.n_groups; ++g) {
    out += format_double(policy.group_boundaries[g]);
    out += '\t';
    out += format_double(policy.group_thresholds[g]);
    out += '\n';
  }
  write_file(path, out);
}

DynamicThresholdPolicy load_policy(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": empty policy file");
  auto header = split(lines[0], '\t');
  if (header.size() != 2 || header[0].rfind("k=", 0) != 0 || header[1].rfind("n_groups=", 0) != 0) {
    throw std::runtime_error(path.string() + ": expected header 'k=<k>\tn_groups=<n>'");
  }
  DynamicThresholdPolicy policy;
  policy.k = static_cast<int>(parse_count(header[0].substr(2), path.string() + ": k"));
  policy.n_groups = static_cast<int>(parse_count(header[1].substr(9), path.string() + ": n_groups"));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = split(lines[i], '\t');
    if (fields.size() != 2) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) +
                               ": expected 'boundary<TAB>delta'");
    }
    policy.group_boundaries.push_back(
        parse_double(fields[0], path.string() + " line " + std::to_string(i + 1)));
    policy.group_thresholds.push_back(
        parse_double(fields[1], path.string() + " line " + std::to_string(i + 1)));
  }
  policy.validate();
  return policy;
}

std::vector<Query> load_queries(const std::filesystem::path& path, const BilingualSpace& space) {
  auto langs = space.languages();
  std::vector<Query> out;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) +
                               ": expected 'language_tag:word', got '" + line + "'");
    }
    Query q;
    q.language_tag = line.substr(0, colon);
    q.word = line.substr(colon + 1);
    if (langs.size() == 2) {
      q.target_tag = (q.language_tag == langs[0]) ? langs[1] : langs[0];
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace crosslex
