#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crosslex/expansion.hpp"
#include "crosslex/truth.hpp"

namespace crosslex {

/// Pooled retrieval scores. correct_ratio is the micro precision
/// (relevant retrieved / retrieved); f1 = 2PR/(P+R) or 0 when P+R = 0.
struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double correct_ratio = 0.0;
  std::int64_t retrieved_count = 0;
  std::int64_t relevant_count = 0;   // pooled annotated relevant items
  std::int64_t hit_count = 0;        // relevant AND retrieved
  bool zero_retrieved = false;

  std::optional<double> mrr;             // over all queries
  std::optional<double> mrr_answerable;  // over queries with >= 1 relevant annotation
  std::map<std::string, std::optional<int>> per_query_ranks;
};

/// Ranked candidate words per query, best first.
using RankedLists = std::map<std::string, std::vector<std::string>>;

/// Reciprocal rank of the first relevant candidate per query (queries whose
/// list contains no relevant item contribute 0). Fills both MRR variants:
/// averaged over all queries and over only the queries with at least one
/// relevant annotated item.
EvalReport mrr(const RankedLists& ranked_lists, const GroundTruth& truth);

/// Micro-averaged precision/recall/F1 and correct ratio over the pooled
/// retrieved sets. Duplicate candidates within one query count once.
EvalReport set_metrics(const RankedLists& retrieved, const GroundTruth& truth);

struct WilcoxonResult {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double statistic = 0.0;  // min(w_plus, w_minus)
  double z = 0.0;
  double p_value = 1.0;
  int n = 0;  // pairs remaining after dropping zero differences
};

/// Two-sided paired signed-rank test. Zero differences are dropped; average
/// ranks handle ties (and shrink the variance accordingly). The p-value is a
/// normal approximation with continuity correction plus a fourth-moment
/// Edgeworth term, which keeps it within 0.02 of the exact permutation
/// distribution down to n = 6.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

struct MethodGrids {
  std::vector<int> knn_grid = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::vector<double> delta_grid = {0.50, 0.55, 0.60, 0.65, 0.70, 0.75};
  int dynamic_groups = 4;
  int modularity_k = 10;
  int max_k = 100;
};

struct MethodResult {
  std::string direction;     // "src->tgt"
  std::string method;        // "k-NN", "Single Threshold", "Dynamic Threshold"
  std::string best_param;    // winning grid point, for the log
  std::int64_t retrieved = 0;
  double correct_ratio = 0.0;
  double f1 = 0.0;
};

/// Runs each retrieval method at its best grid point by pooled F1 over the
/// given queries: k-NN over knn_grid, a single global threshold over
/// delta_grid, and the calibrated dynamic-threshold policy. Empty grids skip
/// the corresponding method.
std::vector<MethodResult> compare_methods(const BilingualSpace& space,
                                          const std::vector<Query>& queries,
                                          const GroundTruth& truth, const MethodGrids& grids);

/// Expansion run file: query <TAB> rank <TAB> candidate <TAB> language <TAB>
/// similarity, ranks 1-based and ascending per query.
RankedLists load_run(const std::filesystem::path& path);
void save_run(const std::map<std::string, std::vector<Candidate>>& results,
              const std::filesystem::path& path);

std::string render_report_tsv(const EvalReport& report);
std::string render_report_text(const EvalReport& report);
std::string render_comparison_tsv(const std::vector<MethodResult>& rows);

}  // namespace crosslex
