#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "crosslex/space.hpp"
#include "crosslex/truth.hpp"

namespace crosslex {

/// A seed word plus its query direction (own language -> target language).
struct Query {
  std::string word;
  std::string language_tag;
  std::string target_tag;

  /// Canonical "tag:word" key used in query files and ground-truth files.
  std::string key() const { return language_tag + ":" + word; }
};

struct Candidate {
  std::string word;
  std::string language_tag;
  double similarity = 0.0;
};

/// Top-k candidates of the requested language ("any" for all languages) by
/// descending cosine; the query row itself is excluded; ties break by word,
/// then tag. Fewer than k rows available means a shorter list.
std::vector<Candidate> nearest_neighbors(const BilingualSpace& space, const Query& query, int k,
                                         const std::string& target_language);

/// Candidates among the query's top max_k target-language neighbors whose
/// similarity is >= delta.
std::vector<Candidate> expand_threshold(const BilingualSpace& space, const Query& query,
                                        double delta, int max_k = 100);

/// How language-biased the query's neighborhood is: |eta_src - eta_tgt| where
/// eta_src is the mean cosine of the top-k same-language neighbors (query
/// excluded) and eta_tgt the mean over the top-k other-language neighbors.
struct ModularityScore {
  std::string query;
  double m = 0.0;
  double eta_src = 0.0;
  double eta_tgt = 0.0;
  int k = 0;
};

ModularityScore modularity(const BilingualSpace& space, const Query& query, int k);

/// Per-quantile-group similarity cutoffs. group_boundaries[i] is the largest
/// modularity seen in group i during calibration; a query routes to the first
/// group whose boundary covers its modularity, and values above the last
/// boundary fall in the last group.
struct DynamicThresholdPolicy {
  std::vector<double> group_boundaries;  // strictly increasing, one per group
  std::vector<double> group_thresholds;  // delta per group, in [-1, 1]
  int n_groups = 0;
  int k = 0;

  int group_of(double modularity_score) const;
  void validate() const;
};

/// Sorts queries ascending by modularity, splits them into n_groups
/// equal-size quantile groups (remainder spread over the earliest groups) and
/// picks, per group, the delta in delta_grid with the best pooled F1 under
/// expand_threshold (ties -> smallest delta).
DynamicThresholdPolicy calibrate_dynamic_threshold(const BilingualSpace& space,
                                                   const std::vector<Query>& queries,
                                                   const GroundTruth& truth, int n_groups, int k,
                                                   const std::vector<double>& delta_grid,
                                                   int max_k = 100);

/// Computes the query's modularity with the policy's k, routes it to its
/// group and applies that group's threshold.
std::vector<Candidate> expand_dynamic(const BilingualSpace& space, const Query& query,
                                      const DynamicThresholdPolicy& policy, int max_k = 100);

/// TSV with a "k=<k>	n_groups=<n>" header row, then one
/// "boundary_upper<TAB>delta" row per group.
void save_policy(const DynamicThresholdPolicy& policy, const std::filesystem::path& path);
DynamicThresholdPolicy load_policy(const std::filesystem::path& path);

/// Query file: one "language_tag:word" per line; '#' comments ignored.
/// The target language is not encoded in the file; callers resolve it
/// against the space (the other language of a two-language space).
std::vector<Query> load_queries(const std::filesystem::path& path, const BilingualSpace& space);

}  // namespace crosslex
