#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>

namespace crosslex {

/// Labeled (query, candidate) relevance judgments. Queries are written in the
/// "tag:word" form used by query files; candidates are bare surface forms.
/// Pairs never labeled count as non-relevant.
struct GroundTruth {
  std::map<std::pair<std::string, std::string>, bool> labels;
  std::map<std::string, int> per_query_relevant;  // relevant count in the annotated pool

  void add(const std::string& query, const std::string& candidate, bool relevant);

  bool has_query(const std::string& query) const {
    return per_query_relevant.find(query) != per_query_relevant.end();
  }
  bool relevant(const std::string& query, const std::string& candidate) const {
    auto it = labels.find({query, candidate});
    return it != labels.end() && it->second;
  }
  int relevant_count(const std::string& query) const {
    auto it = per_query_relevant.find(query);
    return it == per_query_relevant.end() ? 0 : it->second;
  }
};

/// TSV: query <TAB> candidate <TAB> 0|1. '#' comments and blank lines ignored.
GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);

}  // namespace crosslex
