#include "crosslex/truth.hpp"

#include <stdexcept>

#include "crosslex/io.hpp"

namespace crosslex {

void GroundTruth::add(const std::string& query, const std::string& candidate, bool relevant) {
  auto [it, inserted] = labels.emplace(std::make_pair(query, candidate), relevant);
  if (!inserted) {
    if (it->second != relevant) {
      throw std::invalid_argument("ground truth: conflicting labels for ('" + query + "', '" +
                                  candidate + "')");
    }
    return;  // exact duplicate, keep counts consistent
  }
  auto& count = per_query_relevant[query];
  if (relevant) ++count;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  GroundTruth truth;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) +
                               ": expected 'query<TAB>candidate<TAB>0|1'");
    }
    bool relevant;
    if (fields[2] == "1") {
      relevant = true;
    } else if (fields[2] == "0") {
      relevant = false;
    } else {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) +
                               ": label must be 0 or 1, got '" + std::string(fields[2]) + "'");
    }
    truth.add(std::string(fields[0]), std::string(fields[1]), relevant);
  }
  return truth;
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::string out;
  for (const auto& [pair, relevant] : truth.labels) {
    out += pair.first;
    out += '\t';
    out += pair.second;
    out += '\t';
    out += relevant ? '1' : '0';
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace crosslex
