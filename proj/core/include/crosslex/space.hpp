#pragma once

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace crosslex {

/// Row-major so that one word's vector is contiguous in memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline double row_norm(const double* a, int n) { return std::sqrt(dot(a, a, n)); }

/// A language-tagged set of word vectors. Row i belongs to words[i];
/// the word->row index is kept consistent by the factory functions.
struct EmbeddingSpace {
  std::string language_tag;
  std::vector<std::string> words;
  Matrix vectors;
  bool normalized = false;
  std::unordered_map<std::string, int> index;

  int dim() const { return static_cast<int>(vectors.cols()); }
  int size() const { return static_cast<int>(vectors.rows()); }
  const double* row(int i) const { return vectors.data() + static_cast<std::ptrdiff_t>(i) * dim(); }

  std::optional<int> find(const std::string& word) const {
    auto it = index.find(word);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  /// Validates word uniqueness and shape, builds the index.
  static EmbeddingSpace create(std::string language_tag, std::vector<std::string> words,
                               Matrix vectors, bool normalized);
};

/// Union of two (or more) language-tagged spaces: per-row language tags,
/// rows addressed by the (tag, word) pair so surface-form collisions across
/// languages stay distinct.
struct BilingualSpace {
  std::vector<std::string> words;
  std::vector<std::string> tags;  // parallel to words
  Matrix vectors;
  bool normalized = false;
  std::map<std::pair<std::string, std::string>, int> index;  // (tag, word) -> row

  int dim() const { return static_cast<int>(vectors.cols()); }
  int size() const { return static_cast<int>(vectors.rows()); }
  const double* row(int i) const { return vectors.data() + static_cast<std::ptrdiff_t>(i) * dim(); }

  std::optional<int> find(const std::string& tag, const std::string& word) const {
    auto it = index.find({tag, word});
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  /// Distinct language tags in first-appearance row order.
  std::vector<std::string> languages() const;

  static BilingualSpace create(std::vector<std::string> words, std::vector<std::string> tags,
                               Matrix vectors, bool normalized);
};

/// word2vec text format: header "<count> <dim>", then "word v1 .. vd" lines.
/// A sidecar "<path>.meta.json" carries language_tag / normalized when present;
/// externally trained files without a sidecar load with an empty tag and
/// normalized=false.
EmbeddingSpace load_space(const std::filesystem::path& path);
void save_space(const EmbeddingSpace& space, const std::filesystem::path& path);

/// Same text format with "tag:word" tokens (split at the first colon).
BilingualSpace load_bilingual_space(const std::filesystem::path& path);
void save_bilingual_space(const BilingualSpace& space, const std::filesystem::path& path);

/// cos of two stored words: dot(a,b) / (|a||b|).
double cosine(const EmbeddingSpace& space, const std::string& word_a, const std::string& word_b);
double cosine(const BilingualSpace& space, const std::string& tag_a, const std::string& word_a,
              const std::string& tag_b, const std::string& word_b);

/// cos between rows; shared by every retrieval path.
inline double cosine_rows(const double* a, const double* b, int n) {
  return dot(a, b, n) / (row_norm(a, n) * row_norm(b, n));
}

}  // namespace crosslex
