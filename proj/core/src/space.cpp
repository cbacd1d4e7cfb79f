#include "crosslex/space.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "crosslex/io.hpp"

namespace crosslex {

namespace {

void check_shape(std::size_t n_words, const Matrix& vectors) {
  if (static_cast<std::size_t>(vectors.rows()) != n_words) {
    throw std::invalid_argument("embedding space: " + std::to_string(n_words) + " words but " +
                                std::to_string(vectors.rows()) + " vector rows");
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".meta.json");
}

struct ParsedVectors {
  std::vector<std::string> tokens;
  Matrix vectors;
};

// Shared word2vec-text parser; duplicate detection happens in the callers
// where the key (word vs tag:word) is known.
ParsedVectors parse_vector_file(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": empty file");
  auto header = split(lines[0], ' ');
  if (header.size() != 2) {
    throw std::runtime_error(path.string() + ": malformed header '" + lines[0] +
                             "' (expected '<count> <dim>')");
  }
  const std::int64_t count = parse_count(header[0], path.string() + ": header count");
  const std::int64_t dim = parse_count(header[1], path.string() + ": header dim");
  if (dim < 1) throw std::runtime_error(path.string() + ": header dim must be >= 1");
  if (static_cast<std::int64_t>(lines.size()) - 1 != count) {
    throw std::runtime_error(path.string() + ": header promises " + std::to_string(count) +
                             " rows, file has " + std::to_string(lines.size() - 1));
  }

  ParsedVectors out;
  out.tokens.reserve(count);
  out.vectors.resize(count, dim);
  for (std::int64_t i = 0; i < count; ++i) {
    const std::string& line = lines[i + 1];
    auto fields = split(line, ' ');
    if (static_cast<std::int64_t>(fields.size()) != dim + 1) {
      throw std::runtime_error(path.string() + ": parse error at line " + std::to_string(i + 2) +
                               ": expected 1 word + " + std::to_string(dim) + " values, got " +
                               std::to_string(fields.size()) + " fields");
    }
    if (fields[0].empty()) {
      throw std::runtime_error(path.string() + ": empty word at line " + std::to_string(i + 2));
    }
    out.tokens.emplace_back(fields[0]);
    for (std::int64_t j = 0; j < dim; ++j) {
      out.vectors(i, j) = parse_double(fields[j + 1], path.string() + " line " + std::to_string(i + 2));
    }
  }
  return out;
}

std::string render_vector_file(const std::vector<std::string>& tokens, const Matrix& vectors) {
  std::string out;
  out.reserve(tokens.size() * (16 + 12 * static_cast<std::size_t>(vectors.cols())));
  out += std::to_string(tokens.size());
  out += ' ';
  out += std::to_string(vectors.cols());
  out += '\n';
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += tokens[i];
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
      out += ' ';
      out += format_double(vectors(static_cast<Eigen::Index>(i), j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

EmbeddingSpace EmbeddingSpace::create(std::string language_tag, std::vector<std::string> words,
                                      Matrix vectors, bool normalized) {
  check_shape(words.size(), vectors);
  EmbeddingSpace space;
  space.language_tag = std::move(language_tag);
  space.words = std::move(words);
  space.vectors = std::move(vectors);
  space.normalized = normalized;
  space.index.reserve(space.words.size());
  for (std::size_t i = 0; i < space.words.size(); ++i) {
    auto [it, inserted] = space.index.emplace(space.words[i], static_cast<int>(i));
    if (!inserted) {
      throw std::invalid_argument("duplicate word '" + space.words[i] + "' in embedding space");
    }
  }
  return space;
}

std::vector<std::string> BilingualSpace::languages() const {
  std::vector<std::string> out;
  for (const auto& tag : tags) {
    bool seen = false;
    for (const auto& t : out) {
      if (t == tag) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(tag);
  }
  return out;
}

BilingualSpace BilingualSpace::create(std::vector<std::string> words, std::vector<std::string> tags,
                                      Matrix vectors, bool normalized) {
  check_shape(words.size(), vectors);
  if (words.size() != tags.size()) {
    throw std::invalid_argument("bilingual space: words and tags differ in length");
  }
  BilingualSpace space;
  space.words = std::move(words);
  space.tags = std::move(tags);
  space.vectors = std::move(vectors);
  space.normalized = normalized;
  for (std::size_t i = 0; i < space.words.size(); ++i) {
    auto [it, inserted] =
        space.index.emplace(std::make_pair(space.tags[i], space.words[i]), static_cast<int>(i));
    if (!inserted) {
      throw std::invalid_argument("duplicate word '" + space.tags[i] + ":" + space.words[i] +
                                  "' in bilingual space");
    }
  }
  return space;
}

EmbeddingSpace load_space(const std::filesystem::path& path) {
  auto parsed = parse_vector_file(path);
  std::string tag;
  bool normalized = false;
  auto meta = sidecar_path(path);
  if (std::filesystem::exists(meta)) {
    std::ifstream in(meta);
    nlohmann::json j;
    in >> j;
    tag = j.value("language_tag", std::string{});
    normalized = j.value("normalized", false);
  }
  return EmbeddingSpace::create(std::move(tag), std::move(parsed.tokens), std::move(parsed.vectors),
                                normalized);
}

void save_space(const EmbeddingSpace& space, const std::filesystem::path& path) {
  write_file(path, render_vector_file(space.words, space.vectors));
  nlohmann::json j;
  j["language_tag"] = space.language_tag;
  j["normalized"] = space.normalized;
  write_file(sidecar_path(path), j.dump(2) + "\n");
}

BilingualSpace load_bilingual_space(const std::filesystem::path& path) {
  auto parsed = parse_vector_file(path);
  std::vector<std::string> words, tags;
  words.reserve(parsed.tokens.size());
  tags.reserve(parsed.tokens.size());
  for (std::size_t i = 0; i < parsed.tokens.size(); ++i) {
    const std::string& token = parsed.tokens[i];
    auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 2) +
                               ": expected 'tag:word', got '" + token + "'");
    }
    tags.push_back(token.substr(0, colon));
    words.push_back(token.substr(colon + 1));
  }
  bool normalized = false;
  auto meta = sidecar_path(path);
  if (std::filesystem::exists(meta)) {
    std::ifstream in(meta);
    nlohmann::json j;
    in >> j;
    normalized = j.value("normalized", false);
  }
  return BilingualSpace::create(std::move(words), std::move(tags), std::move(parsed.vectors),
                                normalized);
}

void save_bilingual_space(const BilingualSpace& space, const std::filesystem::path& path) {
  std::vector<std::string> tokens;
  tokens.reserve(space.words.size());
  for (std::size_t i = 0; i < space.words.size(); ++i) {
    tokens.push_back(space.tags[i] + ":" + space.words[i]);
  }
  write_file(path, render_vector_file(tokens, space.vectors));
  nlohmann::json j;
  j["languages"] = space.languages();
  j["normalized"] = space.normalized;
  write_file(sidecar_path(path), j.dump(2) + "\n");
}

double cosine(const EmbeddingSpace& space, const std::string& word_a, const std::string& word_b) {
  auto a = space.find(word_a);
  if (!a) throw std::invalid_argument("word '" + word_a + "' not in space '" + space.language_tag + "'");
  auto b = space.find(word_b);
  if (!b) throw std::invalid_argument("word '" + word_b + "' not in space '" + space.language_tag + "'");
  return cosine_rows(space.row(*a), space.row(*b), space.dim());
}

double cosine(const BilingualSpace& space, const std::string& tag_a, const std::string& word_a,
              const std::string& tag_b, const std::string& word_b) {
  auto a = space.find(tag_a, word_a);
  if (!a) throw std::invalid_argument("word '" + tag_a + ":" + word_a + "' not in bilingual space");
  auto b = space.find(tag_b, word_b);
  if (!b) throw std::invalid_argument("word '" + tag_b + ":" + word_b + "' not in bilingual space");
  return cosine_rows(space.row(*a), space.row(*b), space.dim());
}

}  // namespace crosslex
