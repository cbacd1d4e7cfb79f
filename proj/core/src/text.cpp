#include "crosslex/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "crosslex/io.hpp"

namespace crosslex {

namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

bool is_ascii_punct(unsigned char c) {
  return c < 0x80 && std::ispunct(c) != 0;
}

// Validates UTF-8 (RFC 3629: no overlongs, no surrogates, max U+10FFFF).
// Returns the byte offset of the first invalid byte, or npos if valid.
std::size_t find_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    unsigned min_cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      min_cp = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      min_cp = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      min_cp = 0x10000;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    unsigned cp = c & (0xFF >> (len + 1));
    for (std::size_t j = 1; j < len; ++j) {
      unsigned char cc = static_cast<unsigned char>(s[i + j]);
      if ((cc & 0xC0) != 0x80) return i + j;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}

bool all_ascii_punct(std::string_view token) {
  for (unsigned char c : token) {
    if (!is_ascii_punct(c)) return false;
  }
  return !token.empty();
}

// Lowercase ASCII letters, strip leading/trailing ASCII punctuation.
std::string clean_whitespace_token(std::string_view raw) {
  std::size_t begin = 0, end = raw.size();
  while (begin < end && is_ascii_punct(static_cast<unsigned char>(raw[begin]))) ++begin;
  while (end > begin && is_ascii_punct(static_cast<unsigned char>(raw[end - 1]))) --end;
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    char c = raw[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

std::vector<std::string_view> split_on_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_ascii_space(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_ascii_space(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

using BigramCounts = std::map<std::pair<std::string, std::string>, std::int64_t>;

BigramCounts count_bigrams(const std::vector<std::vector<std::string>>& documents) {
  BigramCounts counts;
  for (const auto& doc : documents) {
    for (std::size_t i = 0; i + 1 < doc.size(); ++i) {
      ++counts[{doc[i], doc[i + 1]}];
    }
  }
  return counts;
}

std::unordered_map<std::string, std::int64_t> count_tokens(
    const std::vector<std::vector<std::string>>& documents) {
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& doc : documents) {
    for (const auto& tok : doc) ++counts[tok];
  }
  return counts;
}

std::vector<std::string> merge_document(const std::vector<std::string>& doc,
                                        const PhraseModel& model) {
  std::vector<std::string> out;
  out.reserve(doc.size());
  std::size_t i = 0;
  while (i < doc.size()) {
    if (i + 1 < doc.size() && model.contains(doc[i], doc[i + 1])) {
      out.push_back(doc[i] + model.joiner + doc[i + 1]);
      i += 2;
    } else {
      out.push_back(doc[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace

std::int64_t TokenizedCorpus::total_tokens() const {
  std::int64_t total = 0;
  for (const auto& [tok, n] : token_counts) total += n;
  return total;
}

TokenizedCorpus tokenize(std::istream& raw_text, const TokenizerConfig& config) {
  TokenizedCorpus corpus;
  corpus.language_tag = config.language_tag;
  std::string line;
  std::size_t stream_offset = 0;
  while (std::getline(raw_text, line)) {
    const std::size_t raw_bytes = line.size() + 1;  // '\n' eaten by getline
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto bad = find_invalid_utf8(line); bad != std::string_view::npos) {
      throw std::runtime_error("undecodable input: invalid UTF-8 at byte offset " +
                               std::to_string(stream_offset + bad));
    }
    std::vector<std::string> tokens;
    for (auto raw : split_on_spaces(line)) {
      std::string token;
      if (config.mode == TokenizerConfig::Mode::Whitespace) {
        token = clean_whitespace_token(raw);
        if (token.empty()) continue;
      } else {
        if (all_ascii_punct(raw)) continue;
        token.assign(raw);
      }
      if (config.stopwords.count(token)) continue;
      tokens.push_back(std::move(token));
    }
    for (const auto& tok : tokens) ++corpus.token_counts[tok];
    corpus.documents.push_back(std::move(tokens));
    stream_offset += raw_bytes;
  }
  return corpus;
}

TokenizedCorpus tokenize_file(const std::filesystem::path& path, const TokenizerConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return tokenize(in, config);
}

PhraseModel learn_phrases(const TokenizedCorpus& corpus, std::int64_t delta, double threshold,
                          int passes) {
  if (passes < 1) throw std::invalid_argument("learn_phrases: passes must be >= 1");
  if (delta < 0) throw std::invalid_argument("learn_phrases: delta must be >= 0");
  if (corpus.total_tokens() == 0) {
    throw std::invalid_argument("learn_phrases: corpus has zero tokens, cannot build a model");
  }

  PhraseModel model;
  model.delta = delta;
  model.threshold = threshold;

  std::vector<std::vector<std::string>> documents = corpus.documents;
  auto unigrams = corpus.token_counts;
  for (int pass = 0; pass < passes; ++pass) {
    std::int64_t total = 0;
    for (const auto& [tok, n] : unigrams) total += n;
    if (total == 0) break;

    PhraseModel pass_model;
    pass_model.joiner = model.joiner;
    for (const auto& [bigram, count] : count_bigrams(documents)) {
      const double numer = static_cast<double>(count - delta);
      const double denom = static_cast<double>(unigrams.at(bigram.first)) *
                           static_cast<double>(unigrams.at(bigram.second));
      const double score = numer / denom * static_cast<double>(total);
      if (score > threshold) {
        pass_model.bigram_scores[bigram] = score;
        model.bigram_scores.insert({bigram, score});
      }
    }
    if (pass_model.bigram_scores.empty()) break;
    if (pass + 1 < passes) {
      for (auto& doc : documents) doc = merge_document(doc, pass_model);
      unigrams = count_tokens(documents);
    }
  }
  return model;
}

TokenizedCorpus apply_phrases(const TokenizedCorpus& corpus, const PhraseModel& model) {
  TokenizedCorpus out;
  out.language_tag = corpus.language_tag;
  out.documents.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    auto merged = merge_document(doc, model);
    for (const auto& tok : merged) ++out.token_counts[tok];
    out.documents.push_back(std::move(merged));
  }
  return out;
}

void save_phrase_model(const PhraseModel& model, const std::filesystem::path& path) {
  std::string out;
  for (const auto& [bigram, score] : model.bigram_scores) {
    out += bigram.first;
    out += '\t';
    out += bigram.second;
    out += '\t';
    out += format_double(score);
    out += '\n';
  }
  write_file(path, out);
}

PhraseModel load_phrase_model(const std::filesystem::path& path) {
  PhraseModel model;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = split(lines[i], '\t');
    if (fields.size() != 3) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) +
                               ": expected 3 tab-separated fields");
    }
    double score = parse_double(fields[2], path.string() + " line " + std::to_string(i + 1));
    model.bigram_scores[{std::string(fields[0]), std::string(fields[1])}] = score;
  }
  return model;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::unordered_set<std::string> out;
  for (const auto& line : read_lines(path)) {
    if (!line.empty()) out.insert(line);
  }
  return out;
}

const std::unordered_set<std::string>& default_english_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a",    "an",  "and",  "are", "as",   "at",   "be",   "but", "by",   "for",
      "from", "had", "has",  "have", "he",  "her",  "his",  "i",   "if",   "in",
      "is",   "it",  "its",  "my",  "not",  "of",   "on",   "or",  "she",  "so",
      "that", "the", "they", "this", "to",  "was",  "were", "will", "with", "you"};
  return words;
}

}  // namespace crosslex
