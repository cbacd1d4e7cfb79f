#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace crosslex {

struct TokenizerConfig {
  enum class Mode {
    Whitespace,    // split on whitespace, lowercase ASCII, strip edge punctuation
    Pretokenized,  // one token per whitespace-separated unit, taken verbatim
  };
  Mode mode = Mode::Whitespace;
  std::string language_tag;
  std::unordered_set<std::string> stopwords;  // default: no filtering
};

/// Cleaned corpus: one token sequence per input document plus corpus-wide counts.
struct TokenizedCorpus {
  std::vector<std::vector<std::string>> documents;
  std::string language_tag;
  std::unordered_map<std::string, std::int64_t> token_counts;

  std::int64_t total_tokens() const;
};

/// One document per line. Input must be valid UTF-8; an undecodable byte
/// raises with its absolute byte offset.
TokenizedCorpus tokenize(std::istream& raw_text, const TokenizerConfig& config);
TokenizedCorpus tokenize_file(const std::filesystem::path& path, const TokenizerConfig& config);

/// Learned bigram merge table. score(a,b) =
///   (count(a,b) - delta) / (count(a) * count(b)) * corpus_token_total
/// and only bigrams with score > threshold are kept.
struct PhraseModel {
  std::map<std::pair<std::string, std::string>, double> bigram_scores;
  std::int64_t delta = 5;
  double threshold = 10.0;
  std::string joiner = "_";

  bool contains(const std::string& a, const std::string& b) const {
    return bigram_scores.find({a, b}) != bigram_scores.end();
  }
};

/// Scores adjacent-token bigrams; each extra pass rescans the corpus with the
/// merges found so far applied, so `passes` passes can build phrases of up to
/// 2^passes tokens. The returned model is the union over passes.
PhraseModel learn_phrases(const TokenizedCorpus& corpus, std::int64_t delta, double threshold,
                          int passes);

/// One greedy left-to-right merge sweep: at each position, if (current, next)
/// is a known bigram, emit "current<joiner>next" and advance by two. Apply
/// repeatedly to realize phrases learned with multiple passes.
TokenizedCorpus apply_phrases(const TokenizedCorpus& corpus, const PhraseModel& model);

/// TSV rows: token_a <TAB> token_b <TAB> score.
void save_phrase_model(const PhraseModel& model, const std::filesystem::path& path);
PhraseModel load_phrase_model(const std::filesystem::path& path);

/// One token per line.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

/// Small built-in list for English; other languages default to empty.
const std::unordered_set<std::string>& default_english_stopwords();

}  // namespace crosslex
