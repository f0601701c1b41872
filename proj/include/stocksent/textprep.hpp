#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stocksent/document.hpp"

namespace stocksent::textprep {

using Tokens = std::vector<std::string>;
using WordSet = std::unordered_set<std::string>;                   // keys case-folded
using WordMap = std::unordered_map<std::string, std::string>;      // keys case-folded

/// One entry per line; only the first tab-separated column is used. `#` starts a comment line.
WordSet load_word_set(const std::filesystem::path& path);
/// `surface<TAB>replacement` per line.
WordMap load_word_map(const std::filesystem::path& path);

/// Negation words that no stage ever drops as stopwords.
bool is_negator(std::string_view token);

// ---- spelling ----

class SpellingDictionary {
 public:
  SpellingDictionary() = default;
  /// `word<TAB>count` per line.
  static SpellingDictionary load(const std::filesystem::path& path);
  void add(std::string_view word, long long count);

  bool contains(std::string_view word) const;
  long long frequency(std::string_view word) const;  // 0 when absent
  std::size_t size() const { return counts_.size(); }

  /// Nearest tier first (distance 1, then 2), then highest frequency, then alphabetical.
  /// Matching is case-insensitive; the dictionary's casing is returned. Non-alphabetic tokens,
  /// known words and tokens with no candidate come back unchanged.
  std::string correct(std::string_view token) const;

 private:
  std::unordered_map<std::string, long long> counts_;
  std::unordered_map<std::string, std::string> display_;  // folded -> stored casing
};

// ---- pluggable stages ----

class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma(std::string_view token) const = 0;
};

/// Noun plurals and a small irregular table. Case-sensitive: only lowercase words are touched.
class RuleLemmatizer final : public Lemmatizer {
 public:
  std::string lemma(std::string_view token) const override;
};

/// Porter (1980) suffix stripper over lowercase ASCII words; anything else is returned as is.
std::string porter_stem(std::string_view word);

enum class Pos { noun, verb, adj, adv, intj, pron, det, adp, conj, num, part, other };
std::string_view to_string(Pos pos);

struct TaggedToken {
  std::string text;
  std::optional<Pos> tag;
};

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<TaggedToken> tag(std::span<const std::string> tokens) const = 0;
};

/// Lexicon lookup (`word<TAB>TAG`) with suffix rules as fallback.
class RuleTagger final : public PosTagger {
 public:
  RuleTagger();  // built-in closed-class lexicon only
  explicit RuleTagger(const std::filesystem::path& lexicon);
  std::vector<TaggedToken> tag(std::span<const std::string> tokens) const override;
  Pos tag_word(std::string_view word) const;

 private:
  std::unordered_map<std::string, Pos> lexicon_;
};

/// Keeps adjectives, adverbs and interjections in order. Throws Error(data) on an untagged token.
Tokens pos_filter(std::span<const TaggedToken> tokens);

// ---- pipeline ----

enum class Mode { generic, twitter, lm };
std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

struct PrepConfig {
  Mode mode = Mode::generic;
  WordSet stopwords;
  WordMap slang;
  WordMap contractions;
  std::shared_ptr<const SpellingDictionary> speller;    // required in twitter mode
  std::shared_ptr<const Lemmatizer> lemmatizer;         // null: RuleLemmatizer

  // Stage switches follow from the mode.
  bool replaces_slang() const { return mode == Mode::twitter; }
  bool expands_contractions() const { return mode == Mode::twitter; }
  bool corrects_spelling() const { return mode == Mode::twitter; }
  bool stems() const { return mode == Mode::lm; }

  /// Throws Error(config) listing every problem.
  void validate() const;
};

/// Loads stopwords.tsv, slang.tsv, contractions.tsv and spelling_freq.tsv from `data_dir`.
PrepConfig load_config(Mode mode, const std::filesystem::path& data_dir);

struct PrepResult {
  Tokens tokens;
  std::size_t input_tokens = 0;     // word pieces after punctuation stripping
  std::size_t expansion_tokens = 0; // extra tokens introduced by slang/contraction maps
};

/// Lemma (and in lm mode Porter stem) applied to a fixpoint; capitalization is not checked here.
std::string normalize_word(std::string_view word, Mode mode, const Lemmatizer* lemmatizer = nullptr);

/// Punctuation, unicode and URL stripping, hashtag removal and '@' glyph removal only.
/// Case is kept and nothing is dropped as a stopword; this is the tagger's input.
Tokens minimal_tokens(std::string_view text);

/// Slang then contraction expansion, exposed for inspection.
Tokens expand(std::span<const std::string> tokens, const WordMap& map, std::size_t* added = nullptr);

PrepResult preprocess_detailed(std::string_view text, const PrepConfig& cfg);
Tokens preprocess(std::string_view text, const PrepConfig& cfg);
Tokens preprocess(const TextDocument& doc, const PrepConfig& cfg);

/// Parallel over documents.
std::vector<Tokens> preprocess_corpus(std::span<const TextDocument> docs, const PrepConfig& cfg);
std::vector<Tokens> preprocess_corpus_serial(std::span<const TextDocument> docs, const PrepConfig& cfg);

}  // namespace stocksent::textprep
