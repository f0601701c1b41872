#pragma once

#include <array>
#include <bitset>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stocksent/document.hpp"
#include "stocksent/textprep.hpp"

namespace stocksent::emotion {

enum class Emotion { anger, anticipation, disgust, fear, joy, sadness, surprise, trust };
inline constexpr std::size_t kEmotionCount = 8;
inline constexpr std::array<Emotion, kEmotionCount> kEmotions{
    Emotion::anger, Emotion::anticipation, Emotion::disgust, Emotion::fear,
    Emotion::joy,   Emotion::sadness,      Emotion::surprise, Emotion::trust};

std::string_view to_string(Emotion e);
/// Throws Error(config) for an unknown label.
Emotion parse_emotion(std::string_view name);

using Flags = std::bitset<kEmotionCount>;  // bit i <-> kEmotions[i]

/// The five emotions the gold-standard source annotates.
Flags gold_mask();

class EmotionLexicon {
 public:
  /// OR-s `flags` into the entry for `word` (case-folded), creating it if needed.
  void add(std::string_view word, Flags flags);

  /// Zero flags for unknown words.
  Flags flags(std::string_view word) const;
  bool contains(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  /// Entries with at least one emotion; unflagged words are kept so the union count is source-faithful.
  std::size_t flagged_size() const;
  const std::unordered_map<std::string, Flags>& entries() const { return entries_; }

  friend bool operator==(const EmotionLexicon&, const EmotionLexicon&) = default;

 private:
  std::unordered_map<std::string, Flags> entries_;
};

/// NRC word-level TSV `word<TAB>emotion<TAB>0|1`. Sentiment rows (positive/negative) are ignored but
/// their words still count as entries. Errors cite the 1-based line.
EmotionLexicon load_nrc(const std::filesystem::path& path);
EmotionLexicon parse_nrc(std::string_view content);
/// CSV with a `word` column and per-emotion columns; a value > 0 sets the flag. Only the five gold
/// emotions are kept.
EmotionLexicon load_gold(const std::filesystem::path& path);
EmotionLexicon parse_gold(std::string_view content);

/// Union keyed by word; gold flags outside gold_mask() are nulled first; shared words OR their flags.
EmotionLexicon merge_lexicons(const EmotionLexicon& nrc, const EmotionLexicon& gold);

/// Occurrences of `e`-flagged terms in `doc`, counted with multiplicity.
std::size_t etf(Emotion e, std::span<const std::string> doc, const EmotionLexicon& lexicon);
std::size_t etf(std::string_view emotion, std::span<const std::string> doc, const EmotionLexicon& lexicon);

/// ln(N / (1 + df)), df = documents containing at least one `e` term. Throws on N = 0.
double idf(Emotion e, std::span<const textprep::Tokens> docs, const EmotionLexicon& lexicon);
double idf_value(std::size_t n_docs, std::size_t df);

struct EmotionVector {
  std::string ticker;
  Date date;
  std::array<double, kEmotionCount> values{};       // indexed like kEmotions
  std::array<std::size_t, kEmotionCount> hits{};    // summed etf; 0 = no signal for that emotion
  std::size_t doc_count = 0;
  bool no_signal = true;  // no lexicon hit in any document

  double operator[](Emotion e) const { return values[static_cast<std::size_t>(e)]; }
  friend bool operator==(const EmotionVector&, const EmotionVector&) = default;
};

/// `docs` are one (ticker, date)'s POS-filtered token lists. nullopt when there are none.
std::optional<EmotionVector> daily_emotion_vector(const std::string& ticker, Date date,
                                                  std::span<const textprep::Tokens> docs,
                                                  const EmotionLexicon& lexicon);

/// Tokens fed to the emotion stage: tag minimally processed text, keep ADJ/ADV/INTJ.
textprep::Tokens emotion_tokens(std::string_view text, const textprep::PosTagger& tagger);

/// Groups documents by (ticker, date) and emits one vector per non-empty group, sorted by ticker then
/// date. Parallel over groups.
std::vector<EmotionVector> daily_vectors(std::span<const TextDocument> docs, const EmotionLexicon& lexicon,
                                         const textprep::PosTagger& tagger);
std::vector<EmotionVector> daily_vectors_serial(std::span<const TextDocument> docs, const EmotionLexicon& lexicon,
                                                const textprep::PosTagger& tagger);

/// `{ticker, date, anger, ..., trust, doc_count}` per line, fields in that order.
std::string vectors_to_jsonl(std::span<const EmotionVector> vectors);

}  // namespace stocksent::emotion
