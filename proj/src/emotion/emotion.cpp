#include "stocksent/emotion.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "stocksent/error.hpp"
#include "stocksent/util.hpp"

namespace stocksent::emotion {
namespace {

std::size_t index_of(Emotion e) { return static_cast<std::size_t>(e); }

std::optional<Emotion> try_emotion(std::string_view name) {
  const auto n = to_lower(trim(name));
  for (Emotion e : kEmotions)
    if (to_string(e) == n) return e;
  return std::nullopt;
}

struct DayKey {
  std::string ticker;
  Date date;
  auto operator<=>(const DayKey&) const = default;
};

std::map<DayKey, std::vector<const TextDocument*>> group_by_day(std::span<const TextDocument> docs) {
  std::map<DayKey, std::vector<const TextDocument*>> groups;
  for (const auto& d : docs) groups[{d.ticker, d.date}].push_back(&d);
  return groups;
}

std::optional<EmotionVector> vector_for(const DayKey& key, const std::vector<const TextDocument*>& docs,
                                        const EmotionLexicon& lexicon, const textprep::PosTagger& tagger) {
  std::vector<textprep::Tokens> tokens;
  tokens.reserve(docs.size());
  for (const auto* d : docs) tokens.push_back(emotion_tokens(d->text, tagger));
  return daily_emotion_vector(key.ticker, key.date, tokens, lexicon);
}

}  // namespace

std::string_view to_string(Emotion e) {
  switch (e) {
    case Emotion::anger: return "anger";
    case Emotion::anticipation: return "anticipation";
    case Emotion::disgust: return "disgust";
    case Emotion::fear: return "fear";
    case Emotion::joy: return "joy";
    case Emotion::sadness: return "sadness";
    case Emotion::surprise: return "surprise";
    case Emotion::trust: return "trust";
  }
  return "?";
}

Emotion parse_emotion(std::string_view name) {
  if (auto e = try_emotion(name)) return *e;
  fail(ErrorKind::config, "unknown emotion '" + std::string(name) +
                              "' (expected anger, anticipation, disgust, fear, joy, sadness, surprise or trust)");
}

Flags gold_mask() {
  Flags m;
  for (Emotion e : {Emotion::joy, Emotion::anger, Emotion::sadness, Emotion::fear, Emotion::disgust})
    m.set(index_of(e));
  return m;
}

void EmotionLexicon::add(std::string_view word, Flags flags) { entries_[to_lower(trim(word))] |= flags; }

Flags EmotionLexicon::flags(std::string_view word) const {
  auto it = entries_.find(to_lower(word));
  return it == entries_.end() ? Flags{} : it->second;
}

bool EmotionLexicon::contains(std::string_view word) const { return entries_.count(to_lower(word)) != 0; }

std::size_t EmotionLexicon::flagged_size() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const auto& kv) { return kv.second.any(); }));
}

EmotionLexicon parse_nrc(std::string_view content) {
  EmotionLexicon lex;
  std::size_t line_no = 0;
  for (auto raw : split(content, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty()) continue;
    auto cols = split(raw, '\t');
    if (cols.size() != 3 || trim(cols[0]).empty())
      fail(ErrorKind::data, "NRC lexicon line " + std::to_string(line_no) + ": expected word<TAB>emotion<TAB>0|1");
    const auto flag = trim(cols[2]);
    if (flag != "0" && flag != "1")
      fail(ErrorKind::data, "NRC lexicon line " + std::to_string(line_no) + ": association must be 0 or 1");
    const auto category = to_lower(trim(cols[1]));
    Flags f;
    if (auto e = try_emotion(category)) {
      if (flag == "1") f.set(index_of(*e));
    } else if (category != "positive" && category != "negative") {
      fail(ErrorKind::data, "NRC lexicon line " + std::to_string(line_no) + ": unknown category '" + category + "'");
    }
    lex.add(cols[0], f);
  }
  return lex;
}

EmotionLexicon load_nrc(const std::filesystem::path& path) {
  try {
    return parse_nrc(read_file(path));
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

EmotionLexicon parse_gold(std::string_view content) {
  const auto rows = parse_csv(content);
  if (rows.empty()) fail(ErrorKind::data, "gold lexicon is empty");
  std::ptrdiff_t word_col = -1;
  std::vector<std::pair<std::size_t, Emotion>> cols;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    const auto h = to_lower(trim(rows[0][i]));
    if (h == "word" || h == "term") word_col = static_cast<std::ptrdiff_t>(i);
    else if (auto e = try_emotion(h)) cols.emplace_back(i, *e);
  }
  if (word_col < 0) fail(ErrorKind::data, "gold lexicon line 1: no word column");
  const Flags mask = gold_mask();
  EmotionLexicon lex;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    if (row.size() != rows[0].size())
      fail(ErrorKind::data, "gold lexicon line " + std::to_string(r + 1) + ": expected " +
                                std::to_string(rows[0].size()) + " fields, got " + std::to_string(row.size()));
    const auto word = trim(row[static_cast<std::size_t>(word_col)]);
    if (word.empty()) fail(ErrorKind::data, "gold lexicon line " + std::to_string(r + 1) + ": empty word");
    Flags f;
    for (const auto& [i, e] : cols) {
      const auto cell = trim(row[i]);
      if (cell.empty()) continue;
      double v;
      try {
        v = parse_double(cell);
      } catch (const Error&) {
        fail(ErrorKind::data, "gold lexicon line " + std::to_string(r + 1) + ": bad value '" + cell + "'");
      }
      if (v > 0) f.set(index_of(e));
    }
    lex.add(word, f & mask);
  }
  return lex;
}

EmotionLexicon load_gold(const std::filesystem::path& path) {
  try {
    return parse_gold(read_file(path));
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

EmotionLexicon merge_lexicons(const EmotionLexicon& nrc, const EmotionLexicon& gold) {
  EmotionLexicon out = nrc;
  const Flags mask = gold_mask();
  for (const auto& [word, flags] : gold.entries()) out.add(word, flags & mask);
  return out;
}

std::size_t etf(Emotion e, std::span<const std::string> doc, const EmotionLexicon& lexicon) {
  const auto bit = index_of(e);
  std::size_t n = 0;
  for (const auto& t : doc)
    if (lexicon.flags(t).test(bit)) ++n;
  return n;
}

std::size_t etf(std::string_view emotion, std::span<const std::string> doc, const EmotionLexicon& lexicon) {
  return etf(parse_emotion(emotion), doc, lexicon);
}

double idf_value(std::size_t n_docs, std::size_t df) {
  if (n_docs == 0) fail(ErrorKind::data, "idf needs at least one document");
  return std::log(static_cast<double>(n_docs) / (1.0 + static_cast<double>(df)));
}

double idf(Emotion e, std::span<const textprep::Tokens> docs, const EmotionLexicon& lexicon) {
  if (docs.empty()) fail(ErrorKind::data, "idf needs at least one document");
  std::size_t df = 0;
  for (const auto& d : docs)
    if (etf(e, d, lexicon) > 0) ++df;
  return idf_value(docs.size(), df);
}

std::optional<EmotionVector> daily_emotion_vector(const std::string& ticker, Date date,
                                                  std::span<const textprep::Tokens> docs,
                                                  const EmotionLexicon& lexicon) {
  if (docs.empty()) return std::nullopt;
  EmotionVector v;
  v.ticker = ticker;
  v.date = date;
  v.doc_count = docs.size();
  std::array<std::size_t, kEmotionCount> total{}, df{};
  for (const auto& d : docs) {
    std::array<std::size_t, kEmotionCount> in_doc{};
    for (const auto& t : d) {
      const Flags f = lexicon.flags(t);
      for (std::size_t i = 0; i < kEmotionCount; ++i)
        if (f.test(i)) ++in_doc[i];
    }
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
      total[i] += in_doc[i];
      if (in_doc[i] > 0) ++df[i];
    }
  }
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    // values[e] = 0 when no document carries e, whatever idf would be.
    v.hits[i] = total[i];
    v.values[i] = total[i] == 0 ? 0.0 : static_cast<double>(total[i]) * idf_value(docs.size(), df[i]);
    if (total[i] > 0) v.no_signal = false;
  }
  return v;
}

textprep::Tokens emotion_tokens(std::string_view text, const textprep::PosTagger& tagger) {
  const auto tokens = textprep::minimal_tokens(text);
  const auto tagged = tagger.tag(tokens);
  return textprep::pos_filter(tagged);
}

std::vector<EmotionVector> daily_vectors(std::span<const TextDocument> docs, const EmotionLexicon& lexicon,
                                         const textprep::PosTagger& tagger) {
  const auto groups = group_by_day(docs);
  std::vector<std::pair<const DayKey*, const std::vector<const TextDocument*>*>> work;
  for (const auto& [k, g] : groups) work.emplace_back(&k, &g);
  std::vector<std::optional<EmotionVector>> slots(work.size());
  const auto n = static_cast<std::ptrdiff_t>(work.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& [k, g] = work[static_cast<std::size_t>(i)];
    slots[static_cast<std::size_t>(i)] = vector_for(*k, *g, lexicon, tagger);
  }
  std::vector<EmotionVector> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

std::vector<EmotionVector> daily_vectors_serial(std::span<const TextDocument> docs, const EmotionLexicon& lexicon,
                                                const textprep::PosTagger& tagger) {
  std::vector<EmotionVector> out;
  for (const auto& [k, g] : group_by_day(docs))
    if (auto v = vector_for(k, g, lexicon, tagger)) out.push_back(std::move(*v));
  return out;
}

std::string vectors_to_jsonl(std::span<const EmotionVector> vectors) {
  std::string out;
  for (const auto& v : vectors) {
    nlohmann::ordered_json j;
    j["ticker"] = v.ticker;
    j["date"] = v.date.iso();
    for (Emotion e : kEmotions) j[std::string(to_string(e))] = v[e];
    j["doc_count"] = v.doc_count;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace stocksent::emotion
