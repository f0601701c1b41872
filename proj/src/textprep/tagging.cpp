#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "stocksent/error.hpp"
#include "stocksent/textprep.hpp"
#include "stocksent/util.hpp"

namespace stocksent::textprep {
namespace {

bool lower_alpha(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

const std::unordered_map<std::string_view, std::string_view>& irregular_plurals() {
  static const std::unordered_map<std::string_view, std::string_view> m{
      {"men", "man"},     {"women", "woman"}, {"children", "child"}, {"feet", "foot"},  {"teeth", "tooth"},
      {"geese", "goose"}, {"mice", "mouse"},  {"lives", "life"},     {"wives", "wife"}, {"knives", "knife"},
      {"leaves", "leaf"}, {"halves", "half"}, {"shelves", "shelf"},  {"wolves", "wolf"}, {"crises", "crisis"},
      {"analyses", "analysis"}, {"theses", "thesis"}, {"indices", "index"}, {"criteria", "criterion"},
  };
  return m;
}

// Words ending in s that are not plurals.
const std::unordered_set<std::string_view>& invariant_s() {
  static const std::unordered_set<std::string_view> s{
      "news",    "series",  "species", "always",   "perhaps", "has",      "was",     "does",    "is",
      "this",    "its",     "his",     "hers",     "ours",    "yours",    "theirs",  "yes",     "thus",
      "plus",    "gas",     "bias",    "chaos",    "lens",    "politics", "economics", "physics", "mathematics",
      "whereas", "besides", "towards", "afterwards", "nevertheless", "less",  "unless",  "across",  "various",
      "famous",  "serious", "previous", "us",      "bus",     "status",   "focus",   "virus",   "bonus",
      "census",  "consensus", "campus", "basis",   "thesis",  "analysis", "crisis",  "emphasis", "axis",
  };
  return s;
}

const std::unordered_map<std::string_view, Pos>& builtin_lexicon() {
  static const std::unordered_map<std::string_view, Pos> m = [] {
    std::unordered_map<std::string_view, Pos> out;
    auto add = [&](Pos p, std::initializer_list<std::string_view> ws) {
      for (auto w : ws) out.emplace(w, p);
    };
    add(Pos::det, {"the", "a", "an", "this", "that", "these", "those", "each", "every", "some", "any", "all",
                   "both", "either", "neither", "no", "another", "such"});
    add(Pos::pron, {"i", "me", "my", "mine", "we", "us", "our", "ours", "you", "your", "yours", "he", "him",
                    "his", "she", "her", "hers", "it", "its", "they", "them", "their", "theirs", "who", "whom",
                    "whose", "which", "what", "myself", "itself", "themselves", "ourselves", "yourself"});
    add(Pos::adp, {"in", "on", "at", "by", "for", "with", "about", "against", "between", "into", "through",
                   "during", "before", "after", "above", "below", "to", "from", "up", "down", "of", "off",
                   "over", "under", "without", "within", "across", "despite", "amid", "than"});
    add(Pos::conj, {"and", "or", "but", "nor", "so", "yet", "because", "although", "though", "while", "if",
                    "unless", "whereas", "whether"});
    add(Pos::part, {"not", "n't", "to"});
    add(Pos::verb, {"is", "am", "are", "was", "were", "be", "been", "being", "have", "has", "had", "do",
                    "does", "did", "will", "would", "shall", "should", "can", "could", "may", "might", "must",
                    "say", "said", "says", "rose", "fell", "rise", "fall", "falls", "rises", "gain", "gains",
                    "drop", "drops", "beat", "beats", "miss", "misses", "report", "reports", "buy", "sell"});
    add(Pos::adv, {"very", "really", "too", "quite", "almost", "always", "never", "often", "sometimes",
                   "soon", "now", "then", "here", "there", "again", "still", "already", "just", "even",
                   "also", "well", "much", "more", "most", "less", "least", "rather", "ever", "yesterday",
                   "today", "tomorrow", "once", "twice", "however", "therefore", "instead", "else"});
    add(Pos::adj, {"good", "bad", "great", "high", "low", "new", "old", "big", "small", "strong", "weak",
                   "happy", "sad", "angry", "glad", "afraid", "fine", "poor", "rich", "long", "short", "large",
                   "huge", "tiny", "best", "worst", "better", "worse", "higher", "lower", "bullish", "bearish",
                   "upbeat", "grim", "bleak", "solid", "weak", "sharp", "steep", "volatile", "calm", "mad",
                   "sick", "scared", "proud", "eager", "keen", "nervous", "anxious", "gloomy", "cheerful",
                   "awful", "terrible", "horrible", "excellent", "amazing", "wonderful", "disgusting", "nasty",
                   "furious", "upset", "worried", "hopeful", "fearful", "joyful", "miserable", "dismal",
                   "robust", "stellar", "dire", "fragile", "rosy", "sour", "sluggish", "brisk", "flat"});
    add(Pos::intj, {"wow", "oh", "ouch", "yay", "hooray", "alas", "ugh", "oops", "whoa", "yikes", "hmm", "meh",
                    "ha", "haha", "lol", "omg", "hey", "woah", "bravo", "damn", "phew", "yippee", "boo"});
    return out;
  }();
  return m;
}

Pos parse_pos(std::string_view tag) {
  static const std::unordered_map<std::string, Pos> m{
      {"NOUN", Pos::noun}, {"VERB", Pos::verb}, {"ADJ", Pos::adj},   {"ADV", Pos::adv},
      {"INTJ", Pos::intj}, {"PRON", Pos::pron}, {"DET", Pos::det},   {"ADP", Pos::adp},
      {"CONJ", Pos::conj}, {"NUM", Pos::num},   {"PART", Pos::part}, {"X", Pos::other},
  };
  auto it = m.find(std::string(tag));
  if (it == m.end()) fail(ErrorKind::data, "unknown POS tag '" + std::string(tag) + "'");
  return it->second;
}

}  // namespace

std::string RuleLemmatizer::lemma(std::string_view token) const {
  std::string w(token);
  if (!lower_alpha(w) || w.size() <= 3) return w;
  if (auto it = irregular_plurals().find(w); it != irregular_plurals().end()) return std::string(it->second);
  if (invariant_s().count(w)) return w;
  auto ends = [&](std::string_view s) { return w.size() > s.size() && std::string_view(w).ends_with(s); };
  if (ends("ss") || ends("us") || ends("is") || ends("ous")) return w;
  if (ends("ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends("sses") || ends("xes") || ends("ches") || ends("shes") || ends("zzes")) return w.substr(0, w.size() - 2);
  if (ends("s")) return w.substr(0, w.size() - 1);
  return w;
}

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::noun: return "NOUN";
    case Pos::verb: return "VERB";
    case Pos::adj: return "ADJ";
    case Pos::adv: return "ADV";
    case Pos::intj: return "INTJ";
    case Pos::pron: return "PRON";
    case Pos::det: return "DET";
    case Pos::adp: return "ADP";
    case Pos::conj: return "CONJ";
    case Pos::num: return "NUM";
    case Pos::part: return "PART";
    case Pos::other: return "X";
  }
  return "X";
}

RuleTagger::RuleTagger() {
  for (const auto& [w, p] : builtin_lexicon()) lexicon_.emplace(std::string(w), p);
}

RuleTagger::RuleTagger(const std::filesystem::path& lexicon) : RuleTagger() {
  const auto content = read_file(lexicon);
  std::size_t line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2)
      fail(ErrorKind::data, lexicon.string() + ": line " + std::to_string(line_no) + ": expected word<TAB>TAG");
    lexicon_[to_lower(trim(cols[0]))] = parse_pos(trim(cols[1]));
  }
}

Pos RuleTagger::tag_word(std::string_view word) const {
  const auto w = to_lower(word);
  if (auto it = lexicon_.find(w); it != lexicon_.end()) return it->second;
  if (w.empty()) return Pos::other;
  if (std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c) || c == '.' || c == ','; }))
    return Pos::num;
  if (w.ends_with("n't")) return Pos::part;
  auto ends = [&](std::string_view s) { return w.size() > s.size() + 1 && w.ends_with(s); };
  if (ends("ly")) return Pos::adv;
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ic", "ical", "est", "ary"})
    if (ends(s)) return Pos::adj;
  if (ends("ing") || ends("ed")) return Pos::verb;
  return Pos::noun;
}

std::vector<TaggedToken> RuleTagger::tag(std::span<const std::string> tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back({t, tag_word(t)});
  return out;
}

Tokens pos_filter(std::span<const TaggedToken> tokens) {
  Tokens out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (!t.tag)
      fail(ErrorKind::data, "token " + std::to_string(i) + " ('" + t.text +
                                "') has no part-of-speech tag; run a PosTagger over minimal_tokens() first");
    if (*t.tag == Pos::adj || *t.tag == Pos::adv || *t.tag == Pos::intj) out.push_back(t.text);
  }
  return out;
}

}  // namespace stocksent::textprep
