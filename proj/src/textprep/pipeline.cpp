#include <algorithm>
#include <cctype>
#include <regex>

#include "stocksent/error.hpp"
#include "stocksent/textprep.hpp"
#include "stocksent/util.hpp"

namespace stocksent::textprep {
namespace {

constexpr int kMaxNormalizeRounds = 16;

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> out;
  for (auto& line : split(read_file(path), '\n')) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    out.push_back(std::move(line));
  }
  return out;
}

bool is_url(std::string_view core) {
  static const std::regex domain(
      R"(^([a-z0-9-]+\.)+(com|net|org|io|co|ly|gov|edu|info|biz|me|us|uk|de|ai|app|ca|in)(/\S*)?$)");
  const auto w = to_lower(core);
  if (w.starts_with("http://") || w.starts_with("https://") || w.starts_with("ftp://") || w.starts_with("www."))
    return true;
  if (w.find("://") != std::string::npos) return true;
  return std::regex_match(w, domain);
}

bool is_open(char c) { return c == '(' || c == '[' || c == '{' || c == '"' || c == '\'' || c == '<'; }
bool is_close(char c) {
  return c == ')' || c == ']' || c == '}' || c == '"' || c == '\'' || c == '>' || c == '.' || c == ',' ||
         c == ';' || c == ':' || c == '!' || c == '?';
}

std::string_view core_of(std::string_view t) {
  while (!t.empty() && is_open(t.front())) t.remove_prefix(1);
  while (!t.empty() && is_close(t.back())) t.remove_suffix(1);
  return t;
}

// Curly quotes become ASCII before the non-ASCII sweep so "won’t" survives as "won't".
std::string ascii_quotes(std::string_view t) {
  std::string out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i + 2 < t.size() && static_cast<unsigned char>(t[i]) == 0xE2 && static_cast<unsigned char>(t[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(t[i + 2]) == 0x98 || static_cast<unsigned char>(t[i + 2]) == 0x99)) {
      out += '\'';
      i += 2;
    } else {
      out += t[i];
    }
  }
  return out;
}

void blank_entities(std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') continue;
    std::size_t j = i + 1;
    if (j < s.size() && s[j] == '#') ++j;
    std::size_t start = j;
    while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
    if (j > start && j < s.size() && s[j] == ';') std::fill(s.begin() + static_cast<std::ptrdiff_t>(i),
                                                            s.begin() + static_cast<std::ptrdiff_t>(j) + 1, ' ');
  }
}

bool alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::string strip_punctuation(const std::string& s) {
  std::string out(s.size(), ' ');
  for (std::size_t i = 0; i < s.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (c >= 0x80) continue;  // unicode artifacts and emoji
    if (std::isalnum(c)) {
      out[i] = s[i];
    } else if (c == '\'' && i > 0 && i + 1 < s.size() && alpha(s[i - 1]) && alpha(s[i + 1])) {
      out[i] = '\'';
    }
  }
  return out;
}

bool capitalized(std::string_view t) { return !t.empty() && std::isupper(static_cast<unsigned char>(t[0])); }

bool is_stopword(const std::string& t, const WordSet& stopwords) {
  return !is_negator(t) && stopwords.count(to_lower(t)) != 0;
}

void drop_stopwords(Tokens& tokens, const WordSet& stopwords) {
  std::erase_if(tokens, [&](const std::string& t) { return t.empty() || is_stopword(t, stopwords); });
}

std::string match_case(const std::string& original, std::string replacement) {
  if (capitalized(original) && !replacement.empty())
    replacement[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement[0])));
  return replacement;
}

}  // namespace

WordSet load_word_set(const std::filesystem::path& path) {
  WordSet out;
  for (const auto& line : read_lines(path)) {
    auto word = trim(split(line, '\t')[0]);
    if (!word.empty()) out.insert(to_lower(word));
  }
  return out;
}

WordMap load_word_map(const std::filesystem::path& path) {
  WordMap out;
  std::size_t n = 0;
  for (const auto& line : read_lines(path)) {
    ++n;
    auto cols = split(line, '\t');
    if (cols.size() != 2 || trim(cols[0]).empty())
      fail(ErrorKind::data, path.string() + ": entry " + std::to_string(n) + ": expected surface<TAB>replacement");
    out[to_lower(trim(cols[0]))] = trim(cols[1]);
  }
  return out;
}

bool is_negator(std::string_view token) {
  static const WordSet negators{"no", "not", "never", "none", "neither", "nor", "n't", "without"};
  const auto w = to_lower(token);
  return negators.count(w) != 0 || w.ends_with("n't");
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::generic: return "generic";
    case Mode::twitter: return "twitter";
    case Mode::lm: return "lm";
  }
  return "generic";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::generic, Mode::twitter, Mode::lm})
    if (to_string(m) == name) return m;
  fail(ErrorKind::config, "unknown preprocessing mode '" + std::string(name) + "' (expected generic, twitter or lm)");
}

void PrepConfig::validate() const {
  std::vector<std::string> problems;
  if (mode == Mode::twitter) {
    if (!speller || speller->size() == 0) problems.push_back("twitter mode needs a non-empty spelling dictionary");
    if (slang.empty()) problems.push_back("twitter mode needs a slang map");
    if (contractions.empty()) problems.push_back("twitter mode needs a contraction map");
  }
  if (problems.empty()) return;
  std::string msg = "invalid preprocessing config:";
  for (const auto& p : problems) msg += "\n  - " + p;
  fail(ErrorKind::config, msg);
}

PrepConfig load_config(Mode mode, const std::filesystem::path& data_dir) {
  PrepConfig cfg;
  cfg.mode = mode;
  cfg.stopwords = load_word_set(data_dir / "stopwords.tsv");
  if (mode == Mode::twitter) {
    cfg.slang = load_word_map(data_dir / "slang.tsv");
    cfg.contractions = load_word_map(data_dir / "contractions.tsv");
    cfg.speller = std::make_shared<SpellingDictionary>(SpellingDictionary::load(data_dir / "spelling_freq.tsv"));
  }
  cfg.validate();
  return cfg;
}

std::string normalize_word(std::string_view word, Mode mode, const Lemmatizer* lemmatizer) {
  static const RuleLemmatizer fallback;
  const Lemmatizer& lem = lemmatizer ? *lemmatizer : fallback;
  std::string t(word);
  for (int round = 0; round < kMaxNormalizeRounds; ++round) {
    auto next = lem.lemma(t);
    if (mode == Mode::lm) next = porter_stem(next);
    if (next == t) break;
    t = std::move(next);
  }
  return t;
}

Tokens minimal_tokens(std::string_view text) {
  Tokens out;
  for (const auto& raw : split_whitespace(text)) {
    const auto core = core_of(raw);
    if (core.empty()) continue;
    if (is_url(core)) continue;
    if (core.front() == '#') continue;  // hashtag word
    auto s = ascii_quotes(raw);
    blank_entities(s);
    for (auto& piece : split_whitespace(strip_punctuation(s))) out.push_back(std::move(piece));
  }
  return out;
}

Tokens expand(std::span<const std::string> tokens, const WordMap& map, std::size_t* added) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto it = map.find(to_lower(t));
    if (it == map.end()) {
      out.push_back(t);
      continue;
    }
    auto parts = split_whitespace(it->second);
    if (!parts.empty()) parts[0] = match_case(t, parts[0]);
    if (added && parts.size() > 1) *added += parts.size() - 1;
    for (auto& p : parts) out.push_back(std::move(p));
  }
  return out;
}

PrepResult preprocess_detailed(std::string_view text, const PrepConfig& cfg) {
  PrepResult r;
  Tokens tokens = minimal_tokens(text);
  r.input_tokens = tokens.size();
  drop_stopwords(tokens, cfg.stopwords);

  if (cfg.replaces_slang()) tokens = expand(tokens, cfg.slang, &r.expansion_tokens);
  if (cfg.expands_contractions()) tokens = expand(tokens, cfg.contractions, &r.expansion_tokens);
  if (cfg.corrects_spelling() && cfg.speller) {
    for (auto& t : tokens)
      if (!capitalized(t)) t = cfg.speller->correct(t);
  }

  for (auto& t : tokens) {
    if (capitalized(t)) continue;  // proper nouns and mention bodies stay verbatim
    t = normalize_word(t, cfg.mode, cfg.lemmatizer.get());
  }
  drop_stopwords(tokens, cfg.stopwords);
  r.tokens = std::move(tokens);
  return r;
}

Tokens preprocess(std::string_view text, const PrepConfig& cfg) { return preprocess_detailed(text, cfg).tokens; }

Tokens preprocess(const TextDocument& doc, const PrepConfig& cfg) { return preprocess(doc.text, cfg); }

std::vector<Tokens> preprocess_corpus(std::span<const TextDocument> docs, const PrepConfig& cfg) {
  cfg.validate();
  std::vector<Tokens> out(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = preprocess(docs[static_cast<std::size_t>(i)].text, cfg);
  return out;
}

std::vector<Tokens> preprocess_corpus_serial(std::span<const TextDocument> docs, const PrepConfig& cfg) {
  cfg.validate();
  std::vector<Tokens> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(preprocess(d.text, cfg));
  return out;
}

}  // namespace stocksent::textprep
