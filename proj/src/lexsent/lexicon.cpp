#include <algorithm>
#include <cmath>

#include "stocksent/error.hpp"
#include "stocksent/lexsent.hpp"
#include "stocksent/util.hpp"

namespace stocksent::lexsent {
namespace {

const std::vector<std::string>& category_names() {
  static const std::vector<std::string> names{"positive",    "negative",   "litigious",   "uncertainty",
                                              "strong_modal", "weak_modal", "constraining"};
  return names;
}

WordSet* category(SentimentLexicon& lex, const std::string& name) {
  if (name == "positive") return &lex.positive;
  if (name == "negative") return &lex.negative;
  if (name == "litigious") return &lex.litigious;
  if (name == "uncertainty") return &lex.uncertainty;
  if (name == "strong_modal") return &lex.strong_modal;
  if (name == "weak_modal") return &lex.weak_modal;
  if (name == "constraining") return &lex.constraining;
  return nullptr;
}

std::vector<std::string> header_of(const std::vector<std::vector<std::string>>& rows,
                                   const std::filesystem::path& path) {
  if (rows.empty()) fail(ErrorKind::data, path.string() + ": empty lexicon file");
  std::vector<std::string> h;
  for (const auto& c : rows[0]) h.push_back(to_lower(trim(c)));
  return h;
}

std::ptrdiff_t column(const std::vector<std::string>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

void check_range(double v, const char* what) {
  if (std::isnan(v) || v < -1.0 || v > 1.0)
    fail(ErrorKind::data, std::string(what) + " must lie in [-1, 1], got " + (std::isnan(v) ? "NaN" : format_double(v)));
}

Label step(double v, double threshold) {
  if (v >= threshold) return Label::positive;
  if (v <= -threshold) return Label::negative;
  return Label::neutral;
}

}  // namespace

std::string_view to_string(Label label) {
  switch (label) {
    case Label::negative: return "negative";
    case Label::neutral: return "neutral";
    case Label::positive: return "positive";
  }
  return "neutral";
}

Label parse_label(std::string_view name) {
  const auto n = to_lower(name);
  for (Label l : {Label::negative, Label::neutral, Label::positive})
    if (to_string(l) == n) return l;
  fail(ErrorKind::data, "unknown sentiment label '" + std::string(name) + "'");
}

std::string_view to_string(LexiconName name) {
  switch (name) {
    case LexiconName::loughran_mcdonald: return "loughran_mcdonald";
    case LexiconName::harvard_iv: return "harvard_iv";
    case LexiconName::custom: return "custom";
  }
  return "custom";
}

std::string lexicon_key(std::string_view word) {
  return textprep::normalize_word(to_lower(word), textprep::Mode::lm);
}

SentimentLexicon SentimentLexicon::build(LexiconName name, std::span<const std::string> positive,
                                         std::span<const std::string> negative,
                                         const std::map<std::string, std::vector<std::string>>& other) {
  SentimentLexicon lex;
  lex.name = name;
  for (const auto& w : positive)
    if (!trim(w).empty()) lex.positive.insert(lexicon_key(trim(w)));
  for (const auto& w : negative)
    if (!trim(w).empty()) lex.negative.insert(lexicon_key(trim(w)));
  std::vector<std::string> clash;
  for (const auto& k : lex.positive)
    if (lex.negative.count(k)) clash.push_back(k);
  if (!clash.empty()) {
    std::sort(clash.begin(), clash.end());
    std::string list;
    for (const auto& k : clash) {
      lex.positive.erase(k);
      lex.negative.erase(k);
      list += (list.empty() ? "" : ", ") + k;
    }
    log::warn("lexicon " + std::string(to_string(name)) + ": " + std::to_string(clash.size()) +
              " key(s) are both positive and negative after stemming and were dropped: " + list);
  }
  for (const auto& [cat, words] : other) {
    WordSet* set = category(lex, cat);
    if (!set || set == &lex.positive || set == &lex.negative)
      fail(ErrorKind::config, "unknown lexicon category '" + cat + "'");
    for (const auto& w : words)
      if (!trim(w).empty()) set->insert(lexicon_key(trim(w)));
  }
  return lex;
}

SentimentLexicon SentimentLexicon::swapped() const {
  SentimentLexicon s = *this;
  std::swap(s.positive, s.negative);
  return s;
}

SentimentLexicon load_loughran_mcdonald(const std::filesystem::path& path) {
  const auto rows = parse_csv(read_file(path));
  const auto header = header_of(rows, path);
  const auto word_col = column(header, "word");
  if (word_col < 0) fail(ErrorKind::data, path.string() + ": no Word column");
  std::map<std::string, std::vector<std::string>> members;
  std::map<std::string, std::ptrdiff_t> cols;
  for (const auto& c : category_names()) {
    auto idx = column(header, c);
    if (idx >= 0) cols[c] = idx;
  }
  if (!cols.count("positive") || !cols.count("negative"))
    fail(ErrorKind::data, path.string() + ": Positive and Negative columns are required");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    if (row.size() < header.size())
      fail(ErrorKind::data, path.string() + ": row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                                " fields, header has " + std::to_string(header.size()));
    const auto& word = row[static_cast<std::size_t>(word_col)];
    for (const auto& [cat, idx] : cols) {
      const auto cell = trim(row[static_cast<std::size_t>(idx)]);
      // Year of addition; 0 means absent, negative marks a removed entry.
      if (!cell.empty() && parse_double(cell) > 0) members[cat].push_back(word);
    }
  }
  auto pos = std::move(members["positive"]);
  auto neg = std::move(members["negative"]);
  members.erase("positive");
  members.erase("negative");
  return SentimentLexicon::build(LexiconName::loughran_mcdonald, pos, neg, members);
}

SentimentLexicon load_harvard_iv(const std::filesystem::path& path) {
  const auto rows = parse_csv(read_file(path));
  const auto header = header_of(rows, path);
  const auto entry = column(header, "entry");
  const auto pos_col = column(header, "positiv");
  const auto neg_col = column(header, "negativ");
  if (entry < 0 || pos_col < 0 || neg_col < 0)
    fail(ErrorKind::data, path.string() + ": Entry, Positiv and Negativ columns are required");
  std::vector<std::string> pos, neg;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    auto get = [&](std::ptrdiff_t i) {
      return static_cast<std::size_t>(i) < row.size() ? trim(row[static_cast<std::size_t>(i)]) : std::string();
    };
    auto word = get(entry);
    if (auto hash = word.find('#'); hash != std::string::npos) word.resize(hash);
    if (word.empty()) continue;
    if (!get(pos_col).empty()) pos.push_back(word);
    if (!get(neg_col).empty()) neg.push_back(word);
  }
  return SentimentLexicon::build(LexiconName::harvard_iv, pos, neg);
}

SentimentLexicon load_two_column(const std::filesystem::path& path, LexiconName name) {
  const auto content = read_file(path);
  std::map<std::string, std::vector<std::string>> members;
  std::size_t line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const char sep = line.find('\t') != std::string::npos ? '\t' : ',';
    auto cols = split(line, sep);
    if (cols.size() != 2)
      fail(ErrorKind::data, path.string() + ": line " + std::to_string(line_no) + ": expected word,category");
    auto cat = to_lower(trim(cols[1]));
    if (line_no == 1 && to_lower(trim(cols[0])) == "word") continue;  // header
    const auto& known = category_names();
    if (std::find(known.begin(), known.end(), cat) == known.end())
      fail(ErrorKind::data, path.string() + ": line " + std::to_string(line_no) + ": unknown category '" + cat + "'");
    members[cat].push_back(trim(cols[0]));
  }
  auto pos = std::move(members["positive"]);
  auto neg = std::move(members["negative"]);
  members.erase("positive");
  members.erase("negative");
  return SentimentLexicon::build(name, pos, neg, members);
}

SentimentLexicon load_lexicon(const std::filesystem::path& path) {
  const auto content = read_file(path);
  const auto first = to_lower(content.substr(0, content.find('\n')));
  if (first.find("entry") != std::string::npos && first.find("positiv") != std::string::npos)
    return load_harvard_iv(path);
  if (first.find("word") != std::string::npos && first.find("positive") != std::string::npos &&
      first.find("negative") != std::string::npos)
    return load_loughran_mcdonald(path);
  return load_two_column(path);
}

double conventional_subjectivity(const SentimentScore& s) {
  return s.word_count == 0 ? 0.0
                           : static_cast<double>(s.pos_count + s.neg_count) / static_cast<double>(s.word_count);
}

SentimentScore score_document(std::span<const std::string> tokens, const SentimentLexicon& lexicon,
                              std::size_t negation_window) {
  SentimentScore s;
  s.provenance = "lexicon:" + std::string(to_string(lexicon.name));
  s.word_count = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto key = lexicon_key(tokens[i]);
    if (lexicon.positive.count(key)) {
      bool negated = false;
      for (std::size_t j = i >= negation_window ? i - negation_window : 0; j < i && !negated; ++j)
        negated = textprep::is_negator(tokens[j]);
      ++(negated ? s.neg_count : s.pos_count);
    } else if (lexicon.negative.count(key)) {
      ++s.neg_count;
    }
  }
  const auto pos = static_cast<double>(s.pos_count);
  const auto neg = static_cast<double>(s.neg_count);
  s.no_signal = s.pos_count + s.neg_count == 0;
  s.polarity = s.no_signal ? 0.0 : (pos - neg) / (pos + neg);
  s.subjectivity = s.word_count == 0 ? 0.0 : (pos - neg) / static_cast<double>(s.word_count);
  s.label = classify_compound(s.polarity);
  return s;
}

Label classify_compound(double compound) {
  check_range(compound, "compound score");
  return step(compound, 0.05);
}

Label discretize_regression_label(double score) {
  check_range(score, "regression score");
  return step(score, 0.15);
}

}  // namespace stocksent::lexsent
