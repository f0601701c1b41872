#include <algorithm>
#include <cctype>
#include <string>

#include "stocksent/error.hpp"
#include "stocksent/textprep.hpp"
#include "stocksent/util.hpp"

namespace stocksent::textprep {
namespace {

constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz";

bool alphabetic(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c) != 0; });
}

// Deletes, substitutions and inserts; transpositions are two substitutions under Levenshtein.
template <typename F>
void for_each_edit(const std::string& w, F&& f) {
  std::string e;
  for (std::size_t i = 0; i < w.size(); ++i) {
    e = w;
    e.erase(i, 1);
    f(e);
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (char c : kAlphabet) {
      if (c == w[i]) continue;
      e = w;
      e[i] = c;
      f(e);
    }
  }
  for (std::size_t i = 0; i <= w.size(); ++i) {
    for (char c : kAlphabet) {
      e = w;
      e.insert(e.begin() + static_cast<std::ptrdiff_t>(i), c);
      f(e);
    }
  }
}

}  // namespace

SpellingDictionary SpellingDictionary::load(const std::filesystem::path& path) {
  SpellingDictionary dict;
  const auto content = read_file(path);
  std::size_t line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2)
      fail(ErrorKind::data, path.string() + ": line " + std::to_string(line_no) + ": expected word<TAB>count");
    dict.add(trim(cols[0]), parse_int(trim(cols[1])));
  }
  return dict;
}

void SpellingDictionary::add(std::string_view word, long long count) {
  if (count < 0) fail(ErrorKind::data, "negative frequency for '" + std::string(word) + "'");
  auto key = to_lower(word);
  counts_[key] += count;
  display_.try_emplace(key, std::string(word));
}

bool SpellingDictionary::contains(std::string_view word) const { return counts_.count(to_lower(word)) != 0; }

long long SpellingDictionary::frequency(std::string_view word) const {
  auto it = counts_.find(to_lower(word));
  return it == counts_.end() ? 0 : it->second;
}

std::string SpellingDictionary::correct(std::string_view token) const {
  if (!alphabetic(token) || counts_.empty()) return std::string(token);
  const auto key = to_lower(token);
  if (counts_.count(key)) return std::string(token);

  const std::string* best = nullptr;
  long long best_count = -1;
  auto consider = [&](const std::string& cand) {
    auto it = counts_.find(cand);
    if (it == counts_.end()) return;
    if (it->second > best_count || (it->second == best_count && cand < *best)) {
      best = &it->first;
      best_count = it->second;
    }
  };

  for_each_edit(key, consider);
  if (!best) {
    for_each_edit(key, [&](const std::string& e1) { for_each_edit(e1, consider); });
  }
  if (!best) return std::string(token);
  return display_.at(*best);
}

}  // namespace stocksent::textprep
