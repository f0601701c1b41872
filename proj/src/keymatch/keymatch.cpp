#include "stocksent/keymatch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "stocksent/error.hpp"
#include "stocksent/util.hpp"

namespace stocksent::keymatch {
namespace {

std::map<std::string, int> trigrams(std::string_view s) {
  if (s.empty()) fail(ErrorKind::data, "cosine_sim: empty string");
  const auto f = to_lower(s);
  std::map<std::string, int> grams;
  if (f.size() < 3) {
    grams[f] = 1;
    return grams;
  }
  for (std::size_t i = 0; i + 3 <= f.size(); ++i) ++grams[f.substr(i, 3)];
  return grams;
}

// Strict weak order: better matches first.
bool better(const Match& a, const Match& b) {
  if (a.cosine != b.cosine) return a.cosine > b.cosine;
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.ticker < b.ticker;
}

}  // namespace

std::vector<TickerProfile> parse_profiles(std::string_view content) {
  std::vector<TickerProfile> out;
  const auto rows = parse_csv(content);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    if (row.size() != 2)
      fail(ErrorKind::data, "profiles row " + std::to_string(r + 1) + ": expected ticker,alias");
    const auto ticker = trim(row[0]);
    const auto alias = trim(row[1]);
    if (r == 0 && to_lower(ticker) == "ticker" && to_lower(alias) == "alias") continue;
    if (ticker.empty() || alias.empty())
      fail(ErrorKind::data, "profiles row " + std::to_string(r + 1) + ": empty ticker or alias");
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.ticker == ticker; });
    if (it == out.end()) {
      out.push_back({ticker, {}});
      it = std::prev(out.end());
    }
    it->aliases.push_back(alias);
  }
  validate_profiles(out);
  return out;
}

std::vector<TickerProfile> load_profiles(const std::filesystem::path& path) {
  try {
    return parse_profiles(read_file(path));
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

void validate_profiles(std::span<const TickerProfile> profiles) {
  std::map<std::string, std::string> owner;
  for (const auto& p : profiles) {
    if (p.aliases.empty()) fail(ErrorKind::data, "profile " + p.ticker + " has no aliases");
    for (const auto& a : p.aliases) {
      if (trim(a).empty()) fail(ErrorKind::data, "profile " + p.ticker + " has an empty alias");
      auto [it, inserted] = owner.emplace(a, p.ticker);
      if (!inserted && it->second != p.ticker)
        fail(ErrorKind::data, "alias '" + a + "' is claimed by both " + it->second + " and " + p.ticker);
    }
  }
}

double cosine_sim(std::string_view a, std::string_view b) {
  const auto ga = trigrams(a);
  const auto gb = trigrams(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [g, c] : ga) {
    na += static_cast<double>(c) * c;
    if (auto it = gb.find(g); it != gb.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto& [g, c] : gb) nb += static_cast<double>(c) * c;
  const double cos = dot / std::sqrt(na * nb);
  return std::clamp(cos, 0.0, 1.0);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  const auto x = to_lower(a);
  const auto y = to_lower(b);
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0u : 1u)});
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

std::optional<Match> match_ticker(std::span<const std::string> keywords, std::span<const TickerProfile> profiles,
                                  const MatchOptions& options) {
  if (profiles.empty()) fail(ErrorKind::config, "match_ticker: no ticker profiles");
  std::optional<Match> best;
  for (const auto& kw : keywords) {
    if (trim(kw).empty()) continue;
    for (const auto& p : profiles) {
      for (const auto& alias : p.aliases) {
        Match m{p.ticker, alias, kw, cosine_sim(kw, alias), edit_distance(kw, alias)};
        if (m.cosine < options.cos_threshold && m.distance > options.edit_threshold) continue;
        if (!best || better(m, *best)) best = std::move(m);
      }
    }
  }
  return best;
}

std::vector<std::optional<Match>> match_articles(std::span<const std::vector<std::string>> articles,
                                                 std::span<const TickerProfile> profiles,
                                                 const MatchOptions& options) {
  if (profiles.empty()) fail(ErrorKind::config, "match_articles: no ticker profiles");
  validate_profiles(profiles);  // an empty alias would throw inside the parallel region
  std::vector<std::optional<Match>> out(articles.size());
  const auto n = static_cast<std::ptrdiff_t>(articles.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = match_ticker(articles[static_cast<std::size_t>(i)], profiles, options);
  return out;
}

std::vector<std::optional<Match>> match_articles_serial(std::span<const std::vector<std::string>> articles,
                                                        std::span<const TickerProfile> profiles,
                                                        const MatchOptions& options) {
  if (profiles.empty()) fail(ErrorKind::config, "match_articles: no ticker profiles");
  std::vector<std::optional<Match>> out;
  out.reserve(articles.size());
  for (const auto& a : articles) out.push_back(match_ticker(a, profiles, options));
  return out;
}

}  // namespace stocksent::keymatch
