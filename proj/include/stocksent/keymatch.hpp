#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stocksent::keymatch {

struct TickerProfile {
  std::string ticker;
  std::vector<std::string> aliases;
};

/// CSV `ticker,alias`, one row per alias (header optional). Rejects an alias claimed by two tickers.
std::vector<TickerProfile> load_profiles(const std::filesystem::path& path);
std::vector<TickerProfile> parse_profiles(std::string_view content);
/// Throws Error(data) on a blank or missing alias list entry and on an alias shared across profiles.
void validate_profiles(std::span<const TickerProfile> profiles);

/// Cosine of case-folded character-trigram count vectors. A string shorter than three characters is
/// a single gram. Throws Error(data) on an empty string.
double cosine_sim(std::string_view a, std::string_view b);

/// Levenshtein distance with unit costs, on case-folded bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

struct MatchOptions {
  double cos_threshold = 0.6;
  std::size_t edit_threshold = 2;
};

struct Match {
  std::string ticker;
  std::string alias;
  std::string keyword;
  double cosine = 0.0;
  std::size_t distance = 0;
};

/// Best qualifying (keyword, alias) pair: cosine >= cos_threshold or distance <= edit_threshold.
/// Ties: higher cosine, then lower distance, then ticker alphabetically. Throws on empty profiles.
std::optional<Match> match_ticker(std::span<const std::string> keywords, std::span<const TickerProfile> profiles,
                                  const MatchOptions& options = {});

/// One result per article. Parallel over articles.
std::vector<std::optional<Match>> match_articles(std::span<const std::vector<std::string>> articles,
                                                 std::span<const TickerProfile> profiles,
                                                 const MatchOptions& options = {});
std::vector<std::optional<Match>> match_articles_serial(std::span<const std::vector<std::string>> articles,
                                                        std::span<const TickerProfile> profiles,
                                                        const MatchOptions& options = {});

}  // namespace stocksent::keymatch
