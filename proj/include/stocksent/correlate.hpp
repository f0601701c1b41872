#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stocksent/document.hpp"
#include "stocksent/emotion.hpp"
#include "stocksent/lexsent.hpp"
#include "stocksent/marketdata.hpp"

namespace stocksent::correlate {

// ---- channels ----

/// `<source>_sentiment`, e.g. "news_archive_sentiment".
std::string sentiment_channel(Source source);
/// The bare emotion name, e.g. "sadness".
std::string emotion_channel(emotion::Emotion e);
/// Suffix for the engagement-weighted variant of a sentiment channel.
inline constexpr std::string_view kWeightedSuffix = "_weighted";

bool is_emotion_channel(std::string_view channel);
/// Accepts channel ids, bare source names ("news_archive") and the weighted suffix. Throws Error(config)
/// listing the known channels otherwise.
std::string canonical_channel(std::string_view name);
/// Report label: "News-Archive-Sentiment", "Twitter-sentiment", ...; emotions keep their name.
std::string display_name(std::string_view channel);

// ---- daily aggregation ----

struct DailySignal {
  std::string ticker;
  Date date;
  std::string channel;
  double value = 0.0;
  std::size_t doc_count = 0;  // documents contributing to `value`
  friend bool operator==(const DailySignal&, const DailySignal&) = default;
};

struct ScoredDocument {
  std::string ticker;
  Date date;
  std::string channel;
  lexsent::SentimentScore score;
  std::optional<Engagement> engagement;
};

enum class Weighting { mean, engagement };  // engagement: weight 1 + likes + retweets
enum class SignalValue { polarity, label };  // label: negative -1, neutral 0, positive +1

struct AggregateOptions {
  Weighting weighting = Weighting::mean;
  SignalValue value = SignalValue::polarity;
};

/// Mean over the documents that carry signal; nullopt when none do. Throws Error(data) when the scores
/// mix tickers, dates or channels.
std::optional<DailySignal> aggregate_daily(std::span<const ScoredDocument> scores, const AggregateOptions& options = {});

/// Groups by (ticker, channel, date) and aggregates each group; output sorted the same way.
std::vector<DailySignal> aggregate_all(std::span<const ScoredDocument> scores, const AggregateOptions& options = {});

/// One signal per emotion with hits on that day.
std::vector<DailySignal> emotion_signals(std::span<const emotion::EmotionVector> vectors);

/// `ticker,date,channel,value,doc_count`
std::string signals_to_csv(std::span<const DailySignal> signals);
std::vector<DailySignal> signals_from_csv(std::string_view content);

// ---- Spearman ----

/// 1-based ranks; ties share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks. Throws Error(data) on length mismatch, fewer than 3 points,
/// NaN input, or a constant vector (undefined correlation).
double spearman(std::span<const double> x, std::span<const double> y);

/// Two-sided permutation p-value: (1 + #{|rho_perm| >= |rho_obs|}) / (1 + n_permutations). Shuffle k
/// draws from its own generator seeded from (seed, k), so the result does not depend on thread count.
double permutation_pvalue(std::span<const double> x, std::span<const double> y, std::size_t n_permutations,
                          std::uint64_t seed);
double permutation_pvalue_serial(std::span<const double> x, std::span<const double> y, std::size_t n_permutations,
                                 std::uint64_t seed);

// ---- report ----

inline constexpr std::size_t kMinOverlap = 3;
inline constexpr std::size_t kDefaultPermutations = 10000;

struct CorrelationRow {
  std::string ticker;
  std::string channel;
  std::optional<double> rho;  // nullopt when undefined
  std::size_t n_days = 0;
  std::optional<double> p_value;
  std::string flag;  // "", "sparse" (overlap < 3) or "constant"
  friend bool operator==(const CorrelationRow&, const CorrelationRow&) = default;
};

struct CorrelationReport {
  std::vector<CorrelationRow> rows;  // sorted by ticker, then channel
};

struct CorrelateOptions {
  int lag = 0;  // signal at trading day t against the return k trading days later
  std::size_t permutations = 0;  // 0 = no p-value
  std::uint64_t seed = 1;
};

struct JoinedSeries {
  std::vector<Date> dates;  // signal dates
  std::vector<double> signal;
  std::vector<double> returns;
};

/// Inner join of one (ticker, channel) signal series with the ticker's returns under `lag`.
JoinedSeries join_series(const marketdata::ReturnSeries& returns, std::span<const DailySignal> signals, int lag);

/// One row per (ticker, channel) present in `signals`; tickers without returns get an n_days = 0 sparse row.
CorrelationReport correlate_returns(const std::map<std::string, marketdata::ReturnSeries>& returns,
                                    std::span<const DailySignal> signals, const CorrelateOptions& options = {});
CorrelationReport correlate_returns_serial(const std::map<std::string, marketdata::ReturnSeries>& returns,
                                           std::span<const DailySignal> signals,
                                           const CorrelateOptions& options = {});

/// `ticker,channel,rho,n_days,p_value`; undefined values are empty fields.
std::string report_to_csv(const CorrelationReport& report);
CorrelationReport report_from_csv(std::string_view content);

/// Sentiment and emotion tables in the layout "Ticker | Category | Spearman Corr".
std::string report_to_text(const CorrelationReport& report);

}  // namespace stocksent::correlate
