#include "stocksent/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "stocksent/error.hpp"
#include "stocksent/util.hpp"

namespace stocksent::correlate {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double label_value(lexsent::Label l) {
  switch (l) {
    case lexsent::Label::negative: return -1.0;
    case lexsent::Label::neutral: return 0.0;
    case lexsent::Label::positive: return 1.0;
  }
  return 0.0;
}

std::vector<std::string> known_channels() {
  std::vector<std::string> out;
  for (Source s : kAllSources) out.push_back(sentiment_channel(s));
  for (auto e : emotion::kEmotions) out.push_back(emotion_channel(e));
  return out;
}

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    fail(ErrorKind::data, "spearman: length mismatch (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  if (x.size() < kMinOverlap) fail(ErrorKind::data, "spearman: need at least 3 points, got " + std::to_string(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isnan(x[i]) || std::isnan(y[i])) fail(ErrorKind::data, "spearman: NaN input");
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

// Pearson on pre-centred data: x and y already have zero mean.
double centred_corr(std::span<const double> x, std::span<const double> y, double sxx, double syy) {
  double sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += x[i] * y[i];
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct Prepared {
  std::vector<double> rx, ry;  // centred ranks
  double sxx = 0, syy = 0, observed = 0;
};

Prepared prepare(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  if (constant(x) || constant(y)) fail(ErrorKind::data, "spearman: undefined correlation for a constant series");
  Prepared p;
  p.rx = average_ranks(x);
  p.ry = average_ranks(y);
  const double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;  // mean rank is (n+1)/2 with ties averaged
  for (auto& r : p.rx) r -= mean;
  for (auto& r : p.ry) r -= mean;
  for (double r : p.rx) p.sxx += r * r;
  for (double r : p.ry) p.syy += r * r;
  p.observed = centred_corr(p.rx, p.ry, p.sxx, p.syy);
  return p;
}

bool at_least_as_extreme(double r, double observed) { return std::abs(r) >= std::abs(observed) - 1e-12; }

bool permuted_hit(const Prepared& p, std::uint64_t seed, std::size_t k, std::vector<double>& scratch) {
  scratch = p.ry;
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(k)));
  for (std::size_t i = scratch.size(); i > 1; --i) std::swap(scratch[i - 1], scratch[rng() % i]);
  return at_least_as_extreme(centred_corr(p.rx, scratch, p.sxx, p.syy), p.observed);
}

using Key = std::pair<std::string, std::string>;  // ticker, channel

std::map<Key, std::vector<DailySignal>> group_signals(std::span<const DailySignal> signals) {
  std::map<Key, std::vector<DailySignal>> groups;
  for (const auto& s : signals) groups[{s.ticker, s.channel}].push_back(s);
  for (auto& [k, g] : groups) std::sort(g.begin(), g.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  return groups;
}

CorrelationRow correlate_one(const Key& key, const std::vector<DailySignal>& series,
                             const std::map<std::string, marketdata::ReturnSeries>& returns,
                             const CorrelateOptions& options) {
  CorrelationRow row;
  row.ticker = key.first;
  row.channel = key.second;
  auto it = returns.find(key.first);
  if (it == returns.end()) {
    row.flag = "sparse";
    return row;
  }
  const auto joined = join_series(it->second, series, options.lag);
  row.n_days = joined.dates.size();
  if (row.n_days < kMinOverlap) {
    row.flag = "sparse";
    return row;
  }
  if (constant(joined.signal) || constant(joined.returns)) {
    row.flag = "constant";
    return row;
  }
  row.rho = spearman(joined.signal, joined.returns);
  if (options.permutations > 0)
    row.p_value = permutation_pvalue_serial(joined.signal, joined.returns, options.permutations, options.seed);
  return row;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string sentiment_channel(Source source) { return std::string(to_string(source)) + "_sentiment"; }

std::string emotion_channel(emotion::Emotion e) { return std::string(emotion::to_string(e)); }

bool is_emotion_channel(std::string_view channel) {
  for (auto e : emotion::kEmotions)
    if (emotion::to_string(e) == channel) return true;
  return false;
}

std::string canonical_channel(std::string_view name) {
  std::string n = to_lower(trim(name));
  std::string suffix;
  if (n.size() > kWeightedSuffix.size() && n.ends_with(kWeightedSuffix)) {
    suffix = std::string(kWeightedSuffix);
    n.resize(n.size() - kWeightedSuffix.size());
  }
  for (Source s : kAllSources) {
    if (n == to_string(s) || n == sentiment_channel(s)) return sentiment_channel(s) + suffix;
  }
  if (suffix.empty() && is_emotion_channel(n)) return n;
  std::string known;
  for (const auto& c : known_channels()) known += (known.empty() ? "" : ", ") + c;
  fail(ErrorKind::config, "unknown channel '" + std::string(name) + "' (known: " + known +
                              "; sentiment channels also accept a _weighted suffix)");
}

std::string display_name(std::string_view channel) {
  std::string c(channel);
  std::string suffix;
  if (c.ends_with(kWeightedSuffix)) {
    c.resize(c.size() - kWeightedSuffix.size());
    suffix = " (weighted)";
  }
  if (c == "twitter_sentiment") return "Twitter-sentiment" + suffix;
  if (c == "news_archive_sentiment") return "News-Archive-Sentiment" + suffix;
  if (c == "radio_transcript_sentiment") return "Radio-transcript-sentiment" + suffix;
  if (c == "news_api_sentiment") return "News-Articles(API)-sentiment" + suffix;
  return c + suffix;
}

std::optional<DailySignal> aggregate_daily(std::span<const ScoredDocument> scores, const AggregateOptions& options) {
  if (scores.empty()) return std::nullopt;
  const auto& first = scores.front();
  double num = 0, den = 0;
  std::size_t n = 0;
  for (const auto& s : scores) {
    if (s.ticker != first.ticker || s.date != first.date || s.channel != first.channel)
      fail(ErrorKind::data, "aggregate_daily: scores mix (ticker, date, channel) groups: " + first.ticker + "/" +
                                first.date.iso() + "/" + first.channel + " vs " + s.ticker + "/" + s.date.iso() + "/" +
                                s.channel);
    if (s.score.no_signal) continue;
    double w = 1.0;
    if (options.weighting == Weighting::engagement && s.engagement)
      w += static_cast<double>(s.engagement->likes + s.engagement->retweets);
    const double v = options.value == SignalValue::label ? label_value(s.score.label) : s.score.polarity;
    num += w * v;
    den += w;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return DailySignal{first.ticker, first.date, first.channel, num / den, n};
}

std::vector<DailySignal> aggregate_all(std::span<const ScoredDocument> scores, const AggregateOptions& options) {
  std::map<std::tuple<std::string, std::string, Date>, std::vector<ScoredDocument>> groups;
  for (const auto& s : scores) groups[{s.ticker, s.channel, s.date}].push_back(s);
  std::vector<DailySignal> out;
  for (const auto& [k, g] : groups)
    if (auto sig = aggregate_daily(g, options)) out.push_back(std::move(*sig));
  return out;
}

std::vector<DailySignal> emotion_signals(std::span<const emotion::EmotionVector> vectors) {
  std::vector<DailySignal> out;
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < emotion::kEmotionCount; ++i) {
      if (v.hits[i] == 0) continue;
      out.push_back({v.ticker, v.date, emotion_channel(emotion::kEmotions[i]), v.values[i], v.doc_count});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.ticker, a.channel, a.date) < std::tie(b.ticker, b.channel, b.date);
  });
  return out;
}

std::string signals_to_csv(std::span<const DailySignal> signals) {
  std::string out = "ticker,date,channel,value,doc_count\n";
  for (const auto& s : signals)
    out += csv_escape(s.ticker) + "," + s.date.iso() + "," + s.channel + "," + format_double(s.value) + "," +
           std::to_string(s.doc_count) + "\n";
  return out;
}

std::vector<DailySignal> signals_from_csv(std::string_view content) {
  const auto rows = parse_csv(content);
  if (rows.empty() || rows[0] != std::vector<std::string>{"ticker", "date", "channel", "value", "doc_count"})
    fail(ErrorKind::data, "signal CSV must start with ticker,date,channel,value,doc_count");
  std::vector<DailySignal> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 5) fail(ErrorKind::data, "signal CSV line " + std::to_string(r + 1) + ": expected 5 fields");
    try {
      out.push_back({row[0], Date::parse(row[1]), row[2], parse_double(row[3]),
                     static_cast<std::size_t>(parse_int(row[4]))});
    } catch (const Error& e) {
      fail(ErrorKind::data, "signal CSV line " + std::to_string(r + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::data, "pearson: need two equal-length series of >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) fail(ErrorKind::data, "pearson: undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) { return prepare(x, y).observed; }

double permutation_pvalue(std::span<const double> x, std::span<const double> y, std::size_t n_permutations,
                          std::uint64_t seed) {
  const auto p = prepare(x, y);
  std::size_t hits = 0;
  const auto n = static_cast<std::ptrdiff_t>(n_permutations);
#pragma omp parallel reduction(+ : hits)
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k)
      if (permuted_hit(p, seed, static_cast<std::size_t>(k), scratch)) ++hits;
  }
  return (1.0 + static_cast<double>(hits)) / (1.0 + static_cast<double>(n_permutations));
}

double permutation_pvalue_serial(std::span<const double> x, std::span<const double> y, std::size_t n_permutations,
                                 std::uint64_t seed) {
  const auto p = prepare(x, y);
  std::size_t hits = 0;
  std::vector<double> scratch;
  for (std::size_t k = 0; k < n_permutations; ++k)
    if (permuted_hit(p, seed, k, scratch)) ++hits;
  return (1.0 + static_cast<double>(hits)) / (1.0 + static_cast<double>(n_permutations));
}

JoinedSeries join_series(const marketdata::ReturnSeries& returns, std::span<const DailySignal> signals, int lag) {
  std::map<Date, std::size_t> index;
  for (std::size_t i = 0; i < returns.entries.size(); ++i) index[returns.entries[i].date] = i;
  JoinedSeries out;
  for (const auto& s : signals) {
    auto it = index.find(s.date);
    if (it == index.end()) continue;
    const auto j = static_cast<std::ptrdiff_t>(it->second) + lag;
    if (j < 0 || j >= static_cast<std::ptrdiff_t>(returns.entries.size())) continue;
    out.dates.push_back(s.date);
    out.signal.push_back(s.value);
    out.returns.push_back(returns.entries[static_cast<std::size_t>(j)].value);
  }
  return out;
}

CorrelationReport correlate_returns(const std::map<std::string, marketdata::ReturnSeries>& returns,
                                    std::span<const DailySignal> signals, const CorrelateOptions& options) {
  const auto groups = group_signals(signals);
  std::vector<std::pair<const Key*, const std::vector<DailySignal>*>> work;
  for (const auto& [k, g] : groups) work.emplace_back(&k, &g);
  CorrelationReport report;
  report.rows.resize(work.size());
  const auto n = static_cast<std::ptrdiff_t>(work.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& [k, g] = work[static_cast<std::size_t>(i)];
    report.rows[static_cast<std::size_t>(i)] = correlate_one(*k, *g, returns, options);
  }
  return report;
}

CorrelationReport correlate_returns_serial(const std::map<std::string, marketdata::ReturnSeries>& returns,
                                           std::span<const DailySignal> signals, const CorrelateOptions& options) {
  CorrelationReport report;
  for (const auto& [k, g] : group_signals(signals)) report.rows.push_back(correlate_one(k, g, returns, options));
  return report;
}

std::string report_to_csv(const CorrelationReport& report) {
  std::string out = "ticker,channel,rho,n_days,p_value\n";
  for (const auto& r : report.rows)
    out += csv_escape(r.ticker) + "," + r.channel + "," + fmt_opt(r.rho) + "," + std::to_string(r.n_days) + "," +
           fmt_opt(r.p_value) + "\n";
  return out;
}

CorrelationReport report_from_csv(std::string_view content) {
  const auto rows = parse_csv(content);
  if (rows.empty() || rows[0] != std::vector<std::string>{"ticker", "channel", "rho", "n_days", "p_value"})
    fail(ErrorKind::data, "correlation CSV must start with ticker,channel,rho,n_days,p_value");
  CorrelationReport report;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 5) fail(ErrorKind::data, "correlation CSV line " + std::to_string(i + 1) + ": expected 5 fields");
    CorrelationRow r;
    r.ticker = row[0];
    r.channel = row[1];
    if (!row[2].empty()) r.rho = parse_double(row[2]);
    r.n_days = static_cast<std::size_t>(parse_int(row[3]));
    if (!row[4].empty()) r.p_value = parse_double(row[4]);
    if (!r.rho) r.flag = r.n_days < kMinOverlap ? "sparse" : "constant";
    report.rows.push_back(std::move(r));
  }
  return report;
}

std::string report_to_text(const CorrelationReport& report) {
  auto table = [&](bool emotions, const char* title, const char* column) {
    std::vector<std::array<std::string, 5>> lines;
    for (const auto& r : report.rows) {
      if (is_emotion_channel(r.channel) != emotions) continue;
      std::string rho = r.rho ? [&] {
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(3);
        s << *r.rho;
        return s.str();
      }()
                              : "n/a (" + r.flag + ")";
      std::string p;
      if (r.p_value) {
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(4);
        s << *r.p_value;
        p = s.str();
      }
      lines.push_back({r.ticker, display_name(r.channel), rho, std::to_string(r.n_days), p});
    }
    std::string out = std::string(title) + "\n";
    if (lines.empty()) return out + "  (no rows)\n";
    const std::array<std::string, 5> head{"Ticker", column, "Spearman Corr", "Days", "p-value"};
    std::array<std::size_t, 5> w{};
    for (std::size_t c = 0; c < 5; ++c) {
      w[c] = head[c].size();
      for (const auto& l : lines) w[c] = std::max(w[c], l[c].size());
    }
    auto emit = [&](const std::array<std::string, 5>& cells) {
      std::string line = "  ";
      for (std::size_t c = 0; c < 5; ++c) line += pad(cells[c], w[c] + (c + 1 < 5 ? 2 : 0));
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    };
    emit(head);
    std::string rule = "  ";
    for (std::size_t c = 0; c < 5; ++c) rule += std::string(w[c], '-') + (c + 1 < 5 ? "  " : "");
    out += rule + "\n";
    for (const auto& l : lines) emit(l);
    return out;
  };
  return table(false, "Spearman correlation of daily returns with sentiment", "Category") + "\n" +
         table(true, "Spearman correlation of daily returns with emotions", "Emotion");
}

}  // namespace stocksent::correlate
