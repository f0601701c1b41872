// Serial reference vs OpenMP kernel for every parallel stage. Run with OMP_NUM_THREADS to vary threads.

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "stocksent/correlate.hpp"
#include "stocksent/emotion.hpp"
#include "stocksent/indicators.hpp"
#include "stocksent/keymatch.hpp"
#include "stocksent/marketdata.hpp"
#include "stocksent/textprep.hpp"

using namespace stocksent;

namespace {

const std::filesystem::path kData = STOCKSENT_DATA_DIR;

std::vector<marketdata::PriceBar> walk(std::size_t n, std::uint64_t seed, const std::string& ticker = "B") {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, 0.01);
  std::vector<marketdata::PriceBar> bars;
  double close = 100.0;
  Date d(2015, 1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double open = close;
    close *= 1.0 + step(rng);
    bars.push_back({ticker, d, open, std::max(open, close) * 1.002, std::min(open, close) * 0.998, close,
                    static_cast<std::int64_t>(100000 + rng() % 900000)});
    d = d.plus_days(1);
  }
  return bars;
}

std::vector<TextDocument> corpus(std::size_t n, std::uint64_t seed) {
  static const std::vector<std::string> words{
      "shares", "rallied", "sharply", "after", "strong", "earnings", "but", "investors", "were", "worried",
      "about", "weak", "guidance", "happy", "gloomy", "terrible", "excellent", "losses", "gains", "really",
      "the", "market", "is", "not", "doing", "well", "surprising", "jump", "in", "revenue"};
  std::mt19937_64 rng(seed);
  std::vector<TextDocument> docs;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    const std::size_t len = 8 + rng() % 20;
    for (std::size_t k = 0; k < len; ++k) text += (k ? " " : "") + words[rng() % words.size()];
    docs.push_back({"d" + std::to_string(i), Date(2021, 1, 1).plus_days(static_cast<std::int64_t>(i % 60)),
                    i % 3 == 0 ? "MSFT" : (i % 3 == 1 ? "GS" : "DJIA"), Source::twitter, text, std::nullopt});
  }
  return docs;
}

void BM_Indicators(benchmark::State& state) {
  const auto bars = walk(2000, 1);
  const auto specs = indicators::default_specs();
  for (auto _ : state) {
    auto t = state.range(0) ? indicators::compute_all(specs, bars) : indicators::compute_all_serial(specs, bars);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_Indicators)->ArgNames({"parallel"})->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Preprocess(benchmark::State& state) {
  const auto docs = corpus(5000, 2);
  const auto cfg = textprep::load_config(textprep::Mode::twitter, kData);
  for (auto _ : state) {
    auto t = state.range(0) ? textprep::preprocess_corpus(docs, cfg) : textprep::preprocess_corpus_serial(docs, cfg);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_Preprocess)->ArgNames({"parallel"})->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EmotionVectors(benchmark::State& state) {
  const auto docs = corpus(5000, 3);
  const auto lex = emotion::merge_lexicons(emotion::load_nrc(kData / "nrc_sample.tsv"),
                                           emotion::load_gold(kData / "gold_sample.csv"));
  const textprep::RuleTagger tagger(kData / "pos_lexicon.tsv");
  for (auto _ : state) {
    auto v = state.range(0) ? emotion::daily_vectors(docs, lex, tagger) : emotion::daily_vectors_serial(docs, lex, tagger);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_EmotionVectors)->ArgNames({"parallel"})->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PermutationPValue(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> x(250), y(250);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = g(rng), y[i] = 0.2 * x[i] + g(rng);
  for (auto _ : state) {
    const double p = state.range(0) ? correlate::permutation_pvalue(x, y, 10000, 1)
                                    : correlate::permutation_pvalue_serial(x, y, 10000, 1);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_PermutationPValue)->ArgNames({"parallel"})->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CorrelateReturns(benchmark::State& state) {
  std::map<std::string, marketdata::ReturnSeries> returns;
  std::vector<correlate::DailySignal> signals;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int t = 0; t < 30; ++t) {
    const std::string ticker = "T" + std::to_string(t);
    const auto bars = walk(500, 100 + t, ticker);
    returns[ticker] = marketdata::compute_returns(bars);
    for (Source s : kAllSources)
      for (const auto& b : bars) signals.push_back({ticker, b.date, correlate::sentiment_channel(s), g(rng), 1});
  }
  const correlate::CorrelateOptions options{0, 200, 1};
  for (auto _ : state) {
    auto r = state.range(0) ? correlate::correlate_returns(returns, signals, options)
                            : correlate::correlate_returns_serial(returns, signals, options);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_CorrelateReturns)->ArgNames({"parallel"})->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MatchArticles(benchmark::State& state) {
  const auto profiles = keymatch::load_profiles(kData / "profiles.csv");
  const std::vector<std::string> pool{"Goldman Sachs Group", "Microsoft Corp", "Dow Jones", "weather", "Intel",
                                      "Nike Inc", "Boeing", "earnings", "Walgreens Boots", "UnitedHealth Grp"};
  std::mt19937_64 rng(6);
  std::vector<std::vector<std::string>> articles(3000);
  for (auto& a : articles)
    for (int k = 0; k < 4; ++k) a.push_back(pool[rng() % pool.size()]);
  for (auto _ : state) {
    auto m = state.range(0) ? keymatch::match_articles(articles, profiles)
                            : keymatch::match_articles_serial(articles, profiles);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_MatchArticles)->ArgNames({"parallel"})->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
