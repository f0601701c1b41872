#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "stocksent/error.hpp"
#include "stocksent/indicators.hpp"
#include "test_support.hpp"

using namespace stocksent;
using namespace stocksent::indicators;
using stocksent::test_support::bars_from_closes;
using stocksent::test_support::random_bars;

namespace {

std::vector<std::optional<double>> run_stream(const IndicatorSpec& spec, std::span<const PriceBar> bars,
                                              const AuxInputs& aux = {}) {
  IndicatorStream s(spec, aux);
  std::vector<std::optional<double>> out;
  for (const auto& b : bars) out.push_back(s.update(b));
  return out;
}

// Straightforward EMA recurrence: seed with the mean of the first w values.
std::vector<double> naive_ema(const std::vector<double>& x, std::size_t w) {
  std::vector<double> out;
  double seed = 0.0;
  for (std::size_t i = 0; i < w; ++i) seed += x[i];
  double prev = seed / static_cast<double>(w);
  out.push_back(prev);
  const double mult = 2.0 / (static_cast<double>(w) + 1.0);
  for (std::size_t i = w; i < x.size(); ++i) {
    prev = x[i] * mult + prev * (1.0 - mult);
    out.push_back(prev);
  }
  return out;
}

TradeLog sample_trades() {
  return {{Date(2020, 1, 10), 5.0}, {Date(2020, 1, 20), -2.0}, {Date(2020, 2, 5), 1.0}, {Date(2020, 3, 1), -1.0}};
}

BreadthSeries sample_breadth(std::span<const PriceBar> bars, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(100, 2000);
  BreadthSeries b;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    if (i % 37 == 36) continue;  // missing day
    b.push_back({bars[i].date, u(rng), u(rng)});
  }
  return b;
}

}  // namespace

TEST(Indicators, MovingAverageWindowTwo) {
  const auto s = compute(make_spec("ma", {{"window", 2}}), bars_from_closes({1, 2, 3, 4}));
  ASSERT_EQ(s.values.size(), 4u);
  EXPECT_FALSE(s.values[0]);
  EXPECT_EQ(*s.values[1], 1.5);
  EXPECT_EQ(*s.values[2], 2.5);
  EXPECT_EQ(*s.values[3], 3.5);
}

TEST(Indicators, RsiOfIncreasingSeriesIs100) {
  std::vector<double> closes;
  for (int i = 0; i < 40; ++i) closes.push_back(50.0 + i * 0.7);
  const auto s = compute(make_spec("rsi", {{"window", 14}}), bars_from_closes(closes));
  int defined = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    EXPECT_EQ(s.values[i].has_value(), i >= 14);
    if (s.values[i]) {
      EXPECT_EQ(*s.values[i], 100.0);
      ++defined;
    }
  }
  EXPECT_EQ(defined, 26);
}

TEST(Indicators, RsiLimits) {
  std::vector<double> down;
  for (int i = 0; i < 30; ++i) down.push_back(100.0 - i);
  EXPECT_EQ(*compute(make_spec("rsi"), bars_from_closes(down)).values.back(), 0.0);
  const auto flat = compute(make_spec("rsi"), bars_from_closes(std::vector<double>(30, 7.0)));
  EXPECT_EQ(*flat.values.back(), 50.0);
}

TEST(Indicators, EmaMatchesNaiveRecurrence) {
  const std::vector<double> closes{10, 11, 12, 13, 14};
  const auto oracle = naive_ema(closes, 3);
  ASSERT_EQ(oracle.size(), 3u);
  EXPECT_DOUBLE_EQ(oracle.back(), 13.0);  // frozen oracle output: 11 -> 12 -> 13

  const auto s = compute(make_spec("ema", {{"window", 3}}), bars_from_closes(closes));
  EXPECT_FALSE(s.values[0]);
  EXPECT_FALSE(s.values[1]);
  for (std::size_t i = 2; i < closes.size(); ++i) EXPECT_NEAR(*s.values[i], oracle[i - 2], 1e-12);
  EXPECT_NEAR(*s.values.back(), 13.0, 1e-12);

  std::mt19937_64 rng(3);
  const auto bars = random_bars(rng, 200);
  std::vector<double> cl;
  for (const auto& b : bars) cl.push_back(b.close);
  const auto big = compute(make_spec("ema", {{"window", 20}}), bars);
  const auto naive = naive_ema(cl, 20);
  for (std::size_t i = 19; i < cl.size(); ++i) EXPECT_NEAR(*big.values[i], naive[i - 19], 1e-9);
}

TEST(Indicators, WilliamsRAtWindowHighIsZero) {
  std::vector<double> closes;
  for (int i = 0; i < 20; ++i) closes.push_back(100.0 + std::sin(i) * 3.0);
  closes.push_back(120.0);  // new 14-day high
  auto bars = bars_from_closes(closes);
  const auto s = compute(make_spec("williams_r", {{"window", 14}}), bars);
  EXPECT_EQ(*s.values.back(), 0.0);
}

TEST(Indicators, FlatWindowConventions) {
  const auto bars = bars_from_closes(std::vector<double>(20, 42.0));
  EXPECT_EQ(*compute(make_spec("stoch_k"), bars).values.back(), 50.0);
  EXPECT_EQ(*compute(make_spec("williams_r"), bars).values.back(), -50.0);
  EXPECT_EQ(*compute(make_spec("cci"), bars_from_closes(std::vector<double>(30, 42.0))).values.back(), 0.0);
}

TEST(Indicators, MacdZeroOnConstantPrices) {
  const auto bars = bars_from_closes(std::vector<double>(80, 25.0));
  for (const char* name : {"macd", "macd_signal", "macd_hist"}) {
    const auto batch = compute(make_spec(name), bars);
    const auto stream = run_stream(make_spec(name), bars);
    int defined = 0;
    for (std::size_t i = 0; i < bars.size(); ++i) {
      ASSERT_EQ(batch.values[i].has_value(), stream[i].has_value());
      if (stream[i]) {
        EXPECT_NEAR(*stream[i], 0.0, 1e-12) << name;
        ++defined;
      }
    }
    EXPECT_GT(defined, 0);
  }
}

TEST(Indicators, UnknownNameListsCatalog) {
  try {
    make_spec("frobnicate");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("rsi"), std::string::npos);
    EXPECT_NE(msg.find("williams_r"), std::string::npos);
  }
  EXPECT_THROW(make_spec("ma", {{"window", 0}}), Error);
  EXPECT_THROW(make_spec("ma", {{"window", 2.5}}), Error);
  EXPECT_THROW(make_spec("ma", {{"span", 3}}), Error);
}

TEST(Indicators, ParseSpecAndAliases) {
  const auto s = parse_spec("ma:window=2");
  EXPECT_EQ(s.name, "ma");
  EXPECT_EQ(s.params.at("window"), 2.0);
  EXPECT_EQ(s.id(), "ma(window=2)");
  EXPECT_EQ(parse_spec("sma:window=3").name, "ma");
  EXPECT_EQ(parse_spec("W%R").name, "williams_r");
  EXPECT_EQ(parse_spec("macd").id(), "macd(fast=12,slow=26)");
  EXPECT_EQ(parse_spec("bb_upper:k=1.5").id(), "bb_upper(k=1.5,window=20)");
  EXPECT_THROW(parse_spec("ma:window"), Error);
}

TEST(Indicators, WindowLongerThanSeriesIsUndefinedWithWarning) {
  stocksent::test_support::WarningCapture capture;
  const auto s = compute(make_spec("ma", {{"window", 50}}), bars_from_closes({1, 2, 3}));
  for (const auto& v : s.values) EXPECT_FALSE(v);
  EXPECT_EQ(capture.warnings.size(), 1u);
}

TEST(Indicators, RejectsUnsortedBars) {
  auto bars = bars_from_closes({1, 2, 3});
  std::swap(bars[0], bars[2]);
  EXPECT_THROW(compute(make_spec("ma", {{"window", 2}}), bars), Error);
}

TEST(ComputeAll, DefaultCatalogMatchesSingleSpecPath) {
  std::mt19937_64 rng(300);
  const auto bars = random_bars(rng, 300);
  const auto specs = default_specs();
  EXPECT_GE(specs.size(), 45u);
  const auto table = compute_all(specs, bars);
  const auto serial = compute_all_serial(specs, bars);
  ASSERT_EQ(table.columns.size(), specs.size());
  std::set<std::string> ids;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const auto& col = table.columns[c];
    ASSERT_FALSE(col.error) << *col.error;
    ids.insert(col.id);
    const auto single = compute(specs[c], bars);
    for (std::size_t i = 0; i < bars.size(); ++i) {
      ASSERT_EQ(col.series->values[i].has_value(), single.values[i].has_value()) << col.id;
      if (single.values[i]) {
        // bit-for-bit
        EXPECT_EQ(*col.series->values[i], *single.values[i]) << col.id;
        EXPECT_EQ(*serial.columns[c].series->values[i], *single.values[i]) << col.id;
      }
    }
  }
  EXPECT_EQ(ids.size(), specs.size());
}

TEST(ComputeAll, EmptySpecListAndPerSpecErrors) {
  const auto bars = bars_from_closes({1, 2, 3, 4});
  EXPECT_TRUE(compute_all({}, bars).columns.empty());

  const std::vector<IndicatorSpec> specs{make_spec("ma", {{"window", 2}}), make_spec("pp"),
                                         make_spec("ma", {{"window", 3}})};
  const auto t = compute_all(specs, bars);
  ASSERT_EQ(t.columns.size(), 3u);
  EXPECT_FALSE(t.columns[0].error);
  ASSERT_TRUE(t.columns[1].error);
  EXPECT_NE(t.columns[1].error->find("trade log"), std::string::npos);
  EXPECT_FALSE(t.columns[2].error);
  EXPECT_NE(t.columns[0].id, t.columns[2].id);
}

TEST(ComputeAll, CsvUsesEmptyCellsForUndefined) {
  const auto t = compute_all(std::vector{make_spec("ma", {{"window", 2}})}, bars_from_closes({1, 2, 3, 4}));
  EXPECT_EQ(table_to_csv(t),
            "date,ma(window=2)\n2021-03-01,\n2021-03-02,1.5\n2021-03-03,2.5\n2021-03-04,3.5\n");
  const auto jsonl = table_to_jsonl(t);
  EXPECT_NE(jsonl.find(R"x({"date":"2021-03-01","ma(window=2)":null})x"), std::string::npos);
}

TEST(Stream, FirstBarOfMovingAverageIsUndefined) {
  IndicatorStream s(make_spec("ma", {{"window", 5}}));
  EXPECT_FALSE(s.update(bars_from_closes({10})[0]));
}

TEST(Stream, RejectsOutOfOrderDates) {
  const auto bars = bars_from_closes({1, 2, 3});
  IndicatorStream s(make_spec("ema", {{"window", 2}}));
  s.update(bars[1]);
  EXPECT_THROW(s.update(bars[0]), Error);
  EXPECT_THROW(s.update(bars[1]), Error);
}

TEST(Stream, MatchesBatchForEveryCatalogIndicator) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const auto bars = random_bars(rng, 300);
    const auto trades = sample_trades();
    const auto breadth = sample_breadth(bars, rng);
    const AuxInputs aux{&trades, &breadth};
    for (const auto& entry : catalog()) {
      const auto spec = make_spec(entry.name);
      const auto batch = compute(spec, bars, aux);
      const auto stream = run_stream(spec, bars, aux);
      for (std::size_t i = 0; i < bars.size(); ++i) {
        ASSERT_EQ(batch.values[i].has_value(), stream[i].has_value()) << entry.name << " at " << i;
        if (stream[i]) EXPECT_NEAR(*batch.values[i], *stream[i], 1e-9) << entry.name << " at " << i;
      }
    }
  }
}

TEST(Invariants, ShiftInvariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto bars = random_bars(rng, 200);
    auto shifted = bars;
    for (auto& b : shifted) {
      b.open += 37.5;
      b.high += 37.5;
      b.low += 37.5;
      b.close += 37.5;
    }
    for (const char* name : {"williams_r", "stoch_k", "stoch_d", "aroon_up", "aroon_down", "rsi"}) {
      const auto a = compute(make_spec(name), bars);
      const auto b = compute(make_spec(name), shifted);
      for (std::size_t i = 0; i < bars.size(); ++i) {
        ASSERT_EQ(a.values[i].has_value(), b.values[i].has_value());
        if (a.values[i]) EXPECT_NEAR(*a.values[i], *b.values[i], 1e-9) << name;
      }
    }
  }
}

TEST(Invariants, ScaleInvariance) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto bars = random_bars(rng, 200);
    auto scaled = bars;
    const double c = 3.25;
    for (auto& b : scaled) {
      b.open *= c;
      b.high *= c;
      b.low *= c;
      b.close *= c;
    }
    for (const char* name : {"roc", "ppc", "rdp", "ror", "disparity", "bias"}) {
      const auto a = compute(make_spec(name), bars);
      const auto b = compute(make_spec(name), scaled);
      for (std::size_t i = 0; i < bars.size(); ++i) {
        if (a.values[i]) EXPECT_NEAR(*a.values[i], *b.values[i], 1e-9) << name;
      }
    }
  }
}

TEST(Invariants, Bounds) {
  std::mt19937_64 rng(8);
  auto check = [](const IndicatorSeries& s, double lo, double hi) {
    for (const auto& v : s.values) {
      if (v) {
        EXPECT_GE(*v, lo) << s.spec.id();
        EXPECT_LE(*v, hi) << s.spec.id();
      }
    }
  };
  for (int trial = 0; trial < 20; ++trial) {
    const auto bars = random_bars(rng, 300);
    const auto trades = sample_trades();
    const AuxInputs aux{&trades, nullptr};
    for (const char* name : {"rsi", "stoch_k", "stoch_d", "slow", "aroon_up", "aroon_down", "uo"}) {
      check(compute(make_spec(name), bars), 0.0, 100.0);
    }
    check(compute(make_spec("pp"), bars, aux), 0.0, 100.0);
    check(compute(make_spec("williams_r"), bars), -100.0, 0.0);
    check(compute(make_spec("mdd"), bars), 0.0, 1.0);
  }
}

TEST(Invariants, ObvTelescopes) {
  std::mt19937_64 rng(9);
  const auto bars = random_bars(rng, 150);
  const auto obv = compute(make_spec("obv"), bars);
  double signed_sum = 0.0;
  for (std::size_t i = 1; i < bars.size(); ++i) {
    if (bars[i].close > bars[i - 1].close) signed_sum += static_cast<double>(bars[i].volume);
    if (bars[i].close < bars[i - 1].close) signed_sum -= static_cast<double>(bars[i].volume);
  }
  EXPECT_EQ(*obv.values.back() - *obv.values.front(), signed_sum);
}

TEST(AuxIndicators, ProbabilityOfWinningAndBreadth) {
  auto bars = bars_from_closes(std::vector<double>(70, 10.0));  // 2021-03-01 onward
  const TradeLog trades{{Date(2021, 3, 3), 2.0}, {Date(2021, 3, 5), -1.0}, {Date(2021, 3, 5), 4.0}};
  const auto pp = compute(make_spec("pp"), bars, {&trades, nullptr});
  EXPECT_FALSE(pp.values[1]);
  EXPECT_EQ(*pp.values[2], 100.0);
  EXPECT_EQ(*pp.values[3], 100.0);
  EXPECT_NEAR(*pp.values[4], 200.0 / 3.0, 1e-12);

  BreadthSeries breadth;
  for (std::size_t i = 0; i < bars.size(); ++i) breadth.push_back({bars[i].date, 3.0, 1.0});
  const auto br = compute(make_spec("br", {{"window", 3}}), bars, {nullptr, &breadth});
  EXPECT_FALSE(br.values[1]);
  EXPECT_DOUBLE_EQ(*br.values[2], 0.75);

  EXPECT_THROW(compute(make_spec("br"), bars), Error);
  EXPECT_THROW(IndicatorStream(make_spec("pp")), Error);
}
