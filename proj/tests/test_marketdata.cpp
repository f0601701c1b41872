#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stocksent/error.hpp"
#include "stocksent/marketdata.hpp"
#include "test_support.hpp"

using namespace stocksent;
using namespace stocksent::marketdata;

namespace {

const char* kHeader = "ticker,date,open,high,low,close,volume\n";

}  // namespace

TEST(LoadPrices, MapsCsvFields) {
  auto table = parse_prices(std::string(kHeader) + "MSFT,2020-01-02,158.78,160.73,158.33,160.62,22622100\n",
                            PriceFormat::csv);
  ASSERT_EQ(table.size(), 1u);
  const auto& bar = table.at("MSFT").bars()[0];
  EXPECT_EQ(bar.ticker, "MSFT");
  EXPECT_EQ(bar.date, Date(2020, 1, 2));
  EXPECT_EQ(bar.open, 158.78);
  EXPECT_EQ(bar.high, 160.73);
  EXPECT_EQ(bar.low, 158.33);
  EXPECT_EQ(bar.close, 160.62);
  EXPECT_EQ(bar.volume, 22622100);
}

TEST(LoadPrices, EmptyInputWarns) {
  test_support::WarningCapture capture;
  EXPECT_TRUE(parse_prices("", PriceFormat::csv).empty());
  EXPECT_TRUE(parse_prices(kHeader, PriceFormat::csv).empty());
  EXPECT_TRUE(parse_prices("", PriceFormat::jsonl).empty());
  EXPECT_EQ(capture.warnings.size(), 3u);
}

TEST(LoadPrices, LowAboveHighNamesRowAndInvariant) {
  const std::string csv = std::string(kHeader) + "MSFT,2020-01-02,10,11,9,10,5\n" + "MSFT,2020-01-03,10,9,11,10,5\n";
  try {
    parse_prices(csv, PriceFormat::csv);
    FAIL() << "expected a load error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::data);
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("low <= high"), std::string::npos) << e.what();
  }
}

TEST(LoadPrices, RejectsDuplicatesMissingColumnsAndBadDates) {
  EXPECT_THROW(parse_prices(std::string(kHeader) + "A,2020-01-02,1,1,1,1,1\nA,2020-01-02,1,1,1,1,1\n", PriceFormat::csv),
               Error);
  EXPECT_THROW(parse_prices("ticker,date,open,high,low,close\nA,2020-01-02,1,1,1,1\n", PriceFormat::csv), Error);
  EXPECT_THROW(parse_prices(std::string(kHeader) + "A,2020-02-30,1,1,1,1,1\n", PriceFormat::csv), Error);
  EXPECT_THROW(parse_prices(std::string(kHeader) + "A,2020-02-03,1,1,1,1,-1\n", PriceFormat::csv), Error);
  EXPECT_THROW(parse_prices(R"({"ticker":"A","date":"2020-01-01","open":1})" "\n", PriceFormat::jsonl), Error);
}

TEST(LoadPrices, SortsByDateAndGroupsByTicker) {
  const std::string csv = std::string(kHeader) + "B,2020-01-03,2,2,2,2,1\n" + "A,2020-01-03,1,1,1,1,1\n" +
                          "A,2020-01-02,1,1,1,1,1\n";
  auto t = parse_prices(csv, PriceFormat::csv);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.at("A").bars()[0].date, Date(2020, 1, 2));
  EXPECT_EQ(t.at("A").bars()[1].date, Date(2020, 1, 3));
}

TEST(LoadPrices, RoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    PriceTable table;
    for (const char* t : {"AAA", "BBB"}) {
      table.emplace(t, PriceSeries(t, test_support::random_bars(rng, 40, t)));
    }
    for (auto fmt : {PriceFormat::csv, PriceFormat::jsonl}) {
      const auto text = serialize_prices(table, fmt);
      const auto back = parse_prices(text, fmt);
      ASSERT_EQ(back.size(), table.size());
      for (const auto& [ticker, series] : table) {
        const auto a = series.bars();
        const auto b = back.at(ticker).bars();
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
      }
      EXPECT_EQ(serialize_prices(back, fmt), text);
    }
  }
}

TEST(ComputeReturns, Examples) {
  auto r = compute_returns(test_support::bars_from_closes({100, 105}));
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_DOUBLE_EQ(r.entries[0].value, 0.05);

  r = compute_returns(test_support::bars_from_closes({100, 100, 100}));
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0].value, 0.0);
  EXPECT_EQ(r.entries[1].value, 0.0);

  const auto bars = test_support::bars_from_closes({200, 150});
  r = compute_returns(bars);
  EXPECT_DOUBLE_EQ(r.entries[0].value, -0.25);
  EXPECT_EQ(r.entries[0].date, bars[1].date);
}

TEST(ComputeReturns, Errors) {
  EXPECT_THROW(compute_returns(test_support::bars_from_closes({100})), Error);
  auto bars = test_support::bars_from_closes({100, 0.0});
  EXPECT_THROW(compute_returns(bars), Error);
}

TEST(ComputeReturns, ScaleInvarianceAndLogTelescoping) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const auto bars = test_support::random_bars(rng, 120);
    const auto base = compute_returns(bars);
    EXPECT_EQ(base.entries.size(), bars.size() - 1);

    auto scaled = bars;
    const double c = 0.37 + trial;
    for (auto& b : scaled) {
      b.open *= c;
      b.high *= c;
      b.low *= c;
      b.close *= c;
    }
    const auto s = compute_returns(scaled);
    double log_sum = 0.0;
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
      EXPECT_NEAR(base.entries[i].value, s.entries[i].value, 1e-12);
      log_sum += std::log1p(base.entries[i].value);
    }
    EXPECT_NEAR(log_sum, std::log(bars.back().close / bars.front().close), 1e-12);
  }
}
