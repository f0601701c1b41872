#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stocksent/date.hpp"

namespace stocksent::marketdata {

inline constexpr double kPriceTolerance = 1e-9;

struct PriceBar {
  std::string ticker;
  Date date;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  std::int64_t volume = 0;

  friend bool operator==(const PriceBar&, const PriceBar&) = default;
};

/// Returns an empty string when the bar is valid, otherwise the violated invariant.
std::string check_bar(const PriceBar& bar);

/// Bars of one ticker, strictly increasing by date. Immutable once built.
class PriceSeries {
 public:
  PriceSeries() = default;
  /// Sorts by date and validates every bar. Throws Error(data) on a violated invariant.
  PriceSeries(std::string ticker, std::vector<PriceBar> bars);

  const std::string& ticker() const { return ticker_; }
  std::span<const PriceBar> bars() const { return bars_; }
  std::size_t size() const { return bars_.size(); }
  bool empty() const { return bars_.empty(); }

 private:
  std::string ticker_;
  std::vector<PriceBar> bars_;
};

using PriceTable = std::map<std::string, PriceSeries>;

enum class PriceFormat { csv, jsonl };

PriceFormat format_from_path(const std::filesystem::path& path);

PriceTable load_prices(const std::filesystem::path& path, PriceFormat format);
PriceTable parse_prices(std::string_view content, PriceFormat format);
std::string serialize_prices(const PriceTable& table, PriceFormat format);

struct ReturnEntry {
  Date date;
  double value = 0.0;
};

struct ReturnSeries {
  std::string ticker;
  std::vector<ReturnEntry> entries;
};

/// Relative change of consecutive closes, dated at the later bar.
ReturnSeries compute_returns(std::span<const PriceBar> bars);

}  // namespace stocksent::marketdata
