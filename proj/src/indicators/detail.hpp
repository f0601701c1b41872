#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stocksent/error.hpp"
#include "stocksent/indicators.hpp"

namespace stocksent::indicators::detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Range below which a high/low window is treated as flat.
inline constexpr double kFlatRange = 1e-9;

inline double param(const IndicatorSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) fail(ErrorKind::config, spec.name + ": missing parameter '" + key + "'");
  return it->second;
}

inline std::size_t iparam(const IndicatorSpec& spec, const std::string& key) {
  return static_cast<std::size_t>(param(spec, key));
}

inline double rsi_from_averages(double gain, double loss) {
  if (gain == 0.0 && loss == 0.0) return 50.0;
  if (loss == 0.0) return 100.0;
  if (gain == 0.0) return 0.0;
  return 100.0 - 100.0 / (1.0 + gain / loss);
}

inline double clamp_percent(double v) { return v < 0.0 ? 0.0 : (v > 100.0 ? 100.0 : v); }

inline double stochastic_k(double close, double lowest_low, double highest_high) {
  const double range = highest_high - lowest_low;
  if (range < kFlatRange) return 50.0;
  return clamp_percent(100.0 * (close - lowest_low) / range);
}

inline double williams_r(double close, double lowest_low, double highest_high) {
  const double range = highest_high - lowest_low;
  if (range < kFlatRange) return -50.0;
  return -clamp_percent(100.0 * (highest_high - close) / range);
}

inline double cci_value(double tp, double mean, double mean_dev) {
  if (mean_dev <= 1e-12 * std::max(1.0, std::abs(mean))) return 0.0;
  return (tp - mean) / (0.015 * mean_dev);
}

inline double close_location(const PriceBar& b) {
  const double range = b.high - b.low;
  if (range < kFlatRange) return 0.0;
  return ((b.close - b.low) - (b.high - b.close)) / range;
}

inline double obv_step(double close, double prev_close, double volume) {
  const double diff = close - prev_close;
  if (std::abs(diff) <= marketdata::kPriceTolerance) return 0.0;
  return diff > 0.0 ? volume : -volume;
}

inline double true_range(const PriceBar& b, const double* prev_close) {
  if (!prev_close) return b.high - b.low;
  return std::max({b.high - b.low, std::abs(b.high - *prev_close), std::abs(b.low - *prev_close)});
}

inline double breadth_ratio(const BreadthDay& d) {
  const double total = d.advancers + d.decliners;
  return total > 0.0 ? d.advancers / total : kNaN;
}

}  // namespace stocksent::indicators::detail
