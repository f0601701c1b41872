#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "stocksent/util.hpp"

namespace stocksent::indicators {

namespace {

CatalogEntry entry(std::string name, std::string summary, std::map<std::string, double> defaults,
                   std::vector<std::string> integer_params = {}, Requires req = Requires::bars) {
  if (integer_params.empty()) {
    for (const auto& [k, v] : defaults) integer_params.push_back(k);
  }
  return {std::move(name), std::move(summary), std::move(defaults), std::move(integer_params), req};
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> c = {
      entry("ac", "AO - SMA_smooth(AO)", {{"fast", 5}, {"slow", 34}, {"smooth", 5}}),
      entry("ad", "cumulative CLV * volume, CLV = ((C-L)-(H-C))/(H-L)", {}),
      entry("ao", "SMA_fast(median) - SMA_slow(median)", {{"fast", 5}, {"slow", 34}}),
      entry("aroon_down", "100 * (w - bars since lowest low) / w over w+1 bars", {{"window", 25}}),
      entry("aroon_osc", "aroon_up - aroon_down", {{"window", 25}}),
      entry("aroon_up", "100 * (w - bars since highest high) / w over w+1 bars", {{"window", 25}}),
      entry("atr", "Wilder average of true range", {{"window", 14}}),
      entry("bb_lower", "SMA - k * Std", {{"k", 2}, {"window", 20}}, {"window"}),
      entry("bb_middle", "SMA", {{"k", 2}, {"window", 20}}, {"window"}),
      entry("bb_upper", "SMA + k * Std", {{"k", 2}, {"window", 20}}, {"window"}),
      entry("bias", "100 * (C - MA_w) / MA_w", {{"window", 5}}),
      entry("br", "SMA_w of advancers / (advancers + decliners)", {{"window", 10}}, {}, Requires::breadth),
      entry("cci", "(TP - SMA(TP)) / (0.015 * mean deviation), TP = (H+L+C)/3", {{"window", 20}}),
      entry("cho", "EMA_fast(AD) - EMA_slow(AD)", {{"fast", 3}, {"slow", 10}}),
      entry("disparity", "100 * C / MA_w", {{"window", 5}}),
      entry("ema", "EMA seeded with SMA of the first window, multiplier 2/(w+1)", {{"window", 10}}),
      entry("highest", "highest close over w bars", {{"window", 10}}),
      entry("lowest", "lowest close over w bars", {{"window", 10}}),
      entry("ma", "arithmetic mean of closes over w bars", {{"window", 10}}),
      entry("macd", "EMA_fast - EMA_slow", {{"fast", 12}, {"slow", 26}}),
      entry("macd_hist", "MACD - signal line", {{"fast", 12}, {"signal", 9}, {"slow", 26}}),
      entry("macd_signal", "EMA_signal of MACD", {{"fast", 12}, {"signal", 9}, {"slow", 26}}),
      entry("mdd", "max peak-to-trough fractional decline of closes over w bars", {{"window", 20}}),
      entry("median", "(H + L) / 2", {}),
      entry("mome", "C_t - C_{t-w}", {{"window", 10}}),
      entry("obv", "cumulative signed volume", {}),
      entry("obv_ema", "EMA_w of OBV", {{"window", 10}}),
      entry("oscp", "(MA_short - MA_long) / MA_short", {{"long", 10}, {"short", 5}}),
      entry("pc", "C_t - C_{t-w}", {{"window", 1}}),
      entry("pp", "100 * winning trades / closed trades up to date", {}, {}, Requires::trade_log),
      entry("ppc", "100 * (C_t - C_{t-w}) / C_{t-w}", {{"window", 1}}),
      entry("rdp", "100 * (C_t - C_{t-w}) / C_{t-w}", {{"window", 5}}),
      entry("roc", "100 * (C_t - C_{t-w}) / C_{t-w}", {{"window", 10}}),
      entry("ror", "(C_t - C_{t-w}) / C_{t-w}", {{"window", 20}}),
      entry("rsi", "100 - 100 / (1 + RS), Wilder-smoothed gains and losses", {{"window", 14}}),
      entry("slow", "SMA_smooth of %D", {{"smooth", 3}, {"window", 14}}),
      entry("std", "population standard deviation of closes over w bars", {{"window", 20}}),
      entry("stoch_d", "SMA_smooth of %K", {{"smooth", 3}, {"window", 14}}),
      entry("stoch_k", "100 * (C - L_w) / (H_w - L_w); 50 on a flat window", {{"window", 14}}),
      entry("tr", "max(H - L, |H - C_prev|, |L - C_prev|)", {}),
      entry("tsi", "100 * EMA_short(EMA_long(dC)) / EMA_short(EMA_long(|dC|))", {{"long", 25}, {"short", 13}}),
      entry("ui", "RMS of percent drawdown from the w-bar high, over w bars", {{"window", 14}}),
      entry("uo", "100 * (4 A_short + 2 A_mid + A_long) / 7, A = sum BP / sum TR",
            {{"long", 28}, {"mid", 14}, {"short", 7}}),
      entry("vr", "EMA_short(TR) / EMA_long(TR)", {{"long", 20}, {"short", 5}}),
      entry("vroc", "100 * (V_t - V_{t-w}) / V_{t-w}", {{"window", 10}}),
      entry("williams_r", "-100 * (H_w - C) / (H_w - L_w); -50 on a flat window", {{"window", 14}}),
      entry("wma", "linearly weighted mean of closes, newest weight w", {{"window", 10}}),
  };
  std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return c;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> m = {
      {"%d", "stoch_d"},      {"%k", "stoch_k"},   {"acd", "ad"},          {"bi", "bias"},
      {"chaikin", "cho"},     {"d", "disparity"},  {"ht", "highest"},      {"k", "stoch_k"},
      {"lt", "lowest"},       {"makd", "stoch_d"}, {"mom", "mome"},        {"momentum", "mome"},
      {"mt", "median"},       {"op", "oscp"},      {"rate_of_return", "ror"}, {"signal", "macd_signal"},
      {"sl", "macd_signal"},  {"sma", "ma"},       {"stddev", "std"},      {"w%r", "williams_r"},
      {"wr", "williams_r"},
  };
  return m;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.push_back(e.name);
  return names;
}

std::string IndicatorSpec::id() const {
  std::string out = name + "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out += ',';
    out += k + "=" + format_double(v);
    first = false;
  }
  return out + ")";
}

IndicatorSpec make_spec(std::string_view raw_name, const std::map<std::string, double>& params) {
  std::string name = to_lower(trim(raw_name));
  if (auto a = aliases().find(name); a != aliases().end()) name = a->second;
  const auto& cat = catalog();
  auto it = std::find_if(cat.begin(), cat.end(), [&](const CatalogEntry& e) { return e.name == name; });
  if (it == cat.end()) {
    std::string names;
    for (const auto& e : cat) names += (names.empty() ? "" : ", ") + e.name;
    fail(ErrorKind::config, "unknown indicator '" + std::string(raw_name) + "'; supported: " + names);
  }
  IndicatorSpec spec{name, it->defaults};
  for (const auto& [k, v] : params) {
    if (!it->defaults.contains(k)) {
      fail(ErrorKind::config, name + ": unknown parameter '" + k + "'");
    }
    spec.params[k] = v;
  }
  for (const auto& [k, v] : spec.params) {
    const bool integral = std::find(it->integer_params.begin(), it->integer_params.end(), k) != it->integer_params.end();
    if (!std::isfinite(v)) fail(ErrorKind::config, name + ": parameter '" + k + "' must be finite");
    if (integral && (v < 1.0 || v != std::floor(v))) {
      fail(ErrorKind::config, name + ": parameter '" + k + "' must be an integer >= 1");
    }
    if (!integral && v <= 0.0) fail(ErrorKind::config, name + ": parameter '" + k + "' must be > 0");
  }
  return spec;
}

IndicatorSpec parse_spec(std::string_view text) {
  const auto colon = text.find(':');
  std::map<std::string, double> params;
  if (colon != std::string_view::npos) {
    for (const auto& kv : split(text.substr(colon + 1), ',')) {
      if (trim(kv).empty()) continue;
      const auto eq = kv.find('=');
      if (eq == std::string::npos) fail(ErrorKind::config, "bad indicator parameter '" + kv + "', expected k=v");
      try {
        params[to_lower(trim(kv.substr(0, eq)))] = parse_double(kv.substr(eq + 1));
      } catch (const Error&) {
        fail(ErrorKind::config, "bad indicator parameter value in '" + kv + "'");
      }
    }
  }
  return make_spec(text.substr(0, colon), params);
}

std::vector<IndicatorSpec> default_specs() {
  std::vector<IndicatorSpec> out;
  auto add = [&](std::string_view name, std::map<std::string, double> p = {}) { out.push_back(make_spec(name, p)); };
  for (double w : {5, 10, 20, 50}) add("ma", {{"window", w}});
  for (double w : {5, 10, 20, 50}) add("ema", {{"window", w}});
  for (double w : {10, 20}) add("wma", {{"window", w}});
  add("macd");
  add("macd_signal");
  add("macd_hist");
  for (double w : {6, 14}) add("rsi", {{"window", w}});
  add("stoch_k");
  add("stoch_d");
  add("slow");
  add("williams_r");
  add("roc");
  add("mome");
  add("tr");
  add("atr");
  add("cci");
  add("obv");
  add("obv_ema");
  for (double w : {5, 10}) add("disparity", {{"window", w}});
  for (double w : {5, 10}) add("bias", {{"window", w}});
  add("oscp");
  add("rdp");
  add("mdd");
  add("median");
  add("highest");
  add("lowest");
  add("std");
  add("bb_upper");
  add("bb_middle");
  add("bb_lower");
  add("tsi");
  add("ui");
  add("uo");
  add("aroon_up");
  add("aroon_down");
  add("aroon_osc");
  add("ad");
  add("cho");
  add("ao");
  add("ac");
  add("vroc");
  add("vr");
  add("pc");
  add("ppc");
  add("ror");
  return out;
}

}  // namespace stocksent::indicators
