// Array formulation of every catalog indicator. Undefined entries are NaN until the
// final conversion to std::optional.

#include <algorithm>
#include <cmath>
#include <map>

#include "detail.hpp"
#include "stocksent/util.hpp"

namespace stocksent::indicators {

namespace {

using detail::kNaN;
using Vec = std::vector<double>;

bool defined(double x) { return !std::isnan(x); }

std::size_t first_defined(const Vec& x) {
  std::size_t i = 0;
  while (i < x.size() && !defined(x[i])) ++i;
  return i;
}

Vec sma(const Vec& x, std::size_t w) {
  Vec out(x.size(), kNaN);
  const std::size_t s = first_defined(x);
  for (std::size_t i = s + w - 1; i < x.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = i + 1 - w; j <= i; ++j) sum += x[j];
    out[i] = sum / static_cast<double>(w);
  }
  return out;
}

// Seeded with the SMA of the first w defined values.
Vec ema(const Vec& x, std::size_t w) {
  Vec out(x.size(), kNaN);
  const std::size_t s = first_defined(x);
  const std::size_t seed = s + w - 1;
  if (seed >= x.size()) return out;
  const double k = 2.0 / (static_cast<double>(w) + 1.0);
  double sum = 0.0;
  for (std::size_t j = s; j <= seed; ++j) sum += x[j];
  double e = sum / static_cast<double>(w);
  out[seed] = e;
  for (std::size_t i = seed + 1; i < x.size(); ++i) {
    e = (x[i] - e) * k + e;
    out[i] = e;
  }
  return out;
}

Vec wilder(const Vec& x, std::size_t w) {
  Vec out(x.size(), kNaN);
  const std::size_t s = first_defined(x);
  const std::size_t seed = s + w - 1;
  if (seed >= x.size()) return out;
  const double wd = static_cast<double>(w);
  double sum = 0.0;
  for (std::size_t j = s; j <= seed; ++j) sum += x[j];
  double e = sum / wd;
  out[seed] = e;
  for (std::size_t i = seed + 1; i < x.size(); ++i) {
    e = (e * (wd - 1.0) + x[i]) / wd;
    out[i] = e;
  }
  return out;
}

Vec binary(const Vec& a, const Vec& b, auto op) {
  Vec out(a.size(), kNaN);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (defined(a[i]) && defined(b[i])) out[i] = op(a[i], b[i]);
  }
  return out;
}

struct Columns {
  Vec open, high, low, close, volume;
  std::vector<Date> dates;
};

Columns columns(std::span<const PriceBar> bars) {
  Columns c;
  for (const auto& b : bars) {
    c.open.push_back(b.open);
    c.high.push_back(b.high);
    c.low.push_back(b.low);
    c.close.push_back(b.close);
    c.volume.push_back(static_cast<double>(b.volume));
    c.dates.push_back(b.date);
  }
  return c;
}

// v[i] = f(x[i], x[i-w]) for i >= w
Vec lookback(const Vec& x, std::size_t w, auto f) {
  Vec out(x.size(), kNaN);
  for (std::size_t i = w; i < x.size(); ++i) out[i] = f(x[i], x[i - w]);
  return out;
}

Vec true_range(std::span<const PriceBar> bars) {
  Vec out(bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) {
    out[i] = detail::true_range(bars[i], i == 0 ? nullptr : &bars[i - 1].close);
  }
  return out;
}

Vec median_price(const Columns& c) {
  Vec out(c.close.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (c.high[i] + c.low[i]) / 2.0;
  return out;
}

Vec close_diff(const Vec& close) {
  Vec out(close.size(), kNaN);
  for (std::size_t i = 1; i < close.size(); ++i) out[i] = close[i] - close[i - 1];
  return out;
}

Vec obv(const Columns& c) {
  Vec out(c.close.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i > 0) acc += detail::obv_step(c.close[i], c.close[i - 1], c.volume[i]);
    out[i] = acc;
  }
  return out;
}

Vec ad_line(std::span<const PriceBar> bars) {
  Vec out(bars.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    acc += detail::close_location(bars[i]) * static_cast<double>(bars[i].volume);
    out[i] = acc;
  }
  return out;
}

Vec window_extreme(const Vec& x, std::size_t w, bool want_max) {
  Vec out(x.size(), kNaN);
  for (std::size_t i = w - 1; i < x.size(); ++i) {
    double m = x[i + 1 - w];
    for (std::size_t j = i + 2 - w; j <= i; ++j) m = want_max ? std::max(m, x[j]) : std::min(m, x[j]);
    out[i] = m;
  }
  return out;
}

Vec stddev(const Vec& x, std::size_t w) {
  Vec out(x.size(), kNaN);
  const Vec mean = sma(x, w);
  for (std::size_t i = w - 1; i < x.size(); ++i) {
    double ss = 0.0;
    for (std::size_t j = i + 1 - w; j <= i; ++j) ss += (x[j] - mean[i]) * (x[j] - mean[i]);
    out[i] = std::sqrt(ss / static_cast<double>(w));
  }
  return out;
}

Vec stochastic(const Columns& c, std::size_t w) {
  const Vec hh = window_extreme(c.high, w, true);
  const Vec ll = window_extreme(c.low, w, false);
  Vec out(c.close.size(), kNaN);
  for (std::size_t i = w - 1; i < out.size(); ++i) out[i] = detail::stochastic_k(c.close[i], ll[i], hh[i]);
  return out;
}

Vec macd_line(const Vec& close, std::size_t fast, std::size_t slow) {
  return binary(ema(close, fast), ema(close, slow), std::minus<>{});
}

Vec aroon(const Columns& c, std::size_t w, bool up) {
  Vec out(c.close.size(), kNaN);
  const Vec& x = up ? c.high : c.low;
  for (std::size_t i = w; i < x.size(); ++i) {
    std::size_t best = i - w;
    for (std::size_t j = i - w; j <= i; ++j) {
      if (up ? x[j] >= x[best] : x[j] <= x[best]) best = j;
    }
    out[i] = 100.0 * static_cast<double>(w - (i - best)) / static_cast<double>(w);
  }
  return out;
}

// Largest (C_a - C_b) / C_a over all a <= b inside the window.
Vec max_drawdown(const Vec& close, std::size_t w) {
  Vec out(close.size(), kNaN);
  for (std::size_t i = w - 1; i < close.size(); ++i) {
    double worst = 0.0;
    for (std::size_t a = i + 1 - w; a <= i; ++a) {
      for (std::size_t b = a; b <= i; ++b) worst = std::max(worst, (close[a] - close[b]) / close[a]);
    }
    out[i] = worst;
  }
  return out;
}

Vec ulcer(const Vec& close, std::size_t w) {
  const Vec peak = window_extreme(close, w, true);
  Vec pct(close.size(), kNaN);
  for (std::size_t i = w - 1; i < close.size(); ++i) pct[i] = 100.0 * (close[i] - peak[i]) / peak[i];
  Vec out(close.size(), kNaN);
  for (std::size_t i = 2 * w - 2; i < close.size(); ++i) {
    double ss = 0.0;
    for (std::size_t j = i + 1 - w; j <= i; ++j) ss += pct[j] * pct[j];
    out[i] = std::sqrt(ss / static_cast<double>(w));
  }
  return out;
}

Vec ultimate(const Columns& c, std::size_t s, std::size_t m, std::size_t l) {
  const std::size_t n = c.close.size();
  Vec bp(n, kNaN), tr(n, kNaN);
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = std::min(c.low[i], c.close[i - 1]);
    const double hi = std::max(c.high[i], c.close[i - 1]);
    bp[i] = c.close[i] - lo;
    tr[i] = hi - lo;
  }
  auto avg = [&](std::size_t i, std::size_t k) {
    double sb = 0.0, st = 0.0;
    for (std::size_t j = i + 1 - k; j <= i; ++j) {
      sb += bp[j];
      st += tr[j];
    }
    return st > 0.0 ? sb / st : 0.5;
  };
  Vec out(n, kNaN);
  const std::size_t start = std::max({s, m, l});
  for (std::size_t i = start; i < n; ++i) out[i] = 100.0 * (4.0 * avg(i, s) + 2.0 * avg(i, m) + avg(i, l)) / 7.0;
  return out;
}

Vec cci(std::span<const PriceBar> bars, std::size_t w) {
  Vec tp(bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) tp[i] = (bars[i].high + bars[i].low + bars[i].close) / 3.0;
  const Vec mean = sma(tp, w);
  Vec out(tp.size(), kNaN);
  for (std::size_t i = w - 1; i < tp.size(); ++i) {
    double dev = 0.0;
    for (std::size_t j = i + 1 - w; j <= i; ++j) dev += std::abs(tp[j] - mean[i]);
    out[i] = detail::cci_value(tp[i], mean[i], dev / static_cast<double>(w));
  }
  return out;
}

Vec tsi(const Vec& close, std::size_t lng, std::size_t shrt) {
  const Vec d = close_diff(close);
  Vec ad(d.size(), kNaN);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (defined(d[i])) ad[i] = std::abs(d[i]);
  }
  const Vec num = ema(ema(d, lng), shrt);
  const Vec den = ema(ema(ad, lng), shrt);
  return binary(num, den, [](double a, double b) { return b == 0.0 ? 0.0 : 100.0 * a / b; });
}

Vec rsi(const Vec& close, std::size_t w) {
  const Vec d = close_diff(close);
  Vec gain(d.size(), kNaN), loss(d.size(), kNaN);
  for (std::size_t i = 1; i < d.size(); ++i) {
    gain[i] = d[i] > 0.0 ? d[i] : 0.0;
    loss[i] = d[i] < 0.0 ? -d[i] : 0.0;
  }
  return binary(wilder(gain, w), wilder(loss, w), detail::rsi_from_averages);
}

Vec probability_of_winning(const Columns& c, const TradeLog& trades) {
  Vec out(c.dates.size(), kNaN);
  for (std::size_t i = 0; i < c.dates.size(); ++i) {
    std::size_t total = 0, wins = 0;
    for (const auto& t : trades) {
      if (t.exit_date <= c.dates[i]) {
        ++total;
        if (t.pnl > 0.0) ++wins;
      }
    }
    if (total > 0) out[i] = 100.0 * static_cast<double>(wins) / static_cast<double>(total);
  }
  return out;
}

Vec breadth(const Columns& c, const BreadthSeries& series, std::size_t w) {
  std::map<Date, double> ratio;
  for (const auto& d : series) ratio[d.date] = detail::breadth_ratio(d);
  Vec r(c.dates.size(), kNaN);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (auto it = ratio.find(c.dates[i]); it != ratio.end()) r[i] = it->second;
  }
  Vec out(r.size(), kNaN);
  for (std::size_t i = w - 1; i < r.size(); ++i) {
    double sum = 0.0;
    bool ok = true;
    for (std::size_t j = i + 1 - w; j <= i && ok; ++j) {
      ok = defined(r[j]);
      sum += r[j];
    }
    if (ok) out[i] = sum / static_cast<double>(w);
  }
  return out;
}

Vec evaluate(const IndicatorSpec& spec, std::span<const PriceBar> bars, const AuxInputs& aux) {
  using detail::iparam;
  using detail::param;
  const Columns c = columns(bars);
  const std::string& n = spec.name;
  auto w = [&] { return iparam(spec, "window"); };
  auto ratio = [](double now, double then) { return (now - then) / then; };
  auto pct = [](double now, double then) { return 100.0 * (now - then) / then; };

  if (n == "ma") return sma(c.close, w());
  if (n == "ema") return ema(c.close, w());
  if (n == "wma") {
    const std::size_t k = w();
    Vec out(c.close.size(), kNaN);
    const double denom = static_cast<double>(k * (k + 1)) / 2.0;
    for (std::size_t i = k - 1; i < c.close.size(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) sum += static_cast<double>(j + 1) * c.close[i + 1 - k + j];
      out[i] = sum / denom;
    }
    return out;
  }
  if (n == "macd") return macd_line(c.close, iparam(spec, "fast"), iparam(spec, "slow"));
  if (n == "macd_signal" || n == "macd_hist") {
    const Vec line = macd_line(c.close, iparam(spec, "fast"), iparam(spec, "slow"));
    const Vec signal = ema(line, iparam(spec, "signal"));
    return n == "macd_signal" ? signal : binary(line, signal, std::minus<>{});
  }
  if (n == "rsi") return rsi(c.close, w());
  if (n == "stoch_k") return stochastic(c, w());
  if (n == "stoch_d") return sma(stochastic(c, w()), iparam(spec, "smooth"));
  if (n == "slow") {
    const std::size_t s = iparam(spec, "smooth");
    return sma(sma(stochastic(c, w()), s), s);
  }
  if (n == "williams_r") {
    const std::size_t k = w();
    const Vec hh = window_extreme(c.high, k, true);
    const Vec ll = window_extreme(c.low, k, false);
    Vec out(c.close.size(), kNaN);
    for (std::size_t i = k - 1; i < out.size(); ++i) out[i] = detail::williams_r(c.close[i], ll[i], hh[i]);
    return out;
  }
  if (n == "roc" || n == "rdp" || n == "ppc") return lookback(c.close, w(), pct);
  if (n == "ror") return lookback(c.close, w(), ratio);
  if (n == "mome" || n == "pc") return lookback(c.close, w(), std::minus<>{});
  if (n == "vroc") {
    return lookback(c.volume, w(), [](double now, double then) { return then > 0.0 ? 100.0 * (now - then) / then : kNaN; });
  }
  if (n == "tr") return true_range(bars);
  if (n == "atr") return wilder(true_range(bars), w());
  if (n == "vr") {
    const Vec tr = true_range(bars);
    return binary(ema(tr, iparam(spec, "short")), ema(tr, iparam(spec, "long")),
                  [](double a, double b) { return b > 0.0 ? a / b : kNaN; });
  }
  if (n == "cci") return cci(bars, w());
  if (n == "obv") return obv(c);
  if (n == "obv_ema") return ema(obv(c), w());
  if (n == "disparity") {
    return binary(c.close, sma(c.close, w()), [](double px, double ma) { return 100.0 * px / ma; });
  }
  if (n == "bias") {
    return binary(c.close, sma(c.close, w()), [](double px, double ma) { return 100.0 * (px - ma) / ma; });
  }
  if (n == "oscp") {
    return binary(sma(c.close, iparam(spec, "short")), sma(c.close, iparam(spec, "long")),
                  [](double s, double l) { return (s - l) / s; });
  }
  if (n == "mdd") return max_drawdown(c.close, w());
  if (n == "median") return median_price(c);
  if (n == "highest") return window_extreme(c.close, w(), true);
  if (n == "lowest") return window_extreme(c.close, w(), false);
  if (n == "std") return stddev(c.close, w());
  if (n == "bb_middle" || n == "bb_upper" || n == "bb_lower") {
    const Vec mid = sma(c.close, w());
    if (n == "bb_middle") return mid;
    const double k = param(spec, "k") * (n == "bb_upper" ? 1.0 : -1.0);
    return binary(mid, stddev(c.close, w()), [k](double m, double s) { return m + k * s; });
  }
  if (n == "tsi") return tsi(c.close, iparam(spec, "long"), iparam(spec, "short"));
  if (n == "ui") return ulcer(c.close, w());
  if (n == "uo") return ultimate(c, iparam(spec, "short"), iparam(spec, "mid"), iparam(spec, "long"));
  if (n == "aroon_up") return aroon(c, w(), true);
  if (n == "aroon_down") return aroon(c, w(), false);
  if (n == "aroon_osc") return binary(aroon(c, w(), true), aroon(c, w(), false), std::minus<>{});
  if (n == "ad") return ad_line(bars);
  if (n == "cho") {
    const Vec ad = ad_line(bars);
    return binary(ema(ad, iparam(spec, "fast")), ema(ad, iparam(spec, "slow")), std::minus<>{});
  }
  if (n == "ao" || n == "ac") {
    const Vec m = median_price(c);
    const Vec ao = binary(sma(m, iparam(spec, "fast")), sma(m, iparam(spec, "slow")), std::minus<>{});
    if (n == "ao") return ao;
    return binary(ao, sma(ao, iparam(spec, "smooth")), std::minus<>{});
  }
  if (n == "pp") {
    if (!aux.trades) fail(ErrorKind::unsupported, "pp requires a trade log");
    return probability_of_winning(c, *aux.trades);
  }
  if (n == "br") {
    if (!aux.breadth) fail(ErrorKind::unsupported, "br requires a market-breadth input");
    return breadth(c, *aux.breadth, w());
  }
  fail(ErrorKind::config, "indicator '" + n + "' has no batch implementation");
}

void check_sorted(std::span<const PriceBar> bars) {
  for (std::size_t i = 1; i < bars.size(); ++i) {
    if (!(bars[i - 1].date < bars[i].date)) {
      fail(ErrorKind::data, "bars must be strictly increasing by date (at " + bars[i].date.iso() + ")");
    }
  }
}

}  // namespace

IndicatorSeries compute(const IndicatorSpec& spec, std::span<const PriceBar> bars, const AuxInputs& aux) {
  const IndicatorSpec checked = make_spec(spec.name, spec.params);
  check_sorted(bars);
  const Vec values = evaluate(checked, bars, aux);
  IndicatorSeries out{checked, {}, {}};
  out.dates.reserve(bars.size());
  out.values.reserve(bars.size());
  bool any = false;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    out.dates.push_back(bars[i].date);
    if (defined(values[i]) && std::isfinite(values[i])) {
      out.values.emplace_back(values[i]);
      any = true;
    } else {
      out.values.emplace_back(std::nullopt);
    }
  }
  if (!any && !bars.empty()) {
    log::warn(checked.id() + ": no defined values over " + std::to_string(bars.size()) +
              " bars (window longer than series?)");
  }
  return out;
}

}  // namespace stocksent::indicators
