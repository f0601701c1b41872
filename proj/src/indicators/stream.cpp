// Incremental state for every catalog indicator. Each kernel keeps only the rolling
// state its formula needs; equivalence with the batch path is checked in tests.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>

#include "detail.hpp"

namespace stocksent::indicators {

using Value = std::optional<double>;

class StreamKernel {
 public:
  virtual ~StreamKernel() = default;
  virtual Value push(const PriceBar& bar) = 0;
};

namespace {

using detail::iparam;
using detail::param;

template <class F>
class LambdaKernel final : public StreamKernel {
 public:
  explicit LambdaKernel(F f) : f_(std::move(f)) {}
  Value push(const PriceBar& bar) override { return f_(bar); }

 private:
  F f_;
};

template <class F>
std::unique_ptr<StreamKernel> kernel(F f) {
  return std::make_unique<LambdaKernel<F>>(std::move(f));
}

class Window {
 public:
  explicit Window(std::size_t capacity) : cap_(capacity) {}
  void push(double x) {
    buf_.push_back(x);
    if (buf_.size() > cap_) buf_.pop_front();
  }
  bool full() const { return buf_.size() == cap_; }
  std::size_t size() const { return buf_.size(); }
  double front() const { return buf_.front(); }
  double back() const { return buf_.back(); }
  double operator[](std::size_t i) const { return buf_[i]; }
  double sum_last(std::size_t k) const {
    double s = 0.0;
    for (std::size_t i = buf_.size() - k; i < buf_.size(); ++i) s += buf_[i];
    return s;
  }
  double sum() const { return sum_last(buf_.size()); }
  double max() const {
    double m = buf_.front();
    for (std::size_t i = 1; i < buf_.size(); ++i) m = std::max(m, buf_[i]);
    return m;
  }
  double min() const {
    double m = buf_.front();
    for (std::size_t i = 1; i < buf_.size(); ++i) m = std::min(m, buf_[i]);
    return m;
  }

 private:
  std::size_t cap_;
  std::deque<double> buf_;
};

class Sma {
 public:
  explicit Sma(std::size_t w) : win_(w), w_(w) {}
  Value push(double x) {
    win_.push(x);
    if (!win_.full()) return std::nullopt;
    return win_.sum() / static_cast<double>(w_);
  }
  Value push(Value x) { return x ? push(*x) : std::nullopt; }

 private:
  Window win_;
  std::size_t w_;
};

// Shared seeding for EMA and Wilder: mean of the first w inputs, then a recurrence.
class Smoother {
 public:
  enum class Kind { ema, wilder };
  Smoother(Kind kind, std::size_t w) : kind_(kind), w_(static_cast<double>(w)), need_(w) {}

  Value push(double x) {
    if (seen_ < need_) {
      seed_sum_ += x;
      if (++seen_ < need_) return std::nullopt;
      value_ = seed_sum_ / w_;
      return value_;
    }
    if (kind_ == Kind::ema) {
      value_ = (x - value_) * (2.0 / (w_ + 1.0)) + value_;
    } else {
      value_ = (value_ * (w_ - 1.0) + x) / w_;
    }
    return value_;
  }
  Value push(Value x) { return x ? push(*x) : std::nullopt; }

 private:
  Kind kind_;
  double w_;
  std::size_t need_;
  std::size_t seen_ = 0;
  double seed_sum_ = 0.0;
  double value_ = 0.0;
};

Smoother Ema(std::size_t w) { return Smoother(Smoother::Kind::ema, w); }
Smoother Wilder(std::size_t w) { return Smoother(Smoother::Kind::wilder, w); }

Value minus(Value a, Value b) { return a && b ? Value(*a - *b) : std::nullopt; }

// Remembers the close of the previous bar.
struct PrevClose {
  std::optional<double> value;
  std::optional<double> swap(double close) {
    auto old = value;
    value = close;
    return old;
  }
};

class Stochastic {
 public:
  explicit Stochastic(std::size_t w) : highs_(w), lows_(w) {}
  Value push(const PriceBar& b) {
    highs_.push(b.high);
    lows_.push(b.low);
    if (!highs_.full()) return std::nullopt;
    return detail::stochastic_k(b.close, lows_.min(), highs_.max());
  }

 private:
  Window highs_, lows_;
};

class Aroon {
 public:
  Aroon(std::size_t w, bool up) : win_(w + 1), w_(w), up_(up) {}
  Value push(const PriceBar& b) {
    win_.push(up_ ? b.high : b.low);
    if (!win_.full()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t p = 0; p < win_.size(); ++p) {
      if (up_ ? win_[p] >= win_[best] : win_[p] <= win_[best]) best = p;
    }
    return 100.0 * static_cast<double>(best) / static_cast<double>(w_);
  }

 private:
  Window win_;
  std::size_t w_;
  bool up_;
};

class TrueRange {
 public:
  double push(const PriceBar& b) {
    const auto prev = prev_.swap(b.close);
    return detail::true_range(b, prev ? &*prev : nullptr);
  }

 private:
  PrevClose prev_;
};

class StdDev {
 public:
  explicit StdDev(std::size_t w) : win_(w), w_(w) {}
  Value push(double x) {
    win_.push(x);
    if (!win_.full()) return std::nullopt;
    const double mean = win_.sum() / static_cast<double>(w_);
    double ss = 0.0;
    for (std::size_t i = 0; i < w_; ++i) ss += (win_[i] - mean) * (win_[i] - mean);
    return std::sqrt(ss / static_cast<double>(w_));
  }

 private:
  Window win_;
  std::size_t w_;
};

class Lookback {
 public:
  Lookback(std::size_t w, std::function<double(double, double)> f) : win_(w + 1), f_(std::move(f)) {}
  Value push(double x) {
    win_.push(x);
    if (!win_.full()) return std::nullopt;
    const double v = f_(win_.back(), win_.front());
    return std::isnan(v) ? std::nullopt : Value(v);
  }

 private:
  Window win_;
  std::function<double(double, double)> f_;
};

double median_of(const PriceBar& b) { return (b.high + b.low) / 2.0; }

std::unique_ptr<StreamKernel> make_kernel(const IndicatorSpec& spec, const AuxInputs& aux) {
  const std::string& n = spec.name;
  auto w = [&] { return iparam(spec, "window"); };
  auto pct = [](double now, double then) { return 100.0 * (now - then) / then; };

  if (n == "ma") return kernel([s = Sma(w())](const PriceBar& b) mutable { return s.push(b.close); });
  if (n == "ema") return kernel([e = Ema(w())](const PriceBar& b) mutable { return e.push(b.close); });
  if (n == "wma") {
    const std::size_t k = w();
    return kernel([win = Window(k), k](const PriceBar& b) mutable -> Value {
      win.push(b.close);
      if (!win.full()) return std::nullopt;
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) sum += static_cast<double>(j + 1) * win[j];
      return sum / (static_cast<double>(k * (k + 1)) / 2.0);
    });
  }
  if (n == "macd" || n == "macd_signal" || n == "macd_hist") {
    const int mode = n == "macd" ? 0 : (n == "macd_signal" ? 1 : 2);
    const std::size_t sig = mode == 0 ? 1 : iparam(spec, "signal");
    return kernel([fast = Ema(iparam(spec, "fast")), slow = Ema(iparam(spec, "slow")), signal = Ema(sig),
                   mode](const PriceBar& b) mutable -> Value {
      const Value line = minus(fast.push(b.close), slow.push(b.close));
      if (mode == 0 || !line) return line;
      const Value s = signal.push(*line);
      if (mode == 1) return s;
      return minus(line, s);
    });
  }
  if (n == "rsi") {
    return kernel([gain = Wilder(w()), loss = Wilder(w()), prev = PrevClose{}](const PriceBar& b) mutable -> Value {
      const auto p = prev.swap(b.close);
      if (!p) return std::nullopt;
      const double d = b.close - *p;
      const Value g = gain.push(d > 0.0 ? d : 0.0);
      const Value l = loss.push(d < 0.0 ? -d : 0.0);
      if (!g || !l) return std::nullopt;
      return detail::rsi_from_averages(*g, *l);
    });
  }
  if (n == "stoch_k") return kernel([k = Stochastic(w())](const PriceBar& b) mutable { return k.push(b); });
  if (n == "stoch_d") {
    return kernel([k = Stochastic(w()), d = Sma(iparam(spec, "smooth"))](const PriceBar& b) mutable {
      return d.push(k.push(b));
    });
  }
  if (n == "slow") {
    const std::size_t s = iparam(spec, "smooth");
    return kernel([k = Stochastic(w()), d = Sma(s), sd = Sma(s)](const PriceBar& b) mutable {
      return sd.push(d.push(k.push(b)));
    });
  }
  if (n == "williams_r") {
    return kernel([highs = Window(w()), lows = Window(w())](const PriceBar& b) mutable -> Value {
      highs.push(b.high);
      lows.push(b.low);
      if (!highs.full()) return std::nullopt;
      return detail::williams_r(b.close, lows.min(), highs.max());
    });
  }
  if (n == "roc" || n == "rdp" || n == "ppc") {
    return kernel([lb = Lookback(w(), pct)](const PriceBar& b) mutable { return lb.push(b.close); });
  }
  if (n == "ror") {
    return kernel([lb = Lookback(w(), [](double now, double then) { return (now - then) / then; })](
                      const PriceBar& b) mutable { return lb.push(b.close); });
  }
  if (n == "mome" || n == "pc") {
    return kernel([lb = Lookback(w(), std::minus<>{})](const PriceBar& b) mutable { return lb.push(b.close); });
  }
  if (n == "vroc") {
    auto f = [](double now, double then) {
      return then > 0.0 ? 100.0 * (now - then) / then : std::numeric_limits<double>::quiet_NaN();
    };
    return kernel([lb = Lookback(w(), f)](const PriceBar& b) mutable {
      return lb.push(static_cast<double>(b.volume));
    });
  }
  if (n == "tr") return kernel([tr = TrueRange{}](const PriceBar& b) mutable -> Value { return tr.push(b); });
  if (n == "atr") {
    return kernel([tr = TrueRange{}, avg = Wilder(w())](const PriceBar& b) mutable { return avg.push(tr.push(b)); });
  }
  if (n == "vr") {
    return kernel([tr = TrueRange{}, s = Ema(iparam(spec, "short")), l = Ema(iparam(spec, "long"))](
                      const PriceBar& b) mutable -> Value {
      const double r = tr.push(b);
      const Value a = s.push(r);
      const Value c = l.push(r);
      if (!a || !c || !(*c > 0.0)) return std::nullopt;
      return *a / *c;
    });
  }
  if (n == "cci") {
    const std::size_t k = w();
    return kernel([win = Window(k), k](const PriceBar& b) mutable -> Value {
      const double tp = (b.high + b.low + b.close) / 3.0;
      win.push(tp);
      if (!win.full()) return std::nullopt;
      const double mean = win.sum() / static_cast<double>(k);
      double dev = 0.0;
      for (std::size_t i = 0; i < k; ++i) dev += std::abs(win[i] - mean);
      return detail::cci_value(tp, mean, dev / static_cast<double>(k));
    });
  }
  if (n == "obv" || n == "obv_ema") {
    const bool smooth = n == "obv_ema";
    return kernel([acc = 0.0, prev = PrevClose{}, e = Ema(smooth ? w() : 1), smooth](const PriceBar& b) mutable -> Value {
      const auto p = prev.swap(b.close);
      if (p) acc += detail::obv_step(b.close, *p, static_cast<double>(b.volume));
      return smooth ? e.push(acc) : Value(acc);
    });
  }
  if (n == "disparity" || n == "bias") {
    const bool bias = n == "bias";
    return kernel([s = Sma(w()), bias](const PriceBar& b) mutable -> Value {
      const Value ma = s.push(b.close);
      if (!ma) return std::nullopt;
      return bias ? 100.0 * (b.close - *ma) / *ma : 100.0 * b.close / *ma;
    });
  }
  if (n == "oscp") {
    return kernel([s = Sma(iparam(spec, "short")), l = Sma(iparam(spec, "long"))](const PriceBar& b) mutable -> Value {
      const Value a = s.push(b.close);
      const Value c = l.push(b.close);
      if (!a || !c) return std::nullopt;
      return (*a - *c) / *a;
    });
  }
  if (n == "mdd") {
    return kernel([win = Window(w())](const PriceBar& b) mutable -> Value {
      win.push(b.close);
      if (!win.full()) return std::nullopt;
      double peak = win[0], worst = 0.0;
      for (std::size_t i = 0; i < win.size(); ++i) {
        peak = std::max(peak, win[i]);
        worst = std::max(worst, (peak - win[i]) / peak);
      }
      return worst;
    });
  }
  if (n == "median") return kernel([](const PriceBar& b) -> Value { return median_of(b); });
  if (n == "highest" || n == "lowest") {
    const bool hi = n == "highest";
    return kernel([win = Window(w()), hi](const PriceBar& b) mutable -> Value {
      win.push(b.close);
      if (!win.full()) return std::nullopt;
      return hi ? win.max() : win.min();
    });
  }
  if (n == "std") return kernel([s = StdDev(w())](const PriceBar& b) mutable { return s.push(b.close); });
  if (n == "bb_middle" || n == "bb_upper" || n == "bb_lower") {
    const double k = n == "bb_middle" ? 0.0 : param(spec, "k") * (n == "bb_upper" ? 1.0 : -1.0);
    const bool middle = n == "bb_middle";
    return kernel([m = Sma(w()), s = StdDev(w()), k, middle](const PriceBar& b) mutable -> Value {
      const Value mid = m.push(b.close);
      const Value sd = s.push(b.close);
      if (!mid || !sd) return std::nullopt;
      return middle ? *mid : *mid + k * *sd;
    });
  }
  if (n == "tsi") {
    const std::size_t lng = iparam(spec, "long"), shrt = iparam(spec, "short");
    return kernel([n1 = Ema(lng), n2 = Ema(shrt), d1 = Ema(lng), d2 = Ema(shrt), prev = PrevClose{}](
                      const PriceBar& b) mutable -> Value {
      const auto p = prev.swap(b.close);
      if (!p) return std::nullopt;
      const double d = b.close - *p;
      const Value num = n2.push(n1.push(d));
      const Value den = d2.push(d1.push(std::abs(d)));
      if (!num || !den) return std::nullopt;
      return *den == 0.0 ? 0.0 : 100.0 * *num / *den;
    });
  }
  if (n == "ui") {
    const std::size_t k = w();
    return kernel([closes = Window(k), sq = Window(k), k](const PriceBar& b) mutable -> Value {
      closes.push(b.close);
      if (!closes.full()) return std::nullopt;
      const double peak = closes.max();
      const double pct = 100.0 * (b.close - peak) / peak;
      sq.push(pct * pct);
      if (!sq.full()) return std::nullopt;
      return std::sqrt(sq.sum() / static_cast<double>(k));
    });
  }
  if (n == "uo") {
    const std::size_t s = iparam(spec, "short"), m = iparam(spec, "mid"), l = iparam(spec, "long");
    const std::size_t cap = std::max({s, m, l});
    return kernel([bp = Window(cap), tr = Window(cap), prev = PrevClose{}, s, m, l, cap](
                      const PriceBar& b) mutable -> Value {
      const auto p = prev.swap(b.close);
      if (!p) return std::nullopt;
      const double lo = std::min(b.low, *p);
      const double hi = std::max(b.high, *p);
      bp.push(b.close - lo);
      tr.push(hi - lo);
      if (bp.size() < cap) return std::nullopt;
      auto avg = [&](std::size_t k) {
        const double st = tr.sum_last(k);
        return st > 0.0 ? bp.sum_last(k) / st : 0.5;
      };
      return 100.0 * (4.0 * avg(s) + 2.0 * avg(m) + avg(l)) / 7.0;
    });
  }
  if (n == "aroon_up") return kernel([a = Aroon(w(), true)](const PriceBar& b) mutable { return a.push(b); });
  if (n == "aroon_down") return kernel([a = Aroon(w(), false)](const PriceBar& b) mutable { return a.push(b); });
  if (n == "aroon_osc") {
    return kernel([up = Aroon(w(), true), down = Aroon(w(), false)](const PriceBar& b) mutable {
      return minus(up.push(b), down.push(b));
    });
  }
  if (n == "ad" || n == "cho") {
    const bool osc = n == "cho";
    const std::size_t fast = osc ? iparam(spec, "fast") : 1, slow = osc ? iparam(spec, "slow") : 1;
    return kernel([acc = 0.0, f = Ema(fast), s = Ema(slow), osc](const PriceBar& b) mutable -> Value {
      acc += detail::close_location(b) * static_cast<double>(b.volume);
      if (!osc) return acc;
      return minus(f.push(acc), s.push(acc));
    });
  }
  if (n == "ao" || n == "ac") {
    const bool ac = n == "ac";
    return kernel([f = Sma(iparam(spec, "fast")), s = Sma(iparam(spec, "slow")),
                   sm = Sma(ac ? iparam(spec, "smooth") : 1), ac](const PriceBar& b) mutable -> Value {
      const double m = median_of(b);
      const Value ao = minus(f.push(m), s.push(m));
      if (!ac || !ao) return ao;
      return minus(ao, sm.push(*ao));
    });
  }
  if (n == "pp") {
    if (!aux.trades) fail(ErrorKind::unsupported, "pp requires a trade log");
    TradeLog sorted = *aux.trades;
    std::sort(sorted.begin(), sorted.end(), [](const Trade& a, const Trade& b) { return a.exit_date < b.exit_date; });
    return kernel([trades = std::move(sorted), cursor = std::size_t{0}, wins = std::size_t{0}](
                      const PriceBar& b) mutable -> Value {
      while (cursor < trades.size() && trades[cursor].exit_date <= b.date) {
        if (trades[cursor].pnl > 0.0) ++wins;
        ++cursor;
      }
      if (cursor == 0) return std::nullopt;
      return 100.0 * static_cast<double>(wins) / static_cast<double>(cursor);
    });
  }
  if (n == "br") {
    if (!aux.breadth) fail(ErrorKind::unsupported, "br requires a market-breadth input");
    std::map<Date, double> ratio;
    for (const auto& d : *aux.breadth) ratio[d.date] = detail::breadth_ratio(d);
    const std::size_t k = w();
    return kernel([ratio = std::move(ratio), win = Window(k), k](const PriceBar& b) mutable -> Value {
      auto it = ratio.find(b.date);
      win.push(it == ratio.end() ? detail::kNaN : it->second);
      if (!win.full()) return std::nullopt;
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (std::isnan(win[i])) return std::nullopt;
        sum += win[i];
      }
      return sum / static_cast<double>(k);
    });
  }
  fail(ErrorKind::config, "indicator '" + n + "' has no streaming implementation");
}

}  // namespace

IndicatorStream::IndicatorStream(const IndicatorSpec& spec, const AuxInputs& aux)
    : spec_(make_spec(spec.name, spec.params)), kernel_(make_kernel(spec_, aux)) {}

IndicatorStream::~IndicatorStream() = default;
IndicatorStream::IndicatorStream(IndicatorStream&&) noexcept = default;
IndicatorStream& IndicatorStream::operator=(IndicatorStream&&) noexcept = default;

std::optional<double> IndicatorStream::update(const PriceBar& bar) {
  if (last_date_ && !(*last_date_ < bar.date)) {
    fail(ErrorKind::data, spec_.id() + ": out-of-order bar " + bar.date.iso() + " after " + last_date_->iso());
  }
  last_date_ = bar.date;
  auto v = kernel_->push(bar);
  if (v && !std::isfinite(*v)) return std::nullopt;
  return v;
}

}  // namespace stocksent::indicators
