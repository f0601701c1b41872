#include "stocksent/marketdata.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "stocksent/error.hpp"
#include "stocksent/util.hpp"

namespace stocksent::marketdata {

namespace {

constexpr const char* kColumns[] = {"ticker", "date", "open", "high", "low", "close", "volume"};

bool le(double a, double b) { return a <= b + kPriceTolerance; }

}  // namespace

std::string check_bar(const PriceBar& bar) {
  if (bar.ticker.empty()) return "ticker must be non-empty";
  for (double p : {bar.open, bar.high, bar.low, bar.close}) {
    if (!std::isfinite(p) || p <= 0.0) return "prices must be finite and > 0";
  }
  if (bar.volume < 0) return "volume must be non-negative";
  if (!le(bar.low, bar.high)) return "low <= high";
  if (!le(bar.low, bar.open) || !le(bar.open, bar.high)) return "low <= open <= high";
  if (!le(bar.low, bar.close) || !le(bar.close, bar.high)) return "low <= close <= high";
  return {};
}

PriceSeries::PriceSeries(std::string ticker, std::vector<PriceBar> bars)
    : ticker_(std::move(ticker)), bars_(std::move(bars)) {
  std::stable_sort(bars_.begin(), bars_.end(), [](const PriceBar& a, const PriceBar& b) { return a.date < b.date; });
  for (std::size_t i = 0; i < bars_.size(); ++i) {
    const auto& bar = bars_[i];
    if (bar.ticker != ticker_) {
      fail(ErrorKind::data, "bar for " + bar.ticker + " in series of " + ticker_);
    }
    if (auto why = check_bar(bar); !why.empty()) {
      fail(ErrorKind::data, ticker_ + " " + bar.date.iso() + ": violated invariant " + why);
    }
    if (i > 0 && bars_[i - 1].date == bar.date) {
      fail(ErrorKind::data, "duplicate (ticker, date) (" + ticker_ + ", " + bar.date.iso() + ")");
    }
  }
}

PriceFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = to_lower(path.extension().string());
  if (ext == ".jsonl" || ext == ".json") return PriceFormat::jsonl;
  return PriceFormat::csv;
}

PriceTable parse_prices(std::string_view content, PriceFormat format) {
  std::map<std::string, std::vector<PriceBar>> grouped;
  std::set<std::pair<std::string, Date>> seen;
  std::size_t rows = 0;

  auto accept = [&](PriceBar bar, std::size_t row_number) {
    if (auto why = check_bar(bar); !why.empty()) {
      fail(ErrorKind::data, "row " + std::to_string(row_number) + ": violated invariant " + why);
    }
    if (!seen.emplace(bar.ticker, bar.date).second) {
      fail(ErrorKind::data, "row " + std::to_string(row_number) + ": duplicate (ticker, date) (" + bar.ticker +
                                ", " + bar.date.iso() + ")");
    }
    grouped[bar.ticker].push_back(std::move(bar));
    ++rows;
  };

  if (format == PriceFormat::csv) {
    const auto table = parse_csv(content);
    if (!table.empty()) {
      const auto& header = table.front();
      std::vector<std::size_t> index;
      for (const char* col : kColumns) {
        auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) { return trim(h) == col; });
        if (it == header.end()) fail(ErrorKind::data, std::string("missing required column '") + col + "'");
        index.push_back(static_cast<std::size_t>(it - header.begin()));
      }
      for (std::size_t r = 1; r < table.size(); ++r) {
        const auto& row = table[r];
        const std::size_t row_number = r + 1;  // 1-based, header is row 1
        if (row.size() < header.size()) {
          fail(ErrorKind::data, "row " + std::to_string(row_number) + ": expected " +
                                    std::to_string(header.size()) + " fields, got " + std::to_string(row.size()));
        }
        try {
          PriceBar bar;
          bar.ticker = trim(row[index[0]]);
          bar.date = Date::parse(trim(row[index[1]]));
          bar.open = parse_double(row[index[2]]);
          bar.high = parse_double(row[index[3]]);
          bar.low = parse_double(row[index[4]]);
          bar.close = parse_double(row[index[5]]);
          bar.volume = parse_int(row[index[6]]);
          accept(std::move(bar), row_number);
        } catch (const Error& e) {
          if (std::string_view(e.what()).starts_with("row ")) throw;
          fail(ErrorKind::data, "row " + std::to_string(row_number) + ": " + e.what());
        }
      }
    }
  } else {
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t row_number = 0;
    while (std::getline(in, line)) {
      ++row_number;
      if (trim(line).empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        for (const char* col : kColumns) {
          if (!j.contains(col)) fail(ErrorKind::data, std::string("missing required field '") + col + "'");
        }
        PriceBar bar;
        bar.ticker = j.at("ticker").get<std::string>();
        bar.date = Date::parse(j.at("date").get<std::string>());
        bar.open = j.at("open").get<double>();
        bar.high = j.at("high").get<double>();
        bar.low = j.at("low").get<double>();
        bar.close = j.at("close").get<double>();
        bar.volume = j.at("volume").get<std::int64_t>();
        accept(std::move(bar), row_number);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::data, "row " + std::to_string(row_number) + ": " + e.what());
      } catch (const Error& e) {
        if (std::string_view(e.what()).starts_with("row ")) throw;
        fail(ErrorKind::data, "row " + std::to_string(row_number) + ": " + e.what());
      }
    }
  }

  PriceTable out;
  for (auto& [ticker, bars] : grouped) out.emplace(ticker, PriceSeries(ticker, std::move(bars)));
  if (rows == 0) log::warn("price input contains no bars");
  return out;
}

PriceTable load_prices(const std::filesystem::path& path, PriceFormat format) {
  if (!std::filesystem::exists(path)) fail(ErrorKind::io, "price file not found: " + path.string());
  return parse_prices(read_file(path), format);
}

std::string serialize_prices(const PriceTable& table, PriceFormat format) {
  std::string out;
  if (format == PriceFormat::csv) out = "ticker,date,open,high,low,close,volume\n";
  for (const auto& [ticker, series] : table) {
    for (const auto& bar : series.bars()) {
      if (format == PriceFormat::csv) {
        out += csv_escape(bar.ticker) + ',' + bar.date.iso() + ',' + format_double(bar.open) + ',' +
               format_double(bar.high) + ',' + format_double(bar.low) + ',' + format_double(bar.close) + ',' +
               std::to_string(bar.volume) + '\n';
      } else {
        nlohmann::ordered_json j;
        j["ticker"] = bar.ticker;
        j["date"] = bar.date.iso();
        j["open"] = bar.open;
        j["high"] = bar.high;
        j["low"] = bar.low;
        j["close"] = bar.close;
        j["volume"] = bar.volume;
        out += j.dump() + '\n';
      }
    }
  }
  return out;
}

ReturnSeries compute_returns(std::span<const PriceBar> bars) {
  if (bars.size() < 2) fail(ErrorKind::data, "compute_returns needs at least 2 bars");
  ReturnSeries out;
  out.ticker = bars.front().ticker;
  out.entries.reserve(bars.size() - 1);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    if (bars[i].ticker != out.ticker) fail(ErrorKind::data, "compute_returns: mixed tickers");
    if (!(bars[i].close > 0.0)) {
      fail(ErrorKind::data, "compute_returns: non-positive close on " + bars[i].date.iso());
    }
    if (i == 0) continue;
    if (!(bars[i - 1].date < bars[i].date)) fail(ErrorKind::data, "compute_returns: bars not sorted by date");
    const double prev = bars[i - 1].close;
    out.entries.push_back({bars[i].date, (bars[i].close - prev) / prev});
  }
  return out;
}

}  // namespace stocksent::marketdata
