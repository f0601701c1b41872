#include <nlohmann/json.hpp>

#include "detail.hpp"
#include "stocksent/util.hpp"

namespace stocksent::indicators {

namespace {

Column compute_column(const IndicatorSpec& spec, std::span<const PriceBar> bars, const AuxInputs& aux) {
  Column col;
  col.id = spec.id();
  try {
    col.series = compute(spec, bars, aux);
    col.id = col.series->spec.id();
  } catch (const std::exception& e) {
    col.error = e.what();
  }
  return col;
}

IndicatorTable empty_table(std::span<const PriceBar> bars, std::size_t ncols) {
  IndicatorTable t;
  for (const auto& b : bars) t.dates.push_back(b.date);
  t.columns.resize(ncols);
  return t;
}

}  // namespace

IndicatorTable compute_all_serial(std::span<const IndicatorSpec> specs, std::span<const PriceBar> bars,
                                  const AuxInputs& aux) {
  IndicatorTable t = empty_table(bars, specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) t.columns[i] = compute_column(specs[i], bars, aux);
  return t;
}

IndicatorTable compute_all(std::span<const IndicatorSpec> specs, std::span<const PriceBar> bars,
                           const AuxInputs& aux) {
  IndicatorTable t = empty_table(bars, specs.size());
  const auto n = static_cast<std::ptrdiff_t>(specs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    t.columns[k] = compute_column(specs[k], bars, aux);
  }
  return t;
}

std::string table_to_csv(const IndicatorTable& table) {
  std::string out = "date";
  for (const auto& c : table.columns) out += "," + csv_escape(c.id);
  out += '\n';
  for (std::size_t r = 0; r < table.dates.size(); ++r) {
    out += table.dates[r].iso();
    for (const auto& c : table.columns) {
      out += ',';
      if (c.series && c.series->values[r]) out += format_double(*c.series->values[r]);
    }
    out += '\n';
  }
  return out;
}

std::string table_to_jsonl(const IndicatorTable& table) {
  std::string out;
  for (std::size_t r = 0; r < table.dates.size(); ++r) {
    nlohmann::ordered_json row;
    row["date"] = table.dates[r].iso();
    for (const auto& c : table.columns) {
      if (c.series && c.series->values[r]) {
        row[c.id] = *c.series->values[r];
      } else {
        row[c.id] = nullptr;
      }
    }
    out += row.dump() + '\n';
  }
  return out;
}

TradeLog load_trade_log(const std::filesystem::path& path) {
  const auto rows = parse_csv(read_file(path));
  TradeLog out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) fail(ErrorKind::data, path.string() + " row " + std::to_string(r + 1) + ": expected exit_date,pnl");
    out.push_back({Date::parse(trim(rows[r][0])), parse_double(rows[r][1])});
  }
  return out;
}

BreadthSeries load_breadth(const std::filesystem::path& path) {
  const auto rows = parse_csv(read_file(path));
  BreadthSeries out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 3) {
      fail(ErrorKind::data, path.string() + " row " + std::to_string(r + 1) + ": expected date,advancers,decliners");
    }
    out.push_back({Date::parse(trim(rows[r][0])), parse_double(rows[r][1]), parse_double(rows[r][2])});
  }
  return out;
}

}  // namespace stocksent::indicators
