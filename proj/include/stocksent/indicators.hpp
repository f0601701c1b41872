#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stocksent/date.hpp"
#include "stocksent/marketdata.hpp"

namespace stocksent::indicators {

using marketdata::PriceBar;

struct IndicatorSpec {
  std::string name;
  std::map<std::string, double> params;

  /// Column identifier `name(k=v,...)`, parameters in key order.
  std::string id() const;

  friend bool operator==(const IndicatorSpec&, const IndicatorSpec&) = default;
};

struct IndicatorSeries {
  IndicatorSpec spec;
  std::vector<Date> dates;
  std::vector<std::optional<double>> values;  // nullopt = undefined (warmup or degenerate)
};

// Optional inputs for the two catalog entries that cannot be derived from one ticker's bars.

struct Trade {
  Date exit_date;
  double pnl = 0.0;
};
using TradeLog = std::vector<Trade>;

struct BreadthDay {
  Date date;
  double advancers = 0.0;
  double decliners = 0.0;
};
using BreadthSeries = std::vector<BreadthDay>;

struct AuxInputs {
  const TradeLog* trades = nullptr;
  const BreadthSeries* breadth = nullptr;
};

TradeLog load_trade_log(const std::filesystem::path& path);          // CSV `exit_date,pnl`
BreadthSeries load_breadth(const std::filesystem::path& path);       // CSV `date,advancers,decliners`

enum class Requires { bars, trade_log, breadth };

struct CatalogEntry {
  std::string name;
  std::string summary;   // formula, as implemented
  std::map<std::string, double> defaults;
  std::vector<std::string> integer_params;  // must be whole numbers >= 1
  Requires requires_input = Requires::bars;
};

/// Every supported indicator, sorted by name.
const std::vector<CatalogEntry>& catalog();
std::vector<std::string> catalog_names();

/// Resolves aliases, fills defaults, validates. Throws Error(config) listing the catalog for unknown names.
IndicatorSpec make_spec(std::string_view name, const std::map<std::string, double>& params = {});

/// Parses `name:k=v[,k=v]` (or bare `name`).
IndicatorSpec parse_spec(std::string_view text);

/// The default column set: every bar-derived indicator with several window variations.
std::vector<IndicatorSpec> default_specs();

/// Batch computation over a date-sorted bar list.
IndicatorSeries compute(const IndicatorSpec& spec, std::span<const PriceBar> bars, const AuxInputs& aux = {});

struct Column {
  std::string id;
  std::optional<IndicatorSeries> series;
  std::optional<std::string> error;
};

struct IndicatorTable {
  std::vector<Date> dates;
  std::vector<Column> columns;
};

/// One column per spec; per-spec failures are recorded in `Column::error`. Parallel over specs.
IndicatorTable compute_all(std::span<const IndicatorSpec> specs, std::span<const PriceBar> bars,
                           const AuxInputs& aux = {});
/// Serial reference of compute_all.
IndicatorTable compute_all_serial(std::span<const IndicatorSpec> specs, std::span<const PriceBar> bars,
                                  const AuxInputs& aux = {});

std::string table_to_csv(const IndicatorTable& table);
std::string table_to_jsonl(const IndicatorTable& table);

class StreamKernel;

/// Incremental evaluation: feeding bars one at a time reproduces `compute`.
/// Single owner; movable between threads.
class IndicatorStream {
 public:
  explicit IndicatorStream(const IndicatorSpec& spec, const AuxInputs& aux = {});
  ~IndicatorStream();
  IndicatorStream(IndicatorStream&&) noexcept;
  IndicatorStream& operator=(IndicatorStream&&) noexcept;

  /// Throws Error(data) when `bar.date` does not follow the previous bar.
  std::optional<double> update(const PriceBar& bar);

  const IndicatorSpec& spec() const { return spec_; }

 private:
  IndicatorSpec spec_;
  std::unique_ptr<StreamKernel> kernel_;
  std::optional<Date> last_date_;
};

}  // namespace stocksent::indicators
