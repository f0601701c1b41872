#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace stocksent {

/// Calendar date stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  explicit Date(std::chrono::sys_days days) : days_(days.time_since_epoch().count()) {}
  Date(int year, unsigned month, unsigned day);

  /// Strict ISO-8601 `YYYY-MM-DD`. Throws Error(data) on anything else.
  static Date parse(std::string_view text);

  std::chrono::sys_days sys_days() const { return std::chrono::sys_days{std::chrono::days{days_}}; }
  std::int64_t serial() const { return days_; }
  Date plus_days(std::int64_t n) const;

  std::string iso() const;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::int64_t days_ = 0;
};

}  // namespace stocksent

template <>
struct std::hash<stocksent::Date> {
  std::size_t operator()(const stocksent::Date& d) const noexcept {
    return std::hash<std::int64_t>{}(d.serial());
  }
};
