#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace xlnews {

// Calendar date at day granularity. Differences are whole days.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}

  // Parses "YYYY-MM-DD". Throws xlnews::Error on malformed or invalid dates.
  static Date parse(std::string_view iso);
  static Date from_ymd(int y, unsigned m, unsigned d);

  std::string to_string() const;
  constexpr std::chrono::sys_days sys_days() const { return days_; }
  constexpr long long day_number() const { return days_.time_since_epoch().count(); }

  constexpr Date plus_days(long long n) const {
    return Date(days_ + std::chrono::days(n));
  }

  friend constexpr long long days_between(Date a, Date b) {
    return (b.days_ - a.days_).count();
  }
  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace xlnews
