#include "xlnews/date.hpp"

#include <cstdio>

#include "xlnews/error.hpp"

namespace xlnews {

namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

Date Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
      !all_digits(iso.substr(0, 4)) || !all_digits(iso.substr(5, 2)) ||
      !all_digits(iso.substr(8, 2))) {
    throw Error("invalid date '" + std::string(iso) + "', expected YYYY-MM-DD");
  }
  const int y = to_int(iso.substr(0, 4));
  const auto m = static_cast<unsigned>(to_int(iso.substr(5, 2)));
  const auto d = static_cast<unsigned>(to_int(iso.substr(8, 2)));
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw Error("invalid calendar date '" + std::string(iso) + "'");
  return Date(std::chrono::sys_days{ymd});
}

Date Date::from_ymd(int y, unsigned m, unsigned d) {
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw Error("invalid calendar date");
  return Date(std::chrono::sys_days{ymd});
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace xlnews
