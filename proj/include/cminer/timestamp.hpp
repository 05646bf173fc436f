// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace cminer {

// Timezone-naive calendar timestamp. The datasets carry no zone, so the epoch
// value is the civil time interpreted as UTC; only differences and rendering
// matter. frac_digits records how many fractional-second digits the source
// text carried (0..6) so formatting can reproduce it.
struct LogTimestamp {
  std::int64_t epoch_ns = 0;
  int frac_digits = 0;

  auto operator<=>(const LogTimestamp& other) const { return epoch_ns <=> other.epoch_ns; }
  bool operator==(const LogTimestamp& other) const { return epoch_ns == other.epoch_ns; }

  // Whole seconds between two timestamps, floor of the exact gap.
  static std::int64_t delta_seconds(const LogTimestamp& earlier, const LogTimestamp& later) {
    std::int64_t diff = later.epoch_ns - earlier.epoch_ns;
    std::int64_t s = diff / 1'000'000'000;
    if (diff < 0 && diff % 1'000'000'000 != 0) --s;
    return s;
  }
};

namespace detail {

inline bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    char c = s[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

}  // namespace detail

// Parses "YYYY-MM-DD" + "HH:MM:SS[.f{1,6}]" given as two tokens.
// Returns nullopt on any grammar or calendar violation.
inline std::optional<LogTimestamp> parse_timestamp(std::string_view date_token,
                                                   std::string_view time_token) {
  using namespace std::chrono;
  int year = 0, month = 0, day = 0;
  if (date_token.size() != 10 || date_token[4] != '-' || date_token[7] != '-') return std::nullopt;
  if (!detail::parse_fixed_uint(date_token, 0, 4, year) ||
      !detail::parse_fixed_uint(date_token, 5, 2, month) ||
      !detail::parse_fixed_uint(date_token, 8, 2, day)) {
    return std::nullopt;
  }
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                     std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;

  int hour = 0, minute = 0, second = 0;
  if (time_token.size() < 8 || time_token[2] != ':' || time_token[5] != ':') return std::nullopt;
  if (!detail::parse_fixed_uint(time_token, 0, 2, hour) ||
      !detail::parse_fixed_uint(time_token, 3, 2, minute) ||
      !detail::parse_fixed_uint(time_token, 6, 2, second)) {
    return std::nullopt;
  }
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

  std::int64_t frac_ns = 0;
  int frac_digits = 0;
  if (time_token.size() > 8) {
    if (time_token[8] != '.') return std::nullopt;
    std::string_view frac = time_token.substr(9);
    if (frac.empty() || frac.size() > 6) return std::nullopt;
    for (char c : frac) {
      if (c < '0' || c > '9') return std::nullopt;
      frac_ns = frac_ns * 10 + (c - '0');
    }
    frac_digits = static_cast<int>(frac.size());
    for (int i = frac_digits; i < 9; ++i) frac_ns *= 10;
  }

  const sys_days days{ymd};
  std::int64_t epoch_s =
      duration_cast<seconds>(days.time_since_epoch()).count() + hour * 3600 + minute * 60 + second;
  LogTimestamp ts;
  ts.epoch_ns = epoch_s * 1'000'000'000 + frac_ns;
  ts.frac_digits = frac_digits;
  return ts;
}

// Renders as "YYYY-MM-DD HH:MM:SS[.frac]" with the recorded fractional width.
inline std::string format_timestamp(const LogTimestamp& ts) {
  using namespace std::chrono;
  std::int64_t epoch_s = ts.epoch_ns / 1'000'000'000;
  std::int64_t frac_ns = ts.epoch_ns % 1'000'000'000;
  if (frac_ns < 0) {
    frac_ns += 1'000'000'000;
    --epoch_s;
  }
  const sys_days days{floor<std::chrono::days>(seconds{epoch_s})};
  const year_month_day ymd{days};
  std::int64_t sod = epoch_s - duration_cast<seconds>(days.time_since_epoch()).count();
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u %02d:%02d:%02d", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(sod / 3600), int((sod / 60) % 60),
                int(sod % 60));
  std::string out = buf;
  if (ts.frac_digits > 0) {
    char frac_buf[16];
    std::snprintf(frac_buf, sizeof(frac_buf), "%09lld", static_cast<long long>(frac_ns));
    out.push_back('.');
    out.append(frac_buf, frac_buf + ts.frac_digits);
  }
  return out;
}

// 12-hour clock time, e.g. "05:40 AM", matching the sentence template.
inline std::string format_clock_12h(const LogTimestamp& ts) {
  std::int64_t epoch_s = ts.epoch_ns / 1'000'000'000;
  int sod = static_cast<int>(((epoch_s % 86400) + 86400) % 86400);
  int hour24 = sod / 3600;
  int minute = (sod / 60) % 60;
  int hour12 = hour24 % 12;
  if (hour12 == 0) hour12 = 12;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d %s", hour12, minute, hour24 < 12 ? "AM" : "PM");
  return buf;
}

}  // namespace cminer
