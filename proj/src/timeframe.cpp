#include "twotier/timeframe.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace twotier {

namespace chr = std::chrono;

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return ec == std::errc{} && ptr == text.data() + pos + len;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (text.size() < 20) return std::nullopt;
  if (!read_int(text, 0, 4, year) || text[4] != '-' || !read_int(text, 5, 2, month) ||
      text[7] != '-' || !read_int(text, 8, 2, day)) {
    return std::nullopt;
  }
  if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return std::nullopt;
  if (!read_int(text, 11, 2, hour) || text[13] != ':' || !read_int(text, 14, 2, minute) ||
      text[16] != ':' || !read_int(text, 17, 2, second)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t digits_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits_start) return std::nullopt;
  }
  if (pos >= text.size()) return std::nullopt;

  int offset_minutes = 0;
  const char zone = text[pos];
  if (zone == 'Z' || zone == 'z') {
    ++pos;
  } else if (zone == '+' || zone == '-') {
    int oh = 0, om = 0;
    if (!read_int(text, pos + 1, 2, oh) || pos + 3 >= text.size() || text[pos + 3] != ':' ||
        !read_int(text, pos + 4, 2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset_minutes = (oh * 60 + om) * (zone == '+' ? 1 : -1);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;

  const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                chr::day{static_cast<unsigned>(day)}};
  // Leap seconds (":60") are not representable in sys_seconds.
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 59) return std::nullopt;
  const auto local = chr::sys_days{ymd} + chr::hours{hour} + chr::minutes{minute} + chr::seconds{second};
  return Timestamp{local - chr::minutes{offset_minutes}};
}

std::string format_timestamp(Timestamp ts) {
  const auto days = chr::floor<chr::days>(ts);
  const chr::year_month_day ymd{days};
  const chr::hh_mm_ss hms{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

Window Window::parse(std::string_view text) {
  std::size_t digits = 0;
  while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) ++digits;
  Window w;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + digits, w.length);
  if (digits == 0 || ec != std::errc{} || w.length <= 0) {
    throw Error("invalid window '" + std::string(text) + "'");
  }
  const std::string_view suffix = text.substr(digits);
  if (suffix.empty() || suffix == "mo" || suffix == "m") {
    w.unit = WindowUnit::Months;
  } else if (suffix == "d") {
    w.unit = WindowUnit::Seconds;
    w.length *= 86400;
  } else if (suffix == "s") {
    w.unit = WindowUnit::Seconds;
  } else {
    throw Error("invalid window unit '" + std::string(suffix) + "'");
  }
  return w;
}

std::string Window::to_string() const {
  if (unit == WindowUnit::Months) return std::to_string(length) + "mo";
  if (length % 86400 == 0) return std::to_string(length / 86400) + "d";
  return std::to_string(length) + "s";
}

Timestamp advance(Timestamp start, const Window& window, std::int64_t count) {
  if (window.unit == WindowUnit::Seconds) return start + chr::seconds{window.length * count};
  const auto days = chr::floor<chr::days>(start);
  const auto time_of_day = start - days;
  chr::year_month_day ymd{days};
  const chr::year_month_day shifted = ymd + chr::months{window.length * count};
  chr::year_month_day clamped = shifted;
  if (!shifted.ok()) {
    clamped = chr::year_month_day{chr::year_month_day_last{shifted.year(), chr::month_day_last{shifted.month()}}};
  }
  return chr::sys_days{clamped} + time_of_day;
}

FrameSpec::FrameSpec(Timestamp start, Timestamp end, Window window)
    : start_(start), end_(end), window_(window) {
  if (window.length <= 0) throw Error("frame window must be positive");
  if (end <= start) throw Error("frame span end must be after start");
  std::int64_t full = 0;
  while (advance(start, window, full + 1) <= end) ++full;
  // The last frame runs to `end`, absorbing any remainder shorter than a window.
  const std::int64_t count = std::max<std::int64_t>(1, full);
  for (std::int64_t t = 0; t < count; ++t) boundaries_.push_back(advance(start, window, t));
  boundaries_.push_back(end);
}

FrameSpec FrameSpec::covering(Timestamp first, Timestamp last, Window window) {
  Timestamp start = first;
  if (window.unit == WindowUnit::Months) {
    const chr::year_month_day ymd{chr::floor<chr::days>(first)};
    start = chr::sys_days{ymd.year() / ymd.month() / chr::day{1}};
  }
  std::int64_t n = 1;
  while (advance(start, window, n) <= last) ++n;
  return FrameSpec(start, advance(start, window, n), window);
}

std::optional<int> FrameSpec::frame_of(Timestamp ts) const {
  if (boundaries_.empty() || ts < start_ || ts >= end_) return std::nullopt;
  const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), ts);
  return static_cast<int>(it - boundaries_.begin()) - 1;
}

}  // namespace twotier
