#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twotier/common.hpp"

namespace twotier {

/// Parses an RFC 3339 date-time ("2015-05-01T10:00:00Z", offsets and
/// fractional seconds accepted; fractions are truncated).
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

enum class WindowUnit { Months, Seconds };

struct Window {
  std::int64_t length = 3;
  WindowUnit unit = WindowUnit::Months;

  /// "3", "3mo" -> months; "90d" -> days; "3600s" -> seconds.
  static Window parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Window&, const Window&) = default;
};

/// Partition of [start, end) into consecutive half-open windows. When the
/// span is not a whole number of windows, the last frame absorbs the rest.
class FrameSpec {
 public:
  FrameSpec() = default;
  FrameSpec(Timestamp start, Timestamp end, Window window = {});

  /// Smallest spec whose frames cover [first, last]. Month windows start on
  /// the first day of the month containing `first`.
  static FrameSpec covering(Timestamp first, Timestamp last, Window window = {});

  Timestamp start() const { return start_; }
  Timestamp end() const { return end_; }
  const Window& window() const { return window_; }
  int frame_count() const { return static_cast<int>(boundaries_.empty() ? 0 : boundaries_.size() - 1); }

  Timestamp frame_start(int t) const { return boundaries_.at(static_cast<std::size_t>(t)); }
  Timestamp frame_end(int t) const { return boundaries_.at(static_cast<std::size_t>(t) + 1); }

  /// Frame index containing ts, or nullopt outside [start, end).
  std::optional<int> frame_of(Timestamp ts) const;

 private:
  Timestamp start_{};
  Timestamp end_{};
  Window window_{};
  std::vector<Timestamp> boundaries_;
};

/// start advanced by `count` windows; month arithmetic clamps the day to the
/// end of the target month.
Timestamp advance(Timestamp start, const Window& window, std::int64_t count);

}  // namespace twotier
