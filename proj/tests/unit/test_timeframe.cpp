#include <doctest.h>

#include "twotier/timeframe.hpp"

using namespace twotier;

namespace {
Timestamp ts(const char* text) { return *parse_timestamp(text); }
}  // namespace

TEST_CASE("timestamps parse offsets and fractions") {
  CHECK(format_timestamp(ts("2015-05-01T10:00:00Z")) == "2015-05-01T10:00:00Z");
  CHECK(ts("2015-05-01T10:00:00.999Z") == ts("2015-05-01T10:00:00Z"));
  CHECK(ts("2015-05-01T12:30:00+02:30") == ts("2015-05-01T10:00:00Z"));
  CHECK(ts("2015-12-31T23:00:00-02:00") == ts("2016-01-01T01:00:00Z"));
  CHECK_FALSE(parse_timestamp("2015-02-30T00:00:00Z"));
  CHECK_FALSE(parse_timestamp("2015-05-01 10:00"));
  CHECK_FALSE(parse_timestamp("2015-05-01T10:00:00"));
  CHECK_FALSE(parse_timestamp("2015-05-01T10:00:00Zjunk"));
}

TEST_CASE("window strings") {
  CHECK(Window::parse("3") == Window{3, WindowUnit::Months});
  CHECK(Window::parse("6mo") == Window{6, WindowUnit::Months});
  CHECK(Window::parse("90d") == Window{90 * 86400, WindowUnit::Seconds});
  CHECK(Window::parse("90d").to_string() == "90d");
  CHECK(Window::parse("45s").to_string() == "45s");
  CHECK_THROWS_AS(Window::parse("0"), Error);
  CHECK_THROWS_AS(Window::parse("3w"), Error);
  CHECK_THROWS_AS(Window::parse(""), Error);
}

TEST_CASE("month arithmetic clamps to month end") {
  const Window w{1, WindowUnit::Months};
  CHECK(advance(ts("2016-01-31T00:00:00Z"), w, 1) == ts("2016-02-29T00:00:00Z"));
  CHECK(advance(ts("2015-11-15T06:00:00Z"), Window{3, WindowUnit::Months}, 1) == ts("2016-02-15T06:00:00Z"));
}

TEST_CASE("frames are half-open and the last absorbs the remainder") {
  const FrameSpec spec(ts("2015-05-01T00:00:00Z"), ts("2016-01-15T00:00:00Z"));
  REQUIRE(spec.frame_count() == 2);
  CHECK(spec.frame_end(0) == ts("2015-08-01T00:00:00Z"));
  CHECK(spec.frame_end(1) == ts("2016-01-15T00:00:00Z"));
  CHECK(spec.frame_of(ts("2015-05-01T00:00:00Z")) == 0);
  CHECK(spec.frame_of(ts("2015-07-31T23:59:59Z")) == 0);
  CHECK(spec.frame_of(ts("2015-08-01T00:00:00Z")) == 1);
  CHECK(spec.frame_of(ts("2016-01-14T00:00:00Z")) == 1);
  CHECK_FALSE(spec.frame_of(ts("2016-01-15T00:00:00Z")));
  CHECK_FALSE(spec.frame_of(ts("2015-04-30T00:00:00Z")));
}

TEST_CASE("a span shorter than one window is a single frame") {
  const FrameSpec spec(ts("2015-05-01T00:00:00Z"), ts("2015-05-20T00:00:00Z"));
  CHECK(spec.frame_count() == 1);
}

TEST_CASE("covering spec is month aligned") {
  const auto spec = FrameSpec::covering(ts("2015-05-17T00:00:00Z"), ts("2021-04-30T12:00:00Z"));
  CHECK(spec.start() == ts("2015-05-01T00:00:00Z"));
  CHECK(spec.frame_count() == 24);
  CHECK(spec.frame_of(ts("2021-04-30T12:00:00Z")) == 23);

  const auto days = FrameSpec::covering(ts("2015-05-17T00:00:00Z"), ts("2015-05-17T00:00:00Z"),
                                        Window::parse("1d"));
  CHECK(days.frame_count() == 1);
  CHECK(days.start() == ts("2015-05-17T00:00:00Z"));
}

TEST_CASE("invalid spans throw") {
  CHECK_THROWS_AS(FrameSpec(ts("2015-05-01T00:00:00Z"), ts("2015-05-01T00:00:00Z")), Error);
  CHECK_THROWS_AS(FrameSpec(ts("2015-05-01T00:00:00Z"), ts("2015-06-01T00:00:00Z"), Window{0}), Error);
}
