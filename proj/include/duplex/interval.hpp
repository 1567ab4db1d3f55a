#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace duplex {

/// Raised when an input document, script, or argument violates a contract.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Milliseconds from dialogue start.
using Millis = std::int64_t;

using SpeakerId = std::string;

/// Half-open time interval [start, end) in milliseconds, never empty.
class Interval {
 public:
  Interval(Millis start, Millis end) : start_(start), end_(end) {
    if (start < 0) {
      throw ValidationError("interval start " + std::to_string(start) + " is negative");
    }
    if (start >= end) {
      throw ValidationError("interval [" + std::to_string(start) + ", " + std::to_string(end) +
                            ") is empty or reversed");
    }
  }

  Millis start() const noexcept { return start_; }
  Millis end() const noexcept { return end_; }
  Millis duration() const noexcept { return end_ - start_; }

  bool contains(Millis t) const noexcept { return t >= start_ && t < end_; }
  bool covers(const Interval& other) const noexcept {
    return other.start_ >= start_ && other.end_ <= end_;
  }
  bool intersects(const Interval& other) const noexcept {
    return start_ < other.end_ && other.start_ < end_;
  }
  Interval shifted(Millis delta) const { return {start_ + delta, end_ + delta}; }

  friend auto operator<=>(const Interval&, const Interval&) = default;

 private:
  Millis start_;
  Millis end_;
};

using IntervalList = std::vector<Interval>;

namespace detail {

// Coalesces touching or overlapping intervals of a start-sorted list.
inline IntervalList merge_touching(IntervalList sorted) {
  IntervalList out;
  for (const auto& iv : sorted) {
    if (!out.empty() && iv.start() <= out.back().end()) {
      out.back() = Interval(out.back().start(), std::max(out.back().end(), iv.end()));
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

// Pairwise intersection of two sorted, internally disjoint lists.
inline IntervalList intersect_sorted(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Millis lo = std::max(a[i].start(), b[j].start());
    const Millis hi = std::min(a[i].end(), b[j].end());
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].end() < b[j].end()) {
      ++i;
    } else {
      ++j;
    }
  }
  return merge_touching(std::move(out));
}

// Complement of a sorted disjoint list inside `span`.
inline IntervalList complement_within(const IntervalList& sorted, const Interval& span) {
  IntervalList out;
  Millis cursor = span.start();
  for (const auto& iv : sorted) {
    const Millis lo = std::max(iv.start(), span.start());
    const Millis hi = std::min(iv.end(), span.end());
    if (lo >= hi) continue;
    if (lo > cursor) out.emplace_back(cursor, lo);
    cursor = std::max(cursor, hi);
  }
  if (cursor < span.end()) out.emplace_back(cursor, span.end());
  return out;
}

}  // namespace detail
}  // namespace duplex
