#pragma once

namespace kdep {

/// The integer interval [a, b]; b = a - 1 encodes the empty interval.
struct Interval {
  int a = 0;
  int b = -1;

  int size() const { return b - a + 1; }
  bool empty() const { return b < a; }
  bool contains(int i) const { return a <= i && i <= b; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace kdep
