#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kdep/interval.hpp"

namespace kdep {

/// A word over the alphabet {1,...,q} indexed by a finite interval.
class Word {
 public:
  Word() = default;
  /// Throws std::invalid_argument when a character lies outside [1, q] or the
  /// length does not match the interval.
  Word(Interval interval, std::vector<int> chars, int q);
  /// Word on [1, n] from a digit string such as "121".
  static Word parse(std::string_view digits, int q);

  Interval interval() const { return interval_; }
  int alphabet() const { return q_; }
  int size() const { return static_cast<int>(chars_.size()); }
  bool empty() const { return chars_.empty(); }
  const std::vector<int>& chars() const { return chars_; }
  /// Character at position i of the interval.
  int at(int i) const { return chars_[static_cast<std::size_t>(i - interval_.a)]; }

  /// No two adjacent characters are equal.
  bool is_proper() const;
  Word reversed() const;
  /// Relabels colors in order of first appearance, so "313" becomes "121".
  std::vector<int> pattern() const;
  std::string to_string() const;

  friend bool operator==(const Word& x, const Word& y) {
    return x.interval_ == y.interval_ && x.q_ == y.q_ && x.chars_ == y.chars_;
  }

 private:
  Interval interval_{1, 0};
  std::vector<int> chars_;
  int q_ = 0;
};

/// Calls f(word) for each of the q^n words on [1, n].
template <typename F>
void for_each_word(int n, int q, F&& f) {
  std::vector<int> chars(static_cast<std::size_t>(n), 1);
  while (true) {
    f(Word(Interval{1, n}, chars, q));
    int pos = n - 1;
    while (pos >= 0 && chars[static_cast<std::size_t>(pos)] == q) {
      chars[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) {
      return;
    }
    ++chars[static_cast<std::size_t>(pos)];
  }
}

}  // namespace kdep
