#include "kdep/word.hpp"

#include <stdexcept>

namespace kdep {

Word::Word(Interval interval, std::vector<int> chars, int q) : interval_(interval), chars_(std::move(chars)), q_(q) {
  if (interval_.size() < 0 || static_cast<int>(chars_.size()) != interval_.size()) {
    throw std::invalid_argument("word length does not match its interval");
  }
  for (int c : chars_) {
    if (c < 1 || c > q_) {
      throw std::invalid_argument("word character " + std::to_string(c) + " outside [1," + std::to_string(q_) + "]");
    }
  }
}

Word Word::parse(std::string_view digits, int q) {
  std::vector<int> chars;
  for (char c : digits) {
    if (c < '1' || c > '9') {
      throw std::invalid_argument("word characters must be digits 1-9: '" + std::string(digits) + "'");
    }
    chars.push_back(c - '0');
  }
  const int n = static_cast<int>(chars.size());
  return Word(Interval{1, n}, std::move(chars), q);
}

bool Word::is_proper() const {
  for (std::size_t i = 1; i < chars_.size(); ++i) {
    if (chars_[i] == chars_[i - 1]) {
      return false;
    }
  }
  return true;
}

Word Word::reversed() const { return Word(interval_, std::vector<int>(chars_.rbegin(), chars_.rend()), q_); }

std::vector<int> Word::pattern() const {
  std::vector<int> relabel(static_cast<std::size_t>(q_) + 1, 0);
  std::vector<int> out;
  out.reserve(chars_.size());
  int next = 0;
  for (int c : chars_) {
    int& slot = relabel[static_cast<std::size_t>(c)];
    if (slot == 0) {
      slot = ++next;
    }
    out.push_back(slot);
  }
  return out;
}

std::string Word::to_string() const {
  std::string out;
  for (int c : chars_) {
    if (q_ <= 9) {
      out += static_cast<char>('0' + c);
    } else {
      if (!out.empty()) out += ',';
      out += std::to_string(c);
    }
  }
  return out;
}

}  // namespace kdep
