#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace cbn {

using StateId = std::uint32_t;

/// Bit-set over a dense state table.
///
/// Trailing zero words are always trimmed, so two sets with the same members
/// compare equal and hash identically regardless of how they were built.
class StateSet {
 public:
  StateSet() = default;
  StateSet(std::initializer_list<StateId> ids) {
    for (StateId q : ids) insert(q);
  }

  static StateSet singleton(StateId q) {
    StateSet s;
    s.insert(q);
    return s;
  }

  /// {0, ..., n-1}
  static StateSet full(std::size_t n) {
    StateSet s;
    s.words_.assign((n + 63) / 64, ~std::uint64_t{0});
    if (n % 64 != 0 && !s.words_.empty()) s.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
    s.trim();
    return s;
  }

  void insert(StateId q) {
    std::size_t w = q / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (q % 64);
  }

  void erase(StateId q) {
    std::size_t w = q / 64;
    if (w >= words_.size()) return;
    words_[w] &= ~(std::uint64_t{1} << (q % 64));
    trim();
  }

  bool contains(StateId q) const {
    std::size_t w = q / 64;
    return w < words_.size() && ((words_[w] >> (q % 64)) & 1U) != 0;
  }

  bool empty() const { return words_.empty(); }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  StateSet& operator|=(const StateSet& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  StateSet& operator&=(const StateSet& o) {
    if (words_.size() > o.words_.size()) words_.resize(o.words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    trim();
    return *this;
  }

  StateSet& operator-=(const StateSet& o) {
    std::size_t n = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < n; ++i) words_[i] &= ~o.words_[i];
    trim();
    return *this;
  }

  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

  bool intersects(const StateSet& o) const {
    std::size_t n = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < n; ++i)
      if ((words_[i] & o.words_[i]) != 0) return true;
    return false;
  }

  bool is_subset_of(const StateSet& o) const {
    if (words_.size() > o.words_.size()) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
  }

  template <class F>
  void for_each(F&& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        int bit = std::countr_zero(w);
        fn(static_cast<StateId>(i * 64 + static_cast<std::size_t>(bit)));
        w &= w - 1;
      }
    }
  }

  std::vector<StateId> to_vector() const {
    std::vector<StateId> out;
    out.reserve(size());
    for_each([&](StateId q) { out.push_back(q); });
    return out;
  }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  friend bool operator==(const StateSet&, const StateSet&) = default;

  /// Total order by sorted member list; used only where output order matters.
  friend bool operator<(const StateSet& a, const StateSet& b) { return a.to_vector() < b.to_vector(); }

 private:
  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  std::vector<std::uint64_t> words_;
};

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

}  // namespace cbn
