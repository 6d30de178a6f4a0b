#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "narrow/errors.hpp"

namespace narrow {

// Subset of [1, universe] with sorted members and an O(1) bitset view.
class IntSet {
 public:
  IntSet() = default;

  explicit IntSet(std::int64_t universe) : universe_(universe), bits_(std::size_t(universe / 64 + 1), 0) {
    if (universe < 0) throw ArgumentError("IntSet: negative universe");
  }

  IntSet(std::int64_t universe, std::span<const std::int64_t> members) : IntSet(universe) {
    for (std::int64_t x : members) insert_unsorted(x);
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::int64_t universe() const { return universe_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<std::int64_t>& members() const { return members_; }

  bool contains(std::int64_t x) const {
    if (x < 1 || x > universe_) return false;
    return (bits_[std::size_t(x) >> 6] >> (x & 63)) & 1;
  }

  // Appends in ascending order; x must exceed every current member.
  void push_back(std::int64_t x) {
    if (!members_.empty() && x <= members_.back()) throw ArgumentError("IntSet::push_back: not ascending");
    insert_unsorted(x);
  }

 private:
  void insert_unsorted(std::int64_t x) {
    if (x < 1 || x > universe_) throw ArgumentError("IntSet: member outside [1, universe]");
    if (contains(x)) return;
    bits_[std::size_t(x) >> 6] |= std::uint64_t(1) << (x & 63);
    members_.push_back(x);
  }

  std::int64_t universe_ = 0;
  std::vector<std::uint64_t> bits_{0};
  std::vector<std::int64_t> members_;
};

}  // namespace narrow
