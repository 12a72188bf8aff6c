#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qmanifold/errors.hpp"

namespace qmfd {

/// An n-tuple of non-negative integers, used for derivative orders,
/// monomial powers and basis labels.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  static MultiIndex zeros(int dim);
  /// Unit index e_axis (all zero except a single 1).
  static MultiIndex unit(int dim, int axis);

  int dim() const { return static_cast<int>(entries_.size()); }
  /// |alpha| = sum of the entries.
  int order() const;
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }

  bool operator==(const MultiIndex& other) const { return entries_ == other.entries_; }

 private:
  std::vector<int> entries_;
};

/// Row-major flat offset of index k in a tensor with `extent` entries per
/// axis (the last axis varies fastest).
std::size_t flat_index(const MultiIndex& k, int extent);

}  // namespace qmfd
