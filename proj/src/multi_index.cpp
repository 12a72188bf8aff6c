#include "qmanifold/multi_index.hpp"

#include <numeric>

namespace qmfd {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw Error("MultiIndex entries must be non-negative");
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::zeros(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }

MultiIndex MultiIndex::unit(int dim, int axis) {
  if (axis < 0 || axis >= dim) throw AxisOutOfRange("MultiIndex::unit: axis out of range");
  std::vector<int> e(dim, 0);
  e[static_cast<std::size_t>(axis)] = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::order() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0);
}

std::size_t flat_index(const MultiIndex& k, int extent) {
  std::size_t flat = 0;
  for (int i = 0; i < k.dim(); ++i) {
    if (k[i] >= extent) throw Error("flat_index: entry exceeds tensor extent");
    flat = flat * static_cast<std::size_t>(extent) + static_cast<std::size_t>(k[i]);
  }
  return flat;
}

}  // namespace qmfd
