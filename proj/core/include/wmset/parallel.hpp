#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace wmset::parallel {

/// Caps the worker count used by the library; 0 restores the hardware default.
/// Results never depend on this setting: work is split into fixed blocks and
/// block results are combined in a fixed order.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Calls fn(b) for every b in [0, blocks), spread over up to max_threads() workers.
/// The first exception thrown by any block is rethrown on the caller.
void for_each_block(std::size_t blocks, const std::function<void(std::size_t)>& fn);

/// Pairwise reduction with a shape that depends only on parts.size().
template <class T, class Op>
T tree_reduce(std::vector<T> parts, Op op, T identity) {
  if (parts.empty()) return identity;
  while (parts.size() > 1) {
    std::vector<T> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(op(parts[i], parts[i + 1]));
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

}  // namespace wmset::parallel
