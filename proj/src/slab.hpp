#pragma once

// Internal: decomposition of a field into slabs for line-wise work along one axis.
//
// For axis k the flat index factors as (outer * len + i) * inner + j, where i runs along
// axis k, `inner` is the stride of axis k (contiguous block of later axes) and `outer`
// enumerates the earlier axes. Work is split into tasks (outer index, chunk of j); the
// split depends only on the mesh, never on the thread count.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "cwave/grid.hpp"

namespace cwave::detail {

/// Doubles per task chunk: 512 * 8 B = 4 KiB contiguous output per line block.
inline constexpr std::size_t kChunk = 512;

struct Slab {
  std::size_t outer = 1;
  std::size_t len = 1;
  std::size_t inner = 1;
  std::vector<char> outer_interior;  // all axes < k interior
  std::vector<char> inner_interior;  // all axes > k interior

  std::size_t chunks() const { return (inner + kChunk - 1) / kChunk; }
  std::size_t tasks() const { return outer * chunks(); }
  std::size_t offset(std::size_t o, std::size_t i, std::size_t j) const {
    return (o * len + i) * inner + j;
  }
};

inline std::vector<char> interior_mask(const SpaceMesh& mesh, std::size_t first,
                                       std::size_t last) {
  std::size_t count = 1;
  for (std::size_t a = first; a < last; ++a) count *= mesh.shape(a);
  std::vector<char> mask(count, 1);
  std::vector<std::size_t> idx(last - first, 0);
  for (std::size_t p = 0; p < count; ++p) {
    bool interior = true;
    for (std::size_t a = first; a < last; ++a) {
      const std::size_t i = idx[a - first];
      if (i == 0 || i + 1 == mesh.shape(a)) interior = false;
    }
    mask[p] = interior ? 1 : 0;
    for (std::size_t a = last; a-- > first;) {
      if (++idx[a - first] < mesh.shape(a)) break;
      idx[a - first] = 0;
    }
  }
  return mask;
}

inline Slab make_slab(const SpaceMesh& mesh, std::size_t k) {
  Slab s;
  s.len = mesh.shape(k);
  s.inner = mesh.stride(k);
  s.outer = mesh.size() / (s.len * s.inner);
  s.outer_interior = interior_mask(mesh, 0, k);
  s.inner_interior = interior_mask(mesh, k + 1, mesh.dim());
  return s;
}

/// Runs fn(o, j_begin, j_end) for every task, in parallel.
template <typename Fn>
void for_each_task(const Slab& s, Fn&& fn) {
  const std::size_t chunks = s.chunks();
  const auto total = static_cast<std::ptrdiff_t>(s.tasks());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < total; ++t) {
    const std::size_t o = static_cast<std::size_t>(t) / chunks;
    const std::size_t c = static_cast<std::size_t>(t) % chunks;
    const std::size_t j0 = c * kChunk;
    const std::size_t j1 = std::min(s.inner, j0 + kChunk);
    fn(o, j0, j1);
  }
}

}  // namespace cwave::detail
