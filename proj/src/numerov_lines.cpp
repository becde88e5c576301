#include "cwave/numerov_lines.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "slab.hpp"

namespace cwave {

NumerovFactor::NumerovFactor(std::size_t interior_size) {
  if (interior_size == 0) throw std::invalid_argument("NumerovFactor: zero interior size");
  pivot_.resize(interior_size);
  pivot_[0] = 0.1;
  for (std::size_t i = 1; i < interior_size; ++i) pivot_[i] = 1.0 / (10.0 - pivot_[i - 1]);
}

void NumerovFactor::solve(std::span<double> x, double left, double right) const {
  const std::size_t n = pivot_.size();
  if (x.size() != n) throw std::invalid_argument("NumerovFactor::solve: size mismatch");
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = 12.0 * x[i];
    if (i == 0) d -= left;
    if (i + 1 == n) d -= right;
    prev = (d - prev) * pivot_[i];
    x[i] = prev;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= pivot_[i] * x[i + 1];
}

std::vector<double> thomas_solve(const LineSystem& sys) {
  if (sys.rhs.empty()) throw std::invalid_argument("thomas_solve: zero interior size");
  std::vector<double> x = sys.rhs;
  NumerovFactor(x.size()).solve(x, sys.left_bc, sys.right_bc);
  return x;
}

namespace {

/// Optional fused accumulation acc = (first ? 0 : acc) + weight * x, applied to swept
/// nodes during back substitution. Boundary entries are fixed up by the caller.
struct Accumulate {
  double* acc = nullptr;
  double weight = 0.0;
  bool first = false;

  void operator()(std::size_t q, double x) const {
    acc[q] = first ? weight * x : acc[q] + weight * x;
  }
};

void check_direction_args(const GridField& v, std::size_t k, double a_k, const GridField* b,
                          const GridField& out) {
  if (v.empty()) throw std::invalid_argument("solve_direction: empty field");
  if (k >= v.mesh().dim()) throw std::out_of_range("solve_direction: axis out of range");
  if (a_k == 0.0) throw std::invalid_argument("solve_direction: a_k must be nonzero");
  require_same_mesh(v, out, "solve_direction");
  if (b != nullptr) require_same_mesh(v, *b, "solve_direction");
}

/// Sweeps every line along axis k whose other indices are interior in the earlier axes.
/// `out` must hold the end values on entry; lines lying in faces of later axes are swept
/// too and leave unusable values at those boundary nodes.
template <typename Sink>
void sweep_lines(const GridField& v, std::size_t k, const GridField* b, GridField& out,
                 const Sink& sink) {
  const SpaceMesh& mesh = v.mesh();
  const detail::Slab s = detail::make_slab(mesh, k);
  const NumerovFactor factor(s.len - 2);
  const auto piv = factor.pivots();
  const std::size_t last = s.len - 2;  // interior indices 1..last
  const double scale = 12.0 / (mesh.step(k) * mesh.step(k));
  const double* in = v.data();
  const double* extra = b != nullptr ? b->data() : nullptr;
  double* res = out.data();

  if (s.inner == 1) {
    // Contiguous lines: sweep a group of lines in lockstep so the independent
    // recurrences overlap instead of each running at full latency.
    constexpr std::size_t kGroup = 16;
    const std::size_t groups = (s.outer + kGroup - 1) / kGroup;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(groups); ++g) {
      std::size_t lines[kGroup];
      std::size_t count = 0;
      const std::size_t o_end = std::min(s.outer, (static_cast<std::size_t>(g) + 1) * kGroup);
      for (std::size_t o = static_cast<std::size_t>(g) * kGroup; o < o_end; ++o) {
        if (s.outer_interior[o]) lines[count++] = o * s.len;
      }
      for (std::size_t i = 1; i <= last; ++i) {
        const double p = piv[i - 1];
        for (std::size_t l = 0; l < count; ++l) {
          const std::size_t q = lines[l] + i;
          double d = scale * (in[q + 1] - 2.0 * in[q] + in[q - 1]);
          if (extra != nullptr) d += 12.0 * extra[q];
          if (i == last) d -= res[q + 1];
          res[q] = (d - res[q - 1]) * p;  // res[q - 1] is the end value when i == 1
        }
      }
      for (std::size_t l = 0; l < count; ++l) sink(lines[l] + last, res[lines[l] + last]);
      for (std::size_t i = last; i-- > 1;) {
        const double p = piv[i - 1];
        for (std::size_t l = 0; l < count; ++l) {
          const std::size_t q = lines[l] + i;
          res[q] -= p * res[q + 1];
          sink(q, res[q]);
        }
      }
    }
    return;
  }

  detail::for_each_task(s, [&](std::size_t o, std::size_t j0, std::size_t j1) {
    if (!s.outer_interior[o]) return;
    const std::size_t st = s.inner;
    // forward elimination, d' stored in place; at i == 1 res[q - st] is the end value
    for (std::size_t i = 1; i <= last; ++i) {
      const std::size_t base = s.offset(o, i, 0);
      const double p = piv[i - 1];
      const bool at_end = i == last;
      for (std::size_t j = j0; j < j1; ++j) {
        const std::size_t q = base + j;
        double d = scale * (in[q + st] - 2.0 * in[q] + in[q - st]);
        if (extra != nullptr) d += 12.0 * extra[q];
        if (at_end) d -= res[q + st];
        res[q] = (d - res[q - st]) * p;
      }
    }
    {
      const std::size_t base = s.offset(o, last, 0);
      for (std::size_t j = j0; j < j1; ++j) sink(base + j, res[base + j]);
    }
    for (std::size_t i = last; i-- > 1;) {
      const std::size_t base = s.offset(o, i, 0);
      const double p = piv[i - 1];
      for (std::size_t j = j0; j < j1; ++j) {
        res[base + j] -= p * res[base + j + st];
        sink(base + j, res[base + j]);
      }
    }
  });
}

struct NoSink {
  void operator()(std::size_t, double) const {}
};

/// Writes bc / a_k^2 into every boundary node of `out`; returns the written values.
std::vector<double> set_aux_boundary(const SpaceMesh& mesh, double a_k, const AuxBoundaryFn& bc,
                                     GridField& out) {
  const double inv_a2 = 1.0 / (a_k * a_k);
  const auto boundary = mesh.boundary_nodes();
  std::vector<double> saved(boundary.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < static_cast<std::ptrdiff_t>(boundary.size()); ++q) {
    const auto idx = static_cast<std::size_t>(q);
    saved[idx] = bc(mesh.boundary_point(idx)) * inv_a2;
    out[boundary[idx]] = saved[idx];
  }
  return saved;
}

}  // namespace

void solve_direction_into(const GridField& v, std::size_t k, double a_k, const GridField* b,
                          const AuxBoundaryFn& bc, GridField& out) {
  check_direction_args(v, k, a_k, b, out);
  const SpaceMesh& mesh = v.mesh();
  const std::vector<double> saved = set_aux_boundary(mesh, a_k, bc, out);
  sweep_lines(v, k, b, out, NoSink{});
  // Lines lying in faces of later axes were swept too; restore their data.
  const auto boundary = mesh.boundary_nodes();
  double* res = out.data();
  for (std::size_t q = 0; q < boundary.size(); ++q) res[boundary[q]] = saved[q];
}

GridField solve_direction(const GridField& v, std::size_t k, double a_k, const GridField* b,
                          const AuxBoundaryFn& bc) {
  if (v.empty()) throw std::invalid_argument("solve_direction: empty field");
  GridField out(v.mesh_ptr(), 0.0);
  solve_direction_into(v, k, a_k, b, bc, out);
  return out;
}

namespace {

void check_aux_args(const GridField& v, std::span<const double> a,
                    std::span<const GridField* const> b) {
  if (v.empty()) throw std::invalid_argument("weighted_aux_sum: empty field");
  if (a.size() != v.mesh().dim()) {
    throw std::invalid_argument("weighted_aux_sum: coefficient count mismatch");
  }
  if (!b.empty() && b.size() != a.size()) {
    throw std::invalid_argument("weighted_aux_sum: inhomogeneity count mismatch");
  }
}

}  // namespace

void weighted_aux_sum_into(const GridField& v, std::span<const double> a,
                           std::span<const GridField* const> b,
                           const DirectionalBoundaryFn& bc, GridField& sum, GridField& scratch) {
  check_aux_args(v, a, b);
  require_same_mesh(v, sum, "weighted_aux_sum");
  require_same_mesh(v, scratch, "weighted_aux_sum");
  const SpaceMesh& mesh = v.mesh();
  const auto boundary = mesh.boundary_nodes();
  std::vector<double> boundary_sum(boundary.size());
  double* acc = sum.data();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const GridField* bk = b.empty() ? nullptr : b[k];
    check_direction_args(v, k, a[k], bk, scratch);
    const std::vector<double> saved = set_aux_boundary(
        mesh, a[k], [&bc, k](std::span<const double> x) { return bc(x, k); }, scratch);
    const double w = a[k] * a[k];
    // Accumulation happens inside the back substitution, node by node in direction
    // order k = 0, 1, ..., exactly as a separate pass would do it.
    sweep_lines(v, k, bk, scratch, Accumulate{acc, w, k == 0});
    for (std::size_t q = 0; q < boundary.size(); ++q) {
      boundary_sum[q] = k == 0 ? w * saved[q] : boundary_sum[q] + w * saved[q];
      acc[boundary[q]] = boundary_sum[q];
    }
  }
}

GridField weighted_aux_sum(const GridField& v, std::span<const double> a,
                           std::span<const GridField* const> b,
                           const DirectionalBoundaryFn& bc) {
  check_aux_args(v, a, b);
  GridField sum(v.mesh_ptr());
  GridField scratch(v.mesh_ptr());
  weighted_aux_sum_into(v, a, b, bc, sum, scratch);
  return sum;
}

AuxFieldSet solve_aux(const GridField& v, std::span<const double> a,
                      std::span<const GridField* const> b, const DirectionalBoundaryFn& bc,
                      AuxMode mode) {
  check_aux_args(v, a, b);
  AuxFieldSet set;
  set.mode = mode;
  if (mode == AuxMode::weighted_sum) {
    set.weighted_sum = weighted_aux_sum(v, a, b, bc);
    return set;
  }
  set.weighted_sum = GridField(v.mesh_ptr(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const GridField* bk = b.empty() ? nullptr : b[k];
    set.per_direction.push_back(solve_direction(
        v, k, a[k], bk, [&bc, k](std::span<const double> x) { return bc(x, k); }));
    const double w = a[k] * a[k];
    const GridField& part = set.per_direction.back();
    for (std::size_t p = 0; p < v.size(); ++p) set.weighted_sum[p] += w * part[p];
  }
  return set;
}

}  // namespace cwave
