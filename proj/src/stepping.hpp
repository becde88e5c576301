#pragma once

// Internal stepper classes shared by the free step functions and run().

#include <cstddef>

#include "cwave/compact_scheme.hpp"
#include "cwave/grid.hpp"
#include "cwave/problem.hpp"

namespace cwave::detail {

/// Samples f(., t) on all nodes, reusing the spatial factor of separable sources.
class ForcingSampler {
 public:
  ForcingSampler(const SpaceMeshPtr& mesh, const ProblemData& data);
  void sample(double t, GridField& out) const;

 private:
  const ProblemData* data_;
  GridField space_;
};

void set_boundary_from_g(GridField& v, const ProblemData& data, double t);

/// Runs fn(p) over every interior node, rows in parallel.
template <typename Fn>
void for_each_interior(const SpaceMesh& mesh, Fn&& fn) {
  const auto rows = mesh.interior_rows();
  const std::size_t len = mesh.interior_row_length();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows.size()); ++r) {
    const std::size_t base = rows[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < len; ++j) fn(base + j);
  }
}

class CompactStepper {
 public:
  CompactStepper(const TensorMesh& mesh, const MediumSpec& medium, const ProblemData& data,
                 CompactOptions options);

  /// Level 0 -> 1.
  SchemeState first(const SchemeState& state0);

  /// Level m -> m+1 in place. Buffers rotate: v_prev takes the old v_cur.
  void advance(SchemeState& state);

  bool keep_aux = false;

 private:
  void ensure_forcing(std::size_t level);
  void aux_sum(const GridField& v, double t);

  const TensorMesh& mesh_;
  const MediumSpec& medium_;
  const ProblemData& data_;
  CompactOptions options_;
  ForcingSampler forcing_;
  GridField inv_rho_;
  GridField aux_;
  GridField scratch_;
  GridField lap_;
  GridField f_prev_, f_cur_, f_next_;
  std::size_t forcing_level_ = static_cast<std::size_t>(-1);
};

class ExplicitStepper {
 public:
  ExplicitStepper(const TensorMesh& mesh, const MediumSpec& medium, const ProblemData& data,
                  bool rho_weight_u1);

  SchemeState first(const SchemeState& state0);
  void advance(SchemeState& state);

 private:
  const TensorMesh& mesh_;
  const MediumSpec& medium_;
  const ProblemData& data_;
  bool rho_weight_u1_;
  ForcingSampler forcing_;
  GridField inv_rho_;
  GridField lap_;
  GridField f_;
};

}  // namespace cwave::detail
