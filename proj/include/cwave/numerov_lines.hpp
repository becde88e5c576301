#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cwave/grid.hpp"

namespace cwave {

/// Elimination factors for the constant tridiagonal system
///   x_{i-1} + 10 x_i + x_{i+1} = 12 r_i,  i = 1..n,
/// i.e. the Numerov average applied to the unknown. The matrix is the same for every
/// line of a direction, so the factors are computed once and shared.
class NumerovFactor {
 public:
  explicit NumerovFactor(std::size_t interior_size);

  std::size_t size() const { return pivot_.size(); }

  /// pivot_i = 1 / (10 - pivot_{i-1}); doubles as the upper factor c'_i.
  std::span<const double> pivots() const { return pivot_; }

  /// Solves one contiguous line in place. On entry `x` holds r_1..r_n, on exit the
  /// unknowns; left/right are the Dirichlet end values x_0 and x_{n+1}.
  void solve(std::span<double> x, double left, double right) const;

 private:
  std::vector<double> pivot_;
};

/// One Numerov line: (x_{i-1} + 10 x_i + x_{i+1}) / 12 = rhs_i with given end values.
struct LineSystem {
  std::vector<double> rhs;
  double left_bc = 0.0;
  double right_bc = 0.0;
};

/// Thomas elimination for a LineSystem. Throws std::invalid_argument on empty rhs.
std::vector<double> thomas_solve(const LineSystem& sys);

/// Boundary data for the auxiliary unknowns: returns a_k^2 v_kk at a boundary node x.
using AuxBoundaryFn = std::function<double(std::span<const double> x)>;

/// Same, for every direction: (x, k) -> a_k^2 v_kk.
using DirectionalBoundaryFn = std::function<double(std::span<const double> x, std::size_t k)>;

/// Solves s_kN v_kk = Lambda_k v + b_k on every line along axis k.
///
/// End values and all other boundary nodes of the result are bc(x) / a_k^2. `b` may be
/// null (zero inhomogeneity).
GridField solve_direction(const GridField& v, std::size_t k, double a_k, const GridField* b,
                          const AuxBoundaryFn& bc);

/// Workspace form of solve_direction writing into `out` (must share the mesh of v).
void solve_direction_into(const GridField& v, std::size_t k, double a_k, const GridField* b,
                          const AuxBoundaryFn& bc, GridField& out);

enum class AuxMode { weighted_sum, per_direction };

/// Auxiliary unknowns of the vector scheme: either each v_kk, or only W = sum a_k^2 v_kk.
struct AuxFieldSet {
  AuxMode mode = AuxMode::weighted_sum;
  std::vector<GridField> per_direction;  // filled in per_direction mode
  GridField weighted_sum;                // filled in both modes
};

/// W = sum_k a_k^2 v_kk with the directions accumulated in order k = 0..n-1.
/// `b` is empty (all zero) or holds one entry per direction (entries may be null).
GridField weighted_aux_sum(const GridField& v, std::span<const double> a,
                           std::span<const GridField* const> b,
                           const DirectionalBoundaryFn& bc);

/// Workspace form: result in `sum`, `scratch` is overwritten.
void weighted_aux_sum_into(const GridField& v, std::span<const double> a,
                           std::span<const GridField* const> b,
                           const DirectionalBoundaryFn& bc, GridField& sum, GridField& scratch);

AuxFieldSet solve_aux(const GridField& v, std::span<const double> a,
                      std::span<const GridField* const> b, const DirectionalBoundaryFn& bc,
                      AuxMode mode);

}  // namespace cwave
