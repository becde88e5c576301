#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cwave/grid.hpp"

namespace cwave {

using SpaceFn = std::function<double(std::span<const double> x)>;
using SpaceTimeFn = std::function<double(std::span<const double> x, double t)>;
using TimeFn = std::function<double(double t)>;

/// (x, t, k) -> a_k^2 u_kk on the boundary (the auxiliary boundary data g_k).
using DirectionalSpaceTimeFn =
    std::function<double(std::span<const double> x, double t, std::size_t k)>;

/// Nodal density with bounds and per-axis speed scales a_k.
class MediumSpec {
 public:
  /// Bounds are taken from the nodal values unless given; given bounds must enclose them.
  MediumSpec(GridField rho, std::vector<double> a, std::optional<double> rho_min = std::nullopt,
             std::optional<double> rho_max = std::nullopt);

  static MediumSpec constant(SpaceMeshPtr mesh, double rho, std::vector<double> a);

  const GridField& rho() const { return rho_; }
  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }
  std::span<const double> a() const { return a_; }
  double a_max() const;

 private:
  GridField rho_;
  std::vector<double> a_;
  double rho_min_ = 1.0;
  double rho_max_ = 1.0;
};

/// f(x, t) = space(x) * time(t); lets the stepper sample the spatial factor once.
struct SeparableSource {
  SpaceFn space;
  TimeFn time;
};

struct ProblemData {
  SpaceFn u0;
  SpaceFn u1;
  SpaceTimeFn f;
  SpaceTimeFn g;
  DirectionalSpaceTimeFn g_aux;
  /// Optional factorised form of f; when set it must agree with f.
  std::optional<SeparableSource> separable_f;
  /// False when f cannot be evaluated off the time mesh (e.g. tabulated forcing).
  bool f_allows_half_step = true;
};

/// Two consecutive time levels; enough to advance a three-level scheme.
struct SchemeState {
  std::size_t level = 0;
  GridField v_prev;  // v^{m-1}; empty at level 0
  GridField v_cur;   // v^m
  GridField aux_sum; // last W = sum a_k^2 v_kk, when the stepper keeps it
};

/// Checks g(., 0) against u0 on boundary nodes; returns the max mismatch.
double initial_boundary_mismatch(const SpaceMesh& mesh, const ProblemData& data);

}  // namespace cwave
