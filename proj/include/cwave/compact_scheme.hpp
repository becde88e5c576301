#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cwave/grid.hpp"
#include "cwave/problem.hpp"

namespace cwave {

/// CFL-type diagnostics for the compact scheme.
///
/// cfl_number is h_t^2 (sum_k a_k^2 / h_k^2) / rho_min. Two verdicts are reported:
///  - `sufficient`: the energy-estimate condition
///      cfl_number <= min{3 (1 - eps), (2/3) (1 - eps0^2)}
///    (with the given eps/eps0, or with both maximal margins strictly positive);
///  - `satisfied`: the sharp von Neumann bound cfl_number <= 1 of the frozen-coefficient
///    scheme, i.e. Courant ratio sqrt(cfl_number) <= 1.
struct StabilityReport {
  double cfl_number = 0.0;
  double courant_ratio = 0.0;
  double margin_eps = 0.0;   // largest eps with (1/3) cfl <= 1 - eps
  double margin_eps0 = 0.0;  // largest eps0 with cfl <= (2/3)(1 - eps0^2); 0 if none
  bool sufficient = false;
  bool satisfied = false;
};

StabilityReport check_stability(const TensorMesh& mesh, const MediumSpec& medium,
                                std::optional<double> eps = std::nullopt,
                                std::optional<double> eps0 = std::nullopt);

/// Time weights for f in the first step: f^{1/2}-based two-level form or the
/// (7/12, 1/2, -1/12) three-level form.
enum class FirstStepVariant { two_level, three_level };

struct CompactOptions {
  FirstStepVariant first_step = FirstStepVariant::two_level;
  /// Multiply the aux sum by rho in the first-step braces, as one printed form has it.
  bool rho_weighted_first_step_aux = false;
};

/// v^0 = u0 at every node (boundary included).
SchemeState initial_state(const TensorMesh& mesh, const ProblemData& data);

/// Level 0 -> 1 of the compact scheme.
SchemeState first_step(const SchemeState& state0, const ProblemData& data,
                       const MediumSpec& medium, const TensorMesh& mesh,
                       const CompactOptions& options = {});

/// Level m -> m+1 (m >= 1) of the compact scheme.
SchemeState main_step(const SchemeState& state, const ProblemData& data,
                      const MediumSpec& medium, const TensorMesh& mesh);

enum class SchemeKind { compact, explicit_leapfrog };

struct RunOptions {
  SchemeKind scheme = SchemeKind::compact;
  CompactOptions compact;
  /// Explicit scheme: use rho * u1 instead of u1 in the first step.
  bool explicit_first_step_rho_weight = false;
  /// 0 keeps the current OpenMP setting.
  int workers = 0;
};

/// Called with read-only state at the requested levels (level 0 has no v_prev).
struct Observer {
  std::vector<std::size_t> levels;
  bool every_level = false;
  std::function<void(const SchemeState& state, double t)> callback;

  bool wants(std::size_t level) const;
};

struct RunResult {
  SchemeState state;
  StabilityReport stability;
  double stepping_seconds = 0.0;  // wall clock of the stepping loop only
  std::size_t steps_taken = 0;
};

/// First step then M-1 main steps. Stability violations are not errors; callers inspect
/// RunResult::stability.
RunResult run(const TensorMesh& mesh, const MediumSpec& medium, const ProblemData& data,
              const RunOptions& options, std::span<const Observer> observers = {});

}  // namespace cwave
