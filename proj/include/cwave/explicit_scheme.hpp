#pragma once

#include "cwave/grid.hpp"
#include "cwave/problem.hpp"

namespace cwave {

// Classical second-order leapfrog scheme  rho Lambda_t v - L_h v = f,  used as the
// comparison baseline. Its first step reads
//   rho (v^1 - v^0) / h_t - (h_t / 2) L_h v^0 = u1 + (h_t / 2) f^0,
// with u1 unweighted by rho unless `rho_weight_u1` is set.

SchemeState explicit_first_step(const SchemeState& state0, const ProblemData& data,
                                const MediumSpec& medium, const TensorMesh& mesh,
                                bool rho_weight_u1 = false);

SchemeState explicit_step(const SchemeState& state, const ProblemData& data,
                          const MediumSpec& medium, const TensorMesh& mesh);

}  // namespace cwave
