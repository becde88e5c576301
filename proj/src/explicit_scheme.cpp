#include "cwave/explicit_scheme.hpp"

#include <stdexcept>

#include "stepping.hpp"

namespace cwave {
namespace detail {

ExplicitStepper::ExplicitStepper(const TensorMesh& mesh, const MediumSpec& medium,
                                 const ProblemData& data, bool rho_weight_u1)
    : mesh_(mesh),
      medium_(medium),
      data_(data),
      rho_weight_u1_(rho_weight_u1),
      forcing_(mesh.space, data),
      inv_rho_(mesh.space),
      lap_(mesh.space),
      f_(mesh.space) {
  if (!(*medium.rho().mesh_ptr() == *mesh.space)) {
    throw std::invalid_argument("ExplicitStepper: medium lives on a different mesh");
  }
  for (std::size_t p = 0; p < inv_rho_.size(); ++p) inv_rho_[p] = 1.0 / medium.rho()[p];
}

SchemeState ExplicitStepper::first(const SchemeState& state0) {
  if (state0.level != 0 || state0.v_cur.empty()) {
    throw std::invalid_argument("explicit_first_step: expects the level-0 state");
  }
  const double ht = mesh_.time.step();
  const GridField& v0 = state0.v_cur;
  const GridField& rho = medium_.rho();
  apply_lh_interior(v0, medium_.a(), lap_);
  forcing_.sample(0.0, f_);
  GridField u1(mesh_.space);
  sample_into(u1, data_.u1);

  SchemeState s;
  s.level = 1;
  s.v_prev = v0;
  s.v_cur = v0;
  double* out = s.v_cur.data();
  for_each_interior(*mesh_.space, [&](std::size_t p) {
    const double w = rho_weight_u1_ ? rho[p] : 1.0;
    out[p] = v0[p] + ht * inv_rho_[p] * (0.5 * ht * lap_[p] + w * u1[p] + 0.5 * ht * f_[p]);
  });
  set_boundary_from_g(s.v_cur, data_, mesh_.time.node(1));
  return s;
}

void ExplicitStepper::advance(SchemeState& s) {
  if (s.level < 1 || s.v_prev.empty()) {
    throw std::invalid_argument("explicit_step: previous level missing");
  }
  const std::size_t m = s.level;
  const double ht2 = mesh_.time.step() * mesh_.time.step();
  apply_lh_interior(s.v_cur, medium_.a(), lap_);
  forcing_.sample(mesh_.time.node(m), f_);
  const double* vc = s.v_cur.data();
  const double* lap = lap_.data();
  const double* f = f_.data();
  const double* ir = inv_rho_.data();
  double* vn = s.v_prev.data();
  for_each_interior(*mesh_.space, [&](std::size_t p) {
    vn[p] = 2.0 * vc[p] - vn[p] + ht2 * ir[p] * (lap[p] + f[p]);
  });
  set_boundary_from_g(s.v_prev, data_, mesh_.time.node(m + 1));
  std::swap(s.v_prev, s.v_cur);
  s.level = m + 1;
}

}  // namespace detail

SchemeState explicit_first_step(const SchemeState& state0, const ProblemData& data,
                                const MediumSpec& medium, const TensorMesh& mesh,
                                bool rho_weight_u1) {
  detail::ExplicitStepper stepper(mesh, medium, data, rho_weight_u1);
  return stepper.first(state0);
}

SchemeState explicit_step(const SchemeState& state, const ProblemData& data,
                          const MediumSpec& medium, const TensorMesh& mesh) {
  detail::ExplicitStepper stepper(mesh, medium, data, false);
  SchemeState next = state;
  stepper.advance(next);
  return next;
}

}  // namespace cwave
