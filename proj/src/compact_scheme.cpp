#include "cwave/compact_scheme.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cwave/explicit_scheme.hpp"
#include "cwave/numerov_lines.hpp"
#include "stepping.hpp"

namespace cwave {

StabilityReport check_stability(const TensorMesh& mesh, const MediumSpec& medium,
                                std::optional<double> eps, std::optional<double> eps0) {
  const double ht = mesh.time.step();
  if (!(ht > 0.0)) throw std::invalid_argument("check_stability: nonpositive time step");
  const SpaceMesh& space = *mesh.space;
  if (medium.a().size() != space.dim()) {
    throw std::invalid_argument("check_stability: coefficient count mismatch");
  }
  if (eps && !(*eps > 0.0 && *eps < 1.0)) {
    throw std::invalid_argument("check_stability: eps must lie in (0, 1)");
  }
  if (eps0 && !(*eps0 > 0.0 && *eps0 < 1.0)) {
    throw std::invalid_argument("check_stability: eps0 must lie in (0, 1)");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < space.dim(); ++k) {
    const double h = space.step(k);
    if (!(h > 0.0)) throw std::invalid_argument("check_stability: nonpositive space step");
    sum += medium.a()[k] * medium.a()[k] / (h * h);
  }
  StabilityReport r;
  r.cfl_number = ht * ht * sum / medium.rho_min();
  r.courant_ratio = std::sqrt(r.cfl_number);
  r.margin_eps = 1.0 - r.cfl_number / 3.0;
  r.margin_eps0 = r.cfl_number < 2.0 / 3.0 ? std::sqrt(1.0 - 1.5 * r.cfl_number) : 0.0;
  if (eps || eps0) {
    const double e = eps.value_or(r.margin_eps > 0.0 ? r.margin_eps : 0.0);
    const double e0 = eps0.value_or(r.margin_eps0);
    r.sufficient = e > 0.0 && e0 > 0.0 &&
                   r.cfl_number <= std::min(3.0 * (1.0 - e), (2.0 / 3.0) * (1.0 - e0 * e0));
  } else {
    r.sufficient = r.margin_eps > 0.0 && r.margin_eps0 > 0.0;
  }
  // A relative slack of a few ulps keeps cfl == 1 (computed from exact ratios) admissible.
  r.satisfied = r.cfl_number <= 1.0 + 1e-12;
  return r;
}

SchemeState initial_state(const TensorMesh& mesh, const ProblemData& data) {
  SchemeState s;
  s.level = 0;
  s.v_cur = GridField(mesh.space);
  sample_into(s.v_cur, data.u0);
  return s;
}

namespace detail {

CompactStepper::CompactStepper(const TensorMesh& mesh, const MediumSpec& medium,
                               const ProblemData& data, CompactOptions options)
    : mesh_(mesh),
      medium_(medium),
      data_(data),
      options_(options),
      forcing_(mesh.space, data),
      inv_rho_(mesh.space),
      aux_(mesh.space),
      scratch_(mesh.space),
      lap_(mesh.space),
      f_prev_(mesh.space),
      f_cur_(mesh.space),
      f_next_(mesh.space) {
  if (!(*medium.rho().mesh_ptr() == *mesh.space)) {
    throw std::invalid_argument("CompactStepper: medium lives on a different mesh");
  }
  for (std::size_t p = 0; p < inv_rho_.size(); ++p) inv_rho_[p] = 1.0 / medium.rho()[p];
}

void CompactStepper::aux_sum(const GridField& v, double t) {
  const DirectionalSpaceTimeFn& g_aux = data_.g_aux;
  weighted_aux_sum_into(
      v, medium_.a(), {},
      [&g_aux, t](std::span<const double> x, std::size_t k) { return g_aux(x, t, k); }, aux_,
      scratch_);
}

void CompactStepper::ensure_forcing(std::size_t level) {
  const double ht = mesh_.time.step();
  if (forcing_level_ == level) return;
  if (forcing_level_ + 1 == level) {
    std::swap(f_prev_, f_cur_);
    std::swap(f_cur_, f_next_);
  } else {
    forcing_.sample(mesh_.time.node(level - 1), f_prev_);
    forcing_.sample(mesh_.time.node(level), f_cur_);
  }
  forcing_.sample(static_cast<double>(level + 1) * ht, f_next_);
  forcing_level_ = level;
}

SchemeState CompactStepper::first(const SchemeState& state0) {
  if (state0.level != 0 || state0.v_cur.empty()) {
    throw std::invalid_argument("first_step: expects the level-0 state");
  }
  if (options_.first_step == FirstStepVariant::two_level && !data_.f_allows_half_step) {
    throw std::invalid_argument("first_step: two-level variant needs f at t = h_t / 2");
  }
  const SpaceMesh& space = *mesh_.space;
  const double ht = mesh_.time.step();
  const GridField& v0 = state0.v_cur;
  const GridField& rho = medium_.rho();

  aux_sum(v0, 0.0);

  // f_prev_ <- f^0, f_cur_ <- weighted time combination f_dht
  forcing_.sample(0.0, f_prev_);
  if (options_.first_step == FirstStepVariant::two_level) {
    forcing_.sample(0.5 * ht, f_cur_);
    for (std::size_t p = 0; p < f_cur_.size(); ++p) {
      f_cur_[p] = f_prev_[p] / 3.0 + 2.0 * f_cur_[p] / 3.0;
    }
  } else {
    forcing_.sample(ht, f_cur_);
    forcing_.sample(2.0 * ht, f_next_);
    for (std::size_t p = 0; p < f_cur_.size(); ++p) {
      f_cur_[p] = 7.0 / 12.0 * f_prev_[p] + 0.5 * f_cur_[p] - f_next_[p] / 12.0;
    }
  }
  forcing_level_ = static_cast<std::size_t>(-1);

  // lap_ <- L_h[(W + f^0) / rho]
  for (std::size_t p = 0; p < scratch_.size(); ++p) {
    scratch_[p] = (aux_[p] + f_prev_[p]) * inv_rho_[p];
  }
  apply_lh_interior(scratch_, medium_.a(), lap_);

  // scratch_ <- u1 on all nodes, f_next_ <- L_h u1
  sample_into(scratch_, data_.u1);
  apply_lh_interior(scratch_, medium_.a(), f_next_);

  SchemeState s;
  s.level = 1;
  s.v_prev = v0;
  s.v_cur = v0;
  const bool weighted = options_.rho_weighted_first_step_aux;
  const double c12 = ht * ht / 12.0;
  const double c6 = ht * ht / 6.0;
  double* out = s.v_cur.data();
  for_each_interior(space, [&](std::size_t p) {
    const double aux = weighted ? rho[p] * aux_[p] : aux_[p];
    const double u1_star = rho[p] * scratch_[p] + c6 * f_next_[p];
    const double rhs = 0.5 * ht * (aux + f_cur_[p] + c12 * lap_[p]) + u1_star;
    out[p] = v0[p] + ht * inv_rho_[p] * rhs;
  });
  detail::set_boundary_from_g(s.v_cur, data_, mesh_.time.node(1));
  if (keep_aux) s.aux_sum = aux_;
  return s;
}

void CompactStepper::advance(SchemeState& s) {
  if (s.level < 1 || s.v_prev.empty()) {
    throw std::invalid_argument("main_step: previous level missing");
  }
  const SpaceMesh& space = *mesh_.space;
  const std::size_t m = s.level;
  const double ht = mesh_.time.step();
  const double tm = mesh_.time.node(m);

  aux_sum(s.v_cur, tm);
  ensure_forcing(m);

  {
    const double* w = aux_.data();
    const double* f = f_cur_.data();
    const double* ir = inv_rho_.data();
    double* tmp = scratch_.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(scratch_.size()); ++p) {
      tmp[p] = (w[p] + f[p]) * ir[p];
    }
  }
  apply_lh_interior(scratch_, medium_.a(), lap_);

  const double c12 = ht * ht / 12.0;
  const double ht2 = ht * ht;
  const double* w = aux_.data();
  const double* fp = f_prev_.data();
  const double* fc = f_cur_.data();
  const double* fn = f_next_.data();
  const double* lap = lap_.data();
  const double* ir = inv_rho_.data();
  const double* vc = s.v_cur.data();
  double* vn = s.v_prev.data();  // overwritten in place with v^{m+1}
  for_each_interior(space, [&](std::size_t p) {
    const double rhs = w[p] + fc[p] + c12 * lap[p] + (fn[p] - 2.0 * fc[p] + fp[p]) / 12.0;
    vn[p] = 2.0 * vc[p] - vn[p] + ht2 * ir[p] * rhs;
  });
  detail::set_boundary_from_g(s.v_prev, data_, mesh_.time.node(m + 1));
  std::swap(s.v_prev, s.v_cur);
  s.level = m + 1;
  if (keep_aux) s.aux_sum = aux_;
}

}  // namespace detail

SchemeState first_step(const SchemeState& state0, const ProblemData& data,
                       const MediumSpec& medium, const TensorMesh& mesh,
                       const CompactOptions& options) {
  detail::CompactStepper stepper(mesh, medium, data, options);
  stepper.keep_aux = true;
  return stepper.first(state0);
}

SchemeState main_step(const SchemeState& state, const ProblemData& data,
                      const MediumSpec& medium, const TensorMesh& mesh) {
  detail::CompactStepper stepper(mesh, medium, data, {});
  stepper.keep_aux = true;
  SchemeState next = state;
  stepper.advance(next);
  return next;
}

bool Observer::wants(std::size_t level) const {
  return every_level || std::find(levels.begin(), levels.end(), level) != levels.end();
}

namespace {

class WorkerScope {
 public:
  explicit WorkerScope(int workers) {
#ifdef _OPENMP
    if (workers > 0) {
      saved_ = omp_get_max_threads();
      omp_set_num_threads(workers);
    }
#else
    (void)workers;
#endif
  }
  ~WorkerScope() {
#ifdef _OPENMP
    if (saved_ > 0) omp_set_num_threads(saved_);
#endif
  }
  WorkerScope(const WorkerScope&) = delete;
  WorkerScope& operator=(const WorkerScope&) = delete;

 private:
  int saved_ = 0;
};

template <typename Stepper>
RunResult drive(Stepper& stepper, const TensorMesh& mesh, const ProblemData& data,
                std::span<const Observer> observers) {
  using clock = std::chrono::steady_clock;
  RunResult result;
  const std::size_t steps = mesh.time.steps;
  auto notify = [&](const SchemeState& s) {
    for (const Observer& obs : observers) {
      if (obs.callback && obs.wants(s.level)) obs.callback(s, mesh.time.node(s.level));
    }
  };

  SchemeState s0 = initial_state(mesh, data);
  notify(s0);
  auto t0 = clock::now();
  SchemeState s = stepper.first(s0);
  result.stepping_seconds += std::chrono::duration<double>(clock::now() - t0).count();
  s0 = SchemeState{};
  notify(s);
  for (std::size_t m = 1; m < steps; ++m) {
    t0 = clock::now();
    stepper.advance(s);
    result.stepping_seconds += std::chrono::duration<double>(clock::now() - t0).count();
    notify(s);
  }
  result.steps_taken = s.level;
  result.state = std::move(s);
  return result;
}

}  // namespace

RunResult run(const TensorMesh& mesh, const MediumSpec& medium, const ProblemData& data,
              const RunOptions& options, std::span<const Observer> observers) {
  WorkerScope scope(options.workers);
  const StabilityReport report = check_stability(mesh, medium);
  RunResult result;
  if (options.scheme == SchemeKind::compact) {
    detail::CompactStepper stepper(mesh, medium, data, options.compact);
    result = drive(stepper, mesh, data, observers);
  } else {
    detail::ExplicitStepper stepper(mesh, medium, data, options.explicit_first_step_rho_weight);
    result = drive(stepper, mesh, data, observers);
  }
  result.stability = report;
  return result;
}

}  // namespace cwave
