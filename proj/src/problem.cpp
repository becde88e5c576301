#include "cwave/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stepping.hpp"

namespace cwave {

MediumSpec::MediumSpec(GridField rho, std::vector<double> a, std::optional<double> rho_min,
                       std::optional<double> rho_max)
    : rho_(std::move(rho)), a_(std::move(a)) {
  if (rho_.empty()) throw std::invalid_argument("MediumSpec: empty density field");
  if (a_.size() != rho_.mesh().dim()) {
    throw std::invalid_argument("MediumSpec: coefficient count mismatch");
  }
  for (double ak : a_) {
    if (!(ak > 0.0)) throw std::invalid_argument("MediumSpec: a_k must be positive");
  }
  const auto values = rho_.values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  rho_min_ = rho_min.value_or(*lo);
  rho_max_ = rho_max.value_or(*hi);
  if (!(rho_min_ > 0.0)) throw std::invalid_argument("MediumSpec: rho_min must be positive");
  if (*lo < rho_min_ || *hi > rho_max_) {
    throw std::invalid_argument("MediumSpec: nodal density outside [rho_min, rho_max]");
  }
}

MediumSpec MediumSpec::constant(SpaceMeshPtr mesh, double rho, std::vector<double> a) {
  return MediumSpec(GridField(std::move(mesh), rho), std::move(a));
}

double MediumSpec::a_max() const { return *std::max_element(a_.begin(), a_.end()); }

double initial_boundary_mismatch(const SpaceMesh& mesh, const ProblemData& data) {
  std::vector<double> x(mesh.dim());
  double worst = 0.0;
  for (std::size_t p : mesh.boundary_nodes()) {
    mesh.coordinates(p, x);
    worst = std::max(worst, std::abs(data.g(x, 0.0) - data.u0(x)));
  }
  return worst;
}

namespace detail {

ForcingSampler::ForcingSampler(const SpaceMeshPtr& mesh, const ProblemData& data)
    : data_(&data) {
  if (data.separable_f) {
    space_ = GridField(mesh);
    sample_into(space_, data.separable_f->space);
  }
}

void ForcingSampler::sample(double t, GridField& out) const {
  if (!space_.empty()) {
    const double s = data_->separable_f->time(t);
    const double* src = space_.data();
    double* dst = out.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(out.size()); ++p) {
      dst[p] = src[p] * s;
    }
    return;
  }
  const SpaceTimeFn& f = data_->f;
  sample_into(out, [&f, t](std::span<const double> x) { return f(x, t); });
}

void set_boundary_from_g(GridField& v, const ProblemData& data, double t) {
  const SpaceTimeFn& g = data.g;
  sample_boundary_into(v, [&g, t](std::span<const double> x) { return g(x, t); });
}

}  // namespace detail
}  // namespace cwave
