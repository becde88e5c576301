#include "cwave/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cwave::oracles {

namespace {

constexpr double kPi = std::numbers::pi;

double radius(std::span<const double> x, std::span<const double> center) {
  double r2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - center[k];
    r2 += d * d;
  }
  return std::sqrt(r2);
}

}  // namespace

double RadialProfile::operator()(double r) const {
  r = std::abs(r);
  switch (kind) {
    case ProfileKind::w0:
      return r < r0 ? 1.0 : 0.0;
    case ProfileKind::w1:
      return r <= r0 ? (r0 - r) / r0 : 0.0;
    case ProfileKind::w2: {
      if (r > r0) return 0.0;
      const double s = r / r0;
      const double c = (r0 - r) / r0;
      return s * s * c * c;
    }
  }
  return 0.0;
}

double RadialProfile::derivative(double r) const {
  r = std::abs(r);
  if (r >= r0) return 0.0;
  switch (kind) {
    case ProfileKind::w0:
      return 0.0;
    case ProfileKind::w1:
      return -1.0 / r0;
    case ProfileKind::w2: {
      const double d = r0 - r;
      return (2.0 * r * d * d - 2.0 * r * r * d) / (r0 * r0 * r0 * r0);
    }
  }
  return 0.0;
}

double RadialProfile::first_moment(double s) const {
  s = std::min(std::abs(s), r0);
  switch (kind) {
    case ProfileKind::w0:
      return 0.5 * s * s;
    case ProfileKind::w1:
      return 0.5 * s * s - s * s * s / (3.0 * r0);
    case ProfileKind::w2: {
      const double s4 = s * s * s * s;
      return (r0 * r0 * s4 / 4.0 - 2.0 * r0 * s4 * s / 5.0 + s4 * s * s / 6.0) /
             (r0 * r0 * r0 * r0);
    }
  }
  return 0.0;
}

double RadialProfile::second_moment(double s) const {
  const double sign = s < 0.0 ? -1.0 : 1.0;
  const double abs_s = std::abs(s);
  const double inside = std::min(abs_s, r0);
  double value = 0.0;
  switch (kind) {
    case ProfileKind::w0:
      value = inside * inside * inside / 6.0;
      break;
    case ProfileKind::w1:
      value = inside * inside * inside / 6.0 - inside * inside * inside * inside / (12.0 * r0);
      break;
    case ProfileKind::w2: {
      const double p5 = inside * inside * inside * inside * inside;
      value = (r0 * r0 * p5 / 20.0 - r0 * p5 * inside / 15.0 + p5 * inside * inside / 42.0) /
              (r0 * r0 * r0 * r0);
      break;
    }
  }
  if (abs_s > r0) value += first_moment(r0) * (abs_s - r0);
  return sign * value;
}

double RadialProfile::smoothness() const {
  switch (kind) {
    case ProfileKind::w0:
      return 0.5;
    case ProfileKind::w1:
      return 1.5;
    case ProfileKind::w2:
      return 2.5;
  }
  return 0.0;
}

SphericalCase parse_spherical_case(char tag) {
  switch (tag) {
    case 'a': return SphericalCase::a;
    case 'b': return SphericalCase::b;
    case 'c': return SphericalCase::c;
    case 'd': return SphericalCase::d;
    case 'e': return SphericalCase::e;
    case 'f': return SphericalCase::f;
    default:
      throw std::invalid_argument(std::string("unknown spherical case '") + tag + "'");
  }
}

char spherical_case_tag(SphericalCase c) { return static_cast<char>('a' + static_cast<int>(c)); }

RadialProfile spherical_case_profile(SphericalCase c, double r0) {
  switch (c) {
    case SphericalCase::a: return {ProfileKind::w1, r0};
    case SphericalCase::b: return {ProfileKind::w2, r0};
    case SphericalCase::c: return {ProfileKind::w0, r0};
    case SphericalCase::d: return {ProfileKind::w1, r0};
    case SphericalCase::e: return {ProfileKind::w0, r0};
    case SphericalCase::f: return {ProfileKind::w1, r0};
  }
  throw std::invalid_argument("unknown spherical case");
}

double spherical_case_smoothness(SphericalCase c) {
  // u0 has order lambda, u1 order lambda - 1, f order lambda - 2.
  const double s = spherical_case_profile(c, 1.0).smoothness();
  switch (c) {
    case SphericalCase::a:
    case SphericalCase::b:
      return s;
    case SphericalCase::c:
    case SphericalCase::d:
      return s + 1.0;
    case SphericalCase::e:
    case SphericalCase::f:
      return s + 2.0;
  }
  return s;
}

double spherical_exact(double r, double t, SphericalCase c, double r0, double a) {
  if (!(r0 > 0.0) || !(a > 0.0)) throw std::invalid_argument("spherical_exact: bad parameters");
  if (r < 0.0 || t < 0.0) throw std::invalid_argument("spherical_exact: need r >= 0, t >= 0");
  const RadialProfile w = spherical_case_profile(c, r0);
  const double at = a * t;
  const bool near_centre = r < 1e-6 * r0;
  switch (c) {
    case SphericalCase::a:
    case SphericalCase::b: {
      if (near_centre) return w(at) + at * w.derivative(at);
      const auto odd = [&w](double s) { return s * w(std::abs(s)); };
      return (odd(r - at) + odd(r + at)) / (2.0 * r);
    }
    case SphericalCase::c:
    case SphericalCase::d:
      if (near_centre) return t * w(at);
      return (w.first_moment(r + at) - w.first_moment(r - at)) / (2.0 * a * r);
    case SphericalCase::e:
    case SphericalCase::f:
      if (near_centre) return w.first_moment(at) / (a * a);
      return (w.second_moment(r + at) + w.second_moment(r - at) - 2.0 * w.second_moment(r)) /
             (2.0 * a * a * r);
  }
  throw std::invalid_argument("spherical_exact: unknown case");
}

double travelling_wave(std::span<const double> x, double t) {
  double phase = t;
  for (double xk : x) phase -= xk;
  return std::cos(phase);
}

double travelling_wave_density(std::span<const double> x) {
  double prod = 1.0;
  for (double xk : x) {
    const double s = std::sin(2.0 * kPi * xk);
    prod *= s * s;
  }
  return 1.0 + prod;
}

ProblemData travelling_wave_data(bool variable_density) {
  const double a2 = 1.0 / 3.0;
  ProblemData d;
  d.u0 = [](std::span<const double> x) { return travelling_wave(x, 0.0); };
  d.u1 = [](std::span<const double> x) {
    double s = 0.0;
    for (double xk : x) s += xk;
    return std::sin(s);
  };
  if (variable_density) {
    d.f = [](std::span<const double> x, double t) {
      return (1.0 - travelling_wave_density(x)) * travelling_wave(x, t);
    };
  } else {
    d.f = [](std::span<const double>, double) { return 0.0; };
    d.separable_f = SeparableSource{[](std::span<const double>) { return 0.0; },
                                    [](double) { return 0.0; }};
  }
  d.g = travelling_wave;
  d.g_aux = [a2](std::span<const double> x, double t, std::size_t) {
    return -a2 * travelling_wave(x, t);
  };
  return d;
}

double ricker_spatial(double r, double gamma, RickerNormalization norm) {
  if (!(gamma > 0.0)) throw std::invalid_argument("ricker_spatial: gamma must be positive");
  const double scale = norm == RickerNormalization::as_printed ? std::pow(kPi / gamma, 1.5)
                                                               : std::pow(gamma / kPi, 1.5);
  return scale * std::exp(-gamma * r * r);
}

double ricker_time(double t) { return std::sin(50.0 * t) * std::exp(-200.0 * t * t); }

double ricker_source(std::span<const double> x, double t, double gamma,
                     std::span<const double> center, RickerNormalization norm) {
  return ricker_spatial(radius(x, center), gamma, norm) * ricker_time(t);
}

double layered_density(double x) {
  constexpr double slack = 1e-12;
  if (x < -slack || x > 3.0 + slack) {
    throw std::out_of_range("layered_density: x outside [0, 3]");
  }
  if (x < 1.0) return 4.0 / 9.0;
  if (x < 2.0) return 1.0;
  return 1.0 / 9.0;
}

DirectionalSpaceTimeFn homogeneous_aux_boundary(SpaceTimeFn f, double origin, double extent) {
  return [f = std::move(f), origin, extent](std::span<const double> x, double t,
                                            std::size_t k) {
    const double tol = 1e-12 * std::max(1.0, std::abs(extent));
    const bool on_k_face =
        std::abs(x[k] - origin) <= tol || std::abs(x[k] - (origin + extent)) <= tol;
    return on_k_face ? -f(x, t) : 0.0;
  };
}

SpaceMeshPtr Scenario::space_mesh(std::size_t intervals) const {
  return SpaceMesh::cube(dim, extent, intervals, origin);
}

TensorMesh Scenario::mesh(std::size_t intervals, std::size_t steps) const {
  return TensorMesh{space_mesh(intervals), TimeMesh(final_time, steps)};
}

MediumSpec Scenario::medium(const SpaceMeshPtr& mesh) const {
  GridField field(mesh);
  sample_into(field, rho);
  return MediumSpec(std::move(field), std::vector<double>(dim, a), rho_min, rho_max);
}

namespace {

const std::vector<std::pair<std::size_t, std::size_t>> kPaperLadder = {
    {81, 27}, {135, 45}, {225, 75}, {375, 125}};

Scenario travelling_wave_scenario(bool variable) {
  Scenario s;
  s.name = variable ? "ex1b" : "ex1a";
  s.title = variable ? "travelling wave, variable density" : "travelling wave, constant density";
  s.extent = 1.0;
  s.final_time = 0.3;
  s.a = 1.0 / std::sqrt(3.0);
  s.medium_kind = variable ? MediumKind::expression : MediumKind::constant;
  if (variable) {
    s.rho = travelling_wave_density;
    s.rho_min = 1.0;
    s.rho_max = 2.0;
  } else {
    s.rho = [](std::span<const double>) { return 1.0; };
  }
  s.data = travelling_wave_data(variable);
  s.exact = travelling_wave;
  s.ladder = kPaperLadder;
  s.q = 5.0 / 3.0;
  s.smoothness = 5.0;
  return s;
}

Scenario spherical_scenario(SphericalCase c, const CatalogOptions& options) {
  Scenario s;
  s.name = std::string("ex2") + spherical_case_tag(c);
  s.extent = 1.0;
  s.origin = -0.5;
  s.final_time = 0.3;
  s.a = 1.0 / std::sqrt(3.0);
  s.r0 = 0.2;
  s.rho = [](std::span<const double>) { return 1.0; };
  s.center = {0.0, 0.0, 0.0};
  s.spherical_case = c;
  s.smoothness = spherical_case_smoothness(c);
  s.ladder = kPaperLadder;
  s.q = 5.0 / 3.0;

  const RadialProfile w = spherical_case_profile(c, s.r0);
  const auto radial = [w](std::span<const double> x) {
    double r2 = 0.0;
    for (double xk : x) r2 += xk * xk;
    return w(std::sqrt(r2));
  };
  const auto zero = [](std::span<const double>) { return 0.0; };
  ProblemData& d = s.data;
  d.u0 = zero;
  d.u1 = zero;
  d.f = [](std::span<const double>, double) { return 0.0; };
  const char* what = "";
  switch (c) {
    case SphericalCase::a:
    case SphericalCase::b:
      d.u0 = radial;
      what = "u0";
      break;
    case SphericalCase::c:
    case SphericalCase::d:
      d.u1 = radial;
      what = "u1";
      break;
    case SphericalCase::e:
    case SphericalCase::f: {
      const bool late = c == SphericalCase::e && options.w0_source_zero_at_t0;
      const TimeFn switch_on = [late](double t) { return late && t <= 0.0 ? 0.0 : 1.0; };
      d.f = [radial, switch_on](std::span<const double> x, double t) {
        return switch_on(t) * radial(x);
      };
      d.separable_f = SeparableSource{radial, switch_on};
      what = "f";
      break;
    }
  }
  const char* profile = w.kind == ProfileKind::w0 ? "w0" : w.kind == ProfileKind::w1 ? "w1" : "w2";
  s.title = std::string("spherical data, ") + what + " = " + profile;
  d.g = [](std::span<const double>, double) { return 0.0; };
  d.g_aux = homogeneous_aux_boundary(d.f, s.origin, s.extent);
  const double r0 = s.r0;
  const double a = s.a;
  s.exact = [c, r0, a](std::span<const double> x, double t) {
    double r2 = 0.0;
    for (double xk : x) r2 += xk * xk;
    return spherical_exact(std::sqrt(r2), t, c, r0, a);
  };
  return s;
}

Scenario layered_scenario(const CatalogOptions& options) {
  Scenario s;
  s.name = "ex3";
  s.title = "three-layer medium, smoothed Ricker source";
  s.extent = 3.0;
  s.final_time = 0.8;
  s.a = 1.0;
  s.medium_kind = MediumKind::layered;
  s.rho = [](std::span<const double> x) { return layered_density(x[0]); };
  s.rho_min = 1.0 / 9.0;
  s.rho_max = 1.0;
  s.center = {1.5, 1.5, 1.5};
  s.gamma = 1.0e4;
  s.ladder = {{100, 140}, {200, 280}, {400, 560}};
  s.q = 2.0;
  const double gamma = s.gamma;
  const std::vector<double> center = s.center;
  const RickerNormalization norm = options.ricker;
  ProblemData& d = s.data;
  d.u0 = [](std::span<const double>) { return 0.0; };
  d.u1 = d.u0;
  d.f = [gamma, center, norm](std::span<const double> x, double t) {
    return ricker_source(x, t, gamma, center, norm);
  };
  d.separable_f = SeparableSource{
      [gamma, center, norm](std::span<const double> x) {
        return ricker_spatial(radius(x, center), gamma, norm);
      },
      ricker_time};
  d.g = [](std::span<const double>, double) { return 0.0; };
  d.g_aux = homogeneous_aux_boundary(d.f, s.origin, s.extent);
  return s;
}

}  // namespace

std::vector<Scenario> scenario_catalog(const CatalogOptions& options) {
  std::vector<Scenario> out;
  out.push_back(travelling_wave_scenario(false));
  out.push_back(travelling_wave_scenario(true));
  for (SphericalCase c : {SphericalCase::a, SphericalCase::b, SphericalCase::c, SphericalCase::d,
                          SphericalCase::e, SphericalCase::f}) {
    out.push_back(spherical_scenario(c, options));
  }
  out.push_back(layered_scenario(options));
  return out;
}

Scenario find_scenario(const std::string& name, const CatalogOptions& options) {
  for (Scenario& s : scenario_catalog(options)) {
    if (s.name == name) return std::move(s);
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

}  // namespace cwave::oracles
