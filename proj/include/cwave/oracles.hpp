#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cwave/grid.hpp"
#include "cwave/problem.hpp"

namespace cwave::oracles {

// ---- radial profiles with finite support -------------------------------------

enum class ProfileKind { w0, w1, w2 };

/// w0 = 1 on r < r0; w1 = (r0 - r)/r0; w2 = (r/r0)^2 ((r0 - r)/r0)^2; all zero beyond r0.
struct RadialProfile {
  ProfileKind kind = ProfileKind::w0;
  double r0 = 0.2;

  double operator()(double r) const;
  /// d/dr on [0, r0) (one-sided at the kink), 0 beyond.
  double derivative(double r) const;
  /// P(s) = int_0^s q w(|q|) dq; even in s.
  double first_moment(double s) const;
  /// Q(s) = int_0^s P(q) dq; odd in s.
  double second_moment(double s) const;
  /// Nikolskii smoothness order k + 1/2 of w_k.
  double smoothness() const;
};

// ---- spherically symmetric exact solutions --------------------------------------

/// (a) u0 = w1, (b) u0 = w2, (c) u1 = w0, (d) u1 = w1, (e) f = w0, (f) f = w1;
/// unmentioned data are zero.
enum class SphericalCase { a, b, c, d, e, f };

SphericalCase parse_spherical_case(char tag);
char spherical_case_tag(SphericalCase c);

/// Data profile driving a case.
RadialProfile spherical_case_profile(SphericalCase c, double r0);

/// Smoothness order lambda of the solution used for the theoretical rates.
double spherical_case_smoothness(SphericalCase c);

/// Closed-form d'Alembert-type solution u(r, t) of the 3D wave equation with speed a.
/// For r below 1e-6 r0 the r -> 0 limit is returned.
double spherical_exact(double r, double t, SphericalCase c, double r0, double a);

// ---- travelling wave --------------------------------------------------------------

/// u = cos(t - x_1 - ... - x_n).
double travelling_wave(std::span<const double> x, double t);

/// rho = 1 + prod_k sin^2(2 pi x_k).
double travelling_wave_density(std::span<const double> x);

/// Data for u = cos(t - x - y - z) with a_k = 1/sqrt(3). For variable density the forcing
/// is f = (1 - rho) cos(t - x - y - z), which makes the wave an exact solution.
ProblemData travelling_wave_data(bool variable_density);

// ---- Ricker-type source ----------------------------------------------------------

/// as_printed: (pi/gamma)^{3/2} e^{-gamma r^2}; unit_mass: (gamma/pi)^{3/2} e^{-gamma r^2}.
enum class RickerNormalization { as_printed, unit_mass };

double ricker_spatial(double r, double gamma, RickerNormalization norm);
/// psi(t) = sin(50 t) e^{-200 t^2}
double ricker_time(double t);
double ricker_source(std::span<const double> x, double t, double gamma,
                     std::span<const double> center,
                     RickerNormalization norm = RickerNormalization::as_printed);

/// Three-layer density on [0, 3] km: 4/9, 1, 1/9 on [0,1), [1,2), [2,3].
/// Throws std::out_of_range outside [0, 3].
double layered_density(double x);

// ---- scenarios --------------------------------------------------------------------

enum class MediumKind { constant, expression, layered };

struct Scenario {
  std::string name;
  std::string title;
  std::size_t dim = 3;
  double extent = 1.0;
  double origin = 0.0;
  double final_time = 0.3;
  double a = 1.0;
  MediumKind medium_kind = MediumKind::constant;
  SpaceFn rho;
  double rho_min = 1.0;
  double rho_max = 1.0;
  ProblemData data;
  SpaceTimeFn exact;  // empty when no closed form exists
  std::vector<std::pair<std::size_t, std::size_t>> ladder;
  double q = 5.0 / 3.0;
  std::optional<double> smoothness;  // lambda for theoretical rates
  std::vector<double> center;        // symmetry centre / source location
  std::optional<SphericalCase> spherical_case;
  double r0 = 0.0;
  double gamma = 0.0;

  bool has_exact() const { return static_cast<bool>(exact); }
  SpaceMeshPtr space_mesh(std::size_t intervals) const;
  TensorMesh mesh(std::size_t intervals, std::size_t steps) const;
  MediumSpec medium(const SpaceMeshPtr& mesh) const;
};

struct CatalogOptions {
  RickerNormalization ricker = RickerNormalization::as_printed;
  /// For the f = w0 case, sample the source as zero at t = 0 (a source switched on at
  /// t = 0+). The exact solution is the same either way; only the discrete f^0 changes.
  bool w0_source_zero_at_t0 = true;
};

/// ex1a, ex1b, ex2a..ex2f, ex3.
std::vector<Scenario> scenario_catalog(const CatalogOptions& options = {});

/// Throws std::invalid_argument for unknown names.
Scenario find_scenario(const std::string& name, const CatalogOptions& options = {});

/// Auxiliary boundary data for homogeneous g: -f on the k-faces, 0 on other faces.
DirectionalSpaceTimeFn homogeneous_aux_boundary(SpaceTimeFn f, double origin, double extent);

}  // namespace cwave::oracles
