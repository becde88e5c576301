#include "cwave/grid.hpp"

#include <cmath>
#include <string>

#include "slab.hpp"

namespace cwave {

AxisMesh::AxisMesh(double extent_, std::size_t intervals_, double origin_)
    : extent(extent_), intervals(intervals_), origin(origin_) {
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("AxisMesh: extent must be positive and finite");
  }
  if (intervals < 2) throw std::invalid_argument("AxisMesh: need at least 2 intervals");
}

TimeMesh::TimeMesh(double extent_, std::size_t steps_) : extent(extent_), steps(steps_) {
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("TimeMesh: T must be positive and finite");
  }
  if (steps < 2) throw std::invalid_argument("TimeMesh: need M >= 2");
}

SpaceMesh::SpaceMesh(std::vector<AxisMesh> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("SpaceMesh: need at least one axis");
  const std::size_t n = axes_.size();
  strides_.assign(n, 1);
  for (std::size_t k = n - 1; k-- > 0;) strides_[k] = strides_[k + 1] * axes_[k + 1].node_count();
  size_ = strides_[0] * axes_[0].node_count();

  std::vector<std::size_t> idx(n);
  for (std::size_t p = 0; p < size_; ++p) {
    unravel(p, idx);
    bool interior = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (idx[k] == 0 || idx[k] == axes_[k].intervals) interior = false;
    }
    if (!interior) boundary_.push_back(p);
  }
  boundary_coords_.resize(boundary_.size() * n);
  for (std::size_t b = 0; b < boundary_.size(); ++b) {
    coordinates(boundary_[b], std::span<double>(boundary_coords_.data() + b * n, n));
  }

  const std::size_t last = shape(n - 1);
  const std::size_t rows = size_ / last;
  for (std::size_t r = 0; r < rows; ++r) {
    unravel(r * last, idx);
    bool interior = true;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (idx[k] == 0 || idx[k] == axes_[k].intervals) interior = false;
    }
    if (interior) interior_rows_.push_back(r * last + 1);
  }
}

std::shared_ptr<const SpaceMesh> SpaceMesh::cube(std::size_t dim, double extent,
                                                 std::size_t intervals, double origin) {
  return std::make_shared<const SpaceMesh>(
      std::vector<AxisMesh>(dim, AxisMesh(extent, intervals, origin)));
}

double SpaceMesh::cell_volume() const {
  double v = 1.0;
  for (const auto& ax : axes_) v *= ax.step();
  return v;
}

void SpaceMesh::unravel(std::size_t flat, std::span<std::size_t> index) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    index[k] = flat / strides_[k];
    flat %= strides_[k];
  }
}

std::size_t SpaceMesh::ravel(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) throw std::out_of_range("SpaceMesh::ravel: rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (index[k] >= shape(k)) throw std::out_of_range("SpaceMesh::ravel: index out of range");
    flat += index[k] * strides_[k];
  }
  return flat;
}

void SpaceMesh::coordinates(std::size_t flat, std::span<double> x) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    x[k] = axes_[k].node(flat / strides_[k]);
    flat %= strides_[k];
  }
}

bool SpaceMesh::is_interior(std::size_t flat) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const std::size_t i = flat / strides_[k];
    if (i == 0 || i == axes_[k].intervals) return false;
    flat %= strides_[k];
  }
  return true;
}

GridField::GridField(SpaceMeshPtr mesh, double fill) : mesh_(std::move(mesh)) {
  if (!mesh_) throw std::invalid_argument("GridField: null mesh");
  values_.assign(mesh_->size(), fill);
}

bool GridField::same_mesh(const GridField& other) const {
  if (!mesh_ || !other.mesh_) return false;
  return mesh_ == other.mesh_ || *mesh_ == *other.mesh_;
}

void require_same_mesh(const GridField& a, const GridField& b, const char* where) {
  if (!a.same_mesh(b)) throw std::invalid_argument(std::string(where) + ": mesh mismatch");
}

namespace {

void check_axis(const GridField& w, std::size_t k, const char* where) {
  if (w.empty()) throw std::invalid_argument(std::string(where) + ": empty field");
  if (k >= w.mesh().dim()) throw std::out_of_range(std::string(where) + ": axis out of range");
}

void check_coefficients(const GridField& w, std::span<const double> a, const char* where) {
  if (w.empty()) throw std::invalid_argument(std::string(where) + ": empty field");
  if (a.size() != w.mesh().dim()) {
    throw std::invalid_argument(std::string(where) + ": coefficient count mismatch");
  }
}

template <typename Stencil>
GridField apply_three_point(const GridField& w, std::size_t k, Stencil stencil) {
  GridField out(w.mesh_ptr(), 0.0);
  const detail::Slab s = detail::make_slab(w.mesh(), k);
  const double* in = w.data();
  double* res = out.data();
  detail::for_each_task(s, [&](std::size_t o, std::size_t j0, std::size_t j1) {
    for (std::size_t i = 1; i + 1 < s.len; ++i) {
      const std::size_t base = s.offset(o, i, 0);
      for (std::size_t j = j0; j < j1; ++j) {
        const std::size_t p = base + j;
        res[p] = stencil(in[p - s.inner], in[p], in[p + s.inner]);
      }
    }
  });
  return out;
}

}  // namespace

GridField apply_lambda(const GridField& w, std::size_t k) {
  check_axis(w, k, "apply_lambda");
  const double inv_h2 = 1.0 / (w.mesh().step(k) * w.mesh().step(k));
  return apply_three_point(w, k, [inv_h2](double l, double c, double r) {
    return (r - 2.0 * c + l) * inv_h2;
  });
}

GridField apply_numerov_average(const GridField& w, std::size_t k) {
  check_axis(w, k, "apply_numerov_average");
  return apply_three_point(w, k, [](double l, double c, double r) {
    return (l + 10.0 * c + r) / 12.0;
  });
}

void apply_lh_interior(const GridField& w, std::span<const double> a, GridField& out) {
  check_coefficients(w, a, "apply_lh");
  require_same_mesh(w, out, "apply_lh");
  const SpaceMesh& mesh = w.mesh();
  const std::size_t n = mesh.dim();
  std::vector<double> coef(n);
  std::vector<std::ptrdiff_t> stride(n);
  for (std::size_t k = 0; k < n; ++k) {
    coef[k] = a[k] * a[k] / (mesh.step(k) * mesh.step(k));
    stride[k] = static_cast<std::ptrdiff_t>(mesh.stride(k));
  }
  const auto rows = mesh.interior_rows();
  const std::size_t len = mesh.interior_row_length();
  const double* in = w.data();
  double* res = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows.size()); ++r) {
    const double* src = in + rows[static_cast<std::size_t>(r)];
    double* dst = res + rows[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < len; ++j) dst[j] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double c = coef[k];
      const std::ptrdiff_t s = stride[k];
      for (std::size_t j = 0; j < len; ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        dst[j] += c * (src[jj + s] - 2.0 * src[jj] + src[jj - s]);
      }
    }
  }
}

GridField apply_lh(const GridField& w, std::span<const double> a) {
  check_coefficients(w, a, "apply_lh");
  GridField out(w.mesh_ptr(), 0.0);
  apply_lh_interior(w, a, out);
  return out;
}

double inner_product(const GridField& v, const GridField& w) {
  require_same_mesh(v, w, "inner_product");
  const SpaceMesh& mesh = v.mesh();
  const auto rows = mesh.interior_rows();
  const std::size_t len = mesh.interior_row_length();
  std::vector<double> partial(rows.size(), 0.0);
  const double* a = v.data();
  const double* b = w.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows.size()); ++r) {
    const std::size_t base = rows[static_cast<std::size_t>(r)];
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) sum += a[base + j] * b[base + j];
    partial[static_cast<std::size_t>(r)] = sum;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return mesh.cell_volume() * total;
}

double norm_l2(const GridField& w) { return std::sqrt(inner_product(w, w)); }

double seminorm_h1(const GridField& w, std::span<const double> a) {
  check_coefficients(w, a, "seminorm_h1");
  const SpaceMesh& mesh = w.mesh();
  const double* in = w.data();
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.dim(); ++k) {
    const detail::Slab s = detail::make_slab(mesh, k);
    std::vector<double> partial(s.tasks(), 0.0);
    const std::size_t chunks = s.chunks();
    detail::for_each_task(s, [&](std::size_t o, std::size_t j0, std::size_t j1) {
      double sum = 0.0;
      if (s.outer_interior[o]) {
        for (std::size_t i = 1; i < s.len; ++i) {
          const std::size_t base = s.offset(o, i, 0);
          for (std::size_t j = j0; j < j1; ++j) {
            if (!s.inner_interior[j]) continue;
            const double d = in[base + j] - in[base + j - s.inner];
            sum += d * d;
          }
        }
      }
      partial[o * chunks + j0 / detail::kChunk] = sum;
    });
    double axis_sum = 0.0;
    for (double p : partial) axis_sum += p;
    const double h = mesh.step(k);
    total += a[k] * a[k] * axis_sum / (h * h);
  }
  return std::sqrt(mesh.cell_volume() * total);
}

double norm_energy(const GridField& prev, const GridField& cur, double time_step,
                   std::span<const double> a) {
  require_same_mesh(prev, cur, "norm_energy");
  if (!(time_step > 0.0)) throw std::invalid_argument("norm_energy: time step must be positive");
  GridField diff(cur.mesh_ptr());
  const double inv = 1.0 / time_step;
  for (std::size_t p = 0; p < cur.size(); ++p) diff[p] = (cur[p] - prev[p]) * inv;
  const double dt = norm_l2(diff);
  const double h1 = seminorm_h1(cur, a);
  return std::sqrt(dt * dt + h1 * h1);
}

}  // namespace cwave
