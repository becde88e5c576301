#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace cwave {

/// Uniform 1D mesh on [origin, origin + extent] with `intervals` cells.
struct AxisMesh {
  double extent = 1.0;
  std::size_t intervals = 2;
  double origin = 0.0;

  AxisMesh(double extent, std::size_t intervals, double origin = 0.0);

  double step() const { return extent / static_cast<double>(intervals); }
  double node(std::size_t i) const { return origin + static_cast<double>(i) * step(); }
  std::size_t node_count() const { return intervals + 1; }

  bool operator==(const AxisMesh&) const = default;
};

/// Tensor-product space mesh. Storage is axis-major: the last axis is contiguous.
class SpaceMesh {
 public:
  explicit SpaceMesh(std::vector<AxisMesh> axes);

  /// Cubic mesh with identical axes.
  static std::shared_ptr<const SpaceMesh> cube(std::size_t dim, double extent,
                                               std::size_t intervals, double origin = 0.0);

  std::size_t dim() const { return axes_.size(); }
  const AxisMesh& axis(std::size_t k) const { return axes_.at(k); }
  const std::vector<AxisMesh>& axes() const { return axes_; }
  std::size_t shape(std::size_t k) const { return axes_[k].node_count(); }
  std::size_t stride(std::size_t k) const { return strides_[k]; }
  std::size_t size() const { return size_; }
  double step(std::size_t k) const { return axes_[k].step(); }

  /// h_1 * ... * h_n
  double cell_volume() const;

  void unravel(std::size_t flat, std::span<std::size_t> index) const;
  std::size_t ravel(std::span<const std::size_t> index) const;
  void coordinates(std::size_t flat, std::span<double> x) const;

  bool is_interior(std::size_t flat) const;
  bool is_boundary(std::size_t flat) const { return !is_interior(flat); }

  /// Flat indices of all boundary nodes, ascending.
  std::span<const std::size_t> boundary_nodes() const { return boundary_; }

  /// Coordinates of boundary node b (in boundary_nodes() order), dim() values.
  std::span<const double> boundary_point(std::size_t b) const {
    return {boundary_coords_.data() + b * dim(), dim()};
  }

  /// Flat index of the first interior node (last-axis index 1) of every row along the
  /// last axis whose leading indices are all interior. Each row spans shape(dim-1)-2 nodes.
  std::span<const std::size_t> interior_rows() const { return interior_rows_; }
  std::size_t interior_row_length() const { return shape(dim() - 1) - 2; }

  bool operator==(const SpaceMesh& other) const { return axes_ == other.axes_; }

 private:
  std::vector<AxisMesh> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  std::vector<std::size_t> boundary_;
  std::vector<double> boundary_coords_;
  std::vector<std::size_t> interior_rows_;
};

using SpaceMeshPtr = std::shared_ptr<const SpaceMesh>;

/// Uniform time mesh t_m = m * T / M.
struct TimeMesh {
  double extent = 1.0;
  std::size_t steps = 2;

  TimeMesh(double extent, std::size_t steps);

  double step() const { return extent / static_cast<double>(steps); }
  double node(std::size_t m) const { return static_cast<double>(m) * step(); }
};

struct TensorMesh {
  SpaceMeshPtr space;
  TimeMesh time;
};

/// Scalar values on every node of a space mesh, boundary nodes included.
class GridField {
 public:
  GridField() = default;
  explicit GridField(SpaceMeshPtr mesh, double fill = 0.0);

  const SpaceMesh& mesh() const { return *mesh_; }
  const SpaceMeshPtr& mesh_ptr() const { return mesh_; }
  bool empty() const { return mesh_ == nullptr; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  double& operator[](std::size_t flat) { return values_[flat]; }
  double operator[](std::size_t flat) const { return values_[flat]; }

  double& at(std::span<const std::size_t> index) { return values_[mesh_->ravel(index)]; }
  double at(std::span<const std::size_t> index) const { return values_[mesh_->ravel(index)]; }

  bool same_mesh(const GridField& other) const;

 private:
  SpaceMeshPtr mesh_;
  std::vector<double> values_;
};

/// Throws std::invalid_argument unless both fields live on equal meshes.
void require_same_mesh(const GridField& a, const GridField& b, const char* where);

/// Fills every node with fn(x).
template <typename Fn>
void sample_into(GridField& out, Fn&& fn);

/// Overwrites boundary nodes only with fn(x).
template <typename Fn>
void sample_boundary_into(GridField& out, Fn&& fn);

// ---- difference operators --------------------------------------------------

/// (w_{i+1} - 2 w_i + w_{i-1}) / h_k^2 at nodes with 0 < i_k < N_k; 0 on k-faces.
GridField apply_lambda(const GridField& w, std::size_t k);

/// Numerov average (w_{i-1} + 10 w_i + w_{i+1}) / 12 along axis k; 0 on k-faces.
GridField apply_numerov_average(const GridField& w, std::size_t k);

/// L_h w = sum_k a_k^2 Lambda_k w at nodes interior in every direction; 0 elsewhere.
GridField apply_lh(const GridField& w, std::span<const double> a);

/// In-place variant writing only interior nodes of `out`.
void apply_lh_interior(const GridField& w, std::span<const double> a, GridField& out);

// ---- mesh norms ------------------------------------------------------------
//
// Reductions accumulate per row of the last axis and then combine the row sums in
// ascending row order, so results do not depend on the number of threads.

/// (v, w)_h = h_1...h_n * sum over interior nodes of v w.
double inner_product(const GridField& v, const GridField& w);

/// ||w||_h
double norm_l2(const GridField& w);

/// ||w||_{H_h^1} = (sum_k a_k^2 ||backward difference_k w||^2_{h,k*})^{1/2}
double seminorm_h1(const GridField& w, std::span<const double> a);

/// (||(cur - prev)/h_t||_h^2 + ||cur||_{H_h^1}^2)^{1/2}
double norm_energy(const GridField& prev, const GridField& cur, double time_step,
                   std::span<const double> a);

// ---- implementation of templates ------------------------------------------

template <typename Fn>
void sample_into(GridField& out, Fn&& fn) {
  const SpaceMesh& mesh = out.mesh();
  const std::size_t n = mesh.dim();
  const std::size_t last = mesh.shape(n - 1);
  const std::size_t rows = mesh.size() / last;
  double* values = out.data();
#pragma omp parallel
  {
    std::vector<double> x(n);
    std::vector<std::size_t> index(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * last;
      mesh.unravel(base, index);
      for (std::size_t k = 0; k + 1 < n; ++k) x[k] = mesh.axis(k).node(index[k]);
      for (std::size_t j = 0; j < last; ++j) {
        x[n - 1] = mesh.axis(n - 1).node(j);
        values[base + j] = fn(std::span<const double>(x));
      }
    }
  }
}

template <typename Fn>
void sample_boundary_into(GridField& out, Fn&& fn) {
  const SpaceMesh& mesh = out.mesh();
  const auto nodes = mesh.boundary_nodes();
  double* values = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nodes.size()); ++b) {
    const auto idx = static_cast<std::size_t>(b);
    values[nodes[idx]] = fn(mesh.boundary_point(idx));
  }
}

}  // namespace cwave
