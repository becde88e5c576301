#pragma once

// Dense matrices of the 1D/2D difference operators on interior nodes, assembled from
// Kronecker products of 1D stencils, independently of the library's line solvers.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace cwave::test_support {

struct Box {
  std::vector<double> extent;
  std::vector<std::size_t> intervals;
  std::vector<double> a;

  double step(std::size_t k) const { return extent[k] / static_cast<double>(intervals[k]); }
};

inline Eigen::MatrixXd second_difference_1d(std::size_t intervals, double h) {
  const auto n = static_cast<Eigen::Index>(intervals - 1);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = -2.0 / (h * h);
    if (i > 0) d(i, i - 1) = 1.0 / (h * h);
    if (i + 1 < n) d(i, i + 1) = 1.0 / (h * h);
  }
  return d;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return K;
}

/// Lambda_k with homogeneous end values, interior nodes in row-major order.
inline Eigen::MatrixXd lambda_k(const Box& box, std::size_t k) {
  Eigen::MatrixXd op = Eigen::MatrixXd::Identity(1, 1);
  for (std::size_t l = 0; l < box.extent.size(); ++l) {
    const auto n = static_cast<Eigen::Index>(box.intervals[l] - 1);
    op = kron(op, l == k ? second_difference_1d(box.intervals[l], box.step(l))
                         : Eigen::MatrixXd::Identity(n, n));
  }
  return op;
}

/// s_kN = I + (h_k^2 / 12) Lambda_k
inline Eigen::MatrixXd numerov_s(const Box& box, std::size_t k) {
  const double h = box.step(k);
  const Eigen::MatrixXd L = lambda_k(box, k);
  return Eigen::MatrixXd::Identity(L.rows(), L.cols()) + (h * h / 12.0) * L;
}

/// -L_h = -sum a_k^2 Lambda_k
inline Eigen::MatrixXd minus_lh(const Box& box) {
  Eigen::MatrixXd out;
  for (std::size_t k = 0; k < box.extent.size(); ++k) {
    const Eigen::MatrixXd term = -box.a[k] * box.a[k] * lambda_k(box, k);
    out = k == 0 ? term : Eigen::MatrixXd(out + term);
  }
  return out;
}

/// E_h = -sum a_k^2 s_kN^{-1} Lambda_k
inline Eigen::MatrixXd compact_operator(const Box& box) {
  Eigen::MatrixXd out;
  for (std::size_t k = 0; k < box.extent.size(); ++k) {
    const Eigen::MatrixXd term =
        -box.a[k] * box.a[k] * numerov_s(box, k).partialPivLu().solve(lambda_k(box, k));
    out = k == 0 ? term : Eigen::MatrixXd(out + term);
  }
  return out;
}

/// Boxes with N <= 32 in one and two dimensions.
inline std::vector<Box> property_boxes() {
  return {
      Box{{1.0}, {8}, {1.0}},
      Box{{2.0}, {32}, {0.6}},
      Box{{1.0, 1.5}, {6, 9}, {1.0, 0.5}},
      Box{{1.0, 1.0}, {12, 12}, {0.577, 0.577}},
      Box{{0.7, 2.0}, {5, 11}, {2.0, 0.3}},
  };
}

}  // namespace cwave::test_support
