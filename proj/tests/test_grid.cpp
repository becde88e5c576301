#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cwave/grid.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cwave;

namespace {

double brute_interior_sum(const GridField& v, const GridField& w) {
  const SpaceMesh& mesh = v.mesh();
  double s = 0.0;
  for (std::size_t p = 0; p < mesh.size(); ++p) {
    if (mesh.is_interior(p)) s += v[p] * w[p];
  }
  return s * mesh.cell_volume();
}

}  // namespace

TEST(AxisMesh, RejectsDegenerateInput) {
  EXPECT_THROW(AxisMesh(0.0, 4), std::invalid_argument);
  EXPECT_THROW(AxisMesh(-1.0, 4), std::invalid_argument);
  EXPECT_THROW(AxisMesh(1.0, 1), std::invalid_argument);
  EXPECT_THROW(TimeMesh(0.3, 1), std::invalid_argument);
  EXPECT_THROW(TimeMesh(std::nan(""), 4), std::invalid_argument);
}

TEST(AxisMesh, NodesIncludeOrigin) {
  const AxisMesh ax(2.0, 4, -0.5);
  EXPECT_DOUBLE_EQ(ax.step(), 0.5);
  EXPECT_DOUBLE_EQ(ax.node(0), -0.5);
  EXPECT_DOUBLE_EQ(ax.node(4), 1.5);
  EXPECT_EQ(ax.node_count(), 5u);
}

TEST(SpaceMesh, RavelUnravelRoundTrip) {
  const SpaceMesh mesh({AxisMesh(1.0, 3), AxisMesh(2.0, 4), AxisMesh(1.0, 5)});
  EXPECT_EQ(mesh.size(), 4u * 5u * 6u);
  EXPECT_EQ(mesh.stride(2), 1u);
  EXPECT_EQ(mesh.stride(1), 6u);
  EXPECT_EQ(mesh.stride(0), 30u);
  std::vector<std::size_t> idx(3);
  for (std::size_t p = 0; p < mesh.size(); ++p) {
    mesh.unravel(p, idx);
    EXPECT_EQ(mesh.ravel(idx), p);
  }
  const std::vector<std::size_t> bad{0, 5, 0};
  EXPECT_THROW((void)mesh.ravel(bad), std::out_of_range);
}

TEST(SpaceMesh, BoundaryAndInteriorPartition) {
  const SpaceMesh mesh({AxisMesh(1.0, 4), AxisMesh(1.0, 3), AxisMesh(1.0, 5)});
  const std::size_t interior = 3 * 2 * 4;
  EXPECT_EQ(mesh.boundary_nodes().size(), mesh.size() - interior);
  std::vector<double> x(3);
  for (std::size_t b = 0; b < mesh.boundary_nodes().size(); ++b) {
    const std::size_t p = mesh.boundary_nodes()[b];
    EXPECT_TRUE(mesh.is_boundary(p));
    mesh.coordinates(p, x);
    const auto bx = mesh.boundary_point(b);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(bx[k], x[k]);
  }
  EXPECT_EQ(mesh.interior_rows().size(), 3u * 2u);
  EXPECT_EQ(mesh.interior_row_length(), 4u);
  for (std::size_t start : mesh.interior_rows()) {
    for (std::size_t j = 0; j < mesh.interior_row_length(); ++j) {
      EXPECT_TRUE(mesh.is_interior(start + j));
    }
  }
}

TEST(GridField, SamplingAndMeshChecks) {
  auto mesh = SpaceMesh::cube(2, 1.0, 4);
  GridField f(mesh);
  sample_into(f, [](std::span<const double> x) { return x[0] + 10.0 * x[1]; });
  const std::vector<std::size_t> idx{1, 2};
  EXPECT_DOUBLE_EQ(f.at(idx), 0.25 + 5.0);

  GridField g(mesh, 7.0);
  sample_boundary_into(g, [](std::span<const double>) { return -1.0; });
  for (std::size_t p = 0; p < g.size(); ++p) {
    EXPECT_EQ(g[p], mesh->is_boundary(p) ? -1.0 : 7.0);
  }

  GridField other(SpaceMesh::cube(2, 1.0, 5));
  EXPECT_THROW(require_same_mesh(f, other, "test"), std::invalid_argument);
  GridField equal_mesh(SpaceMesh::cube(2, 1.0, 4));
  EXPECT_NO_THROW(require_same_mesh(f, equal_mesh, "test"));
}

TEST(DifferenceOperators, LambdaExactOnCubics) {
  // The three-point second difference is exact for polynomials of degree 3.
  auto mesh = std::make_shared<const SpaceMesh>(
      std::vector<AxisMesh>{AxisMesh(1.0, 6), AxisMesh(2.0, 8, -1.0), AxisMesh(1.0, 5)});
  GridField w(mesh);
  sample_into(w, [](std::span<const double> x) {
    return x[0] * x[0] * x[0] + 2.0 * x[1] * x[1] * x[1] - x[2] * x[2] + x[0] * x[1];
  });
  const std::vector<double> a{1.0, 0.5, 2.0};
  const GridField l0 = apply_lambda(w, 0);
  const GridField l1 = apply_lambda(w, 1);
  const GridField lh = apply_lh(w, a);
  std::vector<std::size_t> idx(3);
  std::vector<double> x(3);
  for (std::size_t p = 0; p < mesh->size(); ++p) {
    mesh->unravel(p, idx);
    mesh->coordinates(p, x);
    if (idx[0] > 0 && idx[0] < 6) {
      EXPECT_NEAR(l0[p], 6.0 * x[0], 1e-10);
    } else {
      EXPECT_EQ(l0[p], 0.0);
    }
    if (idx[1] > 0 && idx[1] < 8) {
      EXPECT_NEAR(l1[p], 12.0 * x[1], 1e-10);
    }
    if (mesh->is_interior(p)) {
      EXPECT_NEAR(lh[p], 6.0 * x[0] + 0.25 * 12.0 * x[1] + 4.0 * (-2.0), 1e-9);
    } else {
      EXPECT_EQ(lh[p], 0.0);
    }
  }
}

TEST(DifferenceOperators, NumerovAverageWeights) {
  auto mesh = SpaceMesh::cube(1, 1.0, 4);
  GridField w(mesh, 0.0);
  w[2] = 12.0;
  const GridField avg = apply_numerov_average(w, 0);
  EXPECT_DOUBLE_EQ(avg[1], 1.0);
  EXPECT_DOUBLE_EQ(avg[2], 10.0);
  EXPECT_DOUBLE_EQ(avg[3], 1.0);
  EXPECT_EQ(avg[0], 0.0);
  EXPECT_EQ(avg[4], 0.0);
}

TEST(Norms, InnerProductMatchesBruteForce) {
  auto mesh = std::make_shared<const SpaceMesh>(
      std::vector<AxisMesh>{AxisMesh(1.0, 7), AxisMesh(1.5, 5), AxisMesh(0.5, 9)});
  GridField v(mesh), w(mesh);
  sample_into(v, [](std::span<const double> x) { return std::sin(x[0] + 2 * x[1] - x[2]); });
  sample_into(w, [](std::span<const double> x) { return 1.0 + x[0] * x[2]; });
  EXPECT_NEAR(inner_product(v, w), brute_interior_sum(v, w), 1e-14);
  EXPECT_NEAR(norm_l2(v), std::sqrt(brute_interior_sum(v, v)), 1e-14);
}

TEST(Norms, DiscreteL2ApproximatesContinuous) {
  // ||sin(pi x) sin(pi y) sin(pi z)||_{L2(0,1)^3} = 1/(2 sqrt 2); the trapezoid-type
  // mesh sum is exact for this product of sines.
  auto mesh = SpaceMesh::cube(3, 1.0, 16);
  GridField w(mesh);
  const double pi = std::numbers::pi;
  sample_into(w, [pi](std::span<const double> x) {
    return std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]);
  });
  EXPECT_NEAR(norm_l2(w), 1.0 / (2.0 * std::sqrt(2.0)), 1e-14);
}

TEST(Norms, SeminormOfLinearFunction) {
  // For w = c . x vanishing nowhere specially, backward differences are c_k exactly;
  // the k-sum runs over N_k differences and the interior nodes of the other axes.
  auto mesh = std::make_shared<const SpaceMesh>(
      std::vector<AxisMesh>{AxisMesh(1.0, 4), AxisMesh(2.0, 5)});
  GridField w(mesh);
  sample_into(w, [](std::span<const double> x) { return 3.0 * x[0] - 2.0 * x[1]; });
  const std::vector<double> a{1.0, 0.5};
  const double h0 = 0.25, h1 = 0.4;
  const double axis0 = 9.0 * (4 * 4) * h0 * h1;          // 4 differences x 4 interior y
  const double axis1 = 0.25 * 4.0 * (3 * 5) * h0 * h1;   // 3 interior x x 5 differences
  EXPECT_NEAR(seminorm_h1(w, a), std::sqrt(axis0 + axis1), 1e-13);

  GridField prev(mesh);
  sample_into(prev, [](std::span<const double> x) { return 3.0 * x[0] - 2.0 * x[1] - 0.1; });
  const double dt_part = 1.0 * (3 * 4) * h0 * h1;  // (0.1 / 0.1)^2 over interior nodes
  EXPECT_NEAR(norm_energy(prev, w, 0.1, a), std::sqrt(dt_part + axis0 + axis1), 1e-13);
  EXPECT_THROW(norm_energy(prev, w, 0.0, a), std::invalid_argument);
}

TEST(Norms, ReductionsIndependentOfThreadCount) {
  auto mesh = SpaceMesh::cube(3, 1.0, 40);
  GridField w(mesh);
  sample_into(w, [](std::span<const double> x) {
    return std::exp(x[0]) * std::cos(3 * x[1]) + x[2] * 1e-3;
  });
  const std::vector<double> a{0.3, 1.0, 2.0};
  const double l2 = norm_l2(w), h1 = seminorm_h1(w, a);
#ifdef _OPENMP
  for (int threads : {1, 2, 3, 4}) {
    omp_set_num_threads(threads);
    EXPECT_EQ(norm_l2(w), l2);
    EXPECT_EQ(seminorm_h1(w, a), h1);
  }
  omp_set_num_threads(omp_get_num_procs());
#endif
}
