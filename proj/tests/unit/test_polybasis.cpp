#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "sfvem/element.hpp"
#include "sfvem/error.hpp"
#include "sfvem/experiment.hpp"
#include "sfvem/monomials.hpp"
#include "sfvem/quadrature.hpp"

using namespace sfvem;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Closed form on the reference triangle (0,0),(1,0),(0,1).
double ref_triangle_monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

// int over the reference triangle of ((x-cx)/h)^e1 ((y-cy)/h)^e2, by binomial expansion.
double ref_triangle_shifted(int e1, int e2, const Vec2& c, double h) {
  double s = 0.0;
  for (int i = 0; i <= e1; ++i)
    for (int j = 0; j <= e2; ++j)
      s += binom(e1, i) * binom(e2, j) * std::pow(-c.x(), e1 - i) * std::pow(-c.y(), e2 - j) *
           ref_triangle_monomial(i, j);
  return s / std::pow(h, e1 + e2);
}

const Polygon kRefTriangle{{0, 0}, {1, 0}, {0, 1}};
const Polygon kUnitSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

}  // namespace

TEST(Quadrature, GaussLegendreExactness) {
  for (int n = 1; n <= 8; ++n) {
    const LineRule r = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * std::pow(r.points[q], d);
      EXPECT_NEAR(s, 1.0 / (d + 1), 1e-14) << "n=" << n << " d=" << d;
    }
  }
}

TEST(Quadrature, GaussLobattoNodes) {
  const auto n3 = gauss_lobatto_nodes(3);
  ASSERT_EQ(n3.size(), 3u);
  EXPECT_NEAR(n3[1], 0.5, 1e-15);
  const auto n4 = gauss_lobatto_nodes(4);
  EXPECT_NEAR(n4[0], 0.0, 1e-15);
  EXPECT_NEAR(n4[1], 0.5 - std::sqrt(5.0) / 10.0, 1e-14);
  EXPECT_NEAR(n4[2], 0.5 + std::sqrt(5.0) / 10.0, 1e-14);
  EXPECT_NEAR(n4[3], 1.0, 1e-15);
}

TEST(Quadrature, TriangleRuleMatchesClosedForm) {
  for (int deg = 0; deg <= 14; ++deg) {
    const QuadRule r = triangle_rule({0, 0}, {1, 0}, {0, 1}, deg);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q)
          s += r.weights[q] * std::pow(r.points[q].x(), a) * std::pow(r.points[q].y(), b);
        const double exact = ref_triangle_monomial(a, b);
        EXPECT_NEAR(s, exact, 1e-13 * exact) << "deg=" << deg << " a=" << a << " b=" << b;
      }
  }
}

TEST(Element, FanAreasAndStarCentre) {
  const PolyMesh m = generate_concave_pentagons(2);
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const ElementGeometry g = ElementGeometry::for_order(m.cell_polygon(c), 3, 1);
    double fan = 0.0;
    for (const auto& t : g.triangles()) fan += signed_area(std::span<const Vec2>(t.data(), 3));
    const double w = std::accumulate(g.volume_rule().weights.begin(), g.volume_rule().weights.end(), 0.0);
    EXPECT_NEAR(fan, g.area(), 1e-12 * g.area());
    EXPECT_NEAR(w, g.area(), 1e-12 * g.area());
    const Polygon ker = kernel_polygon(g.vertices());
    EXPECT_TRUE(contains(ker, g.center(), 1e-12));
    EXPECT_EQ(g.volume_degree(), 2 * (3 + 1) + 2);
    for (const auto& e : g.edges()) {
      const double len = std::accumulate(e.weights.begin(), e.weights.end(), 0.0);
      EXPECT_NEAR(len, e.length, 1e-14);
      EXPECT_NEAR(e.normal.norm(), 1.0, 1e-14);
      EXPECT_NEAR(e.normal.dot(e.end - e.start), 0.0, 1e-14);
    }
  }
}

TEST(Element, RejectsClockwise) {
  EXPECT_THROW(ElementGeometry(Polygon{{0, 0}, {0, 1}, {1, 0}}, 4, 3), GeometryError);
}

TEST(Monomials, OrderingAndDimension) {
  const MonomialBasis b(3, Vec2(0.3, 0.2), 0.5);
  ASSERT_EQ(b.size(), 10u);
  ASSERT_EQ(MonomialBasis::dim(3), 10u);
  const std::vector<Exponent> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
  EXPECT_EQ(b.exponents(), expected);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(MonomialBasis::index(b.exponents()[i][0], b.exponents()[i][1]), i);
    EXPECT_DOUBLE_EQ(b.value(i, b.center()), i == 0 ? 1.0 : 0.0);
  }
}

TEST(Monomials, ScalingAndDirectPowers) {
  const Vec2 c(0.3, -0.2);
  const double h = 0.7;
  const MonomialBasis b(4, c, h);
  EXPECT_DOUBLE_EQ(b.value(MonomialBasis::index(1, 0), c + Vec2(h, 0)), 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const Vec2 p(u(rng), u(rng));
    const Eigen::VectorXd v = b.values(p);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto [a1, a2] = b.exponents()[i];
      const double direct = std::pow((p.x() - c.x()) / h, a1) * std::pow((p.y() - c.y()) / h, a2);
      EXPECT_NEAR(v(static_cast<Eigen::Index>(i)), direct, 1e-14 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(Monomials, DerivativeMaps) {
  const double h = 0.25;
  const MonomialBasis b(4, Vec2(0.1, 0.2), h);
  const Eigen::MatrixXd lap = b.laplace_map();
  // Laplacian of m_(2,0) is 2/h^2.
  EXPECT_NEAR(lap(0, static_cast<Eigen::Index>(MonomialBasis::index(2, 0))), 2.0 / (h * h), 1e-12);
  const auto grad = b.grad_map();
  EXPECT_TRUE(grad[0].col(0).isZero(0.0));
  EXPECT_TRUE(grad[1].col(0).isZero(0.0));

  // div(grad) equals the Laplacian.
  const MonomialBasis lower(3, b.center(), h);
  Eigen::MatrixXd stacked(grad[0].rows() * 2, grad[0].cols());
  stacked << grad[0], grad[1];
  const Eigen::MatrixXd div_grad = div_map(lower) * stacked;
  EXPECT_LE((div_grad - lap).cwiseAbs().maxCoeff(), 1e-14 * lap.cwiseAbs().maxCoeff());
}

TEST(Monomials, GradientNilpotent) {
  for (int n = 0; n <= 5; ++n) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(MonomialBasis::dim(n)),
                                                    static_cast<Eigen::Index>(MonomialBasis::dim(n)));
    for (int m = n; m >= 0; --m) acc = MonomialBasis(m, Vec2::Zero(), 1.0).grad_map()[0] * acc;
    EXPECT_TRUE(acc.isZero(0.0)) << "n=" << n;
  }
}

TEST(Monomials, GradMapAgainstFiniteDifferences) {
  const MonomialBasis b(3, Vec2(0.4, 0.6), 0.3);
  const auto grad = b.grad_map();
  const MonomialBasis lower(2, b.center(), b.scale());
  const Vec2 p(0.55, 0.5);
  const double step = 1e-6;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double fx = (b.value(i, p + Vec2(step, 0)) - b.value(i, p - Vec2(step, 0))) / (2 * step);
    const double fy = (b.value(i, p + Vec2(0, step)) - b.value(i, p - Vec2(0, step))) / (2 * step);
    EXPECT_NEAR(lower.values(p).dot(grad[0].col(static_cast<Eigen::Index>(i))), fx, 1e-7);
    EXPECT_NEAR(lower.values(p).dot(grad[1].col(static_cast<Eigen::Index>(i))), fy, 1e-7);
  }
}

TEST(MassMatrix, UnitSquareConstant) {
  const ElementGeometry g(kUnitSquare, 2, 2);
  const Eigen::MatrixXd h0 = mass_matrix(MonomialBasis(0, g), g);
  ASSERT_EQ(h0.rows(), 1);
  EXPECT_NEAR(h0(0, 0), 1.0, 1e-15);
}

TEST(MassMatrix, ReferenceTriangleClosedForm) {
  const ElementGeometry g(kRefTriangle, 12, 7);
  const MonomialBasis b(6, g);
  const Eigen::MatrixXd H = mass_matrix(b, g);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto ei = b.exponents()[i], ej = b.exponents()[j];
      const double exact = ref_triangle_shifted(ei[0] + ej[0], ei[1] + ej[1], b.center(), b.scale());
      EXPECT_NEAR(H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), exact, 1e-13 * std::max(1.0, std::abs(exact)));
    }
}

TEST(MassMatrix, SpdOnFamilyCells) {
  std::vector<Polygon> cells;
  for (const PolyMesh& m : {generate_cartesian(4, 4), generate_concave_pentagons(4), generate_voronoi(25, 50, 42)})
    for (std::size_t c = 0; c < m.num_cells(); ++c) cells.push_back(m.cell_polygon(c));
  for (const auto& poly : cells) {
    const ElementGeometry g(poly, 12, 7);
    const Eigen::MatrixXd H = mass_matrix(MonomialBasis(6, g), g);
    EXPECT_LE((H - H.transpose()).cwiseAbs().maxCoeff(), 1e-15 * H.cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(MassMatrix, VectorAndStiffness) {
  const ElementGeometry g(kUnitSquare, 8, 5);
  const MonomialBasis b(3, g);
  const Eigen::MatrixXd H = mass_matrix(b, g);
  const Eigen::MatrixXd Hv = vector_mass_matrix(b, g);
  const Eigen::Index n = H.rows();
  EXPECT_TRUE(Hv.topLeftCorner(n, n).isApprox(H));
  EXPECT_TRUE(Hv.bottomRightCorner(n, n).isApprox(H));
  EXPECT_TRUE(Hv.topRightCorner(n, n).isZero(0.0));
  // Stiffness from the gradient maps and the lower mass matrix.
  const auto grad = b.grad_map();
  const Eigen::MatrixXd Hl = mass_matrix(MonomialBasis(2, g), g);
  const Eigen::MatrixXd S = grad[0].transpose() * Hl * grad[0] + grad[1].transpose() * Hl * grad[1];
  EXPECT_LE((stiffness_matrix(b, g) - S).cwiseAbs().maxCoeff(), 1e-12 * S.cwiseAbs().maxCoeff());
}

TEST(MassMatrix, RejectsInsufficientQuadrature) {
  const ElementGeometry g(kUnitSquare, 3, 2);
  EXPECT_THROW(mass_matrix(MonomialBasis(2, g), g), Error);
}
