#include <cmath>

#include <gtest/gtest.h>

#include "common.hpp"

using namespace strata;
using testing_util::fd_along;
using testing_util::poly;

TEST(Hcalc, ApplyFieldExamples) {
  auto h = make_heisenberg(1);
  EXPECT_DOUBLE_EQ(apply_field(h, 0, poly("x3"), Point{1, 2, 3}), -1.0);
  EXPECT_DOUBLE_EQ(apply_field(make_euclidean(2), 0, poly("x1^2*x2"), Point{3, 5}), 30.0);
  EXPECT_DOUBLE_EQ(apply_field(h, 0, poly("x1^2 + x2^2"), Point{0.7, -0.4, 2}), 1.4);
}

TEST(Hcalc, SecondFieldExamples) {
  auto h = make_heisenberg(1);
  EXPECT_DOUBLE_EQ(second_field(make_euclidean(1), 0, poly("x1^3"), Point{2}), 12.0);
  EXPECT_DOUBLE_EQ(second_field(h, 0, poly("x1^2 + x2^2"), Point{0.3, 0.1, 1}), 2.0);
  // X^2 t^2 = 2 (X t)^2 = y^2/2
  EXPECT_NEAR(second_field(h, 0, poly("x3^2"), Point{0.3, 1.2, -0.5}), 0.72, 1e-14);
}

TEST(Hcalc, SecondFieldRejectsC1Fields) {
  auto g = make_euclidean(2);
  auto d = field_derivative(g, 0, poly("x1^3"));
  EXPECT_THROW(second_field(g, 0, d, Point{1, 1}), Error);
  EXPECT_DOUBLE_EQ(apply_field(g, 0, d, Point{2, 0}), 12.0);
}

TEST(Hcalc, GradientAndDivergence) {
  auto h = make_heisenberg(1);
  auto gr = horizontal_gradient(h, poly("x3"), Point{1, 2, 3});
  EXPECT_EQ(gr, (std::vector<double>{-1.0, 0.5}));
  auto g3 = make_euclidean(3);
  HorizontalVectorField id{poly("x1"), poly("x2"), poly("x3")};
  EXPECT_DOUBLE_EQ(horizontal_divergence(g3, id, Point{0.2, 0.4, 9}), 3.0);
  EXPECT_DOUBLE_EQ(horizontal_divergence(g3, vector_fields::constant({1, 2, 3}), Point{0.2, 0.4, 9}), 0.0);
  EXPECT_THROW(horizontal_divergence(h, id, Point{0, 0, 0}), Error);
  // div grad f = L f
  auto f = fields::product(random_positive_field(3, 5), random_oscillating_field(3, 6));
  HorizontalVectorField grad{field_derivative(h, 0, f), field_derivative(h, 1, f)};
  Point x{0.3, -0.2, 0.6};
  EXPECT_NEAR(horizontal_divergence(h, grad, x), sub_laplacian(h, f, x), 1e-12);
}

TEST(Hcalc, SubLaplacianExamples) {
  EXPECT_DOUBLE_EQ(sub_laplacian(make_euclidean(4), poly("x1^2+x2^2+x3^2+x4^2"), Point{1, 2, 3, 4}), 8.0);
  EXPECT_DOUBLE_EQ(sub_laplacian(make_heisenberg(1), poly("x1^2+x2^2"), Point{0.5, 0.1, 3}), 4.0);
  auto g = make_euclidean(3);
  auto newton = ScalarField::make({"newton"}, [](auto x) {
    return 1.0 / sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  });
  EXPECT_NEAR(sub_laplacian(g, newton, Point{0.4, -0.3, 1.1}), 0.0, 1e-12);
}

TEST(Hcalc, AnisotropicPLaplacian) {
  auto g3 = make_euclidean(3);
  std::vector<double> p2{2, 2, 2};
  EXPECT_DOUBLE_EQ(anisotropic_p_sublaplacian(g3, p2, poly("x1^2+x2^2+x3^2"), Point{0.3, 1, 2}), 6.0);
  // X_1(|2x|^2 2x) = 24 x^2 at x = 1
  std::vector<double> p{4, 2};
  EXPECT_NEAR(anisotropic_p_sublaplacian(make_euclidean(2), p, poly("x1^2"), Point{1, 1}), 24.0, 1e-12);
  EXPECT_EQ(anisotropic_p_sublaplacian(g3, std::vector<double>{3, 3, 3}, fields::constant(2.0), Point{1, 2, 3}),
            0.0);
  EXPECT_THROW(anisotropic_p_sublaplacian(g3, std::vector<double>{1.5, 2, 2}, fields::constant(2.0), Point{1, 2, 3}),
               Error);
  EXPECT_THROW(anisotropic_p_sublaplacian(g3, std::vector<double>{2, 2}, fields::constant(2.0), Point{1, 2, 3}),
               Error);
}

TEST(Hcalc, JetsAgreeWithFiniteDifferences) {
  for (const auto& g : {make_euclidean(3), make_heisenberg(1), make_heisenberg(2)}) {
    auto f = fields::product(random_positive_field(g.dim(), 11), random_oscillating_field(g.dim(), 12));
    for (const auto& x : halton_points(cube(g.dim(), -1, 1), 40, 3)) {
      for (std::size_t k = 0; k < g.first_dim(); ++k) {
        auto c = g.field_coeffs(k, x);
        const double d1 = apply_field(g, k, f, x);
        EXPECT_NEAR(d1, fd_along(f, x, c), 1e-6 * std::max(1.0, std::fabs(d1)));
        // second derivative along the integral curve of X_k, from first derivatives
        auto xf = field_derivative(g, k, f);
        const double h = 1e-4;
        Point a = x, b = x;
        // coefficients depend on x but first-order flow suffices at this step size
        for (std::size_t j = 0; j < x.size(); ++j) {
          a[j] += h * c[j];
          b[j] -= h * c[j];
        }
        const double fd2 = (apply_field(g, k, f, a) - apply_field(g, k, f, b)) / (2 * h);
        const double d2 = second_field(g, k, f, x);
        EXPECT_NEAR(d2, fd2, 1e-4 * std::max(1.0, std::fabs(d2))) << g.spec();
        EXPECT_NEAR(xf(x), d1, 1e-15);
      }
    }
  }
}

TEST(Hcalc, FirstStratumOnlyFunctionsSeeEuclideanDerivatives) {
  auto h = make_heisenberg(2);
  auto e = make_euclidean(4);
  auto f = poly("x1^3*x2 - 2*x3*x4^2 + x1*x4");
  for (const auto& x : halton_points(cube(5, -1, 1), 100, 9)) {
    Point xe(x.begin(), x.begin() + 4);
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(apply_field(h, k, f, x), apply_field(e, k, f, xe), 1e-12);
      EXPECT_NEAR(second_field(h, k, f, x), second_field(e, k, f, xe), 1e-12);
    }
  }
}

TEST(Hcalc, ProductRule) {
  auto g = make_heisenberg(1);
  auto f = random_positive_field(3, 21), u = random_oscillating_field(3, 22);
  auto fu = fields::product(f, u);
  for (const auto& x : halton_points(cube(3, -1, 1), 50, 4))
    for (std::size_t k = 0; k < 2; ++k)
      EXPECT_NEAR(apply_field(g, k, fu, x), apply_field(g, k, f, x) * u(x) + f(x) * apply_field(g, k, u, x), 1e-10);
}
