#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "abwave/errors.hpp"
#include "abwave/quadrature.hpp"

using abwave::specfn::integrate;
using abwave::specfn::QuadratureRule;

TEST(Quadrature, ConstantAndOddIntegrands) {
  const auto rule = QuadratureRule::gauss_legendre(8, -1.0, 1.0);
  EXPECT_NEAR(integrate([](double) { return 1.0; }, rule), 2.0, 4e-15);
  EXPECT_NEAR(integrate([](double x) { return x; }, rule), 0.0, 1e-16);
  EXPECT_NEAR(integrate([](double x) { return x * x * x; }, rule), 0.0, 1e-16);
}

TEST(Quadrature, ExactForMonomialsUpToDegree) {
  for (int n : {2, 5, 10, 20}) {
    const auto rule = QuadratureRule::gauss_legendre(n, -0.5, 1.5);
    ASSERT_EQ(rule.degree(), 2 * n - 1);
    for (int p = 0; p <= rule.degree(); ++p) {
      const double exact = (std::pow(1.5, p + 1) - std::pow(-0.5, p + 1)) / (p + 1);
      const double got = integrate([p](double x) { return std::pow(x, p); }, rule);
      EXPECT_NEAR(got, exact, 1e-13 * std::max(1.0, std::abs(exact))) << "n=" << n << " p=" << p;
    }
  }
}

TEST(Quadrature, NodesIncreasingWeightsPositive) {
  for (const auto& rule : {QuadratureRule::gauss_legendre(30, -2.0, 3.0),
                           QuadratureRule::composite_gauss_legendre(10, 7, -1.0, 1.0),
                           QuadratureRule::whole_line(4.0, 12, 8, 8)}) {
    const auto x = rule.nodes();
    const auto w = rule.weights();
    for (std::size_t i = 0; i < rule.size(); ++i) {
      EXPECT_GT(w[i], 0.0);
      if (i > 0) {
        EXPECT_LT(x[i - 1], x[i]);
      }
    }
  }
}

TEST(Quadrature, GaussianIntegralOnTruncatedWindow) {
  const auto rule = QuadratureRule::composite_gauss_legendre(20, 16, -8.0, 8.0);
  const double v = integrate([](double x) { return std::exp(-x * x); }, rule);
  EXPECT_NEAR(v, std::sqrt(std::numbers::pi), 1e-10);
}

TEST(Quadrature, RefinementChangesGaussianBelow1e12) {
  const auto f = [](double x) { return std::exp(-x * x); };
  const double coarse = integrate(f, QuadratureRule::composite_gauss_legendre(20, 16, -8.0, 8.0));
  const double fine = integrate(f, QuadratureRule::composite_gauss_legendre(20, 32, -8.0, 8.0));
  EXPECT_LT(std::abs(fine - coarse), 1e-12);
}

TEST(Quadrature, WholeLineHandlesAlgebraicTail) {
  // int dx / (1 + x^2) = pi; the tail beyond any finite window is 1/x^2.
  const auto rule = QuadratureRule::whole_line(5.0, 20, 20, 20);
  EXPECT_TRUE(std::isinf(rule.lower()));
  EXPECT_TRUE(std::isinf(rule.upper()));
  const double v = integrate([](double x) { return 1.0 / (1.0 + x * x); }, rule);
  EXPECT_NEAR(v, std::numbers::pi, 1e-12);
}

TEST(Quadrature, NonFiniteIntegrandIsEvaluationError) {
  const auto rule = QuadratureRule::gauss_legendre(4, -1.0, 1.0);
  EXPECT_THROW(integrate([](double) { return std::numeric_limits<double>::quiet_NaN(); }, rule),
               abwave::EvaluationError);
}

TEST(Quadrature, RejectsMalformedRules) {
  EXPECT_ANY_THROW(QuadratureRule({0.0, 1.0}, {1.0, -1.0}, 0.0, 1.0, 1));
  EXPECT_ANY_THROW(QuadratureRule({1.0, 0.5}, {1.0, 1.0}, 0.0, 1.0, 1));
  EXPECT_ANY_THROW(QuadratureRule({0.0, 2.0}, {1.0, 1.0}, 0.0, 1.0, 1));
}
