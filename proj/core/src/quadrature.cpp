#include "abwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "abwave/errors.hpp"

namespace abwave::specfn {

QuadratureRule::QuadratureRule(std::vector<double> nodes,
                               std::vector<double> weights, double lower,
                               double upper, int degree)
    : nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      lower_(lower),
      upper_(upper),
      degree_(degree) {
  if (nodes_.size() != weights_.size() || nodes_.empty()) {
    throw DomainError("QuadratureRule: node/weight size mismatch or empty");
  }
  if (!(lower_ < upper_)) {
    throw DomainError("QuadratureRule: empty domain");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw DomainError("QuadratureRule: weights must be positive and finite");
    }
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw DomainError("QuadratureRule: nodes must be strictly increasing");
    }
    if (nodes_[i] < lower_ || nodes_[i] > upper_) {
      throw DomainError("QuadratureRule: node outside domain");
    }
  }
}

QuadratureRule QuadratureRule::gauss_legendre(int n, double a, double b) {
  return composite_gauss_legendre(n, 1, a, b);
}

namespace {

// Nodes/weights on [-1, 1], ascending.
void legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      // p0 = P_n(z), p1 = P_{n-1}(z)
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = weight;
    w[n - 1 - i] = weight;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace

QuadratureRule QuadratureRule::composite_gauss_legendre(int n, int panels,
                                                        double a, double b) {
  if (n < 1 || panels < 1 || !(a < b) || !std::isfinite(a) ||
      !std::isfinite(b)) {
    throw DomainError("composite_gauss_legendre: invalid arguments");
  }
  std::vector<double> ref_x;
  std::vector<double> ref_w;
  legendre_nodes(n, ref_x, ref_w);
  std::vector<double> nodes;
  std::vector<double> weights;
  nodes.reserve(static_cast<std::size_t>(n) * panels);
  weights.reserve(nodes.capacity());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    for (int i = 0; i < n; ++i) {
      nodes.push_back(mid + 0.5 * width * ref_x[i]);
      weights.push_back(0.5 * width * ref_w[i]);
    }
  }
  return QuadratureRule(std::move(nodes), std::move(weights), a, b,
                        2 * n - 1);
}

QuadratureRule QuadratureRule::whole_line(double core, int n, int core_panels,
                                          int tail_panels) {
  if (!(core > 0.0) || !std::isfinite(core)) {
    throw DomainError("whole_line: core half-width must be positive");
  }
  const auto centre = composite_gauss_legendre(n, core_panels, -core, core);
  const auto unit = composite_gauss_legendre(n, tail_panels, 0.0, 1.0);

  // x = core / s maps s in (0, 1] onto [core, inf); dx = core / s^2 ds.
  std::vector<double> tail_x;
  std::vector<double> tail_w;
  for (std::size_t i = 0; i < unit.size(); ++i) {
    const double s = unit.nodes()[i];
    tail_x.push_back(core / s);
    tail_w.push_back(unit.weights()[i] * core / (s * s));
  }
  std::vector<double> nodes;
  std::vector<double> weights;
  for (std::size_t i = 0; i < tail_x.size(); ++i) {  // s ascending => x descending
    nodes.push_back(-tail_x[i]);
    weights.push_back(tail_w[i]);
  }
  nodes.insert(nodes.end(), centre.nodes().begin(), centre.nodes().end());
  weights.insert(weights.end(), centre.weights().begin(),
                 centre.weights().end());
  for (std::size_t i = tail_x.size(); i-- > 0;) {
    nodes.push_back(tail_x[i]);
    weights.push_back(tail_w[i]);
  }
  return QuadratureRule(std::move(nodes), std::move(weights),
                        -std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity(), 2 * n - 1);
}

double integrate(const std::function<double(double)>& f,
                 const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes()[i];
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      std::ostringstream msg;
      msg << "integrate: integrand is not finite at x = " << x;
      throw EvaluationError(msg.str());
    }
    sum += rule.weights()[i] * fx;
  }
  return sum;
}

}  // namespace abwave::specfn
