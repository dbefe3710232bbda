#pragma once

#include <functional>
#include <span>
#include <vector>

namespace abwave::specfn {

/// Nodes and positive weights of a fixed quadrature rule on [lower, upper].
/// The bounds may be infinite for the mapped whole-line rule.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights,
                 double lower, double upper, int degree);

  /// n-point Gauss-Legendre on [a, b]; exact for polynomials of degree 2n-1.
  static QuadratureRule gauss_legendre(int n, double a, double b);

  /// `panels` equal sub-intervals of [a, b], each with an n-point
  /// Gauss-Legendre rule.
  static QuadratureRule composite_gauss_legendre(int n, int panels, double a,
                                                 double b);

  /// Rule over the whole real line: composite Gauss-Legendre on
  /// [-core, core] plus two tails mapped through x = core/s, s in (0, 1].
  /// Integrands decaying like 1/x^2 become constants in s, so algebraic
  /// tails are integrated accurately. Mirror-symmetric node set.
  static QuadratureRule whole_line(double core, int n, int core_panels,
                                   int tail_panels);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  /// Highest polynomial degree integrated exactly on a single panel.
  int degree() const { return degree_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double lower_;
  double upper_;
  int degree_;
};

/// Sum_i w_i f(x_i). Throws EvaluationError if f returns a non-finite value.
double integrate(const std::function<double(double)>& f,
                 const QuadratureRule& rule);

}  // namespace abwave::specfn
