#ifndef LK_BVP_HPP
#define LK_BVP_HPP

#include <complex>
#include <vector>

#include "lk/common.hpp"
#include "lk/piecewise_polynomial.hpp"
#include "lk/problem_spec.hpp"

namespace lk::bvp {

/// Characteristic roots of (-1)^r u^(2r) + lambda u = 0:
/// mu_j^(2r) = (-1)^(r+1) lambda, j = 0..2r-1, closed under conjugation.
struct CharacteristicBasis {
  double lambda = 0.0;
  std::vector<std::complex<double>> roots;
};

CharacteristicBasis characteristic_basis(int r, double lambda);

namespace detail {

using CL = std::complex<long double>;

/// One solution piece.  Small omega*half_width uses the Taylor-cardinal ODE
/// basis h_i (h_i^(m)(mid) = delta_im, exact solutions, tends to monomials as
/// lambda -> 0); large values use decay-anchored exponentials e^(mu(x-a)).
struct Piece {
  double lo = -1.0, hi = 1.0;
  bool taylor = true;
  // taylor regime
  std::vector<long double> c;    // coefficients over h_i
  std::vector<long double> dc;   // c_i - u0^(i)(mid): monomial part of v = u - u0
  // exponential regime
  std::vector<CL> mu;
  std::vector<long double> anchor;
  std::vector<CL> ec;

  double mid() const { return 0.5 * (lo + hi); }
  double hw() const { return 0.5 * (hi - lo); }
};

}  // namespace detail

/// Solution u_lambda (endpoint system) or u_{lambda,t} (interior system)
/// together with exact L2 norms.  For lambda = 0 it wraps the polynomial
/// solution from poly_core.
class ExtremalSolution {
 public:
  const ProblemSpec& spec() const { return spec_; }
  double lambda() const { return lambda_; }
  double norm_u() const;        // ||u||_2
  double norm_ur() const;       // ||u^(r)||_2
  double norm(int s) const;     // ||u^(s)||_2 for 0 <= s <= 2r-1
  double condition_estimate() const { return cond_; }
  bool ill_conditioned() const { return cond_ > 1e12; }

  /// s-th derivative at x with one-sided semantics at breakpoints.
  double evaluate(int s, double x, Side side = Side::right) const;

  /// Max residual of the defining boundary/jump conditions.
  double max_defect() const;

  /// The lambda = 0 polynomial of this problem (u0 or u0_t).
  const PiecewisePolynomial& u0() const { return u0_; }

  /// Norm increments relative to the lambda = 0 solution:
  ///   ||u^(r)||^2 = M^2 + vr2(),   ||u||^2 = ||u0||^2 - bdrop().
  /// Both are strictly monotone in lambda and carried at their own scale.
  double vr2() const { return static_cast<double>(vr2_); }
  double bdrop() const { return static_cast<double>(bdrop_); }

 private:
  friend ExtremalSolution solve(const ProblemSpec&, double);

  ProblemSpec spec_ = ProblemSpec::endpoint(1, 0);
  double lambda_ = 0.0;
  bool reflected_ = false;  // Endpoint(+1) = (-1)^(r-k) * solution(-x)
  PiecewisePolynomial u0_;
  std::vector<detail::Piece> pieces_;  // empty when lambda == 0
  long double m2_ = 0.0L;              // markov_constant^2
  long double u0n2_ = 0.0L;            // ||u0||^2
  long double vr2_ = 0.0L;
  long double bdrop_ = 0.0L;
  double cond_ = 1.0;

  double eval_raw(int s, double x, Side side) const;  // without reflection
};

/// Solves the endpoint system at lambda >= 0:
///   (-1)^r u^(2r) + lambda u = 0,
///   u^(s)(-1) = (-1)^(k-1) delta_{r-k-1,s},  u^(s)(1) = 0,  s = 0..r-1.
/// Endpoint(+1) specs are served by the reflection (-1)^(r-k) u(-x).
ExtremalSolution solve_endpoint(const ProblemSpec& spec, double lambda);

/// Solves the interior system at lambda >= 0 (clamped ends, 2r jump
/// conditions at t).
ExtremalSolution solve_interior(const ProblemSpec& spec, double lambda);

/// Dispatch on the spec's point.
ExtremalSolution solve(const ProblemSpec& spec, double lambda);

inline double solution_norm(const ExtremalSolution& sol, int s) { return sol.norm(s); }
inline double evaluate(const ExtremalSolution& sol, int s, double x,
                       Side side = Side::right) {
  return sol.evaluate(s, x, side);
}

}  // namespace lk::bvp

#endif
