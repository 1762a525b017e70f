#ifndef LK_PIECEWISE_POLYNOMIAL_HPP
#define LK_PIECEWISE_POLYNOMIAL_HPP

#include <vector>

#include "lk/common.hpp"

namespace lk {

/// Piecewise polynomial on [-1,1].
///
/// Pieces are stored in the midpoint-centered scaled monomial basis: on piece
/// i with midpoint m_i and half-width h_i,
///     p(x) = sum_j coef[i][j] * ((x - m_i)/h_i)^j .
/// Breakpoints always include both endpoints -1 and 1.  No continuity across
/// breakpoints is imposed; both one-sided values are retrievable.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial();  // zero on [-1,1]

  PiecewisePolynomial(std::vector<double> breakpoints,
                      std::vector<std::vector<double>> piece_coefs);

  /// Single piece covering [-1,1] with scaled-monomial coefficients.
  static PiecewisePolynomial single(std::vector<double> coefs);

  const std::vector<double>& breakpoints() const { return breaks_; }
  int piece_count() const { return static_cast<int>(coefs_.size()); }
  const std::vector<double>& piece_coefs(int i) const { return coefs_[i]; }
  int degree() const;

  double midpoint(int piece) const { return 0.5 * (breaks_[piece] + breaks_[piece + 1]); }
  double half_width(int piece) const { return 0.5 * (breaks_[piece + 1] - breaks_[piece]); }

  /// Derivative values at the piece midpoint: result[j] = p^(j)(m_i) on piece i.
  std::vector<double> taylor_at_midpoint(int piece) const;

  double eval(double x, Side side) const;
  /// Right-continuous evaluation (left limit at x = 1).
  double operator()(double x) const;

  PiecewisePolynomial derivative(int s = 1) const;

  double max_abs(int samples = 512) const;

 private:
  int piece_index(double x, Side side) const;

  std::vector<double> breaks_;
  std::vector<std::vector<double>> coefs_;
};

/// Exact L2([-1,1]) inner product via Gauss-Legendre of sufficient order on
/// the merged breakpoint grid.
double inner_product(const PiecewisePolynomial& p, const PiecewisePolynomial& q);

double l2_norm(const PiecewisePolynomial& p);

}  // namespace lk

#endif
