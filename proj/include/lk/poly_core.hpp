#ifndef LK_POLY_CORE_HPP
#define LK_POLY_CORE_HPP

#include "lk/legendre.hpp"
#include "lk/piecewise_polynomial.hpp"

namespace lk {

/// Orthonormal Legendre basis of P_{dim-1} on [-1,1].
class OrthonormalPolyBasis {
 public:
  explicit OrthonormalPolyBasis(int dim);
  int dimension() const { return dim_; }
  /// s-th derivative of basis polynomial n at x.
  double eval(int n, int s, double x) const;

 private:
  int dim_;
  std::vector<LegendreSeries> basis_;  // [n][s] flattened lazily per call
};

/// Right-hand side of the endpoint/jump data: (-1)^(k-1) delta_{r-k-1,s}.
double boundary_data(int r, int k, int s);

/// Sharp constant M_t of the pointwise Markov-Nikolskii inequality
/// |Q^(k)(t)| <= M_t ||Q||_2 over Q in P_{r-1}:
///   M_t^2 = sum_{n=k}^{r-1} (pt_n^(k)(t))^2 ,   pt_n orthonormal Legendre.
double markov_constant(int r, int k, double t);

/// lambda = 0 solution of the endpoint system at t = -1: the unique
/// polynomial of degree <= 2r-1 with
///   u^(s)(-1) = (-1)^(k-1) delta_{r-k-1,s},  u^(s)(1) = 0,  s = 0..r-1.
/// Postcondition checked in tests: ||u0^(r)||_2 = markov_constant(r,k,-1).
PiecewisePolynomial u0_endpoint(int r, int k);

/// lambda = 0 solution of the interior system: two polynomial pieces of
/// degree <= 2r-1 on [-1,t], [t,1] with clamped ends and the jump data
///   u^(s)(t+0) - u^(s)(t-0) = (-1)^(k-1) delta_{r-k-1,s},  s = 0..2r-1.
PiecewisePolynomial u0_interior(int r, int k, double t);

/// Residual of all defining conditions of u0_endpoint / u0_interior
/// (max norm); used by tests and the self test.
double u0_defect(const PiecewisePolynomial& u0, int r, int k);          // endpoint
double u0_defect(const PiecewisePolynomial& u0, int r, int k, double t);  // interior

}  // namespace lk

#endif
