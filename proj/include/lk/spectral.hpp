#ifndef LK_SPECTRAL_HPP
#define LK_SPECTRAL_HPP

#include <vector>

#include "lk/common.hpp"
#include "lk/legendre.hpp"
#include "lk/piecewise_polynomial.hpp"

namespace lk::spectral {

/// Eigen-decomposition of A u = (-1)^r u^(2r) with clamped conditions
/// u^(s)(+-1) = 0, s = 0..r-1.  Eigenfunctions are stored as orthonormal
/// Legendre series, normalized in L2 and sign-fixed so that the first
/// nonvanishing derivative at -1 of orders r, r+1, ... is positive.
/// The upper half of the computed modes is kept but should be treated as
/// unconverged (it only carries tiny weights in the series sums).
struct SpectralDecomposition {
  int r = 0;
  int n_modes = 0;
  int galerkin_dim = 0;
  std::vector<double> eigenvalues;           // ascending, size n_modes
  std::vector<LegendreSeries> eigenfunctions;  // size n_modes

  /// Fourier coefficients (f, phi_n) for all modes.
  std::vector<double> fourier(const PiecewisePolynomial& f) const;
};

/// Galerkin eigensolve over the constrained basis b_n = (1-x^2)^r pt_n:
/// S c = lambda G c with S_ij = (b_i^(r), b_j^(r)), G_ij = (b_i, b_j).
/// Internally reduced via Cholesky of the Jacobi-scaled S (the Gram matrix G
/// has condition ~ dim^(4r) and cannot be factored at large dims).
/// Requires galerkin_dim >= 2 * n_modes.
SpectralDecomposition decompose(int r, int n_modes, int galerkin_dim);

/// Scaled determinant of the clamped homogeneous boundary system on the
/// characteristic basis of the eigenproblem (mu^(2r) = (-1)^r lambda);
/// zero-crossings in lambda locate eigenvalues.  Independent of decompose.
double eigen_determinant(int r, double lambda);

/// First `count` eigenvalues by bracketing eigen_determinant sign changes
/// over omega = lambda^(1/2r) and bisecting.
std::vector<double> determinant_eigenvalues(int r, int count);

/// Truncated eigen-series representation of u_lambda:
///   u = u0 + sum_n corr_n phi_n,  corr_n = -lambda (u0,phi_n)/(lambda+lambda_n)
/// with norms anchored at the exact ||u0||, ||u0^(r)||:
///   ||u||^2     = ||u0||^2     - sum_n c_n^2 lambda (lambda + 2 lambda_n)/(lambda+lambda_n)^2
///   ||u^(r)||^2 = ||u0^(r)||^2 + sum_n c_n^2 lambda^2 lambda_n /(lambda+lambda_n)^2
struct SeriesSolution {
  double lambda = 0.0;
  double norm_u = 0.0;
  double norm_ur = 0.0;
  /// truncation-tail estimates added into the norms (0 when lambda = 0)
  double tail_u = 0.0;
  double tail_ur = 0.0;
  std::vector<double> fourier_u0;  // (u0, phi_n)
  std::vector<double> correction;  // corr_n
};

/// tail_exponent: known power-law decay p of the tail terms (4r - 2k for the
/// systems here).  Pass 0 to fall back to a block-geometric estimate from
/// the last terms.
SeriesSolution series_solution(const SpectralDecomposition& dec,
                               const PiecewisePolynomial& u0, double lambda,
                               int tail_exponent = 0);

double series_eval(const SpectralDecomposition& dec, const SeriesSolution& s,
                   const PiecewisePolynomial& u0, double x);

/// Green's kernel of A^(-1):
///   K(x,xi) = (x-xi)_+^(2r-1)/(2r-1)! - row(xi) . F(x),
/// F(x) solving the r x r system with entries 2^(r+i-j)/(r+i-j)!.
class GreensKernel {
 public:
  explicit GreensKernel(int r);
  int order() const { return r_; }
  double value(double x, double xi) const;
  /// (A^(-1) f)(x) = (-1)^r int K(x,xi) f(xi) dxi, exact quadrature.
  double apply(const LegendreSeries& f, double x) const;

 private:
  int r_;
  std::vector<double> minv_;  // row-major r x r inverse
};

inline double kernel_value(const GreensKernel& ker, double x, double xi) {
  return ker.value(x, xi);
}

struct Profile {
  std::vector<double> x;
  std::vector<double> value;
};

/// Dense samples of phi_n^(s) (mode index 0-based, must lie in the converged
/// half n < n_modes/2; s <= 2r-1).
Profile eigen_derivative_profile(const SpectralDecomposition& dec, int n, int s,
                                 int samples = 2001);

}  // namespace lk::spectral

#endif
