#ifndef LK_LEGENDRE_HPP
#define LK_LEGENDRE_HPP

#include <cmath>
#include <vector>

namespace lk {

/// Gauss-Legendre rule on [-1,1].
struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
/// Rules are cached; safe to call concurrently.
const QuadRule& gauss_legendre(int n);

namespace legser {

// Coefficient-space operations on series over the orthonormal Legendre basis
// Pt_m = sqrt((2m+1)/2) P_m, templated so the spectral module can assemble in
// long double.

template <class S>
S norm_factor(int m) {
  return std::sqrt(S(2 * m + 1) / S(2));
}

/// Value of sum_m c[m] Pt_m(x).
template <class S>
S eval(const std::vector<S>& c, S x) {
  if (c.empty()) return S(0);
  S pm1 = S(1), p = x, acc = c[0] * norm_factor<S>(0);
  if (c.size() > 1) acc += c[1] * norm_factor<S>(1) * x;
  for (int m = 2; m < static_cast<int>(c.size()); ++m) {
    const S pn = (S(2 * m - 1) * x * p - S(m - 1) * pm1) / S(m);
    pm1 = p;
    p = pn;
    acc += c[m] * norm_factor<S>(m) * pn;
  }
  return acc;
}

/// Coefficients of the derivative.
template <class S>
std::vector<S> derivative(const std::vector<S>& c) {
  const int n = static_cast<int>(c.size());
  if (n <= 1) return {S(0)};
  // classical coefficients a_m; from P'_j = sum_{m<j, j-m odd} (2m+1) P_m:
  //   b_m = (2m+1) a_{m+1} + (2m+1)/(2m+5) b_{m+2}
  std::vector<S> a(n), b(n + 1, S(0));
  for (int m = 0; m < n; ++m) a[m] = c[m] * norm_factor<S>(m);
  for (int m = n - 2; m >= 0; --m)
    b[m] = S(2 * m + 1) * a[m + 1] + S(2 * m + 1) / S(2 * m + 5) * b[m + 2];
  std::vector<S> out(n - 1);
  for (int m = 0; m < n - 1; ++m) out[m] = b[m] / norm_factor<S>(m);
  return out;
}

/// Coefficients of x * f.
template <class S>
std::vector<S> times_x(const std::vector<S>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<S> a(n), out_cl(n + 1, S(0));
  for (int m = 0; m < n; ++m) a[m] = c[m] * norm_factor<S>(m);
  // x P_m = ((m+1) P_{m+1} + m P_{m-1}) / (2m+1)
  for (int m = 0; m < n; ++m) {
    out_cl[m + 1] += a[m] * S(m + 1) / S(2 * m + 1);
    if (m >= 1) out_cl[m - 1] += a[m] * S(m) / S(2 * m + 1);
  }
  std::vector<S> out(n + 1);
  for (int m = 0; m <= n; ++m) out[m] = out_cl[m] / norm_factor<S>(m);
  return out;
}

/// Coefficients of (1 - x^2) f.
template <class S>
std::vector<S> times_one_minus_x2(const std::vector<S>& c) {
  const std::vector<S> xf = times_x(c);
  const std::vector<S> xxf = times_x(xf);
  std::vector<S> out(xxf.size(), S(0));
  for (std::size_t m = 0; m < c.size(); ++m) out[m] = c[m];
  for (std::size_t m = 0; m < xxf.size(); ++m) out[m] -= xxf[m];
  return out;
}

}  // namespace legser

/// Polynomial on [-1,1] stored as coefficients over the orthonormal Legendre
/// basis.  Inner products are plain coefficient dot products.
class LegendreSeries {
 public:
  LegendreSeries() : coef_{0.0} {}
  explicit LegendreSeries(std::vector<double> coef);

  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  const std::vector<double>& coef() const { return coef_; }

  double operator()(double x) const { return legser::eval(coef_, x); }

  LegendreSeries derivative(int s = 1) const;

  /// Integral over [-1,1].
  double integral() const { return coef_[0] * std::sqrt(2.0); }

  /// L2([-1,1]) inner product.
  static double inner(const LegendreSeries& f, const LegendreSeries& g);

  /// Drops the trailing coefficient tail below rel_floor * max|coef|.
  /// High-order derivatives at x = +-1 amplify degree-m coefficient noise
  /// like m^(2s); eigenfunction series must be cut at their noise floor
  /// before differentiating.
  LegendreSeries truncated(double rel_floor = 1e-12) const;

 private:
  std::vector<double> coef_;
};

}  // namespace lk

#endif
