#include "lk/poly_core.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "lk/common.hpp"

namespace lk {

namespace {

using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

long double falling_factorial(int j, int s) {
  long double f = 1.0L;
  for (int m = 0; m < s; ++m) f *= static_cast<long double>(j - m);
  return j >= s ? f : 0.0L;
}

// value of d^s/dx^s of ((x-mid)/hw)^j at scaled coordinate y
long double dmono(int j, int s, long double y, long double hw) {
  if (j < s) return 0.0L;
  return falling_factorial(j, s) * std::pow(y, j - s) / std::pow(hw, s);
}

VecL solve_scaled(MatL A, VecL b) {
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i) {
    long double mx = 0.0L;
    for (int j = 0; j < n; ++j) mx = std::max(mx, std::abs(A(i, j)));
    if (mx == 0.0L) throw numerical_error("u0 solve: zero row");
    A.row(i) /= mx;
    b(i) /= mx;
  }
  Eigen::ColPivHouseholderQR<MatL> qr(A);
  VecL x = qr.solve(b);
  x += qr.solve(b - A * x);  // one refinement step
  if (!x.allFinite()) throw numerical_error("u0 solve: singular system");
  return x;
}

}  // namespace

double boundary_data(int r, int k, int s) {
  if (s != r - k - 1) return 0.0;
  return (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^(k-1)
}

OrthonormalPolyBasis::OrthonormalPolyBasis(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("OrthonormalPolyBasis: dim >= 1 required");
  basis_.reserve(dim);
  for (int n = 0; n < dim; ++n) {
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    basis_.emplace_back(std::move(c));
  }
}

double OrthonormalPolyBasis::eval(int n, int s, double x) const {
  if (n < 0 || n >= dim_) throw std::invalid_argument("OrthonormalPolyBasis: bad index");
  return basis_[n].derivative(s)(x);
}

double markov_constant(int r, int k, double t) {
  if (r < 1) throw std::invalid_argument("markov_constant: r >= 1 required");
  if (k < 0 || k >= r) throw std::invalid_argument("markov_constant: need 0 <= k <= r-1");
  if (!(t >= -1.0 && t <= 1.0)) throw std::invalid_argument("markov_constant: t outside [-1,1]");
  long double acc = 0.0L;
  for (int n = k; n <= r - 1; ++n) {
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    const double v = LegendreSeries(std::move(c)).derivative(k)(t);
    acc += static_cast<long double>(v) * v;
  }
  return static_cast<double>(std::sqrt(acc));
}

PiecewisePolynomial u0_endpoint(int r, int k) {
  if (r < 1 || k < 0 || k >= r)
    throw std::invalid_argument("u0_endpoint: need r >= 1 and 0 <= k <= r-1");
  const int n = 2 * r;
  MatL A(n, n);
  VecL b = VecL::Zero(n);
  int row = 0;
  for (int s = 0; s < r; ++s, ++row) {
    for (int j = 0; j < n; ++j) A(row, j) = dmono(j, s, -1.0L, 1.0L);
    b(row) = boundary_data(r, k, s);
  }
  for (int s = 0; s < r; ++s, ++row) {
    for (int j = 0; j < n; ++j) A(row, j) = dmono(j, s, 1.0L, 1.0L);
  }
  const VecL c = solve_scaled(A, b);
  std::vector<double> coef(n);
  for (int j = 0; j < n; ++j) coef[j] = static_cast<double>(c(j));
  return PiecewisePolynomial::single(std::move(coef));
}

PiecewisePolynomial u0_interior(int r, int k, double t) {
  if (r < 1 || k < 0 || k >= r)
    throw std::invalid_argument("u0_interior: need r >= 1 and 0 <= k <= r-1");
  if (!(t > -1.0 && t < 1.0))
    throw std::invalid_argument("u0_interior: t must lie strictly inside (-1,1); use u0_endpoint for t = +-1");
  const int n = 2 * r;
  const long double h1 = 0.5L * (static_cast<long double>(t) + 1.0L);
  const long double h2 = 0.5L * (1.0L - static_cast<long double>(t));
  MatL A = MatL::Zero(2 * n, 2 * n);
  VecL b = VecL::Zero(2 * n);
  int row = 0;
  for (int s = 0; s < r; ++s, ++row)  // clamped at -1, piece 1 (y = -1)
    for (int j = 0; j < n; ++j) A(row, j) = dmono(j, s, -1.0L, h1);
  for (int s = 0; s < r; ++s, ++row)  // clamped at +1, piece 2 (y = +1)
    for (int j = 0; j < n; ++j) A(row, n + j) = dmono(j, s, 1.0L, h2);
  for (int s = 0; s < 2 * r; ++s, ++row) {  // jumps at t
    for (int j = 0; j < n; ++j) {
      A(row, n + j) = dmono(j, s, -1.0L, h2);  // piece 2 left end
      A(row, j) = -dmono(j, s, 1.0L, h1);      // piece 1 right end
    }
    b(row) = boundary_data(r, k, s);
  }
  const VecL c = solve_scaled(A, b);
  std::vector<double> c1(n), c2(n);
  for (int j = 0; j < n; ++j) {
    c1[j] = static_cast<double>(c(j));
    c2[j] = static_cast<double>(c(n + j));
  }
  return PiecewisePolynomial({-1.0, t, 1.0}, {std::move(c1), std::move(c2)});
}

namespace {

// Componentwise residual of one condition sum(terms) = data: the residual is
// judged against the cancellation scale sum |terms| (floor 1).  Below that
// scale a residual is indistinguishable from evaluation roundoff.
struct CondAccum {
  long double value = 0.0L;
  long double magnitude = 0.0L;
  void add(long double term) {
    value += term;
    magnitude += std::abs(term);
  }
  double defect(double data) const {
    return static_cast<double>(std::abs(value - static_cast<long double>(data)) /
                               std::max(1.0L, magnitude));
  }
};

// accumulates p^(s)(x) termwise on the piece that owns x for the given side
CondAccum eval_condition(const PiecewisePolynomial& p, int s, double x, Side side) {
  int pc = 0;
  if (p.piece_count() > 1) {
    const double bp = p.breakpoints()[1];
    pc = (x > bp || (x == bp && side == Side::right)) ? 1 : 0;
  }
  const auto& c = p.piece_coefs(pc);
  const long double h = p.half_width(pc);
  const long double y = (static_cast<long double>(x) - p.midpoint(pc)) / h;
  CondAccum acc;
  for (int j = s; j < static_cast<int>(c.size()); ++j) {
    long double ff = 1.0L;
    for (int m = 0; m < s; ++m) ff *= static_cast<long double>(j - m);
    acc.add(static_cast<long double>(c[j]) * ff * std::pow(y, j - s) / std::pow(h, s));
  }
  return acc;
}

}  // namespace

double u0_defect(const PiecewisePolynomial& u0, int r, int k) {
  double mx = 0.0;
  for (int s = 0; s < r; ++s) {
    mx = std::max(mx, eval_condition(u0, s, -1.0, Side::right).defect(boundary_data(r, k, s)));
    mx = std::max(mx, eval_condition(u0, s, 1.0, Side::left).defect(0.0));
  }
  return mx;
}

double u0_defect(const PiecewisePolynomial& u0, int r, int k, double t) {
  double mx = 0.0;
  for (int s = 0; s < r; ++s) {
    mx = std::max(mx, eval_condition(u0, s, -1.0, Side::right).defect(0.0));
    mx = std::max(mx, eval_condition(u0, s, 1.0, Side::left).defect(0.0));
  }
  for (int s = 0; s < 2 * r; ++s) {
    const CondAccum right = eval_condition(u0, s, t, Side::right);
    const CondAccum left = eval_condition(u0, s, t, Side::left);
    CondAccum jump;
    jump.value = right.value - left.value;
    jump.magnitude = right.magnitude + left.magnitude;
    mx = std::max(mx, jump.defect(boundary_data(r, k, s)));
  }
  return mx;
}

}  // namespace lk
