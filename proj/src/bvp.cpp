#include "lk/bvp.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "lk/legendre.hpp"
#include "lk/poly_core.hpp"

namespace lk::bvp {

namespace {

using detail::CL;
using detail::Piece;
using MatC = Eigen::Matrix<CL, Eigen::Dynamic, Eigen::Dynamic>;
using VecC = Eigen::Matrix<CL, Eigen::Dynamic, 1>;

// Regime switch: a piece uses the Taylor-cardinal basis when
// omega * half_width <= kTaylorSwitch (omega = lambda^(1/2r)).
constexpr double kTaylorSwitch = 6.0;
constexpr double kLambdaMax = 1e8;
constexpr long double kPiL = 3.14159265358979323846264338327950288L;

long double sigma_of(int r, double lambda) {
  return (r % 2 == 0 ? -1.0L : 1.0L) * static_cast<long double>(lambda);
}

// s-th derivative of the Taylor-cardinal basis function
//   h_i(y) = sum_{p>=0} sigma^p y^(2rp+i) / (2rp+i)!
// evaluated at y.  Exact ODE solution with h_i^(m)(0) = delta_im, m < 2r.
long double h_eval(int r, long double sigma, int i, int s, long double y) {
  long double acc = 0.0L, maxmag = 0.0L;
  int p = 0;
  int m = i - s;
  long double sig_p = 1.0L;
  while (m < 0) {
    ++p;
    m += 2 * r;
    sig_p *= sigma;
  }
  // first term sig_p * y^m / m!
  long double term = sig_p;
  for (int q = 1; q <= m; ++q) term *= y / static_cast<long double>(q);
  for (int it = 0; it < 400; ++it) {
    acc += term;
    maxmag = std::max(maxmag, std::abs(acc));
    long double fac = sigma;
    for (int q = 1; q <= 2 * r; ++q) fac *= y / static_cast<long double>(m + q);
    term *= fac;
    m += 2 * r;
    if (std::abs(term) < 1e-24L * std::max(maxmag, 1e-300L) && it >= 2) break;
  }
  return acc;
}

// Tail part: h_i^(s)(y) = mono + sigma * htail(i,s,y), where
//   htail(i,s,y) = sum_{p>=1} sigma^(p-1) y^(2rp+i-s) / (2rp+i-s)! .
long double htail_eval(int r, long double sigma, int i, int s, long double y) {
  int m = 2 * r + i - s;
  long double term = 1.0L;
  for (int q = 1; q <= m; ++q) term *= y / static_cast<long double>(q);
  long double acc = 0.0L, maxmag = 0.0L;
  for (int it = 0; it < 400; ++it) {
    acc += term;
    maxmag = std::max(maxmag, std::abs(acc));
    long double fac = sigma;
    for (int q = 1; q <= 2 * r; ++q) fac *= y / static_cast<long double>(m + q);
    term *= fac;
    m += 2 * r;
    if (std::abs(term) < 1e-24L * std::max(maxmag, 1e-300L) && it >= 2) break;
  }
  return acc;
}

std::vector<CL> roots_l(int r, double lambda) {
  const long double om = std::pow(static_cast<long double>(lambda), 1.0L / (2 * r));
  std::vector<CL> mu(2 * r);
  for (int j = 0; j < 2 * r; ++j) {
    const long double th = kPiL * (r + 1 + 2 * j) / (2 * r);
    mu[j] = CL(om * std::cos(th), om * std::sin(th));
  }
  return mu;
}

// Basis value: s-th derivative of basis function b of the piece at x.
CL basis_value(int r, long double sigma, const Piece& pc, int b, int s, long double x) {
  if (pc.taylor) {
    return CL(h_eval(r, sigma, b, s, x - static_cast<long double>(pc.mid())), 0.0L);
  }
  CL mus = 1.0L;
  for (int q = 0; q < s; ++q) mus *= pc.mu[b];
  return mus * std::exp(pc.mu[b] * (x - pc.anchor[b]));
}

// integral over [lo,hi] of exp(mu_i(x-a_i) + mu_j(x-a_j)); all exponents have
// non-positive real part on the piece, so every intermediate stays bounded.
CL exp_pair_integral(CL mu_i, long double a_i, CL mu_j, long double a_j,
                     long double lo, long double hi) {
  const CL z = mu_i + mu_j;
  const long double mid = 0.5L * (lo + hi), hw = 0.5L * (hi - lo);
  const CL zh = z * hw;
  if (std::abs(zh) <= 1.0L) {
    const CL w = mu_i * (mid - a_i) + mu_j * (mid - a_j);
    CL sc;
    if (std::abs(zh) < 1e-8L)
      sc = 1.0L + zh * zh / 6.0L;  // series branch, avoids 0/0 and cancellation
    else
      sc = std::sinh(zh) / zh;
    return std::exp(w) * (2.0L * hw) * sc;
  }
  const CL ehi = std::exp(mu_i * (hi - a_i) + mu_j * (hi - a_j));
  const CL elo = std::exp(mu_i * (lo - a_i) + mu_j * (lo - a_j));
  return (ehi - elo) / z;
}

int quad_nodes(int r, double om_hw) {
  return 40 + 4 * r + static_cast<int>(std::ceil(3.0 * om_hw));
}

struct Assembled {
  std::vector<Piece> pieces;
  double cond = 1.0;
};

// Builds the pieces, assembles the boundary/jump system, solves it.
Assembled assemble_and_solve(const ProblemSpec& base, double lambda,
                             const PiecewisePolynomial& u0) {
  const int r = base.r();
  const int k = base.k();
  const int nb = 2 * r;  // basis functions per piece
  const long double sigma = sigma_of(r, lambda);
  const double om = std::pow(lambda, 1.0 / (2 * r));

  Assembled out;
  std::vector<double> breaks;
  if (base.is_interior())
    breaks = {-1.0, base.t(), 1.0};
  else
    breaks = {-1.0, 1.0};

  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    Piece pc;
    pc.lo = breaks[p];
    pc.hi = breaks[p + 1];
    pc.taylor = om * pc.hw() <= kTaylorSwitch;
    if (!pc.taylor) {
      pc.mu = roots_l(r, lambda);
      pc.anchor.resize(nb);
      for (int j = 0; j < nb; ++j)
        pc.anchor[j] = pc.mu[j].real() >= 0.0L ? pc.hi : pc.lo;
    }
    out.pieces.push_back(std::move(pc));
  }

  const int np = static_cast<int>(out.pieces.size());
  const int dim = np * nb;
  MatC A = MatC::Zero(dim, dim);
  VecC rhs = VecC::Zero(dim);
  int row = 0;
  // clamped/endpoint rows at x = -1 (first piece)
  for (int s = 0; s < r; ++s, ++row) {
    for (int b = 0; b < nb; ++b)
      A(row, b) = basis_value(r, sigma, out.pieces[0], b, s, -1.0L);
    rhs(row) = base.is_interior() ? 0.0L
                                  : static_cast<long double>(boundary_data(r, k, s));
  }
  // clamped rows at x = +1 (last piece)
  for (int s = 0; s < r; ++s, ++row) {
    for (int b = 0; b < nb; ++b)
      A(row, (np - 1) * nb + b) =
          basis_value(r, sigma, out.pieces[np - 1], b, s, 1.0L);
  }
  if (base.is_interior()) {
    const long double t = base.t();
    for (int s = 0; s < 2 * r; ++s, ++row) {
      for (int b = 0; b < nb; ++b) {
        A(row, nb + b) = basis_value(r, sigma, out.pieces[1], b, s, t);
        A(row, b) = -basis_value(r, sigma, out.pieces[0], b, s, t);
      }
      rhs(row) = static_cast<long double>(boundary_data(r, k, s));
    }
  }

  // row equilibration
  for (int i = 0; i < dim; ++i) {
    long double mx = 0.0L;
    for (int j = 0; j < dim; ++j) mx = std::max(mx, std::abs(A(i, j)));
    if (mx == 0.0L) throw numerical_error("bvp solve: zero row in boundary system");
    A.row(i) /= mx;
    rhs(i) /= mx;
  }

  Eigen::ColPivHouseholderQR<MatC> qr(A);
  VecC x = qr.solve(rhs);
  x += qr.solve(rhs - A * x);
  if (!x.allFinite()) throw numerical_error("bvp solve: singular boundary system");

  {
    Eigen::MatrixXcd Ad(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        Ad(i, j) = std::complex<double>(static_cast<double>(A(i, j).real()),
                                        static_cast<double>(A(i, j).imag()));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ad);
    const double smin = svd.singularValues()(dim - 1);
    const double smax = svd.singularValues()(0);
    out.cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  }

  for (int p = 0; p < np; ++p) {
    Piece& pc = out.pieces[p];
    if (pc.taylor) {
      pc.c.resize(nb);
      for (int b = 0; b < nb; ++b) pc.c[b] = x(p * nb + b).real();
      const std::vector<double> d = u0.taylor_at_midpoint(p);
      pc.dc.resize(nb);
      for (int b = 0; b < nb; ++b)
        pc.dc[b] = pc.c[b] - static_cast<long double>(
                                 b < static_cast<int>(d.size()) ? d[b] : 0.0);
    } else {
      pc.ec.resize(nb);
      for (int b = 0; b < nb; ++b) pc.ec[b] = x(p * nb + b);
    }
  }
  return out;
}

// ---- norm integrals -------------------------------------------------------

// int over the piece of (u^(s))^2, u = sum_b c_b * basis_b.
long double piece_norm2(int r, long double sigma, double lambda, const Piece& pc, int s) {
  if (pc.taylor) {
    const double om = std::pow(lambda, 1.0 / (2 * r));
    const QuadRule& rule = gauss_legendre(quad_nodes(r, om * pc.hw()));
    const long double hw = pc.hw();
    long double acc = 0.0L;
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      const long double y = hw * static_cast<long double>(rule.x[q]);
      long double v = 0.0L;
      for (int b = 0; b < 2 * r; ++b) v += pc.c[b] * h_eval(r, sigma, b, s, y);
      acc += static_cast<long double>(rule.w[q]) * hw * v * v;
    }
    return acc;
  }
  CL acc = 0.0L;
  const int nb = static_cast<int>(pc.mu.size());
  for (int i = 0; i < nb; ++i) {
    CL mi = 1.0L;
    for (int q = 0; q < s; ++q) mi *= pc.mu[i];
    for (int j = 0; j < nb; ++j) {
      CL mj = 1.0L;
      for (int q = 0; q < s; ++q) mj *= pc.mu[j];
      acc += pc.ec[i] * pc.ec[j] * mi * mj *
             exp_pair_integral(pc.mu[i], pc.anchor[i], pc.mu[j], pc.anchor[j],
                               pc.lo, pc.hi);
    }
  }
  return acc.real();
}

// v = u - u0 on a Taylor piece, s-th derivative at scaled offset y = x - mid.
long double v_eval_taylor(int r, long double sigma, const Piece& pc, int s, long double y) {
  long double v = 0.0L;
  for (int b = s; b < 2 * r; ++b) {
    long double mono = pc.dc[b];
    for (int q = 1; q <= b - s; ++q) mono *= y / static_cast<long double>(q);
    v += mono;
  }
  long double tail = 0.0L;
  for (int b = 0; b < 2 * r; ++b) tail += pc.c[b] * htail_eval(r, sigma, b, s, y);
  return v + sigma * tail;
}

}  // namespace

CharacteristicBasis characteristic_basis(int r, double lambda) {
  if (r < 1) throw std::invalid_argument("characteristic_basis: r >= 1 required");
  if (!(lambda > 0)) throw std::invalid_argument("characteristic_basis: lambda > 0 required");
  CharacteristicBasis cb;
  cb.lambda = lambda;
  for (const CL& m : roots_l(r, lambda))
    cb.roots.emplace_back(static_cast<double>(m.real()), static_cast<double>(m.imag()));
  return cb;
}

double ExtremalSolution::norm_u() const {
  return static_cast<double>(std::sqrt(std::max(u0n2_ - bdrop_, 0.0L)));
}

double ExtremalSolution::norm_ur() const {
  return static_cast<double>(std::sqrt(m2_ + vr2_));
}

double ExtremalSolution::norm(int s) const {
  const int r = spec_.r();
  if (s < 0 || s > 2 * r - 1)
    throw std::invalid_argument("solution_norm: need 0 <= s <= 2r-1");
  if (s == 0) return norm_u();
  if (s == r) return norm_ur();
  if (lambda_ == 0.0) return l2_norm(u0_.derivative(s));
  const long double sigma = sigma_of(r, lambda_);
  long double acc = 0.0L;
  for (const Piece& pc : pieces_) acc += piece_norm2(r, sigma, lambda_, pc, s);
  return static_cast<double>(std::sqrt(std::max(acc, 0.0L)));
}

double ExtremalSolution::eval_raw(int s, double x, Side side) const {
  if (lambda_ == 0.0) {
    if (s >= 2 * spec_.r()) return 0.0;
    return u0_.derivative(s).eval(x, side);
  }
  // locate piece
  int idx = 0;
  const int np = static_cast<int>(pieces_.size());
  if (np > 1) {
    const double t = pieces_[0].hi;
    if (x > t || (x == t && side == Side::right)) idx = 1;
  }
  const Piece& pc = pieces_[idx];
  const int r = spec_.r();
  const long double sigma = sigma_of(r, lambda_);
  if (pc.taylor) {
    long double v = 0.0L;
    for (int b = 0; b < 2 * r; ++b)
      v += pc.c[b] * h_eval(r, sigma, b, s, static_cast<long double>(x) - pc.mid());
    return static_cast<double>(v);
  }
  CL v = 0.0L;
  for (int b = 0; b < 2 * r; ++b) {
    CL mus = 1.0L;
    for (int q = 0; q < s; ++q) mus *= pc.mu[b];
    v += pc.ec[b] * mus * std::exp(pc.mu[b] * (static_cast<long double>(x) - pc.anchor[b]));
  }
  return static_cast<double>(v.real());
}

double ExtremalSolution::evaluate(int s, double x, Side side) const {
  if (s < 0 || s > 2 * spec_.r())
    throw std::invalid_argument("evaluate: need 0 <= s <= 2r");
  if (!(x >= -1.0 && x <= 1.0)) throw std::invalid_argument("evaluate: x outside [-1,1]");
  if (!reflected_) return eval_raw(s, x, side);
  const int rk = spec_.r() - spec_.k();
  const double sign = (rk % 2 == 0 ? 1.0 : -1.0) * (s % 2 == 0 ? 1.0 : -1.0);
  return sign * eval_raw(s, -x, side == Side::left ? Side::right : Side::left);
}

double ExtremalSolution::max_defect() const {
  const int r = spec_.r(), k = spec_.k();
  // residuals relative to the scale of the participating values (floor 1)
  const auto rel = [](double residual, double scale) {
    return std::abs(residual) / std::max(1.0, scale);
  };
  auto deriv_scale = [&](int s) {
    double mx = 0.0;
    for (int i = 0; i <= 32; ++i)
      mx = std::max(mx, std::abs(eval_raw(s, -1.0 + 2.0 * i / 32, Side::right)));
    return mx;
  };
  double mx = 0.0;
  if (!spec_.is_interior()) {
    for (int s = 0; s < r; ++s) {
      const double a = eval_raw(s, -1.0, Side::right);
      mx = std::max(mx, rel(a - boundary_data(r, k, s), std::abs(a)));
      mx = std::max(mx, rel(eval_raw(s, 1.0, Side::left), deriv_scale(s)));
    }
    return mx;
  }
  const double t = spec_.t();
  for (int s = 0; s < r; ++s) {
    const double scale = deriv_scale(s);
    mx = std::max(mx, rel(eval_raw(s, -1.0, Side::right), scale));
    mx = std::max(mx, rel(eval_raw(s, 1.0, Side::left), scale));
  }
  for (int s = 0; s < 2 * r; ++s) {
    const double right = eval_raw(s, t, Side::right);
    const double left = eval_raw(s, t, Side::left);
    mx = std::max(mx, rel(right - left - boundary_data(r, k, s),
                          std::max(std::abs(right), std::abs(left))));
  }
  return mx;
}

ExtremalSolution solve(const ProblemSpec& spec, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("solve: lambda must be >= 0");
  if (lambda > kLambdaMax)
    throw numerical_error("solve: lambda beyond supported range 1e8");
  const int r = spec.r(), k = spec.k();
  const bool reflected = !spec.is_interior() && spec.t() > 0.0;

  ExtremalSolution sol;
  sol.spec_ = spec;
  sol.lambda_ = lambda;
  sol.reflected_ = reflected;
  sol.u0_ = spec.is_interior() ? u0_interior(r, k, spec.t()) : u0_endpoint(r, k);
  const double M = markov_constant(r, k, spec.t());
  sol.m2_ = static_cast<long double>(M) * M;
  sol.u0n2_ = static_cast<long double>(inner_product(sol.u0_, sol.u0_));

  if (lambda == 0.0) return sol;

  const ProblemSpec base =
      spec.is_interior() ? spec : ProblemSpec::endpoint(r, k, -1);
  Assembled as = assemble_and_solve(base, lambda, sol.u0_);
  sol.cond_ = as.cond;
  sol.pieces_ = std::move(as.pieces);
  if (sol.ill_conditioned())
    throw numerical_error("solve: boundary system condition estimate " +
                          std::to_string(sol.cond_) + " beyond 1e12 at lambda=" +
                          std::to_string(lambda));

  const long double sigma = sigma_of(r, lambda);
  bool all_taylor = true;
  for (const Piece& pc : sol.pieces_) all_taylor = all_taylor && pc.taylor;

  if (all_taylor) {
    // small-lambda regime: accumulate the norm increments of v = u - u0 at
    // their own scale so that A(lambda), B(lambda) stay strictly monotone
    // even where the increments are ~1e-14 relative.
    long double vr2 = 0.0L, v2 = 0.0L, vu0 = 0.0L;
    const double om = std::pow(lambda, 1.0 / (2 * r));
    for (const Piece& pc : sol.pieces_) {
      const QuadRule& rule = gauss_legendre(quad_nodes(r, om * pc.hw()));
      const long double hw = pc.hw();
      for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const long double y = hw * static_cast<long double>(rule.x[q]);
        const long double wq = static_cast<long double>(rule.w[q]) * hw;
        const long double vv = v_eval_taylor(r, sigma, pc, 0, y);
        const long double vr = v_eval_taylor(r, sigma, pc, r, y);
        const double xq = static_cast<double>(pc.mid() + static_cast<double>(y));
        const long double u0v = sol.u0_.eval(xq, Side::right);
        vr2 += wq * vr * vr;
        v2 += wq * vv * vv;
        vu0 += wq * vv * u0v;
      }
    }
    sol.vr2_ = vr2;
    sol.bdrop_ = -(2.0L * vu0 + v2);
  } else {
    long double a2 = 0.0L, un2 = 0.0L;
    for (const Piece& pc : sol.pieces_) {
      a2 += piece_norm2(r, sigma, lambda, pc, r);
      un2 += piece_norm2(r, sigma, lambda, pc, 0);
    }
    sol.vr2_ = std::max(a2 - sol.m2_, 0.0L);
    sol.bdrop_ = sol.u0n2_ - un2;
  }
  return sol;
}

ExtremalSolution solve_endpoint(const ProblemSpec& spec, double lambda) {
  if (spec.is_interior())
    throw std::invalid_argument("solve_endpoint: spec has an interior point");
  return solve(spec, lambda);
}

ExtremalSolution solve_interior(const ProblemSpec& spec, double lambda) {
  if (!spec.is_interior())
    throw std::invalid_argument("solve_interior: spec has an endpoint");
  return solve(spec, lambda);
}

}  // namespace lk::bvp
