#include "lk/problems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "lk/parallel.hpp"
#include "lk/poly_core.hpp"
#include "lk/spectral.hpp"

namespace lk::problems {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

// log-lambda bisection for a strictly decreasing g with g(lambda*) = 0;
// brackets expand from [1e-6, 1e3] out to [1e-12, 1e8]
double bisect_decreasing(const std::function<double(double)>& g,
                         const char* what) {
  double lo = 1e-6, hi = 1e3;
  double glo = g(lo);
  while (glo < 0.0 && lo > 1.1e-12) {
    lo /= 10.0;
    glo = g(lo);
  }
  double ghi = g(hi);
  while (ghi > 0.0 && hi < 0.9e8) {
    hi *= 10.0;
    ghi = g(hi);
  }
  if (glo < 0.0 || ghi > 0.0)
    throw numerical_error(std::string(what) +
                          ": no bracket in lambda within [1e-12, 1e8]");
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  double llo = std::log(lo), lhi = std::log(hi);
  for (int it = 0; it < 140 && (lhi - llo) > 1e-13; ++it) {
    const double mid = 0.5 * (llo + lhi);
    const double gm = g(std::exp(mid));
    if (gm > 0.0)
      llo = mid;
    else
      lhi = mid;
  }
  return std::exp(0.5 * (llo + lhi));
}

std::vector<double> chebyshev_lobatto(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double c = -std::cos(M_PI * i / (n - 1));
    out[i] = 0.5 * (a + b) + 0.5 * (b - a) * c;
  }
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace

TradeoffPoint curve_point(const ProblemSpec& spec, double lambda) {
  const auto sol = bvp::solve(spec, lambda);
  return TradeoffPoint{lambda, sol.norm_ur(), sol.norm_u()};
}

std::vector<TradeoffPoint> gamma_curve(const ProblemSpec& spec,
                                       const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw std::invalid_argument("gamma_curve: empty lambda list");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i + 1]))
      throw std::invalid_argument("gamma_curve: lambdas must increase");
  std::vector<TradeoffPoint> out(lambdas.size());
  parallel_for(lambdas.size(),
               [&](std::size_t i) { out[i] = curve_point(spec, lambdas[i]); });
  return out;
}

OmegaResult omega(const ProblemSpec& spec, double delta) {
  if (delta < 0.0) throw std::invalid_argument("omega: delta must be >= 0");
  OmegaResult res;
  res.spec = spec;
  res.delta = delta;
  if (delta == 0.0) {
    // Omega_t(0) = 0 by definition of the modulus; no root-finding
    res.solution = bvp::solve(spec, 0.0);
    return res;
  }
  const double target = 2.0 * std::log(delta);
  auto g = [&](double lambda) {
    const auto sol = bvp::solve(spec, lambda);
    return std::log(sol.norm_ur() / (lambda * sol.norm_u())) * 2.0 - target;
  };
  res.lambda_star = bisect_decreasing(g, "omega");
  res.solution = bvp::solve(spec, res.lambda_star);
  res.A = res.solution.norm_ur();
  res.B = res.solution.norm_u();
  res.omega = res.A * delta + res.B;
  res.residual = std::abs(delta * res.lambda_star * res.B - res.A) / res.A;
  return res;
}

double extremal_eval(const OmegaResult& res, int j, double x) {
  if (res.delta == 0.0) throw std::invalid_argument("extremal_eval: delta = 0 record");
  const int r = res.spec.r();
  return res.solution.evaluate(r + j, x) / (res.lambda_star * res.B);
}

StechkinResult stechkin(const ProblemSpec& spec, double N) {
  if (!(N >= 0.0)) throw std::invalid_argument("stechkin: N must be >= 0");
  StechkinResult res;
  res.spec = spec;
  res.N = N;
  const double M = markov_constant(spec.r(), spec.k(), spec.t());
  if (N < M * (1.0 - 1e-12)) {
    res.kind = StechkinKind::infinite;
    res.error = kInf;
    return res;
  }
  res.kind = StechkinKind::finite;
  if (N <= M * (1.0 + 1e-12)) {
    res.lambda_N = 0.0;
  } else {
    // A(lambda) increases from M; g decreasing in the bisection convention
    auto g = [&](double lambda) { return N - bvp::solve(spec, lambda).norm_ur(); };
    res.lambda_N = bisect_decreasing(g, "stechkin");
  }
  res.solution = bvp::solve(spec, res.lambda_N);
  res.error = res.solution->norm_u();
  return res;
}

UniformOmegaResult uniform_omega(int r, int k, double delta, int t_grid_size) {
  if (r != 1 && r != 2)
    throw std::invalid_argument("uniform_omega: the uniform case is proved for r in {1,2}");
  if (k < 0 || k >= r) throw std::invalid_argument("uniform_omega: need 0 <= k <= r-1");
  if (!(delta > 0.0)) throw std::invalid_argument("uniform_omega: delta must be > 0");
  if (t_grid_size < 3) throw std::invalid_argument("uniform_omega: grid too small");

  UniformOmegaResult out;
  out.t_grid = chebyshev_lobatto(-1.0, 1.0, t_grid_size);
  out.omega_t.assign(out.t_grid.size(), 0.0);
  parallel_for(out.t_grid.size(), [&](std::size_t i) {
    out.omega_t[i] = omega(ProblemSpec::at(r, k, out.t_grid[i]), delta).omega;
  });
  std::size_t arg = 0;
  for (std::size_t i = 1; i < out.omega_t.size(); ++i)
    if (out.omega_t[i] > out.omega_t[arg]) arg = i;
  out.omega = out.omega_t[arg];
  out.argmax_t = out.t_grid[arg];
  out.argmax_at_endpoint = std::abs(out.argmax_t) == 1.0;
  return out;
}

UniformStechkinResult uniform_stechkin(int r, int k, double N, int t_grid_size) {
  if (r != 1 && r != 2)
    throw std::invalid_argument("uniform_stechkin: the uniform case is proved for r in {1,2}");
  UniformStechkinResult out;
  out.endpoint = stechkin(ProblemSpec::endpoint(r, k), N);
  if (out.endpoint.kind == StechkinKind::infinite) {
    out.sup_interior = kInf;
    return out;
  }
  out.t_grid = chebyshev_lobatto(-1.0, 1.0, t_grid_size);
  out.e_t.assign(out.t_grid.size(), 0.0);
  parallel_for(out.t_grid.size(), [&](std::size_t i) {
    out.e_t[i] = stechkin(ProblemSpec::at(r, k, out.t_grid[i]), N).error;
  });
  out.sup_interior = 0.0;
  out.max_interior_excess = -kInf;
  for (std::size_t i = 0; i < out.t_grid.size(); ++i) {
    out.sup_interior = std::max(out.sup_interior, out.e_t[i]);
    if (std::abs(out.t_grid[i]) != 1.0)
      out.max_interior_excess =
          std::max(out.max_interior_excess, out.e_t[i] - out.endpoint.error);
  }
  return out;
}

std::vector<ConjectureReport> check_conjecture(int r, int k, int n_modes,
                                               int samples) {
  if (r < 1 || k < 0 || k >= r)
    throw std::invalid_argument("check_conjecture: need r >= 1, 0 <= k <= r-1");
  if (n_modes < 1 || samples < 16)
    throw std::invalid_argument("check_conjecture: bad n_modes/samples");

  const int dec_modes = 2 * n_modes;
  const int dim =
      std::max(2 * dec_modes, static_cast<int>(std::ceil(2.6 * (dec_modes + r))) + 24);
  const auto dec = spectral::decompose(r, dec_modes, dim);

  const int s = r + k;
  std::vector<ConjectureReport> reports(n_modes);
  parallel_for(static_cast<std::size_t>(n_modes), [&](std::size_t m) {
    ConjectureReport rep;
    rep.r = r;
    rep.k = k;
    rep.mode = static_cast<int>(m) + 1;
    rep.lambda_n = dec.eigenvalues[m];
    const LegendreSeries d = dec.eigenfunctions[m].derivative(s);
    rep.endpoint_value = std::max(std::abs(d(-1.0)), std::abs(d(1.0)));

    const double h = 2.0 / (samples - 1);
    std::vector<double> v(samples);
    for (int i = 0; i < samples; ++i) v[i] = std::abs(d(-1.0 + h * i));
    double best = 0.0, argbest = 0.0;
    for (int i = 1; i + 1 < samples; ++i) {
      if (v[i] >= v[i - 1] && v[i] >= v[i + 1]) {
        const double lo = -1.0 + h * (i - 1), hi = -1.0 + h * (i + 1);
        const double refined =
            golden_max([&](double x) { return std::abs(d(x)); }, std::max(lo, -1.0 + h / 4),
                       std::min(hi, 1.0 - h / 4));
        if (refined > best) {
          best = refined;
          argbest = 0.5 * (lo + hi);
        }
      }
    }
    rep.interior_max = best;
    rep.interior_argmax = argbest;
    rep.margin = rep.endpoint_value - rep.interior_max;

    // grid maxima undershoot true maxima like h^2 |phi^(s+2)| / 8
    const LegendreSeries d2 = d.derivative(2);
    double curv = 0.0;
    for (int i = 0; i <= 128; ++i)
      curv = std::max(curv, std::abs(d2(-1.0 + 2.0 * i / 128.0)));
    rep.tol_grid = std::max(1e-9, h * h * curv / 8.0);
    rep.holds = rep.margin >= -rep.tol_grid;
    reports[m] = rep;
  });
  return reports;
}

DominationCheck check_norm_domination(int r, int k,
                                      const std::vector<double>& lambdas,
                                      const std::vector<double>& ts) {
  DominationCheck out;
  std::vector<double> va(lambdas.size(), 0.0), vb(lambdas.size(), 0.0);
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const auto end = bvp::solve(ProblemSpec::endpoint(r, k), lambdas[i]);
    double wa = -kInf, wb = -kInf;
    for (const double t : ts) {
      if (std::abs(t) >= 1.0) continue;
      const auto sol = bvp::solve(ProblemSpec::interior(r, k, t), lambdas[i]);
      wa = std::max(wa, (sol.norm_ur() - end.norm_ur()) / end.norm_ur());
      wb = std::max(wb, (sol.norm_u() - end.norm_u()) / end.norm_u());
    }
    va[i] = wa;
    vb[i] = wb;
  });
  out.max_violation_A = *std::max_element(va.begin(), va.end());
  out.max_violation_B = *std::max_element(vb.begin(), vb.end());
  out.ok = out.max_violation_A <= 1e-9 && out.max_violation_B <= 1e-9;
  return out;
}

EndpointInequalityResult endpoint_inequality_constants(int r, int k, int t_grid, int x_grid) {
  if (r < 2) throw std::invalid_argument("endpoint_inequality_constants: r >= 2 required");
  if (k != r - 1 && k != r - 2)
    throw std::invalid_argument("endpoint_inequality_constants: k must be r-2 or r-1");
  if (t_grid < 8 || x_grid < 8)
    throw std::invalid_argument("endpoint_inequality_constants: grids too small");

  EndpointInequalityResult out;
  out.r = r;
  out.k = k;
  out.t_grid = t_grid;
  out.x_grid = x_grid;

  const PiecewisePolynomial u0 = u0_endpoint(r, k);
  out.A = l2_norm(u0.derivative(r));
  out.B = l2_norm(u0);

  // p_{-1} = (-1)^r u0 for k = r-1, (-1)^(r-1) u0 for k = r-2
  const double nu = ((k == r - 1) == (r % 2 == 0)) ? 1.0 : -1.0;
  const auto pm1 = [&](double x) { return nu * u0(x); };
  const auto p1 = [&](double x) { return nu * u0(-x); };

  if (k == r - 1) {
    // |p_t(x)| <= p_{-1}(x) on [-1,t] for t in (-1,0]; p_t = p_{-1} - chi_[-1,t)
    const std::vector<double> ts = chebyshev_lobatto(-1.0, 0.0, t_grid);
    std::vector<double> margins(ts.size(), kInf);
    parallel_for(ts.size(), [&](std::size_t j) {
      const double t = ts[j];
      double mn = kInf;
      for (int i = 0; i < x_grid; ++i) {
        const double x = -1.0 + (t + 1.0) * i / (x_grid - 1);
        const double p = pm1(x);
        const double pt = (x < t) ? p - 1.0 : p;
        mn = std::min(mn, p - std::abs(pt));
      }
      margins[j] = mn;
    });
    out.min_margin_pt = *std::min_element(margins.begin(), margins.end());
    return out;
  }

  // k = r-2: closed-form p_t = ((1-t) p_{-1} + (1+t) p_1 + delta_t)/2
  const auto delta_t = [](double t, double x) {
    return x <= t ? -(1.0 - t) * (1.0 + x) : -(1.0 + t) * (1.0 - x);
  };
  const std::vector<double> ts = chebyshev_lobatto(-1.0, 0.0, t_grid);
  std::vector<double> m4(ts.size(), kInf), msum(ts.size(), kInf);
  parallel_for(ts.size(), [&](std::size_t j) {
    const double t = ts[j];
    double mn = kInf;
    for (int i = 0; i < x_grid; ++i) {
      const double x = -1.0 + 2.0 * i / (x_grid - 1);
      const double dt = delta_t(t, x);
      const double pt = 0.5 * ((1.0 - t) * pm1(x) + (1.0 + t) * p1(x) + dt);
      mn = std::min(mn, 4.0 * pt - dt);
    }
    m4[j] = mn;
    msum[j] = 2.0 * pm1(t) + 2.0 * p1(t) - (1.0 - t * t);
  });
  out.min_margin_4pt = *std::min_element(m4.begin(), m4.end());
  out.min_margin_sum = *std::min_element(msum.begin(), msum.end());

  if (r == 2 && k == 0) {
    double dev = 0.0;
    for (int i = 0; i < t_grid; ++i) {
      const double t = -1.0 + 2.0 * i / (t_grid - 1);
      dev = std::max(dev, std::abs(2.0 * pm1(t) + 2.0 * p1(t) - (1.0 - t * t)));
    }
    out.degenerate_deviation = dev;
  }
  return out;
}

}  // namespace lk::problems
