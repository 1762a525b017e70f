#ifndef LK_PROBLEMS_HPP
#define LK_PROBLEMS_HPP

#include <optional>
#include <vector>

#include "lk/bvp.hpp"
#include "lk/common.hpp"
#include "lk/problem_spec.hpp"

namespace lk::problems {

/// One point of a trade-off curve Gamma_t: the sharp constant pair
/// (A, B) = (||u_lambda^(r)||, ||u_lambda||) of |f^(k)(t)| <= A||f|| + B||f^(r)||.
struct TradeoffPoint {
  double lambda = 0.0;
  double A = 0.0;
  double B = 0.0;
};

TradeoffPoint curve_point(const ProblemSpec& spec, double lambda);

/// Gamma curve sampled at the given ascending lambdas (lambda = 0 allowed).
std::vector<TradeoffPoint> gamma_curve(const ProblemSpec& spec,
                                       const std::vector<double>& lambdas);

/// Modulus of continuity at one delta: Omega_t(delta) = A(l*) delta + B(l*)
/// where l* > 0 is the unique solution of delta * l * B(l) = A(l).
struct OmegaResult {
  ProblemSpec spec = ProblemSpec::endpoint(1, 0);
  double delta = 0.0;
  double lambda_star = 0.0;
  double omega = 0.0;
  double A = 0.0;
  double B = 0.0;
  /// |delta * l * B - A| / A at the returned lambda_star
  double residual = 0.0;
  /// best recovery with exact or perturbed data equals Omega_t(delta)
  bool best_recovery_equal = true;
  /// u_{lambda*}: the extremal function is u^(r)/(lambda* B)
  bvp::ExtremalSolution solution;
};

OmegaResult omega(const ProblemSpec& spec, double delta);

/// Evaluates the extremal function f = u^(r)/(lambda B) of an OmegaResult
/// (derivative order j of f, i.e. order r+j of u).
double extremal_eval(const OmegaResult& res, int j, double x);

/// Best approximation of D^k_t by functionals of norm <= N on W^r_2.
enum class StechkinKind { finite, infinite };

struct StechkinResult {
  ProblemSpec spec = ProblemSpec::endpoint(1, 0);
  double N = 0.0;
  StechkinKind kind = StechkinKind::infinite;
  double lambda_N = 0.0;
  double error = 0.0;  // E_N; +inf when kind == infinite
  std::optional<bvp::ExtremalSolution> solution;  // kernel u^(r)_{lambda_N}
};

StechkinResult stechkin(const ProblemSpec& spec, double N);

/// Uniform modulus for r in {1,2}: max of Omega_t(delta) over a
/// Chebyshev-spaced t grid including both endpoints.
struct UniformOmegaResult {
  double omega = 0.0;
  double argmax_t = 0.0;
  bool argmax_at_endpoint = true;
  std::vector<double> t_grid;
  std::vector<double> omega_t;
};

UniformOmegaResult uniform_omega(int r, int k, double delta, int t_grid_size = 33);

/// Uniform Stechkin problem for r in {1,2}: the endpoint result, plus the
/// diagnostic sup over a t-grid of the interior E_N values (equal to the
/// endpoint value, attained at t = +-1).
struct UniformStechkinResult {
  StechkinResult endpoint;
  double sup_interior = 0.0;
  double max_interior_excess = 0.0;  // max over grid of E_{N,t} - E_N
  std::vector<double> t_grid;
  std::vector<double> e_t;
};

UniformStechkinResult uniform_stechkin(int r, int k, double N, int t_grid_size = 33);

/// Verdict for one eigenfunction of the Karlin-type conjecture
/// ||phi^(r+k)||_inf = |phi^(r+k)(-1)|.
struct ConjectureReport {
  int r = 0;
  int k = 0;
  int mode = 0;  // 1-based
  double lambda_n = 0.0;
  double endpoint_value = 0.0;  // max(|phi^(r+k)(-1)|, |phi^(r+k)(+1)|)
  double interior_max = 0.0;
  double interior_argmax = 0.0;
  double margin = 0.0;  // endpoint_value - interior_max
  double tol_grid = 0.0;
  bool holds = false;
};

std::vector<ConjectureReport> check_conjecture(int r, int k, int n_modes,
                                               int samples = 2001);

/// Norm domination used in the uniform case: ||u_{l,t}^(r)|| <= ||u_l^(r)||
/// and ||u_{l,t}|| <= ||u_l|| over a (lambda, t) grid.
struct DominationCheck {
  double max_violation_A = 0.0;
  double max_violation_B = 0.0;
  bool ok = false;
};

DominationCheck check_norm_domination(int r, int k,
                                      const std::vector<double>& lambdas,
                                      const std::vector<double>& ts);

/// Sharp endpoint inequality ||f^(k)||_inf <= A ||f|| + B ||f^(r)|| for
/// k in {r-2, r-1}, with grid certificates of the pointwise polynomial
/// inequalities behind it.
struct EndpointInequalityResult {
  int r = 0;
  int k = 0;
  double A = 0.0;  // ||u0^(r)||
  double B = 0.0;  // ||u0||
  int t_grid = 0;
  int x_grid = 0;
  /// k = r-1: min over grids of p_{-1}(x) - |p_t(x)| on [-1,t], t <= 0
  double min_margin_pt = 0.0;
  /// k = r-2: min over grids of 4 p_t(x) - delta_t(x)
  double min_margin_4pt = 0.0;
  /// k = r-2: min over t grid of 2 p_{-1}(t) + 2 p_1(t) - (1 - t^2)
  double min_margin_sum = 0.0;
  /// r = 2, k = 0 only: max |2 p_{-1}(t) + 2 p_1(t) - (1 - t^2)| (identically 0)
  double degenerate_deviation = 0.0;
};

EndpointInequalityResult endpoint_inequality_constants(int r, int k, int t_grid = 500, int x_grid = 500);

}  // namespace lk::problems

#endif
