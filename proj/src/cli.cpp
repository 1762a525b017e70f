#include "lk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lk/bvp.hpp"
#include "lk/poly_core.hpp"
#include "lk/problems.hpp"
#include "lk/selftest.hpp"
#include "lk/spectral.hpp"

namespace lk::cli {

namespace {

using nlohmann::json;

// numbers are emitted as decimal strings with 17 significant digits so the
// byte stream never depends on platform float printing
std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "infinite" : "-infinite";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Output {
  std::string command;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

int emit(const Output& out, const std::string& format, const std::string& path) {
  std::ostringstream os;
  if (format == "csv") {
    os << "# lksharp " << kVersion << " " << out.command << "\n";
    for (const auto& [k, v] : out.meta) os << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < out.columns.size(); ++c)
      os << out.columns[c] << (c + 1 < out.columns.size() ? "," : "\n");
    for (const auto& row : out.rows)
      for (std::size_t c = 0; c < row.size(); ++c)
        os << row[c] << (c + 1 < row.size() ? "," : "\n");
  } else {
    json j;
    j["tool"] = "lksharp";
    j["version"] = kVersion;
    j["command"] = out.command;
    json meta = json::object();
    for (const auto& [k, v] : out.meta) meta[k] = v;
    j["meta"] = meta;
    json records = json::array();
    for (const auto& row : out.rows) {
      json rec = json::object();
      for (std::size_t c = 0; c < row.size(); ++c) rec[out.columns[c]] = row[c];
      records.push_back(rec);
    }
    j["records"] = records;
    os << j.dump(2) << "\n";
  }
  if (path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      std::cerr << "lksharp: cannot open output file " << path << "\n";
      return 2;
    }
    f << os.str();
  }
  return 0;
}

std::vector<double> parse_grid(const std::string& s, bool log_spaced) {
  double a = 0, b = 0;
  int n = 0;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3)
    throw CLI::ValidationError("grid", "expected a:b:n");
  if (n < 1) throw CLI::ValidationError("grid", "n must be >= 1");
  std::vector<double> out;
  if (n == 1) return {a};
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    if (log_spaced) {
      if (!(a > 0) || !(b > 0))
        throw CLI::ValidationError("grid", "log grid needs positive bounds");
      out.push_back(std::pow(10.0, std::log10(a) + f * (std::log10(b) - std::log10(a))));
    } else {
      out.push_back(a + f * (b - a));
    }
  }
  return out;
}

void common_meta(Output* out, int r, int k, double tol) {
  out->meta.emplace_back("r", std::to_string(r));
  out->meta.emplace_back("k", std::to_string(k));
  out->meta.emplace_back("tol", fmt17(tol));
  out->meta.emplace_back("threads", std::getenv("LK_SHARP_THREADS")
                                        ? std::getenv("LK_SHARP_THREADS")
                                        : "auto");
}

int cmd_omega(int r, int k, const std::vector<double>& ts,
              const std::vector<double>& deltas, double tol,
              const std::string& format, const std::string& path) {
  Output out;
  out.command = "omega";
  common_meta(&out, r, k, tol);
  out.meta.emplace_back("note", "t = -1 or t = 1 selects the endpoint problem");
  out.columns = {"r", "k", "t", "delta", "lambda_star", "omega", "A", "B",
                 "residual", "best_recovery_equal"};
  for (const double t : ts) {
    for (const double delta : deltas) {
      const auto res = problems::omega(ProblemSpec::at(r, k, t), delta);
      out.rows.push_back({std::to_string(r), std::to_string(k), fmt17(t), fmt17(delta),
                          fmt17(res.lambda_star), fmt17(res.omega), fmt17(res.A),
                          fmt17(res.B), fmt17(res.residual),
                          res.best_recovery_equal ? "true" : "false"});
    }
  }
  return emit(out, format, path);
}

int cmd_gamma(int r, int k, double t, const std::string& lambda_grid, bool check_series,
              const std::string& format, const std::string& path) {
  std::vector<double> lams = parse_grid(lambda_grid, /*log_spaced=*/true);
  lams.insert(lams.begin(), 0.0);  // the curve starts at the Markov point
  const auto curve = problems::gamma_curve(ProblemSpec::at(r, k, t), lams);
  Output out;
  out.command = "gamma";
  common_meta(&out, r, k, 0.0);
  out.meta.emplace_back("t", fmt17(t));
  out.meta.emplace_back("markov_constant", fmt17(markov_constant(r, k, t)));
  out.columns = {"r", "k", "t", "lambda", "A", "B"};
  for (const auto& pt : curve)
    out.rows.push_back({std::to_string(r), std::to_string(k), fmt17(t), fmt17(pt.lambda),
                        fmt17(pt.A), fmt17(pt.B)});
  if (check_series) {
    const auto dec = spectral::decompose(r, 200, 420);
    const PiecewisePolynomial u0 =
        (t == -1.0 || t == 1.0) ? u0_endpoint(r, k) : u0_interior(r, k, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const auto s = spectral::series_solution(dec, u0, curve[i].lambda, 4 * r - 2 * k);
      worst = std::max(worst, std::abs(s.norm_ur - curve[i].A) / curve[i].A);
      worst = std::max(worst, std::abs(s.norm_u - curve[i].B) / curve[i].B);
    }
    out.meta.emplace_back("series_cross_check_max_rel", fmt17(worst));
  }
  return emit(out, format, path);
}

int cmd_markov(int r, int k, const std::vector<double>& ts, const std::string& format,
               const std::string& path) {
  Output out;
  out.command = "markov";
  common_meta(&out, r, k, 0.0);
  out.columns = {"r", "k", "t", "M_t"};
  double sup = -1.0, arg = 0.0;
  for (const double t : ts) {
    const double m = markov_constant(r, k, t);
    if (m > sup) {
      sup = m;
      arg = t;
    }
    out.rows.push_back({std::to_string(r), std::to_string(k), fmt17(t), fmt17(m)});
  }
  out.meta.emplace_back("sup_M_t", fmt17(sup));
  out.meta.emplace_back("argmax_t", fmt17(arg));
  return emit(out, format, path);
}

int cmd_stechkin(int r, int k, double t, double N, bool uniform, int t_grid_size,
                 const std::string& export_kernel, const std::string& format,
                 const std::string& path) {
  Output out;
  out.command = "stechkin";
  common_meta(&out, r, k, 0.0);
  if (uniform) {
    out.meta.emplace_back("uniform_domain_note",
                          "uniform mode accepts r in {1,2}, any k <= r-1");
    const auto res = problems::uniform_stechkin(r, k, N, t_grid_size);
    out.columns = {"r", "k", "N", "kind", "lambda_N", "E_N", "sup_interior",
                   "max_interior_excess"};
    const bool inf = res.endpoint.kind == problems::StechkinKind::infinite;
    out.rows.push_back({std::to_string(r), std::to_string(k), fmt17(N),
                        inf ? "infinite" : "finite", fmt17(res.endpoint.lambda_N),
                        fmt17(res.endpoint.error), fmt17(res.sup_interior),
                        inf ? "" : fmt17(res.max_interior_excess)});
    return emit(out, format, path);
  }
  const auto res = problems::stechkin(ProblemSpec::at(r, k, t), N);
  out.columns = {"r", "k", "t", "N", "kind", "lambda_N", "E_N"};
  const bool inf = res.kind == problems::StechkinKind::infinite;
  out.rows.push_back({std::to_string(r), std::to_string(k), fmt17(t), fmt17(N),
                      inf ? "infinite" : "finite", fmt17(res.lambda_N), fmt17(res.error)});
  if (!export_kernel.empty()) {
    if (inf) {
      std::cerr << "lksharp: no kernel to export for an infinite result\n";
      return 2;
    }
    Output ker;
    ker.command = "stechkin-kernel";
    common_meta(&ker, r, k, 0.0);
    ker.meta.emplace_back("lambda_N", fmt17(res.lambda_N));
    ker.columns = {"x", "u_r"};
    const int samples = 1001;
    for (int i = 0; i < samples; ++i) {
      const double x = -1.0 + 2.0 * i / (samples - 1);
      ker.rows.push_back({fmt17(x), fmt17(res.solution->evaluate(r, x))});
    }
    const int rc = emit(ker, "csv", export_kernel);
    if (rc != 0) return rc;
  }
  return emit(out, format, path);
}

int cmd_eigen(int r, int modes, int galerkin_dim, bool check_det,
              const std::string& format, const std::string& path) {
  if (galerkin_dim <= 0)
    galerkin_dim = std::max(2 * modes, static_cast<int>(std::ceil(2.6 * (modes + r))) + 24);
  const auto dec = spectral::decompose(r, modes, galerkin_dim);
  std::vector<double> roots;
  if (check_det) roots = spectral::determinant_eigenvalues(r, std::min(modes, 12));
  Output out;
  out.command = "eigen";
  common_meta(&out, r, 0, 0.0);
  out.meta.emplace_back("galerkin_dim", std::to_string(galerkin_dim));
  out.columns = {"n", "lambda_n"};
  if (check_det) {
    out.columns.push_back("det_root");
    out.columns.push_back("rel_diff");
  }
  for (int n = 0; n < modes; ++n) {
    std::vector<std::string> row = {std::to_string(n + 1), fmt17(dec.eigenvalues[n])};
    if (check_det) {
      if (n < static_cast<int>(roots.size())) {
        row.push_back(fmt17(roots[n]));
        row.push_back(fmt17(std::abs(roots[n] - dec.eigenvalues[n]) / roots[n]));
      } else {
        row.push_back("");
        row.push_back("");
      }
    }
    out.rows.push_back(std::move(row));
  }
  return emit(out, format, path);
}

int cmd_conjecture(int r, int k, int modes, int samples, double tol,
                   const std::string& export_figure, const std::string& format,
                   const std::string& path) {
  const auto reports = problems::check_conjecture(r, k, modes, samples);
  const auto domination = problems::check_norm_domination(
      r, k, {0.1, 1.0, 10.0, 100.0}, {-0.9, -0.5, 0.0, 0.4, 0.8});
  Output out;
  out.command = "conjecture";
  common_meta(&out, r, k, tol);
  out.meta.emplace_back("samples", std::to_string(samples));
  out.meta.emplace_back("domination_ok", domination.ok ? "true" : "false");
  out.meta.emplace_back("domination_max_violation_A", fmt17(domination.max_violation_A));
  out.meta.emplace_back("domination_max_violation_B", fmt17(domination.max_violation_B));
  out.columns = {"n", "lambda_n", "endpoint", "interior_max", "interior_argmax",
                 "margin", "tol_grid", "verdict"};
  for (const auto& rep : reports) {
    out.rows.push_back({std::to_string(rep.mode), fmt17(rep.lambda_n),
                        fmt17(rep.endpoint_value), fmt17(rep.interior_max),
                        fmt17(rep.interior_argmax), fmt17(rep.margin),
                        fmt17(std::max(rep.tol_grid, tol)), rep.holds ? "holds" : "fails"});
  }
  if (!export_figure.empty()) {
    const int dec_modes = 2 * modes;
    const int dim =
        std::max(2 * dec_modes, static_cast<int>(std::ceil(2.6 * (dec_modes + r))) + 24);
    const auto dec = spectral::decompose(r, dec_modes, dim);
    Output fig;
    fig.command = "conjecture-figure";
    common_meta(&fig, r, k, tol);
    fig.meta.emplace_back("derivative_order", std::to_string(r + k));
    fig.columns = {"x"};
    for (int m = 0; m < modes; ++m) fig.columns.push_back("phi" + std::to_string(m + 1));
    std::vector<spectral::Profile> profs;
    for (int m = 0; m < modes; ++m)
      profs.push_back(spectral::eigen_derivative_profile(dec, m, r + k, 2001));
    for (int i = 0; i < 2001; ++i) {
      std::vector<std::string> row = {fmt17(profs[0].x[i])};
      for (int m = 0; m < modes; ++m) row.push_back(fmt17(profs[m].value[i]));
      fig.rows.push_back(std::move(row));
    }
    const int rc = emit(fig, "csv", export_figure);
    if (rc != 0) return rc;
  }
  return emit(out, format, path);
}

int cmd_selftest(const std::string& format, const std::string& path) {
  const auto results = lk::selftest::run_all();
  int failures = 0;
  for (const auto& res : results)
    if (!res.pass) ++failures;
  if (format == "json" && !path.empty()) {
    Output out;
    out.command = "selftest";
    out.columns = {"id", "name", "pass", "seconds", "detail"};
    for (const auto& res : results)
      out.rows.push_back({std::to_string(res.id), res.name, res.pass ? "true" : "false",
                          fmt17(res.seconds), res.detail});
    emit(out, format, path);
  }
  for (const auto& res : results)
    std::printf("[%s] %2d: %s  (%.1f s)%s%s\n", res.pass ? "PASS" : "FAIL", res.id,
                res.name.c_str(), res.seconds, res.detail.empty() ? "" : " -- ",
                res.detail.c_str());
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 4;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"lksharp: sharp constants and extremal functions for pointwise and "
               "uniform Landau-Kolmogorov problems on [-1,1] with L2 constraints"};
  app.footer("Environment: LK_SHARP_THREADS overrides parallelism (0 = auto).");
  app.require_subcommand(1);

  int r = 1, k = 0, modes = 10, samples = 2001, t_grid_size = 33, galerkin_dim = 0;
  double t = -1.0, delta = 1.0, N = 1.0, tol = 1e-9;
  std::string t_grid, delta_grid, lambda_grid = "0.001:1000:60";
  std::string format = "json", out_path, export_figure, export_kernel;
  bool uniform = false, check_det = false;

  auto add_common = [&](CLI::App* sub, bool with_k) {
    sub->add_option("--r", r, "constraint derivative order r >= 1")->required();
    if (with_k) sub->add_option("--k", k, "objective derivative order, 0 <= k <= r-1");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "write the report to PATH instead of stdout");
  };

  CLI::App* omega_cmd = app.add_subcommand(
      "omega", "modulus of continuity Omega_t(delta) and the extremal data");
  add_common(omega_cmd, true);
  omega_cmd->add_option("--t", t, "evaluation point in [-1,1]; +-1 = endpoint problem");
  omega_cmd->add_option("--t-grid", t_grid, "a:b:n linear grid of evaluation points");
  omega_cmd->add_option("--delta", delta, "data error bound delta > 0");
  omega_cmd->add_option("--delta-grid", delta_grid, "a:b:n linear grid of deltas");
  omega_cmd->add_option("--tol", tol, "reporting tolerance recorded in metadata");

  CLI::App* gamma_cmd =
      app.add_subcommand("gamma", "trade-off curve Gamma_t: pairs (A, B) over lambda");
  add_common(gamma_cmd, true);
  gamma_cmd->add_option("--t", t, "evaluation point in [-1,1]");
  gamma_cmd->add_option("--lambda-grid", lambda_grid,
                        "a:b:n log10-spaced lambdas; lambda = 0 is always prepended");
  bool check_series = false;
  gamma_cmd->add_flag("--check-series", check_series,
                      "cross-check (A,B) against the eigen-series route");

  CLI::App* markov_cmd =
      app.add_subcommand("markov", "pointwise Markov-Nikolskii constants M_t");
  add_common(markov_cmd, true);
  markov_cmd->add_option("--t", t, "evaluation point");
  markov_cmd->add_option("--t-grid", t_grid, "a:b:n linear grid");

  CLI::App* stechkin_cmd = app.add_subcommand(
      "stechkin", "best approximation E_N of the evaluation functional");
  add_common(stechkin_cmd, true);
  stechkin_cmd->add_option("--t", t, "evaluation point");
  stechkin_cmd->add_option("--N", N, "functional norm bound")->required();
  stechkin_cmd->add_flag("--uniform", uniform, "uniform problem over t (r in {1,2})");
  stechkin_cmd->add_option("--t-grid-size", t_grid_size, "grid size for --uniform");
  stechkin_cmd->add_option("--export-kernel", export_kernel,
                           "write u^(r)_{lambda_N} samples to PATH (csv)");

  CLI::App* eigen_cmd =
      app.add_subcommand("eigen", "eigenvalues of the clamped operator");
  add_common(eigen_cmd, false);
  eigen_cmd->add_option("--modes", modes, "number of modes");
  eigen_cmd->add_option("--galerkin-dim", galerkin_dim, "Galerkin dimension (default auto)");
  eigen_cmd->add_flag("--check-determinant", check_det,
                      "cross-check against the determinant oracle");

  CLI::App* conj_cmd = app.add_subcommand(
      "conjecture", "endpoint-dominance check for eigenfunction derivatives");
  add_common(conj_cmd, true);
  conj_cmd->add_option("--modes", modes, "number of modes");
  conj_cmd->add_option("--samples", samples, "grid samples per mode");
  conj_cmd->add_option("--tol", tol, "verdict tolerance floor");
  conj_cmd->add_option("--export-figure", export_figure,
                       "write dense phi^(r+k) samples to PATH (csv)");

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the full oracle suite; exit 4 on failure");
  selftest_cmd->add_option("--format", format, "json writes a machine report with --out")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  selftest_cmd->add_option("--out", out_path, "report path for --format json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(omega_cmd)) {
      std::vector<double> ts = t_grid.empty() ? std::vector<double>{t}
                                              : parse_grid(t_grid, false);
      std::vector<double> deltas = delta_grid.empty() ? std::vector<double>{delta}
                                                      : parse_grid(delta_grid, false);
      return cmd_omega(r, k, ts, deltas, tol, format, out_path);
    }
    if (app.got_subcommand(gamma_cmd))
      return cmd_gamma(r, k, t, lambda_grid, check_series, format, out_path);
    if (app.got_subcommand(markov_cmd)) {
      std::vector<double> ts = t_grid.empty() ? std::vector<double>{t}
                                              : parse_grid(t_grid, false);
      return cmd_markov(r, k, ts, format, out_path);
    }
    if (app.got_subcommand(stechkin_cmd))
      return cmd_stechkin(r, k, t, N, uniform, t_grid_size, export_kernel, format, out_path);
    if (app.got_subcommand(eigen_cmd))
      return cmd_eigen(r, modes, galerkin_dim, check_det, format, out_path);
    if (app.got_subcommand(conj_cmd))
      return cmd_conjecture(r, k, modes, samples, tol, export_figure, format, out_path);
    if (app.got_subcommand(selftest_cmd)) return cmd_selftest(format, out_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "lksharp: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lksharp: invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "lksharp: numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace lk::cli
