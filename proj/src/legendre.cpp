#include "lk/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lk {

namespace {

// Newton iteration on P_n with Chebyshev-like initial guesses.
QuadRule compute_rule(int n) {
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double pm1 = 1.0, p = x;
      for (int m = 2; m <= n; ++m) {
        const double pn = ((2 * m - 1) * x * p - (m - 1) * pm1) / m;
        pm1 = p;
        p = pn;
      }
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        // one more cleanup step
        pm1 = 1.0;
        p = x;
        for (int m = 2; m <= n; ++m) {
          const double pn = ((2 * m - 1) * x * p - (m - 1) * pm1) / m;
          pm1 = p;
          p = pn;
        }
        dp = n * (x * p - pm1) / (x * x - 1.0);
        x -= p / dp;
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = -x;
    rule.w[i] = w;
    rule.x[n - 1 - i] = x;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    // center node is exactly zero
    rule.x[n / 2] = 0.0;
    double pm1 = 1.0, p = 0.0;
    for (int m = 2; m <= n; ++m) {
      const double pn = (-(m - 1) * pm1) / m;
      pm1 = p;
      p = pn;
    }
    const double dp = n * (-pm1) / (-1.0);
    rule.w[n / 2] = 2.0 / (dp * dp);
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::mutex mtx;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

LegendreSeries::LegendreSeries(std::vector<double> coef) : coef_(std::move(coef)) {
  if (coef_.empty()) coef_.push_back(0.0);
}

LegendreSeries LegendreSeries::derivative(int s) const {
  if (s < 0) throw std::invalid_argument("LegendreSeries::derivative: s < 0");
  std::vector<double> c = coef_;
  for (int i = 0; i < s; ++i) c = legser::derivative(c);
  return LegendreSeries(std::move(c));
}

double LegendreSeries::inner(const LegendreSeries& f, const LegendreSeries& g) {
  const std::size_t n = std::min(f.coef_.size(), g.coef_.size());
  long double acc = 0.0L;
  for (std::size_t m = 0; m < n; ++m)
    acc += static_cast<long double>(f.coef_[m]) * g.coef_[m];
  return static_cast<double>(acc);
}

LegendreSeries LegendreSeries::truncated(double rel_floor) const {
  double mx = 0.0;
  for (double c : coef_) mx = std::max(mx, std::abs(c));
  if (mx == 0.0) return *this;
  // keep everything up to the last coefficient whose suffix max exceeds floor
  std::size_t keep = coef_.size();
  double suffix_max = 0.0;
  for (std::size_t i = coef_.size(); i-- > 1;) {
    suffix_max = std::max(suffix_max, std::abs(coef_[i]));
    if (suffix_max >= rel_floor * mx) {
      keep = i + 1;
      break;
    }
    keep = i;
  }
  std::vector<double> c(coef_.begin(), coef_.begin() + std::max<std::size_t>(keep, 1));
  return LegendreSeries(std::move(c));
}

}  // namespace lk
