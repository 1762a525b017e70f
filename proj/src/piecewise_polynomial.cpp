#include "lk/piecewise_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lk/legendre.hpp"

namespace lk {

PiecewisePolynomial::PiecewisePolynomial()
    : breaks_{-1.0, 1.0}, coefs_{{0.0}} {}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints,
                                         std::vector<std::vector<double>> piece_coefs)
    : breaks_(std::move(breakpoints)), coefs_(std::move(piece_coefs)) {
  if (breaks_.size() < 2 || coefs_.size() + 1 != breaks_.size())
    throw std::invalid_argument("PiecewisePolynomial: piece/breakpoint count mismatch");
  if (breaks_.front() != -1.0 || breaks_.back() != 1.0)
    throw std::invalid_argument("PiecewisePolynomial: breakpoints must span [-1,1]");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1]))
      throw std::invalid_argument("PiecewisePolynomial: breakpoints must increase");
  for (auto& c : coefs_)
    if (c.empty()) c.push_back(0.0);
}

PiecewisePolynomial PiecewisePolynomial::single(std::vector<double> coefs) {
  return PiecewisePolynomial({-1.0, 1.0}, {std::move(coefs)});
}

int PiecewisePolynomial::degree() const {
  int d = 0;
  for (const auto& c : coefs_) d = std::max(d, static_cast<int>(c.size()) - 1);
  return d;
}

int PiecewisePolynomial::piece_index(double x, Side side) const {
  if (x <= breaks_.front()) return 0;
  if (x >= breaks_.back()) return piece_count() - 1;
  // first breakpoint >= x
  const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
  int idx = static_cast<int>(it - breaks_.begin());
  if (*it == x) {
    // interior breakpoint: right side takes piece idx, left side piece idx-1
    return side == Side::right ? std::min(idx, piece_count() - 1) : idx - 1;
  }
  return idx - 1;
}

double PiecewisePolynomial::eval(double x, Side side) const {
  const int i = piece_index(x, side);
  const double y = (x - midpoint(i)) / half_width(i);
  const auto& c = coefs_[i];
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) acc = acc * y + c[j];
  return acc;
}

double PiecewisePolynomial::operator()(double x) const {
  return eval(x, x >= 1.0 ? Side::left : Side::right);
}

std::vector<double> PiecewisePolynomial::taylor_at_midpoint(int piece) const {
  const auto& c = coefs_[piece];
  const double h = half_width(piece);
  std::vector<double> out(c.size());
  double fact = 1.0, hp = 1.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j > 0) {
      fact *= static_cast<double>(j);
      hp *= h;
    }
    out[j] = c[j] * fact / hp;
  }
  return out;
}

PiecewisePolynomial PiecewisePolynomial::derivative(int s) const {
  if (s < 0) throw std::invalid_argument("derivative: s < 0");
  std::vector<std::vector<double>> out;
  out.reserve(coefs_.size());
  for (int i = 0; i < piece_count(); ++i) {
    std::vector<double> c = coefs_[i];
    const double h = half_width(i);
    for (int step = 0; step < s; ++step) {
      if (c.size() <= 1) {
        c = {0.0};
        continue;
      }
      std::vector<double> d(c.size() - 1);
      for (std::size_t j = 0; j + 1 < c.size(); ++j)
        d[j] = c[j + 1] * static_cast<double>(j + 1) / h;
      c = std::move(d);
    }
    out.push_back(std::move(c));
  }
  return PiecewisePolynomial(breaks_, std::move(out));
}

double PiecewisePolynomial::max_abs(int samples) const {
  double mx = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = -1.0 + 2.0 * i / (samples - 1);
    mx = std::max(mx, std::abs((*this)(x)));
  }
  return mx;
}

double inner_product(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
  std::set<double> merged(p.breakpoints().begin(), p.breakpoints().end());
  merged.insert(q.breakpoints().begin(), q.breakpoints().end());
  const int order = (p.degree() + q.degree()) / 2 + 2;
  const QuadRule& rule = gauss_legendre(order);
  long double acc = 0.0L;
  auto it = merged.begin();
  double lo = *it++;
  for (; it != merged.end(); ++it) {
    const double hi = *it;
    const double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    for (std::size_t n = 0; n < rule.x.size(); ++n) {
      const double x = mid + hw * rule.x[n];
      acc += static_cast<long double>(rule.w[n]) * hw * p.eval(x, Side::right) *
             q.eval(x, Side::right);
    }
    lo = hi;
  }
  return static_cast<double>(acc);
}

double l2_norm(const PiecewisePolynomial& p) {
  return std::sqrt(std::max(0.0, inner_product(p, p)));
}

}  // namespace lk
