#include <cmath>
#include <random>

#include "doctest.h"
#include "lk/poly_core.hpp"

using namespace lk;

namespace {

// central finite difference of order 2 for the s-th derivative
double fd_derivative(const PiecewisePolynomial& p, int s, double x, double h) {
  if (s == 0) return p(x);
  return (fd_derivative(p, s - 1, x + h, h) - fd_derivative(p, s - 1, x - h, h)) /
         (2.0 * h);
}

}  // namespace

TEST_CASE("differentiate: zero and linear") {
  const PiecewisePolynomial zero;
  CHECK(zero.derivative(1)(0.3) == 0.0);

  // p(x) = (x-1)/2 as single piece: coefficients about midpoint 0
  const auto p = PiecewisePolynomial::single({-0.5, 0.5});
  CHECK(p(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p(-1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  const auto d = p.derivative(1);
  CHECK(d(0.2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.degree() == 0);
}

TEST_CASE("differentiate: p_{-1} for r=2,k=1 against finite differences") {
  // p_{-1} = (-1)^r u0 = u0_endpoint(2,1); second derivative should be 3x/2
  const PiecewisePolynomial u0 = u0_endpoint(2, 1);
  const PiecewisePolynomial d2 = u0.derivative(2);
  for (int i = 0; i < 10; ++i) {
    const double x = -0.9 + 1.8 * i / 9.0;
    CHECK(d2(x) == doctest::Approx(fd_derivative(u0, 2, x, 1e-4)).epsilon(1e-8));
    CHECK(d2(x) == doctest::Approx(1.5 * x).epsilon(1e-12));
  }
}

TEST_CASE("inner_product basics") {
  const auto one = PiecewisePolynomial::single({1.0});
  const auto x = PiecewisePolynomial::single({0.0, 1.0});
  CHECK(inner_product(one, one) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(inner_product(x, x) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // p_{-1} for r=1,k=0: (1-x)/2, squared integral 2/3
  const auto pm1 = PiecewisePolynomial::single({0.5, -0.5});
  CHECK(inner_product(pm1, pm1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("quadrature exactness vs symbolic moments up to degree 40") {
  // int_{-1}^{1} x^(2m) dx = 2/(2m+1)
  for (int m = 0; m <= 20; ++m) {
    std::vector<double> c(m + 1, 0.0);
    c[m] = 1.0;
    const auto p = PiecewisePolynomial::single(c);
    const double exact = (m % 2 == 0) ? 2.0 / (m + 1) : 0.0;
    if (m % 2 == 0)
      CHECK(inner_product(p, p) == doctest::Approx(2.0 / (2 * m + 1)).epsilon(1e-13));
    const auto one = PiecewisePolynomial::single({1.0});
    CHECK(inner_product(p, one) == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("markov_constant closed forms") {
  CHECK(markov_constant(1, 0, -1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(markov_constant(1, 0, 0.37) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(markov_constant(2, 1, -0.4) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK(markov_constant(2, 0, -1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  // M_t^2 = 1/2 + (3/2) t^2 for r=2, k=0
  CHECK(markov_constant(2, 0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(markov_constant(2, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(markov_constant(1, 1, 0.0), std::invalid_argument);
}

TEST_CASE("markov_constant r=2 k=0 t=-1 matches brute-force maximization") {
  // max |Q(-1)| / ||Q||_2 over random quadratics... degree r-1 = 1 here, so
  // use r=3, k=0 at t=-1 and compare with random search over P_2.
  const double M = markov_constant(3, 0, -1.0);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double best = 0.0;
  for (int it = 0; it < 20000; ++it) {
    const double a = unif(rng), b = unif(rng), c = unif(rng);
    const auto q = PiecewisePolynomial::single({a, b, c});
    const double val = std::abs(q(-1.0)) / l2_norm(q);
    best = std::max(best, val);
  }
  CHECK(best <= M * (1.0 + 1e-12));
  CHECK(best >= M * 0.999);  // random search gets close
}

TEST_CASE("markov_constant symmetry and endpoint supremum") {
  for (int r = 1; r <= 6; ++r) {
    for (int k = 0; k < r; ++k) {
      const double Mend = markov_constant(r, k, -1.0);
      double sup = 0.0, arg = -2.0;
      for (int i = 0; i <= 1000; ++i) {
        const double t = -1.0 + 2.0 * i / 1000.0;
        const double m = markov_constant(r, k, t);
        const double msym = markov_constant(r, k, -t);
        CHECK(m == doctest::Approx(msym).epsilon(1e-11));
        if (m > sup) {
          sup = m;
          arg = t;
        }
      }
      CHECK(sup <= Mend * (1.0 + 1e-12));
      CHECK(std::abs(arg) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("u0_endpoint r=1 k=0 closed form") {
  const auto u0 = u0_endpoint(1, 0);
  CHECK(u0(-1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(u0(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(u0(0.0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(l2_norm(u0.derivative(1)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(l2_norm(u0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("u0_endpoint boundary residuals and markov identity") {
  for (int r = 1; r <= 8; ++r) {
    for (int k = 0; k < r; ++k) {
      const auto u0 = u0_endpoint(r, k);
      CHECK(u0_defect(u0, r, k) <= 1e-12);
      CHECK(l2_norm(u0.derivative(r)) ==
            doctest::Approx(markov_constant(r, k, -1.0)).epsilon(1e-11));
    }
  }
}

TEST_CASE("u0_interior residuals, markov identity, r-th derivative global") {
  for (int r = 1; r <= 6; ++r) {
    for (int k = 0; k < r; ++k) {
      for (const double t : {-0.8, -0.3, 0.0, 0.55}) {
        const auto u0 = u0_interior(r, k, t);
        CHECK(u0_defect(u0, r, k, t) <= 1e-11);
        CHECK(l2_norm(u0.derivative(r)) ==
              doctest::Approx(markov_constant(r, k, t)).epsilon(1e-10));
        // u0^(s) has zero jump at t for all s >= r-k (jump data vanishes
        // except at s = r-k-1); in particular u0^(r) is one global polynomial
        for (int s = r - k; s <= 2 * r - 1; ++s) {
          const auto d = u0.derivative(s);
          const double right = d.eval(t, Side::right), left = d.eval(t, Side::left);
          const double scale = std::max({1.0, std::abs(right), std::abs(left)});
          CHECK(std::abs(right - left) <= 1e-9 * scale);
        }
      }
    }
  }
}

TEST_CASE("u0_interior examples") {
  // r=2, k=1, t=0: ||u0^(2)|| = sqrt(3/2); r=2, k=0, t=0: 1/sqrt(2)
  CHECK(l2_norm(u0_interior(2, 1, 0.0).derivative(2)) ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(l2_norm(u0_interior(2, 0, 0.0).derivative(2)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(u0_interior(2, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(u0_interior(2, 0, -1.0), std::invalid_argument);
}

TEST_CASE("orthonormal basis is orthonormal") {
  const OrthonormalPolyBasis basis(12);
  const QuadRule& rule = gauss_legendre(16);
  for (int i = 0; i < 12; ++i) {
    for (int j = i; j < 12; ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.x.size(); ++q)
        acc += rule.w[q] * basis.eval(i, 0, rule.x[q]) * basis.eval(j, 0, rule.x[q]);
      CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("one-sided evaluation at interior breakpoints") {
  const auto u0 = u0_interior(1, 0, 0.0);
  // jump of u at t=0 must be (-1)^(k-1) = -1
  const double jump = u0.eval(0.0, Side::right) - u0.eval(0.0, Side::left);
  CHECK(jump == doctest::Approx(-1.0).epsilon(1e-13));
}
