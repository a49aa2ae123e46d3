#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "quadmod/special_functions.hpp"

using namespace quadmod;
using std::numbers::pi;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<Errc>(-1);
}

// Independent oracle: Gauss hypergeometric series K(k) = (pi/2) 2F1(1/2,1/2;1;k^2).
double ell_K_series(double k) {
  const double m = k * k;
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 4000; ++n) {
    const double c = (2.0 * n - 1.0) / (2.0 * n);
    term *= c * c * m;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return 0.5 * pi * sum;
}

// Independent oracle: I_m = int_{-1}^{1} (1-t)^a (1+t)^b t^m dt. I_0 is a Beta
// value and integrating d/dt[t^m (1-t^2) w(t)] = 0 gives the stable recurrence
// I_{m+1} = (m I_{m-1} + (b-a) I_m) / (m + a + b + 2).
double jacobi_moment(double a, double b, int m) {
  auto lbeta = [](double x, double y) {
    return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
  };
  double prev = std::exp2(a + b + 1.0) * std::exp(lbeta(a + 1.0, b + 1.0));
  if (m == 0) return prev;
  double cur = (b - a) / (a + b + 2.0) * prev;
  for (int j = 1; j < m; ++j) {
    const double next = (j * prev + (b - a) * cur) / (j + a + b + 2.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double apply_rule(const QuadratureRule& r, const std::function<double(double)>& f) {
  double s = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

}  // namespace

TEST_CASE("ell_K: exact endpoint, lemniscatic value, series cross-check") {
  CHECK(ell_K(0.0) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(ell_K(1.0 / std::sqrt(2.0)) == doctest::Approx(1.8540746773013719).epsilon(1e-13));
  for (double k : {0.1, 0.3, 0.5, 0.7, 0.85, 0.9}) {
    CHECK(ell_K(k) == doctest::Approx(ell_K_series(k)).epsilon(1e-14));
  }
  CHECK(std::isfinite(ell_K(0.999999)));
  CHECK(ell_K(0.999999) > 7.0);
  CHECK(code_of([] { ell_K(1.0); }) == Errc::OutOfRange);
}

TEST_CASE("ell_K: Legendre consistency at the lemniscatic point") {
  const double k = 1.0 / std::sqrt(2.0);
  CHECK(ell_K(k) == doctest::Approx(ell_K(std::sqrt(1.0 - k * k))).epsilon(1e-13));
}

TEST_CASE("elliptic pair keeps k^2 + k'^2 = 1 and rejects mismatches") {
  const auto p = elliptic_from_crossratio(7.3);
  CHECK(p.k * p.k + p.kprime * p.kprime == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_NOTHROW(EllipticParam::from_pair(p.k, p.kprime));
  CHECK(code_of([] { EllipticParam::from_pair(0.5, 0.5); }) == Errc::InvalidConfig);
}

TEST_CASE("cross-ratio: limit formula, algebraic identity, degenerate input") {
  CHECK(cross_ratio(0.0, 1.0, 2.0, CRPoint::infinity()) == doctest::Approx(2.0).epsilon(1e-15));
  const double k = 0.5;
  CHECK(cross_ratio(-1.0, 1.0, 1.0 / k, -1.0 / k) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(cross_ratio(0.0, 1.0, 10.0, CRPoint::infinity()) ==
        doctest::Approx(10.0 / 9.0).epsilon(1e-15));
  CHECK(code_of([] { cross_ratio(0.0, 0.0, 1.0, 2.0); }) == Errc::Degenerate);
}

TEST_CASE("modulus from cross-ratio: symmetric point, derived half, limits") {
  CHECK(modulus_from_crossratio(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  const double cr_half = std::pow(std::sqrt(2.0) + 1.0, 4.0);
  // at k = 1/sqrt(2) the two complete integrals agree, forcing modulus 1/2
  CHECK(elliptic_from_crossratio(cr_half).k ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(modulus_from_crossratio(cr_half) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(modulus_from_crossratio(1.0 + 1e-9) > 5.0);
  CHECK(modulus_from_crossratio(1e12) < 0.15);
  CHECK(code_of([] { modulus_from_crossratio(1.0); }) == Errc::OutOfRange);
}

TEST_CASE("modulus from cross-ratio: reciprocal law under label rotation") {
  for (double x : {1.5, 2.0, 3.0, 10.0, 120.0}) {
    const double m = modulus_from_crossratio(cross_ratio(0.0, 1.0, x, CRPoint::infinity()));
    const double mrot = modulus_from_crossratio(cross_ratio(1.0, x, CRPoint::infinity(), 0.0));
    CHECK(m * mrot == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("modulus from cross-ratio is strictly decreasing") {
  double prev = modulus_from_crossratio(1.0 + 1e-6);
  for (double lg = -5.0; lg <= 12.0; lg += 0.25) {
    const double cur = modulus_from_crossratio(1.0 + std::pow(10.0, lg));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("gauss-jacobi: midpoint rule, singular-weight moments, positivity") {
  const auto mid = gauss_jacobi_rule(1, 0.0, 0.0);
  REQUIRE(mid.nodes.size() == 1);
  CHECK(mid.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(mid.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

  const auto r = gauss_jacobi_rule(5, -0.5, 0.0);
  for (int m = 0; m <= 9; ++m) {
    const double got = apply_rule(r, [m](double t) { return std::pow(t, m); });
    CHECK(got == doctest::Approx(jacobi_moment(-0.5, 0.0, m)).epsilon(1e-12));
  }

  for (auto [n, a, b] : {std::tuple{8, -0.7, 0.4}, {16, 0.33, -0.9}, {24, -0.5, -0.5}}) {
    const auto rule = gauss_jacobi_rule(n, a, b);
    for (double w : rule.weights) CHECK(w > 0.0);
    for (double t : rule.nodes) CHECK((t > -1.0 && t < 1.0));
    for (int m = 0; m <= 2 * n - 1; m += std::max(1, n / 3)) {
      const double got = apply_rule(rule, [m](double t) { return std::pow(t, m); });
      CHECK(got == doctest::Approx(jacobi_moment(a, b, m)).epsilon(5e-12));
    }
  }
  CHECK(code_of([] { gauss_jacobi_rule(4, -1.0, 0.0); }) == Errc::OutOfRange);
}
