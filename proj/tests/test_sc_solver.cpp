#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "quadmod/sc_solver.hpp"
#include "quadmod/special_functions.hpp"

using namespace quadmod;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<Errc>(-1);
}

Quadrilateral rectangle_labeled(double m) {
  return make_quad({m, 0}, {m, 1}, {0, 1}, {0, 0});
}

// Independent oracle: invert the strictly decreasing cross-ratio -> modulus
// map by bisection.
double crossratio_for_modulus(double m) {
  double lo = 1.0 + 1e-14, hi = 1e14;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (modulus_from_crossratio(mid) > m)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

struct QuadSampler {
  std::mt19937_64 eng;
  explicit QuadSampler(uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) {
    const double u = (eng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  Quadrilateral convex() {
    for (;;) {
      std::array<Point2, 4> p;
      for (auto& v : p) v = {uniform(0, 1), uniform(0, 1)};
      Point2 c{0, 0};
      for (auto& v : p) {
        c.x += v.x / 4;
        c.y += v.y / 4;
      }
      std::sort(p.begin(), p.end(), [&](Point2 u, Point2 v) {
        return std::atan2(u.y - c.y, u.x - c.x) < std::atan2(v.y - c.y, v.x - c.x);
      });
      Quadrilateral q{p[0], p[1], p[2], p[3]};
      try {
        validate(q);
      } catch (const Error&) {
        continue;
      }
      if (!is_convex(q)) continue;
      const auto ang = interior_angles(q);
      if (*std::min_element(ang.begin(), ang.end()) < 0.35) continue;
      return q;
    }
  }
};

}  // namespace

TEST_CASE("side integrals: square symmetry and tail finiteness") {
  const std::array<double, 4> sq{0.5, 0.5, 0.5, 0.5};
  const double i_ab = side_integral(sq, 2.0, PrevertexInterval::AB);
  const double i_bc = side_integral(sq, 2.0, PrevertexInterval::BC);
  CHECK(i_ab == doctest::Approx(i_bc).epsilon(1e-13));
  const double i_cd = side_integral(sq, 2.0, PrevertexInterval::CD);
  CHECK(std::isfinite(i_cd));
  CHECK(i_cd > 0.0);
  CHECK(i_cd == doctest::Approx(i_ab).epsilon(1e-13));  // all sides equal for the square
}

TEST_CASE("side integrals: doubling the rule leaves the value unchanged") {
  const std::array<double, 4> a{0.62, 0.41, 0.55, 0.42};
  for (auto which : {PrevertexInterval::AB, PrevertexInterval::BC, PrevertexInterval::CD}) {
    const double v24 = side_integral(a, 3.7, which, 24);
    const double v48 = side_integral(a, 3.7, which, 48);
    CHECK(std::abs(v48 - v24) <= 1e-12 * std::abs(v48));
  }
}

TEST_CASE("side integrals reject corrupted exponents") {
  CHECK(code_of([] {
          side_integral({0.0, 1.0, 0.5, 0.5}, 2.0, PrevertexInterval::AB);
        }) == Errc::NonIntegrable);
}

TEST_CASE("side-ratio function is strictly monotone in the prevertex") {
  const std::array<double, 4> a{0.62, 0.41, 0.55, 0.42};
  double prev = -1.0;
  for (double s = -6.0; s <= 6.0; s += 0.5) {
    const double x3 = 1.0 + std::exp(s);
    const double r = side_integral(a, x3, PrevertexInterval::BC) /
                     side_integral(a, x3, PrevertexInterval::AB);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("prevertex solve: unit square") {
  const auto sol = solve_prevertex(make_quad({0, 0}, {1, 0}, {1, 1}, {0, 1}));
  CHECK(sol.x3 == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sol.modulus == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.closure_residual < 1e-10);
}

TEST_CASE("prevertex solve: modulus-2 rectangle matches the inverted map") {
  const auto sol = solve_prevertex(make_quad({2, 0}, {2, 1}, {0, 1}, {0, 0}));
  CHECK(sol.modulus == doctest::Approx(2.0).epsilon(1e-8));
  const double cr = crossratio_for_modulus(2.0);
  CHECK(sol.x3 == doctest::Approx(cr / (cr - 1.0)).epsilon(1e-6));
}

TEST_CASE("prevertex solve: diagonal-symmetric kite has modulus one") {
  const auto sol = solve_prevertex(make_quad({0, 0}, {1, -1}, {3, 0}, {1, 1}));
  CHECK(sol.modulus == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("modulus_sc: rectangles across the aspect range") {
  for (double m : {0.5, 1.0, 2.0, 5.0}) {
    const auto est = modulus_sc(rectangle_labeled(m));
    CHECK(est.value == doctest::Approx(m).epsilon(1e-9));
    CHECK(est.err < 1e-9);
    CHECK(est.method == Method::SC);
  }
}

TEST_CASE("modulus_sc: similarity invariance") {
  const auto q = make_quad({0, 0}, {2, 0}, {2.4, 1.5}, {-0.2, 1.2});
  const double m0 = modulus_sc(q).value;
  const Complex p = 3.0 * std::polar(1.0, std::numbers::pi / 7);
  const Complex t{2.0, -1.0};
  const auto qm = make_quad(cx(q.a) * p + t, cx(q.b) * p + t, cx(q.c) * p + t, cx(q.d) * p + t);
  CHECK(modulus_sc(qm).value == doctest::Approx(m0).epsilon(1e-10));
}

TEST_CASE("modulus_sc: reciprocal identity on seeded convex quadrilaterals") {
  QuadSampler sampler(20250810u);
  for (int i = 0; i < 20; ++i) {
    const auto q = sampler.convex();
    const double m = modulus_sc(q).value;
    const double mrot = modulus_sc(rotate_labels(q, 1)).value;
    CHECK(std::abs(m * mrot - 1.0) < 1e-8);
  }
}

TEST_CASE("modulus_sc: mirror law") {
  const auto q = make_quad({0, 0}, {2, 0}, {2.4, 1.5}, {-0.2, 1.2});
  const auto mirrored = make_quad(std::conj(cx(q.d)), std::conj(cx(q.c)), std::conj(cx(q.b)),
                                  std::conj(cx(q.a)));
  CHECK(modulus_sc(mirrored).value == doctest::Approx(modulus_sc(q).value).epsilon(1e-10));
}

TEST_CASE("modulus_sc: nonconvex quadrilateral still satisfies the reciprocal law") {
  const auto q = make_quad({0, 0}, {3, 0}, {3, 3}, {1, 0.5});
  const double m = modulus_sc(q).value;
  const double mrot = modulus_sc(rotate_labels(q, 1)).value;
  CHECK(std::abs(m * mrot - 1.0) < 1e-8);
}

TEST_CASE("solver reports unreachable side ratios") {
  CHECK(code_of([] { solve_prevertex(rectangle_labeled(20.0)); }) == Errc::NoBracket);
}
