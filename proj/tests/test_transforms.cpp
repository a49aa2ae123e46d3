#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "quadmod/sc_solver.hpp"
#include "quadmod/transforms.hpp"

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

void check_same(const Quadrilateral& got, const Quadrilateral& want, double eps = 1e-12) {
  for (int i = 0; i < 4; ++i) {
    CHECK(got.vertex(i).x == doctest::Approx(want.vertex(i).x).epsilon(eps));
    CHECK(got.vertex(i).y == doctest::Approx(want.vertex(i).y).epsilon(eps));
  }
}

}  // namespace

TEST_CASE("polarize: horizontal mirror lines") {
  const auto q = make_quad({-2, -1}, {2, -1}, {1, 1}, {-1, 1});
  check_same(polarize(q), make_quad({-2, -1}, {1, -1}, {2, 1}, {-1, 1}));
  CHECK(area(polarize(q)) == doctest::Approx(area(q)).epsilon(1e-13));
}

TEST_CASE("polarize: vertical mirror lines give a parallelogram") {
  const auto q = make_quad({1, -1}, {1, 1}, {0, 2}, {0, -2});
  check_same(polarize(q), make_quad({1, -1}, {1, 2}, {0, 1}, {0, -2}));
}

TEST_CASE("polarize: the unit square is rejected") {
  CHECK(code_of([] { polarize(make_quad({0, 0}, {1, 0}, {1, 1}, {0, 1})); }) ==
        Errc::NotAdmissible);
}

TEST_CASE("polarize: preserves the reflected-vertex distance multiset") {
  const auto q = make_quad({-2, -1}, {2, -1}, {1, 1}, {-1, 1});
  const auto p = polarize(q);
  // b and c trade mirror images, a and d stay put
  CHECK(p.a.y == doctest::Approx(q.a.y));
  CHECK(p.d.y == doctest::Approx(q.d.y));
  CHECK(p.b.y == doctest::Approx(-q.c.y));
  CHECK(p.c.y == doctest::Approx(-q.b.y));
}

TEST_CASE("polarize strictly decreases the modulus on admissible input") {
  const auto q = make_quad({-2, -1}, {2, -1}, {1, 1}, {-1, 1});
  CHECK(modulus_sc(polarize(q)).value < modulus_sc(q).value - 1e-6);
}

TEST_CASE("symmetrize_lambda: endpoint, identity, midpoint") {
  const TrapezoidSpec s{0, 2, 3, 1};
  const auto s1 = symmetrize_lambda(s, 1.0);
  CHECK(s1.alpha == doctest::Approx(-1.0));
  CHECK(s1.beta == doctest::Approx(1.0));
  CHECK(s1.gamma == doctest::Approx(1.0));
  CHECK(s1.delta == doctest::Approx(-1.0));
  const auto s0 = symmetrize_lambda(s, 0.0);
  CHECK(s0.alpha == doctest::Approx(0.0));
  CHECK(s0.beta == doctest::Approx(2.0));
  const auto sh = symmetrize_lambda(s, 0.5);
  CHECK(sh.alpha == doctest::Approx(-0.5));
  CHECK(sh.beta == doctest::Approx(1.5));
  CHECK(sh.gamma == doctest::Approx(2.0));
  CHECK(sh.delta == doctest::Approx(0.0));
}

TEST_CASE("symmetrize_lambda keeps both vertical side lengths") {
  const TrapezoidSpec s{-0.3, 1.7, 2.2, -0.4};
  for (double l : {0.1, 0.35, 0.8, 1.0}) {
    const auto sl = symmetrize_lambda(s, l);
    CHECK(sl.beta - sl.alpha == doctest::Approx(s.beta - s.alpha).epsilon(1e-14));
    CHECK(sl.gamma - sl.delta == doctest::Approx(s.gamma - s.delta).epsilon(1e-14));
    CHECK(area(sl.quad()) == doctest::Approx(area(s.quad())).epsilon(1e-13));
  }
}

TEST_CASE("average: identity and the two-member example") {
  const TrapezoidSpec s{0, 2, 3, 1};
  const auto one = average(WeightedFamily{{s}, {1.0}});
  CHECK(one.alpha == doctest::Approx(0.0));
  CHECK(one.gamma == doctest::Approx(3.0));

  const auto m = average(WeightedFamily{{TrapezoidSpec{0, 2, 3, 1}, TrapezoidSpec{-1, 1, 2, 0}},
                                        {0.5, 0.5}});
  CHECK(m.alpha == doctest::Approx(-0.5));
  CHECK(m.beta == doctest::Approx(1.5));
  CHECK(m.gamma == doctest::Approx(2.5));
  CHECK(m.delta == doctest::Approx(0.5));
}

TEST_CASE("average rejects non-positive weights") {
  CHECK(code_of([] {
          WeightedFamily({TrapezoidSpec{0, 2, 3, 1}, TrapezoidSpec{-1, 1, 2, 0}}, {1.0, 0.0});
        }) == Errc::InvalidConfig);
}

TEST_CASE("q1 family: coordinates and range errors") {
  check_same(q1_quad(-0.5, 1, 1), make_quad({1, -0.5}, {1, 1}, {0, 1}, {0, 0.5}));
  check_same(q1_quad(0.0, 1.5, 1), make_quad({1, 0}, {1, 1.5}, {0, 1}, {0, 0}));
  CHECK(code_of([] { q1_quad(-1.0, 1, 1); }) == Errc::Degenerate);
  CHECK(code_of([] { q1_quad(1.2, 1, 1); }) == Errc::OutOfRange);
  CHECK(code_of([] { q1_quad(0.0, 1, 2); }) == Errc::OutOfRange);
}

TEST_CASE("q2 family: fixed point, pairing, involution") {
  const RaySideSpec s{pi / 4, 1.5, 2.0};
  const double rfix = 1.0 / std::cos(pi / 4);
  CHECK(s.reflected(rfix) == doctest::Approx(rfix).epsilon(1e-14));
  CHECK(s.reflected(1.45) == doctest::Approx(1.0 / (std::sqrt(2.0) - 1.0 / 1.45)).epsilon(1e-14));
  for (double r : {1.35, 1.40, 1.45}) {
    CHECK(s.reflected(s.reflected(r)) == doctest::Approx(r).epsilon(1e-12));
    CHECK_NOTHROW(q2_quad(r, s));
  }
  const auto q = q2_quad(rfix, s);
  CHECK(q.a.y == doctest::Approx(-q.d.y));  // symmetric about the axis at the fixed point
  CHECK(code_of([&] { q2_quad(3.0, s); }) == Errc::OutOfRange);
  CHECK(code_of([&] { q2_quad(s.r_lo(), s); }) == Errc::OutOfRange);
}

TEST_CASE("notch family: rectangle limit and depth guard") {
  const auto rect = notch_quad(2.0, pi / 3, 0.0);
  check_same(rect, make_quad({2, 0}, {2, 1}, {0, 1}, {0, 0}));
  CHECK(modulus_sc(rect).value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_NOTHROW(notch_quad(2.0, pi / 3, 0.01));
  CHECK(code_of([] { notch_quad(1.0, pi / 4, 10.0); }) == Errc::OutOfRange);
}

TEST_CASE("g family: coordinates, symmetry at t = -k, area") {
  check_same(g_quad(0.0, 1, 1), make_quad({1, 2}, {0, 1}, {0, -1}, {1, 0}));
  const auto sym = g_quad(-0.7, 1.3, 0.7);
  CHECK(sym.a.y == doctest::Approx(-sym.d.y));
  CHECK(sym.b.y == doctest::Approx(-sym.c.y));
  for (auto [t, h, k] : {std::tuple{0.4, 0.8, 1.1}, {-2.0, 0.5, 0.25}}) {
    CHECK(area(g_quad(t, h, k)) == doctest::Approx(h + k).epsilon(1e-13));
  }
}

TEST_CASE("op63 pair: worked equal-area example") {
  const auto [q, cmp] = op63_pair({1, 1}, {0, 1}, Op63Variant::EqualArea);
  CHECK(area(q) == doctest::Approx(1.0).epsilon(1e-14));
  check_same(cmp, make_quad({1, 0.5}, {0, 0.5}, {0, -0.5}, {1, -0.5}));
  CHECK(area(cmp) == doctest::Approx(area(q)).epsilon(1e-13));
}

TEST_CASE("op63 pair: distance variant and error paths") {
  const auto [q, cmp] = op63_pair({1.2, 1.5}, {-0.3, 0.8}, Op63Variant::SegmentDistance);
  CHECK(cmp.a.x > 0.0);
  CHECK(code_of([] { op63_pair({1, -1}, {0, 1}, Op63Variant::EqualArea); }) ==
        Errc::InvalidConfig);
  // crossing segments make the distance variant degenerate
  CHECK(code_of([] { op63_pair({-0.5, 0.5}, {2.0, 0.5}, Op63Variant::SegmentDistance); }) ==
        Errc::InvalidConfig);
}

TEST_CASE("op65 triple: construction and parallelogram structure") {
  const auto [q, q1, q3] = op65_triple(pi / 3, 2 * pi / 3, 1.0, 1.0);
  const Complex A = 1.0 + std::polar(1.0, pi / 3);
  const Complex B = std::polar(1.0, 2 * pi / 3);
  CHECK(std::abs(cx(q1.a) - A) < 1e-14);
  // opposite side vectors coincide
  for (const auto& p : {q1, q3}) {
    const Complex s1 = cx(p.b) - cx(p.a);
    const Complex s2 = cx(p.c) - cx(p.d);
    CHECK(std::abs(s1 - s2) < 1e-12);
  }
  CHECK(std::abs(cx(q1.a) - cx(q1.b) - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(std::abs(cx(q3.a) - cx(q3.b)) - std::abs(A - B)) < 1e-14);
  CHECK(code_of([] { op65_triple(2.0, 1.0, 1.0, 1.0); }) == Errc::InvalidConfig);
}

TEST_CASE("remark2 chain: areas, final rectangle, monotone moduli") {
  const TrapezoidSpec s{0, 2, 3, 1};
  const auto chain = remark2_chain(s);
  REQUIRE(chain.size() == 4);
  for (const auto& q : chain) CHECK(area(q) == doctest::Approx(2.0).epsilon(1e-13));
  check_same(chain.back(), make_quad({1, -1}, {1, 1}, {0, 1}, {0, -1}));
  double prev = 1e300;
  for (const auto& q : chain) {
    const double m = modulus_sc(q).value;
    CHECK(m <= prev + 1e-9);
    prev = m;
  }
  CHECK(modulus_sc(chain.back()).value == doctest::Approx(1.0 / 2.0).epsilon(1e-9));
}

TEST_CASE("remark2 chain: symmetric input is a fixed point") {
  const TrapezoidSpec s{-1, 1, 1, -1};
  const auto chain = remark2_chain(s);
  for (const auto& q : chain) check_same(q, s.quad());
}

TEST_CASE("remark2 chain: longer left side exercises the swapped ordering") {
  const TrapezoidSpec s{0, 1, 4, 0};
  const auto chain = remark2_chain(s);
  const double a0 = area(chain.front());
  for (const auto& q : chain) CHECK(area(q) == doctest::Approx(a0).epsilon(1e-12));
  double prev = 1e300;
  for (const auto& q : chain) {
    const double m = modulus_sc(q).value;
    CHECK(m <= prev + 1e-9);
    prev = m;
  }
  CHECK(modulus_sc(chain.back()).value == doctest::Approx(1.0 / a0).epsilon(1e-8));
}
