#include "quadmod/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace quadmod {

namespace {

double seg_seg_distance(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const double scale = std::max({std::abs(cx(p2) - cx(p1)), std::abs(cx(q2) - cx(q1)), 1.0});
  if (segments_cross(p1, p2, q1, q2, 1e-14 * scale * scale)) return 0.0;
  return std::min({point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2),
                   point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)});
}

}  // namespace

TrapezoidSpec::TrapezoidSpec(double a, double b, double g, double d)
    : alpha(a), beta(b), gamma(g), delta(d) {
  if (!(alpha < beta) || !(gamma > delta))
    fail(Errc::InvalidConfig, "trapezoid spec needs alpha < beta and gamma > delta");
  validate(quad());
}

Quadrilateral TrapezoidSpec::quad() const {
  return make_quad({1.0, alpha}, {1.0, beta}, {0.0, gamma}, {0.0, delta});
}

WeightedFamily::WeightedFamily(std::vector<TrapezoidSpec> s, std::vector<double> w)
    : specs(std::move(s)), weights(std::move(w)) {
  if (specs.empty() || specs.size() != weights.size())
    fail(Errc::InvalidConfig, "family needs one positive weight per spec");
  double sum = 0.0;
  for (double wk : weights) {
    if (!(wk > 0.0)) fail(Errc::InvalidConfig, "weights must be positive");
    sum += wk;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail(Errc::InvalidConfig, "weights must sum to one");
}

RaySideSpec::RaySideSpec(double phi_, double r1_, double r2_) : phi(phi_), r1(r1_), r2(r2_) {
  if (!(phi > 0.0 && phi < std::numbers::pi / 2))
    fail(Errc::OutOfRange, "phi must lie in (0, pi/2)");
  if (!(1.0 / std::cos(phi) < r1) || !(r1 <= r2))
    fail(Errc::OutOfRange, "need 1/cos(phi) < r1 <= r2");
}

double RaySideSpec::reflected(double r) const { return 1.0 / (2.0 * std::cos(phi) - 1.0 / r); }

double RaySideSpec::r_lo() const { return 1.0 / (2.0 * std::cos(phi) - 1.0 / r1); }

Quadrilateral polarize(const Quadrilateral& q) {
  const PolarizationFrame f = polarization_admissible(q);
  auto reflect = [&](Point2 p) { return from_frame(f, std::conj(to_frame(f, p))); };
  return validate({q.a, reflect(q.c), reflect(q.b), q.d});
}

TrapezoidSpec symmetrize_lambda(const TrapezoidSpec& s, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail(Errc::OutOfRange, "lambda must lie in [0,1]");
  const double ab = 0.5 * lambda * (s.alpha + s.beta);
  const double gd = 0.5 * lambda * (s.gamma + s.delta);
  return {s.alpha - ab, s.beta - ab, s.gamma - gd, s.delta - gd};
}

TrapezoidSpec average(const WeightedFamily& f) {
  double a = 0.0, b = 0.0, g = 0.0, d = 0.0;
  for (size_t k = 0; k < f.specs.size(); ++k) {
    a += f.weights[k] * f.specs[k].alpha;
    b += f.weights[k] * f.specs[k].beta;
    g += f.weights[k] * f.specs[k].gamma;
    d += f.weights[k] * f.specs[k].delta;
  }
  return {a, b, g, d};
}

Quadrilateral q1_quad(double y, double beta, double gamma) {
  if (!(gamma > 0.0 && gamma <= beta)) fail(Errc::OutOfRange, "need 0 < gamma <= beta");
  const double scale = std::max(beta, gamma);
  if (std::abs(y + gamma) <= 1e-12 * scale)
    fail(Errc::Degenerate, "vertices c and d collide at y = -gamma");
  if (!(y > -gamma && y < beta)) fail(Errc::OutOfRange, "y must lie in (-gamma, beta)");
  return make_quad({1.0, y}, {1.0, beta}, {0.0, gamma}, {0.0, -y});
}

Quadrilateral q2_quad(double r, const RaySideSpec& s) {
  if (!(r > s.r_lo() && r < s.r_hi()))
    fail(Errc::OutOfRange, "radius outside the admissible rotation interval");
  const double rstar = s.reflected(r);
  return validate(make_quad(std::polar(r, -s.phi), std::polar(s.r2, -s.phi),
                            std::polar(s.r1, s.phi), std::polar(rstar, s.phi)));
}

Quadrilateral notch_quad(double M, double phi, double h) {
  if (!(M > 0.0)) fail(Errc::OutOfRange, "aspect M must be positive");
  if (!(phi > 0.0 && phi <= std::numbers::pi / 2))
    fail(Errc::OutOfRange, "phi must lie in (0, pi/2]");
  if (!(h >= 0.0 && h < 0.5 * std::min(M, 1.0)))
    fail(Errc::OutOfRange, "notch depth too large for the rectangle");
  return validate(make_quad({M, 0.0}, {M, 1.0}, Complex{0.0, 1.0}, std::polar(h, phi)));
}

Quadrilateral g_quad(double t, double h, double k) {
  if (!(h > 0.0 && k > 0.0)) fail(Errc::OutOfRange, "plate half-lengths must be positive");
  return make_quad({1.0, t + 2.0 * k}, {0.0, h}, {0.0, -h}, {1.0, t});
}

std::pair<Quadrilateral, Quadrilateral> op63_pair(Point2 a, Point2 b, Op63Variant variant) {
  if (!(a.y > 0.0) || !(b.y > 0.0))
    fail(Errc::InvalidConfig, "both points must lie above the real axis");
  if (!(std::arg(cx(b)) > std::arg(cx(a)))) fail(Errc::InvalidConfig, "need arg b > arg a");
  Quadrilateral q = make_quad(cx(a), cx(b), {0.0, 0.0}, {1.0, 0.0});
  try {
    validate(q);
  } catch (const Error& e) {
    fail(Errc::InvalidConfig, std::string("(a,b,0,1) is not a quadrilateral: ") + e.what());
  }
  const double h = 0.5 * std::abs(cx(b));
  const double k = 0.5 * std::abs(cx(a) - 1.0);
  double t;
  if (variant == Op63Variant::EqualArea) {
    t = area(q) / (h + k);
  } else {
    t = seg_seg_distance({0, 0}, b, {1, 0}, a);
    if (!(t > 0.0)) fail(Errc::InvalidConfig, "segments [0,b] and [1,a] intersect");
  }
  Quadrilateral cmp = make_quad({t, k}, {0.0, h}, {0.0, -h}, {t, -k});
  return {q, validate(cmp)};
}

std::array<Quadrilateral, 3> op65_triple(double alpha, double beta, double r, double s) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi && beta > 0.0 && beta < std::numbers::pi))
    fail(Errc::InvalidConfig, "angles must lie in (0, pi)");
  if (!(r > 0.0 && s > 0.0)) fail(Errc::InvalidConfig, "radii must be positive");
  const Complex A = 1.0 + std::polar(r, alpha);
  const Complex B = std::polar(s, beta);
  if (!(std::arg(B) > std::arg(A))) fail(Errc::InvalidConfig, "need arg B > arg A");
  std::array<Quadrilateral, 3> out{make_quad(A, B, 0.0, 1.0), make_quad(A, A - 1.0, 0.0, 1.0),
                                   make_quad(A, B, 0.0, A - B)};
  for (const auto& q : out) {
    try {
      validate(q);
    } catch (const Error& e) {
      fail(Errc::InvalidConfig, std::string("comparison polygon invalid: ") + e.what());
    }
  }
  return out;
}

std::vector<Quadrilateral> remark2_chain(const TrapezoidSpec& s) {
  std::vector<Quadrilateral> chain;
  chain.push_back(s.quad());
  const TrapezoidSpec sym = symmetrize_lambda(s, 1.0);
  chain.push_back(sym.quad());

  const double b1 = 0.5 * (s.beta - s.alpha);
  const double g1 = 0.5 * (s.gamma - s.delta);
  TrapezoidSpec par = sym;
  if (std::abs(b1 - g1) > 1e-12 * std::max(b1, g1)) {
    const Quadrilateral pq = polarize(sym.quad());
    // the polarized parallelogram is again in trapezoid position
    par = TrapezoidSpec{pq.a.y, pq.b.y, pq.c.y, pq.d.y};
  }
  chain.push_back(par.quad());
  chain.push_back(symmetrize_lambda(par, 1.0).quad());
  return chain;
}

}  // namespace quadmod
