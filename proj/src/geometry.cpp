#include "quadmod/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace quadmod {

namespace {

constexpr double kGeomTol = 1e-12;

double sub_cross(Point2 o, Point2 p, Point2 q) {
  return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x);
}

std::string fmt_point(Point2 p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

}  // namespace

const char* to_string(SideLabel s) {
  switch (s) {
    case SideLabel::AB: return "AB";
    case SideLabel::BC: return "BC";
    case SideLabel::CD: return "CD";
    case SideLabel::DA: return "DA";
  }
  return "?";
}

const char* to_string(MotionClass m) {
  switch (m) {
    case MotionClass::Increase: return "Increase";
    case MotionClass::Decrease: return "Decrease";
    case MotionClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

const char* to_string(Errc c) {
  switch (c) {
    case Errc::DegenerateVertices: return "DegenerateVertices";
    case Errc::SelfIntersecting: return "SelfIntersecting";
    case Errc::NegativeOrientation: return "NegativeOrientation";
    case Errc::InvalidTarget: return "InvalidTarget";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::Degenerate: return "Degenerate";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::NoBracket: return "NoBracket";
    case Errc::ClosureFailure: return "ClosureFailure";
    case Errc::NonIntegrable: return "NonIntegrable";
    case Errc::MeshFailure: return "MeshFailure";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::ToleranceNotReached: return "ToleranceNotReached";
    case Errc::UnknownCheck: return "UnknownCheck";
    case Errc::UnknownFamily: return "UnknownFamily";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "?";
}

Point2 Quadrilateral::vertex(int i) const {
  switch (((i % 4) + 4) % 4) {
    case 0: return a;
    case 1: return b;
    case 2: return c;
    default: return d;
  }
}

Quadrilateral make_quad(Complex a, Complex b, Complex c, Complex d) {
  return {pt(a), pt(b), pt(c), pt(d)};
}

Quadrilateral rotate_labels(const Quadrilateral& q, int k) {
  return {q.vertex(k), q.vertex(k + 1), q.vertex(k + 2), q.vertex(k + 3)};
}

double diameter(const Quadrilateral& q) {
  auto v = q.vertices();
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) d = std::max(d, std::abs(cx(v[i]) - cx(v[j])));
  return d;
}

double orient(Point2 a, Point2 b, Point2 c) { return sub_cross(a, b, c); }

bool is_convex(const Quadrilateral& q) {
  auto v = q.vertices();
  const double eps = kGeomTol * diameter(q) * diameter(q);
  for (int i = 0; i < 4; ++i)
    if (orient(v[i], v[(i + 1) % 4], v[(i + 2) % 4]) < -eps) return false;
  return true;
}

double point_segment_distance(Point2 p, Point2 u, Point2 v) {
  const Complex d = cx(v) - cx(u);
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(cx(p) - cx(u));
  double t = ((p.x - u.x) * d.real() + (p.y - u.y) * d.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(cx(p) - (cx(u) + t * d));
}

bool segments_cross(Point2 p1, Point2 p2, Point2 p3, Point2 p4, double eps) {
  auto snap = [eps](double v) { return std::abs(v) <= eps ? 0.0 : v; };
  const double d1 = snap(orient(p3, p4, p1));
  const double d2 = snap(orient(p3, p4, p2));
  const double d3 = snap(orient(p1, p2, p3));
  const double d4 = snap(orient(p1, p2, p4));
  return d1 * d2 < 0.0 && d3 * d4 < 0.0;
}

Quadrilateral validate(const Quadrilateral& q) {
  const auto v = q.vertices();
  const double scale = diameter(q);
  if (!(scale > 0.0) || !std::isfinite(scale))
    fail(Errc::DegenerateVertices, "quadrilateral vertices are not finite and distinct");
  const double eps_len = kGeomTol * scale;
  const double eps_area = kGeomTol * scale * scale;

  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(cx(v[i]) - cx(v[j])) <= eps_len)
        fail(Errc::DegenerateVertices,
             "vertices " + fmt_point(v[i]) + " and " + fmt_point(v[j]) + " coincide");

  // Non-adjacent edge pairs must not cross; no vertex may sit on a
  // non-incident edge (rules out touching and folded configurations).
  if (segments_cross(v[0], v[1], v[2], v[3], eps_area) ||
      segments_cross(v[1], v[2], v[3], v[0], eps_area))
    fail(Errc::SelfIntersecting, "boundary polyline crosses itself");
  for (int e = 0; e < 4; ++e) {
    const Point2 u = v[e];
    const Point2 w = v[(e + 1) % 4];
    for (int j = 0; j < 4; ++j) {
      if (j == e || j == (e + 1) % 4) continue;
      if (point_segment_distance(v[j], u, w) <= eps_len)
        fail(Errc::SelfIntersecting, "vertex " + fmt_point(v[j]) + " lies on a non-incident side");
    }
  }

  double shoelace = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2 p = v[i];
    const Point2 n = v[(i + 1) % 4];
    shoelace += p.x * n.y - n.x * p.y;
  }
  if (shoelace <= 0.0)
    fail(Errc::NegativeOrientation,
         "vertex order is negatively oriented; relabel as (d,c,b,a) if intended");
  return q;
}

std::array<double, 4> interior_angles(const Quadrilateral& q) {
  validate(q);
  std::array<double, 4> out{};
  const auto v = q.vertices();
  for (int i = 0; i < 4; ++i) {
    const Complex prev = cx(v[(i + 3) % 4]);
    const Complex next = cx(v[(i + 1) % 4]);
    const Complex here = cx(v[i]);
    double t = std::arg((prev - here) / (next - here));
    if (t <= 0.0) t += 2.0 * std::numbers::pi;
    out[i] = t;
  }
  return out;
}

double area(const Quadrilateral& q) {
  validate(q);
  const auto v = q.vertices();
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2 p = v[i];
    const Point2 n = v[(i + 1) % 4];
    s += p.x * n.y - n.x * p.y;
  }
  return 0.5 * s;
}

Location locate_point(const std::vector<Point2>& poly, Point2 p, double eps) {
  const int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i)
    if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= eps) return Location::Boundary;
  // even-odd crossing count with a horizontal ray
  bool inside = false;
  for (int i = 0; i < n; ++i) {
    const Point2 u = poly[i];
    const Point2 w = poly[(i + 1) % n];
    if ((u.y > p.y) != (w.y > p.y)) {
      const double xc = u.x + (p.y - u.y) / (w.y - u.y) * (w.x - u.x);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside ? Location::Inside : Location::Outside;
}

bool segment_in_polygon(const std::vector<Point2>& poly, Point2 u, Point2 w, double eps) {
  const int n = static_cast<int>(poly.size());
  if (locate_point(poly, u, eps) == Location::Outside) return false;
  if (locate_point(poly, w, eps) == Location::Outside) return false;
  const double eps_area = eps * std::abs(cx(w) - cx(u));
  for (int i = 0; i < n; ++i)
    if (segments_cross(u, w, poly[i], poly[(i + 1) % n], eps_area)) return false;
  // a boundary vertex strictly interior to (u,w) could hide an excursion
  for (int i = 0; i < n; ++i) {
    const Point2 vv = poly[i];
    if (std::abs(cx(vv) - cx(u)) <= eps || std::abs(cx(vv) - cx(w)) <= eps) continue;
    if (point_segment_distance(vv, u, w) <= eps) return false;
  }
  for (double t : {0.25, 0.5, 0.75}) {
    const Complex m = cx(u) + t * (cx(w) - cx(u));
    if (locate_point(poly, pt(m), eps) == Location::Outside) return false;
  }
  return true;
}

namespace {

bool on_open_segment(Point2 p, Point2 u, Point2 v, double eps) {
  if (point_segment_distance(p, u, v) > eps) return false;
  if (std::abs(cx(p) - cx(u)) <= eps || std::abs(cx(p) - cx(v)) <= eps) return false;
  return true;
}

// Closed convex wedge bounded by segment (p,q) on the outward side and the
// rays from p and q in directions dp, dq.
bool in_boundary_wedge(Point2 p, Point2 q, Complex dp, Complex dq, Point2 t, double eps_area) {
  const Complex pq = cx(q) - cx(p);
  const Complex tp = cx(t) - cx(p);
  const Complex tq = cx(t) - cx(q);
  auto xprod = [](Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); };
  if (xprod(pq, tp) > eps_area) return false;  // must be outward of the side
  const double sp = xprod(dp, pq);
  const double sq = xprod(dq, -pq);
  if (std::abs(sp) <= eps_area || std::abs(sq) <= eps_area) return false;  // degenerate wedge
  if (sp * xprod(dp, tp) < -eps_area) return false;
  if (sq * xprod(dq, tq) < -eps_area) return false;
  return true;
}

// Motion of the first vertex a of (a,b,c,d).
MotionClass classify_first(const Quadrilateral& q, Point2 t) {
  const Point2 A = q.a, B = q.b, C = q.c, D = q.d;
  const double scale = diameter(q);
  const double eps_len = kGeomTol * scale;
  const double eps_area = kGeomTol * scale * scale;
  const double eps_ang = 1e-9;
  const auto ang = interior_angles(q);
  const std::vector<Point2> poly{A, B, C, D};

  if (on_open_segment(t, A, B, eps_len)) {
    if (ang[0] <= std::numbers::pi + eps_ang && segment_in_polygon(poly, D, t, eps_len))
      return MotionClass::Increase;
    return MotionClass::Indeterminate;
  }
  if (on_open_segment(t, D, A, eps_len)) {
    if (ang[0] <= std::numbers::pi + eps_ang && segment_in_polygon(poly, B, t, eps_len))
      return MotionClass::Decrease;
    return MotionClass::Indeterminate;
  }
  if (is_convex(q)) {
    if (in_boundary_wedge(A, B, cx(A) - cx(D), cx(B) - cx(C), t, eps_area))
      return MotionClass::Increase;
    if (in_boundary_wedge(D, A, cx(D) - cx(C), cx(A) - cx(B), t, eps_area))
      return MotionClass::Decrease;
  }
  return MotionClass::Indeterminate;
}

}  // namespace

MotionClass classify_vertex_motion(const Quadrilateral& q, VertexName v, Point2 target) {
  validate(q);
  const double eps_len = kGeomTol * diameter(q);
  for (const Point2& p : q.vertices())
    if (std::abs(cx(p) - cx(target)) <= eps_len)
      fail(Errc::InvalidTarget, "target coincides with an existing vertex");
  const int k = static_cast<int>(v);
  const MotionClass m = classify_first(rotate_labels(q, k), target);
  if (k % 2 == 0 || m == MotionClass::Indeterminate) return m;
  // odd label rotation inverts the modulus, so the certified sign flips
  return m == MotionClass::Increase ? MotionClass::Decrease : MotionClass::Increase;
}

double tangency_phi0(double r, Point2 b) {
  if (!(r > 0.0 && r < 1.0)) fail(Errc::OutOfRange, "radius must lie in (0,1)");
  if (!(b.y > 0.0)) fail(Errc::OutOfRange, "Im b must be positive");
  if (!(b.x < 1.0 + r)) fail(Errc::OutOfRange, "Re b must be less than 1+r");
  const Complex w = cx(b) - 1.0;
  const double d = std::abs(w);
  if (!(d > r)) fail(Errc::OutOfRange, "b must lie outside the circle |z-1| = r");
  const double psi = std::arg(w);
  return psi - std::acos(r / d);
}

namespace {

struct PairLine {
  Complex point;  // a point on the line
  Complex dir;    // unit direction
};

PairLine line_through(Point2 u, Point2 v) {
  Complex d = cx(v) - cx(u);
  return {cx(u), d / std::abs(d)};
}

// Mirror structure and ordering hypotheses for the labeling as given.
// Returns false only when the ray/line structure itself is absent.
bool frame_for_labeling(const Quadrilateral& q, PolarizationFrame& f, std::string& why) {
  const Complex a = cx(q.a), b = cx(q.b), c = cx(q.c), d = cx(q.d);
  const double scale = diameter(q);
  const double eps_len = 1e-9 * scale;
  const PairLine l1 = line_through(q.a, q.b);
  const PairLine l2 = line_through(q.c, q.d);
  auto xprod = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };

  Complex origin, axis;
  double half_angle = 0.0;
  bool parallel = false;
  if (std::abs(xprod(l1.dir, l2.dir)) <= 1e-9) {
    // parallel mirror lines; the axis is the mid-line
    Complex n = l1.dir * Complex(0, 1);
    const double s1 = n.real() * a.real() + n.imag() * a.imag();
    const double s2 = n.real() * c.real() + n.imag() * c.imag();
    if (std::abs(s1 - s2) <= eps_len) {
      why = "sides (a,b) and (c,d) lie on one line";
      return false;
    }
    parallel = true;
    axis = l1.dir;
    origin = 0.5 * (s1 + s2) * n;
  } else {
    // intersection point of the two lines
    const Complex r = l2.point - l1.point;
    const double t = xprod(r, l2.dir) / xprod(l1.dir, l2.dir);
    origin = l1.point + t * l1.dir;
    auto ray_dir = [&](Complex u, Complex v, Complex unit) -> Complex {
      const double tu = ((u - origin) * std::conj(unit)).real();
      const double tv = ((v - origin) * std::conj(unit)).real();
      if (tu < -eps_len && tv < -eps_len) return -unit;
      if (tu > -eps_len && tv > -eps_len) return unit;
      return Complex(0, 0);
    };
    const Complex u1 = ray_dir(a, b, l1.dir);
    const Complex u2 = ray_dir(c, d, l2.dir);
    if (u1 == Complex(0, 0) || u2 == Complex(0, 0)) {
      why = "vertex pair straddles the ray apex";
      return false;
    }
    Complex bis = u1 + u2;
    if (std::abs(bis) <= 1e-9) {
      why = "rays are opposite";
      return false;
    }
    axis = bis / std::abs(bis);
    half_angle = std::abs(std::arg(u1 * std::conj(axis)));
  }

  // put the (a,b) pair in the lower half plane
  auto im_in_frame = [&](Complex z) { return ((z - origin) * std::conj(axis)).imag(); };
  double ref = im_in_frame(a);
  if (std::abs(ref) <= eps_len) ref = im_in_frame(b);
  if (ref > 0.0) axis = -axis;

  f.parallel_case = parallel;
  f.origin = origin;
  f.axis_dir = axis;
  f.half_angle = half_angle;

  // Ordering hypotheses. The first form compares (a vs d, c vs b); the second
  // covers the configurations whose boundary runs the other way around the
  // mirror structure, which reverses both comparisons. The polarized vertex
  // pattern is the same in both forms.
  const double xa = ((a - origin) * std::conj(axis)).real();
  const double xb = ((b - origin) * std::conj(axis)).real();
  const double xc = ((c - origin) * std::conj(axis)).real();
  const double xd = ((d - origin) * std::conj(axis)).real();
  f.second_form = false;
  if (xa <= xd + eps_len && xc < xb - eps_len)
    f.variant = 1;
  else if (xa < xd - eps_len && xc <= xb + eps_len)
    f.variant = 2;
  else {
    f.second_form = true;
    if (xd <= xa + eps_len && xb < xc - eps_len)
      f.variant = 1;
    else if (xd < xa - eps_len && xb <= xc + eps_len)
      f.variant = 2;
    else
      f.variant = 0;
  }
  return true;
}

}  // namespace

PolarizationFrame polarization_admissible(const Quadrilateral& q) {
  validate(q);
  PolarizationFrame f;
  std::string why;
  if (!frame_for_labeling(q, f, why)) fail(Errc::NotAdmissible, "no mirror-ray structure: " + why);
  if (f.variant == 0)
    fail(Errc::NotAdmissible, "neither ordering variant holds for the mirror structure");
  return f;
}

Complex to_frame(const PolarizationFrame& f, Point2 p) {
  return (cx(p) - f.origin) * std::conj(f.axis_dir);
}

Point2 from_frame(const PolarizationFrame& f, Complex z) {
  return pt(z * f.axis_dir + f.origin);
}

}  // namespace quadmod
