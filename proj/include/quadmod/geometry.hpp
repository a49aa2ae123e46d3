#pragma once

#include <array>
#include <complex>
#include <vector>

#include "quadmod/errors.hpp"

namespace quadmod {

using Complex = std::complex<double>;

/// Plane point, read as the complex number x + iy where convenient.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Complex cx(const Point2& p) { return {p.x, p.y}; }
inline Point2 pt(const Complex& z) { return {z.real(), z.imag()}; }

enum class SideLabel { AB, BC, CD, DA };
enum class VertexName { A, B, C, D };
enum class MotionClass { Increase, Decrease, Indeterminate };

const char* to_string(SideLabel s);
const char* to_string(MotionClass m);

/// Four vertices in order. A valid quadrilateral is simple, has pairwise
/// distinct vertices and positive orientation (interior on the left).
/// Side (b,c) carries potential one, side (d,a) potential zero.
struct Quadrilateral {
  Point2 a, b, c, d;

  std::array<Point2, 4> vertices() const { return {a, b, c, d}; }
  Point2 vertex(int i) const;
};

Quadrilateral make_quad(Complex a, Complex b, Complex c, Complex d);

/// Relabel (a,b,c,d) -> (b,c,d,a), applied k times; the point set is unchanged.
Quadrilateral rotate_labels(const Quadrilateral& q, int k);

double diameter(const Quadrilateral& q);
bool is_convex(const Quadrilateral& q);

/// Returns q unchanged if simple, positively oriented, with distinct vertices.
/// Negative orientation is reported, never repaired.
Quadrilateral validate(const Quadrilateral& q);

/// Interior angles at a,b,c,d, each in (0, 2pi); straight vertices (= pi) allowed.
std::array<double, 4> interior_angles(const Quadrilateral& q);

double area(const Quadrilateral& q);

/// Certified effect on the modulus of moving vertex v to `target`, the other
/// vertices staying fixed. Increase/Decrease are returned only when the motion
/// lies in a region certified by the vertex-motion monotonicity (side slides,
/// or for convex quadrilaterals the closed wedge bounded by a side and the
/// extensions of its neighbours); everything else is Indeterminate.
MotionClass classify_vertex_motion(const Quadrilateral& q, VertexName v, Point2 target);

/// Angle phi0 in (0, pi) such that 1 + r*exp(i*phi0) is the tangency point,
/// closest to 1 + r, of the circle |z-1| = r with a tangent line through b.
/// Requires Im b > 0, Re b < 1 + r, |b - 1| > r.
double tangency_phi0(double r, Point2 b);

/// Canonical mirror frame for polarization: in frame coordinates
/// conj(axis_dir) * (z - origin) the mirror axis is the real line, the first
/// vertex pair sits in the lower half plane and the second in the upper.
struct PolarizationFrame {
  bool parallel_case = false;  // mirror lines parallel to the axis
  bool second_form = false;    // ordering holds with the roles of the pairs reversed
  int variant = 0;             // 1: weak/strict as stated; 2: strictness swapped
  Complex origin;
  Complex axis_dir;            // unit
  double half_angle = 0.0;     // angle between each ray and the axis; 0 when parallel
};

/// Detects the mirror-ray (or mirror-line) structure pairing {a,b} with {c,d}
/// and checks the ordering hypotheses under which polarization strictly
/// decreases the modulus. Throws NotAdmissible when the structure is missing
/// or no ordering variant holds.
PolarizationFrame polarization_admissible(const Quadrilateral& q);

Complex to_frame(const PolarizationFrame& f, Point2 p);
Point2 from_frame(const PolarizationFrame& f, Complex z);

// ---- plane predicates shared with meshing and the harness ----

/// Twice the signed area of triangle (a,b,c); positive for counterclockwise.
double orient(Point2 a, Point2 b, Point2 c);

enum class Location { Outside, Boundary, Inside };

/// Point location for a simple polygon given as a ccw vertex loop.
Location locate_point(const std::vector<Point2>& poly, Point2 p, double eps);

/// True if the open segment (u,w) stays inside the closed polygon and crosses
/// no edge properly; `eps` is the geometric tolerance.
bool segment_in_polygon(const std::vector<Point2>& poly, Point2 u, Point2 w, double eps);

bool segments_cross(Point2 p1, Point2 p2, Point2 p3, Point2 p4, double eps);

double point_segment_distance(Point2 p, Point2 u, Point2 v);

}  // namespace quadmod
