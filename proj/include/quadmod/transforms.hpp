#pragma once

#include <array>
#include <utility>
#include <vector>

#include "quadmod/geometry.hpp"

namespace quadmod {

/// Quadrilateral (1+i*alpha, 1+i*beta, i*gamma, i*delta) with vertical
/// parallel sides; requires alpha < beta and gamma > delta, which already
/// makes the polygon simple and positively oriented.
struct TrapezoidSpec {
  double alpha, beta, gamma, delta;

  TrapezoidSpec(double alpha, double beta, double gamma, double delta);
  Quadrilateral quad() const;
};

/// Finitely many trapezoid quadrilaterals with positive weights summing to 1.
struct WeightedFamily {
  std::vector<TrapezoidSpec> specs;
  std::vector<double> weights;

  WeightedFamily(std::vector<TrapezoidSpec> specs, std::vector<double> weights);
};

/// Side-rotation family around z = 1: vertices on the rays arg z = -phi and
/// arg z = +phi with 0 < phi < pi/2 and 1/cos(phi) < r1 <= r2.
struct RaySideSpec {
  double phi, r1, r2;

  RaySideSpec(double phi, double r1, double r2);

  /// Partner radius (2 cos phi - 1/r)^{-1}; an involution on the range.
  double reflected(double r) const;
  /// Admissible open radius interval ((2 cos phi - 1/r1)^{-1}, r2).
  double r_lo() const;
  double r_hi() const { return r2; }
};

/// Mirror-reflects the {b,c} pair of an admissible quadrilateral across its
/// polarization axis: (a,b,c,d) -> (a, rc, rb, d). Strictly decreases the
/// modulus under the admissibility ordering.
Quadrilateral polarize(const Quadrilateral& q);

/// Continuous symmetrization step toward the real axis; lambda = 1 is the
/// Steiner-symmetric trapezoid.
TrapezoidSpec symmetrize_lambda(const TrapezoidSpec& s, double lambda);

/// Weighted componentwise mean of trapezoid parameters.
TrapezoidSpec average(const WeightedFamily& f);

/// (1+iy, 1+i*beta, i*gamma, -iy) for 0 < gamma <= beta, y in (-gamma, beta).
Quadrilateral q1_quad(double y, double beta, double gamma);

/// (r e^{-i phi}, r2 e^{-i phi}, r1 e^{i phi}, reflected(r) e^{i phi}).
Quadrilateral q2_quad(double r, const RaySideSpec& s);

/// (M, M+i, i, h e^{i phi}); h = 0 degenerates to the modulus-M rectangle.
Quadrilateral notch_quad(double M, double phi, double h);

/// (1+i(t+2k), ih, -ih, 1+it); a trapezoid of area h + k for all t.
Quadrilateral g_quad(double t, double h, double k);

enum class Op63Variant { EqualArea, SegmentDistance };

/// The comparison pair (Q; a,b,0,1) and (Q'; t+ik, ih, -ih, t-ik) with
/// 2h = |b|, 2k = |a-1|; t from the equal-area condition or from the distance
/// of the segments [0,b] and [1,a].
std::pair<Quadrilateral, Quadrilateral> op63_pair(Point2 a, Point2 b, Op63Variant variant);

/// (Q; A,B,0,1), (Q1; A, A-1, 0, 1), (Q3; A, B, 0, A-B) for A = 1 + r e^{i
/// alpha}, B = s e^{i beta}; the last two are parallelograms.
std::array<Quadrilateral, 3> op65_triple(double alpha, double beta, double r, double s);

/// Four-stage chain: trapezoid, its Steiner symmetrization, the polarized
/// parallelogram, and the final rectangle of equal area and unit width.
std::vector<Quadrilateral> remark2_chain(const TrapezoidSpec& s);

}  // namespace quadmod
