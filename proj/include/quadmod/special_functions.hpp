#pragma once

#include <vector>

#include "quadmod/geometry.hpp"

namespace quadmod {

/// Arithmetic-geometric mean of a, g >= 0.
double agm(double a, double g);

/// Complete elliptic integral of the first kind, 0 <= k < 1.
double ell_K(double k);

/// Elliptic modulus pair constrained by k^2 + k'^2 = 1.
struct EllipticParam {
  double k;
  double kprime;

  static EllipticParam from_k(double k);
  static EllipticParam from_pair(double k, double kprime);  // validated
};

/// K(k) and K(k') evaluated from the stored pair, with no re-derivation of
/// either modulus from the other (keeps full precision near k = 0 and k = 1).
double ell_K(const EllipticParam& p);
double ell_K_prime(const EllipticParam& p);

/// Boundary point for cross-ratio computations; at most one of the four may
/// be the point at infinity.
struct CRPoint {
  Complex z{};
  bool infinite = false;

  CRPoint(Complex zz) : z(zz) {}
  CRPoint(Point2 p) : z(cx(p)) {}
  CRPoint(double x) : z(x, 0.0) {}
  static CRPoint infinity() {
    CRPoint p{Complex{}};
    p.infinite = true;
    return p;
  }
};

/// ((z1-z3)(z2-z4)) / ((z1-z4)(z2-z3)) with the usual limits at infinity.
/// The configurations used here are conformal images of real tuples, so the
/// value is required to be real.
double cross_ratio(CRPoint z1, CRPoint z2, CRPoint z3, CRPoint z4);

/// Elliptic parameters of the half-plane quadrilateral with cross-ratio cr > 1,
/// computed in cancellation-free form: k = (sqrt(cr)-1)/(sqrt(cr)+1).
EllipticParam elliptic_from_crossratio(double cr);

/// Same, parametrized by cr - 1 > 0 so that cross-ratios within roundoff of 1
/// keep full relative precision (needed for extreme prevertex spreads).
EllipticParam elliptic_from_crdelta(double cr_minus_1);

/// Modulus of the half-plane quadrilateral with boundary points of cross-ratio
/// cr > 1: K(k')/(2K(k)) = agm(1,k')/(2 agm(1,k)). Strictly decreasing in cr.
double modulus_from_crossratio(double cr);
double modulus_from_crdelta(double cr_minus_1);

/// Quadrature rule on (-1,1) for the weight (1-t)^alpha_exp (1+t)^beta_exp.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double alpha_exp = 0.0;
  double beta_exp = 0.0;
};

/// Gauss-Jacobi rule by the Golub-Welsch eigenvalue method; exact for
/// polynomial factors of degree <= 2n-1. Exponents must exceed -1.
QuadratureRule gauss_jacobi_rule(int n, double alpha_exp, double beta_exp);

}  // namespace quadmod
