#pragma once

#include <array>

#include "quadmod/estimate.hpp"
#include "quadmod/geometry.hpp"

namespace quadmod {

/// Half-plane parameter problem for a four-vertex polygon: prevertices are
/// normalized to (0, 1, x3, inf) with vertex a mapped from 0.
struct SCProblem {
  std::array<double, 4> alpha;        // interior angles as multiples of pi, sum 2
  std::array<double, 4> side_length;  // |ab|, |bc|, |cd|, |da|

  static SCProblem from_quad(const Quadrilateral& q);
};

struct SCSolution {
  double x3 = 0.0;               // third prevertex, > 1
  double closure_residual = 0.0; // relative mismatch of the unsolved side ratio
  double modulus = 0.0;
};

enum class PrevertexInterval { AB, BC, CD };  // (0,1), (1,x3), (x3,inf)

/// |integral of prod |t - x_j|^(alpha_j - 1)| over one prevertex interval;
/// the image side length of the half-plane map up to a common scale factor.
/// The unbounded interval is folded to (0,1) by t = x3 + s/(1-s).
double side_integral(const std::array<double, 4>& alpha, double x3, PrevertexInterval which,
                     int nodes_per_panel = 24);

/// Solves |bc|/|ab| = I(1,x3)/I(0,1) for x3 on the reparametrization
/// x3 = 1 + e^s, s in [-40, 40]; the third ratio is kept as a residual.
SCSolution solve_prevertex(const Quadrilateral& q, double tol = 1e-8);

ModulusEstimate modulus_sc(const Quadrilateral& q, double tol = 1e-8);

}  // namespace quadmod
