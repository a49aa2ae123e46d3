#pragma once

#include <array>
#include <utility>
#include <vector>

#include "quadmod/estimate.hpp"
#include "quadmod/geometry.hpp"

namespace quadmod {

/// Conforming triangle mesh of a polygon with side-labeled boundary edges.
struct Mesh {
  std::vector<Point2> points;
  std::vector<std::array<int, 3>> triangles;  // ccw index triples
  std::vector<std::pair<std::array<int, 2>, SideLabel>> boundary_edges;
};

/// Piecewise-linear minimizer of the Dirichlet integral with the side
/// conditions u = 1 on closure(BC), u = 0 on closure(DA), free elsewhere.
struct BVPSolution {
  std::vector<double> nodal_values;
  double energy = 0.0;
};

/// Two-sided enclosure of a modulus: the direct labeling's discrete energy
/// bounds from above, the reciprocal of the rotated labeling's from below.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  int levels = 0;
};

class BracketToleranceError : public Error {
 public:
  BracketToleranceError(const Bracket& b, const std::string& what)
      : Error(Errc::ToleranceNotReached, what), achieved(b) {}
  Bracket achieved;
};

/// Triangulates a simple ccw polygon whose edges carry side labels. Element
/// diameters respect target_h away from the corners and shrink geometrically
/// with the given ratio toward every corner.
Mesh mesh_polygon(const std::vector<Point2>& poly, const std::vector<SideLabel>& edge_labels,
                  double target_h, double grading = 2.0);

Mesh triangulate(const Quadrilateral& q, double target_h, double grading = 2.0);

/// Bisects every triangle into four; the refined vertex set contains the old
/// one, so the piecewise-linear spaces are nested.
Mesh refine_uniform(const Mesh& m);

/// Relabels boundary edges for the rotated quadrilateral (b,c,d,a).
Mesh rotate_mesh_labels(const Mesh& m);

BVPSolution solve_energy(const Mesh& m);

Bracket modulus_bracket(const Quadrilateral& q, int levels = 4);

ModulusEstimate modulus_fem(const Quadrilateral& q, double tol = 1e-2);

}  // namespace quadmod
