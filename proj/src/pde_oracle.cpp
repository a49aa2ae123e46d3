#include "quadmod/pde_oracle.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace quadmod {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey key(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

double dist(Point2 a, Point2 b) { return std::abs(cx(a) - cx(b)); }

struct Builder {
  std::vector<Point2> pts;
  std::vector<std::array<int, 3>> tris;
  std::map<EdgeKey, SideLabel> boundary;
  std::vector<Point2> corners;  // original polygon vertices, drive the grading

  std::map<EdgeKey, int> mids;  // per refinement round

  int midpoint(int i, int j) {
    const EdgeKey k = key(i, j);
    auto it = mids.find(k);
    if (it != mids.end()) return it->second;
    const int m = static_cast<int>(pts.size());
    pts.push_back({0.5 * (pts[i].x + pts[j].x), 0.5 * (pts[i].y + pts[j].y)});
    mids.emplace(k, m);
    auto b = boundary.find(k);
    if (b != boundary.end()) {
      const SideLabel l = b->second;
      boundary.erase(b);
      boundary.emplace(key(i, m), l);
      boundary.emplace(key(m, j), l);
    }
    return m;
  }

  double corner_distance(Point2 p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Point2& c : corners) d = std::min(d, dist(p, c));
    return d;
  }
};

int edge_index_in(const std::array<int, 3>& t, const EdgeKey& e) {
  for (int k = 0; k < 3; ++k)
    if (key(t[k], t[(k + 1) % 3]) == e) return k;
  return -1;
}

// Longest edge with an index tie-break so triangles sharing an edge agree.
int longest_edge_of(const Builder& b, const std::array<int, 3>& t) {
  int best = -1;
  double len = -1.0;
  EdgeKey bk{-1, -1};
  for (int k = 0; k < 3; ++k) {
    const double l = dist(b.pts[t[k]], b.pts[t[(k + 1) % 3]]);
    const EdgeKey ek = key(t[k], t[(k + 1) % 3]);
    const bool better = l > len + 1e-12 * len || (std::abs(l - len) <= 1e-12 * len && ek < bk);
    if (best < 0 || better) {
      best = k;
      len = l;
      bk = ek;
    }
  }
  return best;
}

// Splits (p0,p1,p2) along edge k at vertex m; both children stay ccw.
std::pair<std::array<int, 3>, std::array<int, 3>> bisect_on(const std::array<int, 3>& t, int k,
                                                            int m) {
  const int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
  return {std::array<int, 3>{a, m, c}, std::array<int, 3>{m, b, c}};
}

void split_and_emit(Builder& bld, const std::array<int, 3>& t, const std::set<EdgeKey>& marked,
                    std::vector<std::array<int, 3>>& out) {
  bool any = false;
  for (int k = 0; k < 3; ++k) any |= marked.count(key(t[k], t[(k + 1) % 3])) > 0;
  if (!any) {
    out.push_back(t);
    return;
  }
  const int le = longest_edge_of(bld, t);
  const int m = bld.midpoint(t[le], t[(le + 1) % 3]);
  auto [c1, c2] = bisect_on(t, le, m);
  for (const auto& child : {c1, c2}) {
    bool done = false;
    for (int k = 0; k < 3 && !done; ++k) {
      const EdgeKey e = key(child[k], child[(k + 1) % 3]);
      // only the original edges of t can carry marks; new halves cannot
      if (edge_index_in(t, e) < 0 || !marked.count(e)) continue;
      const int m2 = bld.midpoint(child[k], child[(k + 1) % 3]);
      auto [g1, g2] = bisect_on(child, k, m2);
      out.push_back(g1);
      out.push_back(g2);
      done = true;
    }
    if (!done) out.push_back(child);
  }
}

void refine_marked(Builder& bld, const std::set<EdgeKey>& initial) {
  std::set<EdgeKey> marked = initial;
  // closure: any triangle touching a marked edge must split its longest edge
  for (;;) {
    bool grew = false;
    for (const auto& t : bld.tris) {
      bool touched = false;
      for (int k = 0; k < 3; ++k) touched |= marked.count(key(t[k], t[(k + 1) % 3])) > 0;
      if (!touched) continue;
      const int le = longest_edge_of(bld, t);
      const EdgeKey lk = key(t[le], t[(le + 1) % 3]);
      if (!marked.count(lk)) {
        marked.insert(lk);
        grew = true;
      }
    }
    if (!grew) break;
  }
  bld.mids.clear();
  std::vector<std::array<int, 3>> out;
  out.reserve(bld.tris.size() * 2);
  for (const auto& t : bld.tris) split_and_emit(bld, t, marked, out);
  bld.tris.swap(out);
}

double tri_angle(Point2 at, Point2 u, Point2 v) {
  const Complex a = cx(u) - cx(at);
  const Complex b = cx(v) - cx(at);
  return std::abs(std::arg(a * std::conj(b)));
}

// Lawson flips toward the Delaunay criterion; boundary edges are fixed.
void delaunay_flips(Builder& bld) {
  for (int round = 0; round < 10000; ++round) {
    std::map<EdgeKey, std::vector<int>> adj;
    for (int ti = 0; ti < static_cast<int>(bld.tris.size()); ++ti)
      for (int k = 0; k < 3; ++k)
        adj[key(bld.tris[ti][k], bld.tris[ti][(k + 1) % 3])].push_back(ti);
    bool flipped = false;
    for (auto& [e, ts] : adj) {
      if (ts.size() != 2 || bld.boundary.count(e)) continue;
      auto& t1 = bld.tris[ts[0]];
      auto& t2 = bld.tris[ts[1]];
      const int k1 = edge_index_in(t1, e);
      const int k2 = edge_index_in(t2, e);
      if (k1 < 0 || k2 < 0) continue;
      const int u = t1[k1], v = t1[(k1 + 1) % 3], w = t1[(k1 + 2) % 3];
      const int z = t2[(k2 + 2) % 3];
      const double ang = tri_angle(bld.pts[w], bld.pts[u], bld.pts[v]) +
                         tri_angle(bld.pts[z], bld.pts[u], bld.pts[v]);
      if (ang <= std::numbers::pi + 1e-12) continue;
      const std::array<int, 3> n1{w, u, z};
      const std::array<int, 3> n2{w, z, v};
      if (orient(bld.pts[n1[0]], bld.pts[n1[1]], bld.pts[n1[2]]) <= 0.0) continue;
      if (orient(bld.pts[n2[0]], bld.pts[n2[1]], bld.pts[n2[2]]) <= 0.0) continue;
      t1 = n1;
      t2 = n2;
      flipped = true;
      break;  // adjacency is stale after a flip
    }
    if (!flipped) return;
  }
}

std::vector<std::array<int, 3>> ear_clip(const std::vector<Point2>& poly) {
  const int n = static_cast<int>(poly.size());
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, dist(poly[i], poly[(i + 1) % n]));
  const double eps_area = 1e-12 * scale * scale;
  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;
  std::vector<std::array<int, 3>> tris;
  int guard = 0;
  while (ring.size() > 3) {
    if (++guard > 4 * n * n) fail(Errc::MeshFailure, "ear clipping stalled");
    bool clipped = false;
    const int m = static_cast<int>(ring.size());
    for (int i = 0; i < m; ++i) {
      const int ip = ring[(i + m - 1) % m], ic = ring[i], in = ring[(i + 1) % m];
      if (orient(poly[ip], poly[ic], poly[in]) <= eps_area) continue;
      bool blocked = false;
      for (int j = 0; j < m && !blocked; ++j) {
        const int v = ring[j];
        if (v == ip || v == ic || v == in) continue;
        blocked = orient(poly[ip], poly[ic], poly[v]) >= -eps_area &&
                  orient(poly[ic], poly[in], poly[v]) >= -eps_area &&
                  orient(poly[in], poly[ip], poly[v]) >= -eps_area;
      }
      if (blocked) continue;
      tris.push_back({ip, ic, in});
      ring.erase(ring.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) fail(Errc::MeshFailure, "no ear found; polygon may be degenerate");
  }
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

Mesh finish(Builder&& bld) {
  Mesh m;
  m.points = std::move(bld.pts);
  m.triangles = std::move(bld.tris);
  m.boundary_edges.reserve(bld.boundary.size());
  for (const auto& [e, l] : bld.boundary) m.boundary_edges.push_back({{e.first, e.second}, l});
  for (const auto& t : m.triangles)
    if (orient(m.points[t[0]], m.points[t[1]], m.points[t[2]]) <= 0.0)
      fail(Errc::MeshFailure, "inverted element");
  return m;
}

Builder to_builder(const Mesh& m) {
  Builder bld;
  bld.pts = m.points;
  bld.tris = m.triangles;
  for (const auto& [e, l] : m.boundary_edges) bld.boundary.emplace(key(e[0], e[1]), l);
  return bld;
}

// Dirichlet-Neumann junctions force u ~ r^(pi/2t), same-type corners r^(pi/t);
// the grading floor keeps the worst corner patch below the interior error.
double grading_floor(const std::vector<Point2>& poly, const std::vector<SideLabel>& labels,
                     double target_h, double diam) {
  const int n = static_cast<int>(poly.size());
  auto dirichlet = [](SideLabel l) { return l == SideLabel::BC || l == SideLabel::DA; };
  double gamma_min = 1.0;
  for (int i = 0; i < n; ++i) {
    const Complex prev = cx(poly[(i + n - 1) % n]) - cx(poly[i]);
    const Complex next = cx(poly[(i + 1) % n]) - cx(poly[i]);
    double theta = std::arg(prev / next);
    if (theta <= 0.0) theta += 2.0 * std::numbers::pi;
    const bool mixed = dirichlet(labels[(i + n - 1) % n]) != dirichlet(labels[i]);
    const double gamma = mixed ? std::numbers::pi / (2.0 * theta) : std::numbers::pi / theta;
    gamma_min = std::min(gamma_min, gamma);
  }
  const double ratio = std::clamp(target_h / diam, 1e-6, 1.0);
  return std::max(1e-7 * diam, diam * std::pow(ratio, 1.0 / gamma_min));
}

}  // namespace

Mesh mesh_polygon(const std::vector<Point2>& poly, const std::vector<SideLabel>& edge_labels,
                  double target_h, double grading) {
  if (poly.size() < 3 || edge_labels.size() != poly.size())
    fail(Errc::InvalidConfig, "polygon needs one label per edge");
  if (!(target_h > 0.0) || !(grading >= 1.0))
    fail(Errc::OutOfRange, "target size must be positive and grading >= 1");

  double diam = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    for (size_t j = i + 1; j < poly.size(); ++j) diam = std::max(diam, dist(poly[i], poly[j]));
  if (!(diam > 0.0)) fail(Errc::MeshFailure, "degenerate polygon");

  Builder bld;
  bld.pts = poly;
  bld.corners = poly;
  bld.tris = ear_clip(poly);
  for (size_t i = 0; i < poly.size(); ++i) {
    const int a = static_cast<int>(i);
    const int b = static_cast<int>((i + 1) % poly.size());
    bld.boundary.emplace(key(a, b), edge_labels[i]);
  }

  const double s_min = grading_floor(poly, edge_labels, target_h, diam);
  auto size_at = [&](Point2 p) {
    if (grading <= 1.0) return target_h;
    const double by_corner = bld.corner_distance(p) * (grading - 1.0) / grading;
    return std::min(target_h, std::max(s_min, by_corner));
  };

  for (int round = 0;; ++round) {
    if (round == 500) fail(Errc::MeshFailure, "size refinement did not settle");
    std::set<EdgeKey> marked;
    for (const auto& t : bld.tris) {
      const Point2 c{(bld.pts[t[0]].x + bld.pts[t[1]].x + bld.pts[t[2]].x) / 3.0,
                     (bld.pts[t[0]].y + bld.pts[t[1]].y + bld.pts[t[2]].y) / 3.0};
      const int le = longest_edge_of(bld, t);
      if (dist(bld.pts[t[le]], bld.pts[t[(le + 1) % 3]]) > size_at(c))
        marked.insert(key(t[le], t[(le + 1) % 3]));
    }
    if (marked.empty()) break;
    refine_marked(bld, marked);
  }
  delaunay_flips(bld);
  return finish(std::move(bld));
}

Mesh triangulate(const Quadrilateral& q, double target_h, double grading) {
  validate(q);
  const auto v = q.vertices();
  return mesh_polygon({v[0], v[1], v[2], v[3]},
                      {SideLabel::AB, SideLabel::BC, SideLabel::CD, SideLabel::DA}, target_h,
                      grading);
}

Mesh refine_uniform(const Mesh& m) {
  Builder bld = to_builder(m);
  std::set<EdgeKey> all;
  for (const auto& t : bld.tris)
    for (int k = 0; k < 3; ++k) all.insert(key(t[k], t[(k + 1) % 3]));
  refine_marked(bld, all);
  return finish(std::move(bld));
}

Mesh rotate_mesh_labels(const Mesh& m) {
  Mesh out = m;
  auto rot = [](SideLabel l) {
    switch (l) {
      case SideLabel::BC: return SideLabel::AB;
      case SideLabel::CD: return SideLabel::BC;
      case SideLabel::DA: return SideLabel::CD;
      case SideLabel::AB: return SideLabel::DA;
    }
    return l;
  };
  for (auto& [e, l] : out.boundary_edges) l = rot(l);
  return out;
}

BVPSolution solve_energy(const Mesh& m) {
  const int n = static_cast<int>(m.points.size());
  std::vector<double> fixed(n, std::numeric_limits<double>::quiet_NaN());
  for (const auto& [e, l] : m.boundary_edges) {
    double v;
    if (l == SideLabel::BC)
      v = 1.0;
    else if (l == SideLabel::DA)
      v = 0.0;
    else
      continue;
    for (int idx : {e[0], e[1]}) {
      if (!std::isnan(fixed[idx]) && fixed[idx] != v)
        fail(Errc::SingularSystem, "node pinned to both plate values");
      fixed[idx] = v;
    }
  }
  bool has_one = false, has_zero = false;
  for (double f : fixed) {
    has_one |= f == 1.0;
    has_zero |= f == 0.0;
  }
  if (!has_one || !has_zero) fail(Errc::SingularSystem, "mesh lacks one of the labeled plates");

  std::vector<int> compact(n, -1);
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (std::isnan(fixed[i])) compact[i] = nf++;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.triangles.size() * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(std::max(nf, 1));
  double e_dd = 0.0;
  for (const auto& t : m.triangles) {
    const Point2 p0 = m.points[t[0]], p1 = m.points[t[1]], p2 = m.points[t[2]];
    const double a2 = orient(p0, p1, p2);  // twice the area
    if (!(a2 > 0.0)) fail(Errc::SingularSystem, "inverted or flat element");
    const Point2 es[3] = {{p2.x - p1.x, p2.y - p1.y},
                          {p0.x - p2.x, p0.y - p2.y},
                          {p1.x - p0.x, p1.y - p0.y}};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double kij = (es[i].x * es[j].x + es[i].y * es[j].y) / (2.0 * a2);
        const int gi = t[i], gj = t[j];
        const bool fi = std::isnan(fixed[gi]), fj = std::isnan(fixed[gj]);
        if (fi && fj)
          trips.emplace_back(compact[gi], compact[gj], kij);
        else if (fi && !fj)
          rhs(compact[gi]) -= kij * fixed[gj];
        else if (!fi && !fj)
          e_dd += kij * fixed[gi] * fixed[gj];
      }
    }
  }

  BVPSolution sol;
  sol.nodal_values.assign(n, 0.0);
  if (nf == 0) {
    sol.energy = e_dd;
    for (int i = 0; i < n; ++i) sol.nodal_values[i] = fixed[i];
    return sol;
  }
  Eigen::SparseMatrix<double> K(nf, nf);
  K.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success) fail(Errc::SingularSystem, "stiffness factorization failed");
  const Eigen::VectorXd u = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success) fail(Errc::SingularSystem, "stiffness solve failed");

  for (int i = 0; i < n; ++i)
    sol.nodal_values[i] = std::isnan(fixed[i]) ? u(compact[i]) : fixed[i];
  sol.energy = e_dd - u.dot(rhs);
  return sol;
}

namespace {

// Aitken extrapolation of the last three terms when they form a geometric
// tail; otherwise the last term stands.
double extrapolate(const std::vector<double>& seq) {
  const size_t n = seq.size();
  if (n < 3) return seq.back();
  const double d1 = seq[n - 2] - seq[n - 3];
  const double d2 = seq[n - 1] - seq[n - 2];
  if (d1 == 0.0 || d2 == d1 || !(std::abs(d2) < std::abs(d1))) return seq.back();
  return seq[n - 1] - d2 * d2 / (d2 - d1);
}

Bracket bracket_from_levels(const std::vector<double>& e_dir, const std::vector<double>& e_rot) {
  Bracket b;
  b.levels = static_cast<int>(e_dir.size());
  b.upper = e_dir.back();
  b.lower = 1.0 / e_rot.back();
  if (b.lower > b.upper) b.lower = b.upper;  // both sides within roundoff of the modulus
  std::vector<double> lows(e_rot.size());
  for (size_t i = 0; i < e_rot.size(); ++i) lows[i] = 1.0 / e_rot[i];
  const double est = 0.5 * (extrapolate(e_dir) + extrapolate(lows));
  b.estimate = std::clamp(est, b.lower, b.upper);
  return b;
}

}  // namespace

Bracket modulus_bracket(const Quadrilateral& q, int levels) {
  if (levels < 2) fail(Errc::OutOfRange, "bracket needs at least two refinement levels");
  validate(q);
  Mesh mesh = triangulate(q, diameter(q) / 8.0, 2.0);
  std::vector<double> e_dir, e_rot;
  for (int l = 0; l < levels; ++l) {
    if (l > 0) mesh = refine_uniform(mesh);
    e_dir.push_back(solve_energy(mesh).energy);
    e_rot.push_back(solve_energy(rotate_mesh_labels(mesh)).energy);
  }
  return bracket_from_levels(e_dir, e_rot);
}

ModulusEstimate modulus_fem(const Quadrilateral& q, double tol) {
  if (!(tol > 0.0)) fail(Errc::OutOfRange, "tolerance must be positive");
  validate(q);
  constexpr int kMaxLevels = 7;
  constexpr size_t kMaxTriangles = 600000;
  Mesh mesh = triangulate(q, diameter(q) / 8.0, 2.0);
  std::vector<double> e_dir, e_rot;
  Bracket b;
  for (int l = 0; l < kMaxLevels; ++l) {
    if (l > 0) mesh = refine_uniform(mesh);
    e_dir.push_back(solve_energy(mesh).energy);
    e_rot.push_back(solve_energy(rotate_mesh_labels(mesh)).energy);
    if (l >= 1) {
      b = bracket_from_levels(e_dir, e_rot);
      if (b.upper - b.lower < tol) return {b.estimate, Method::FEM, 0.5 * (b.upper - b.lower)};
    }
    if (mesh.triangles.size() * 4 > kMaxTriangles) break;
  }
  const double width = b.upper - b.lower;
  if (width > 100.0 * tol) {
    std::ostringstream os;
    os << "bracket width " << width << " far above tolerance " << tol;
    throw BracketToleranceError(b, os.str());
  }
  return {b.estimate, Method::FEM, 0.5 * width};
}

}  // namespace quadmod
