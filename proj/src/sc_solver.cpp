#include "quadmod/sc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "quadmod/special_functions.hpp"

namespace quadmod {

namespace {

// One linear factor |a t + b|^e of the side integrand.
struct LinFactor {
  double a, b, e;
  double root() const { return -b / a; }
};

class RuleCache {
 public:
  explicit RuleCache(int n) : n_(n) {}

  const QuadratureRule& weighted_lo(double e) { return get(lo_, 0.0, e); }
  const QuadratureRule& weighted_hi(double e) { return get(hi_, e, 0.0); }
  const QuadratureRule& plain() { return get(lo_, 0.0, 0.0); }

 private:
  const QuadratureRule& get(std::map<double, QuadratureRule>& m, double a, double b) {
    const double key = (a == 0.0) ? b : a;
    auto it = m.find(key);
    if (it == m.end()) it = m.emplace(key, gauss_jacobi_rule(n_, a, b)).first;
    return it->second;
  }

  int n_;
  std::map<double, QuadratureRule> lo_, hi_;
};

double eval_product(const std::vector<LinFactor>& fs, double t, int skip) {
  double acc = 1.0;
  for (int k = 0; k < static_cast<int>(fs.size()); ++k) {
    if (k == skip || fs[k].e == 0.0) continue;
    acc *= std::pow(std::abs(fs[k].a * t + fs[k].b), fs[k].e);
  }
  return acc;
}

// Distance from [p,q] to the nearest root of any factor except `skip`.
double foreign_distance(const std::vector<LinFactor>& fs, double p, double q, int skip) {
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(fs.size()); ++k) {
    if (k == skip || fs[k].a == 0.0 || fs[k].e == 0.0) continue;
    const double r = fs[k].root();
    if (r < p)
      d = std::min(d, p - r);
    else if (r > q)
      d = std::min(d, r - q);
    else
      d = 0.0;
  }
  return d;
}

struct PanelIntegrator {
  const std::vector<LinFactor>& fs;
  RuleCache& rules;
  double span;  // full interval length, sets the recursion floor

  // Subdivision stops once the panel clears all foreign roots or cannot be
  // halved any further in double precision.
  bool stop(double p, double q, int own) const {
    if (foreign_distance(fs, p, q, own) >= q - p || q - p <= 1e-15 * span) return true;
    const double m = 0.5 * (p + q);
    return !(m > p && m < q);
  }

  // Panel [p,q] whose integrand is smooth (all roots outside by a margin).
  double smooth(double p, double q) const {
    if (!(q > p)) return 0.0;
    if (stop(p, q, -1)) {
      const auto& r = rules.plain();
      const double h = 0.5 * (q - p);
      double s = 0.0;
      for (size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * eval_product(fs, p + h * (1.0 + r.nodes[i]), -1);
      return h * s;
    }
    const double m = 0.5 * (p + q);
    return smooth(p, m) + smooth(m, q);
  }

  // Panel chain on [p,q] with the singular factor `own` rooted at p.
  double singular_lo(double p, double q, int own) const {
    if (!(q > p)) return 0.0;
    if (stop(p, q, own)) {
      const auto& r = rules.weighted_lo(fs[own].e);
      const double h = 0.5 * (q - p);
      const double scale = std::pow(h * std::abs(fs[own].a), fs[own].e) * h;
      double s = 0.0;
      for (size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * eval_product(fs, p + h * (1.0 + r.nodes[i]), own);
      return scale * s;
    }
    const double m = 0.5 * (p + q);
    return singular_lo(p, m, own) + smooth(m, q);
  }

  double singular_hi(double p, double q, int own) const {
    if (!(q > p)) return 0.0;
    if (stop(p, q, own)) {
      const auto& r = rules.weighted_hi(fs[own].e);
      const double h = 0.5 * (q - p);
      const double scale = std::pow(h * std::abs(fs[own].a), fs[own].e) * h;
      double s = 0.0;
      for (size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * eval_product(fs, p + h * (1.0 + r.nodes[i]), own);
      return scale * s;
    }
    const double m = 0.5 * (p + q);
    return smooth(p, m) + singular_hi(m, q, own);
  }
};

// Integral of prod |a_k t + b_k|^{e_k} over [lo,hi]; i_lo/i_hi name the factors
// whose roots sit at the endpoints (-1 if none). No root may lie inside.
double integrate_product(double lo, double hi, const std::vector<LinFactor>& fs, int i_lo,
                         int i_hi, RuleCache& rules) {
  const PanelIntegrator pi{fs, rules, hi - lo};
  const double m = 0.5 * (lo + hi);
  double left = (i_lo >= 0 && fs[i_lo].e != 0.0) ? pi.singular_lo(lo, m, i_lo) : pi.smooth(lo, m);
  double right = (i_hi >= 0 && fs[i_hi].e != 0.0) ? pi.singular_hi(m, hi, i_hi) : pi.smooth(m, hi);
  return left + right;
}

std::array<double, 4> exponents_checked(const std::array<double, 4>& alpha) {
  std::array<double, 4> e{};
  for (int j = 0; j < 4; ++j) {
    if (!(alpha[j] > 0.0 && alpha[j] < 2.0))
      fail(Errc::NonIntegrable, "interior angle multiple out of (0,2)");
    e[j] = alpha[j] - 1.0;
  }
  return e;
}

double side_integral_impl(const std::array<double, 4>& alpha, double x3, PrevertexInterval which,
                          RuleCache& rules) {
  if (!(x3 > 1.0)) fail(Errc::OutOfRange, "third prevertex must exceed 1");
  const auto e = exponents_checked(alpha);
  switch (which) {
    case PrevertexInterval::AB: {
      std::vector<LinFactor> fs{{1.0, 0.0, e[0]}, {1.0, -1.0, e[1]}, {-1.0, x3, e[2]}};
      return integrate_product(0.0, 1.0, fs, 0, 1, rules);
    }
    case PrevertexInterval::BC: {
      std::vector<LinFactor> fs{{1.0, 0.0, e[0]}, {1.0, -1.0, e[1]}, {-1.0, x3, e[2]}};
      return integrate_product(1.0, x3, fs, 1, 2, rules);
    }
    case PrevertexInterval::CD: {
      // t = x3 + s/(1-s) maps (x3, inf) to s in (0,1); the integrand stays a
      // product of linear powers in s with the tail exponent at s = 1.
      std::vector<LinFactor> fs{{1.0, 0.0, e[2]},
                                {-1.0, 1.0, e[3]},
                                {-(x3 - 1.0), x3, e[0]},
                                {-(x3 - 2.0), x3 - 1.0, e[1]}};
      return integrate_product(0.0, 1.0, fs, 0, 1, rules);
    }
  }
  fail(Errc::InvalidConfig, "unknown prevertex interval");
}

struct SolveOutcome {
  SCSolution sol;
  double ratio_cd = 0.0;  // I(x3,inf)/I(0,1) at the solution
};

// Bisection to 1e-3 then safeguarded Newton inside a sign-change bracket.
template <typename F>
double refine_root(const F& gap, double lo, double glo, double hi, double ghi) {
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if ((g < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = g;
    } else {
      hi = mid;
      ghi = g;
    }
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 48; ++it) {
    const double g = gap(s);
    if ((g < 0.0) == (glo < 0.0))
      lo = s;
    else
      hi = s;
    if (std::abs(g) < 1e-13) break;
    const double ds = 1e-6;
    const double deriv = (gap(s + ds) - gap(s - ds)) / (2.0 * ds);
    double next = (deriv != 0.0) ? s - g / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) < 1e-15 * (1.0 + std::abs(s))) return next;
    s = next;
  }
  return s;
}

SolveOutcome solve_with_rules(const SCProblem& prob, double tol, int nodes) {
  RuleCache rules(nodes);
  const double target = std::log(prob.side_length[1]) - std::log(prob.side_length[0]);

  auto gap = [&](double s) {
    const double x3 = 1.0 + std::exp(s);
    const double i_ab = side_integral_impl(prob.alpha, x3, PrevertexInterval::AB, rules);
    const double i_bc = side_integral_impl(prob.alpha, x3, PrevertexInterval::BC, rules);
    return std::log(i_bc) - std::log(i_ab) - target;
  };

  // The side-ratio map is monotone between its endpoint regimes, but the
  // direction depends on the angle data and spurious (non-univalent) roots can
  // pair with the true one. Scan the whole admissible range, refine every sign
  // change, and keep the root whose unsolved side ratio closes best.
  // The lower end stops where 1 + e^s reaches double resolution.
  constexpr double kSpanLo = -36.0;
  constexpr double kSpan = 40.0;
  constexpr double kStep = 2.0;
  SolveOutcome best;
  bool have = false;
  double s_prev = kSpanLo;
  double g_prev = gap(s_prev);
  for (double s = kSpanLo + kStep; s <= kSpan + 0.5 * kStep; s += kStep) {
    const double g = gap(s);
    if (!std::isfinite(g)) continue;
    if (!std::isfinite(g_prev)) {
      s_prev = s;
      g_prev = g;
      continue;
    }
    if ((g_prev < 0.0) != (g < 0.0)) {
      const double root = refine_root(gap, s_prev, g_prev, s, g);
      const double x3 = 1.0 + std::exp(root);
      const double i_ab = side_integral_impl(prob.alpha, x3, PrevertexInterval::AB, rules);
      const double i_cd = side_integral_impl(prob.alpha, x3, PrevertexInterval::CD, rules);
      const double want = prob.side_length[2] / prob.side_length[0];
      SolveOutcome cand;
      cand.sol.x3 = x3;
      cand.sol.closure_residual = std::abs(i_cd / i_ab - want) / want;
      cand.sol.modulus = modulus_from_crdelta(1.0 / (x3 - 1.0));
      cand.ratio_cd = i_cd / i_ab;
      if (!have || cand.sol.closure_residual < best.sol.closure_residual) {
        best = cand;
        have = true;
      }
    }
    s_prev = s;
    g_prev = g;
  }
  if (!have) fail(Errc::NoBracket, "side-ratio target unreachable on the prevertex range");
  if (best.sol.closure_residual > 100.0 * tol) {
    std::ostringstream os;
    os << "fourth-side ratio mismatch " << best.sol.closure_residual << " exceeds " << 100.0 * tol;
    fail(Errc::ClosureFailure, os.str());
  }
  return best;
}

}  // namespace

SCProblem SCProblem::from_quad(const Quadrilateral& q) {
  validate(q);
  SCProblem p;
  const auto ang = interior_angles(q);
  for (int j = 0; j < 4; ++j) p.alpha[j] = ang[j] / std::numbers::pi;
  const auto v = q.vertices();
  for (int j = 0; j < 4; ++j) p.side_length[j] = std::abs(cx(v[(j + 1) % 4]) - cx(v[j]));
  return p;
}

double side_integral(const std::array<double, 4>& alpha, double x3, PrevertexInterval which,
                     int nodes_per_panel) {
  RuleCache rules(nodes_per_panel);
  return side_integral_impl(alpha, x3, which, rules);
}

SCSolution solve_prevertex(const Quadrilateral& q, double tol) {
  return solve_with_rules(SCProblem::from_quad(q), tol, 24).sol;
}

ModulusEstimate modulus_sc(const Quadrilateral& q, double tol) {
  const SCProblem prob = SCProblem::from_quad(q);
  const SolveOutcome coarse = solve_with_rules(prob, tol, 24);
  const SolveOutcome fine = solve_with_rules(prob, tol, 48);
  const double m = fine.sol.modulus;
  double err = std::abs(m - coarse.sol.modulus) + fine.sol.closure_residual * std::abs(m);
  err = std::max(err, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(m));
  return {m, Method::SC, err};
}

}  // namespace quadmod
