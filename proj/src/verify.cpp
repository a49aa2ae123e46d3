#include "quadmod/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "quadmod/pde_oracle.hpp"
#include "quadmod/sc_solver.hpp"
#include "quadmod/special_functions.hpp"
#include "quadmod/transforms.hpp"

namespace quadmod {

namespace {

using std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_quad(const Quadrilateral& q) {
  std::ostringstream os;
  os << "quad[";
  for (int i = 0; i < 4; ++i) {
    if (i) os << "; ";
    os << fmt(q.vertex(i).x) << "," << fmt(q.vertex(i).y);
  }
  os << "]";
  return os.str();
}

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  int pick(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

  Quadrilateral convex_quad() {
    for (;;) {
      std::array<Point2, 4> p;
      for (auto& v : p) v = {uniform(0.0, 1.0), uniform(0.0, 1.0)};
      Point2 c{0, 0};
      for (auto& v : p) {
        c.x += 0.25 * v.x;
        c.y += 0.25 * v.y;
      }
      std::sort(p.begin(), p.end(), [&](Point2 u, Point2 v) {
        return std::atan2(u.y - c.y, u.x - c.x) < std::atan2(v.y - c.y, v.x - c.x);
      });
      const int shift = pick(4);
      Quadrilateral q{p[shift % 4], p[(shift + 1) % 4], p[(shift + 2) % 4], p[(shift + 3) % 4]};
      try {
        validate(q);
      } catch (const Error&) {
        continue;
      }
      if (!is_convex(q)) continue;
      const auto ang = interior_angles(q);
      if (*std::min_element(ang.begin(), ang.end()) < 0.35) continue;
      double smin = 1e300, smax = 0.0;
      for (int i = 0; i < 4; ++i) {
        const double s = std::abs(cx(q.vertex(i + 1)) - cx(q.vertex(i)));
        smin = std::min(smin, s);
        smax = std::max(smax, s);
      }
      if (smax > 6.0 * smin) continue;
      return q;
    }
  }

  Quadrilateral simple_quad(bool nonconvex) {
    if (!nonconvex) return convex_quad();
    for (;;) {
      Quadrilateral q = convex_quad();
      // pull one vertex past the centroid to dent the polygon
      const int vi = pick(4);
      Point2 c{0, 0};
      for (int i = 0; i < 4; ++i) {
        c.x += 0.25 * q.vertex(i).x;
        c.y += 0.25 * q.vertex(i).y;
      }
      const double t = uniform(1.05, 1.5);
      Point2& v = (vi == 0 ? q.a : vi == 1 ? q.b : vi == 2 ? q.c : q.d);
      v = {c.x + (1.0 - t) * (v.x - c.x), c.y + (1.0 - t) * (v.y - c.y)};
      try {
        validate(q);
      } catch (const Error&) {
        continue;
      }
      if (is_convex(q)) continue;
      const auto ang = interior_angles(q);
      if (*std::max_element(ang.begin(), ang.end()) > 0.93 * 2.0 * pi) continue;
      if (*std::min_element(ang.begin(), ang.end()) < 0.25) continue;
      return q;
    }
  }

  TrapezoidSpec trapezoid() {
    const double a = uniform(-1.5, 1.5);
    const double b = a + uniform(0.4, 2.5);
    const double d = uniform(-1.5, 1.5);
    const double g = d + uniform(0.4, 2.5);
    return {a, b, g, d};
  }

 private:
  std::mt19937_64 eng_;
};

struct Eval {
  double value = 0.0;
  double err = 0.0;
  bool fault = false;
};

Eval eval_mod(const Quadrilateral& q, EvalMethod method) {
  switch (method) {
    case EvalMethod::SC: {
      const auto e = modulus_sc(q);
      return {e.value, e.err, false};
    }
    case EvalMethod::FEM: {
      const auto e = modulus_fem(q, 1e-3);
      return {e.value, e.err, false};
    }
    case EvalMethod::Both: {
      const auto sc = modulus_sc(q);
      const auto br = modulus_bracket(q, 4);
      const bool ok = sc.value >= br.lower - 1e-12 && sc.value <= br.upper + 1e-12;
      return {sc.value, sc.err, !ok};
    }
  }
  fail(Errc::InvalidConfig, "unknown evaluation method");
}

// Per-sample accounting: a sample passes when every step clears its budget,
// fails when some step violates it, and is inconclusive in between.
class Tally {
 public:
  Tally(std::string id, const CheckConfig& cfg, bool conjecture) : cfg_(cfg) {
    rep_.check_id = std::move(id);
    rep_.seed = cfg.seed;
    rep_.samples = cfg.samples;
    rep_.conjecture = conjecture;
    rep_.worst_margin = std::numeric_limits<double>::infinity();
  }

  // claim lhs > rhs, strict beyond the budget
  void step_strict(double lhs, double rhs, double budget) {
    note(lhs, rhs, budget);
    const double margin = lhs - rhs;
    if (margin > cfg_.margin_mult * budget) return;
    if (margin < -cfg_.margin_mult * budget)
      sample_failed_ = true;
    else
      sample_inconclusive_ = true;
  }

  // claim lhs >= rhs up to the budget
  void step_tolerant(double lhs, double rhs, double budget) {
    note(lhs, rhs, budget);
    if (lhs - rhs < -cfg_.margin_mult * budget) sample_failed_ = true;
  }

  void fault(const std::string& what) {
    sample_failed_ = true;
    if (note_.empty()) note_ = what;
  }

  void commit(const std::string& input) {
    if (sample_failed_) {
      FailureRecord r = worst_;
      r.input = input + (note_.empty() ? "" : " [" + note_ + "]");
      rep_.failures.push_back(std::move(r));
    } else if (sample_inconclusive_) {
      ++rep_.inconclusive;
    } else {
      ++rep_.passes;
    }
    reset_sample();
  }

  void skip() {
    ++rep_.skipped;
    reset_sample();
  }

  void solver_fault() {
    ++rep_.solver_faults;
    reset_sample();
  }

  Report finish() {
    if (!std::isfinite(rep_.worst_margin)) rep_.worst_margin = 0.0;
    return rep_;
  }

 private:
  void note(double lhs, double rhs, double budget) {
    const double margin = lhs - rhs;
    if (margin < rep_.worst_margin) rep_.worst_margin = margin;
    rep_.error_budget = std::max(rep_.error_budget, budget);
    if (margin - cfg_.margin_mult * budget < worst_slack_) {
      worst_slack_ = margin - cfg_.margin_mult * budget;
      worst_.lhs = lhs;
      worst_.rhs = rhs;
      worst_.margin = margin;
    }
  }

  void reset_sample() {
    sample_failed_ = false;
    sample_inconclusive_ = false;
    worst_slack_ = std::numeric_limits<double>::infinity();
    worst_ = {};
    note_.clear();
  }

  const CheckConfig& cfg_;
  Report rep_;
  bool sample_failed_ = false;
  bool sample_inconclusive_ = false;
  double worst_slack_ = std::numeric_limits<double>::infinity();
  FailureRecord worst_;
  std::string note_;
};

// ---- individual checks ----

// Sliding a marked point along a straight boundary stretch enlarges one of
// the plate-free arcs: the modulus must rise.
Report check_prop1(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("prop1", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    const double w = rng.uniform(1.5, 3.0);
    const Point2 apex{rng.uniform(0.25 * w, 0.75 * w), rng.uniform(0.6, 2.2)};
    std::string desc;
    Quadrilateral q, qbig;
    if (s % 2 == 0) {
      const double t = rng.uniform(0.35, 0.7);
      const double t2 = rng.uniform(0.1, t - 0.15);
      q = make_quad({0, 0}, {t * w, 0}, {w, 0}, cx(apex));
      qbig = make_quad({0, 0}, {t2 * w, 0}, {w, 0}, cx(apex));
      desc = "slide b " + fmt_quad(q) + " -> b'=(" + fmt(t2 * w) + ",0)";
    } else {
      const double t = rng.uniform(0.3, 0.65);
      const double t2 = rng.uniform(t + 0.15, 0.9);
      q = make_quad({t * w, 0}, {w, 0}, cx(apex), {0, 0});
      qbig = make_quad({t2 * w, 0}, {w, 0}, cx(apex), {0, 0});
      desc = "slide a " + fmt_quad(q) + " -> a'=(" + fmt(t2 * w) + ",0)";
    }
    try {
      const Eval e0 = eval_mod(q, cfg.method);
      const Eval e1 = eval_mod(qbig, cfg.method);
      if (e0.fault || e1.fault) tally.fault("cross-method fault");
      tally.step_strict(e1.value, e0.value, e0.err + e1.err);
      tally.commit(desc);
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

struct PolyBracket {
  double lower = 0.0, upper = 0.0;
};

PolyBracket polygon_bracket(const std::vector<Point2>& poly, const std::vector<SideLabel>& labels,
                            int levels) {
  double diam = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    for (size_t j = i + 1; j < poly.size(); ++j)
      diam = std::max(diam, std::abs(cx(poly[i]) - cx(poly[j])));
  Mesh mesh = mesh_polygon(poly, labels, diam / 8.0, 2.0);
  for (int l = 1; l < levels; ++l) mesh = refine_uniform(mesh);
  PolyBracket b;
  b.upper = solve_energy(mesh).energy;
  b.lower = 1.0 / solve_energy(rotate_mesh_labels(mesh)).energy;
  return b;
}

// Domain extension through the free sides raises the modulus; through a plate
// side it lowers it. Rectangle-with-bump instances, enclosure-certified.
Report check_prop2(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("prop2", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    const double w = rng.uniform(1.2, 2.4);
    const double x1 = rng.uniform(0.12, 0.4) * w;
    const double x2 = x1 + rng.uniform(0.2, 0.45) * w;
    const double depth = rng.uniform(0.25, 0.6);
    const int flavor = s % 3;

    const auto base =
        polygon_bracket({{0, 0}, {w, 0}, {w, 1}, {0, 1}},
                        {SideLabel::AB, SideLabel::BC, SideLabel::CD, SideLabel::DA}, 4);

    std::vector<Point2> poly;
    std::vector<SideLabel> labels;
    std::string desc;
    if (flavor == 0) {  // bump below the side (a,b)
      poly = {{0, 0}, {x1, 0}, {x1, -depth}, {x2, -depth}, {x2, 0}, {w, 0}, {w, 1}, {0, 1}};
      labels = {SideLabel::AB, SideLabel::AB, SideLabel::AB, SideLabel::AB,
                SideLabel::AB, SideLabel::BC, SideLabel::CD, SideLabel::DA};
      desc = "extend through (a,b)";
    } else if (flavor == 1) {  // bump above the side (c,d)
      poly = {{0, 0}, {w, 0}, {w, 1}, {x2, 1}, {x2, 1 + depth}, {x1, 1 + depth}, {x1, 1}, {0, 1}};
      labels = {SideLabel::AB, SideLabel::BC, SideLabel::CD, SideLabel::CD,
                SideLabel::CD, SideLabel::CD, SideLabel::CD, SideLabel::DA};
      desc = "extend through (c,d)";
    } else {  // bump through the plate (b,c): the modulus must drop
      const double y1 = 0.25, y2 = 0.7;
      poly = {{0, 0}, {w, 0}, {w, y1}, {w + depth, y1}, {w + depth, y2}, {w, y2}, {w, 1}, {0, 1}};
      labels = {SideLabel::AB, SideLabel::BC, SideLabel::BC, SideLabel::BC,
                SideLabel::BC, SideLabel::BC, SideLabel::CD, SideLabel::DA};
      desc = "extend through (b,c)";
    }
    try {
      const auto ext = polygon_bracket(poly, labels, 4);
      const double budget = 0.5 * (base.upper - base.lower) + 0.5 * (ext.upper - ext.lower);
      const double m_base = 0.5 * (base.lower + base.upper);
      const double m_ext = 0.5 * (ext.lower + ext.upper);
      if (flavor == 2)
        tally.step_strict(m_base, m_ext, budget);
      else
        tally.step_strict(m_ext, m_base, budget);
      tally.commit(desc + " w=" + fmt(w) + " x1=" + fmt(x1) + " x2=" + fmt(x2) +
                   " depth=" + fmt(depth));
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_th21(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("th2.1", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    const Quadrilateral q = rng.convex_quad();
    bool made = false;
    for (int attempt = 0; attempt < 60 && !made; ++attempt) {
      const int vi = rng.pick(4);
      const int flavor = rng.pick(4);
      const Complex v = cx(q.vertex(vi));
      const Complex prev = cx(q.vertex(vi + 3));
      const Complex next = cx(q.vertex(vi + 1));
      Complex t;
      MotionClass want;
      if (flavor == 0) {
        t = v + rng.uniform(0.15, 0.85) * (next - v);
        want = MotionClass::Increase;
      } else if (flavor == 1) {
        t = v + rng.uniform(0.15, 0.85) * (prev - v);
        want = MotionClass::Decrease;
      } else if (flavor == 2) {
        t = v + rng.uniform(0.05, 0.5) * (next - v) + rng.uniform(0.05, 0.4) * (v - prev);
        want = MotionClass::Increase;
      } else {
        t = v + rng.uniform(0.05, 0.5) * (prev - v) + rng.uniform(0.05, 0.4) * (v - next);
        want = MotionClass::Decrease;
      }
      MotionClass got;
      try {
        got = classify_vertex_motion(q, static_cast<VertexName>(vi), pt(t));
      } catch (const Error&) {
        continue;
      }
      if (got != want) continue;
      Quadrilateral moved = q;
      (vi == 0 ? moved.a : vi == 1 ? moved.b : vi == 2 ? moved.c : moved.d) = pt(t);
      try {
        validate(moved);
      } catch (const Error&) {
        continue;
      }
      try {
        const Eval e0 = eval_mod(q, cfg.method);
        const Eval e1 = eval_mod(moved, cfg.method);
        if (e0.fault || e1.fault) tally.fault("cross-method fault");
        if (want == MotionClass::Increase)
          tally.step_strict(e1.value, e0.value, e0.err + e1.err);
        else
          tally.step_strict(e0.value, e1.value, e0.err + e1.err);
        tally.commit(fmt_quad(q) + " vertex " + std::to_string(vi) + " -> (" + fmt(t.real()) +
                     "," + fmt(t.imag()) + ") expect " + to_string(want));
      } catch (const Error&) {
        tally.solver_fault();
      }
      made = true;
    }
    if (!made) tally.skip();
  }
  return tally.finish();
}

Report check_cor2(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("cor2", cfg, false);
  const int grid = 11;
  for (int s = 0; s < cfg.samples; ++s) {
    const double r = rng.uniform(0.15, 0.8);
    const double rho = rng.uniform(r + 0.3, r + 2.2);
    const double psi_min = std::acos(std::min(1.0, r / rho)) + 0.08;
    const double psi = rng.uniform(psi_min, pi - 0.2);
    const Point2 b = pt(1.0 + std::polar(rho, psi));
    double phi0;
    try {
      phi0 = tangency_phi0(r, b);
    } catch (const Error&) {
      tally.skip();
      continue;
    }
    try {
      double prev_m = -1.0, prev_err = 0.0;
      bool have_prev = false;
      for (int i = 0; i < grid; ++i) {
        const double phi = phi0 * i / (grid - 1);
        Quadrilateral q;
        try {
          q = validate(make_quad(1.0 + std::polar(r, phi), cx(b), 0.0, 1.0));
        } catch (const Error&) {
          have_prev = false;
          continue;
        }
        const Eval e = eval_mod(q, cfg.method);
        if (e.fault) tally.fault("cross-method fault");
        if (have_prev) tally.step_strict(e.value, prev_m, prev_err + e.err);
        prev_m = e.value;
        prev_err = e.err;
        have_prev = true;
      }
      tally.commit("r=" + fmt(r) + " b=(" + fmt(b.x) + "," + fmt(b.y) + ") phi0=" + fmt(phi0));
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_th31(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("th3.1", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    Quadrilateral q;
    bool made = false;
    for (int attempt = 0; attempt < 60 && !made; ++attempt) {
      if (s % 2 == 0) {  // parallel mirror lines
        const double p = rng.uniform(0.4, 1.2);
        const double xa = rng.uniform(-2.0, 0.3);
        const double xb = xa + rng.uniform(1.0, 3.0);
        const double xd = xa + rng.uniform(0.15, 1.2);
        const double xc = xb - rng.uniform(0.15, 1.2);
        q = make_quad({xa, -p}, {xb, -p}, {xc, p}, {xd, p});
      } else {  // mirror rays
        const double half = rng.uniform(0.15, 1.0);
        const double ra = rng.uniform(0.3, 1.4);
        const double rb = ra + rng.uniform(0.6, 2.2);
        const double rd = ra + rng.uniform(0.1, 1.0);
        const double span = rb - rd - 0.1;
        if (span <= 0.15) continue;
        const double rc = rb - rng.uniform(0.1, std::min(1.0, span));
        q = make_quad(std::polar(ra, -half), std::polar(rb, -half), std::polar(rc, half),
                      std::polar(rd, half));
      }
      try {
        validate(q);
        polarization_admissible(q);
      } catch (const Error&) {
        continue;
      }
      made = true;
    }
    if (!made) {
      tally.skip();
      continue;
    }
    Quadrilateral pq;
    try {
      pq = polarize(q);
    } catch (const Error& e) {
      tally.fault(std::string("polarize failed: ") + e.what());
      tally.commit(fmt_quad(q));
      continue;
    }
    try {
      const Eval e0 = eval_mod(q, cfg.method);
      const Eval e1 = eval_mod(pq, cfg.method);
      if (e0.fault || e1.fault) tally.fault("cross-method fault");
      tally.step_strict(e0.value, e1.value, e0.err + e1.err);
      tally.commit(fmt_quad(q));
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_th41(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("th4.1", cfg, false);
  const int grid = 11;
  for (int s = 0; s < cfg.samples; ++s) {
    const TrapezoidSpec spec = rng.trapezoid();
    try {
      double prev_m = 0.0, prev_err = 0.0;
      for (int i = 0; i < grid; ++i) {
        const double lambda = static_cast<double>(i) / (grid - 1);
        const Eval e = eval_mod(symmetrize_lambda(spec, lambda).quad(), cfg.method);
        if (e.fault) tally.fault("cross-method fault");
        if (i > 0) tally.step_tolerant(prev_m, e.value, prev_err + e.err);
        prev_m = e.value;
        prev_err = e.err;
      }
      tally.commit("spec(" + fmt(spec.alpha) + "," + fmt(spec.beta) + "," + fmt(spec.gamma) +
                   "," + fmt(spec.delta) + ")");
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_remark2(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("remark2", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    const TrapezoidSpec spec = rng.trapezoid();
    try {
      const auto chain = remark2_chain(spec);
      const double a0 = area(chain.front());
      double prev_m = 0.0, prev_err = 0.0;
      Eval last{};
      for (size_t i = 0; i < chain.size(); ++i) {
        const Eval e = eval_mod(chain[i], cfg.method);
        if (e.fault) tally.fault("cross-method fault");
        if (i > 0) tally.step_tolerant(prev_m, e.value, prev_err + e.err);
        prev_m = e.value;
        prev_err = e.err;
        last = e;
      }
      // unit width makes the final modulus 1/area; the chain start dominates it
      const double target = 1.0 / a0;
      tally.step_tolerant(1e-6 + cfg.margin_mult * last.err, std::abs(last.value - target), 0.0);
      tally.commit("spec(" + fmt(spec.alpha) + "," + fmt(spec.beta) + "," + fmt(spec.gamma) +
                   "," + fmt(spec.delta) + ") area=" + fmt(a0));
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_th51(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("th5.1", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    const int n = 2 + (s % 2);
    std::vector<TrapezoidSpec> specs;
    std::vector<double> weights;
    double wsum = 0.0;
    for (int k = 0; k < n; ++k) {
      specs.push_back(rng.trapezoid());
      weights.push_back(rng.uniform(0.2, 1.0));
      wsum += weights.back();
    }
    for (double& w : weights) w /= wsum;
    const WeightedFamily fam{specs, weights};
    const TrapezoidSpec avg = average(fam);

    try {
      double rhs = 0.0, budget = 0.0;
      for (int k = 0; k < n; ++k) {
        const Eval e = eval_mod(specs[k].quad(), cfg.method);
        if (e.fault) tally.fault("cross-method fault");
        rhs += weights[k] * e.value;
        budget += weights[k] * e.err;
      }
      const Eval ea = eval_mod(avg.quad(), cfg.method);
      if (ea.fault) tally.fault("cross-method fault");
      tally.step_tolerant(rhs, ea.value, budget + ea.err);
      std::ostringstream os;
      os << "family n=" << n << " weights(";
      for (int k = 0; k < n; ++k) os << (k ? "," : "") << fmt(weights[k]);
      os << ")";
      tally.commit(os.str());
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_cor52(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("cor5.2", cfg, false);
  const int grid = 9;
  for (int s = 0; s < cfg.samples; ++s) {
    const double alpha = rng.uniform(-1.0, 1.0);
    const double delta = rng.uniform(-1.5, 1.0);
    const double gamma = delta + rng.uniform(0.5, 2.5);
    const double y0 = alpha + rng.uniform(0.2, 0.5);
    const double span = rng.uniform(1.5, 3.0);
    try {
      std::vector<Eval> evals(grid);
      for (int i = 0; i < grid; ++i) {
        const double y = y0 + span * i / (grid - 1);
        evals[i] = eval_mod(TrapezoidSpec{alpha, y, gamma, delta}.quad(), cfg.method);
        if (evals[i].fault) tally.fault("cross-method fault");
        if (i > 0)
          tally.step_strict(evals[i - 1].value, evals[i].value, evals[i - 1].err + evals[i].err);
      }
      for (int i = 1; i + 1 < grid; ++i) {
        const double second = evals[i + 1].value - 2.0 * evals[i].value + evals[i - 1].value;
        const double budget = evals[i + 1].err + 2.0 * evals[i].err + evals[i - 1].err;
        tally.step_tolerant(second, 0.0, budget);
      }
      tally.commit("alpha=" + fmt(alpha) + " gamma=" + fmt(gamma) + " delta=" + fmt(delta) +
                   " y0=" + fmt(y0) + " span=" + fmt(span));
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_th53(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("th5.3", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    const double gamma = rng.uniform(0.4, 1.4);
    const double beta = gamma + rng.uniform(0.0, 1.4);
    try {
    // property 1: decrease on (-gamma, 0)
    const int g1 = 7;
    double prev = 0.0, prev_err = 0.0;
    for (int i = 0; i < g1; ++i) {
      const double y = -gamma + gamma * (0.06 + 0.88 * i / (g1 - 1));
      const Eval e = eval_mod(q1_quad(y, beta, gamma), cfg.method);
      if (e.fault) tally.fault("cross-method fault");
      if (i > 0) tally.step_strict(prev, e.value, prev_err + e.err);
      prev = e.value;
      prev_err = e.err;
    }
    // property 2: q1(y) > q1(-y)
    const double y2 = -gamma * rng.uniform(0.15, 0.9);
    const Eval el = eval_mod(q1_quad(y2, beta, gamma), cfg.method);
    const Eval er = eval_mod(q1_quad(-y2, beta, gamma), cfg.method);
    tally.step_strict(el.value, er.value, el.err + er.err);
    // property 3: convexity on (-gamma, beta)
    const int g3 = 9;
    std::vector<Eval> evals(g3);
    const double lo = -gamma + 0.04 * (gamma + beta);
    const double hi = beta - 0.04 * (gamma + beta);
    for (int i = 0; i < g3; ++i)
      evals[i] = eval_mod(q1_quad(lo + (hi - lo) * i / (g3 - 1), beta, gamma), cfg.method);
    for (int i = 1; i + 1 < g3; ++i) {
      const double second = evals[i + 1].value - 2.0 * evals[i].value + evals[i - 1].value;
      const double budget = evals[i + 1].err + 2.0 * evals[i].err + evals[i - 1].err;
      tally.step_tolerant(second, 0.0, budget);
    }
    tally.commit("beta=" + fmt(beta) + " gamma=" + fmt(gamma) + " y2=" + fmt(y2));
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_th54(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("th5.4", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    const double phi = rng.uniform(0.25, 1.15);
    const double r1 = 1.0 / std::cos(phi) + rng.uniform(0.15, 0.8);
    const double r2 = r1 + rng.uniform(0.0, 1.0);
    const RaySideSpec spec{phi, r1, r2};
    const double rfix = 1.0 / std::cos(phi);
    const double rlo = spec.r_lo();

    try {
    // property 1: decrease on (r_lo, 1/cos phi)
    const int g1 = 7;
    double prev = 0.0, prev_err = 0.0;
    for (int i = 0; i < g1; ++i) {
      const double r = rlo + (rfix - rlo) * (0.08 + 0.84 * i / (g1 - 1));
      const Eval e = eval_mod(q2_quad(r, spec), cfg.method);
      if (e.fault) tally.fault("cross-method fault");
      if (i > 0) tally.step_strict(prev, e.value, prev_err + e.err);
      prev = e.value;
      prev_err = e.err;
    }
    // property 2: q2(r) > q2(r*)
    const double r = rlo + (rfix - rlo) * rng.uniform(0.1, 0.9);
    const Eval el = eval_mod(q2_quad(r, spec), cfg.method);
    const Eval er = eval_mod(q2_quad(spec.reflected(r), spec), cfg.method);
    tally.step_strict(el.value, er.value, el.err + er.err);
    // property 3: convexity of q2(1/p) in p
    const int g3 = 9;
    const double width = 2.0 * std::cos(phi) - 1.0 / r1 - 1.0 / r2;
    const double plo = 1.0 / r2 + 0.04 * width;
    const double phi_p = 2.0 * std::cos(phi) - 1.0 / r1 - 0.04 * width;
    std::vector<Eval> evals(g3);
    for (int i = 0; i < g3; ++i) {
      const double p = plo + (phi_p - plo) * i / (g3 - 1);
      evals[i] = eval_mod(q2_quad(1.0 / p, spec), cfg.method);
    }
    for (int i = 1; i + 1 < g3; ++i) {
      const double second = evals[i + 1].value - 2.0 * evals[i].value + evals[i - 1].value;
      const double budget = evals[i + 1].err + 2.0 * evals[i].err + evals[i - 1].err;
      tally.step_tolerant(second, 0.0, budget);
    }
    tally.commit("phi=" + fmt(phi) + " r1=" + fmt(r1) + " r2=" + fmt(r2) + " r=" + fmt(r));
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

Report check_q61(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("q6.1", cfg, false);
  for (int s = 0; s < cfg.samples; ++s) {
    bool made = false;
    for (int attempt = 0; attempt < 60 && !made; ++attempt) {
      const double rho_a = rng.uniform(0.2, 2.0);
      const double th_a = rng.uniform(0.07, pi / 2 - 0.07);
      const double rho_b = rng.uniform(0.2, 2.0);
      const double th_b = rng.uniform(pi / 2 + 0.07, pi - 0.07);
      const Complex a = 1.0 + std::polar(rho_a, th_a);
      const Complex b = std::polar(rho_b, th_b);
      Quadrilateral q;
      try {
        q = validate(make_quad(a, b, 0.0, 1.0));
      } catch (const Error&) {
        continue;
      }
      const Quadrilateral cmp = validate(
          make_quad(Complex{1.0, std::abs(a - 1.0)}, Complex{0.0, std::abs(b)}, 0.0, 1.0));
      try {
        const Eval e0 = eval_mod(q, cfg.method);
        const Eval e1 = eval_mod(cmp, cfg.method);
        if (e0.fault || e1.fault) tally.fault("cross-method fault");
        tally.step_tolerant(e1.value, e0.value, e0.err + e1.err);
        tally.commit(fmt_quad(q));
      } catch (const Error&) {
        tally.solver_fault();
      }
      made = true;
    }
    if (!made) tally.skip();
  }
  return tally.finish();
}

Report check_q62(const CheckConfig& cfg) {
  Sampler rng(cfg.seed);
  Tally tally("q6.2", cfg, false);
  const int grid = 9;
  for (int s = 0; s < cfg.samples; ++s) {
    const double h = rng.uniform(0.4, 1.6);
    const double k = rng.uniform(0.4, 1.6);
    const double t_lo = -3.0 * k, t_hi = k;
    const double step = (t_hi - t_lo) / (grid - 1);
    try {
      std::vector<Eval> evals(grid);
      int best = 0;
      for (int i = 0; i < grid; ++i) {
        evals[i] = eval_mod(g_quad(t_lo + step * i, h, k), cfg.method);
        if (evals[i].fault) tally.fault("cross-method fault");
        if (evals[i].value > evals[best].value) best = i;
      }
      const double t_best = t_lo + step * best;
      const int at_k = static_cast<int>(std::lround((-k - t_lo) / step));
      if (std::abs(t_best + k) <= step * 1.001)
        tally.step_tolerant(1.0, 0.0, 0.0);  // grid maximum within one cell of -k
      else
        tally.step_tolerant(evals[at_k].value, evals[best].value,
                            evals[at_k].err + evals[best].err);
      tally.commit("h=" + fmt(h) + " k=" + fmt(k) + " argmax=" + fmt(t_best));
    } catch (const Error&) {
      tally.solver_fault();
    }
  }
  return tally.finish();
}

using CheckFn = Report (*)(const CheckConfig&);

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> reg{
      {"prop1", check_prop1},     {"prop2", check_prop2},   {"th2.1", check_th21},
      {"cor2", check_cor2},       {"th3.1", check_th31},    {"th4.1", check_th41},
      {"remark2", check_remark2}, {"th5.1", check_th51},    {"cor5.2", check_cor52},
      {"th5.3", check_th53},      {"th5.4", check_th54},    {"q6.1", check_q61},
      {"q6.2", check_q62},
  };
  return reg;
}

}  // namespace

std::vector<std::string> known_checks() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

Report verify(const std::string& id, const CheckConfig& cfg) {
  if (cfg.samples < 1 || cfg.margin_mult < 1.0)
    fail(Errc::InvalidConfig, "need samples >= 1 and margin multiplier >= 1");
  const auto it = registry().find(id);
  if (it == registry().end()) fail(Errc::UnknownCheck, "unknown check id: " + id);
  return it->second(cfg);
}

std::pair<double, double> slope_2_3(double M, double phi, const std::vector<double>& h_seq) {
  if (h_seq.size() < 3) fail(Errc::InvalidConfig, "need at least three notch depths");
  for (size_t i = 0; i + 1 < h_seq.size(); ++i)
    if (!(h_seq[i] > h_seq[i + 1]) || !(h_seq[i + 1] > 0.0))
      fail(Errc::InvalidConfig, "depths must decrease toward zero");

  std::vector<double> slope(h_seq.size()), serr(h_seq.size());
  for (size_t i = 0; i < h_seq.size(); ++i) {
    const auto est = modulus_sc(notch_quad(M, phi, h_seq[i]));
    slope[i] = (est.value - M) / h_seq[i];
    serr[i] = est.err / h_seq[i];
  }
  // eliminate the linear error term pairwise: s(h) = s0 + c h + o(h)
  std::vector<double> extr(h_seq.size() - 1);
  for (size_t i = 0; i + 1 < h_seq.size(); ++i)
    extr[i] = (slope[i + 1] * h_seq[i] - slope[i] * h_seq[i + 1]) / (h_seq[i] - h_seq[i + 1]);
  const double est = extr.back();
  double err = 2.0 * serr.back();
  if (extr.size() >= 2) err += std::abs(extr[extr.size() - 1] - extr[extr.size() - 2]);
  return {est, err};
}

RegionMapGrid region_map(const Quadrilateral& q, VertexName v, int grid, double rho) {
  validate(q);
  if (grid < 2) fail(Errc::InvalidConfig, "grid must have at least two points per side");
  if (!(rho > 0.0)) fail(Errc::OutOfRange, "probe radius must be positive");
  const int vi = static_cast<int>(v);
  const Point2 center = q.vertex(vi);
  const auto base = modulus_sc(q);

  RegionMapGrid out;
  out.vertex = v;
  out.center = center;
  out.rho = rho;
  out.base_modulus = base.value;
  out.base_err = base.err;

  const double step = 2.0 * rho / (grid - 1);
  for (int iy = 0; iy < grid; ++iy) {
    for (int ix = 0; ix < grid; ++ix) {
      const Point2 t{center.x - rho + step * ix, center.y - rho + step * iy};
      if (std::abs(cx(t) - cx(center)) < 1e-12 * (1.0 + std::abs(cx(center)))) continue;
      Quadrilateral moved = q;
      (vi == 0 ? moved.a : vi == 1 ? moved.b : vi == 2 ? moved.c : moved.d) = t;
      ModulusEstimate est;
      try {
        validate(moved);
        est = modulus_sc(moved);
      } catch (const Error& e) {
        fail(Errc::OutOfRange,
             std::string("probe radius too large: a probed polygon is invalid (") + e.what() +
                 ")");
      }
      RegionProbe probe;
      probe.target = t;
      probe.modulus = est.value;
      probe.err = est.err;
      const double delta = est.value - base.value;
      const double budget = 3.0 * (est.err + base.err) + 1e-11;
      probe.sign = std::abs(delta) <= budget ? 0 : (delta > 0.0 ? 1 : -1);
      probe.certain = probe.sign != 0;
      out.probes.push_back(probe);
    }
  }
  return out;
}

std::vector<SweepRow> sweep(const std::string& family, const nlohmann::json& params, int grid) {
  if (grid < 2) fail(Errc::InvalidConfig, "grid must have at least two points");
  auto need = [&params](const char* key) -> double {
    if (!params.contains(key) || !params[key].is_number())
      fail(Errc::InvalidConfig, std::string("missing numeric parameter: ") + key);
    return params[key].get<double>();
  };
  auto opt = [&params](const char* key, double fallback) -> double {
    if (!params.contains(key)) return fallback;
    if (!params[key].is_number())
      fail(Errc::InvalidConfig, std::string("parameter must be numeric: ") + key);
    return params[key].get<double>();
  };

  std::vector<SweepRow> rows;
  auto emit = [&rows](double p, const Quadrilateral& q) {
    const auto est = modulus_sc(q);
    rows.push_back({p, est.value, est.err});
  };

  if (family == "qlambda") {
    const TrapezoidSpec spec{need("alpha"), need("beta"), need("gamma"), need("delta")};
    for (int i = 0; i < grid; ++i) {
      const double l = static_cast<double>(i) / (grid - 1);
      emit(l, symmetrize_lambda(spec, l).quad());
    }
  } else if (family == "q1") {
    const double beta = need("beta"), gamma = need("gamma");
    const double inset = 0.02 * (beta + gamma);
    for (int i = 0; i < grid; ++i) {
      const double y = -gamma + inset + (beta + gamma - 2 * inset) * i / (grid - 1);
      emit(y, q1_quad(y, beta, gamma));
    }
  } else if (family == "q2") {
    const RaySideSpec spec{need("phi"), need("r1"), need("r2")};
    const double plo = 1.0 / spec.r2;
    const double phi_p = 2.0 * std::cos(spec.phi) - 1.0 / spec.r1;
    const double inset = 0.02 * (phi_p - plo);
    for (int i = 0; i < grid; ++i) {
      const double p = plo + inset + (phi_p - plo - 2 * inset) * i / (grid - 1);
      emit(p, q2_quad(1.0 / p, spec));
    }
  } else if (family == "g") {
    const double h = need("h"), k = need("k");
    const double tmin = opt("tmin", -3.0 * k), tmax = opt("tmax", k);
    for (int i = 0; i < grid; ++i) {
      const double t = tmin + (tmax - tmin) * i / (grid - 1);
      emit(t, g_quad(t, h, k));
    }
  } else if (family == "cor2") {
    const double r = need("r");
    if (!params.contains("b") || !params["b"].is_array() || params["b"].size() != 2)
      fail(Errc::InvalidConfig, "missing parameter: b (two-element array)");
    const Point2 b{params["b"][0].get<double>(), params["b"][1].get<double>()};
    const double phi0 = tangency_phi0(r, b);
    for (int i = 0; i < grid; ++i) {
      const double phi = phi0 * i / (grid - 1);
      emit(phi, validate(make_quad(1.0 + std::polar(r, phi), cx(b), 0.0, 1.0)));
    }
  } else if (family == "notch") {
    const double m = need("m"), phi = need("phi");
    const double hmax = opt("hmax", 0.4 * std::min(m, 1.0));
    for (int i = 0; i < grid; ++i) {
      const double h = hmax * i / (grid - 1);
      emit(h, notch_quad(m, phi, h));
    }
  } else {
    fail(Errc::UnknownFamily, "unknown sweep family: " + family);
  }
  return rows;
}

Report explore(const std::string& problem, const CheckConfig& cfg) {
  if (cfg.samples < 1 || cfg.margin_mult < 1.0)
    fail(Errc::InvalidConfig, "need samples >= 1 and margin multiplier >= 1");
  Sampler rng(cfg.seed);
  Tally tally(problem, cfg, true);

  if (problem == "op63a" || problem == "op63b") {
    const Op63Variant variant =
        problem == "op63a" ? Op63Variant::EqualArea : Op63Variant::SegmentDistance;
    for (int s = 0; s < cfg.samples; ++s) {
      const Point2 a{rng.uniform(-0.5, 2.0), rng.uniform(0.15, 2.0)};
      const Point2 b{rng.uniform(-1.5, 1.2), rng.uniform(0.15, 2.0)};
      std::pair<Quadrilateral, Quadrilateral> pair;
      try {
        pair = op63_pair(a, b, variant);
      } catch (const Error&) {
        tally.skip();
        continue;
      }
      try {
        const Eval e0 = eval_mod(pair.first, cfg.method);
        const Eval e1 = eval_mod(pair.second, cfg.method);
        if (e0.fault || e1.fault) tally.fault("cross-method fault");
        tally.step_strict(e1.value, e0.value, e0.err + e1.err);
        tally.commit("a=(" + fmt(a.x) + "," + fmt(a.y) + ") b=(" + fmt(b.x) + "," + fmt(b.y) +
                     ")");
      } catch (const Error&) {
        tally.solver_fault();
      }
    }
  } else if (problem == "op65") {
    for (int s = 0; s < cfg.samples; ++s) {
      bool made = false;
      for (int attempt = 0; attempt < 60 && !made; ++attempt) {
        const double alpha = rng.uniform(0.15, pi - 0.3);
        const double beta = rng.uniform(0.1, pi - 0.1);
        const double r = rng.uniform(0.3, 2.0);
        const double sr = rng.uniform(0.3, 2.0);
        std::array<Quadrilateral, 3> qs;
        try {
          qs = op65_triple(alpha, beta, r, sr);
        } catch (const Error&) {
          continue;
        }
        try {
          const Eval c1 = eval_mod(qs[0], cfg.method);
          const Eval c2 = eval_mod(qs[1], cfg.method);
          const Eval c3 = eval_mod(qs[2], cfg.method);
          if (c1.fault || c2.fault || c3.fault) tally.fault("cross-method fault");
          const double lo = std::min(c2.value, c3.value);
          const double hi = std::max(c2.value, c3.value);
          const double budget = c1.err + c2.err + c3.err;
          // sandwich margin: distance of c1 from the nearer bound, negative outside
          const double margin = std::min(c1.value - lo, hi - c1.value);
          tally.step_strict(margin, 0.0, budget);
          tally.commit("alpha=" + fmt(alpha) + " beta=" + fmt(beta) + " r=" + fmt(r) +
                       " s=" + fmt(sr) + " c=(" + fmt(c1.value) + "," + fmt(c2.value) + "," +
                       fmt(c3.value) + ")");
        } catch (const Error&) {
          tally.solver_fault();
        }
        made = true;
      }
      if (!made) tally.skip();
    }
  } else {
    fail(Errc::UnknownCheck, "unknown exploration problem: " + problem);
  }
  return tally.finish();
}

}  // namespace quadmod
