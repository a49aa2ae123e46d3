#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quadmod/geometry.hpp"

namespace quadmod {

enum class EvalMethod { SC, FEM, Both };

struct CheckConfig {
  std::uint64_t seed = 1;
  int samples = 20;
  EvalMethod method = EvalMethod::SC;
  double margin_mult = 3.0;  // required clearance in units of the error budget
};

struct FailureRecord {
  std::string input;  // reproducible description of the failing configuration
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

/// Outcome of one named check. For conjecture explorations `passes` counts
/// supported samples and `failures` lists candidate counterexamples; the
/// serialization switches wording accordingly.
struct Report {
  std::string check_id;
  std::uint64_t seed = 0;
  int samples = 0;
  int passes = 0;
  int inconclusive = 0;
  int skipped = 0;        // configurations rejected before evaluation
  int solver_faults = 0;  // per-sample solver errors, recorded but not fatal
  std::vector<FailureRecord> failures;
  double worst_margin = 0.0;
  double error_budget = 0.0;
  bool conjecture = false;
};

/// Runs one named inequality/monotonicity/convexity check. Known ids:
/// prop1, prop2, th2.1, cor2, th3.1, th4.1, remark2, th5.1, cor5.2, th5.3,
/// th5.4, q6.1, q6.2.
Report verify(const std::string& id, const CheckConfig& cfg);

std::vector<std::string> known_checks();

/// Extrapolated slope of h -> modulus of the notched rectangle at h -> 0,
/// with a spread-based error estimate. h_seq must be decreasing, >= 3 values.
std::pair<double, double> slope_2_3(double M, double phi, const std::vector<double>& h_seq);

struct RegionProbe {
  Point2 target;
  double modulus = 0.0;
  double err = 0.0;
  int sign = 0;  // +1 / -1 when the change clears the budget, else 0
  bool certain = false;
};

struct RegionMapGrid {
  VertexName vertex{};
  Point2 center{};
  double rho = 0.0;
  double base_modulus = 0.0;
  double base_err = 0.0;
  std::vector<RegionProbe> probes;
};

/// Sign chart of the modulus change when one vertex moves over an n-by-n grid
/// spanning [-rho, rho]^2 around its position.
RegionMapGrid region_map(const Quadrilateral& q, VertexName v, int grid, double rho);

struct SweepRow {
  double parameter = 0.0;
  double modulus = 0.0;
  double err = 0.0;
};

/// Modulus along a named one-parameter family:
/// qlambda {alpha,beta,gamma,delta}, q1 {beta,gamma}, q2 {phi,r1,r2},
/// g {h,k[,tmin,tmax]}, cor2 {r,b:[x,y]}, notch {m,phi[,hmax]}.
std::vector<SweepRow> sweep(const std::string& family, const nlohmann::json& params, int grid);

/// Observational sampling of an open problem: op63a, op63b, op65. Reports
/// supported samples and candidate counterexamples; never claims proof.
Report explore(const std::string& problem, const CheckConfig& cfg);

}  // namespace quadmod
