#include "quadmod/special_functions.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

namespace quadmod {

double agm(double a, double g) {
  if (!(a >= 0.0) || !(g >= 0.0)) fail(Errc::OutOfRange, "agm needs nonnegative arguments");
  if (g == 0.0 || a == 0.0) return 0.0;
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + g);
    const double gn = std::sqrt(a * g);
    a = an;
    g = gn;
    if (std::abs(a - g) <= 4.0 * std::numeric_limits<double>::epsilon() * a) break;
  }
  return 0.5 * (a + g);
}

double ell_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) fail(Errc::OutOfRange, "ell_K requires 0 <= k < 1");
  const double kprime = std::sqrt((1.0 - k) * (1.0 + k));
  return std::numbers::pi / (2.0 * agm(1.0, kprime));
}

EllipticParam EllipticParam::from_k(double k) {
  if (!(k > 0.0 && k < 1.0)) fail(Errc::OutOfRange, "elliptic modulus must lie in (0,1)");
  return {k, std::sqrt((1.0 - k) * (1.0 + k))};
}

EllipticParam EllipticParam::from_pair(double k, double kprime) {
  if (!(k > 0.0 && k < 1.0 && kprime > 0.0 && kprime < 1.0))
    fail(Errc::OutOfRange, "elliptic moduli must lie in (0,1)");
  if (std::abs(k * k + kprime * kprime - 1.0) > 1e-14)
    fail(Errc::InvalidConfig, "k^2 + k'^2 != 1");
  return {k, kprime};
}

double ell_K(const EllipticParam& p) { return std::numbers::pi / (2.0 * agm(1.0, p.kprime)); }

double ell_K_prime(const EllipticParam& p) { return std::numbers::pi / (2.0 * agm(1.0, p.k)); }

double cross_ratio(CRPoint z1, CRPoint z2, CRPoint z3, CRPoint z4) {
  const CRPoint pts[4] = {z1, z2, z3, z4};
  int inf_count = 0;
  for (const auto& p : pts) inf_count += p.infinite ? 1 : 0;
  if (inf_count > 1) fail(Errc::Degenerate, "at most one point may be infinite");
  double min_sep = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (pts[i].infinite || pts[j].infinite) continue;
      min_sep = std::min(min_sep, std::abs(pts[i].z - pts[j].z));
      scale = std::max(scale, std::abs(pts[i].z - pts[j].z));
    }
  if (min_sep <= 1e-14 * scale) fail(Errc::Degenerate, "cross-ratio points coincide");

  Complex cr;
  if (z1.infinite)
    cr = (z2.z - z4.z) / (z2.z - z3.z);
  else if (z2.infinite)
    cr = (z1.z - z3.z) / (z1.z - z4.z);
  else if (z3.infinite)
    cr = (z2.z - z4.z) / (z1.z - z4.z);
  else if (z4.infinite)
    cr = (z1.z - z3.z) / (z2.z - z3.z);
  else
    cr = ((z1.z - z3.z) * (z2.z - z4.z)) / ((z1.z - z4.z) * (z2.z - z3.z));
  if (std::abs(cr.imag()) > 1e-9 * (1.0 + std::abs(cr.real())))
    fail(Errc::Degenerate, "cross-ratio is not real for this configuration");
  return cr.real();
}

EllipticParam elliptic_from_crdelta(double d) {
  if (!(d > 0.0)) fail(Errc::OutOfRange, "cross-ratio must exceed 1");
  const double s = std::sqrt(1.0 + d);
  const double k = d / ((s + 1.0) * (s + 1.0));
  const double kprime = 2.0 * std::sqrt(s) / (s + 1.0);
  return {k, kprime};
}

EllipticParam elliptic_from_crossratio(double cr) {
  if (!(cr > 1.0)) fail(Errc::OutOfRange, "cross-ratio must exceed 1");
  return elliptic_from_crdelta(cr - 1.0);
}

double modulus_from_crdelta(double d) {
  const EllipticParam p = elliptic_from_crdelta(d);
  return agm(1.0, p.kprime) / (2.0 * agm(1.0, p.k));
}

double modulus_from_crossratio(double cr) {
  if (!(cr > 1.0)) fail(Errc::OutOfRange, "cross-ratio must exceed 1");
  return modulus_from_crdelta(cr - 1.0);
}

QuadratureRule gauss_jacobi_rule(int n, double alpha_exp, double beta_exp) {
  if (n < 1) fail(Errc::OutOfRange, "rule size must be positive");
  if (!(alpha_exp > -1.0) || !(beta_exp > -1.0))
    fail(Errc::OutOfRange, "Jacobi exponents must exceed -1");
  const double a = alpha_exp, b = beta_exp;

  // Recurrence coefficients of the monic Jacobi polynomials.
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
  diag(0) = (b - a) / (a + b + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
  }
  if (n > 1) {
    const double s = a + b + 2.0;
    sub(0) = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) / (s * s * (s + 1.0)));
  }
  for (int k = 2; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double bk = 4.0 * k * (k + a) * (k + b) * (k + a + b) /
                      (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(bk);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) fail(Errc::NonIntegrable, "Jacobi matrix eigensolve failed");

  const double mu0 = std::exp((a + b + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  QuadratureRule rule;
  rule.alpha_exp = a;
  rule.beta_exp = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  return rule;
}

}  // namespace quadmod
