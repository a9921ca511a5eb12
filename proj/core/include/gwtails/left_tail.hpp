#pragma once

#include <span>
#include <vector>

#include "gwtails/conjugacy.hpp"
#include "gwtails/karlin.hpp"
#include "gwtails/pgf.hpp"
#include "gwtails/types.hpp"

namespace gwt {

/// Principal log-gamma for Re z > 0 (Lanczos approximation, ~1e-13 relative).
Complex log_gamma(Complex z);

struct LeftTailConfig {
  int m_terms = 30;
  int n_harmonics = 50;
  double alpha = 0.0;  // -1 - log_E r
  double beta = 0.0;   // -log_E r
  /// Largest tolerated |last term| / |sum|; beyond it density_left throws
  /// NonConvergence. Paper-scale term counts satisfy 1e-6 on (0, 3]; shorter
  /// desk-scale runs should declare their looser target here.
  double convergence_tol = 1e-6;

  /// Computes alpha/beta and enforces the hypotheses alpha > 0, beta > 1
  /// (log_E r < -1); throws HypothesisViolation otherwise.
  static LeftTailConfig for_model(const RationalPGF& model, int m_terms = 30,
                                  int n_harmonics = 50);
};

/// log of kappa_m theta*_{m,n} / Gamma(-(2 pi i n + m ln r)/ln E), assembled
/// from the scaled tables entirely in the log domain. A vanished table entry
/// yields real part -inf (the term is exactly zero downstream).
Complex term_log_ratio(const RationalPGF& model, const KappaTable& kappa,
                       const ThetaTable& theta, int m, int n);

struct VmValue {
  LogReal value;
  double imag_residual_rel = 0.0;  // conjugate-pairing check on the n = 0 term
};

/// V_m(x) = K_m(-ln x / ln E): harmonic sum n = -H..H with conjugate pairing.
VmValue v_m(const RationalPGF& model, const KappaTable& kappa, const ThetaTable& theta,
            int m, double x, int n_harmonics);

struct LeftTailDensity {
  std::vector<double> values;
  std::vector<double> truncation_estimate;  // |last term| per grid point
};

/// Left-tail series p(x) = x^alpha V_1(x) + x^{alpha+beta} V_2(x) + ...
/// summed to cfg.m_terms. Throws NonConvergence when the last term exceeds
/// cfg.convergence_tol * |sum| at some grid point.
LeftTailDensity density_left(const RationalPGF& model, const KappaTable& kappa,
                             const ThetaTable& theta, const LeftTailConfig& cfg,
                             std::span<const double> x_grid);

}  // namespace gwt
