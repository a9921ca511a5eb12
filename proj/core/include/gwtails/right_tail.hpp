#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gwtails/conjugacy.hpp"
#include "gwtails/pgf.hpp"
#include "gwtails/types.hpp"

namespace gwt {

/// One pole omega of Pi with its residue and provenance:
/// omega = E^power * Pi^{-1}(G^{-1}_{w1} o ... o G^{-1}_{wm}(z_j)) * E^propagation_k,
/// where m = depth, the w's are branch_word (canonical root indices), and
/// z_j = q_zeros()[source_zero]. propagation_k > 0 only when deg P = deg Q + 1.
struct PoleRecord {
  Complex omega;
  Complex residue{};
  int depth = 0;
  int power = 0;
  int source_zero = 0;
  std::vector<int> branch_word;
  int propagation_k = 0;
  double cert_residual = 0.0;  // |Pi(omega/E) - z_j| / |z_j|, primaries only
};

struct EnumerationConfig {
  double r_max = 500.0;
  int depth_max = 32;
  bool asymptotic_only = false;  // permit deg P > deg Q + 1 (series is asymptotic there)
  double dedupe_rel = 1e-8;
  double frontier_margin = 6.0;  // expand the tree this factor past r_max
};

struct Enumeration {
  std::vector<PoleRecord> records;  // ascending Re omega, then Im
  int primaries = 0;
  int propagated = 0;
  int skipped_branch_ambiguity = 0;
  int skipped_divergence = 0;
  int flagged_degenerate = 0;
  bool asymptotic_only = false;
  /// Smallest real part seen among candidates outside r_max (series
  /// truncation frontier; +inf when nothing was excluded).
  double frontier_re = std::numeric_limits<double>::infinity();
  double frontier_residue_scale = 0.0;  // largest |residue| in the outer Re quartile
};

/// Breadth-first expansion of the preimage tree rooted at each zero of Q.
/// Throws HypothesisViolation when log_E r >= -1, NotApplicable when
/// deg P > deg Q + 1 without the asymptotic-only override.
Enumeration enumerate_poles(const ConjugacyEvaluator& ev, const EnumerationConfig& cfg);

/// Residue of Pi at record.omega: for primaries the simple-pole formula
/// E P(z_j) / (Q'(z_j) Pi'(omega/E)); E-propagated poles carry the extra
/// factor (cE)^k with c = p_N/q_M. Throws DegenerateDerivative when
/// Pi'(omega/E) vanishes.
Complex residue_at(const ConjugacyEvaluator& ev, const PoleRecord& record);

struct RightTailDensity {
  std::vector<double> values;
  std::vector<double> truncation_estimate;  // per grid point
};

/// p_a(x) = -sum Res(Pi, omega) e^{-omega x}, conjugate pairs combined into
/// real terms. Records must be sorted by ascending Re omega.
RightTailDensity density_right(const Enumeration& enumeration,
                               std::span<const double> x_grid);

void write_poles_csv(std::ostream& out, const Enumeration& enumeration,
                     const std::string& provenance);

}  // namespace gwt
