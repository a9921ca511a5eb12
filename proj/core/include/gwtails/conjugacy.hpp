#pragma once

#include <vector>

#include "gwtails/pgf.hpp"
#include "gwtails/types.hpp"

namespace gwt {

struct IterationConfig {
  int t_max = 150;
  double stop_tol = 1e-15;
};

struct ValueDeriv {
  Complex value;
  Complex derivative;
};

/// Scaled Taylor coefficients of the inverse Schroeder conjugacy:
/// scaled[m] = a^m kappa_m, where Phi^{-1}(z) = sum kappa_m z^m.
struct KappaTable {
  double a = 1.0;
  std::vector<double> scaled;  // index m = 1..m_max(); scaled[0] unused
  int m_max() const { return static_cast<int>(scaled.size()) - 1; }
};

/// Iteration engine for the Poincare conjugacy Pi (G(Pi(z)) = Pi(Ez),
/// Pi(0) = 1, Pi'(0) = 1), its derivative and local inverse, and the
/// Schroeder conjugacy Phi (Phi(G(z)) = r Phi(z), Phi(0) = 0, Phi'(0) = 1).
class ConjugacyEvaluator {
 public:
  /// The model reference must outlive the evaluator.
  ConjugacyEvaluator(const RationalPGF& model, IterationConfig cfg = {});

  const RationalPGF& model() const { return *model_; }
  const IterationConfig& config() const { return cfg_; }

  /// Pi(z) by the inner-perturbation cascade
  ///   w <- w + w^2 E^{-(t+2)} G1(1 + w E^{-(t+1)}),  t = t_max-1 .. 0,
  /// which avoids the 1 + z/E^t rounding of the naive orbit form.
  Complex pi_eval(Complex z) const;

  /// Pi and Pi' in one pass (chain rule over the cascade maps).
  ValueDeriv pi_eval_d(Complex z) const;
  Complex pi_derivative(Complex z) const { return pi_eval_d(z).derivative; }

  /// Phi(z) by the forward recurrence Phi_{t+1} = Phi_t + r^{t-1} Phi_t^2 G0(r^t Phi_t).
  Complex phi_eval(Complex z) const;

  /// Preimage of z under G nearest to the first-order predictor 1 + (z-1)/E.
  /// Throws BranchAmbiguity when two roots are equidistant within 1e-10.
  Complex principal_preimage(Complex z) const;

  /// Pi^{-1}(w) by principal-branch backward iteration toward the repelling
  /// fixed point 1, finished with a Newton solve on pi_eval near 0.
  /// Satisfies E * pi_inverse(principal_preimage(w)) = pi_inverse(w) exactly.
  Complex pi_inverse(Complex w) const;

 private:
  const RationalPGF* model_;
  IterationConfig cfg_;
  std::vector<double> inv_epow_;  // inv_epow_[k] = E^{-k}, k = 0..t_max+2
};

/// Taylor coefficients of Phi^{-1} solved order by order from the power-series
/// identity S(rz) Q(S(z)) = P(S(z)) with kappa_1 = a (yielding a^m kappa_m).
KappaTable phi_inverse_coeffs(const RationalPGF& model, int m_max, double a);

/// Scale a so that |a^m kappa_m| stays within double range over m <= m_max.
double auto_kappa_scale(const RationalPGF& model, int m_max);

/// Truncated series Phi^{-1}(w) = sum kappa_m w^m evaluated from the scaled
/// table: sum scaled[m] * (w/a)^m.
Complex phi_inverse_series(const KappaTable& table, Complex w);

}  // namespace gwt
