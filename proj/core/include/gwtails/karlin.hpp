#pragma once

#include <iosfwd>
#include <vector>

#include "gwtails/conjugacy.hpp"
#include "gwtails/pgf.hpp"
#include "gwtails/types.hpp"

namespace gwt {

/// One-periodic Karlin-McGregor function K(z) = r^{-z} Phi(Pi(-E^z)).
/// Defined for |Im z| inside the analyticity strip; divergence of the
/// underlying iterations signals a strip violation.
Complex k_eval(const ConjugacyEvaluator& ev, Complex z);

/// Normalized Fourier coefficients of K(z)^m along the shifted line
/// Im z = -y_shift:  values(m, n) = e^{2 pi n y} theta*_{m,n}
///                              = int_0^1 K(x - i y)^m e^{-2 pi i n x} dx,
/// computed by the periodic trapezoid rule with `nodes` uniform points.
/// Negative n follow downstream from theta*_{m,-n} = conj(theta*_{m,n}).
struct ThetaTable {
  int m_max = 0;
  int n_max = 0;
  double y_shift = 0.0;
  long long nodes = 0;
  std::vector<Complex> values;  // row-major: (m-1)*(n_max+1) + n

  const Complex& at(int m, int n) const { return values[(m - 1) * (n_max + 1) + n]; }
};

ThetaTable theta_star(const ConjugacyEvaluator& ev, int m_max, int n_max,
                      double y_shift, long long nodes);

/// Least-squares exponential decay rate c of |theta_n| ~ C e^{-c n} over the
/// m = 1 row, fitted in the log domain (so underflow of theta_n itself is
/// immaterial). Returns {c, ln C}.
struct DecayFit {
  double rate = 0.0;
  double log_amplitude = 0.0;
};
DecayFit fit_theta_decay(const ThetaTable& table);

/// Relative Parseval gap |int_0^1 K^2 - sum |theta_n|^2| / int_0^1 K^2 at
/// y = 0, with the truncation tail estimated from the fitted decay.
double parseval_relative_gap(const ConjugacyEvaluator& ev, int n_max, long long nodes);

/// Default shifted line for a model: close to the strip edge implied by an
/// estimated critical angle, with a safety margin.
double default_y_shift(const RationalPGF& model, double theta_hat);

/// default_y_shift backed off until |K| stays tame on the line: large sample
/// magnitudes cost the low-harmonic rows their significant digits (the shift
/// buys back exactly what the cancellation spends).
double choose_y_shift(const ConjugacyEvaluator& ev, double theta_hat);

void write_theta_csv(std::ostream& out, const ThetaTable& table,
                     const std::string& provenance);

}  // namespace gwt
