#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gwtails/polynomial.hpp"
#include "gwtails/types.hpp"

namespace gwt {

struct ValidationReport {
  bool valid = false;
  double r = 0.0;
  double mean = 0.0;  // E = G'(1)
  std::vector<std::string> violations;
};

/// Probability-generating function G(z) = P(z)/Q(z) of an offspring
/// distribution with minimum family size 1, supercritical (E > 1).
///
/// Construction validates the model: q0 != 0, p0 = 0, G(1) = 1, 0 < r < 1,
/// E > 1, M >= 1, P and Q coprime, the first 64 Maclaurin coefficients
/// nonnegative, and all zeros of Q simple.
class RationalPGF {
 public:
  static ValidationReport validate(const std::vector<double>& p_coeffs,
                                   const std::vector<double>& q_coeffs);
  static RationalPGF from_coeffs(std::vector<double> p_coeffs,
                                 std::vector<double> q_coeffs);
  /// Parses {"p": [...], "q": [...]} (ascending power order).
  static RationalPGF from_json_text(const std::string& text);
  static RationalPGF from_json_file(const std::string& path);

  const Polynomial& p() const { return p_; }
  const Polynomial& q() const { return q_; }
  double r() const { return r_; }
  double mean() const { return mean_; }          // E
  double g2() const { return g2_; }              // G''(1)
  int deg_gap() const { return deg_gap_; }       // deg P - deg Q
  double log_mean() const { return log_mean_; }  // ln E

  /// Canonical JSON form and a short stable hash of it, used for output provenance.
  std::string canonical_json() const;
  std::string hash() const;

  /// G(z) and G'(z) by Horner + quotient rule. Throws PoleOfG near zeros of Q.
  std::pair<Complex, Complex> eval_g(Complex z) const;
  Complex g(Complex z) const { return eval_g(z).first; }

  /// Maclaurin coefficients of G: returns v with v[k] = p-hat_k for k = 1..K
  /// (v[0] = 0). Throws NegativeCoefficient if a coefficient < -1e-12.
  std::vector<double> offspring_taylor(int K) const;

  /// All zeros of Q, sorted by (Re, Im). Simplicity asserted at construction.
  const std::vector<Complex>& q_zeros() const { return q_zeros_; }

  struct Preimages {
    std::vector<Complex> points;  // sorted by (Re, Im)
    int dropped_at_infinity = 0;
  };
  /// Finite roots w of P(w) - z Q(w) = 0.
  Preimages preimages(Complex z) const;

  /// G1(z) = (G(z) - 1 - E(z-1)) / (z-1)^2, local Taylor near z = 1.
  Complex aux_g1(Complex z) const;
  Complex aux_g1_derivative(Complex z) const;
  /// G0(z) = (G(z) - r z) / z^2, local Taylor near z = 0.
  Complex aux_g0(Complex z) const;

 private:
  RationalPGF(std::vector<double> p_coeffs, std::vector<double> q_coeffs);

  Polynomial p_, q_, q_derivative_;
  double r_ = 0.0, mean_ = 0.0, g2_ = 0.0, log_mean_ = 0.0;
  int deg_gap_ = 0;
  std::vector<Complex> q_zeros_;
  std::vector<double> taylor_at_one_;  // G(1+u) = sum a_k u^k, k <= 5
  std::vector<double> maclaurin_;      // G(z)   = sum c_k z^k, k <= 5
};

}  // namespace gwt
