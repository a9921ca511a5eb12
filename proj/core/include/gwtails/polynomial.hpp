#pragma once

#include <vector>

#include "gwtails/types.hpp"

namespace gwt {

/// Real-coefficient polynomial, coefficients in ascending power order.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
  }

  int degree() const;  // degree of the highest nonzero coefficient; 0 for the zero polynomial
  const std::vector<double>& coeffs() const { return c_; }
  double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
  double inf_norm() const;

  template <typename Scalar>
  Scalar eval(Scalar z) const {
    Scalar acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Horner pass that carries the derivative along with the value.
  template <typename Scalar>
  std::pair<Scalar, Scalar> eval_with_derivative(Scalar z) const {
    Scalar val{}, der{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      der = der * z + val;
      val = val * z + *it;
    }
    return {val, der};
  }

  Polynomial derivative() const;

  /// Coefficients of p(x0 + u) as a polynomial in u (binomial shift).
  Polynomial shifted(double x0) const;

 private:
  std::vector<double> c_;
};

struct RootSet {
  std::vector<Complex> roots;    // sorted by (Re, Im)
  int dropped_at_infinity = 0;   // leading-coefficient cancellations
};

/// All complex roots of the polynomial with the given (complex) coefficients,
/// by Aberth-Ehrlich simultaneous iteration with Cauchy-bound initialization
/// on a perturbed circle. Deterministic: no randomness, canonical ordering.
RootSet aberth_roots(std::vector<Complex> coeffs, double tol = 1e-13,
                     int max_iterations = 200);

}  // namespace gwt
