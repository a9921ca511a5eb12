#include "gwtails/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "gwtails/errors.hpp"

namespace gwt {

int Polynomial::degree() const {
  for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
    if (c_[k] != 0.0) return k;
  return 0;
}

double Polynomial::inf_norm() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(double x0) const {
  // Repeated synthetic division in place; a[j] ends up as the j-th Taylor
  // coefficient of p at x0.
  std::vector<double> a = c_;
  const int n = static_cast<int>(a.size()) - 1;
  for (int j = 0; j <= n; ++j)
    for (int k = n - 1; k >= j; --k) a[k] += x0 * a[k + 1];
  return Polynomial(std::move(a));
}

namespace {

bool sort_re_im(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::pair<Complex, Complex> horner_cd(const std::vector<Complex>& c, Complex z) {
  Complex val{}, der{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    der = der * z + val;
    val = val * z + *it;
  }
  return {val, der};
}

}  // namespace

RootSet aberth_roots(std::vector<Complex> coeffs, double tol, int max_iterations) {
  RootSet out;
  double maxc = 0.0;
  for (const auto& c : coeffs) maxc = std::max(maxc, std::abs(c));
  if (maxc == 0.0)
    throw RootFindFailure("polynomial", "aberth_roots", "zero polynomial has no isolated roots");

  // Leading coefficients that cancelled (roots escaped to infinity).
  const double drop_tol = 1e-14 * maxc;
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= drop_tol) {
    coeffs.pop_back();
    ++out.dropped_at_infinity;
  }
  // Exact zero roots at the origin.
  std::size_t zero_roots = 0;
  while (zero_roots + 1 < coeffs.size() && std::abs(coeffs[zero_roots]) == 0.0) ++zero_roots;
  for (std::size_t k = 0; k < zero_roots; ++k) out.roots.push_back(Complex(0.0, 0.0));
  std::vector<Complex> c(coeffs.begin() + zero_roots, coeffs.end());

  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) {
    std::sort(out.roots.begin(), out.roots.end(), sort_re_im);
    return out;
  }
  if (n == 1) {
    out.roots.push_back(-c[0] / c[1]);
    std::sort(out.roots.begin(), out.roots.end(), sort_re_im);
    return out;
  }

  // Cauchy bound, perturbed-circle start.
  double bound = 0.0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[k] / c[n]));
  bound = 1.0 + bound;
  double inner = std::pow(std::abs(c[0] / c[n]), 1.0 / n);
  if (!(inner > 0.0) || !std::isfinite(inner)) inner = 0.5 * bound;
  const double radius = std::min(bound, std::max(0.5 * inner, 1e-3 * bound));

  std::vector<Complex> x(n);
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * kPi * k / n + 0.4;  // fixed offset avoids real-axis symmetry traps
    const double rk = radius * (1.0 + 0.06 * ((k % 5) - 2) / 5.0);
    x[k] = Complex(rk * std::cos(angle), rk * std::sin(angle));
  }

  bool converged = false;
  for (int iter = 0; iter < max_iterations && !converged; ++iter) {
    converged = true;
    for (int k = 0; k < n; ++k) {
      auto [val, der] = horner_cd(c, x[k]);
      if (val == Complex(0.0, 0.0)) continue;
      Complex newton;
      if (der == Complex(0.0, 0.0)) {
        newton = Complex(std::abs(val) / maxc, 0.0);  // nudge off a critical point
      } else {
        newton = val / der;
      }
      Complex sum{};
      for (int j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (x[k] - x[j]);
      Complex denom = 1.0 - newton * sum;
      Complex correction = (std::abs(denom) > 1e-300) ? newton / denom : newton;
      x[k] -= correction;
      if (std::abs(correction) > tol * (1.0 + std::abs(x[k]))) converged = false;
    }
  }
  if (!converged)
    throw RootFindFailure("polynomial", "aberth_roots",
                          "no convergence after max iterations (ill-conditioned coefficients)");

  for (const auto& r : x) out.roots.push_back(r);
  std::sort(out.roots.begin(), out.roots.end(), sort_re_im);
  return out;
}

}  // namespace gwt
