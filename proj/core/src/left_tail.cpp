#include "gwtails/left_tail.hpp"

#include <cmath>
#include <limits>

#include "gwtails/errors.hpp"
#include "gwtails/parallel.hpp"

namespace gwt {

Complex log_gamma(Complex z) {
  // Lanczos, g = 7, 9 terms; valid (and only used) for Re z > 0.
  static const double coeffs[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  const Complex zm1 = z - 1.0;
  Complex series = coeffs[0];
  for (int k = 1; k < 9; ++k) series += coeffs[k] / (zm1 + static_cast<double>(k));
  const Complex t = zm1 + 7.5;
  return 0.91893853320467274178 /* ln sqrt(2 pi) */ + (zm1 + 0.5) * std::log(t) - t +
         std::log(series);
}

LeftTailConfig LeftTailConfig::for_model(const RationalPGF& model, int m_terms,
                                         int n_harmonics) {
  LeftTailConfig cfg;
  cfg.m_terms = m_terms;
  cfg.n_harmonics = n_harmonics;
  const double log_e_r = std::log(model.r()) / model.log_mean();
  cfg.alpha = -1.0 - log_e_r;
  cfg.beta = -log_e_r;
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 1.0))
    throw HypothesisViolation("left_tail", "for_model",
                              "requires log_E r < -1 (alpha > 0, beta > 1)");
  return cfg;
}

Complex term_log_ratio(const RationalPGF& model, const KappaTable& kappa,
                       const ThetaTable& theta, int m, int n) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  if (m < 1 || m > kappa.m_max() || m > theta.m_max || n < 0 || n > theta.n_max)
    throw ValidationError("left_tail", "term_log_ratio", "(m, n) outside table bounds");

  const double scaled_kappa = kappa.scaled[m];
  const Complex table_val = theta.at(m, n);
  if (scaled_kappa == 0.0 || table_val == Complex{}) return Complex(neg_inf, 0.0);

  const double ln_r = std::log(model.r());
  const Complex gamma_arg = -(Complex(0.0, 2.0 * kPi * n) + m * ln_r) / model.log_mean();
  return std::log(Complex(scaled_kappa)) + std::log(table_val) - log_gamma(gamma_arg) -
         static_cast<double>(m) * std::log(kappa.a) - 2.0 * kPi * n * theta.y_shift;
}

VmValue v_m(const RationalPGF& model, const KappaTable& kappa, const ThetaTable& theta,
            int m, double x, int n_harmonics) {
  if (!(x > 0.0)) throw ValidationError("left_tail", "v_m", "x must be positive");
  const int harmonics = std::min(n_harmonics, theta.n_max);
  const double z = -std::log(x) / model.log_mean();

  // Factor out the largest log magnitude so the linear-domain sum stays safe.
  std::vector<Complex> logs(harmonics + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (int n = 0; n <= harmonics; ++n) {
    logs[n] = term_log_ratio(model, kappa, theta, m, n);
    if (std::isfinite(logs[n].real())) top = std::max(top, logs[n].real());
  }
  VmValue out;
  if (!std::isfinite(top)) return out;

  const Complex head = std::isfinite(logs[0].real()) ? std::exp(logs[0] - top) : Complex{};
  double acc = head.real();
  for (int n = 1; n <= harmonics; ++n) {
    if (!std::isfinite(logs[n].real())) continue;
    const Complex phase(logs[n].real() - top,
                        logs[n].imag() + 2.0 * kPi * n * z);
    acc += 2.0 * std::exp(phase).real();  // + conjugate partner at -n
  }
  out.imag_residual_rel = std::abs(head.imag()) / std::max(std::abs(acc), 1e-300);
  if (acc != 0.0) out.value = LogReal{acc > 0 ? 1 : -1, top + std::log(std::abs(acc))};
  return out;
}

LeftTailDensity density_left(const RationalPGF& model, const KappaTable& kappa,
                             const ThetaTable& theta, const LeftTailConfig& cfg,
                             std::span<const double> x_grid) {
  const int m_terms = std::min({cfg.m_terms, kappa.m_max(), theta.m_max});
  LeftTailDensity out;
  out.values.assign(x_grid.size(), 0.0);
  out.truncation_estimate.assign(x_grid.size(), 0.0);
  std::vector<int> bad(x_grid.size(), 0);

  parallel_for(static_cast<std::int64_t>(x_grid.size()), [&](std::int64_t i) {
    const double x = x_grid[i];
    if (!(x > 0.0)) throw ValidationError("left_tail", "density_left", "x must be positive");
    const double lx = std::log(x);
    std::vector<LogReal> terms(m_terms);
    for (int m = 1; m <= m_terms; ++m) {
      const double exponent = cfg.alpha + (m - 1) * cfg.beta;
      terms[m - 1] = v_m(model, kappa, theta, m, x, cfg.n_harmonics).value.scaled(exponent * lx);
    }
    const LogReal sum = log_sum(terms);
    out.values[i] = sum.to_double();
    const LogReal& last = terms.back();
    out.truncation_estimate[i] = std::abs(last.to_double());
    if (last.sign != 0 &&
        (sum.sign == 0 || last.logmag > sum.logmag + std::log(cfg.convergence_tol)))
      bad[i] = 1;
  });

  for (std::size_t i = 0; i < x_grid.size(); ++i)
    if (bad[i])
      throw NonConvergence("left_tail", "density_left",
                           "series not converged at some grid point: m_terms or x too large");
  return out;
}

}  // namespace gwt
