#include "gwtails/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gwtails/errors.hpp"

namespace gwt {

namespace {
constexpr double kOverflowGuard = 1e250;
constexpr double kLocalInverseRadius = 1e-3;
constexpr int kMaxBackwardSteps = 200;
constexpr int kMaxNewtonSteps = 60;

bool bad(Complex w) {
  return !std::isfinite(w.real()) || !std::isfinite(w.imag()) ||
         std::abs(w.real()) > kOverflowGuard || std::abs(w.imag()) > kOverflowGuard;
}
}  // namespace

ConjugacyEvaluator::ConjugacyEvaluator(const RationalPGF& model, IterationConfig cfg)
    : model_(&model), cfg_(cfg) {
  if (cfg_.t_max < 1) cfg_.t_max = 1;
  if (!(cfg_.stop_tol > 0.0)) cfg_.stop_tol = 1e-15;
  inv_epow_.resize(cfg_.t_max + 3);
  inv_epow_[0] = 1.0;
  const double inv_e = 1.0 / model.mean();
  for (std::size_t k = 1; k < inv_epow_.size(); ++k) inv_epow_[k] = inv_epow_[k - 1] * inv_e;
}

Complex ConjugacyEvaluator::pi_eval(Complex z) const {
  Complex w = z;
  for (int t = cfg_.t_max - 1; t >= 0; --t) {
    const Complex inner = 1.0 + w * inv_epow_[t + 1];
    w += w * w * inv_epow_[t + 2] * model_->aux_g1(inner);
    if (bad(w))
      throw Divergence("conjugacy", "pi_eval",
                       "cascade overflow: z outside the domain or t_max too small");
  }
  return 1.0 + w;
}

ValueDeriv ConjugacyEvaluator::pi_eval_d(Complex z) const {
  Complex w = z;
  Complex deriv = 1.0;
  for (int t = cfg_.t_max - 1; t >= 0; --t) {
    const Complex inner = 1.0 + w * inv_epow_[t + 1];
    const Complex g1 = model_->aux_g1(inner);
    const Complex g1d = model_->aux_g1_derivative(inner);
    const Complex map_deriv =
        1.0 + 2.0 * w * inv_epow_[t + 2] * g1 + w * w * inv_epow_[t + 2] * inv_epow_[t + 1] * g1d;
    deriv *= map_deriv;
    w += w * w * inv_epow_[t + 2] * g1;
    if (bad(w) || bad(deriv))
      throw Divergence("conjugacy", "pi_eval",
                       "cascade overflow: z outside the domain or t_max too small");
  }
  return {1.0 + w, deriv};
}

Complex ConjugacyEvaluator::phi_eval(Complex z) const {
  Complex phi = z;
  const double r = model_->r();
  double r_pow_tm1 = 1.0 / r;  // r^{t-1} at t = 0
  double r_pow_t = 1.0;        // r^t     at t = 0
  for (int t = 0; t < cfg_.t_max; ++t) {
    const Complex orbit = r_pow_t * phi;
    const Complex increment = r_pow_tm1 * phi * phi * model_->aux_g0(orbit);
    phi += increment;
    if (bad(phi))
      throw Divergence("conjugacy", "phi_eval", "orbit left the capture region");
    if (std::abs(increment) <= cfg_.stop_tol * std::abs(phi)) return phi;
    r_pow_tm1 = r_pow_t;
    r_pow_t *= r;
  }
  // r^{t_max} makes further increments negligible only if the orbit converged.
  const Complex orbit = r_pow_t * phi;
  if (std::abs(r_pow_tm1 * phi * phi * model_->aux_g0(orbit)) > 1e-10 * std::abs(phi))
    throw Divergence("conjugacy", "phi_eval", "no convergence within t_max iterations");
  return phi;
}

Complex ConjugacyEvaluator::principal_preimage(Complex z) const {
  auto pre = model_->preimages(z);
  if (pre.points.empty())
    throw BranchAmbiguity("conjugacy", "pi_inverse", "no finite preimages of z");
  const Complex predictor = 1.0 + (z - 1.0) / model_->mean();
  double best = std::numeric_limits<double>::infinity(), second = best;
  Complex pick{};
  for (const auto& w : pre.points) {
    const double d = std::abs(w - predictor);
    if (d < best) {
      second = best;
      best = d;
      pick = w;
    } else if (d < second) {
      second = d;
    }
  }
  if (pre.points.size() > 1 && (second - best) <= 1e-10 * (second + best))
    throw BranchAmbiguity("conjugacy", "pi_inverse",
                          "two preimage roots equidistant from the predictor "
                          "(near a critical value)");
  return pick;
}

Complex ConjugacyEvaluator::pi_inverse(Complex w) const {
  Complex wt = w;
  int steps = 0;
  while (std::abs(wt - 1.0) > kLocalInverseRadius) {
    wt = principal_preimage(wt);
    if (++steps > kMaxBackwardSteps)
      throw Divergence("conjugacy", "pi_inverse",
                       "backward iteration did not reach the fixed point");
  }
  // Local inverse of Pi at 1 by Newton on the cascade, seeded with w_t - 1.
  // Steps can two-cycle at the evaluation noise floor of Pi, so keep the
  // best-residual iterate and accept it when the residual is noise-level.
  Complex u = wt - 1.0;
  Complex best_u = u;
  double best_f = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 0; it < kMaxNewtonSteps; ++it) {
    const auto vd = pi_eval_d(u);
    const double f_mag = std::abs(vd.value - wt);
    if (f_mag < best_f) {
      best_f = f_mag;
      best_u = u;
    }
    const Complex step = (vd.value - wt) / vd.derivative;
    u -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(u))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    if (best_f > 1e-12)
      throw Divergence("conjugacy", "pi_inverse", "local Newton inversion stalled");
    u = best_u;
  }
  return std::pow(model_->mean(), steps) * u;
}

KappaTable phi_inverse_coeffs(const RationalPGF& model, int m_max, double a) {
  if (m_max < 1)
    throw ValidationError("conjugacy", "phi_inverse_coeffs", "m_max must be >= 1");
  if (!(a > 0.0))
    throw ValidationError("conjugacy", "phi_inverse_coeffs", "scaling a must be positive");

  const auto& p = model.p().coeffs();
  const auto& q = model.q().coeffs();
  const double r = model.r();

  // Truncated composition poly(S(z)) to the given order, by Horner over series.
  auto compose = [](const std::vector<double>& poly, const std::vector<double>& s,
                    int order) {
    std::vector<double> acc(order + 1, 0.0);
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
      // acc <- acc * s + coefficient
      std::vector<double> next(order + 1, 0.0);
      for (int i = 0; i <= order; ++i) {
        if (acc[i] == 0.0) continue;
        for (int j = 1; j + i <= order; ++j) next[i + j] += acc[i] * s[j];
      }
      next[0] += *it;
      acc = std::move(next);
    }
    return acc;
  };

  KappaTable table;
  table.a = a;
  std::vector<double> s(m_max + 1, 0.0);
  s[1] = a;
  std::vector<double> r_pow(m_max + 1, 1.0);
  for (int j = 1; j <= m_max; ++j) r_pow[j] = r_pow[j - 1] * r;

  for (int n = 2; n <= m_max; ++n) {
    const auto qs = compose(q, s, n);
    const auto ps = compose(p, s, n);
    double f = -ps[n];
    for (int j = 1; j < n; ++j) f += r_pow[j] * s[j] * qs[n - j];
    const double denom = r_pow[n] * q[0] - p[1];
    s[n] = -f / denom;
    if (!std::isfinite(s[n]) || std::abs(s[n]) > 1e280)
      throw OverflowGuard("conjugacy", "phi_inverse_coeffs",
                          "scaled coefficient overflow: scaling a too large");
  }
  table.scaled = std::move(s);
  return table;
}

Complex phi_inverse_series(const KappaTable& table, Complex w) {
  const Complex u = w / table.a;
  Complex acc{};
  for (int m = table.m_max(); m >= 1; --m) acc = acc * u + table.scaled[m];
  return acc * u;
}

double auto_kappa_scale(const RationalPGF& model, int m_max) {
  // Probe with a = 1, tolerating overflow mid-way, then undo the growth rate.
  double rho = 1.0;
  try {
    const auto probe = phi_inverse_coeffs(model, m_max, 1.0);
    for (int m = 2; m <= probe.m_max(); ++m) {
      const double mag = std::abs(probe.scaled[m]);
      if (mag > 0.0) rho = std::max(rho, std::pow(mag, 1.0 / m));
    }
  } catch (const OverflowGuard&) {
    rho = 1e7;  // growth too fast to probe directly; aggressive downscale
  }
  return 1.0 / rho;
}

}  // namespace gwt
