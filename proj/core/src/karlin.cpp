#include "gwtails/karlin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "gwtails/errors.hpp"
#include "gwtails/parallel.hpp"

namespace gwt {

Complex k_eval(const ConjugacyEvaluator& ev, Complex z) {
  const RationalPGF& model = ev.model();
  const Complex minus_ez = -std::exp(z * model.log_mean());
  const Complex pi_val = ev.pi_eval(minus_ez);
  const Complex phi_val = ev.phi_eval(pi_val);
  return std::exp(-z * std::log(model.r())) * phi_val;
}

namespace {

constexpr std::size_t kChunk = 1024;

/// sum_i samples[i] * e^{-2 pi i n x_i} / nodes with x_i = i/nodes.
/// Running-phase recurrence, re-synchronized at each chunk boundary; chunk
/// sums combined pairwise.
Complex fourier_row(const std::vector<Complex>& samples, int n) {
  const std::size_t count = samples.size();
  const double step_angle = -2.0 * kPi * n / static_cast<double>(count);
  const Complex step = std::polar(1.0, step_angle);
  std::vector<Complex> chunk_sums;
  chunk_sums.reserve(count / kChunk + 1);
  for (std::size_t begin = 0; begin < count; begin += kChunk) {
    const std::size_t end = std::min(begin + kChunk, count);
    Complex phase = std::polar(1.0, step_angle * static_cast<double>(begin));
    Complex acc{};
    for (std::size_t i = begin; i < end; ++i) {
      acc += samples[i] * phase;
      phase *= step;
    }
    chunk_sums.push_back(acc);
  }
  return pairwise_sum(chunk_sums) / static_cast<double>(count);
}

}  // namespace

ThetaTable theta_star(const ConjugacyEvaluator& ev, int m_max, int n_max,
                      double y_shift, long long nodes) {
  if (m_max < 1 || n_max < 0)
    throw ValidationError("karlin", "theta_star", "m_max >= 1 and n_max >= 0 required");
  if (y_shift < 0.0)
    throw ValidationError("karlin", "theta_star", "y_shift must be >= 0");
  if (nodes < 4LL * std::max(1, n_max))
    throw ValidationError("karlin", "theta_star", "nodes must be >= 4 * n_max");

  ThetaTable table;
  table.m_max = m_max;
  table.n_max = n_max;
  table.y_shift = y_shift;
  table.nodes = nodes;
  table.values.assign(static_cast<std::size_t>(m_max) * (n_max + 1), Complex{});

  // K samples on the shifted line, computed once and shared by all rows.
  std::vector<Complex> samples(nodes);
  try {
    parallel_for(nodes, [&](std::int64_t i) {
      const Complex z(static_cast<double>(i) / static_cast<double>(nodes), -y_shift);
      samples[i] = k_eval(ev, z);
    });
  } catch (const Divergence& e) {
    throw StripViolation("karlin", "theta_star",
                         std::string("K diverges on the shifted line: ") + e.what());
  }

  std::vector<Complex> power(samples);
  for (int m = 1; m <= m_max; ++m) {
    if (m > 1)
      parallel_for(nodes, [&](std::int64_t i) { power[i] *= samples[i]; });
    parallel_for(n_max + 1, [&](std::int64_t n) {
      table.values[(m - 1) * (n_max + 1) + n] = fourier_row(power, static_cast<int>(n));
    });
  }
  return table;
}

DecayFit fit_theta_decay(const ThetaTable& table) {
  // ln|theta_n| = ln|values(1, n)| - 2 pi n y, fitted linearly in n >= 1.
  double sn = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = 1; n <= table.n_max; ++n) {
    const double mag = std::abs(table.at(1, n));
    if (mag <= 0.0) continue;
    const double ln_theta = std::log(mag) - 2.0 * kPi * n * table.y_shift;
    sn += 1;
    sx += n;
    sy += ln_theta;
    sxx += static_cast<double>(n) * n;
    sxy += n * ln_theta;
  }
  DecayFit fit;
  if (sn < 2) return fit;
  const double slope = (sn * sxy - sx * sy) / (sn * sxx - sx * sx);
  fit.rate = -slope;
  fit.log_amplitude = (sy - slope * sx) / sn;
  return fit;
}

double parseval_relative_gap(const ConjugacyEvaluator& ev, int n_max, long long nodes) {
  const ThetaTable table = theta_star(ev, 2, n_max, 0.0, nodes);
  const double energy = table.at(2, 0).real();  // int_0^1 K(x)^2 dx (K real on the real line)
  double sum = std::norm(table.at(1, 0));
  for (int n = 1; n <= n_max; ++n) sum += 2.0 * std::norm(table.at(1, n));
  const DecayFit fit = fit_theta_decay(table);
  if (fit.rate > 0.0) {
    const double tail_term = 2.0 * std::exp(2.0 * (fit.log_amplitude - fit.rate * (n_max + 1)));
    sum += tail_term / (1.0 - std::exp(-2.0 * fit.rate));
  }
  return std::abs(energy - sum) / std::abs(energy);
}

double default_y_shift(const RationalPGF& model, double theta_hat) {
  // Strip half-width is theta/(2 ln E); stay at 90% of the estimated edge.
  return 0.9 * theta_hat / (2.0 * model.log_mean());
}

double choose_y_shift(const ConjugacyEvaluator& ev, double theta_hat) {
  const double edge = theta_hat / (2.0 * ev.model().log_mean());
  auto sup_k = [&ev](double y) {
    double s = 0.0;
    for (int i = 0; i < 128; ++i) {
      try {
        s = std::max(s, std::abs(k_eval(ev, Complex(i / 128.0, -y))));
      } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
      }
    }
    return s;
  };
  const double bound = 4.0 * std::max(1.0, sup_k(0.0));
  double y = 0.9 * edge;
  while (y > 0.2 * edge && sup_k(y) > bound) y *= 0.92;
  return y;
}

void write_theta_csv(std::ostream& out, const ThetaTable& table,
                     const std::string& provenance) {
  out << "# " << provenance << "\n";
  out << "m,n,re,im,y_shift\n";
  char buf[128];
  for (int m = 1; m <= table.m_max; ++m)
    for (int n = 0; n <= table.n_max; ++n) {
      const Complex& v = table.at(m, n);
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", m, n, v.real(), v.imag(),
                    table.y_shift);
      out << buf;
    }
}

}  // namespace gwt
