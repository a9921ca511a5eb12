#include "gwtails/direct_density.hpp"

#include <algorithm>
#include <cmath>

#include "gwtails/errors.hpp"
#include "gwtails/parallel.hpp"

namespace gwt {

PiSampleLine sample_pi_line(const ConjugacyEvaluator& ev, const QuadratureConfig& cfg) {
  if (!(cfg.y_max > 0.0))
    throw ValidationError("direct_density", "density_integral", "y_max must be positive");
  if (cfg.n_nodes < 1000 || cfg.n_nodes % 2 != 0)
    throw ValidationError("direct_density", "density_integral",
                          "n_nodes must be even and >= 1000");
  // Reliability guard on the cascade range: E^{t_max} >= 100 y_max.
  if (ev.config().t_max * ev.model().log_mean() < std::log(100.0 * cfg.y_max))
    throw Divergence("direct_density", "density_integral",
                     "y_max exceeds the iteration's reliable range (raise t_max)");

  PiSampleLine line;
  const long long half = cfg.n_nodes / 2;
  line.step = cfg.y_max / static_cast<double>(half);
  line.samples.resize(half + 1);
  parallel_for(half + 1, [&](std::int64_t k) {
    line.samples[k] = ev.pi_eval(Complex(0.0, k * line.step));
  });
  return line;
}

namespace {
constexpr std::size_t kChunk = 1024;
}

std::vector<double> density_integral(const PiSampleLine& line,
                                     std::span<const double> x_grid) {
  const std::size_t count = line.samples.size();
  std::vector<double> out(x_grid.size(), 0.0);
  parallel_for(static_cast<std::int64_t>(x_grid.size()), [&](std::int64_t xi) {
    const double x = x_grid[xi];
    const Complex step = std::polar(1.0, -line.step * x);
    std::vector<double> chunk_sums;
    chunk_sums.reserve(count / kChunk + 1);
    for (std::size_t begin = 0; begin < count; begin += kChunk) {
      const std::size_t end = std::min(begin + kChunk, count);
      Complex phase = std::polar(1.0, -line.step * x * static_cast<double>(begin));
      double acc = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        double f = (line.samples[k] * phase).real();
        if (k == 0 || k + 1 == count) f *= 0.5;  // trapezoid end weights
        acc += f;
        phase *= step;
      }
      chunk_sums.push_back(acc);
    }
    out[xi] = pairwise_sum(chunk_sums) * line.step / kPi;
  });
  return out;
}

std::vector<double> density_integral(const ConjugacyEvaluator& ev,
                                     const QuadratureConfig& cfg,
                                     std::span<const double> x_grid) {
  return density_integral(sample_pi_line(ev, cfg), x_grid);
}

}  // namespace gwt
