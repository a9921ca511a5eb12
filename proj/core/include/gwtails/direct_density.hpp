#pragma once

#include <span>
#include <vector>

#include "gwtails/conjugacy.hpp"
#include "gwtails/types.hpp"

namespace gwt {

struct QuadratureConfig {
  double y_max = 2e5;            // high-fidelity default; desk runs use 2e4
  long long n_nodes = 20000000;  // total across [-y_max, y_max]; even, >= 1000
};

/// Samples of Pi(i y) on the uniform half-line grid y_k = k h, k = 0..n,
/// computed once and reused across the whole x grid.
struct PiSampleLine {
  double step = 0.0;
  std::vector<Complex> samples;
};

PiSampleLine sample_pi_line(const ConjugacyEvaluator& ev, const QuadratureConfig& cfg);

/// p(x) = (1/pi) int_0^{y_max} Re[Pi(iy) e^{-iyx}] dy by the trapezoid rule,
/// using the conjugate symmetry Pi(-iy) = conj(Pi(iy)).
std::vector<double> density_integral(const PiSampleLine& line,
                                     std::span<const double> x_grid);

std::vector<double> density_integral(const ConjugacyEvaluator& ev,
                                     const QuadratureConfig& cfg,
                                     std::span<const double> x_grid);

}  // namespace gwt
