#include "gwtails/direct_density.hpp"

#include <cmath>

#include "doctest.h"
#include "gwtails/errors.hpp"
#include "oracles.hpp"

using gwt::Complex;
using gwt::ConjugacyEvaluator;
using gwt::QuadratureConfig;

namespace {

std::vector<double> mass_grid() {
  std::vector<double> xs;
  for (double x = 0.01; x <= 20.0 + 1e-9; x += 0.01) xs.push_back(x);
  return xs;
}

}  // namespace

TEST_CASE("total mass and mean are one for all presets") {
  const auto xs = mass_grid();
  for (const auto& model : {oracle::example1(), oracle::example2(), oracle::example3()}) {
    ConjugacyEvaluator ev(model);
    QuadratureConfig qc{5e3, 1000000};
    const auto p = gwt::density_integral(ev, qc, xs);
    double mass = 0.0, mean = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double h = xs[i + 1] - xs[i];
      mass += 0.5 * h * (p[i] + p[i + 1]);
      mean += 0.5 * h * (xs[i] * p[i] + xs[i + 1] * p[i + 1]);
    }
    // Below the first grid point p ~ C x^alpha, so the missing head is
    // p(delta) delta / (1 + alpha).
    const double alpha = -1.0 - std::log(model.r()) / model.log_mean();
    mass += p[0] * xs[0] / (1.0 + alpha);
    CHECK(std::abs(mass - 1.0) < 1e-3);
    CHECK(std::abs(mean - 1.0) < 1e-3);
  }
}

TEST_CASE("quadrature is step-converged at desk parameters") {
  auto model = oracle::example1();
  ConjugacyEvaluator ev(model);
  std::vector<double> xs;
  for (double x = 0.1; x <= 3.0 + 1e-9; x += 0.1) xs.push_back(x);
  const auto coarse = gwt::density_integral(ev, QuadratureConfig{2e4, 1000000}, xs);
  const auto fine = gwt::density_integral(ev, QuadratureConfig{2e4, 2000000}, xs);
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    sup = std::max(sup, std::abs(coarse[i] - fine[i]));
  CHECK(sup <= 1e-6);
}

TEST_CASE("density is nonnegative up to truncation ripple") {
  auto model = oracle::example2();
  ConjugacyEvaluator ev(model);
  std::vector<double> xs;
  for (double x = 0.05; x <= 8.0; x += 0.05) xs.push_back(x);
  const auto p = gwt::density_integral(ev, QuadratureConfig{2e4, 2000000}, xs);
  for (double v : p) CHECK(v >= -1e-5);
}

TEST_CASE("sample line is shared across the grid") {
  auto model = oracle::example3();
  ConjugacyEvaluator ev(model);
  const auto line = gwt::sample_pi_line(ev, QuadratureConfig{1e3, 10000});
  CHECK(line.samples.size() == 5001);
  CHECK(std::abs(line.samples[0] - Complex(1.0)) == 0.0);  // Pi(0) = 1
  std::vector<double> xs = {0.5, 1.0};
  const auto a = gwt::density_integral(line, xs);
  const auto b = gwt::density_integral(ev, QuadratureConfig{1e3, 10000}, xs);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
}

TEST_CASE("guards: node parity and iteration range") {
  auto model = oracle::example1();
  ConjugacyEvaluator ev(model);
  std::vector<double> xs = {1.0};
  CHECK_THROWS_AS(gwt::density_integral(ev, QuadratureConfig{1e3, 10001}, xs),
                  gwt::ValidationError);
  CHECK_THROWS_AS(gwt::density_integral(ev, QuadratureConfig{1e3, 100}, xs),
                  gwt::ValidationError);
  ConjugacyEvaluator shallow(model, gwt::IterationConfig{20, 1e-15});
  CHECK_THROWS_AS(gwt::density_integral(shallow, QuadratureConfig{2e4, 2000}, xs),
                  gwt::Divergence);
}
