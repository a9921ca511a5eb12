#include "gwtails/karlin.hpp"

#include <cmath>

#include "doctest.h"
#include "gwtails/errors.hpp"
#include "gwtails/parallel.hpp"
#include "oracles.hpp"

using gwt::Complex;
using gwt::ConjugacyEvaluator;

TEST_CASE("K is one-periodic and real on the real axis") {
  for (const auto& model : {oracle::example1(), oracle::example2(), oracle::example3()}) {
    ConjugacyEvaluator ev(model);
    for (int i = 0; i < 20; ++i) {
      const Complex z(-1.0 + 0.1 * i, -0.8 * (i % 4) / 4.0);
      const Complex a = gwt::k_eval(ev, z);
      const Complex b = gwt::k_eval(ev, z + 1.0);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
    for (double x : {0.0, 0.3, 0.77, 1.4}) {
      const Complex v = gwt::k_eval(ev, Complex(x, 0.0));
      CHECK(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v.real())));
    }
  }
}

TEST_CASE("theta_0 against a plain trapezoid oracle at 1e6 nodes") {
  auto model = oracle::example1();
  ConjugacyEvaluator ev(model);
  const long long nodes = 1000000;
  std::vector<double> samples(nodes);
  gwt::parallel_for(nodes, [&](std::int64_t i) {
    samples[i] = gwt::k_eval(ev, Complex(double(i) / nodes, 0.0)).real();
  });
  const double theta0_oracle = gwt::pairwise_sum(samples) / nodes;
  CHECK(std::isfinite(theta0_oracle));
  CHECK(std::abs(theta0_oracle) > 1e-2);

  const auto table = gwt::theta_star(ev, 1, 2, 0.0, 200000);
  CHECK(table.at(1, 0).real() == doctest::Approx(theta0_oracle).epsilon(1e-9));
}

TEST_CASE("shifted table at the tuned line, decay fit, normalization consistency") {
  auto model = oracle::example1();
  ConjugacyEvaluator ev(model);

  const auto shifted = gwt::theta_star(ev, 3, 40, 2.9, 80000);  // no StripViolation
  const auto fit = gwt::fit_theta_decay(shifted);
  CHECK(fit.rate > 0.0);

  // Unnormalized values from the shifted line match the y = 0 row where the
  // plain coefficients are representable.
  const auto plain = gwt::theta_star(ev, 1, 6, 0.0, 80000);
  for (int n = 0; n <= 5; ++n) {
    const Complex unnorm = shifted.at(1, n) * std::exp(-2.0 * gwt::kPi * n * 2.9);
    CHECK(std::abs(unnorm - plain.at(1, n)) < 1e-8);
  }
}

TEST_CASE("periodic trapezoid is spectrally converged: doubling nodes") {
  // The quadrature itself is spectrally exact; what limits agreement is the
  // double-precision noise in the K^m samples, about 1e-13 of the row scale.
  // Doubling must leave entries unchanged up to max(1e-9 relative, noise).
  auto model = oracle::example2();
  ConjugacyEvaluator ev(model);
  const auto coarse = gwt::theta_star(ev, 6, 12, 4.0, 40000);
  const auto fine = gwt::theta_star(ev, 6, 12, 4.0, 80000);
  for (int m = 1; m <= 6; ++m) {
    double row_scale = 0.0;
    for (int n = 0; n <= 12; ++n) row_scale = std::max(row_scale, std::abs(fine.at(m, n)));
    for (int n = 0; n <= 12; ++n) {
      const double diff = std::abs(coarse.at(m, n) - fine.at(m, n));
      CHECK(diff <= std::max(1e-9 * std::abs(fine.at(m, n)), 1e-12 * row_scale));
    }
  }
}

TEST_CASE("parseval identity") {
  for (const auto& model : {oracle::example1(), oracle::example3()}) {
    ConjugacyEvaluator ev(model);
    CHECK(gwt::parseval_relative_gap(ev, 24, 100000) <= 1e-8);
  }
}

TEST_CASE("theta_star rejects bad arguments and strip violations") {
  auto model = oracle::example1();
  ConjugacyEvaluator ev(model);
  CHECK_THROWS_AS(gwt::theta_star(ev, 2, 50, 2.9, 100), gwt::ValidationError);
  CHECK_THROWS_AS(gwt::theta_star(ev, 2, 4, -1.0, 1000), gwt::ValidationError);
  // Far outside the analyticity strip the K samples cannot converge.
  CHECK_THROWS_AS(gwt::theta_star(ev, 1, 4, 40.0, 1000), gwt::StripViolation);
}
