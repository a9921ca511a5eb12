#include "gwtails/conjugacy.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "gwtails/errors.hpp"
#include "oracles.hpp"

using gwt::Complex;
using gwt::ConjugacyEvaluator;
using gwt::IterationConfig;

namespace {
std::vector<gwt::RationalPGF> all_models() {
  return {oracle::example1(), oracle::example2(), oracle::example3()};
}
}  // namespace

TEST_CASE("pi fixes the normalization Pi(0)=1, Pi'(0)=1") {
  for (const auto& model : all_models()) {
    ConjugacyEvaluator ev(model);
    CHECK(std::abs(ev.pi_eval(Complex(0.0)) - 1.0) == 0.0);
    auto vd = ev.pi_eval_d(Complex(0.0));
    CHECK(std::abs(vd.derivative - 1.0) == 0.0);
  }
}

TEST_CASE("cascade agrees with the naive orbit iterate") {
  // The naive form trades truncation O(E^{-t}) against the 1 + z/E^t
  // representation noise O(E^t eps); E^t ~ 1e8 balances them near 1e-7.
  for (const auto& model : all_models()) {
    ConjugacyEvaluator ev(model);
    const int t = static_cast<int>(std::lround(std::log(1e8) / model.log_mean()));
    for (double x : {-1.5, -0.6, -0.1, 0.05}) {
      const Complex z(x, 0.17 * x);
      const Complex direct = oracle::naive_pi(model, z, t);
      CHECK(std::abs(ev.pi_eval(z) - direct) < 2e-5);
    }
  }
}

TEST_CASE("poincare functional equation G(Pi(z)) = Pi(Ez)") {
  for (const auto& model : all_models()) {
    ConjugacyEvaluator ev(model);
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = -2.0 + 2.1 * i / 100.0;  // segment [-2, 0.1]
      const Complex z(x, 0.0);
      const Complex lhs = model.g(ev.pi_eval(z));
      const Complex rhs = ev.pi_eval(model.mean() * z);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("pi decay bound along the negative axis") {
  auto model = oracle::example1();
  ConjugacyEvaluator ev(model);
  const double exponent = std::log(model.r()) / model.log_mean();  // log_E r < 0
  // Fit D on moderate arguments, check the bound far out.
  double d_fit = 0.0;
  for (double s : {1e3, 1e4, 1e5}) {
    d_fit = std::max(d_fit, std::abs(ev.pi_eval(Complex(-s))) / std::pow(s, exponent));
  }
  const double far = 1e6;
  CHECK(std::abs(ev.pi_eval(Complex(-far))) <= 2.0 * d_fit * std::pow(far, exponent));
}

TEST_CASE("pi derivative: finite differences and the differentiated equation") {
  for (const auto& model : all_models()) {
    ConjugacyEvaluator ev(model);
    const double h = 1e-6;
    for (int i = 0; i < 20; ++i) {
      const Complex z(-1.8 + 0.09 * i, (i % 3 - 1) * 0.2);
      const Complex fd = (ev.pi_eval(z + h) - ev.pi_eval(z - h)) / (2.0 * h);
      CHECK(std::abs(ev.pi_derivative(z) - fd) < 1e-6);
    }
    // E Pi'(Ez) = G'(Pi(z)) Pi'(z)
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      const Complex z(-1.5 + 0.04 * i, 0.1 * ((i % 5) - 2));
      const auto vd = ev.pi_eval_d(z);
      const Complex lhs = model.mean() * ev.pi_derivative(model.mean() * z);
      const Complex rhs = model.eval_g(vd.value).second * vd.derivative;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("pi cascade has converged at t_max = 150 (plateau vs 160)") {
  for (const auto& model : all_models()) {
    ConjugacyEvaluator ev150(model, IterationConfig{150, 1e-15});
    ConjugacyEvaluator ev160(model, IterationConfig{160, 1e-15});
    for (int i = 0; i < 25; ++i) {
      const Complex z(-1.9 + 0.08 * i, 0.15 * ((i % 3) - 1));
      CHECK(std::abs(ev150.pi_eval(z) - ev160.pi_eval(z)) <=
            1e-12 * std::max(1.0, std::abs(ev150.pi_eval(z))));
    }
  }
}

TEST_CASE("schroeder conjugacy: normalization, functional equation, naive orbit") {
  for (const auto& model : all_models()) {
    ConjugacyEvaluator ev(model);
    CHECK(std::abs(ev.phi_eval(Complex(0.0))) == 0.0);

    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
      const Complex z = std::polar(0.9 * (i % 6 + 1) / 6.0, 2.0 * gwt::kPi * i / 60.0);
      const Complex lhs = ev.phi_eval(model.g(z));
      const Complex rhs = model.r() * ev.phi_eval(z);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-10);

    CHECK(std::abs(ev.phi_eval(Complex(0.5)) - oracle::naive_phi(model, Complex(0.5), 40)) < 1e-8);
  }
}

TEST_CASE("phi derivative at zero is one; second coefficient matches G0(0)/(r - r^2)") {
  for (const auto& model : all_models()) {
    ConjugacyEvaluator ev(model);
    const double h = 1e-5;
    const Complex d = (ev.phi_eval(Complex(h)) - ev.phi_eval(Complex(-h))) / (2.0 * h);
    CHECK(std::abs(d - 1.0) < 1e-8);

    const double phi2_expected =
        model.aux_g0(Complex(0.0)).real() / (model.r() - model.r() * model.r());
    const Complex phi2 = (ev.phi_eval(Complex(h)) - Complex(h)) / (h * h);
    CHECK(std::abs(phi2 - phi2_expected) < 1e-3);
  }
}

TEST_CASE("pi_inverse: fixed point, round trip, shortening identity") {
  for (const auto& model : all_models()) {
    ConjugacyEvaluator ev(model);
    CHECK(std::abs(ev.pi_inverse(Complex(1.0))) < 1e-14);

    double worst_rt = 0.0, worst_id = 0.0;
    for (int i = 0; i < 24; ++i) {
      const Complex w = 1.0 + std::polar(0.25, 2.0 * gwt::kPi * i / 24.0);
      const Complex u = ev.pi_inverse(w);
      worst_rt = std::max(worst_rt, std::abs(ev.pi_eval(u) - w));
      const Complex shortened = model.mean() * ev.pi_inverse(ev.principal_preimage(w));
      worst_id = std::max(worst_id, std::abs(shortened - u));
    }
    CHECK(worst_rt <= 1e-9);
    CHECK(worst_id <= 1e-9);
  }
}

TEST_CASE("kappa table: generic solver vs per-model recursions") {
  struct Case {
    gwt::RationalPGF model;
    std::vector<double> expected;
    double a;
  };
  const int m_max = 30;
  std::vector<Case> cases;
  cases.push_back({oracle::example1(), oracle::kappa_example1(m_max, 1.0 / 5.3), 1.0 / 5.3});
  cases.push_back({oracle::example2(), oracle::kappa_example2(m_max, 1.0 / 4.1), 1.0 / 4.1});
  cases.push_back({oracle::example3(), oracle::kappa_example3(m_max, 0.5), 0.5});

  for (const auto& c : cases) {
    auto table = gwt::phi_inverse_coeffs(c.model, m_max, c.a);
    CHECK(table.scaled[1] == doctest::Approx(c.a).epsilon(1e-15));
    for (int m = 1; m <= m_max; ++m) {
      CHECK(table.scaled[m] ==
            doctest::Approx(c.expected[m]).epsilon(1e-12));
    }
  }
}

TEST_CASE("kappa values for example 1 (corrected hand recursion)") {
  auto table = gwt::phi_inverse_coeffs(oracle::example1(), 5, 1.0);
  CHECK(table.scaled[2] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(table.scaled[3] == doctest::Approx(5.5).epsilon(1e-14));
}

TEST_CASE("phi inverse series inverts phi on a safe disk") {
  struct Case {
    gwt::RationalPGF model;
    double a;
    double radius;
  };
  std::vector<Case> cases = {{oracle::example1(), 1.0 / 5.3, 0.10},
                             {oracle::example2(), 1.0 / 4.1, 0.12},
                             {oracle::example3(), 0.5, 0.15}};
  for (const auto& c : cases) {
    ConjugacyEvaluator ev(c.model);
    auto table = gwt::phi_inverse_coeffs(c.model, 40, c.a);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Complex z = std::polar(c.radius * (i % 4 + 1) / 4.0, 2.0 * gwt::kPi * i / 20.0);
      const Complex back = gwt::phi_inverse_series(table, ev.phi_eval(z));
      worst = std::max(worst, std::abs(back - z));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("auto scaling keeps scaled coefficients in range") {
  for (const auto& model : all_models()) {
    const double a = gwt::auto_kappa_scale(model, 40);
    auto table = gwt::phi_inverse_coeffs(model, 40, a);
    for (int m = 1; m <= 40; ++m) {
      CHECK(std::abs(table.scaled[m]) < 1e12);
    }
  }
}

TEST_CASE("kappa solver rejects bad arguments") {
  CHECK_THROWS_AS(gwt::phi_inverse_coeffs(oracle::example1(), 0, 1.0), gwt::ValidationError);
  CHECK_THROWS_AS(gwt::phi_inverse_coeffs(oracle::example1(), 10, -1.0), gwt::ValidationError);
}
