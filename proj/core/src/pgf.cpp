#include "gwtails/pgf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gwtails/errors.hpp"
#include "json.hpp"

namespace gwt {

namespace {

constexpr int kCheckCoefficients = 64;
constexpr double kNegativeTol = 1e-12;
constexpr double kTaylorSwitchRadius = 1e-4;

std::string format_doubles(const std::vector<double>& v) {
  std::string out = "[";
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    out += buf;
    if (i + 1 < v.size()) out += ",";
  }
  out += "]";
  return out;
}

/// Maclaurin coefficients of P/Q by power-series long division.
std::vector<double> series_divide(const std::vector<double>& p,
                                  const std::vector<double>& q, int order) {
  std::vector<double> c(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    double acc = k < static_cast<int>(p.size()) ? p[k] : 0.0;
    const int jmax = std::min<int>(k, static_cast<int>(q.size()) - 1);
    for (int j = 1; j <= jmax; ++j) acc -= q[j] * c[k - j];
    c[k] = acc / q[0];
  }
  return c;
}

}  // namespace

ValidationReport RationalPGF::validate(const std::vector<double>& p_coeffs,
                                       const std::vector<double>& q_coeffs) {
  ValidationReport report;
  auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

  Polynomial p(p_coeffs), q(q_coeffs);
  if (q_coeffs.empty() || q_coeffs[0] == 0.0) {
    fail("q0 must be nonzero");
    return report;
  }
  if (q.degree() < 1) fail("deg Q must be >= 1");
  if (!p_coeffs.empty() && p_coeffs[0] != 0.0) fail("p0 must be exactly 0");
  if (p.degree() < 1) fail("P must be nonconstant");

  const double g1 = p.eval(1.0) / q.eval(1.0);
  if (std::abs(g1 - 1.0) > 1e-12) fail("G(1) must equal 1 within 1e-12");

  report.r = (p_coeffs.size() > 1 ? p_coeffs[1] : 0.0) / q_coeffs[0];
  if (!(report.r > 0.0 && report.r < 1.0)) fail("r = p1/q0 must lie in (0, 1)");

  // E = G'(1) by the quotient rule.
  const auto [pv, pd] = p.eval_with_derivative(1.0);
  const auto [qv, qd] = q.eval_with_derivative(1.0);
  if (qv != 0.0) {
    report.mean = (pd * qv - pv * qd) / (qv * qv);
    if (!(report.mean > 1.0)) fail("E = G'(1) must exceed 1 (supercritical)");
  } else {
    fail("Q(1) must be nonzero");
  }

  // Coprimality and simple zeros of Q.
  try {
    std::vector<Complex> qc(q_coeffs.begin(), q_coeffs.end());
    auto roots = aberth_roots(qc).roots;
    const Polynomial qder = q.derivative();
    for (const auto& zeta : roots) {
      const double scale = std::max(1.0, std::abs(zeta));
      const double p_at = std::abs(p.eval(zeta));
      if (p_at <= 1e-9 * p.inf_norm() * std::pow(scale, std::max(1, p.degree())))
        fail("P and Q share a root near " + std::to_string(zeta.real()));
      const double qd_at = std::abs(qder.eval(zeta));
      if (qd_at <= 1e-8 * q.inf_norm() * std::pow(scale, std::max(0, q.degree() - 1)))
        fail("Q has a multiple zero near " + std::to_string(zeta.real()));
    }
  } catch (const Error& e) {
    fail(std::string("root finding on Q failed: ") + e.what());
  }

  // Offspring probabilities: the first kCheckCoefficients Maclaurin terms.
  if (report.violations.empty()) {
    auto c = series_divide(p_coeffs, q_coeffs, kCheckCoefficients);
    double sum = 0.0;
    for (int k = 1; k <= kCheckCoefficients; ++k) {
      if (c[k] < -kNegativeTol) {
        fail("Maclaurin coefficient " + std::to_string(k) + " of G is negative");
        break;
      }
      sum += c[k];
    }
    if (sum > 1.0 + 1e-12) fail("partial sums of offspring probabilities exceed 1");
  }

  report.valid = report.violations.empty();
  return report;
}

RationalPGF::RationalPGF(std::vector<double> p_coeffs, std::vector<double> q_coeffs)
    : p_(std::move(p_coeffs)), q_(std::move(q_coeffs)), q_derivative_(q_.derivative()) {
  r_ = p_[1] / q_[0];
  deg_gap_ = p_.degree() - q_.degree();

  // Taylor expansion of G at z = 1 via polynomial shift + series division.
  const Polynomial p1 = p_.shifted(1.0);
  const Polynomial q1 = q_.shifted(1.0);
  taylor_at_one_ = series_divide(p1.coeffs(), q1.coeffs(), 5);
  mean_ = taylor_at_one_[1];
  g2_ = 2.0 * taylor_at_one_[2];
  log_mean_ = std::log(mean_);

  maclaurin_ = series_divide(p_.coeffs(), q_.coeffs(), 5);

  std::vector<Complex> qc(q_.coeffs().begin(), q_.coeffs().end());
  qc.resize(q_.degree() + 1);
  auto roots = aberth_roots(qc);
  q_zeros_ = std::move(roots.roots);
  for (const auto& zeta : q_zeros_) {
    const double scale = std::max(1.0, std::abs(zeta));
    if (std::abs(q_derivative_.eval(zeta)) <=
        1e-8 * q_.inf_norm() * std::pow(scale, std::max(0, q_.degree() - 1)))
      throw MultipleZero("pgf", "q_zeros",
                         "Q has a (numerically) multiple zero; residue formulas assume simple poles");
  }
}

RationalPGF RationalPGF::from_coeffs(std::vector<double> p_coeffs,
                                     std::vector<double> q_coeffs) {
  auto report = validate(p_coeffs, q_coeffs);
  if (!report.valid) {
    std::string msg = "invalid model:";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw ValidationError("pgf", "from_coeffs", msg);
  }
  return RationalPGF(std::move(p_coeffs), std::move(q_coeffs));
}

RationalPGF RationalPGF::from_json_text(const std::string& text) {
  try {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("p") || !j.contains("q"))
      throw ValidationError("pgf", "from_json", "model config must contain arrays \"p\" and \"q\"");
    return from_coeffs(j["p"].get<std::vector<double>>(), j["q"].get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("pgf", "from_json", std::string("malformed model config: ") + e.what());
  }
}

RationalPGF RationalPGF::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("pgf", "from_json", "cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RationalPGF::canonical_json() const {
  return "{\"p\":" + format_doubles(p_.coeffs()) + ",\"q\":" + format_doubles(q_.coeffs()) + "}";
}

std::string RationalPGF::hash() const {
  // FNV-1a 64 over the canonical JSON.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_json()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::pair<Complex, Complex> RationalPGF::eval_g(Complex z) const {
  const auto [pv, pd] = p_.eval_with_derivative(z);
  const auto [qv, qd] = q_.eval_with_derivative(z);
  const double scale = std::max(1.0, std::pow(std::abs(z), q_.degree()));
  if (std::abs(qv) <= 1e-13 * q_.inf_norm() * scale)
    throw PoleOfG("pgf", "eval_g", "Q(z) vanishes: z is numerically a pole of G");
  const Complex val = pv / qv;
  const Complex der = (pd * qv - pv * qd) / (qv * qv);
  return {val, der};
}

std::vector<double> RationalPGF::offspring_taylor(int K) const {
  auto c = series_divide(p_.coeffs(), q_.coeffs(), K);
  double sum = 0.0;
  for (int k = 1; k <= K; ++k) {
    if (c[k] < -kNegativeTol)
      throw NegativeCoefficient("pgf", "offspring_taylor",
                                "coefficient " + std::to_string(k) +
                                    " is negative: not a valid PGF");
    sum += c[k];
    if (sum > 1.0 + 1e-12)
      throw NegativeCoefficient("pgf", "offspring_taylor", "partial sums exceed 1");
  }
  c[0] = 0.0;
  return c;
}

RationalPGF::Preimages RationalPGF::preimages(Complex z) const {
  const int top = std::max(p_.degree(), q_.degree());
  std::vector<Complex> d(top + 1);
  for (int k = 0; k <= top; ++k) d[k] = Complex(p_[k]) - z * Complex(q_[k]);

  auto rs = aberth_roots(std::move(d));
  Preimages out;
  out.dropped_at_infinity = rs.dropped_at_infinity;
  out.points = std::move(rs.roots);

  const double coeff_scale = std::max(p_.inf_norm(), std::abs(z) * q_.inf_norm());
  for (const auto& w : out.points) {
    const double grow = std::pow(std::max(1.0, std::abs(w)), top);
    const Complex resid = p_.eval(w) - z * q_.eval(w);
    if (std::abs(resid) > 1e-11 * coeff_scale * grow)
      throw RootFindFailure("pgf", "preimages", "preimage residual exceeds tolerance");
  }
  return out;
}

Complex RationalPGF::aux_g1(Complex z) const {
  const Complex u = z - 1.0;
  if (std::abs(u) < kTaylorSwitchRadius) {
    const auto& a = taylor_at_one_;
    return a[2] + u * (a[3] + u * (a[4] + u * a[5]));
  }
  const Complex val = eval_g(z).first;
  return (val - 1.0 - mean_ * u) / (u * u);
}

Complex RationalPGF::aux_g1_derivative(Complex z) const {
  const Complex u = z - 1.0;
  if (std::abs(u) < kTaylorSwitchRadius) {
    const auto& a = taylor_at_one_;
    return a[3] + u * (2.0 * a[4] + u * 3.0 * a[5]);
  }
  const auto [val, der] = eval_g(z);
  return (der - mean_) / (u * u) - 2.0 * (val - 1.0 - mean_ * u) / (u * u * u);
}

Complex RationalPGF::aux_g0(Complex z) const {
  if (std::abs(z) < kTaylorSwitchRadius) {
    const auto& c = maclaurin_;
    return c[2] + z * (c[3] + z * (c[4] + z * c[5]));
  }
  const Complex val = eval_g(z).first;
  return (val - r_ * z) / (z * z);
}

}  // namespace gwt
