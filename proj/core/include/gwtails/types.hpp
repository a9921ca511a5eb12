#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace gwt {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Signed value carried as sign and log-magnitude, for sums whose terms
/// overflow or underflow double range before cancellation.
struct LogReal {
  int sign = 0;          // -1, 0, +1
  double logmag = -std::numeric_limits<double>::infinity();

  static LogReal from_double(double v) {
    if (v == 0.0 || !std::isfinite(v)) return {0, -std::numeric_limits<double>::infinity()};
    return {v > 0 ? 1 : -1, std::log(std::abs(v))};
  }
  static LogReal from_sign_log(double sign_value, double logmag_value) {
    if (sign_value == 0.0) return {};
    return {sign_value > 0 ? 1 : -1, logmag_value};
  }
  double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(logmag); }
  LogReal scaled(double log_factor) const {
    if (sign == 0) return *this;
    return {sign, logmag + log_factor};
  }
};

/// Sum of LogReal terms, evaluated relative to the largest magnitude so the
/// result survives even when individual terms do not fit in a double.
inline LogReal log_sum(std::span<const LogReal> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (t.sign != 0 && t.logmag > top) top = t.logmag;
  if (!std::isfinite(top)) return {};
  double acc = 0.0;
  for (const auto& t : terms)
    if (t.sign != 0) acc += t.sign * std::exp(t.logmag - top);
  if (acc == 0.0) return {};
  return {acc > 0 ? 1 : -1, top + std::log(std::abs(acc))};
}

/// Pairwise (cascade) summation; deterministic and O(eps·log n) accurate.
template <typename T>
T pairwise_sum(std::span<const T> v) {
  if (v.size() <= 8) {
    T acc{};
    for (const auto& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v));
}

}  // namespace gwt
