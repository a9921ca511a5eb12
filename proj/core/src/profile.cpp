#include "gwtails/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "gwtails/errors.hpp"

namespace gwt {

void DensityProfile::set_column(const std::string& name, std::vector<double> values) {
  if (values.size() != x_.size())
    throw ValidationError("profile", "set_column", "column size does not match the grid");
  for (auto& kv : cols_) {
    if (kv.first == name) {
      kv.second = std::move(values);
      return;
    }
  }
  cols_.emplace_back(name, std::move(values));
}

bool DensityProfile::has_column(const std::string& name) const {
  for (const auto& kv : cols_)
    if (kv.first == name) return true;
  return false;
}

const std::vector<double>& DensityProfile::column(const std::string& name) const {
  for (const auto& kv : cols_)
    if (kv.first == name) return kv.second;
  throw ValidationError("profile", "column", "no column named " + name);
}

std::vector<std::string> DensityProfile::columns() const {
  std::vector<std::string> names;
  names.reserve(cols_.size());
  for (const auto& kv : cols_) names.push_back(kv.first);
  return names;
}

double DensityProfile::interpolate(const std::string& name, double at) const {
  const auto& v = column(name);
  if (x_.empty() || at < x_.front() || at > x_.back()) return 0.0;
  const auto it = std::lower_bound(x_.begin(), x_.end(), at);
  const std::size_t hi = std::min<std::size_t>(it - x_.begin(), x_.size() - 1);
  if (hi == 0) return v[0];
  const std::size_t lo = hi - 1;
  const double t = (at - x_[lo]) / (x_[hi] - x_[lo]);
  return v[lo] + t * (v[hi] - v[lo]);
}

DensityProfile::Cdf DensityProfile::cumulative(const std::string& name) const {
  const auto& v = column(name);
  Cdf cdf;
  cdf.x.reserve(x_.size() + 1);
  cdf.value.reserve(x_.size() + 1);
  double acc = 0.0;
  double prev_x = 0.0, prev_v = 0.0;  // densities on (0, inf) vanish at 0
  cdf.x.push_back(0.0);
  cdf.value.push_back(0.0);
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (x_[i] <= prev_x) continue;
    acc += 0.5 * (v[i] + prev_v) * (x_[i] - prev_x);
    cdf.x.push_back(x_[i]);
    cdf.value.push_back(acc);
    prev_x = x_[i];
    prev_v = v[i];
  }
  return cdf;
}

double DensityProfile::cdf_at(const Cdf& cdf, double at) {
  if (cdf.x.empty()) return 0.0;
  if (at <= cdf.x.front()) return 0.0;
  if (at >= cdf.x.back()) return cdf.value.back();
  const auto it = std::upper_bound(cdf.x.begin(), cdf.x.end(), at);
  const std::size_t hi = it - cdf.x.begin();
  const std::size_t lo = hi - 1;
  const double t = (at - cdf.x[lo]) / (cdf.x[hi] - cdf.x[lo]);
  return cdf.value[lo] + t * (cdf.value[hi] - cdf.value[lo]);
}

std::vector<DensityProfile::Disagreement> DensityProfile::pairwise_disagreement() const {
  std::vector<Disagreement> out;
  for (std::size_t a = 0; a < cols_.size(); ++a)
    for (std::size_t b = a + 1; b < cols_.size(); ++b) {
      Disagreement d;
      d.a = cols_[a].first;
      d.b = cols_[b].first;
      for (std::size_t i = 0; i < x_.size(); ++i)
        d.max_abs = std::max(d.max_abs, std::abs(cols_[a].second[i] - cols_[b].second[i]));
      out.push_back(std::move(d));
    }
  return out;
}

void DensityProfile::write_csv(std::ostream& out, const std::string& provenance) const {
  out << "# " << provenance << "\n";
  out << "x";
  for (const auto& kv : cols_) out << "," << kv.first;
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < x_.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", x_[i]);
    out << buf;
    for (const auto& kv : cols_) {
      std::snprintf(buf, sizeof(buf), ",%.17g", kv.second[i]);
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace gwt
