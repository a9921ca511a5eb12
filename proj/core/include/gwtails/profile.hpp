#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gwt {

/// x grid with per-method density columns and disagreement statistics.
class DensityProfile {
 public:
  DensityProfile() = default;
  explicit DensityProfile(std::vector<double> x_grid) : x_(std::move(x_grid)) {}

  const std::vector<double>& x() const { return x_; }
  void set_column(const std::string& name, std::vector<double> values);
  bool has_column(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;
  std::vector<std::string> columns() const;

  /// Linear interpolation on the grid; 0 outside the covered range.
  double interpolate(const std::string& name, double at) const;

  struct Cdf {
    std::vector<double> x;
    std::vector<double> value;
  };
  /// Cumulative trapezoid of a column, anchored at (0, 0).
  Cdf cumulative(const std::string& name) const;
  static double cdf_at(const Cdf& cdf, double at);

  struct Disagreement {
    std::string a, b;
    double max_abs = 0.0;
  };
  std::vector<Disagreement> pairwise_disagreement() const;

  void write_csv(std::ostream& out, const std::string& provenance) const;

 private:
  std::vector<double> x_;
  std::vector<std::pair<std::string, std::vector<double>>> cols_;
};

}  // namespace gwt
