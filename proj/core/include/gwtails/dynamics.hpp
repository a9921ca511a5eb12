#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gwtails/pgf.hpp"
#include "gwtails/types.hpp"

namespace gwt {

enum class Membership : std::uint8_t { captured, escaped, undecided };

struct DynamicsConfig {
  int t_max = 500;
  double capture_radius = 1e-3;  // G contracts on this disk for valid models
  double escape_radius = 1e8;
};

/// Orbit classification under iteration of G: captured once the orbit enters
/// the capture disk (convergence to 0 is then certain), escaped on leaving
/// the escape radius or hitting a pole of G within the guard, undecided
/// otherwise. Boundary points legitimately stay undecided.
Membership julia_membership(const RationalPGF& model, Complex z,
                            const DynamicsConfig& cfg = {});

struct RasterRequest {
  Complex center{0.0, 0.0};
  double width = 2.0;
  double height = 2.0;
  int nx = 256;
  int ny = 256;
  DynamicsConfig dyn;
};

struct Raster {
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first: 0 captured, 255 escaped, 128 undecided
};

Raster raster(const RationalPGF& model, const RasterRequest& request);

/// Binary P5 portable graymap.
void write_pgm(std::ostream& out, const Raster& r);
std::string raster_sidecar_json(const RationalPGF& model, const RasterRequest& request,
                                const std::string& provenance);

struct AngleEstimate {
  double theta_hat = 0.0;   // full opening of the captured sector at z = 1
  double kappa_max = 0.0;   // largest captured |kappa|; theta_hat = 2 kappa_max
  double grid_step = 0.0;   // resolution of theta_hat (two kappa grid steps)
  std::vector<double> probe_radii;
  int angle_steps = 0;
};

/// Critical angle of the filled-Julia sector at z = 1: probes 1 - rho e^{i kappa}
/// over a kappa grid on [0, pi] at every probe radius; the fan must be captured
/// at all radii and both signs of kappa. angle_steps is the number of kappa
/// grid intervals (>= 180); theta resolution is pi/angle_steps * 2.
AngleEstimate critical_angle_estimate(const RationalPGF& model,
                                      std::vector<double> probe_radii = {1e-2, 1e-3, 1e-4},
                                      int angle_steps = 360,
                                      const DynamicsConfig& cfg = {});

}  // namespace gwt
