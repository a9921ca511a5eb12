#include "gwtails/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "gwtails/errors.hpp"
#include "gwtails/parallel.hpp"

namespace gwt {

Membership julia_membership(const RationalPGF& model, Complex z,
                            const DynamicsConfig& cfg) {
  const Polynomial& p = model.p();
  const Polynomial& q = model.q();
  const double q_norm = q.inf_norm();
  for (int t = 0; t < cfg.t_max; ++t) {
    const double mag = std::abs(z);
    if (mag <= cfg.capture_radius) return Membership::captured;
    if (mag >= cfg.escape_radius) return Membership::escaped;
    const Complex qv = q.eval(z);
    const double scale = std::max(1.0, std::pow(mag, q.degree()));
    if (std::abs(qv) <= 1e-14 * q_norm * scale) return Membership::escaped;  // pole hit
    z = p.eval(z) / qv;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return Membership::escaped;
  }
  return Membership::undecided;
}

Raster raster(const RationalPGF& model, const RasterRequest& request) {
  if (request.nx < 1 || request.ny < 1)
    throw ValidationError("dynamics", "raster", "resolution must be >= 1");
  if (!(request.dyn.capture_radius > 0.0) ||
      !(request.dyn.capture_radius < request.dyn.escape_radius))
    throw ValidationError("dynamics", "raster", "need 0 < capture_radius < escape_radius");

  Raster out;
  out.nx = request.nx;
  out.ny = request.ny;
  out.pixels.assign(static_cast<std::size_t>(request.nx) * request.ny, 0);
  const double x0 = request.center.real() - request.width / 2.0;
  const double y_top = request.center.imag() + request.height / 2.0;
  const double dx = request.width / request.nx;
  const double dy = request.height / request.ny;

  parallel_for(static_cast<std::int64_t>(request.ny), [&](std::int64_t row) {
    for (int col = 0; col < request.nx; ++col) {
      const Complex z(x0 + (col + 0.5) * dx, y_top - (row + 0.5) * dy);
      const Membership m = julia_membership(model, z, request.dyn);
      std::uint8_t v = 128;
      if (m == Membership::captured) v = 0;
      if (m == Membership::escaped) v = 255;
      out.pixels[static_cast<std::size_t>(row) * request.nx + col] = v;
    }
  });
  return out;
}

void write_pgm(std::ostream& out, const Raster& r) {
  out << "P5\n" << r.nx << " " << r.ny << "\n255\n";
  out.write(reinterpret_cast<const char*>(r.pixels.data()),
            static_cast<std::streamsize>(r.pixels.size()));
}

std::string raster_sidecar_json(const RationalPGF& model, const RasterRequest& request,
                                const std::string& provenance) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "{\n  \"provenance\": \"%s\",\n  \"model\": %s,\n"
                "  \"center\": [%.17g, %.17g],\n  \"width\": %.17g,\n  \"height\": %.17g,\n"
                "  \"nx\": %d,\n  \"ny\": %d,\n  \"t_max\": %d,\n"
                "  \"capture_radius\": %.17g,\n  \"escape_radius\": %.17g\n}\n",
                provenance.c_str(), model.canonical_json().c_str(), request.center.real(),
                request.center.imag(), request.width, request.height, request.nx, request.ny,
                request.dyn.t_max, request.dyn.capture_radius, request.dyn.escape_radius);
  return buf;
}

AngleEstimate critical_angle_estimate(const RationalPGF& model,
                                      std::vector<double> probe_radii, int angle_steps,
                                      const DynamicsConfig& cfg) {
  if (angle_steps < 180)
    throw ValidationError("dynamics", "critical_angle_estimate", "angle_steps must be >= 180");
  for (std::size_t i = 1; i < probe_radii.size(); ++i)
    if (!(probe_radii[i] < probe_radii[i - 1]) || !(probe_radii[i] > 0.0))
      throw ValidationError("dynamics", "critical_angle_estimate",
                            "probe radii must be positive and decreasing");

  AngleEstimate est;
  est.angle_steps = angle_steps;
  est.probe_radii = probe_radii;
  const double step = kPi / angle_steps;
  est.grid_step = 2.0 * step;

  int captured_upto = -1;  // largest index i with the whole fan kappa <= i*step captured
  for (int i = 0; i <= angle_steps; ++i) {
    const double kappa = std::min(i * step, kPi);
    bool ok = true;
    for (double rho : probe_radii) {
      for (double sign : {1.0, -1.0}) {
        const Complex z = 1.0 - rho * std::exp(Complex(0.0, sign * kappa));
        if (julia_membership(model, z, cfg) != Membership::captured) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) break;
    captured_upto = i;
  }
  est.kappa_max = captured_upto < 0 ? 0.0 : captured_upto * step;
  est.theta_hat = 2.0 * est.kappa_max;
  return est;
}

}  // namespace gwt
