#include "gwtails/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gwtails/conjugacy.hpp"
#include "gwtails/direct_density.hpp"
#include "gwtails/dynamics.hpp"
#include "gwtails/errors.hpp"
#include "gwtails/karlin.hpp"
#include "gwtails/left_tail.hpp"
#include "gwtails/mc.hpp"
#include "gwtails/pgf.hpp"
#include "gwtails/presets.hpp"
#include "gwtails/profile.hpp"
#include "gwtails/right_tail.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace gwt::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string model_path;
  std::string preset_name;
  std::string out_dir = ".";
  bool paper_scale = false;
  bool force = false;
  bool asymptotic_only = false;

  double x_min = 0.1, x_max = 3.0;
  int x_steps = 30;
  double y_max = 0.0;       // 0 = scale default
  long long nodes = 0;      // Fourier integral nodes (total)
  long long theta_nodes = 0;
  double rmax = 0.0;
  int depth = 32;
  int terms = 0;
  int harmonics = 0;
  double y_shift = -1.0;    // <0 = preset/derived default
  double kappa_a = 0.0;     // 0 = preset/auto
  std::uint64_t seed = 1;
  long long paths = 1000000;
  int generations = 25;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--model", o.model_path, "model config JSON ({\"p\": [...], \"q\": [...]})");
  cmd->add_option("--preset", o.preset_name, "built-in model: example1, example2, example3");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_flag("--paper-scale", o.paper_scale, "paper-fidelity parameters (slow)");
  cmd->add_flag("--force", o.force, "overwrite existing outputs");
}

struct Resolved {
  RationalPGF model;
  const Preset* preset = nullptr;  // when a preset was named
  double y_max, rmax;
  long long nodes, theta_nodes;
  int terms, harmonics;
  double y_shift, kappa_a;
};

Resolved resolve(const CommonOpts& o) {
  if (o.model_path.empty() == o.preset_name.empty())
    throw ValidationError("cli", "run", "exactly one of --model or --preset is required");
  const Preset* pre = o.preset_name.empty() ? nullptr : &preset(o.preset_name);
  RationalPGF model = pre ? RationalPGF::from_coeffs(pre->p, pre->q)
                          : RationalPGF::from_json_file(o.model_path);

  Resolved r{std::move(model), pre, 0, 0, 0, 0, 0, 0, 0, 0};
  r.y_max = o.y_max > 0 ? o.y_max : (o.paper_scale ? 2e5 : 2e4);
  r.nodes = o.nodes > 0 ? o.nodes : (o.paper_scale ? 20000000LL : 2000000LL);
  r.theta_nodes = o.theta_nodes > 0 ? o.theta_nodes : (o.paper_scale ? 1000000LL : 200000LL);
  r.rmax = o.rmax > 0 ? o.rmax : (o.paper_scale ? 5000.0 : 500.0);
  if (o.terms > 0)
    r.terms = o.terms;
  else if (o.paper_scale && pre)
    r.terms = pre->left_terms;
  else
    r.terms = 20;
  if (o.harmonics > 0)
    r.harmonics = o.harmonics;
  else if (o.paper_scale && pre)
    r.harmonics = pre->harmonics;
  else
    r.harmonics = 40;
  if (o.y_shift >= 0)
    r.y_shift = o.y_shift;
  else if (pre)
    r.y_shift = pre->y_shift;
  else
    r.y_shift = -1.0;  // derived from the critical angle on demand
  if (o.kappa_a > 0)
    r.kappa_a = o.kappa_a;
  else if (pre)
    r.kappa_a = pre->kappa_scale;
  else
    r.kappa_a = 0.0;  // auto
  return r;
}

std::vector<double> make_grid(const CommonOpts& o) {
  if (o.x_steps < 1 || !(o.x_min > 0.0) || !(o.x_max >= o.x_min))
    throw ValidationError("cli", "run", "bad x grid");
  std::vector<double> xs(o.x_steps);
  if (o.x_steps == 1) {
    xs[0] = o.x_min;
    return xs;
  }
  const double h = (o.x_max - o.x_min) / (o.x_steps - 1);
  for (int i = 0; i < o.x_steps; ++i) xs[i] = o.x_min + i * h;
  return xs;
}

std::string provenance(const RationalPGF& model, const std::string& cmd,
                       const std::string& params) {
  return "gwtails v" + std::string(kVersion) + " cmd=" + cmd + " model=" + model.hash() +
         (params.empty() ? "" : " " + params);
}

fs::path prepare_out(const CommonOpts& o, const std::string& filename, bool force) {
  fs::create_directories(o.out_dir);
  fs::path path = fs::path(o.out_dir) / filename;
  if (fs::exists(path) && !force)
    throw ValidationError("cli", "run",
                          path.string() + " exists; pass --force to overwrite");
  return path;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cli", "run", "cannot write " + path.string());
  out << content;
}

double resolve_y_shift(const Resolved& r) {
  if (r.y_shift >= 0) return r.y_shift;
  const auto est = critical_angle_estimate(r.model);
  ConjugacyEvaluator probe(r.model);
  return choose_y_shift(probe, est.theta_hat);
}

/// theta_star, backing the line off when the full-resolution sweep hits a
/// strip violation the coarse probe missed. User-pinned shifts fail hard.
ThetaTable theta_with_backoff(const ConjugacyEvaluator& ev, int m_max, int n_max, double y,
                              long long nodes, bool user_pinned) {
  for (int attempt = 0;; ++attempt) {
    try {
      return theta_star(ev, m_max, n_max, y, nodes);
    } catch (const StripViolation&) {
      if (user_pinned || attempt >= 3) throw;
      y *= 0.85;
    }
  }
}

KappaTable make_kappa(const Resolved& r) {
  const double a = r.kappa_a > 0 ? r.kappa_a : auto_kappa_scale(r.model, r.terms);
  return phi_inverse_coeffs(r.model, r.terms, a);
}

nlohmann::json mc_stats_json(const RationalPGF& model, const SimulationConfig& cfg,
                             const SimResult& sim) {
  double mean = 0.0, mx = 0.0;
  for (double w : sim.w) {
    mean += w;
    mx = std::max(mx, w);
  }
  mean /= static_cast<double>(sim.w.size());
  nlohmann::json j;
  j["model"] = nlohmann::json::parse(model.canonical_json());
  j["paths"] = cfg.paths;
  j["seed"] = cfg.rng_seed;
  j["effective_generations"] = sim.effective_generations;
  j["offspring_truncation"] = sim.offspring_truncation;
  j["cap_hits"] = sim.cap_hits;
  j["cap_fraction"] = sim.cap_fraction;
  j["sample_mean"] = mean;
  j["sample_max"] = mx;
  return j;
}

int cmd_validate(const CommonOpts& o) {
  std::vector<double> p, q;
  if (!o.preset_name.empty()) {
    const Preset& pre = preset(o.preset_name);
    p = pre.p;
    q = pre.q;
  } else {
    std::ifstream in(o.model_path);
    if (!in) throw ValidationError("cli", "validate", "cannot open " + o.model_path);
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      p = j.at("p").get<std::vector<double>>();
      q = j.at("q").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("cli", "validate", std::string("malformed model config: ") + e.what());
    }
  }
  const auto report = RationalPGF::validate(p, q);
  nlohmann::json j;
  j["valid"] = report.valid;
  j["r"] = report.r;
  j["E"] = report.mean;
  j["violations"] = report.violations;
  j["tool_version"] = kVersion;
  std::cout << j.dump(2) << std::endl;
  if (o.out_dir != ".") {
    write_text(prepare_out(o, "validate.json", o.force), j.dump(2) + "\n");
  }
  return report.valid ? 0 : 2;
}

DensityProfile build_profile(const CommonOpts& o, const Resolved& r,
                             const std::string& method, const std::vector<double>& xs) {
  ConjugacyEvaluator ev(r.model);
  DensityProfile profile(xs);
  const bool all = method == "all";

  if (all || method == "integral") {
    QuadratureConfig qc{r.y_max, r.nodes};
    profile.set_column("p_integral", density_integral(ev, qc, xs));
  }
  if (all || method == "right") {
    EnumerationConfig ec;
    ec.r_max = r.rmax;
    ec.depth_max = o.depth;
    ec.asymptotic_only = o.asymptotic_only;
    const auto enumeration = enumerate_poles(ev, ec);
    // For deg P > deg Q + 1 the residue series is an asymptotic expansion,
    // not an equality; the column name says so.
    profile.set_column(enumeration.asymptotic_only ? "p_right_asymptotic" : "p_right",
                       density_right(enumeration, xs).values);
  }
  if (all || method == "left") {
    auto cfg = LeftTailConfig::for_model(r.model, r.terms, r.harmonics);
    if (!o.paper_scale) cfg.convergence_tol = 5e-2;
    const auto kappa = make_kappa(r);
    const auto theta = theta_with_backoff(ev, r.terms, r.harmonics, resolve_y_shift(r),
                                          r.theta_nodes, o.y_shift >= 0);
    profile.set_column("p_left", density_left(r.model, kappa, theta, cfg, xs).values);
  }
  return profile;
}

int cmd_density(const CommonOpts& o, const std::string& method) {
  const Resolved r = resolve(o);
  const auto xs = make_grid(o);
  const auto profile = build_profile(o, r, method, xs);

  char params[256];
  std::snprintf(params, sizeof(params),
                "method=%s y_max=%g nodes=%lld rmax=%g terms=%d harmonics=%d", method.c_str(),
                r.y_max, r.nodes, r.rmax, r.terms, r.harmonics);
  const auto path = prepare_out(o, "density.csv", o.force);
  std::ostringstream csv;
  profile.write_csv(csv, provenance(r.model, "density", params));
  write_text(path, csv.str());

  for (const auto& d : profile.pairwise_disagreement())
    std::printf("max |%s - %s| = %.6g\n", d.a.c_str(), d.b.c_str(), d.max_abs);
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_poles(const CommonOpts& o) {
  const Resolved r = resolve(o);
  ConjugacyEvaluator ev(r.model);
  EnumerationConfig ec;
  ec.r_max = r.rmax;
  ec.depth_max = o.depth;
  ec.asymptotic_only = o.asymptotic_only;
  const auto enumeration = enumerate_poles(ev, ec);

  char params[128];
  std::snprintf(params, sizeof(params), "rmax=%g depth=%d", r.rmax, o.depth);
  const auto path = prepare_out(o, "poles.csv", o.force);
  std::ostringstream csv;
  write_poles_csv(csv, enumeration, provenance(r.model, "poles", params));
  write_text(path, csv.str());
  std::printf("%d primary + %d propagated poles (|omega| <= %g), wrote %s\n",
              enumeration.primaries, enumeration.propagated, r.rmax, path.string().c_str());
  return 0;
}

int cmd_karlin(const CommonOpts& o) {
  const Resolved r = resolve(o);
  ConjugacyEvaluator ev(r.model);
  const double y = resolve_y_shift(r);
  const auto table = theta_with_backoff(ev, r.terms, r.harmonics, y, r.theta_nodes, o.y_shift >= 0);
  char params[128];
  std::snprintf(params, sizeof(params), "m_max=%d n_max=%d y=%g nodes=%lld", r.terms,
                r.harmonics, table.y_shift, r.theta_nodes);
  const auto path = prepare_out(o, "theta.csv", o.force);
  std::ostringstream csv;
  write_theta_csv(csv, table, provenance(r.model, "karlin", params));
  write_text(path, csv.str());
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_raster(const CommonOpts& o, const RasterRequest& req_in, bool with_angle) {
  const Resolved r = resolve(o);
  RasterRequest req = req_in;
  const auto img = raster(r.model, req);
  const auto path = prepare_out(o, "raster.pgm", o.force);
  {
    std::ostringstream out;
    write_pgm(out, img);
    write_text(path, out.str());
  }
  const auto sidecar = prepare_out(o, "raster.json", o.force);
  write_text(sidecar, raster_sidecar_json(r.model, req, provenance(r.model, "raster", "")));
  if (with_angle) {
    const auto est = critical_angle_estimate(r.model);
    nlohmann::json j;
    j["provenance"] = provenance(r.model, "raster", "angle");
    j["theta_hat"] = est.theta_hat;
    j["kappa_max"] = est.kappa_max;
    j["grid_step"] = est.grid_step;
    j["angle_steps"] = est.angle_steps;
    j["probe_radii"] = est.probe_radii;
    write_text(prepare_out(o, "angle.json", o.force), j.dump(2) + "\n");
  }
  std::printf("wrote %s and %s\n", path.string().c_str(), sidecar.string().c_str());
  return 0;
}

int cmd_mc(const CommonOpts& o, bool export_samples) {
  const Resolved r = resolve(o);
  SimulationConfig cfg;
  cfg.paths = o.paths;
  cfg.rng_seed = o.seed;
  cfg.generations = o.generations;
  const auto sim = simulate_w(r.model, cfg);
  auto j = mc_stats_json(r.model, cfg, sim);
  j["provenance"] = provenance(r.model, "mc", "");
  const auto path = prepare_out(o, "mc_stats.json", o.force);
  write_text(path, j.dump(2) + "\n");
  if (export_samples) {
    const auto sample_path = prepare_out(o, "mc_samples.csv", o.force);
    std::ostringstream csv;
    csv << "# " << provenance(r.model, "mc", "") << "\nw\n";
    const std::size_t cap = std::min<std::size_t>(sim.w.size(), 100000);
    char buf[40];
    for (std::size_t i = 0; i < cap; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g\n", sim.w[i]);
      csv << buf;
    }
    write_text(sample_path, csv.str());
  }
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_compare(const CommonOpts& o) {
  const Resolved r = resolve(o);
  const auto xs = make_grid(o);
  const auto profile = build_profile(o, r, "all", xs);

  SimulationConfig cfg;
  cfg.paths = o.paths;
  cfg.rng_seed = o.seed;
  cfg.generations = o.generations;
  const auto sim = simulate_w(r.model, cfg);
  // Histogram over the span the profile actually covers, so sparse grids do
  // not compare against phantom zeros.
  const double hist_lo = std::max(0.0, xs.front() - (xs.back() - xs.front()) / (2.0 * xs.size()));
  const double hist_hi = std::max(std::min(6.0, xs.back()), hist_lo + 0.25);
  const auto stats = compare(sim.w, profile, 100, hist_lo, hist_hi);

  nlohmann::json j;
  j["provenance"] = provenance(r.model, "compare", "");
  j["model"] = nlohmann::json::parse(r.model.canonical_json());
  for (const auto& d : profile.pairwise_disagreement())
    j["max_disagreement"][d.a + " vs " + d.b] = d.max_abs;
  j["mc"] = mc_stats_json(r.model, cfg, sim);
  for (std::size_t c = 0; c < stats.columns.size(); ++c)
    j["l1_histogram"][stats.columns[c]] = stats.l1[c];
  j["ks_vs_integral"] = stats.ks_vs_integral;

  const auto csv_path = prepare_out(o, "density.csv", o.force);
  std::ostringstream csv;
  profile.write_csv(csv, provenance(r.model, "compare", ""));
  write_text(csv_path, csv.str());
  const auto path = prepare_out(o, "compare.json", o.force);
  write_text(path, j.dump(2) + "\n");
  std::cout << j.dump(2) << std::endl;
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"density of the Galton-Watson martingale limit for rational "
               "probability-generating functions"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string method = "all";
  bool export_samples = false;
  RasterRequest raster_req;
  double center_re = 0.0, center_im = 0.0;

  auto* validate = app.add_subcommand("validate", "validate a model config");
  add_common(validate, o);

  auto* density = app.add_subcommand("density", "density profile by one or all methods");
  add_common(density, o);
  density->add_option("--method", method)->check(CLI::IsMember({"integral", "right", "left", "all"}));
  density->add_option("--x-min", o.x_min);
  density->add_option("--x-max", o.x_max);
  density->add_option("--x-steps", o.x_steps);
  density->add_option("--y-max", o.y_max);
  density->add_option("--nodes", o.nodes);
  density->add_option("--theta-nodes", o.theta_nodes);
  density->add_option("--rmax", o.rmax);
  density->add_option("--depth", o.depth);
  density->add_option("--terms", o.terms);
  density->add_option("--harmonics", o.harmonics);
  density->add_option("--y-shift", o.y_shift);
  density->add_option("--kappa-a", o.kappa_a);
  density->add_flag("--asymptotic-only", o.asymptotic_only);

  auto* poles = app.add_subcommand("poles", "pole/residue records of Pi");
  add_common(poles, o);
  poles->add_option("--rmax", o.rmax);
  poles->add_option("--depth", o.depth);
  poles->add_flag("--asymptotic-only", o.asymptotic_only);

  auto* karlin = app.add_subcommand("karlin", "normalized Fourier table of K^m");
  add_common(karlin, o);
  karlin->add_option("--terms", o.terms);
  karlin->add_option("--harmonics", o.harmonics);
  karlin->add_option("--y-shift", o.y_shift);
  karlin->add_option("--theta-nodes", o.theta_nodes);

  auto* rast = app.add_subcommand("raster", "filled-Julia-set membership raster (P5)");
  add_common(rast, o);
  rast->add_option("--center-re", center_re);
  rast->add_option("--center-im", center_im);
  rast->add_option("--width", raster_req.width);
  rast->add_option("--height", raster_req.height);
  rast->add_option("--nx", raster_req.nx);
  rast->add_option("--ny", raster_req.ny);
  rast->add_option("--t-max", raster_req.dyn.t_max);
  bool with_angle = false;
  rast->add_flag("--angle", with_angle, "also estimate the critical angle (angle.json)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo simulation of the martingale limit");
  add_common(mc, o);
  mc->add_option("--seed", o.seed);
  mc->add_option("--paths", o.paths);
  mc->add_option("--generations", o.generations);
  mc->add_flag("--export-samples", export_samples);

  auto* comp = app.add_subcommand("compare", "all methods + Monte Carlo, combined report");
  add_common(comp, o);
  comp->add_option("--x-min", o.x_min);
  comp->add_option("--x-max", o.x_max);
  comp->add_option("--x-steps", o.x_steps);
  comp->add_option("--y-max", o.y_max);
  comp->add_option("--nodes", o.nodes);
  comp->add_option("--theta-nodes", o.theta_nodes);
  comp->add_option("--rmax", o.rmax);
  comp->add_option("--depth", o.depth);
  comp->add_option("--terms", o.terms);
  comp->add_option("--harmonics", o.harmonics);
  comp->add_option("--y-shift", o.y_shift);
  comp->add_option("--kappa-a", o.kappa_a);
  comp->add_option("--seed", o.seed);
  comp->add_option("--paths", o.paths);
  comp->add_option("--generations", o.generations);
  comp->add_flag("--asymptotic-only", o.asymptotic_only);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (density->parsed()) return cmd_density(o, method);
    if (poles->parsed()) return cmd_poles(o);
    if (karlin->parsed()) return cmd_karlin(o);
    if (rast->parsed()) {
      raster_req.center = Complex(center_re, center_im);
      return cmd_raster(o, raster_req, with_angle);
    }
    if (mc->parsed()) return cmd_mc(o, export_samples);
    if (comp->parsed()) return cmd_compare(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s.%s]: %s\n", e.module_name().c_str(), e.op_name().c_str(),
                 e.what());
    switch (e.kind()) {
      case ErrorKind::validation:
        return 2;
      case ErrorKind::numeric:
        return 3;
      case ErrorKind::hypothesis:
        return 4;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}

}  // namespace gwt::cli
