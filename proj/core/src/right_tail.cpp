#include "gwtails/right_tail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "gwtails/errors.hpp"
#include "gwtails/parallel.hpp"

namespace gwt {

namespace {

struct Node {
  Complex value;
  std::vector<int> word;
  bool may_record = true;       // false for principal children: their pole is the parent's
  bool has_inherited = false;   // principal children reuse parent ptinv / E exactly
  Complex inherited_ptinv{};
};

struct Candidate {
  Complex omega;
  int depth;
  int source_zero;
  std::vector<int> word;
};

/// Index of the preimage nearest the first-order predictor 1 + (z-1)/E, the
/// same branch pi_inverse steps through; -1 on a tie (ambiguous).
int principal_index(const std::vector<Complex>& points, Complex z, double mean) {
  const Complex predictor = 1.0 + (z - 1.0) / mean;
  double best = std::numeric_limits<double>::infinity(), second = best;
  int pick = -1;
  for (int b = 0; b < static_cast<int>(points.size()); ++b) {
    const double d = std::abs(points[b] - predictor);
    if (d < best) {
      second = best;
      best = d;
      pick = b;
    } else if (d < second) {
      second = d;
    }
  }
  if (points.size() > 1 && (second - best) <= 1e-10 * (second + best)) return -1;
  return pick;
}

bool record_order(const PoleRecord& a, const PoleRecord& b) {
  if (a.omega.real() != b.omega.real()) return a.omega.real() < b.omega.real();
  return a.omega.imag() < b.omega.imag();
}

}  // namespace

Enumeration enumerate_poles(const ConjugacyEvaluator& ev, const EnumerationConfig& cfg) {
  const RationalPGF& model = ev.model();
  const double log_e_r = std::log(model.r()) / model.log_mean();
  if (!(log_e_r < -1.0))
    throw HypothesisViolation("right_tail", "enumerate_poles",
                              "requires log_E r < -1");
  if (model.deg_gap() > 1 && !cfg.asymptotic_only)
    throw NotApplicable("right_tail", "enumerate_poles",
                        "deg P > deg Q + 1: residue series is asymptotic only; "
                        "pass the asymptotic-only override to proceed");

  const double mean = model.mean();
  Enumeration out;
  out.asymptotic_only = model.deg_gap() > 1;

  std::vector<Candidate> candidates;
  // Running bounds on |Pi^{-1}| over canonical chain points. The lower bound
  // caps how deep the tree must follow nodes whose own backward orbit does
  // not converge (descendants of depth m have pole magnitude >= E^{m+2} *
  // min). The ratio max/(E*min) bounds how far past r_max a node must be
  // expanded before all its descendants are out of range too; doubled as a
  // cushion and capped by the configured margin.
  double min_ptinv = std::numeric_limits<double>::infinity();
  double max_ptinv = 0.0;
  const auto effective_margin = [&]() {
    if (candidates.size() < 8) return cfg.frontier_margin;
    const double needed = 2.0 * max_ptinv / (mean * min_ptinv);
    return std::clamp(needed, 2.0, cfg.frontier_margin);
  };
  for (int j = 0; j < static_cast<int>(model.q_zeros().size()); ++j) {
    std::vector<Node> level = {{model.q_zeros()[j], {}, true, false, Complex{}}};
    for (int depth = 0; depth <= cfg.depth_max && !level.empty(); ++depth) {
      const double epow = std::pow(mean, depth + 1);
      // pi_inverse per node, parallel over the level.
      std::vector<Complex> ptinv(level.size());
      std::vector<int> status(level.size(), 0);  // 0 ok, 1 ambiguous, 2 divergent
      parallel_for(static_cast<std::int64_t>(level.size()), [&](std::int64_t i) {
        if (level[i].has_inherited) {
          ptinv[i] = level[i].inherited_ptinv;
          return;
        }
        try {
          ptinv[i] = ev.pi_inverse(level[i].value);
        } catch (const BranchAmbiguity&) {
          status[i] = 1;
        } catch (const Divergence&) {
          status[i] = 2;
        }
      });

      std::vector<Node> next;
      for (std::size_t i = 0; i < level.size(); ++i) {
        bool expandable = true;
        if (status[i] == 0) {
          const Complex omega = epow * ptinv[i];
          if (level[i].may_record) {
            if (std::abs(omega) <= cfg.r_max) {
              candidates.push_back({omega, depth, j, level[i].word});
              min_ptinv = std::min(min_ptinv, std::abs(ptinv[i]));
              max_ptinv = std::max(max_ptinv, std::abs(ptinv[i]));
            } else {
              out.frontier_re = std::min(out.frontier_re, omega.real());
            }
          }
          expandable = std::abs(omega) <= cfg.r_max * effective_margin();
        } else if (status[i] == 1) {
          ++out.skipped_branch_ambiguity;
          // Gate on the configured margin and a deep cushion: min_ptinv is a
          // running estimate that later levels may still undercut (and is
          // meaningless until something has been recorded).
          expandable = !(std::isfinite(min_ptinv) &&
                         epow * mean * 0.15 * min_ptinv > cfg.r_max * cfg.frontier_margin);
        } else {
          // No eventually-principal orbit starts at this node, so it has no
          // pole of its own; its subtree still does, until the growth gate
          // E^{depth+2} |Pi^{-1}| outruns r_max. min_ptinv only estimates the
          // chain-point floor, hence the extra factor-2 cushion.
          ++out.skipped_divergence;
          expandable = !(std::isfinite(min_ptinv) &&
                         epow * mean * 0.15 * min_ptinv > cfg.r_max * cfg.frontier_margin);
        }
        if (expandable && depth < cfg.depth_max) {
          const auto pre = model.preimages(level[i].value);
          // The principal child continues the parent's backward orbit: its
          // pole equals the parent's (the shortening identity), so it never
          // records; it inherits ptinv/E instead of re-deriving it.
          const int principal =
              status[i] == 0 ? principal_index(pre.points, level[i].value, mean) : -1;
          for (int b = 0; b < static_cast<int>(pre.points.size()); ++b) {
            Node child{pre.points[b], level[i].word, true, false, Complex{}};
            child.word.push_back(b);
            if (b == principal) {
              child.may_record = false;
              child.has_inherited = true;
              child.inherited_ptinv = ptinv[i] / mean;
            }
            next.push_back(std::move(child));
          }
        }
      }
      if (next.size() > 2000000)
        throw Divergence("right_tail", "enumerate_poles",
                         "preimage tree exploded; lower depth or r_max");
      level = std::move(next);
    }
  }

  // Dedupe by value: canonical order makes near-equal candidates adjacent;
  // keep the shortest chain.
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.omega.real() != b.omega.real()) return a.omega.real() < b.omega.real();
    if (a.omega.imag() != b.omega.imag()) return a.omega.imag() < b.omega.imag();
    return a.depth < b.depth;
  });
  std::vector<Candidate> unique;
  for (auto& c : candidates) {
    bool duplicate = false;
    for (auto it = unique.rbegin(); it != unique.rend(); ++it) {
      if (c.omega.real() - it->omega.real() >
          cfg.dedupe_rel * std::max(std::abs(c.omega), 1.0) * 4.0)
        break;
      if (std::abs(c.omega - it->omega) <=
          cfg.dedupe_rel * std::max(std::abs(c.omega), std::abs(it->omega))) {
        if (c.depth < it->depth) *it = c;  // prefer the canonical short chain
        duplicate = true;
        break;
      }
    }
    if (!duplicate) unique.push_back(std::move(c));
  }

  for (auto& c : unique) {
    PoleRecord rec;
    rec.omega = c.omega;
    rec.depth = c.depth;
    rec.power = c.depth + 1;
    rec.source_zero = c.source_zero;
    rec.branch_word = std::move(c.word);
    rec.propagation_k = 0;
    out.records.push_back(std::move(rec));
  }
  out.primaries = static_cast<int>(out.records.size());

  // E-propagation: when deg P = deg Q + 1, E^k omega is a pole as well.
  if (model.deg_gap() == 1) {
    const std::size_t primary_count = out.records.size();
    for (std::size_t i = 0; i < primary_count; ++i) {
      Complex omega = out.records[i].omega;
      for (int k = 1;; ++k) {
        omega *= mean;
        if (std::abs(omega) > cfg.r_max) {
          out.frontier_re = std::min(out.frontier_re, omega.real());
          break;
        }
        PoleRecord rec = out.records[i];
        rec.omega = omega;
        rec.power = out.records[i].power + k;
        rec.propagation_k = k;
        rec.cert_residual = 0.0;
        out.records.push_back(std::move(rec));
        ++out.propagated;
      }
    }
  }

  // Residues and certification.
  std::vector<int> degenerate(out.records.size(), 0);
  parallel_for(static_cast<std::int64_t>(out.records.size()), [&](std::int64_t i) {
    PoleRecord& rec = out.records[i];
    try {
      rec.residue = residue_at(ev, rec);
    } catch (const DegenerateDerivative&) {
      degenerate[i] = 1;
    }
    if (rec.propagation_k == 0) {
      const Complex z_j = model.q_zeros()[rec.source_zero];
      rec.cert_residual = std::abs(ev.pi_eval(rec.omega / mean) - z_j) / std::abs(z_j);
    }
  });
  std::vector<PoleRecord> kept;
  kept.reserve(out.records.size());
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    if (degenerate[i]) {
      ++out.flagged_degenerate;
      continue;
    }
    kept.push_back(std::move(out.records[i]));
  }
  out.records = std::move(kept);
  out.primaries -= out.flagged_degenerate;

  std::sort(out.records.begin(), out.records.end(), record_order);

  // Residue scale near the frontier, for the truncation indicator.
  if (!out.records.empty()) {
    const double re_hi = out.records.back().omega.real();
    const double re_cut = 0.75 * re_hi;
    for (const auto& r : out.records)
      if (r.omega.real() >= re_cut)
        out.frontier_residue_scale = std::max(out.frontier_residue_scale, std::abs(r.residue));
  }
  return out;
}

Complex residue_at(const ConjugacyEvaluator& ev, const PoleRecord& record) {
  const RationalPGF& model = ev.model();
  const double mean = model.mean();
  const Complex z_j = model.q_zeros().at(record.source_zero);

  const Complex omega0 = record.omega / std::pow(mean, record.propagation_k);
  const Complex pi_der = ev.pi_eval_d(omega0 / mean).derivative;
  if (!(std::abs(pi_der) > 1e-200))
    throw DegenerateDerivative("right_tail", "residue_at",
                               "Pi'(omega/E) vanishes: non-simple pole");
  const Complex qd = model.q().derivative().eval(z_j);
  Complex res = mean * model.p().eval(z_j) / (qd * pi_der);
  if (record.propagation_k > 0) {
    const double c = model.p()[model.p().degree()] / model.q()[model.q().degree()];
    res *= std::pow(Complex(c * mean), record.propagation_k);
  }
  return res;
}

RightTailDensity density_right(const Enumeration& enumeration,
                               std::span<const double> x_grid) {
  RightTailDensity out;
  out.values.assign(x_grid.size(), 0.0);
  out.truncation_estimate.assign(x_grid.size(), 0.0);
  const double frontier_re = std::isfinite(enumeration.frontier_re)
                                 ? enumeration.frontier_re
                                 : std::numeric_limits<double>::infinity();

  parallel_for(static_cast<std::int64_t>(x_grid.size()), [&](std::int64_t i) {
    const double x = x_grid[i];
    double acc = 0.0;
    for (const auto& rec : enumeration.records) {
      const double im_tol = 1e-9 * std::max(1.0, std::abs(rec.omega));
      if (rec.omega.imag() < -im_tol) continue;  // covered by the conjugate partner
      const Complex term = rec.residue * std::exp(-rec.omega * x);
      acc -= (rec.omega.imag() > im_tol) ? 2.0 * term.real() : term.real();
    }
    out.values[i] = acc;
    if (std::isfinite(frontier_re))
      out.truncation_estimate[i] =
          enumeration.frontier_residue_scale * std::exp(-frontier_re * x);
  });
  return out;
}

void write_poles_csv(std::ostream& out, const Enumeration& enumeration,
                     const std::string& provenance) {
  out << "# " << provenance << "\n";
  out << "re_omega,im_omega,re_res,im_res,depth,power,source_zero,propagation_k\n";
  char buf[256];
  for (const auto& r : enumeration.records) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d,%d,%d,%d\n",
                  r.omega.real(), r.omega.imag(), r.residue.real(), r.residue.imag(),
                  r.depth, r.power, r.source_zero, r.propagation_k);
    out << buf;
  }
}

}  // namespace gwt
