#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gwtails/pgf.hpp"
#include "gwtails/types.hpp"

namespace gwt {

/// Philox-4x32-10 counter-based generator keyed by (seed, stream). Streams
/// are statistically independent, so per-path keying makes results immune to
/// the worker count and iteration order.
class Philox {
 public:
  using result_type = std::uint32_t;
  Philox(std::uint64_t seed, std::uint64_t stream) : key0_(static_cast<std::uint32_t>(seed)),
                                                     key1_(static_cast<std::uint32_t>(seed >> 32)),
                                                     ctr2_(static_cast<std::uint32_t>(stream)),
                                                     ctr3_(static_cast<std::uint32_t>(stream >> 32)) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }
  result_type operator()();
  double uniform01();  // 53-bit uniform in [0, 1)

 private:
  void refill();
  std::uint32_t key0_, key1_;
  std::uint32_t ctr0_ = 0, ctr1_ = 0, ctr2_, ctr3_;
  std::uint32_t out_[4] = {0, 0, 0, 0};
  int have_ = 0;
};

/// Walker alias table over the truncated offspring distribution k = 1..K.
class AliasTable {
 public:
  AliasTable() = default;
  /// probs[k] for k = 1..K (probs[0] ignored); renormalized internally.
  explicit AliasTable(const std::vector<double>& probs);
  int sample(Philox& rng) const;
  int size() const { return static_cast<int>(prob_.size()); }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

struct SimulationConfig {
  int generations = 25;
  long long paths = 1000000;
  std::uint64_t rng_seed = 1;
  long long population_cap = 100000000;
  double truncation_tail = 1e-12;  // offspring truncation K chosen so the tail is below this
};

struct SimResult {
  std::vector<double> w;  // one martingale-limit sample per path
  int effective_generations = 0;
  int offspring_truncation = 0;
  long long cap_hits = 0;
  double cap_fraction = 0.0;
};

/// Evolves X_{t+1} = sum_{j<=X_t} xi_j for `generations` steps (auto-shortened
/// so the cap stays out of play for W <= 64) and returns X_T / E^T per path.
/// Bit-identical for a fixed seed regardless of worker count.
SimResult simulate_w(const RationalPGF& model, const SimulationConfig& cfg);

struct CompareStats {
  long long n_samples = 0;
  int bins = 0;
  double lo = 0.0, hi = 0.0;
  std::vector<std::string> columns;
  std::vector<double> l1;  // per column
  double ks_vs_integral = -1.0;
  double sample_mean = 0.0;
  double cap_fraction = 0.0;
};

class DensityProfile;  // profile.hpp

/// Histogram L1 distances against each analytic column of the profile and a
/// one-sample Kolmogorov-Smirnov statistic against the integral column.
CompareStats compare(std::span<const double> samples, const DensityProfile& profile,
                     int bins = 100, double lo = 0.0, double hi = 6.0);

}  // namespace gwt
