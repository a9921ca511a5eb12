#include "gwtails/mc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gwtails/errors.hpp"
#include "gwtails/parallel.hpp"
#include "gwtails/profile.hpp"

namespace gwt {

namespace {

inline void philox_round(std::uint32_t& c0, std::uint32_t& c1, std::uint32_t& c2,
                         std::uint32_t& c3, std::uint32_t k0, std::uint32_t k1) {
  constexpr std::uint64_t kMul0 = 0xD2511F53ull;
  constexpr std::uint64_t kMul1 = 0xCD9E8D57ull;
  const std::uint64_t p0 = kMul0 * c0;
  const std::uint64_t p1 = kMul1 * c2;
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  const std::uint32_t n0 = hi1 ^ c1 ^ k0;
  const std::uint32_t n1 = lo1;
  const std::uint32_t n2 = hi0 ^ c3 ^ k1;
  const std::uint32_t n3 = lo0;
  c0 = n0;
  c1 = n1;
  c2 = n2;
  c3 = n3;
}

}  // namespace

void Philox::refill() {
  std::uint32_t c0 = ctr0_, c1 = ctr1_, c2 = ctr2_, c3 = ctr3_;
  std::uint32_t k0 = key0_, k1 = key1_;
  for (int round = 0; round < 10; ++round) {
    philox_round(c0, c1, c2, c3, k0, k1);
    k0 += 0x9E3779B9u;  // golden-ratio Weyl sequence
    k1 += 0xBB67AE85u;
  }
  out_[0] = c0;
  out_[1] = c1;
  out_[2] = c2;
  out_[3] = c3;
  have_ = 4;
  if (++ctr0_ == 0) ++ctr1_;
}

Philox::result_type Philox::operator()() {
  if (have_ == 0) refill();
  return out_[--have_];
}

double Philox::uniform01() {
  const std::uint64_t hi = (*this)();
  const std::uint64_t lo = (*this)();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;  // 53 bits
  return static_cast<double>(bits) * 0x1.0p-53;
}

AliasTable::AliasTable(const std::vector<double>& probs) {
  const int count = static_cast<int>(probs.size()) - 1;
  if (count < 1) throw ValidationError("mc", "alias_table", "need at least one outcome");
  double total = 0.0;
  for (int k = 1; k <= count; ++k) total += probs[k];
  prob_.assign(count, 0.0);
  alias_.assign(count, 0);
  std::vector<double> scaled(count);
  for (int k = 0; k < count; ++k) scaled[k] = probs[k + 1] / total * count;

  std::vector<int> small, large;
  for (int k = count - 1; k >= 0; --k)
    (scaled[k] < 1.0 ? small : large).push_back(k);
  while (!small.empty() && !large.empty()) {
    const int s = small.back();
    const int l = large.back();
    small.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (int k : large) prob_[k] = 1.0;
  for (int k : small) prob_[k] = 1.0;
}

int AliasTable::sample(Philox& rng) const {
  const double u = rng.uniform01() * prob_.size();
  int slot = static_cast<int>(u);
  if (slot >= static_cast<int>(prob_.size())) slot = static_cast<int>(prob_.size()) - 1;
  const double frac = u - slot;
  const int k = frac < prob_[slot] ? slot : alias_[slot];
  return k + 1;  // outcomes are 1-based family sizes
}

namespace {

/// Exact binomial draw. CDF-walk inversion when n p is small, else the
/// library's rejection sampler over the Philox stream.
long long binomial_draw(Philox& rng, long long n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const double np = static_cast<double>(n) * p;
  if (np < 30.0 && n < (1LL << 62)) {
    const double odds = p / (1.0 - p);
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    if (pmf > 0.0) {
      double cdf = pmf;
      double u = rng.uniform01();
      long long k = 0;
      while (u > cdf && k < n) {
        ++k;
        pmf *= odds * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cdf += pmf;
        if (pmf < 1e-300 && cdf > 0.999999999999) break;
      }
      return k;
    }
  }
  std::binomial_distribution<long long> dist(n, p);
  return dist(rng);
}

}  // namespace

SimResult simulate_w(const RationalPGF& model, const SimulationConfig& cfg) {
  if (cfg.generations < 1 || cfg.paths < 1)
    throw ValidationError("mc", "simulate_w", "generations and paths must be >= 1");

  // Offspring truncation K with tail mass below the configured threshold.
  int truncation = 0;
  std::vector<double> probs;
  {
    int K = 32;
    while (true) {
      probs = model.offspring_taylor(K);
      double mass = 0.0;
      for (int k = 1; k <= K; ++k) mass += probs[k];
      if (1.0 - mass < cfg.truncation_tail || K >= 4096) {
        truncation = K;
        break;
      }
      K *= 2;
    }
    probs.resize(truncation + 1);
  }
  const AliasTable alias(probs);

  // Keep the population cap out of play for W up to 64: T such that
  // E^T * 64 <= cap. Residual bias in W_T is O(E^{-T}) in distribution.
  const double mean = model.mean();
  int t_eff = cfg.generations;
  const int t_cap = static_cast<int>(std::floor(
      std::log(static_cast<double>(cfg.population_cap) / 64.0) / std::log(mean)));
  t_eff = std::max(1, std::min(t_eff, t_cap));

  SimResult result;
  result.effective_generations = t_eff;
  result.offspring_truncation = truncation;
  result.w.assign(cfg.paths, 0.0);
  std::vector<std::uint8_t> capped(cfg.paths, 0);
  const double norm = std::pow(mean, -t_eff);

  // Conditional probabilities for the sequential-binomial multinomial split.
  std::vector<double> cond_p(truncation + 1, 0.0);
  {
    double rest = 1.0;
    double total = 0.0;
    for (int k = 1; k <= truncation; ++k) total += probs[k];
    for (int k = 1; k <= truncation; ++k) {
      cond_p[k] = std::min(1.0, (probs[k] / total) / std::max(rest, 1e-300));
      rest -= probs[k] / total;
    }
  }

  parallel_for(cfg.paths, [&](std::int64_t path) {
    Philox rng(cfg.rng_seed, static_cast<std::uint64_t>(path));
    long long population = 1;
    bool hit_cap = false;
    for (int t = 0; t < t_eff && population > 0; ++t) {
      long long next = 0;
      if (population <= 256) {
        for (long long j = 0; j < population; ++j) next += alias.sample(rng);
      } else {
        // Multinomial split by sequential binomials over the bucket chain.
        long long remaining = population;
        for (int k = 1; k <= truncation && remaining > 0; ++k) {
          const double pk = (k == truncation) ? 1.0 : cond_p[k];
          const long long draws =
              (pk >= 1.0) ? remaining : binomial_draw(rng, remaining, pk);
          next += static_cast<long long>(k) * draws;
          remaining -= draws;
        }
      }
      if (next >= cfg.population_cap) {
        next = cfg.population_cap;
        hit_cap = true;
      }
      population = next;
    }
    result.w[path] = static_cast<double>(population) * norm;
    capped[path] = hit_cap ? 1 : 0;
  });

  for (auto flag : capped) result.cap_hits += flag;
  result.cap_fraction = static_cast<double>(result.cap_hits) / static_cast<double>(cfg.paths);
  return result;
}

CompareStats compare(std::span<const double> samples, const DensityProfile& profile,
                     int bins, double lo, double hi) {
  if (samples.empty())
    throw ValidationError("mc", "compare", "no samples");
  if (bins < 1 || !(hi > lo))
    throw ValidationError("mc", "compare", "need bins >= 1 and hi > lo");
  CompareStats stats;
  stats.n_samples = static_cast<long long>(samples.size());
  stats.bins = bins;
  stats.lo = lo;
  stats.hi = hi;

  const double width = (hi - lo) / bins;
  std::vector<double> hist(bins, 0.0);
  double mean = 0.0;
  for (double w : samples) {
    mean += w;
    if (w >= lo && w < hi) hist[static_cast<int>((w - lo) / width)] += 1.0;
  }
  stats.sample_mean = mean / static_cast<double>(samples.size());
  for (double& h : hist) h /= static_cast<double>(samples.size()) * width;

  for (const auto& column : profile.columns()) {
    double l1 = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double center = lo + (b + 0.5) * width;
      l1 += std::abs(hist[b] - profile.interpolate(column, center)) * width;
    }
    stats.columns.push_back(column);
    stats.l1.push_back(l1);
  }

  if (profile.has_column("p_integral")) {
    // One-sample KS against the CDF of the integral column.
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto cdf = profile.cumulative("p_integral");
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double model_cdf = profile.cdf_at(cdf, sorted[i]);
      const double emp_lo = static_cast<double>(i) / sorted.size();
      const double emp_hi = static_cast<double>(i + 1) / sorted.size();
      ks = std::max({ks, std::abs(model_cdf - emp_lo), std::abs(model_cdf - emp_hi)});
    }
    stats.ks_vs_integral = ks;
  }
  return stats;
}

}  // namespace gwt
