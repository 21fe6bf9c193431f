#pragma once

// Simulated photon-counting experiments with Fock probes and the
// maximum-likelihood loss estimate built from the surviving photon count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "lossqfi/channel.hpp"
#include "lossqfi/errors.hpp"

namespace lossqfi {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based generator: each (seed, repetition, run, draw) tuple maps to
/// one uniform in [0, 1), so results do not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(detail::splitmix64(seed)) {}

  std::uint64_t bits(std::uint64_t repetition, std::uint64_t run, std::uint64_t draw) const {
    std::uint64_t h = detail::splitmix64(key_ ^ repetition);
    h = detail::splitmix64(h ^ run);
    return detail::splitmix64(h ^ draw);
  }

  double uniform(std::uint64_t repetition, std::uint64_t run, std::uint64_t draw) const {
    return static_cast<double>(bits(repetition, run, draw) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

struct ExperimentReport {
  int n = 0;
  double phi_true = 0.0;
  int runs = 0;         // N
  int repetitions = 0;  // R
  std::uint64_t seed = 0;
  double phi_mean = 0.0;
  double empirical_variance = 0.0;  // across repetitions, 1/(R-1) normalization
  double crlb = 0.0;                // 1 / (4 n N)
  double normalized_variance = 0.0; // empirical_variance * 4 n N
  int boundary_hits = 0;            // repetitions whose estimate was clipped
};

inline constexpr int min_simulation_runs = 100;
inline constexpr int min_simulation_repetitions = 10;

/// Fisher information of k ~ Binomial(n, cos^2 phi) about phi; equals 4n.
inline double binomial_fisher(int n, const LossParameter& phi) {
  const double c = std::cos(phi.phi());
  const double s = std::sin(phi.phi());
  const double dp = -2.0 * s * c;
  return n * dp * dp / (c * c * s * s);
}

/// phi_hat = arccos sqrt(S / (n N)), clipped to the loss domain. Sets
/// `clipped` when the clip was active.
inline double ml_loss_estimate(long long survivors, int n, int runs, double phi_min, bool& clipped) {
  const double frac = static_cast<double>(survivors) / (static_cast<double>(n) * runs);
  const double raw = std::acos(std::sqrt(std::clamp(frac, 0.0, 1.0)));
  const double est = std::clamp(raw, phi_min, std::numbers::pi / 2 - phi_min);
  clipped = est != raw;
  return est;
}

/// R independent experiments of N photon-counting runs on |n>, each run
/// drawing n Bernoulli(cos^2 phi) survivals.
inline ExperimentReport simulate_fock_estimation(int n, const LossParameter& phi, int runs, int repetitions,
                                                 std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::domain, "Fock probe needs n >= 1");
  if (runs < min_simulation_runs) throw Error(ErrorCode::domain, "simulation needs N >= 100 runs");
  if (repetitions < min_simulation_repetitions) throw Error(ErrorCode::domain, "simulation needs R >= 10 repetitions");
  const double guard = 10.0 / std::sqrt(4.0 * n * static_cast<double>(runs));
  const double lo = phi.phi_min();
  const double hi = std::numbers::pi / 2 - phi.phi_min();
  if (phi.phi() - lo < guard || hi - phi.phi() < guard) {
    throw Error(ErrorCode::domain, "phi lies within 10 standard deviations of the domain edge");
  }

  const CounterRng rng(seed);
  const double c = std::cos(phi.phi());
  const double survive = c * c;

  ExperimentReport rep;
  rep.n = n;
  rep.phi_true = phi.phi();
  rep.runs = runs;
  rep.repetitions = repetitions;
  rep.seed = seed;

  // Welford accumulation in repetition order.
  double mean = 0.0, m2 = 0.0;
  for (int k = 0; k < repetitions; ++k) {
    long long survivors = 0;
    for (int j = 0; j < runs; ++j) {
      for (int d = 0; d < n; ++d) {
        if (rng.uniform(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(d)) <
            survive)
          ++survivors;
      }
    }
    bool clipped = false;
    const double est = ml_loss_estimate(survivors, n, runs, phi.phi_min(), clipped);
    if (clipped) ++rep.boundary_hits;
    const double delta = est - mean;
    mean += delta / (k + 1);
    m2 += delta * (est - mean);
  }
  rep.phi_mean = mean;
  rep.empirical_variance = m2 / (repetitions - 1);
  rep.crlb = 1.0 / (4.0 * n * static_cast<double>(runs));
  rep.normalized_variance = rep.empirical_variance / rep.crlb;
  return rep;
}

}  // namespace lossqfi
