#pragma once

// De-Gaussification: fidelity of level truncations of photon-subtracted
// Gaussian states, and the (eta, r) -> (nbar, beta) attainable-region map
// compared against the optimal qutrit curves.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lossqfi/optimizer.hpp"
#include "lossqfi/probes.hpp"
#include "lossqfi/subtraction.hpp"

namespace lossqfi {

/// |<psi|T_L psi>|^2 for the L-level truncation T_L.
inline double truncation_fidelity(const FockVector& psi, int levels) {
  return fidelity(psi, truncate_levels(psi, levels));
}

struct RegionPoint {
  double eta;
  double r;
  double nbar;
  double beta;
};

struct RegionMap {
  std::vector<RegionPoint> points;
  std::vector<double> eta_grid;
  std::vector<double> r_grid;
  int skipped = 0;  // vacuum input or cutoff overflow
};

/// n inclusive samples of [lo, hi].
inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_input, "linspace needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

// Fine enough that the coverage tolerances below are not limited by sampling.
inline std::vector<double> default_region_eta_grid() { return linspace(0.0, 2.0, 401); }
inline std::vector<double> default_region_r_grid() { return linspace(-1.0, 1.0, 401); }

/// Samples the 3-level truncations of a D(eta) S(r)|0> for real eta >= 0 and
/// real r, keeping those with nbar <= 1. Points are ordered eta-major.
inline RegionMap region_map(const std::vector<double>& eta_grid, const std::vector<double>& r_grid,
                            const CutoffPolicy& policy = {}) {
  if (eta_grid.empty() || r_grid.empty()) throw Error(ErrorCode::invalid_input, "region grids must be nonempty");
  RegionMap map;
  map.eta_grid = eta_grid;
  map.r_grid = r_grid;
  for (double eta : eta_grid) {
    if (!(eta >= 0.0)) throw Error(ErrorCode::domain, "region eta must be >= 0");
    for (double r : r_grid) {
      try {
        const FockVector t = truncate_levels(photon_subtract(displaced_squeezed_vacuum(eta, r, 0.0, policy)), 3);
        const QutritCoords q = qutrit_coords(t);
        if (q.nbar <= 1.0 + 1e-12) map.points.push_back({eta, r, std::min(q.nbar, 1.0), q.beta});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::degenerate_state && e.code() != ErrorCode::cutoff_overflow) throw;
        ++map.skipped;
      }
    }
  }
  return map;
}

struct CoverageTolerance {
  double nbar = 0.02;
  double beta = 0.03;
};

/// Points where the choice of beta hardly matters are exempt: every qutrit
/// at that (nbar, phi) reaches the optimal QFI within `flat_rel`. This
/// happens at very high loss, where all probes sit near 4 nbar.
struct CoverageException {
  double flat_rel = 1e-3;
  int beta_samples = 91;
};

struct CoveragePoint {
  double phi;
  double nbar;
  double beta_opt;
  double qfi_opt;
  double qfi_spread;  // (H_opt - min_beta H) / H_opt
  bool covered;
  bool exception;  // inside the permitted corner
};

struct CoverageReport {
  std::vector<CoveragePoint> points;
  int uncovered = 0;              // misses outside the exception corner
  int uncovered_in_exception = 0;
  bool passed() const { return uncovered == 0; }
};

inline bool region_covers(const RegionMap& region, double nbar, double beta, const CoverageTolerance& tol = {}) {
  return std::any_of(region.points.begin(), region.points.end(), [&](const RegionPoint& p) {
    return std::abs(p.nbar - nbar) <= tol.nbar && std::abs(p.beta - beta) <= tol.beta;
  });
}

/// Relative spread of the qutrit QFI over beta, sampled on a uniform grid.
inline double qutrit_qfi_spread(double nbar, const LossParameter& phi, double h_opt, int samples) {
  const double hi = qutrit_beta_max(nbar);
  double lowest = h_opt;
  for (int i = 0; i < samples; ++i) {
    const double beta = hi * i / std::max(1, samples - 1);
    lowest = std::min(lowest, qfi_of_state(build_probe(probe::Qutrit{nbar, beta}), phi));
  }
  return h_opt > 0.0 ? (h_opt - lowest) / h_opt : 0.0;
}

/// Checks each optimal qutrit point (nbar, beta*(nbar, phi)) against the region.
inline CoverageReport coverage_check(const std::vector<double>& phi_list, const std::vector<double>& nbar_grid,
                                     const RegionMap& region, const CoverageTolerance& tol = {},
                                     const CoverageException& corner = {}) {
  if (region.points.empty()) throw Error(ErrorCode::invalid_input, "coverage check needs a nonempty region");
  CoverageReport rep;
  for (double phi : phi_list) {
    const LossParameter lp(phi);
    for (double nbar : nbar_grid) {
      const OptimizationResult opt = optimize_qutrit(nbar, lp);
      CoveragePoint pt{phi, nbar, opt.best_params[0], opt.best_qfi, 0.0, false, false};
      pt.qfi_spread = qutrit_qfi_spread(nbar, lp, opt.best_qfi, corner.beta_samples);
      pt.exception = pt.qfi_spread <= corner.flat_rel;
      pt.covered = region_covers(region, nbar, pt.beta_opt, tol);
      if (!pt.covered) ++(pt.exception ? rep.uncovered_in_exception : rep.uncovered);
      rep.points.push_back(pt);
    }
  }
  return rep;
}

}  // namespace lossqfi
