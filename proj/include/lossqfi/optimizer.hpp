#pragma once

// Fixed-energy QFI maximization over probe families.
//
// Every candidate is feasible by construction: the energy constraint is built
// into each parametrization rather than added as a penalty.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lossqfi/estimation.hpp"
#include "lossqfi/simplex.hpp"

namespace lossqfi {

struct OptimizationResult {
  std::string family;
  std::vector<std::string> param_names;
  std::vector<double> best_params;
  double best_qfi = 0.0;
  double nbar = 0.0;
  double phi = 0.0;
  int starts = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  int evaluations = 0;
  int skipped = 0;  // candidates rejected by the cutoff policy
};

inline constexpr int qutrit_grid_points = 721;
inline constexpr double qutrit_beta_tol = 1e-6;
inline constexpr int superposition_restarts = 32;
inline constexpr int superposition_max_k = 8;
inline constexpr int gaussian_grid_x = 41;
inline constexpr int gaussian_grid_theta = 17;
inline constexpr double tie_tol = 1e-9;

namespace detail {

inline bool lexicographically_smaller(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Uniform double in [0, 1) from the top 53 bits; platform independent.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 restart_stream(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

inline double wrap_phase(double a) {
  double w = std::fmod(a, 2.0 * std::numbers::pi);
  if (w < 0.0) w += 2.0 * std::numbers::pi;
  return w;
}

}  // namespace detail

/// Largest beta for which the qutrit parametrization reaches `nbar`.
inline double qutrit_beta_max(double nbar) {
  if (nbar <= 1.0) return std::numbers::pi / 2;
  return 0.5 * std::acos(std::clamp(2.0 * nbar - 3.0, -1.0, 1.0));
}

/// Optimal qutrit weight beta at phases mu = nu = pi: a 721-point grid on
/// the feasible range, refined by golden-section search around the best node.
inline OptimizationResult optimize_qutrit(double nbar, const LossParameter& phi) {
  if (!(nbar > 0.0 && nbar <= 2.0)) throw Error(ErrorCode::domain, "qutrit optimization needs nbar in (0, 2]");
  const double hi = qutrit_beta_max(nbar);
  auto h = [&](double beta) {
    return qfi_of_state(build_probe(probe::Qutrit{nbar, std::clamp(beta, 0.0, hi)}), phi);
  };

  std::vector<double> grid(qutrit_grid_points);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < qutrit_grid_points; ++i) {
    grid[static_cast<std::size_t>(i)] = h(hi * i / (qutrit_grid_points - 1));
    best = std::max(best, grid[static_cast<std::size_t>(i)]);
  }
  int pick = 0;
  while (grid[static_cast<std::size_t>(pick)] < best - tie_tol) ++pick;

  const double step = hi / (qutrit_grid_points - 1);
  const double lo_b = std::max(0.0, (pick - 1) * step);
  const double hi_b = std::min(hi, (pick + 1) * step);
  const auto g = golden_section([&](double b) { return -h(b); }, lo_b, hi_b, qutrit_beta_tol);

  double beta = pick * step;
  double value = grid[static_cast<std::size_t>(pick)];
  if (-g.f > value + tie_tol) {
    beta = g.x;
    value = -g.f;
  }

  OptimizationResult res;
  res.family = "qutrit_opt";
  res.param_names = {"beta", "mu", "nu"};
  res.best_params = {beta, std::numbers::pi, std::numbers::pi};
  res.best_qfi = value;
  res.nbar = nbar;
  res.phi = phi.phi();
  res.starts = 1;
  res.converged = true;
  res.evaluations = qutrit_grid_points + g.evaluations;
  return res;
}

/// Feasible populations {p_m >= 0, sum p_m = 1, sum m p_m = nbar} as the
/// convex hull of their vertices; each vertex has at most two nonzero levels.
inline std::vector<std::vector<double>> energy_slice_vertices(int kmax, double nbar) {
  std::vector<std::vector<double>> verts;
  const auto levels = static_cast<std::size_t>(kmax + 1);
  for (int i = 0; i <= kmax; ++i) {
    if (nbar == static_cast<double>(i)) {
      std::vector<double> v(levels, 0.0);
      v[static_cast<std::size_t>(i)] = 1.0;
      verts.push_back(std::move(v));
    }
    for (int j = i + 1; j <= kmax; ++j) {
      if (!(i < nbar && nbar < j)) continue;
      std::vector<double> v(levels, 0.0);
      v[static_cast<std::size_t>(i)] = (j - nbar) / (j - i);
      v[static_cast<std::size_t>(j)] = (nbar - i) / (j - i);
      verts.push_back(std::move(v));
    }
  }
  return verts;
}

/// Maps (hyperspherical angles, relative phases) to amplitudes c_0..c_kmax.
/// Squared sphere coordinates weight the slice vertices; c_0 is real >= 0.
class SuperpositionChart {
 public:
  SuperpositionChart(int kmax, double nbar) : kmax_(kmax), verts_(energy_slice_vertices(kmax, nbar)) {}

  std::size_t angle_count() const { return verts_.size() - 1; }
  std::size_t dimension() const { return angle_count() + static_cast<std::size_t>(kmax_); }

  std::vector<cplx> amplitudes(const std::vector<double>& u) const {
    const std::size_t nv = verts_.size();
    std::vector<double> weight(nv);
    double sin_prod = 1.0;
    for (std::size_t v = 0; v < nv; ++v) {
      const double s = v + 1 < nv ? sin_prod * std::cos(u[v]) : sin_prod;
      weight[v] = s * s;
      if (v + 1 < nv) sin_prod *= std::sin(u[v]);
    }
    std::vector<cplx> c(static_cast<std::size_t>(kmax_ + 1));
    for (int m = 0; m <= kmax_; ++m) {
      double p = 0.0;
      for (std::size_t v = 0; v < nv; ++v) p += weight[v] * verts_[v][static_cast<std::size_t>(m)];
      const double mag = std::sqrt(std::max(p, 0.0));
      const double phase = m == 0 ? 0.0 : u[angle_count() + static_cast<std::size_t>(m - 1)];
      c[static_cast<std::size_t>(m)] = std::polar(mag, phase);
    }
    return c;
  }

 private:
  int kmax_;
  std::vector<std::vector<double>> verts_;
};

namespace detail {

// Reported form: magnitudes |c_0..c_k| followed by phases arg c_1..arg c_k in [0, 2pi).
inline std::vector<double> superposition_params(const std::vector<cplx>& c) {
  std::vector<double> out;
  for (const cplx& x : c) out.push_back(std::abs(x));
  for (std::size_t m = 1; m < c.size(); ++m) out.push_back(std::abs(c[m]) > 0.0 ? wrap_phase(std::arg(c[m])) : 0.0);
  return out;
}

}  // namespace detail

inline std::vector<cplx> superposition_from_params(const std::vector<double>& params) {
  const std::size_t levels = (params.size() + 1) / 2;
  std::vector<cplx> c(levels);
  for (std::size_t m = 0; m < levels; ++m) {
    c[m] = std::polar(params[m], m == 0 ? 0.0 : params[levels + m - 1]);
  }
  return c;
}

/// Best superposition of |0>..|kmax> at mean photon number `nbar`:
/// 32 seeded Nelder-Mead restarts, the winner polished by one more restart.
inline OptimizationResult optimize_superposition(int kmax, double nbar, const LossParameter& phi,
                                                 std::uint64_t seed = 0) {
  if (kmax < 1 || kmax > superposition_max_k) {
    throw Error(ErrorCode::domain, "superposition order must lie in [1, 8]");
  }
  if (!(nbar >= 0.0 && nbar <= kmax)) {
    throw Error(ErrorCode::domain, "superposition energy infeasible: need 0 <= nbar <= kmax");
  }
  const SuperpositionChart chart(kmax, nbar);
  const std::size_t dim = chart.dimension();
  int evaluations = 0;
  auto neg_h = [&](const std::vector<double>& u) {
    ++evaluations;
    return -qfi_of_state(FockVector(Eigen::Map<const CVector>(chart.amplitudes(u).data(), kmax + 1)), phi);
  };

  std::vector<double> steps(dim);
  for (std::size_t k = 0; k < dim; ++k) steps[k] = k < chart.angle_count() ? 0.3 : 0.6;

  struct Candidate {
    double h;
    std::vector<double> params;
    std::vector<double> u;
    bool converged;
  };
  std::vector<Candidate> found;
  for (int r = 0; r < superposition_restarts; ++r) {
    auto rng = detail::restart_stream(seed, r);
    std::vector<double> u0(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const double span = k < chart.angle_count() ? std::numbers::pi / 2 : 2.0 * std::numbers::pi;
      u0[k] = span * detail::unit_uniform(rng);
    }
    const SimplexResult sr = nelder_mead(neg_h, u0, steps);
    found.push_back({-sr.f, detail::superposition_params(chart.amplitudes(sr.x)), sr.x, sr.converged});
  }
  auto winner = [&]() {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : found) best = std::max(best, c.h);
    const Candidate* pick = nullptr;
    for (const auto& c : found) {
      if (c.h < best - tie_tol) continue;
      if (!pick || detail::lexicographically_smaller(c.params, pick->params)) pick = &c;
    }
    return *pick;
  };
  {
    const Candidate lead = winner();
    const SimplexResult sr = nelder_mead(neg_h, lead.u, steps);
    found.push_back({-sr.f, detail::superposition_params(chart.amplitudes(sr.x)), sr.x, sr.converged});
  }
  const Candidate best = winner();

  OptimizationResult res;
  res.family = "superposition_opt";
  for (int m = 0; m <= kmax; ++m) res.param_names.push_back("abs_c" + std::to_string(m));
  for (int m = 1; m <= kmax; ++m) res.param_names.push_back("arg_c" + std::to_string(m));
  res.best_params = best.params;
  // Re-evaluate at the reported parameters so the record is self-consistent.
  res.best_qfi = qfi_of_state(build_probe(probe::Superposition{superposition_from_params(best.params)}), phi);
  res.nbar = nbar;
  res.phi = phi.phi();
  res.starts = superposition_restarts;
  res.converged = best.converged;
  res.seed = seed;
  res.evaluations = evaluations;
  return res;
}

/// Displaced squeezed vacuum with |eta|^2 = (1 - x) nbar and sinh^2 r = x nbar.
inline probe::Gaussian gaussian_at_energy(double nbar, double x, double theta_rel) {
  x = std::clamp(x, 0.0, 1.0);
  return probe::Gaussian{std::sqrt((1.0 - x) * nbar), std::asinh(std::sqrt(x * nbar)), theta_rel};
}

/// Best Gaussian probe at fixed energy: a 41 x 17 grid over the squeezing
/// fraction x in [0, 1] and relative phase in [0, pi] (the QFI is even in
/// the phase), then simplex refinement with x = sin^2 u.
inline OptimizationResult optimize_gaussian(double nbar, const LossParameter& phi, const CutoffPolicy& policy = {}) {
  if (!(nbar > 0.0)) throw Error(ErrorCode::domain, "Gaussian optimization needs nbar > 0");
  int evaluations = 0;
  int skipped = 0;
  auto h = [&](double x, double theta) {
    ++evaluations;
    try {
      return qfi_of_state(build_probe(gaussian_at_energy(nbar, x, theta), policy), phi);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::cutoff_overflow) throw;
      ++skipped;
      return -std::numeric_limits<double>::infinity();
    }
  };

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> grid;
  for (int i = 0; i < gaussian_grid_x; ++i) {
    for (int j = 0; j < gaussian_grid_theta; ++j) {
      const double x = static_cast<double>(i) / (gaussian_grid_x - 1);
      const double theta = std::numbers::pi * j / (gaussian_grid_theta - 1);
      // At x = 0 the phase is irrelevant.
      const double v = (i == 0 && j > 0) ? grid.front() : h(x, theta);
      grid.push_back(v);
      best = std::max(best, v);
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::cutoff_overflow, "no Gaussian grid point fits the cutoff cap");
  }
  std::size_t pick = 0;
  while (grid[pick] < best - tie_tol) ++pick;
  const int pi_idx = static_cast<int>(pick) / gaussian_grid_theta;
  const int pj_idx = static_cast<int>(pick) % gaussian_grid_theta;
  double x_best = static_cast<double>(pi_idx) / (gaussian_grid_x - 1);
  double th_best = std::numbers::pi * pj_idx / (gaussian_grid_theta - 1);
  double h_best = best;

  const double dx = 1.0 / (gaussian_grid_x - 1);
  const double dth = std::numbers::pi / (gaussian_grid_theta - 1);
  auto neg = [&](const std::vector<double>& v) {
    const double s = std::sin(v[0]);
    return -h(s * s, v[1]);
  };
  const double u0 = std::asin(std::sqrt(x_best));
  const double du = std::max(0.5 * dx / std::max(std::sin(2.0 * u0), 0.2), 0.02);
  const SimplexResult sr = nelder_mead(neg, {u0, th_best}, {du, 0.5 * dth});
  bool converged = sr.converged;
  if (-sr.f > h_best + tie_tol) {
    const double s = std::sin(sr.x[0]);
    x_best = s * s;
    th_best = detail::wrap_phase(sr.x[1]);
    if (th_best > std::numbers::pi) th_best = 2.0 * std::numbers::pi - th_best;
    h_best = -sr.f;
  }
  if (x_best == 0.0) th_best = 0.0;

  const probe::Gaussian g = gaussian_at_energy(nbar, x_best, th_best);
  OptimizationResult res;
  res.family = "gaussian_opt";
  res.param_names = {"squeeze_fraction", "theta_rel", "eta", "r"};
  res.best_params = {x_best, th_best, g.eta.real(), g.r};
  res.best_qfi = h_best;
  res.nbar = nbar;
  res.phi = phi.phi();
  res.starts = 1;
  res.converged = converged;
  res.evaluations = evaluations;
  res.skipped = skipped;
  return res;
}

/// Real amplitude alpha of the cat state N(|alpha> + sign|-alpha>) with the
/// given mean photon number: alpha^2 tanh(alpha^2) (even) or alpha^2 coth(alpha^2) (odd).
inline double cat_alpha_for_nbar(double nbar, int sign) {
  if (sign == 1) {
    if (!(nbar > 0.0)) throw Error(ErrorCode::domain, "even cat needs nbar > 0");
  } else if (sign == -1) {
    if (!(nbar > 1.0)) throw Error(ErrorCode::domain, "odd cat needs nbar > 1");
  } else {
    throw Error(ErrorCode::domain, "cat sign must be +1 or -1");
  }
  auto energy = [sign](double y) { return sign == 1 ? y * std::tanh(y) : y / std::tanh(y); };
  double lo = sign == 1 ? nbar : 0.0;
  double hi = sign == 1 ? nbar + 2.0 : nbar;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (energy(mid) < nbar ? lo : hi) = mid;
  }
  return std::sqrt(0.5 * (lo + hi));
}

/// Better of the even and odd cat states at the given energy.
inline OptimizationResult optimize_cat(double nbar, const LossParameter& phi, const CutoffPolicy& policy = {}) {
  OptimizationResult res;
  res.family = "cat_opt";
  res.param_names = {"alpha", "sign"};
  res.best_qfi = -std::numeric_limits<double>::infinity();
  for (int sign : {1, -1}) {
    if (sign == -1 && !(nbar > 1.0)) continue;
    const double alpha = cat_alpha_for_nbar(nbar, sign);
    const double h = qfi_of_state(build_probe(probe::Cat{alpha, sign}, policy), phi);
    ++res.evaluations;
    if (h > res.best_qfi + tie_tol) {
      res.best_qfi = h;
      res.best_params = {alpha, static_cast<double>(sign)};
    }
  }
  res.nbar = nbar;
  res.phi = phi.phi();
  res.starts = res.evaluations;
  res.converged = true;
  return res;
}

}  // namespace lossqfi
