// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lossqfi/lossqfi.hpp"
#include "oracles.hpp"

using namespace lossqfi;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> phi_points(int n, double margin) { return linspace(margin, pi / 2 - margin, n); }

// Shared grid for the family comparisons.
const std::vector<double> family_nbars{0.1, 0.3, 0.5, 0.8, 1.0};
const std::vector<double> family_phis = phi_points(15, 0.05);

Outcome fock_optimality() {
  double worst = 0.0;
  for (int n : {1, 2, 5, 10}) {
    for (double phi : phi_points(25, 1e-3)) {
      const double h = qfi_of_state(FockVector::basis(n, n + 1), LossParameter(phi));
      worst = std::max(worst, std::abs(h - 4.0 * n));
    }
  }
  return {worst < 1e-6, fmt("max |H - 4n| = %.3g over 4 x 25 points", worst)};
}

Outcome qubit_closed_form() {
  double worst = 0.0, phase_worst = 0.0;
  for (double nbar : linspace(0.1, 1.0, 10)) {
    for (double phi : phi_points(10, 0.05)) {
      const LossParameter lp(phi);
      const double h = qfi_of_state(build_probe(qubit_from_nbar(nbar)), lp);
      worst = std::max(worst, std::abs(h - closed_form_qfi(ClosedFormFamily::qubit, nbar, lp)));
      for (double phase : {0.7, 2.1, -1.3}) {
        phase_worst = std::max(phase_worst, std::abs(qfi_of_state(build_probe(qubit_from_nbar(nbar, phase)), lp) - h));
      }
    }
  }
  return {worst < 1e-8 && phase_worst < 1e-9,
          fmt("max closed-form deviation %.3g, max phase dependence %.3g", worst, phase_worst)};
}

Outcome qutrit_closed_form() {
  double worst = 0.0;
  int order_violations = 0;
  for (double nbar : linspace(0.1, 1.0, 10)) {
    for (double phi : phi_points(10, 0.05)) {
      const LossParameter lp(phi);
      const double h = qfi_of_state(build_probe(probe::Qutrit{nbar, 0.0}), lp);
      const double h2 = closed_form_qfi(ClosedFormFamily::qutrit02, nbar, lp);
      worst = std::max(worst, std::abs(h - h2));
      if (h2 < closed_form_qfi(ClosedFormFamily::gaussian_small_n, nbar, lp)) ++order_violations;
    }
  }
  return {worst < 1e-8 && order_violations == 0,
          fmt("max deviation %.3g; H2 < HG at %d of 100 points", worst, order_violations)};
}

Outcome gaussian_small_energy() {
  const double nbar = 0.01;
  double worst_rel = 0.0, worst_phi = 0.0, min_x = 1.0;
  int bad = 0;
  for (double phi : family_phis) {
    const LossParameter lp(phi);
    const OptimizationResult r = optimize_gaussian(nbar, lp);
    const double hg = closed_form_qfi(ClosedFormFamily::gaussian_small_n, nbar, lp);
    const double rel = std::abs(r.best_qfi - hg) / hg;
    const double x = r.best_params[0];
    if (rel > 1e-2 || x <= 0.95) ++bad;
    if (rel > worst_rel) {
      worst_rel = rel;
      worst_phi = phi;
    }
    min_x = std::min(min_x, x);
  }
  return {bad == 0, fmt("%d of 15 points off; worst relative gap %.3g at phi=%.4f; min squeezing fraction %.3g", bad,
                        worst_rel, worst_phi, min_x)};
}

// Golden-section minimum of f on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b, double tol, double& fmin) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  fmin = std::min(fc, fd);
  return fc < fd ? c : d;
}

Outcome gaussian_dip() {
  bool pass = true;
  std::ostringstream detail;
  for (double nbar : {1.0, 5.0}) {
    // Large displacements at nbar = 5 need more levels than the default cap.
    const CutoffPolicy policy{CutoffPolicy{}.tail_tol, 300, CutoffPolicy{}.guard};
    const auto h = [&](double phi) { return optimize_gaussian(nbar, LossParameter(phi), policy).best_qfi; };
    const std::vector<double> coarse = phi_points(13, 0.02);
    std::size_t best = 0;
    std::vector<double> values;
    for (double phi : coarse) values.push_back(h(phi));
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] < values[best]) best = i;
    }
    double hmin = values[best];
    double phi_min = coarse[best];
    if (best > 0 && best + 1 < coarse.size()) {
      double refined = 0.0;
      const double at = golden_min(h, coarse[best - 1], coarse[best + 1], 1e-3, refined);
      if (refined < hmin) {
        hmin = refined;
        phi_min = at;
      }
    }
    const bool ok = hmin >= 1.5 * nbar && hmin <= 2.5 * nbar;
    pass = pass && ok;
    detail << (nbar == 1.0 ? "" : "; ") << "nbar=" << nbar << ": min H = " << format_number(hmin) << " = "
           << format_number(hmin / nbar) << " nbar at phi=" << format_number(phi_min);
  }
  return {pass, detail.str()};
}

Outcome qutrit_dominance() {
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  for (double nbar : family_nbars) {
    for (double phi : family_phis) {
      const LossParameter lp(phi);
      const double diff = optimize_qutrit(nbar, lp).best_qfi - optimize_gaussian(nbar, lp).best_qfi;
      if (diff < worst) {
        worst = diff;
        where = fmt("nbar=%.2f phi=%.4f", nbar, phi);
      }
    }
  }
  return {worst >= -1e-4, fmt("min (H2 - HG) = %.3g at ", worst) + where};
}

Outcome family_ordering() {
  double worst32 = std::numeric_limits<double>::infinity();
  double worst21 = std::numeric_limits<double>::infinity();
  for (double nbar : family_nbars) {
    for (double phi : family_phis) {
      const LossParameter lp(phi);
      const double h1 = qfi_of_state(build_probe(qubit_from_nbar(nbar)), lp);
      const double h2 = optimize_qutrit(nbar, lp).best_qfi;
      const double h3 = optimize_superposition(3, nbar, lp).best_qfi;
      worst32 = std::min(worst32, h3 - h2);
      worst21 = std::min(worst21, h2 - h1);
    }
  }
  return {worst32 >= -1e-6 && worst21 >= -1e-6, fmt("min (H3 - H2) = %.3g, min (H2 - H1) = %.3g", worst32, worst21)};
}

Outcome ultimate_bound() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dims(1, 12);
  double worst = -std::numeric_limits<double>::infinity();
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const FockVector psi(oracle::random_state(rng, dims(rng)));
    const double nbar = mean_photon(psi);
    for (double phi : phi_points(10, 0.05)) {
      const double h = qfi_of_state(psi, LossParameter(phi));
      if (h > 4.0 * nbar * (1.0 + 1e-6) + 1e-12) ++violations;
      if (nbar > 0.0) worst = std::max(worst, h / (4.0 * nbar));
    }
  }
  return {violations == 0, fmt("%d violations; max H/(4 nbar) = %.9f", violations, worst)};
}

Outcome degauss_fidelity() {
  int points = 0, bad3 = 0, bad5 = 0;
  double min3 = 1.0, min5 = 1.0;
  std::string worst;
  for (double eta : linspace(0.0, 2.0, 20)) {
    for (double r : linspace(-1.0, 1.0, 20)) {
      if (eta == 0.0 && r == 0.0) continue;  // vacuum: nothing to subtract
      const FockVector sub = photon_subtract(displaced_squeezed_vacuum(eta, r, 0.0));
      const double nbar = mean_photon(sub);
      if (nbar > 1.0) continue;
      ++points;
      const double f3 = truncation_fidelity(sub, 3);
      const double f5 = truncation_fidelity(sub, 5);
      if (f3 <= 0.92) ++bad3;
      if (f5 <= 0.99) ++bad5;
      if (f3 < min3) {
        min3 = f3;
        worst = fmt("eta=%.3f r=%.3f nbar=%.3f", eta, r, nbar);
      }
      min5 = std::min(min5, f5);
    }
  }
  return {bad3 == 0 && bad5 == 0,
          fmt("%d points with nbar <= 1; F3 <= 0.92 at %d, F5 <= 0.99 at %d; min F3 = %.4f (", points, bad3, bad5,
              min3) +
              worst + fmt("), min F5 = %.4f", min5)};
}

Outcome region_coverage() {
  const RegionMap region = region_map(default_region_eta_grid(), default_region_r_grid());
  const CoverageReport rep =
      coverage_check({pi / 16, pi / 8, pi / 4, 3 * pi / 8}, linspace(0.05, 0.95, 19), region);
  return {rep.passed(), fmt("%d region points; %d of %d optimal points uncovered, %d exempt misses",
                            static_cast<int>(region.points.size()), rep.uncovered,
                            static_cast<int>(rep.points.size()), rep.uncovered_in_exception)};
}

Outcome measurement_attainment() {
  const std::vector<ProbeSpec> families{
      probe::Fock{3},
      qubit_from_nbar(0.4, 0.7),
      probe::Qutrit{0.6, 0.8},
      probe::Qutrit{0.9, 0.2, 0.4, 2.0},
      probe::Superposition{{cplx(0.6), cplx(0.0, 0.3), cplx(-0.5), cplx(0.2, 0.1)}},
      probe::Coherent{cplx(0.9, 0.4)},
      probe::Cat{1.1, +1},
      probe::Cat{0.8, -1},
      probe::Gaussian{cplx(0.5, 0.0), 0.3, 0.0},
      probe::Gaussian{cplx(0.2, 0.6), -0.4, 1.2},
      probe::PhotonSubtracted{0.7, 0.25},
      probe::TruncatedSubtracted{0.7, 0.25, 3},
  };
  double worst = 0.0;
  std::string where;
  for (const ProbeSpec& spec : families) {
    for (double phi : {0.2, 0.5, pi / 4, 1.1, 1.4}) {
      const ProbeEvolution ev = analyze_probe(build_probe(spec), LossParameter(phi));
      const ClassicalFisher f = classical_fisher(projectors(optimal_measurement(ev.solution.sld)), ev.rho, ev.drho);
      const double h = ev.solution.qfi_pairwise;
      const double rel = f.unbounded ? std::numeric_limits<double>::infinity() : std::abs(f.value - h) / h;
      if (rel > worst) {
        worst = rel;
        where = format_probe(spec) + fmt(" at phi=%.3f", phi);
      }
    }
  }
  return {worst <= 1e-6, fmt("%d families x 5 phi; max relative |F - H| = %.3g", static_cast<int>(families.size()),
                             worst) +
                             (where.empty() ? "" : " (" + where + ")")};
}

Outcome monte_carlo() {
  const ExperimentReport one = simulate_fock_estimation(1, LossParameter(pi / 4), 10000, 200, 7);
  const ExperimentReport two = simulate_fock_estimation(2, LossParameter(pi / 4), 10000, 200, 7);
  const auto in_band = [](double v) { return v >= 0.85 && v <= 1.15; };
  return {in_band(one.normalized_variance) && in_band(two.normalized_variance),
          fmt("seed 7: normalized variance %.4f (n=1), %.4f (n=2)", one.normalized_variance,
              two.normalized_variance)};
}

Outcome channel_contract() {
  std::mt19937_64 rng(31);
  double trace_err = 0.0, min_eig = 0.0, semigroup_err = 0.0, deriv_err = 0.0;
  const auto to_phi = [](double g) { return loss_reparametrize(g, LossScale::gamma_t, LossScale::phi); };
  for (int dim : {1, 2, 5, 12, 24, 40, 64}) {
    const CMatrix rho0 = oracle::random_density(rng, dim, std::max(1, dim / 3));
    const DensityOperator rho(rho0);
    for (double phi : phi_points(8, 0.05)) {
      const LossParameter lp(phi);
      const DensityOperator out = evolve(rho, lp);
      trace_err = std::max(trace_err, std::abs(out.matrix().trace() - cplx(1.0)));
      min_eig = std::min(min_eig, hermitian_eig(out.matrix()).eigenvalues.minCoeff());
      const CMatrix d = drho_dphi(out, lp).matrix();
      deriv_err = std::max(deriv_err, (d - oracle::drho_fd(rho0, phi)).cwiseAbs().maxCoeff());
    }
    for (auto [g1, g2] : {std::pair{0.1, 0.4}, {0.7, 0.7}, {1.5, 0.2}}) {
      const DensityOperator two = evolve(evolve(rho, LossParameter(to_phi(g1))), LossParameter(to_phi(g2)));
      const DensityOperator once = evolve(rho, LossParameter(to_phi(g1 + g2)));
      semigroup_err = std::max(semigroup_err, (two.matrix() - once.matrix()).cwiseAbs().maxCoeff());
    }
  }
  return {trace_err <= 1e-10 && min_eig >= -1e-10 && semigroup_err <= 1e-9 && deriv_err <= 1e-6,
          fmt("D up to 64: trace error %.3g, min eigenvalue %.3g, semigroup error %.3g, derivative error %.3g",
              trace_err, min_eig, semigroup_err, deriv_err)};
}

Outcome cat_claim() {
  double best_gain = -std::numeric_limits<double>::infinity();
  std::string gain_at;
  for (double nbar : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    for (double phi : {pi / 32, pi / 16, pi / 12, pi / 8}) {
      const LossParameter lp(phi);
      const double gain = optimize_cat(nbar, lp).best_qfi - optimize_gaussian(nbar, lp).best_qfi;
      if (gain > best_gain) {
        best_gain = gain;
        gain_at = fmt("nbar=%.2f phi=%.4f", nbar, phi);
      }
    }
  }
  double worst_loss = std::numeric_limits<double>::infinity();
  std::string loss_at;
  for (double nbar : {0.5, 1.0, 2.0}) {
    for (double phi : {pi / 3, 5 * pi / 12, 1.5}) {
      const LossParameter lp(phi);
      const double gain = optimize_cat(nbar, lp).best_qfi - optimize_gaussian(nbar, lp).best_qfi;
      if (gain < worst_loss) {
        worst_loss = gain;
        loss_at = fmt("nbar=%.2f phi=%.4f", nbar, phi);
      }
    }
  }
  return {best_gain > 0.0 && worst_loss < 0.0,
          fmt("best cat advantage %.4g at ", best_gain) + gain_at + fmt("; worst at phi >= pi/3 %.4g at ", worst_loss) +
              loss_at};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Fock optimality", fock_optimality},
      {"qubit closed form", qubit_closed_form},
      {"qutrit |0>,|2> closed form", qutrit_closed_form},
      {"Gaussian small-energy form", gaussian_small_energy},
      {"Gaussian suboptimality dip", gaussian_dip},
      {"qutrit dominance over Gaussian", qutrit_dominance},
      {"family ordering", family_ordering},
      {"ultimate bound", ultimate_bound},
      {"truncation fidelity", degauss_fidelity},
      {"region coverage", region_coverage},
      {"measurement attainment", measurement_attainment},
      {"Monte Carlo saturation", monte_carlo},
      {"channel contract", channel_contract},
      {"cat-state comparison", cat_claim},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
