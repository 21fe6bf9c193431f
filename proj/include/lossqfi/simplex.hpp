#pragma once

// Derivative-free minimizers: Nelder-Mead simplex and golden-section search.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace lossqfi {

struct SimplexOptions {
  int max_iterations = 500;
  double f_tol = 1e-9;  // stop when all vertex values lie within f_tol
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f from x0 with an initial simplex built from per-coordinate
/// steps. Standard coefficients: reflect 1, expand 2, contract 1/2, shrink 1/2.
template <class F>
SimplexResult nelder_mead(F&& f, const std::vector<double>& x0, const std::vector<double>& steps,
                          const SimplexOptions& opt = {}) {
  const std::size_t n = x0.size();
  SimplexResult res;
  if (n == 0) {
    res.x = x0;
    res.f = f(x0);
    res.evaluations = 1;
    res.converged = true;
    return res;
  }

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += steps[i];
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
  res.evaluations = static_cast<int>(n + 1);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto along = [&](double t, std::vector<double>& out) {
    // out = centroid + t (centroid - worst)
    const auto& worst = pts[order[n]];
    for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + t * (centroid[k] - worst[k]);
  };

  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    if (vals[order[n]] - vals[order[0]] <= opt.f_tol) {
      res.converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[order[i]][k] / static_cast<double>(n);

    const std::size_t worst = order[n];
    along(1.0, trial);
    const double fr = f(trial);
    ++res.evaluations;
    if (fr < vals[order[0]]) {
      along(2.0, trial2);
      const double fe = f(trial2);
      ++res.evaluations;
      if (fe < fr) {
        pts[worst] = trial2;
        vals[worst] = fe;
      } else {
        pts[worst] = trial;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[order[n - 1]]) {
      pts[worst] = trial;
      vals[worst] = fr;
      continue;
    }
    // Outside contraction when the reflection beats the worst point, inside otherwise.
    const bool outside = fr < vals[worst];
    along(outside ? 0.5 : -0.5, trial2);
    const double fc = f(trial2);
    ++res.evaluations;
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = trial2;
      vals[worst] = fc;
      continue;
    }
    const auto best = pts[order[0]];
    for (std::size_t i = 1; i <= n; ++i) {
      auto& p = pts[order[i]];
      for (std::size_t k = 0; k < n; ++k) p[k] = best[k] + 0.5 * (p[k] - best[k]);
      vals[order[i]] = f(p);
      ++res.evaluations;
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  res.x = pts[best];
  res.f = vals[best];
  res.iterations = it;
  return res;
}

struct GoldenResult {
  double x;
  double f;
  int evaluations;
};

/// Minimizes a unimodal f on [lo, hi] to bracket width `tol`.
template <class F>
GoldenResult golden_section(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  if (fc <= fd) return {c, fc, evals};
  return {d, fd, evals};
}

}  // namespace lossqfi
