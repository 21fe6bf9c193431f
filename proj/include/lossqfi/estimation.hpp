#pragma once

// Symmetric logarithmic derivative, quantum and classical Fisher information,
// and Cramer-Rao bookkeeping for loss estimation.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "lossqfi/channel.hpp"
#include "lossqfi/fock_core.hpp"
#include "lossqfi/probes.hpp"

namespace lossqfi {

/// Lambda solving d rho = (rho Lambda + Lambda rho)/2 on the support of rho.
struct SLDOperator {
  HermitianOperator matrix;
  Spectrum spectrum;
  double phi = 0.0;
};

/// Both QFI routes plus the SLD they come from.
struct SLDSolution {
  SLDOperator sld;
  double qfi_pairwise = 0.0;  // sum_{pq} 2 |drho_qp|^2 / (p_p + p_q)
  double qfi_trace = 0.0;     // Tr[rho Lambda^2]
};

/// Pairs whose eigenvalue sum falls below `rank_tol * Tr rho` are excluded.
inline constexpr double default_rank_tol = 1e-12;

inline SLDSolution solve_sld(const DensityOperator& rho, const HermitianOperator& drho, double phi = 0.0,
                             double rank_tol = default_rank_tol) {
  const double tr = rho.matrix().trace().real();
  if (!(tr > 0.0)) throw Error(ErrorCode::invalid_input, "SLD needs a state with positive trace");
  if (drho.dim() != rho.dim()) throw Error(ErrorCode::invalid_dimension, "drho and rho differ in size");

  const Spectrum rs = hermitian_eig(rho.matrix());
  const CMatrix& v = rs.eigenvectors;
  const RVector& p = rs.eigenvalues;
  const CMatrix d = v.adjoint() * drho.matrix() * v;
  const double eps = rank_tol * tr;

  const Eigen::Index dim = p.size();
  CMatrix lam = CMatrix::Zero(dim, dim);
  double pairwise = 0.0;
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (Eigen::Index row = 0; row < dim; ++row) {
      const double denom = p(row) + p(col);
      if (denom <= eps) continue;
      lam(row, col) = 2.0 * d(row, col) / denom;
      pairwise += 2.0 * std::norm(d(row, col)) / denom;
    }
  }

  SLDSolution out;
  const CMatrix lam_fock = v * lam * v.adjoint();
  out.sld.matrix = HermitianOperator(lam_fock);
  out.sld.spectrum = hermitian_eig(out.sld.matrix.matrix());
  out.sld.phi = phi;
  out.qfi_pairwise = pairwise;
  const CMatrix& l = out.sld.matrix.matrix();
  out.qfi_trace = (rho.matrix() * l * l).trace().real();
  return out;
}

inline SLDOperator sld(const DensityOperator& rho, const HermitianOperator& drho, const LossParameter& phi) {
  return solve_sld(rho, drho, phi.phi()).sld;
}

/// Output state, its derivative and the SLD solution for a pure probe.
struct ProbeEvolution {
  DensityOperator rho;
  HermitianOperator drho;
  SLDSolution solution;
};

inline ProbeEvolution analyze_probe(const FockVector& psi, const LossParameter& phi) {
  DensityOperator rho = evolve(DensityOperator::from_pure(psi), phi);
  HermitianOperator d = drho_dphi(rho, phi);
  SLDSolution sol = solve_sld(rho, d, phi.phi());
  return {std::move(rho), std::move(d), std::move(sol)};
}

/// Pairwise-route QFI alone, without assembling the SLD.
inline double qfi_value(const DensityOperator& rho, const HermitianOperator& drho,
                        double rank_tol = default_rank_tol) {
  const double tr = rho.matrix().trace().real();
  if (!(tr > 0.0)) throw Error(ErrorCode::invalid_input, "QFI needs a state with positive trace");
  const Spectrum rs = hermitian_eig(rho.matrix());
  const CMatrix d = rs.eigenvectors.adjoint() * drho.matrix() * rs.eigenvectors;
  const RVector& p = rs.eigenvalues;
  const double eps = rank_tol * tr;
  double total = 0.0;
  for (Eigen::Index col = 0; col < p.size(); ++col) {
    for (Eigen::Index row = 0; row < p.size(); ++row) {
      const double denom = p(row) + p(col);
      if (denom > eps) total += 2.0 * std::norm(d(row, col)) / denom;
    }
  }
  return total;
}

/// QFI of the output state for a pure probe (pairwise route).
inline double qfi_of_state(const FockVector& psi, const LossParameter& phi) {
  const DensityOperator rho = evolve(DensityOperator::from_pure(psi), phi);
  return qfi_value(rho, drho_dphi(rho, phi));
}

enum class QfiMethod { numeric, closed_form };

struct EstimationReport {
  ProbeSpec probe;
  double phi = 0.0;
  double nbar = 0.0;
  double qfi = 0.0;
  double qfi_trace_route = 0.0;
  double ultimate_bound = 0.0;  // 4 nbar
  double crlb_variance = 0.0;   // 1 / (N H)
  int runs = 1;
  QfiMethod method = QfiMethod::numeric;
};

struct CramerRao {
  double crlb_variance;
  double ultimate_variance;
};

/// (1/(N H), 1/(4 nbar N)); infinite when the information vanishes.
inline CramerRao cramer_rao(double qfi, int runs, double nbar) {
  if (runs < 1) throw Error(ErrorCode::domain, "run count must be >= 1");
  if (!(qfi >= 0.0)) throw Error(ErrorCode::domain, "Fisher information must be >= 0");
  if (!(nbar >= 0.0)) throw Error(ErrorCode::domain, "mean photon number must be >= 0");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(runs);
  return {qfi > 0.0 ? 1.0 / (n * qfi) : inf, nbar > 0.0 ? 1.0 / (4.0 * nbar * n) : inf};
}

inline EstimationReport qfi(const ProbeSpec& probe, const LossParameter& phi, const CutoffPolicy& policy = {},
                            int runs = 1) {
  const FockVector psi = build_probe(probe, policy);
  const ProbeEvolution ev = analyze_probe(psi, phi);
  EstimationReport rep;
  rep.probe = probe;
  rep.phi = phi.phi();
  rep.nbar = mean_photon(psi);
  rep.qfi = ev.solution.qfi_pairwise;
  rep.qfi_trace_route = ev.solution.qfi_trace;
  rep.ultimate_bound = 4.0 * rep.nbar;
  rep.crlb_variance = cramer_rao(std::max(rep.qfi, 0.0), runs, rep.nbar).crlb_variance;
  rep.runs = runs;
  rep.method = QfiMethod::numeric;
  return rep;
}

enum class ClosedFormFamily { fock, qubit, qutrit02, gaussian_small_n, coherent };

inline ClosedFormFamily parse_closed_form_family(std::string_view tag) {
  if (tag == "fock") return ClosedFormFamily::fock;
  if (tag == "qubit") return ClosedFormFamily::qubit;
  if (tag == "qutrit02") return ClosedFormFamily::qutrit02;
  if (tag == "gaussian_small_n") return ClosedFormFamily::gaussian_small_n;
  if (tag == "coherent") return ClosedFormFamily::coherent;
  throw Error(ErrorCode::parse, "unknown closed-form family '" + std::string(tag) + "'");
}

/// Closed-form QFI; `nbar` is the photon number n for the Fock family.
///   fock              4 n
///   qubit             4 nbar [1 - (1 - nbar) cos^2 phi]
///   qutrit02          4 nbar (1 + z^2) / (1 + (2 - nbar) z + z^2)     (|0>,|2> superposition)
///   gaussian_small_n  4 nbar (1 + z^2) / (1 + 2 z (1 + nbar) + z^2)  (squeezed vacuum, nbar -> 0)
///   coherent          4 nbar sin^2 phi
inline double closed_form_qfi(ClosedFormFamily family, double nbar, const LossParameter& phi) {
  if (!(nbar >= 0.0)) throw Error(ErrorCode::domain, "closed-form QFI needs nbar >= 0");
  const double z = phi.z();
  const double c = std::cos(phi.phi());
  const double s = std::sin(phi.phi());
  switch (family) {
    case ClosedFormFamily::fock: return 4.0 * nbar;
    case ClosedFormFamily::qubit:
      if (nbar > 1.0) throw Error(ErrorCode::domain, "qubit nbar must be <= 1");
      return 4.0 * nbar * (1.0 - (1.0 - nbar) * c * c);
    case ClosedFormFamily::qutrit02:
      if (nbar > 2.0) throw Error(ErrorCode::domain, "qutrit nbar must be <= 2");
      return 4.0 * nbar * (1.0 + z * z) / (1.0 + (2.0 - nbar) * z + z * z);
    case ClosedFormFamily::gaussian_small_n:
      return 4.0 * nbar * (1.0 + z * z) / (1.0 + 2.0 * z * (1.0 + nbar) + z * z);
    case ClosedFormFamily::coherent: return 4.0 * nbar * s * s;
  }
  return 0.0;
}

inline double closed_form_qfi(std::string_view family, double nbar, const LossParameter& phi) {
  return closed_form_qfi(parse_closed_form_family(family), nbar, phi);
}

struct MeasurementOutcome {
  double eigenvalue;
  CVector vector;
};

/// Rank-one eigenprojectors of the SLD, in descending eigenvalue order.
inline std::vector<MeasurementOutcome> optimal_measurement(const SLDOperator& sld) {
  std::vector<MeasurementOutcome> out;
  const Spectrum& s = sld.spectrum;
  out.reserve(static_cast<std::size_t>(s.eigenvalues.size()));
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    out.push_back({s.eigenvalues(k), s.eigenvectors.col(k)});
  }
  return out;
}

inline std::vector<CMatrix> projectors(const std::vector<MeasurementOutcome>& outcomes) {
  std::vector<CMatrix> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(o.vector * o.vector.adjoint());
  return out;
}

/// Fock-basis projectors |m><m|, m = 0..dim-1 (photon counting).
inline std::vector<CMatrix> photon_counting(int dim) {
  std::vector<CMatrix> out;
  for (int m = 0; m < dim; ++m) {
    CMatrix p = CMatrix::Zero(dim, dim);
    p(m, m) = 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

struct ClassicalFisher {
  double value = 0.0;
  bool unbounded = false;  // an outcome with p ~ 0 but dp clearly nonzero
};

/// F = sum_x (dp_x)^2 / p_x with p_x = Tr[Pi_x rho], dp_x = Tr[Pi_x d rho].
inline ClassicalFisher classical_fisher(const std::vector<CMatrix>& povm, const DensityOperator& rho,
                                        const HermitianOperator& drho) {
  ClassicalFisher out;
  for (const CMatrix& e : povm) {
    if (e.rows() != rho.dim() || e.cols() != rho.dim()) {
      throw Error(ErrorCode::invalid_dimension, "POVM element does not match the state dimension");
    }
    const double p = (e * rho.matrix()).trace().real();
    const double dp = (e * drho.matrix()).trace().real();
    if (p < 1e-14) {
      // A rare outcome is harmless when dp^2/p stays negligible.
      if (p > 0.0 && dp * dp <= 1e-8 * p) {
        out.value += dp * dp / p;
        continue;
      }
      if (std::abs(dp) < 1e-12) continue;
      out.unbounded = true;
      continue;
    }
    out.value += dp * dp / p;
  }
  if (out.unbounded) out.value = std::numeric_limits<double>::infinity();
  return out;
}

inline ClassicalFisher classical_fisher(const std::vector<CMatrix>& povm, const ProbeSpec& probe,
                                        const LossParameter& phi, const CutoffPolicy& policy = {}) {
  const FockVector psi = build_probe(probe, policy);
  const DensityOperator rho = evolve(DensityOperator::from_pure(psi), phi);
  return classical_fisher(povm, rho, drho_dphi(rho, phi));
}

}  // namespace lossqfi
