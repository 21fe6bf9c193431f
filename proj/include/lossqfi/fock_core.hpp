#pragma once

// Truncated single-mode Fock space: state containers, ladder operators,
// Hermitian eigendecomposition and the Gaussian state constructors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lossqfi/errors.hpp"

namespace lossqfi {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Cutoff selection for state families with an infinite Fock expansion.
struct CutoffPolicy {
  double tail_tol = 1e-10;  // neglected population allowed above the cutoff
  int cap = 200;            // largest working dimension before giving up
  int guard = 10;           // extra levels used while exponentiating generators
};

/// Normalized pure state c_0..c_{D-1}.
class FockVector {
 public:
  FockVector() : amps_(CVector::Ones(1)) {}

  explicit FockVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) {
      throw Error(ErrorCode::invalid_dimension, "FockVector needs at least one level");
    }
    const double norm = amps_.norm();
    if (!(norm > 1e-150) || !std::isfinite(norm)) {
      throw Error(ErrorCode::degenerate_state, "FockVector amplitudes have zero norm");
    }
    amps_ /= norm;
  }

  static FockVector basis(int level, int cutoff) {
    if (cutoff < 1 || level < 0 || level >= cutoff) {
      throw Error(ErrorCode::invalid_dimension,
                  "basis level " + std::to_string(level) + " outside cutoff " + std::to_string(cutoff));
    }
    CVector v = CVector::Zero(cutoff);
    v(level) = 1.0;
    return FockVector(std::move(v));
  }

  int cutoff() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  cplx operator[](int m) const { return amps_(m); }

  /// Amplitudes zero-padded (or cropped) to `dim` levels, not renormalized.
  CVector padded(int dim) const {
    CVector out = CVector::Zero(dim);
    const int keep = std::min(dim, cutoff());
    out.head(keep) = amps_.head(keep);
    return out;
  }

 private:
  CVector amps_;
};

/// Hermitian matrix; symmetrized as (M + M^dagger)/2 on construction.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const CMatrix& m) {
    if (m.rows() != m.cols()) {
      throw Error(ErrorCode::invalid_dimension, "HermitianOperator must be square");
    }
    mat_ = 0.5 * (m + m.adjoint());
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& matrix() const { return mat_; }

 private:
  CMatrix mat_;
};

/// Unit-trace Hermitian matrix. Positivity is not re-checked here because
/// it would need an eigendecomposition on every construction; see
/// `min_eigenvalue`.
class DensityOperator {
 public:
  DensityOperator() : mat_(CMatrix::Ones(1, 1)) {}

  explicit DensityOperator(const CMatrix& m, double trace_tol = 1e-10) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw Error(ErrorCode::invalid_dimension, "DensityOperator must be square and nonempty");
    }
    mat_ = 0.5 * (m + m.adjoint());
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > trace_tol) {
      throw Error(ErrorCode::invalid_input, "DensityOperator trace " + std::to_string(tr) + " != 1");
    }
  }

  static DensityOperator from_pure(const FockVector& psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& matrix() const { return mat_; }

 private:
  CMatrix mat_;
};

/// Eigenvalues in descending order with matching orthonormal columns.
struct Spectrum {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

struct LadderOperators {
  CMatrix annihilation;
  CMatrix creation;
  CMatrix number;
};

inline LadderOperators ladder_operators(int dim) {
  if (dim < 1) {
    throw Error(ErrorCode::invalid_dimension, "ladder operators need D >= 1");
  }
  LadderOperators ops;
  ops.annihilation = CMatrix::Zero(dim, dim);
  ops.number = CMatrix::Zero(dim, dim);
  for (int m = 1; m < dim; ++m) {
    ops.annihilation(m - 1, m) = std::sqrt(static_cast<double>(m));
  }
  for (int m = 0; m < dim; ++m) {
    ops.number(m, m) = static_cast<double>(m);
  }
  ops.creation = ops.annihilation.adjoint();
  return ops;
}

namespace detail {

// Rotates the first component of largest magnitude onto the nonnegative
// real axis.
inline void fix_phase(CMatrix& vecs) {
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    auto col = vecs.col(j);
    const double largest = col.cwiseAbs().maxCoeff();
    if (largest == 0.0) continue;
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= largest * (1.0 - 1e-10)) {
        pick = i;
        break;
      }
    }
    const cplx phase = std::conj(col(pick)) / std::abs(col(pick));
    col *= phase;
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix. Purely real input is routed
/// through the real symmetric solver.
inline Spectrum hermitian_eig(const CMatrix& m, double herm_tol = 1e-10) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::invalid_dimension, "hermitian_eig needs a square matrix");
  }
  const Eigen::Index n = m.rows();
  Spectrum out;
  if (n == 0) {
    out.eigenvalues = RVector(0);
    out.eigenvectors = CMatrix(0, 0);
    return out;
  }
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > herm_tol * scale) {
    throw Error(ErrorCode::invalid_input, "hermitian_eig input is not Hermitian");
  }

  RVector vals;
  CMatrix vecs;
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    const Eigen::MatrixXd sym = 0.5 * (m.real() + m.real().transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    vals = solver.eigenvalues();
    vecs = solver.eigenvectors().cast<cplx>();
  } else {
    const CMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
    vals = solver.eigenvalues();
    vecs = solver.eigenvectors();
  }

  // Solver output is ascending; flip to descending.
  out.eigenvalues = vals.reverse();
  out.eigenvectors = vecs.rowwise().reverse();
  detail::fix_phase(out.eigenvectors);
  return out;
}

inline Spectrum hermitian_eig(const HermitianOperator& m) { return hermitian_eig(m.matrix()); }

/// Computes exp(A) v for a generator given only through its action
/// `apply(x, y)`, which writes y = A x, using a scaled Taylor series.
/// `norm_bound` must bound the operator 2-norm of A. Substeps keep
/// ||A||/s <= 2, where the Taylor terms never grow past twice the input.
template <class Apply>
CVector expm_action(Apply&& apply, double norm_bound, CVector v) {
  const int steps = std::max(1, static_cast<int>(std::ceil(0.5 * norm_bound)));
  const double inv_steps = 1.0 / steps;
  CVector term(v.size()), next(v.size()), sum(v.size());
  for (int s = 0; s < steps; ++s) {
    term = v;
    sum = v;
    const double scale = v.norm();
    for (int k = 1; k < 80; ++k) {
      apply(term, next);
      next *= inv_steps / k;
      sum += next;
      std::swap(term, next);
      if (term.norm() <= 1e-18 * scale) break;
    }
    std::swap(v, sum);
  }
  return v;
}

namespace detail {

// D(eta) S(xi) |0> in a `dim`-level space, xi = r exp(i theta). The
// squeezed vacuum is written down exactly,
//   <2k|S(xi)|0> = (-e^{i theta} tanh r)^k sqrt((2k)!) / (2^k k!) / sqrt(cosh r),
// and the displacement is applied by exponentiating its truncated generator.
inline CVector displaced_squeezed_raw(cplx eta, double r, double theta, int dim) {
  CVector v = CVector::Zero(dim);
  v(0) = 1.0 / std::sqrt(std::cosh(r));
  const cplx ratio = -std::polar(std::tanh(r), theta);
  for (int k = 1; 2 * k < dim; ++k) {
    // c_{2k} / c_{2k-2} = ratio * sqrt((2k)(2k-1)) / (2k)
    v(2 * k) = v(2 * k - 2) * ratio * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
  }
  const double n = static_cast<double>(dim);
  if (eta != cplx(0.0)) {
    // G = eta a^dagger - eta* a
    std::vector<double> root(static_cast<std::size_t>(dim));
    for (int m = 0; m < dim; ++m) root[static_cast<std::size_t>(m)] = std::sqrt(static_cast<double>(m));
    const cplx eta_c = std::conj(eta);
    auto displace = [&](const CVector& x, CVector& y) {
      // (a^dagger x)_m = sqrt(m) x_{m-1},  (a x)_m = sqrt(m+1) x_{m+1}
      y(0) = -eta_c * x(1);
      for (int m = 1; m + 1 < dim; ++m) {
        y(m) = eta * root[static_cast<std::size_t>(m)] * x(m - 1) -
               eta_c * root[static_cast<std::size_t>(m + 1)] * x(m + 1);
      }
      y(dim - 1) = eta * root[static_cast<std::size_t>(dim - 1)] * x(dim - 2);
    };
    v = expm_action(displace, 2.0 * std::abs(eta) * std::sqrt(n), std::move(v));
  }
  return v;
}

inline double tail_from(const CVector& v, int level) {
  double tail = 0.0;
  for (Eigen::Index m = level; m < v.size(); ++m) tail += std::norm(v(m));
  return tail;
}

}  // namespace detail

/// Normalized D(eta) S(r e^{i theta_rel}) |0>, cropped to the smallest
/// cutoff whose neglected population is below `policy.tail_tol`.
inline FockVector displaced_squeezed_vacuum(cplx eta, double r, double theta_rel,
                                            const CutoffPolicy& policy = {}) {
  if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag()) || !std::isfinite(r) ||
      !std::isfinite(theta_rel)) {
    throw Error(ErrorCode::invalid_input, "non-finite Gaussian state parameter");
  }
  if (policy.cap < 1) {
    throw Error(ErrorCode::invalid_dimension, "cutoff cap must be positive");
  }
  const double sh = std::sinh(r);
  const double ch = std::cosh(r);
  const double nbar = std::norm(eta) + sh * sh;
  // Starting guess nbar + 10 sigma from a bound on the photon-number variance.
  const double var_bound = std::norm(eta) * std::exp(2.0 * std::abs(r)) + 2.0 * sh * sh * ch * ch;
  const double guess = std::ceil(nbar + 10.0 * std::sqrt(var_bound) + 8.0);
  int work = std::min(policy.cap, std::max(16, static_cast<int>(std::min(guess, 1e9))));
  for (;;) {
    // Truncating the displacement generator reflects amplitude off the top
    // level; the disturbed band widens like |eta| sqrt(n).
    const int spread = static_cast<int>(std::ceil(3.0 * std::abs(eta) * std::sqrt(static_cast<double>(work))));
    const CVector raw = detail::displaced_squeezed_raw(eta, r, theta_rel, work + policy.guard + spread);
    if (detail::tail_from(raw, work) < policy.tail_tol) {
      // Smallest D with tail(D) < tol.
      int dim = work;
      double tail = detail::tail_from(raw, work);
      while (dim > 1 && tail + std::norm(raw(dim - 1)) < policy.tail_tol) {
        tail += std::norm(raw(dim - 1));
        --dim;
      }
      return FockVector(raw.head(dim));
    }
    if (work >= policy.cap) {
      throw Error(ErrorCode::cutoff_overflow,
                  "Gaussian state needs more than " + std::to_string(policy.cap) + " Fock levels");
    }
    work = std::min(policy.cap, 2 * work);
  }
}

inline double mean_photon(const FockVector& psi) {
  double total = 0.0;
  for (int m = 1; m < psi.cutoff(); ++m) total += m * std::norm(psi[m]);
  return total;
}

inline double mean_photon(const DensityOperator& rho) {
  double total = 0.0;
  for (int m = 1; m < rho.dim(); ++m) total += m * rho.matrix()(m, m).real();
  return total;
}

inline double fidelity(const FockVector& x, const FockVector& y) {
  const int dim = std::max(x.cutoff(), y.cutoff());
  const double f = std::norm(x.padded(dim).dot(y.padded(dim)));
  return std::clamp(f, 0.0, 1.0);
}

namespace detail {

inline CMatrix pad_matrix(const CMatrix& m, int dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  const Eigen::Index keep = std::min<Eigen::Index>(dim, m.rows());
  out.topLeftCorner(keep, keep) = m.topLeftCorner(keep, keep);
  return out;
}

}  // namespace detail

inline double fidelity(const FockVector& x, const DensityOperator& rho) {
  const int dim = std::max(x.cutoff(), rho.dim());
  const CVector v = x.padded(dim);
  const double f = v.dot(detail::pad_matrix(rho.matrix(), dim) * v).real();
  return std::clamp(f, 0.0, 1.0);
}

inline double fidelity(const DensityOperator& rho, const FockVector& x) { return fidelity(x, rho); }

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; equals Tr[rho sigma]
/// when either state is pure.
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  const int dim = std::max(rho.dim(), sigma.dim());
  const CMatrix a = detail::pad_matrix(rho.matrix(), dim);
  const CMatrix b = detail::pad_matrix(sigma.matrix(), dim);
  const Spectrum sa = hermitian_eig(a);
  const RVector root = sa.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_a = sa.eigenvectors * root.asDiagonal() * sa.eigenvectors.adjoint();
  const CMatrix inner = sqrt_a * b * sqrt_a;
  const Spectrum si = hermitian_eig(CMatrix(0.5 * (inner + inner.adjoint())));
  const double tr = si.eigenvalues.cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace lossqfi
