#pragma once

// Pure-loss bosonic channel parametrized by phi, tan^2(phi) = exp(gamma t) - 1.

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lossqfi/fock_core.hpp"

namespace lossqfi {

inline constexpr double default_phi_min = 1e-3;

/// Loss angle phi restricted to [phi_min, pi/2 - phi_min].
class LossParameter {
 public:
  explicit LossParameter(double phi, double phi_min = default_phi_min) : phi_(phi), phi_min_(phi_min) {
    if (!(phi_min >= 0.0 && phi_min < std::numbers::pi / 4)) {
      throw Error(ErrorCode::domain, "phi_min must lie in [0, pi/4)");
    }
    if (!(phi >= phi_min && phi <= std::numbers::pi / 2 - phi_min) || phi <= 0.0 ||
        phi >= std::numbers::pi / 2) {
      throw Error(ErrorCode::domain, "loss angle phi=" + std::to_string(phi) + " outside [" +
                                         std::to_string(phi_min) + ", pi/2 - " +
                                         std::to_string(phi_min) + "]");
    }
  }

  double phi() const { return phi_; }
  double phi_min() const { return phi_min_; }
  double z() const {
    const double t = std::tan(phi_);
    return t * t;
  }
  double gamma_t() const { return std::log1p(z()); }
  double transmissivity() const {
    const double c = std::cos(phi_);
    return c * c;
  }

 private:
  double phi_;
  double phi_min_;
};

enum class LossScale { phi, gamma_t, z, transmissivity };

inline LossScale parse_loss_scale(std::string_view name) {
  if (name == "phi") return LossScale::phi;
  if (name == "gamma_t") return LossScale::gamma_t;
  if (name == "z") return LossScale::z;
  if (name == "transmissivity") return LossScale::transmissivity;
  throw Error(ErrorCode::parse, "unknown loss scale '" + std::string(name) + "'");
}

/// Converts between the equivalent loss parametrizations on the open domain
/// phi in (0, pi/2).
inline double loss_reparametrize(double value, LossScale from, LossScale to) {
  double phi = 0.0;
  switch (from) {
    case LossScale::phi:
      if (!(value > 0.0 && value < std::numbers::pi / 2)) {
        throw Error(ErrorCode::domain, "phi must lie in (0, pi/2)");
      }
      phi = value;
      break;
    case LossScale::gamma_t:
      if (!(value > 0.0 && std::isfinite(value))) {
        throw Error(ErrorCode::domain, "gamma t must be positive and finite");
      }
      phi = std::atan(std::sqrt(std::expm1(value)));
      break;
    case LossScale::z:
      if (!(value > 0.0 && std::isfinite(value))) {
        throw Error(ErrorCode::domain, "z must be positive and finite");
      }
      phi = std::atan(std::sqrt(value));
      break;
    case LossScale::transmissivity:
      if (!(value > 0.0 && value < 1.0)) {
        throw Error(ErrorCode::domain, "transmissivity must lie in (0, 1)");
      }
      phi = std::acos(std::sqrt(value));
      break;
  }
  switch (to) {
    case LossScale::phi: return phi;
    case LossScale::gamma_t: {
      const double t = std::tan(phi);
      return std::log1p(t * t);
    }
    case LossScale::z: {
      const double t = std::tan(phi);
      return t * t;
    }
    case LossScale::transmissivity: {
      const double c = std::cos(phi);
      return c * c;
    }
  }
  return phi;
}

namespace detail {

// weight(m, n) = sin^n cos^m sqrt(C(m+n, n)), the (m, m+n) entry of K_n,
// for m + n < dim.
inline Eigen::MatrixXd kraus_weights(double phi, int dim) {
  const double log_s = std::log(std::sin(phi));
  const double log_c = std::log(std::cos(phi));
  std::vector<double> log_fact(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) log_fact[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m + n < dim; ++m) {
      const double log_binom = log_fact[static_cast<std::size_t>(m + n)] - log_fact[static_cast<std::size_t>(m)] -
                               log_fact[static_cast<std::size_t>(n)];
      const double ls = n == 0 ? 0.0 : n * log_s;
      const double lc = m == 0 ? 0.0 : m * log_c;
      w(m, n) = std::exp(ls + lc + 0.5 * log_binom);
    }
  }
  return w;
}

}  // namespace detail

/// K_n = sin^n(phi)/sqrt(n!) cos(phi)^{a^dagger a} a^n for n = 0..D-1.
inline std::vector<CMatrix> kraus_operators(const LossParameter& phi, int dim) {
  if (dim < 1) throw Error(ErrorCode::invalid_dimension, "Kraus operators need D >= 1");
  const Eigen::MatrixXd weight = detail::kraus_weights(phi.phi(), dim);
  std::vector<CMatrix> ops;
  ops.reserve(dim);
  for (int n = 0; n < dim; ++n) {
    CMatrix k = CMatrix::Zero(dim, dim);
    for (int m = 0; m + n < dim; ++m) k(m, m + n) = weight(m, n);
    ops.push_back(std::move(k));
  }
  return ops;
}

/// rho_phi = sum_n K_n rho_0 K_n^dagger. Each K_n is a weighted shift, so the
/// sum is accumulated entrywise in ascending n, stopping once a term's trace
/// drops below 1e-16.
inline DensityOperator evolve(const DensityOperator& rho0, const LossParameter& phi) {
  const int dim = rho0.dim();
  const CMatrix& in = rho0.matrix();
  const Eigen::MatrixXd weight = detail::kraus_weights(phi.phi(), dim);

  // Term n carries trace t_n and sum_n t_n = Tr rho_0, so the untouched
  // remainder is known exactly from the running total.
  const double input_trace = in.trace().real();
  double accumulated = 0.0;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    const int span = dim - n;
    double term_trace = 0.0;
    for (int j = 0; j < span; ++j) {
      const double wj = weight(j, n);
      for (int i = 0; i < span; ++i) {
        out(i, j) += weight(i, n) * wj * in(i + n, j + n);
      }
      term_trace += wj * wj * in(j + n, j + n).real();
    }
    accumulated += term_trace;
    if (n > 0 && std::abs(term_trace) < 1e-16 && input_trace - accumulated < 1e-14) break;
  }
  return DensityOperator(out, 1e-8);
}

/// d rho / d phi = tan(phi) (2 a rho a^dagger - a^dagger a rho - rho a^dagger a).
inline HermitianOperator drho_dphi(const DensityOperator& rho, const LossParameter& phi) {
  const int dim = rho.dim();
  const CMatrix& r = rho.matrix();
  CMatrix out(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      cplx v = -static_cast<double>(i + j) * r(i, j);
      if (i + 1 < dim && j + 1 < dim) {
        v += 2.0 * std::sqrt(static_cast<double>((i + 1) * (j + 1))) * r(i + 1, j + 1);
      }
      out(i, j) = v;
    }
  }
  return HermitianOperator(std::tan(phi.phi()) * out);
}

}  // namespace lossqfi
