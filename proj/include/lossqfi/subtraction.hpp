#pragma once

#include <cmath>

#include "lossqfi/fock_core.hpp"

namespace lossqfi {

/// a|psi> renormalized. The cutoff is kept, so the top level becomes empty.
inline FockVector photon_subtract(const FockVector& psi) {
  const int dim = psi.cutoff();
  CVector out = CVector::Zero(dim);
  for (int m = 1; m < dim; ++m) out(m - 1) = std::sqrt(static_cast<double>(m)) * psi[m];
  if (out.squaredNorm() < 1e-24) {
    throw Error(ErrorCode::degenerate_state, "photon subtraction annihilates the vacuum");
  }
  return FockVector(std::move(out));
}

/// Keeps levels 0..L-1 and renormalizes.
inline FockVector truncate_levels(const FockVector& psi, int levels) {
  if (levels < 1) throw Error(ErrorCode::invalid_dimension, "truncation needs L >= 1");
  const CVector kept = psi.padded(levels);
  if (kept.squaredNorm() <= 1e-12) {
    throw Error(ErrorCode::degenerate_state, "all kept amplitudes are negligible");
  }
  return FockVector(kept);
}

}  // namespace lossqfi
