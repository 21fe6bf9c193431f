#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lossqfi/channel.hpp"
#include "lossqfi/fock_core.hpp"
#include "oracles.hpp"

using namespace lossqfi;

TEST(FockVector, NormalizesOnConstruction) {
  CVector v(3);
  v << 3.0, 0.0, cplx(0.0, 4.0);
  const FockVector psi(v);
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-15);
  EXPECT_NEAR(psi[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(psi[2].imag(), 0.8, 1e-15);
}

TEST(FockVector, RejectsZeroAndEmpty) {
  try {
    FockVector(CVector::Zero(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_state);
  }
  try {
    FockVector(CVector(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_dimension);
  }
  EXPECT_THROW(FockVector::basis(3, 3), Error);
}

TEST(Ladder, NumberOperatorOnBasis) {
  for (int dim : {1, 2, 5, 12}) {
    const LadderOperators ops = ladder_operators(dim);
    for (int m = 0; m + 1 < dim; ++m) {
      const CVector e = FockVector::basis(m, dim).amplitudes();
      EXPECT_LE((ops.creation * ops.annihilation * e - static_cast<double>(m) * e).norm(), 1e-13);
      EXPECT_LE((ops.number * e - static_cast<double>(m) * e).norm(), 0.0);
    }
  }
}

TEST(Ladder, InvalidDimension) {
  try {
    ladder_operators(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_dimension);
  }
}

TEST(HermitianEig, DiagonalDescending) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const Spectrum s = hermitian_eig(m);
  EXPECT_DOUBLE_EQ(s.eigenvalues(0), 3.0);
  EXPECT_DOUBLE_EQ(s.eigenvalues(1), 2.0);
  EXPECT_DOUBLE_EQ(s.eigenvalues(2), 1.0);
  EXPECT_NEAR(s.eigenvectors(2, 1).real(), 1.0, 1e-15);
}

TEST(HermitianEig, ZeroMatrix) {
  const Spectrum s = hermitian_eig(CMatrix::Zero(4, 4));
  EXPECT_EQ(s.eigenvalues.size(), 4);
  EXPECT_LE(s.eigenvalues.cwiseAbs().maxCoeff(), 0.0);
}

TEST(HermitianEig, RejectsNonHermitian) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    hermitian_eig(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_input);
  }
}

TEST(HermitianEig, RandomRoundTripAndPhaseConvention) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int dim : {1, 2, 3, 8, 17, 32, 64}) {
    for (bool real_only : {false, true}) {
      CMatrix a(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), real_only ? 0.0 : g(rng));
      const CMatrix h = a + a.adjoint();
      const Spectrum s = hermitian_eig(h);
      const CMatrix back = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint();
      EXPECT_LE((back - h).norm(), 1e-10 * h.norm()) << dim;
      EXPECT_LE((s.eigenvectors.adjoint() * s.eigenvectors - CMatrix::Identity(dim, dim)).norm(), 1e-10);
      for (int k = 0; k + 1 < dim; ++k) EXPECT_GE(s.eigenvalues(k), s.eigenvalues(k + 1));
      for (int k = 0; k < dim; ++k) {
        const auto col = s.eigenvectors.col(k);
        const double largest = col.cwiseAbs().maxCoeff();
        int pick = 0;
        while (std::abs(col(pick)) < largest * (1.0 - 1e-10)) ++pick;
        EXPECT_NEAR(col(pick).imag(), 0.0, 1e-14);
        EXPECT_GT(col(pick).real(), 0.0);
      }
    }
  }
}

TEST(HermitianEig, LossyOnePhotonAtQuarterPi) {
  const DensityOperator rho0 = DensityOperator::from_pure(FockVector::basis(1, 2));
  const Spectrum s = hermitian_eig(evolve(rho0, LossParameter(std::numbers::pi / 4)).matrix());
  EXPECT_NEAR(s.eigenvalues(0), 0.5, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1), 0.5, 1e-15);
}

TEST(DensityOperator, SymmetrizesAndChecksTrace) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  m(0, 1) = 0.2;
  const DensityOperator rho(m);
  EXPECT_NEAR(std::abs(rho.matrix()(1, 0) - 0.1), 0.0, 1e-15);
  m(1, 1) = 0.6;
  EXPECT_THROW(DensityOperator{m}, Error);
}

TEST(Gaussian, VacuumAndCoherent) {
  const FockVector vac = displaced_squeezed_vacuum(0.0, 0.0, 0.0);
  EXPECT_NEAR(std::abs(vac[0]), 1.0, 1e-15);
  EXPECT_NEAR(mean_photon(vac), 0.0, 1e-15);

  const FockVector coh = displaced_squeezed_vacuum(1.0, 0.0, 0.0);
  const CVector ref = oracle::coherent(1.0, coh.cutoff());
  EXPECT_GT(std::norm(ref.dot(coh.amplitudes())), 1.0 - 1e-10);
  // Cropping a 1e-10 tail rescales amplitudes by about 5e-11.
  EXPECT_NEAR(coh[3].real(), std::exp(-0.5) / std::sqrt(6.0), 1e-10);
}

TEST(Gaussian, SqueezedVacuumParityAndEnergy) {
  const FockVector sq = displaced_squeezed_vacuum(0.0, 0.5, 0.0);
  for (int m = 1; m < sq.cutoff(); m += 2) EXPECT_EQ(std::abs(sq[m]), 0.0);
  EXPECT_NEAR(mean_photon(sq), std::sinh(0.5) * std::sinh(0.5), 1e-8);
  EXPECT_NEAR(mean_photon(sq), 0.27154, 1e-5);
}

TEST(Gaussian, MatchesDenseExponentials) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const cplx eta(1.5 * u(rng), 1.5 * u(rng));
    const double r = 0.9 * u(rng);
    const double theta = 3.0 * u(rng);
    const FockVector psi = displaced_squeezed_vacuum(eta, r, theta);
    const CVector ref = oracle::gaussian_dense(eta, r, theta, 120).head(psi.cutoff());
    EXPECT_LE((ref - psi.amplitudes()).norm(), 1e-9) << trial;
    const double sh = std::sinh(r);
    EXPECT_NEAR(mean_photon(psi), std::norm(eta) + sh * sh, 1e-6);
  }
}

TEST(Gaussian, CutoffIsSmallestWithTailBelowTolerance) {
  const CutoffPolicy policy;
  for (auto [eta, r] : {std::pair{0.7, 0.2}, {1.3, -0.4}, {0.0, 0.8}, {2.0, 0.0}}) {
    const FockVector psi = displaced_squeezed_vacuum(eta, r, 0.0, policy);
    const int dim = psi.cutoff();
    const CVector big = oracle::gaussian_dense(eta, r, 0.0, 150);
    const double tail = big.tail(150 - dim).squaredNorm();
    EXPECT_LT(tail, policy.tail_tol);
    // One level fewer would leave more than the tolerance behind.
    EXPECT_GE(tail + std::norm(big(dim - 1)), policy.tail_tol * (1.0 - 1e-6));
  }
}

TEST(Gaussian, CapOverflow) {
  CutoffPolicy tight;
  tight.cap = 20;
  try {
    displaced_squeezed_vacuum(3.0, 0.0, 0.0, tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::cutoff_overflow);
  }
}

TEST(Fidelity, SymmetricAndConsistentAcrossOverloads) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const FockVector x(oracle::random_state(rng, 3 + trial % 4));
    const FockVector y(oracle::random_state(rng, 2 + trial % 5));
    EXPECT_DOUBLE_EQ(fidelity(x, y), fidelity(y, x));
    const DensityOperator rx = DensityOperator::from_pure(x);
    const DensityOperator ry = DensityOperator::from_pure(y);
    EXPECT_NEAR(fidelity(x, ry), fidelity(x, y), 1e-12);
    EXPECT_NEAR(fidelity(rx, ry), fidelity(x, y), 1e-7);
  }
  std::mt19937_64 rng2(9);
  const CMatrix a = oracle::random_density(rng2, 5, 3);
  const CMatrix b = oracle::random_density(rng2, 5, 5);
  const DensityOperator ra(a), rb(b);
  EXPECT_NEAR(fidelity(ra, rb), fidelity(rb, ra), 1e-8);
  EXPECT_NEAR(fidelity(rb, rb), 1.0, 1e-10);
}

TEST(MeanPhoton, PureAndMixedAgree) {
  const FockVector psi = displaced_squeezed_vacuum(cplx(0.3, 0.4), 0.3, 1.0);
  EXPECT_NEAR(mean_photon(psi), mean_photon(DensityOperator::from_pure(psi)), 1e-12);
}
