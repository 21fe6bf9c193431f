#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lossqfi/degauss.hpp"
#include "oracles.hpp"

using namespace lossqfi;
using std::numbers::pi;

TEST(PhotonSubtract, Examples) {
  const FockVector one = photon_subtract(FockVector::basis(1, 3));
  EXPECT_NEAR(std::abs(one[0]), 1.0, 1e-15);

  const FockVector coh = displaced_squeezed_vacuum(1.0, 0.0, 0.0);
  EXPECT_NEAR(fidelity(photon_subtract(coh), coh), 1.0, 1e-9);

  const FockVector sq = photon_subtract(displaced_squeezed_vacuum(0.0, 0.5, 0.0));
  for (int m = 0; m < sq.cutoff(); m += 2) EXPECT_EQ(std::abs(sq[m]), 0.0);

  EXPECT_THROW(photon_subtract(FockVector::basis(0, 4)), Error);
}

TEST(PhotonSubtract, MatchesAnnihilationOperator) {
  const FockVector psi = displaced_squeezed_vacuum(cplx(0.6, 0.2), 0.3, 0.5);
  const CVector ref = (oracle::annihilation(psi.cutoff()) * psi.amplitudes()).normalized();
  EXPECT_LE((photon_subtract(psi).amplitudes() - ref).norm(), 1e-14);
}

TEST(Truncate, Examples) {
  const FockVector vac = truncate_levels(FockVector::basis(0, 1), 3);
  ASSERT_EQ(vac.cutoff(), 3);
  EXPECT_EQ(vac[0], cplx(1.0));

  const FockVector t = truncate_levels(photon_subtract(displaced_squeezed_vacuum(1.0, 0.0, 0.0)), 3);
  EXPECT_NEAR(t[0].real(), 0.632456, 1e-6);
  EXPECT_NEAR(t[1].real(), 0.632456, 1e-6);
  EXPECT_NEAR(t[2].real(), 0.447214, 1e-6);

  const FockVector sub = photon_subtract(displaced_squeezed_vacuum(0.8, 0.3, 0.0));
  EXPECT_GT(truncation_fidelity(sub, 3), 0.92);

  EXPECT_THROW(truncate_levels(FockVector::basis(4, 5), 3), Error);
  EXPECT_THROW(truncate_levels(FockVector::basis(0, 2), 0), Error);
}

TEST(Truncate, CoherentThreeLevelFidelity) {
  // e^{-1}(1 + 1 + 1/2)
  EXPECT_NEAR(truncation_fidelity(displaced_squeezed_vacuum(1.0, 0.0, 0.0), 3), 2.5 * std::exp(-1.0), 1e-9);
}

TEST(Truncate, ThreeLevelRouteEquivalenceOnGrid) {
  for (int i = 0; i < 20; ++i) {
    const double eta = 2.0 * i / 19.0;
    for (int j = 0; j < 20; ++j) {
      const double r = -1.0 + 2.0 * j / 19.0;
      std::array<double, 3> c;
      try {
        c = truncated_subtracted_coeffs(eta, r);
      } catch (const Error&) {
        continue;
      }
      const FockVector numeric = truncate_levels(photon_subtract(displaced_squeezed_vacuum(eta, r, 0.0)), 3);
      CVector printed(3);
      printed << c[0], c[1], c[2];
      // Up to a global sign.
      const cplx ov = printed.dot(numeric.amplitudes());
      EXPECT_LE((numeric.amplitudes() - (ov / std::abs(ov)) * printed).norm(), 1e-9) << eta << " " << r;
    }
  }
}

TEST(Truncate, FidelityIsMonotoneInLevels) {
  for (double eta : {0.2, 0.9, 1.7}) {
    for (double r : {-0.7, 0.0, 0.6}) {
      const FockVector sub = photon_subtract(displaced_squeezed_vacuum(eta, r, 0.0));
      double previous = 0.0;
      for (int levels = 1; levels <= 10; ++levels) {
        const double f = truncation_fidelity(sub, levels);
        EXPECT_GE(f, previous - 1e-15) << eta << " " << r << " " << levels;
        previous = f;
      }
      EXPECT_NEAR(truncation_fidelity(sub, sub.cutoff()), 1.0, 1e-15);
    }
  }
}

TEST(Region, SinglePointExamples) {
  const RegionMap a = region_map({1.0}, {0.0});
  ASSERT_EQ(a.points.size(), 1u);
  EXPECT_NEAR(a.points[0].nbar, 0.8, 1e-9);
  EXPECT_NEAR(a.points[0].beta, 0.955317, 1e-6);

  const RegionMap b = region_map({0.0}, {0.5});
  ASSERT_EQ(b.points.size(), 1u);
  EXPECT_NEAR(b.points[0].beta, pi / 2, 1e-12);
  EXPECT_NEAR(b.points[0].nbar, 1.0, 1e-12);
}

TEST(Region, DegenerateSkippedAndInvalidRejected) {
  const RegionMap m = region_map({0.0, 0.5}, {0.0});
  EXPECT_EQ(m.skipped, 1);
  EXPECT_EQ(m.points.size(), 1u);
  EXPECT_THROW(region_map({}, {0.0}), Error);
  EXPECT_THROW(region_map({-0.1}, {0.0}), Error);
}

TEST(Region, PointsAreDeterministicAndInRange) {
  const RegionMap a = region_map(linspace(0.0, 2.0, 21), linspace(-1.0, 1.0, 21));
  const RegionMap b = region_map(linspace(0.0, 2.0, 21), linspace(-1.0, 1.0, 21));
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    EXPECT_EQ(a.points[k].nbar, b.points[k].nbar);
    EXPECT_EQ(a.points[k].beta, b.points[k].beta);
    EXPECT_GE(a.points[k].nbar, 0.0);
    EXPECT_LE(a.points[k].nbar, 1.0);
    EXPECT_GE(a.points[k].beta, 0.0);
    EXPECT_LE(a.points[k].beta, pi / 2);
  }
}

class DefaultRegion : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { region_ = new RegionMap(region_map(default_region_eta_grid(), default_region_r_grid())); }
  static void TearDownTestSuite() {
    delete region_;
    region_ = nullptr;
  }
  static RegionMap* region_;
};

RegionMap* DefaultRegion::region_ = nullptr;

TEST_F(DefaultRegion, BetaSpansNearlyTheWholeRange) {
  for (int bin = 1; bin <= 9; ++bin) {
    const double centre = 0.1 * bin;
    double lo = pi, hi = -pi;
    for (const RegionPoint& p : region_->points) {
      if (std::abs(p.nbar - centre) > 0.05) continue;
      lo = std::min(lo, p.beta);
      hi = std::max(hi, p.beta);
    }
    EXPECT_LE(lo, 0.05) << centre;
    EXPECT_GE(hi, 1.52) << centre;
  }
}

TEST_F(DefaultRegion, CoverageExamples) {
  const CoverageReport mid = coverage_check({pi / 4}, {0.5}, *region_);
  ASSERT_EQ(mid.points.size(), 1u);
  EXPECT_TRUE(mid.points[0].covered);
  EXPECT_TRUE(mid.passed());

  const CoverageReport low_loss = coverage_check({pi / 16}, {0.9}, *region_);
  EXPECT_TRUE(low_loss.points[0].covered);

  const CoverageReport corner = coverage_check({pi / 2 - default_phi_min}, {0.05}, *region_);
  const CoveragePoint& p = corner.points[0];
  if (!p.covered) EXPECT_TRUE(p.exception);
  EXPECT_EQ(corner.uncovered, 0);
}

TEST(Coverage, FlatnessFlagsOnlyInsensitivePoints) {
  const LossParameter high(pi / 2 - default_phi_min);
  const OptimizationResult h = optimize_qutrit(0.3, high);
  EXPECT_LE(qutrit_qfi_spread(0.3, high, h.best_qfi, 91), 1e-3);

  const LossParameter mid(pi / 4);
  const OptimizationResult m = optimize_qutrit(0.5, mid);
  EXPECT_GT(qutrit_qfi_spread(0.5, mid, m.best_qfi, 91), 1e-2);
}

TEST(Coverage, MissOutsideRegionIsReported) {
  // A region with a single far-away point covers nothing.
  RegionMap lone;
  lone.points.push_back({0.0, 0.0, 0.95, 0.0});
  const CoverageReport rep = coverage_check({pi / 4}, {0.5}, lone);
  EXPECT_FALSE(rep.points[0].covered);
  EXPECT_FALSE(rep.points[0].exception);
  EXPECT_EQ(rep.uncovered, 1);
  EXPECT_FALSE(rep.passed());
  EXPECT_THROW(coverage_check({pi / 4}, {0.5}, RegionMap{}), Error);
}

TEST(TruncatedGaussian, NeverBeatsTheOptimalQutrit) {
  // The 3-level cut of the best Gaussian is itself a qutrit; it falls strictly
  // below the optimal qutrit at its own energy somewhere on the grid.
  bool strictly_lower = false;
  for (double nbar : {0.3, 0.6, 0.9}) {
    for (double phi : {pi / 8, pi / 4, 3 * pi / 8}) {
      const LossParameter lp(phi);
      const OptimizationResult g = optimize_gaussian(nbar, lp);
      const FockVector cut =
          truncate_levels(build_probe(gaussian_at_energy(nbar, g.best_params[0], g.best_params[1])), 3);
      const double h_cut = qfi_of_state(cut, lp);
      const double h_opt = optimize_qutrit(mean_photon(cut), lp).best_qfi;
      EXPECT_LE(h_cut, h_opt + 1e-9);
      if (h_cut < h_opt - 1e-6) strictly_lower = true;
    }
  }
  EXPECT_TRUE(strictly_lower);
}
