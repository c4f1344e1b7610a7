#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qscale/gaussian.hpp"

using namespace qscale;

TEST(Propagate, VacuumVariance) {
  const auto vac = CovarianceModel::vacuum();
  EXPECT_NEAR(propagate(ChannelSpec::scaling(0.0, 2.0), vac).V(0, 0), 4.0, 1e-15);
  EXPECT_NEAR(propagate(ChannelSpec::scaling(1.0, 0.3), vac).V(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(propagate(ChannelSpec::scaling(0.0, 0.5), vac).V(1, 1), 0.25, 1e-15);
  for (auto [s, a] : {std::pair{0.3, 1.7}, {-0.6, 0.4}, {1.0, 2.0}}) {
    EXPECT_NEAR(propagate(ChannelSpec::scaling(s, a), vac).V(0, 0), a * a * (1 - s) + s, 1e-14);
  }
}

TEST(Propagate, MatchesStateReconstruction) {
  const auto g = propagate(ChannelSpec::scaling(0.0, 0.5), CovarianceModel::vacuum());
  const auto p = thermal_photon_distribution(g.V(0, 0), 5);
  EXPECT_NEAR(p(1), -0.96, 1e-15);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(p(k), oracle::geometric(0.25, k), 1e-15);
}

TEST(Propagate, CrossBlocksScale) {
  const auto g = propagate(PhaseSpaceAction{0.5, -0.2}, tmsv(0.4), 1);
  const auto t = tmsv(0.4);
  EXPECT_NEAR(g.V(0, 2), 0.5 * t.V(0, 2), 1e-15);
  EXPECT_NEAR(g.V(3, 1), 0.5 * t.V(3, 1), 1e-15);
  EXPECT_NEAR(g.V(2, 2), 0.25 * t.V(2, 2) + 0.2, 1e-15);
  EXPECT_EQ(g.V(0, 0), t.V(0, 0));
  EXPECT_THROW(propagate(PhaseSpaceAction{}, tmsv(0.1), 2), std::invalid_argument);
}

TEST(ThermalPositivity, Examples) {
  EXPECT_EQ(thermal_positivity(1.0), Positivity::positive);
  EXPECT_EQ(thermal_positivity(0.25), Positivity::non_positive);
  EXPECT_EQ(thermal_positivity(7.0), Positivity::positive);
  EXPECT_EQ(thermal_positivity(0.0, OrderingParam(1.0)), Positivity::positive);
  EXPECT_EQ(thermal_positivity(1.5, OrderingParam(-1.0)), Positivity::non_positive);
}

TEST(Tmsv, Structure) {
  EXPECT_LT((tmsv(0.0).V - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(tmsv(0.5).V(0, 0), 1.5430806348152437, 1e-14);
  for (double r : {0.0, 0.2, 1.0, 2.0}) {
    const auto g = tmsv(r);
    EXPECT_NEAR(g.physicality_margin(), 0.0, 1e-9 * std::cosh(2 * r));
    EXPECT_TRUE(g.physical(1e-9));
  }
  EXPECT_THROW(tmsv(-0.1), std::invalid_argument);
}

TEST(Physicality, SubVacuumThermalIsUnphysical) {
  EXPECT_FALSE(CovarianceModel::thermal(0.5).physical());
  EXPECT_TRUE(CovarianceModel::thermal(1.5).physical());
}

TEST(PPT, Examples) {
  EXPECT_EQ(ppt_test(propagate(PhaseSpaceAction{0.3, -0.91}, tmsv(0.0), 1)).verdict, Entanglement::ppt);
  EXPECT_EQ(ppt_test(tmsv(0.7)).verdict, Entanglement::npt);
  for (double r : {0.2, 0.5, 1.0}) {
    EXPECT_EQ(ppt_test(noisy_tmsv_image(1.2, 2.43, r)).verdict, Entanglement::npt);
    EXPECT_EQ(ppt_test(noisy_tmsv_image(1.2, 2.45, r)).verdict, Entanglement::ppt);
  }
}

TEST(PPT, MarginAgreesWithSymplecticOracle) {
  for (double b : {0.5, 2.0, 2.44, 3.0}) {
    const double r = 0.5, a = 1.2;
    const double c = std::cosh(2 * r), s = std::sinh(2 * r);
    const double nu = oracle::pt_symplectic_min(c, a * a * c + b, a * s);
    const auto res = ppt_test(noisy_tmsv_image(a, b, r), 1e-12);
    EXPECT_EQ(res.verdict == Entanglement::ppt, nu >= 1.0 - 1e-12) << b;
  }
}

TEST(Classicality, Examples) {
  const auto vac = classicality_test(CovarianceModel::vacuum());
  EXPECT_EQ(vac.verdict, Classicality::classical);
  EXPECT_NEAR(vac.margin, 0.0, 1e-15);

  const double r = 0.5, a = 1.0, b = 1.0;
  const double c = std::cosh(2 * r), s = std::sinh(2 * r);
  EXPECT_LT(oracle::classical_schur(c, a * a * c + b, a * s), 0.0);
  EXPECT_EQ(classicality_test(noisy_tmsv_image(a, b, r)).verdict, Classicality::nonclassical);

  for (double rr : {0.1, 0.5, 1.5}) {
    EXPECT_EQ(classicality_test(noisy_tmsv_image(1.2, 2.5, rr)).verdict, Classicality::classical);
  }
}

TEST(Classicality, SchurOracleSign) {
  for (double a : {0.5, 1.0, 1.7})
    for (double b : {0.2, 1.0, 2.0, 4.0}) {
      const double r = 0.8;
      const double c = std::cosh(2 * r), s = std::sinh(2 * r);
      const double det = oracle::classical_schur(c, a * a * c + b, a * s);
      const auto res = classicality_test(noisy_tmsv_image(a, b, r));
      EXPECT_EQ(res.verdict == Classicality::classical, det >= -1e-12) << a << " " << b;
    }
}

TEST(Thresholds, Examples) {
  auto t = threshold_report(NoisyFamily::attenuator, 0.6, 0.0);
  EXPECT_NEAR(t.cp_threshold, 0.64, 1e-15);
  EXPECT_NEAR(t.eb_threshold, 1.36, 1e-15);
  EXPECT_FALSE(t.cp);

  t = threshold_report(NoisyFamily::amplifier, 1.0, 1.0);
  EXPECT_EQ(t.cp_threshold, 0.0);
  EXPECT_EQ(t.eb_threshold, 2.0);
  EXPECT_TRUE(t.cp);
  EXPECT_FALSE(t.eb);

  t = threshold_report(NoisyFamily::amplifier, 1.2, 2.44);
  EXPECT_TRUE(t.eb);
  EXPECT_TRUE(t.nb);

  EXPECT_THROW(threshold_report(NoisyFamily::attenuator, 1.2, 0.0), std::invalid_argument);
  EXPECT_THROW(threshold_report(NoisyFamily::amplifier, 0.8, 0.0), std::invalid_argument);
}

TEST(Thresholds, FamilyNames) {
  EXPECT_EQ(parse_family("att"), NoisyFamily::attenuator);
  EXPECT_EQ(parse_family("amplifier"), NoisyFamily::amplifier);
  EXPECT_EQ(to_string(NoisyFamily::amplifier), "amplifier");
  EXPECT_THROW(parse_family("squeezer"), std::invalid_argument);
}

TEST(Flips, IndependentOfSqueezing) {
  for (double kappa : {0.5, 0.8, 1.0, 1.2, 2.0})
    for (double r : {0.2, 0.5, 1.0}) {
      EXPECT_NEAR(ppt_flip(kappa, r, 0.0, 10.0), 1 + kappa * kappa, 1e-9);
      EXPECT_NEAR(classicality_flip(kappa, r, 0.0, 10.0), 1 + kappa * kappa, 1e-9);
    }
}
