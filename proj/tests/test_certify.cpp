#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qscale/certify.hpp"

using namespace qscale;

namespace {

std::vector<Probe> fock_probes(int count, int dim) {
  std::vector<Probe> out;
  for (int n = 0; n < count; ++n) out.push_back(make_probe(state::Fock{n}, FockDim(dim)));
  return out;
}

}  // namespace

TEST(StandardProbes, Composition) {
  const auto small = standard_probes(FockDim(12), 3, 5);
  EXPECT_EQ(small.size(), 1u + 6u + 3u);
  EXPECT_EQ(to_string(small.front().desc), "vacuum");
  EXPECT_EQ(to_string(small.back().desc), "random:7");
  const auto big = standard_probes(FockDim(40), 10);
  EXPECT_EQ(big.size(), 1u + 6u + 1u + 10u);
}

TEST(PositivityProbe, HalfScaleVacuumWitness) {
  const auto w = positivity_probe(ChannelSpec::scaling(0.0, 0.5), {make_probe(state::Vacuum{}, FockDim(40))});
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->kind, WitnessKind::output_eigen);
  EXPECT_EQ(w->input, "vacuum");
  EXPECT_NEAR(w->value, -0.96, 1e-6);
}

TEST(PositivityProbe, AttenuatorHasNoWitness) {
  EXPECT_FALSE(positivity_probe(ChannelSpec::attenuator(0.8), fock_probes(11, 20)).has_value());
  EXPECT_FALSE(positivity_probe(ChannelSpec::amplifier(1.5), fock_probes(6, 20)).has_value());
}

TEST(PositivityProbe, DilationOfSinglePhoton) {
  const auto w = positivity_probe(ChannelSpec::scaling(0.0, std::sqrt(2.0)), {make_probe(state::Fock{1}, FockDim(20))});
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->input, "fock:1");
  EXPECT_LE(w->value, -2.0 / 9.0 + 1e-6);
}

TEST(PositivityProbe, DivergentImageUsesPairing) {
  const auto w = positivity_probe(ChannelSpec::scaling(-1.0, 0.5), {make_probe(state::Vacuum{}, FockDim(12))});
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->kind, WitnessKind::pairing);
  EXPECT_LT(w->value, 0.0);
}

TEST(PositivityProbe, GaussianScalarLastResort) {
  const auto w = positivity_probe(ChannelSpec::scaling(-1.0, 0.1), {make_probe(state::Vacuum{}, FockDim(8))});
  ASSERT_TRUE(w.has_value());
}

TEST(PairingProbe, IdentityIsOverlap) {
  const auto rho = make_state(state::RandomPure{1}, FockDim(10));
  const auto sigma = make_state(state::RandomPure{2}, FockDim(10));
  const double overlap = (rho.matrix() * sigma.matrix()).trace().real();
  EXPECT_NEAR(pairing_probe(ChannelSpec::scaling(0.4, 1.0), rho, sigma), overlap, 1e-10);
  EXPECT_GE(overlap, 0.0);
}

TEST(PairingProbe, ClosedFormValues) {
  const auto one = make_state(state::Fock{1}, FockDim(4));
  const auto vac = make_state(state::Vacuum{}, FockDim(4));
  EXPECT_NEAR(pairing_probe(ChannelSpec::scaling(0.0, std::sqrt(2.0)), one, vac), oracle::planck(2.0), 1e-10);
  // Q-scaling by a < 1: vacuum image is a Gaussian of variance a^2 - (1 - a^2)
  for (double a : {0.5, 0.25}) {
    const double v = 2 * a * a - 1;
    EXPECT_NEAR(pairing_probe(ChannelSpec::scaling(-1.0, a), vac, one), oracle::geometric(v, 1),
                1e-8 * std::abs(oracle::geometric(v, 1)));
  }
}

TEST(GaussianScalar, ForwardAndAdjoint) {
  auto w = gaussian_scalar_witness(action_of(ChannelSpec::scaling(0.0, 0.5)));
  ASSERT_TRUE(w);
  EXPECT_NEAR(w->value, -0.75, 1e-15);
  EXPECT_TRUE(w->partner.empty());

  w = gaussian_scalar_witness(action_of(ChannelSpec::scaling(0.0, 2.0)));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->partner, "adjoint");
  EXPECT_NEAR(w->value, -0.75, 1e-15);

  EXPECT_FALSE(gaussian_scalar_witness(action_of(ChannelSpec::attenuator(0.5))));
  EXPECT_FALSE(gaussian_scalar_witness(action_of(ChannelSpec::amplifier(2.0))));
}

TEST(Duality, ArrangementsAgree) {
  for (auto [s, a] : {std::pair{0.5, 0.7}, {-0.5, 1.4}, {0.0, 2.0}}) {
    const auto rep = duality_check(s, a, 20, 42);
    EXPECT_EQ(rep.trials, 20);
    EXPECT_LE(rep.max_difference, 1e-8) << s << " " << a;
    EXPECT_TRUE(rep.signs_consistent);
  }
}

TEST(Duality, AttenuatorSideStaysNonnegative) {
  const auto rep = duality_check(1.0, 0.7, 20, 3);
  EXPECT_GE(rep.min_forward, -1e-10);
  EXPECT_GE(rep.min_dual, -1e-10);
}

TEST(Duality, WignerSelfDualWitnesses) {
  for (double a : {2.0, 0.5}) {
    const auto fwd = positivity_probe(ChannelSpec::scaling(0.0, a), standard_probes(FockDim(20), 2));
    const auto dual = positivity_probe(ChannelSpec::dual(0.0, a), standard_probes(FockDim(20), 2));
    EXPECT_TRUE(fwd.has_value()) << a;
    EXPECT_TRUE(dual.has_value()) << a;
  }
}

TEST(Choi, IdentityPattern) {
  const auto c = choi(ChannelSpec::identity(), 4);
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(c.entry(n, m, n, m), 1.0, 1e-12);
  EXPECT_NEAR(c.entry(0, 1, 1, 0), 0.0, 1e-12);
  EXPECT_NEAR(c.trace, 4.0, 1e-10);
  EXPECT_GE(c.min_eigenvalue, -1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.J);
  EXPECT_NEAR(es.eigenvalues().maxCoeff(), 4.0, 1e-10);
  EXPECT_NEAR(es.eigenvalues().sum(), 4.0, 1e-10);
}

TEST(Choi, QuantumLimitedChannelsArePositive) {
  for (double k : {0.3, 0.6, 0.9}) EXPECT_GE(choi(ChannelSpec::attenuator(k), 12).min_eigenvalue, -1e-9) << k;
  for (double k : {1.2, 2.0}) EXPECT_GE(choi(ChannelSpec::amplifier(k), 12).min_eigenvalue, -1e-8) << k;
  EXPECT_NEAR(choi(ChannelSpec::attenuator(0.6), 12).trace, 12.0, 1e-8);
}

TEST(Choi, BlockMinimaCoverAllDifferences) {
  const auto c = choi(ChannelSpec::noisy_attenuator(0.6, 0.5), 12);
  EXPECT_EQ(c.block_min.size(), 23u);
  EXPECT_LT(c.min_eigenvalue, -1e-6);
  double lowest = 1e300;
  for (double v : c.block_min) lowest = std::min(lowest, v);
  EXPECT_EQ(lowest, c.min_eigenvalue);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.J);
  EXPECT_NEAR(es.eigenvalues().minCoeff(), c.min_eigenvalue, 1e-10);
}

TEST(Choi, AgreesWithKraus) {
  const int d = 5;
  const auto c = choi(ChannelSpec::attenuator(0.7), d);
  const auto k = kraus_attenuator(0.7, FockDim(d));
  for (int m = 0; m < d; ++m)
    for (int p = 0; p < d; ++p) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(d, d);
      unit(m, p) = 1.0;
      const auto img = apply_kraus(k, unit);
      for (int n = 0; n < d; ++n)
        for (int q = 0; q < d; ++q) EXPECT_NEAR(c.entry(n, q, m, p), img(n, q).real(), 1e-10);
    }
}

TEST(CpBracket, Thresholds) {
  EXPECT_NEAR(cp_bracket(NoisyFamily::attenuator, 0.6, 0.0, 2.0, 1e-4), 0.64, 1e-3);
  EXPECT_NEAR(cp_bracket(NoisyFamily::amplifier, 1.2, 0.0, 2.0, 1e-4), 0.44, 1e-3);
  EXPECT_NEAR(cp_bracket(NoisyFamily::attenuator, 1.0, -0.5, 0.5, 1e-4), 0.0, 1e-3);
  EXPECT_THROW(cp_bracket(NoisyFamily::attenuator, 0.6, 1.0, 2.0, 1e-4), std::invalid_argument);
}

TEST(Planck, ClosedForm) {
  for (double a2 : {2.0, 0.5, 3.0}) EXPECT_NEAR(planck_overlap(a2), oracle::planck(a2), 1e-10) << a2;
  EXPECT_NEAR(planck_overlap(1.0), 0.0, 1e-10);
  EXPECT_THROW(planck_overlap(0.0), std::invalid_argument);
}

TEST(Planck, ReconstructionRouteAgrees) {
  const auto out = apply_to_state(ChannelSpec::scaling(0.0, std::sqrt(2.0)), make_state(state::Fock{1}, FockDim(20)));
  EXPECT_NEAR(out(0, 0).real(), planck_overlap(2.0), 1e-6);
}
