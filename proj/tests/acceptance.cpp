// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qscale/certify.hpp"
#include "qscale/channels.hpp"
#include "qscale/errors.hpp"
#include "qscale/gaussian.hpp"
#include "qscale/phasediagram.hpp"
#include "qscale/quasiprob.hpp"

using namespace qscale;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome phase_diagram() {
  SweepConfig c;
  c.x = Range{-1.0, 1.0, 21};
  c.y = Range{0.25, 2.0, 21};
  c.band_width = 0.02;
  c.dim = 40;
  c.choi_dim = 12;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = sweep(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << res.summary.points << " points, " << res.summary.certified << " certified, " << res.summary.mismatches
     << " mismatches, " << fmt("%.1f", secs) << " s";
  for (const auto& f : res.summary.failures) os << "\n    " << f;
  return {res.summary.mismatches == 0 && secs <= 600.0, os.str()};
}

Outcome vacuum_witness() {
  const auto w = positivity_probe(ChannelSpec::scaling(0.0, 0.5), {make_probe(state::Vacuum{}, FockDim(40))});
  const double expect = oracle::geometric(0.25, 1);
  bool pass = w && w->kind == WitnessKind::output_eigen && std::abs(w->value - expect) <= 1e-6;
  std::ostringstream os;
  os << "min eigenvalue " << fmt("%.9f", w ? w->value : NAN) << " vs " << fmt("%.9f", expect);

  CertifyOptions opts;
  opts.partners = standard_probes(FockDim(12), 0);
  const Probe vac = make_probe(state::Vacuum{}, FockDim(12));
  int agree = 0;
  int total = 0;
  for (double s : {-0.95, -0.55, 0.05, 0.45, 0.9})
    for (int j = 0; j < 10; ++j) {
      const double a = 0.13 + 0.19 * j;
      const bool predicted = a * a * (1.0 - s) + s < 1.0;
      const auto wit = positivity_probe(ChannelSpec::scaling(s, a), {vac}, opts);
      const bool flagged = wit && wit->input == "vacuum" && wit->partner != "adjoint";
      agree += predicted == flagged;
      ++total;
    }
  pass = pass && agree == total;
  os << "; vacuum flag matches a^2(1-s)+s<1 at " << agree << "/" << total << " points";
  return {pass, os.str()};
}

Outcome quantum_limited() {
  double worst_choi = 1e300;
  for (double k : {0.3, 0.6, 0.9}) worst_choi = std::min(worst_choi, choi(ChannelSpec::attenuator(k), 12).min_eigenvalue);
  for (double k : {1.2, 2.0}) worst_choi = std::min(worst_choi, choi(ChannelSpec::amplifier(k), 12).min_eigenvalue);

  double worst_td = 0.0;
  const int d = 40;
  auto check = [&](const ChannelSpec& spec) {
    const auto kraus = kraus_set(spec, FockDim(d));
    for (int n = 0; n <= 5; ++n) {
      const auto rho = make_state(state::Fock{n}, FockDim(d));
      worst_td = std::max(worst_td, trace_distance(apply_kraus(kraus, rho.matrix()), apply_to_state(spec, rho).matrix()));
    }
  };
  for (double k : {0.3, 0.6, 0.9}) check(ChannelSpec::attenuator(k));
  for (double k : {1.2, 2.0}) check(ChannelSpec::amplifier(k));
  return {worst_choi >= -1e-8 && worst_td <= 1e-7,
          "worst Choi min eigenvalue " + fmt("%.3e", worst_choi) + ", worst Kraus/charfn trace distance " +
              fmt("%.3e", worst_td)};
}

Outcome cp_thresholds() {
  const double att = cp_bracket(NoisyFamily::attenuator, 0.6, 0.0, 2.0, 1e-5);
  const double amp = cp_bracket(NoisyFamily::amplifier, 1.2, 0.0, 2.0, 1e-5);
  return {std::abs(att - 0.64) <= 1e-3 && std::abs(amp - 0.44) <= 1e-3,
          "attenuator 0.6 -> b* = " + fmt("%.6f", att) + ", amplifier 1.2 -> b* = " + fmt("%.6f", amp)};
}

Outcome eb_nb_flips() {
  double worst = 0.0;
  for (double k : {0.5, 0.8, 1.0, 1.2, 2.0})
    for (double r : {0.2, 0.5, 1.0}) {
      const double target = 1.0 + k * k;
      worst = std::max(worst, std::abs(ppt_flip(k, r, 0.0, 10.0) - target));
      worst = std::max(worst, std::abs(classicality_flip(k, r, 0.0, 10.0) - target));
    }
  return {worst <= 1e-9, "max |flip - (1+k^2)| = " + fmt("%.3e", worst) + " over 15 (k, r) pairs"};
}

Outcome decomposition() {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> us(-1.0, 1.0), ua(0.25, 2.0);
  const auto chi = char_fn(make_state(state::RandomPure{5}, FockDim(12)), OrderingParam(0.0));
  auto deviation = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return ((x - y).cwiseAbs().array() / x.cwiseAbs().array().max(1.0)).maxCoeff();
  };
  double chained = 0.0;
  double manual_decaying = 0.0;
  double manual_growing = 0.0;
  for (int t = 0; t < 20; ++t) {
    const channel::Scaling m{us(gen), ua(gen)};
    const auto direct = apply_charfn(ChannelSpec::scaling(m.s, m.a), chi);
    const ChannelSpec split_spec = decompose(m);
    const auto& parts = std::get<Compose>(split_spec.variant()).maps;
    const auto scaled = apply_charfn(parts.back(), chi);
    chained = std::max(chained, deviation(direct.values(), apply_charfn(parts.front(), scaled).values()));

    const double b = std::get<channel::ClassicalNoise>(parts.front().variant()).b;
    Eigen::MatrixXcd manual = scaled.values();
    for (int i = 0; i < scaled.grid().size(); ++i) {
      const double r = scaled.grid().nodes[i];
      manual.row(i) *= std::exp(-0.5 * b * r * r);
    }
    double& slot = direct.exponent() < 0.0 ? manual_decaying : manual_growing;
    slot = std::max(slot, deviation(direct.values(), manual));
  }
  return {chained <= 1e-12 && manual_decaying <= 1e-12,
          "chained maps " + fmt("%.3e", chained) + ", grid-multiplied noise " + fmt("%.3e", manual_decaying) +
              " on decaying images (" + fmt("%.3e", manual_growing) + " where chi grows)"};
}

Outcome planck() {
  const double two = planck_overlap(2.0);
  const double one = planck_overlap(1.0);
  const auto image = apply_to_state(ChannelSpec::scaling(0.0, std::sqrt(2.0)), make_state(state::Fock{1}, FockDim(20)));
  const double routed = image(0, 0).real();
  const bool pass = std::abs(two + 2.0 / 9.0) <= 1e-6 && std::abs(two - oracle::planck(2.0)) <= 1e-6 &&
                    std::abs(one) <= 1e-10 && std::abs(routed - two) <= 1e-6;
  return {pass, "a^2=2: " + fmt("%.10f", two) + ", a^2=1: " + fmt("%.2e", one) + ", reconstruction route " +
                    fmt("%.10f", routed)};
}

Outcome duality() {
  bool pass = true;
  std::ostringstream os;
  const auto probes = standard_probes(FockDim(20), 2);
  for (auto [s, a] : {std::pair{0.5, 0.7}, {-0.5, 1.4}, {0.0, 2.0}}) {
    const auto rep = duality_check(s, a, 20, 7);
    const bool fwd = positivity_probe(ChannelSpec::scaling(s, a), probes).has_value();
    const bool dual = positivity_probe(ChannelSpec::dual(s, a), probes).has_value();
    pass = pass && rep.max_difference <= 1e-8 && rep.signs_consistent && fwd == dual;
    os << (os.tellp() > 0 ? "; " : "") << "(" << s << "," << a << ") diff " << fmt("%.2e", rep.max_difference)
       << (fwd == dual ? " signs ok" : " signs differ");
  }
  return {pass, os.str()};
}

Outcome reduction() {
  std::mt19937_64 gen(13);
  std::normal_distribution<double> nd;
  double res = 0.0;
  double det = 0.0;
  for (int t = 0; t < 100; ++t) {
    Eigen::Matrix2d k;
    k << nd(gen), nd(gen), nd(gen), nd(gen);
    const auto r = reduce_scaling_matrix(k);
    res = std::max(res, r.residual());
    det = std::max({det, std::abs(r.S1.determinant() - 1.0), std::abs(r.S2.determinant() - 1.0)});
  }
  return {res <= 1e-10 && det <= 1e-12, "max residual " + fmt("%.2e", res) + ", max |det S - 1| " + fmt("%.2e", det)};
}

Outcome properties() {
  const auto rho = make_state(state::RandomPure{77}, FockDim(40));
  const double round_trip =
      (reconstruct_state(char_fn(rho, OrderingParam(0.0)), FockDim(40)).matrix() - rho.matrix()).cwiseAbs().maxCoeff();

  double pairing_err = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = make_state(state::RandomPure{seed}, FockDim(16));
    const auto y = make_state(state::RandomPure{seed + 50}, FockDim(16));
    const double overlap = (x.matrix() * y.matrix()).trace().real();
    for (double s : {-1.0, 0.0, 0.5})
      pairing_err = std::max(pairing_err, std::abs(std::numbers::pi * pairing(x, y, OrderingParam(s)) - overlap));
  }

  double parity_err = 0.0;
  const auto small = make_state(state::RandomPure{3}, FockDim(16));
  for (auto [s, a] : {std::pair{0.0, 0.6}, {1.0, 0.8}, {-1.0, 1.5}}) {
    const auto plus = apply_to_state(ChannelSpec::scaling(s, a), small);
    const auto minus = apply_to_state(ChannelSpec::scaling(s, -a), small);
    parity_err = std::max(parity_err, (parity_conjugate(plus).matrix() - minus.matrix()).cwiseAbs().maxCoeff());
  }

  int flagged = 0;
  const std::vector<std::function<void()>> divergent = {
      [] { apply_to_state(ChannelSpec::scaling(-1.0, 0.5), make_state(state::Vacuum{}, FockDim(8))); },
      [] { transfer_tensor(ChannelSpec::scaling(-1.0, 0.5), 6, 6); },
      [] { choi(ChannelSpec::scaling(-0.8, 0.3), 6); },
      [] {
        quasiprob_from_charfn(char_fn(make_state(state::Vacuum{}, FockDim(6)), OrderingParam(1.0)),
                              make_polar_grid(2.0, 8, 0), 4);
      },
  };
  for (const auto& f : divergent) {
    try {
      f();
    } catch (const DivergentReconstruction&) {
      ++flagged;
    }
  }
  const bool pass = round_trip <= 1e-8 && pairing_err <= 1e-8 && parity_err <= 1e-9 &&
                    flagged == static_cast<int>(divergent.size());
  return {pass, "round trip " + fmt("%.2e", round_trip) + ", pairing " + fmt("%.2e", pairing_err) + ", parity " +
                    fmt("%.2e", parity_err) + ", divergence flagged " + std::to_string(flagged) + "/" +
                    std::to_string(divergent.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"scaling-map phase diagram", phase_diagram},
      {"vacuum witness", vacuum_witness},
      {"quantum-limited channels", quantum_limited},
      {"CP thresholds", cp_thresholds},
      {"EB/NB thresholds", eb_nb_flips},
      {"noise decomposition", decomposition},
      {"Planck overlap", planck},
      {"duality", duality},
      {"K-matrix reduction", reduction},
      {"property suite", properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += !out.pass;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].first,
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
