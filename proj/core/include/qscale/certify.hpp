#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qscale/channels.hpp"
#include "qscale/fock.hpp"
#include "qscale/gaussian.hpp"

namespace qscale {

enum class WitnessKind { output_eigen, pairing, choi_eigen, gaussian_scalar };

std::string to_string(WitnessKind kind);

/// Evidence that a map is not positive (or not CP, for choi_eigen).
struct Witness {
  WitnessKind kind = WitnessKind::output_eigen;
  /// State descriptor of the probe (or channel text for choi_eigen).
  std::string input;
  /// Second state of a pairing witness; empty otherwise.
  std::string partner;
  double value = 0.0;
  double tolerance = 0.0;
};

struct Probe {
  StateDesc desc;
  TruncatedState state;
};

Probe make_probe(const StateDesc& desc, FockDim dim);

/// vacuum, fock 1..6, coherent(1) and `random_count` seeded random pure states.
std::vector<Probe> standard_probes(FockDim dim, int random_count = 10, std::uint64_t seed = 1);

struct CertifyOptions {
  double tol_pos = 1e-7;
  QuadratureOptions quad;
  /// Partners sigma for the pairing fallback; standard probes when empty.
  std::vector<Probe> partners;
};

/// Looks for Phi(rho) with a negative eigenvalue among the probes. Divergent
/// outputs are rerouted to Tr(Phi(rho) sigma) over the partner set, and as a
/// last resort to the Gaussian vacuum images of Phi and its adjoint.
std::optional<Witness> positivity_probe(const ChannelSpec& spec, const std::vector<Probe>& probes,
                                        const CertifyOptions& opts = {});

/// Tr(Phi(rho) sigma) computed without reconstructing Phi(rho).
double pairing_probe(const ChannelSpec& spec, const TruncatedState& rho, const TruncatedState& sigma,
                     const QuadratureOptions& opts = {});

/// Vacuum-image scalar test: Phi(|0><0|) or the adjoint image of the vacuum is a
/// Gaussian with variance below 1.
std::optional<Witness> gaussian_scalar_witness(const PhaseSpaceAction& action, double tol = 1e-12);

struct DualityReport {
  int trials = 0;
  /// max |a^2 Tr(Gamma(rho) sigma) - Tr(rho Dual(sigma))|.
  double max_difference = 0.0;
  bool signs_consistent = true;
  double min_forward = 0.0;
  double min_dual = 0.0;
};

DualityReport duality_check(double s, double a, int trials, std::uint64_t seed, FockDim dim = FockDim(12),
                            const QuadratureOptions& opts = {});

/// J[(n, m), (q, p)] = <n| Phi(|m><p|) |q>, row index n * d + m. Zero unless
/// n - m = q - p, so eigenvalues are computed per block.
struct ChoiMatrix {
  int d = 0;
  int out_dim = 0;
  Eigen::MatrixXd J;
  /// Minimum eigenvalue of the block n - m = k, stored at k + d - 1.
  std::vector<double> block_min;
  double min_eigenvalue = 0.0;
  double trace = 0.0;

  double entry(int n, int q, int m, int p) const { return J(n * d + m, q * d + p); }
};

ChoiMatrix choi(const ChannelSpec& spec, int d, int out_dim = 0, const QuadratureOptions& opts = {});

struct BracketOptions {
  int d = 12;
  /// Choi counts as negative below -negativity.
  double negativity = 1e-10;
  QuadratureOptions quad;
};

/// Bisection in b on the sign of the Choi minimum eigenvalue of the noisy
/// attenuator or amplifier with scale a.
double cp_bracket(NoisyFamily family, double a, double b_lo, double b_hi, double tol_b,
                  const BracketOptions& opts = {});

/// Tr(Gamma_{0, sqrt(a_sq)}(|1><1|) |0><0|).
double planck_overlap(double a_sq, const QuadratureOptions& opts = {});

}  // namespace qscale
