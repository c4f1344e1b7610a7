#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qscale/fock.hpp"
#include "qscale/quasiprob.hpp"

namespace qscale {

namespace channel {
/// Gamma_{s,a}: Lambda_s(alpha) -> a^{-2} Lambda_s(alpha / a).
struct Scaling {
  double s;
  double a;
};
/// Dual map: Lambda_{-s}(alpha) -> a^2 Lambda_{-s}(a alpha).
struct DualScaling {
  double s;
  double a;
};
/// B_2(b): chi_0 -> chi_0 e^{-b |xi|^2 / 2}.
struct ClassicalNoise {
  double b;
};
/// Quantum-limited attenuator, identical to Scaling(1, kappa).
struct QLAttenuator {
  double kappa;
};
/// Quantum-limited amplifier, identical to Scaling(-1, kappa).
struct QLAmplifier {
  double kappa;
};
/// C_1(kappa; b) = B_2(b) o Gamma_{0,kappa}, |kappa| <= 1.
struct NoisyAttenuator {
  double kappa;
  double b;
};
/// C_2(kappa; b) = B_2(b) o Gamma_{0,kappa}, |kappa| >= 1.
struct NoisyAmplifier {
  double kappa;
  double b;
};
}  // namespace channel

class ChannelSpec;

/// Composition applied right to left: maps.back() acts first.
struct Compose {
  std::vector<ChannelSpec> maps;
};

/// Algebraic description of a phase-covariant single-mode map. Build through
/// the named constructors, which enforce the parameter ranges.
class ChannelSpec {
 public:
  using Variant = std::variant<channel::Scaling, channel::DualScaling, channel::ClassicalNoise, channel::QLAttenuator,
                               channel::QLAmplifier, channel::NoisyAttenuator, channel::NoisyAmplifier, Compose>;

  static ChannelSpec scaling(double s, double a);
  static ChannelSpec dual(double s, double a);
  static ChannelSpec noise(double b);
  static ChannelSpec attenuator(double kappa);
  static ChannelSpec amplifier(double kappa);
  static ChannelSpec noisy_attenuator(double kappa, double b);
  static ChannelSpec noisy_amplifier(double kappa, double b);
  static ChannelSpec compose(std::vector<ChannelSpec> maps);
  static ChannelSpec identity() { return scaling(0.0, 1.0); }

  const Variant& variant() const { return v_; }

  friend bool operator==(const ChannelSpec& x, const ChannelSpec& y);

 private:
  explicit ChannelSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Grammar: scale:<s>:<a> | noise:<b> | att:<k>[:<b>] | amp:<k>[:<b>] |
/// dual:<s>:<a>, joined by '*' for right-to-left composition.
ChannelSpec parse_channel(const std::string& text);
std::string to_string(const ChannelSpec& spec);

/// Collapses any spec to its phase-space action. Compositions are folded
/// symbolically, so the exponent of the result is exact.
PhaseSpaceAction action_of(const ChannelSpec& spec);

/// True when the action is a rotation by 0 or pi (|scale| = 1, no noise).
bool is_unitary(const PhaseSpaceAction& action, double tol = 1e-12);

CharFnGrid apply_charfn(const ChannelSpec& spec, const CharFnGrid& chi);

/// char_fn -> apply_charfn -> reconstruct_state. Output in rho's dimension.
TruncatedState apply_to_state(const ChannelSpec& spec, const TruncatedState& rho, const QuadratureOptions& opts = {});

/// Gamma_{s,a} = B_2(s (1 - a^2)) o Gamma_{0,a}.
ChannelSpec decompose(const channel::Scaling& scaling);

class NoKrausRepresentation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct KrausSet {
  std::vector<FockOperator> operators;
  ChannelSpec source;

  /// max |<n| sum_k A_k^dagger A_k |m> - delta_nm| over n, m < levels.
  double completeness_defect(int levels) const;
};

KrausSet kraus_attenuator(double kappa, FockDim dim);
KrausSet kraus_amplifier(double kappa, FockDim dim);
/// Quantum-limited channels only; everything else throws NoKrausRepresentation.
KrausSet kraus_set(const ChannelSpec& spec, FockDim dim);
Eigen::MatrixXcd apply_kraus(const KrausSet& kraus, const Eigen::MatrixXcd& rho);

/// T[n][q][m][p] = <n| Phi(|m><p|) |q>. Phase covariance leaves only entries
/// with n - q = m - p, which are the only ones stored.
class TransferTensor {
 public:
  TransferTensor(int in_dim, int out_dim);

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  cplx operator()(int n, int q, int m, int p) const;
  double& slot(int n, int m, int p) { return data_[(static_cast<std::size_t>(m) * in_ + p) * out_ + n]; }
  double slot(int n, int m, int p) const { return data_[(static_cast<std::size_t>(m) * in_ + p) * out_ + n]; }

 private:
  int in_;
  int out_;
  std::vector<double> data_;
};

/// Requires the image exponent c' < 0 (DivergentReconstruction otherwise).
TransferTensor transfer_tensor(const ChannelSpec& spec, int in_dim, int out_dim, const QuadratureOptions& opts = {});
TransferTensor transfer_tensor(const PhaseSpaceAction& action, int in_dim, int out_dim,
                               const QuadratureOptions& opts = {});

struct ScalingMatrixReduction {
  Eigen::Matrix2d K;
  Eigen::Matrix2d S1;
  Eigen::Matrix2d S2;
  double a = 0.0;
  int sign = 1;

  /// S1 K S2 - a * (identity or sigma_3), max-norm.
  double residual() const;
};

/// Symplectic S1, S2 with S1 K S2 = a 1 (det K > 0) or a sigma_3 (det K < 0).
ScalingMatrixReduction reduce_scaling_matrix(const Eigen::Matrix2d& K);

}  // namespace qscale
