#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace qscale {

using cplx = std::complex<double>;

/// Truncation dimension of a single bosonic mode, basis |0>,...,|n-1>.
class FockDim {
 public:
  static constexpr int kDefault = 40;

  explicit FockDim(int n = kDefault);
  int value() const { return n_; }
  friend bool operator==(FockDim, FockDim) = default;

 private:
  int n_;
};

/// Operator on the truncated space; not necessarily Hermitian.
struct FockOperator {
  FockDim dim;
  Eigen::MatrixXcd amplitudes;
};

/// Density-operator candidate on the truncated space. Hermitian by
/// construction; positivity is deliberately not enforced.
class TruncatedState {
 public:
  /// Symmetrizes `m` (M <- (M + M^dagger)/2); throws if it is not square or
  /// deviates from Hermitian by more than `tol_herm` (max-norm).
  TruncatedState(Eigen::MatrixXcd m, double tail_mass = 0.0, double tol_herm = 1e-10);

  FockDim dim() const { return FockDim(static_cast<int>(m_.rows())); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  /// Probability mass the requested state placed beyond the truncation.
  double tail_mass() const { return tail_; }
  double trace() const { return m_.trace().real(); }
  bool normalized(double tol_trace = 1e-8) const { return std::abs(trace() - 1.0) <= tol_trace; }

 private:
  Eigen::MatrixXcd m_;
  double tail_;
};

namespace state {
struct Vacuum {};
struct Fock {
  int n;
};
struct Coherent {
  cplx alpha;
};
/// Thermal state with symmetric-ordered variance v = 2 nbar + 1.
struct Thermal {
  double v;
};
/// Normalized complex-Gaussian vector from a seeded generator.
struct RandomPure {
  std::uint64_t seed;
};
}  // namespace state

using StateDesc = std::variant<state::Vacuum, state::Fock, state::Coherent, state::Thermal, state::RandomPure>;

/// Text form used by the CLI and by witness descriptors:
/// vacuum | fock:<n> | coherent:<re>[:<im>] | thermal:<v> | random:<seed>
StateDesc parse_state_desc(const std::string& text);
std::string to_string(const StateDesc& desc);

TruncatedState make_state(const StateDesc& desc, FockDim dim = FockDim());

/// Coherent states whose truncation tail exceeds this are refused outright.
inline constexpr double kMaxCoherentTail = 1e-6;
/// Coherent states whose truncation tail exceeds this are accepted with a warning.
inline constexpr double kWarnCoherentTail = 1e-10;

/// <m|D(xi)|n> with D(xi) = exp(xi a^dagger - xi^* a).
cplx displacement_element(int m, int n, cplx xi);

/// Radial factors f(m, n) of the displacement matrix at |xi| = r:
///   <m|D(r e^{i phi})|n> = e^{i (m - n) phi} f(m, n).
/// Every entry is multiplied by exp(log_weight). Evaluated by a normalized
/// Laguerre recurrence in log-scaled form, so large r and dim do not overflow.
Eigen::MatrixXd displacement_radial(int dim, double r, double log_weight = 0.0);

struct SpectralResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXcd eigenvectors;
};

SpectralResult hermitian_spectrum(const Eigen::MatrixXcd& m, double tol_herm = 1e-9);
inline SpectralResult hermitian_spectrum(const TruncatedState& rho) { return hermitian_spectrum(rho.matrix()); }

/// Half-period rotation a -> -a: M'(m, n) = (-1)^{m+n} M(m, n).
TruncatedState parity_conjugate(const TruncatedState& rho);

/// Trace norm of a Hermitian matrix, halved.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace qscale
