#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qscale/fock.hpp"
#include "qscale/quadrature.hpp"

namespace qscale {

/// Operator-ordering parameter: P at s = 1, Wigner at s = 0, Q at s = -1.
class OrderingParam {
 public:
  explicit OrderingParam(double s = 0.0);
  double value() const { return s_; }
  friend bool operator==(OrderingParam, OrderingParam) = default;

 private:
  double s_;
};

/// Phase-covariant Gaussian action on symmetric-ordered characteristic
/// functions:  chi_0'(xi) = exp(gauss |xi|^2 / 2) chi_0(scale xi).
/// Every map in the channel zoo reduces to one of these.
struct PhaseSpaceAction {
  double scale = 1.0;
  double gauss = 0.0;

  /// `next` applied after `*this`.
  PhaseSpaceAction then(const PhaseSpaceAction& next) const {
    return {scale * next.scale, next.gauss + next.scale * next.scale * gauss};
  }

  /// Hilbert-Schmidt adjoint up to its positive prefactor:
  /// Phi^dagger = scale^{-2} * adjoint_kernel(). Requires scale != 0.
  PhaseSpaceAction adjoint_kernel() const { return {1.0 / scale, gauss / (scale * scale)}; }

  /// Effective Gaussian exponent c of the image of a truncated state at s = 0.
  double exponent() const { return gauss - scale * scale; }

  /// Symmetric-ordered variance of the image of the vacuum.
  double vacuum_image_variance() const { return scale * scale - gauss; }

  friend bool operator==(const PhaseSpaceAction&, const PhaseSpaceAction&) = default;
};

/// Harmonic-resolved samples of chi_s on a polar grid:
///   chi_s(r e^{i phi}) = sum_k e^{i k phi} values(node, k + max_harmonic).
/// Carries the generating state and action so that rescaled arguments are
/// evaluated exactly instead of interpolated.
class CharFnGrid {
 public:
  OrderingParam ordering() const { return ordering_; }
  const PolarGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  int max_harmonic() const { return static_cast<int>(values_.cols() - 1) / 2; }
  cplx harmonic(int node, int k) const { return values_(node, k + max_harmonic()); }
  double source_tail() const { return source_->tail_mass(); }

  /// Analytically tracked c: samples are bounded by poly(|xi|) e^{c |xi|^2 / 2}.
  double exponent() const { return action_.exponent() + ordering_.value(); }

  const TruncatedState& source() const { return *source_; }
  const PhaseSpaceAction& action() const { return action_; }

  /// chi_s(xi), evaluated exactly from the generating state.
  cplx evaluate(cplx xi) const;

 private:
  friend CharFnGrid make_charfn(std::shared_ptr<const TruncatedState>, OrderingParam, PhaseSpaceAction, PolarGrid);
  friend CharFnGrid convert_ordering(const CharFnGrid&, OrderingParam);
  friend CharFnGrid transform_charfn(const CharFnGrid&, const PhaseSpaceAction&);

  OrderingParam ordering_;
  PolarGrid grid_;
  Eigen::MatrixXcd values_;
  std::shared_ptr<const TruncatedState> source_;
  PhaseSpaceAction action_;
};

CharFnGrid make_charfn(std::shared_ptr<const TruncatedState> source, OrderingParam s, PhaseSpaceAction action,
                       PolarGrid grid);

/// chi_s(xi) = e^{s |xi|^2 / 2} Tr(rho D(xi)). Requires tail mass <= 1e-6.
CharFnGrid char_fn(const TruncatedState& rho, OrderingParam s, const PolarGrid& grid);
CharFnGrid char_fn(const TruncatedState& rho, OrderingParam s);

/// Multiplies by e^{(s_new - s_old) |xi|^2 / 2}.
CharFnGrid convert_ordering(const CharFnGrid& chi, OrderingParam s_new);

/// Applies `action` at the symmetric-ordered level, keeping chi's ordering label.
CharFnGrid transform_charfn(const CharFnGrid& chi, const PhaseSpaceAction& action);

/// Real samples of Lambda_s on a polar alpha grid (radius x angle).
struct QuasiprobGrid {
  OrderingParam ordering;
  PolarGrid radial;
  int angles = 0;
  Eigen::MatrixXd values;
  double max_imaginary = 0.0;

  double angle(int l) const;
  /// Quadrature estimate of the integral over the plane.
  double integral() const;
};

/// Lambda_s(alpha) = pi^{-2} int exp(alpha xi^* - alpha^* xi) chi_s(xi) d^2 xi,
/// normalized so that Lambda_s integrates to Tr rho. Throws
/// DivergentReconstruction when the envelope of chi_s does not decay.
QuasiprobGrid quasiprob_from_charfn(const CharFnGrid& chi, const PolarGrid& alpha_grid, int angles,
                                    const QuadratureOptions& opts = {});

/// Weyl inversion of chi back to a density matrix in dimension `dim`.
/// Throws DivergentReconstruction when c >= 0 at s = 0 and
/// QuadratureUnderresolved when the doubling test moves an element by more
/// than opts.verify_tol.
TruncatedState reconstruct_state(const CharFnGrid& chi, FockDim dim, const QuadratureOptions& opts = {});

/// Batch kernel behind reconstruction: <n|Phi(M)|q> for every source matrix M
/// (all of equal dimension) under the phase-space action, in dimension out_dim.
std::vector<Eigen::MatrixXcd> weyl_images(std::span<const Eigen::MatrixXcd> sources, const PhaseSpaceAction& action,
                                          int out_dim, const QuadratureOptions& opts = {});

/// Tr(Phi(rho) sigma) from the characteristic functions, without forming Phi(rho).
/// Finite whenever action.exponent() < 1.
double trace_pairing(const TruncatedState& rho, const PhaseSpaceAction& action, const TruncatedState& sigma,
                     const QuadratureOptions& opts = {});

/// int Lambda_s(alpha; rho) Lambda_{-s}(alpha; sigma) d^2 alpha = Tr(rho sigma) / pi.
double pairing(const TruncatedState& rho, const TruncatedState& sigma, OrderingParam s,
               const QuadratureOptions& opts = {});

}  // namespace qscale
