#pragma once

#include <string>

#include <Eigen/Dense>

#include "qscale/channels.hpp"
#include "qscale/quasiprob.hpp"

namespace qscale {

/// Zero-or-displaced Gaussian state of one or two modes in the convention
/// chi_0(L) = exp(-L^T V L / 2) with vacuum V = 1. Quadrature ordering is
/// (x1, p1[, x2, p2]).
struct CovarianceModel {
  int modes = 1;
  Eigen::MatrixXd V;
  Eigen::VectorXd mean;

  static CovarianceModel thermal(double v);
  static CovarianceModel vacuum() { return thermal(1.0); }

  /// Minimum eigenvalue of V + i Omega; negative means unphysical.
  double physicality_margin() const;
  bool physical(double tol = 1e-12) const { return physicality_margin() >= -tol; }
};

/// Acts on the 2x2 block of `acting_mode`: B -> scale^2 B - gauss 1, and
/// every cross block C -> scale C.
CovarianceModel propagate(const PhaseSpaceAction& action, const CovarianceModel& g, int acting_mode = 0);
CovarianceModel propagate(const ChannelSpec& spec, const CovarianceModel& g, int acting_mode = 0);

/// exp(-width |xi|^2 / 2) is the characteristic function of a state at
/// ordering s iff width >= 1 - s.
enum class Positivity { positive, non_positive };
Positivity thermal_positivity(double width, OrderingParam s = OrderingParam(0.0), double tol = 1e-12);

/// Photon-number law of a zero-mean single-mode thermal model of variance v:
/// p_k = 2/(1+v) ((v-1)/(v+1))^k.
Eigen::VectorXd thermal_photon_distribution(double v, int levels);

/// Two-mode squeezed vacuum with squeezing r.
CovarianceModel tmsv(double r);

enum class Entanglement { npt, ppt };
struct PPTResult {
  Entanglement verdict;
  double margin;
};
/// Flips the momentum of mode 2 and checks V + i Omega >= 0.
PPTResult ppt_test(const CovarianceModel& g, double tol = 1e-12);

enum class Classicality { classical, nonclassical };
struct ClassicalityResult {
  Classicality verdict;
  double margin;
};
/// Nonnegative Gaussian P-function iff V - 1 >= 0.
ClassicalityResult classicality_test(const CovarianceModel& g, double tol = 1e-12);

enum class NoisyFamily { attenuator, amplifier };

struct ThresholdReport {
  NoisyFamily family;
  double a;
  double b;
  double cp_threshold;
  double eb_threshold;
  double nb_threshold;
  bool cp;
  bool eb;
  bool nb;
};

/// Closed-form thresholds |1 - a^2| and 1 + a^2; verdicts use a +-band.
ThresholdReport threshold_report(NoisyFamily family, double a, double b, double band = 1e-9);

std::string to_string(NoisyFamily family);
NoisyFamily parse_family(const std::string& text);

/// Channel B_2(b) o Gamma_{0,a} applied to mode 2 of tmsv(r).
CovarianceModel noisy_tmsv_image(double a, double b, double r);

/// Smallest b in [lo, hi] at which the PPT (or classicality) verdict of
/// noisy_tmsv_image(a, b, r) turns positive; bisection to `tol`.
double ppt_flip(double a, double r, double lo, double hi, double tol = 1e-12);
double classicality_flip(double a, double r, double lo, double hi, double tol = 1e-12);

}  // namespace qscale
