#include "qscale/gaussian.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qscale {

namespace {

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

double min_eigenvalue(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double margin_of(const Eigen::MatrixXd& v) {
  const int modes = static_cast<int>(v.rows()) / 2;
  const Eigen::MatrixXcd h = v.cast<cplx>() + cplx(0.0, 1.0) * symplectic_form(modes).cast<cplx>();
  return min_eigenvalue(h);
}

double bisect(const std::function<bool(double)>& positive, double lo, double hi, double tol) {
  if (positive(lo)) return lo;
  if (!positive(hi)) throw std::invalid_argument("flip bisection: verdict does not change on the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (positive(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CovarianceModel CovarianceModel::thermal(double v) {
  return {1, v * Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)};
}

double CovarianceModel::physicality_margin() const { return margin_of(V); }

CovarianceModel propagate(const PhaseSpaceAction& action, const CovarianceModel& g, int acting_mode) {
  if (acting_mode < 0 || acting_mode >= g.modes) throw std::invalid_argument("propagate: no such mode");
  CovarianceModel out = g;
  const int i = 2 * acting_mode;
  const double lam = action.scale;
  for (int j = 0; j < 2 * g.modes; j += 2) {
    if (j == i) continue;
    out.V.block(i, j, 2, 2) *= lam;
    out.V.block(j, i, 2, 2) *= lam;
  }
  out.V.block(i, i, 2, 2) = lam * lam * g.V.block(i, i, 2, 2) - action.gauss * Eigen::Matrix2d::Identity();
  out.mean.segment(i, 2) *= lam;
  return out;
}

CovarianceModel propagate(const ChannelSpec& spec, const CovarianceModel& g, int acting_mode) {
  return propagate(action_of(spec), g, acting_mode);
}

Positivity thermal_positivity(double width, OrderingParam s, double tol) {
  return width >= 1.0 - s.value() - tol ? Positivity::positive : Positivity::non_positive;
}

Eigen::VectorXd thermal_photon_distribution(double v, int levels) {
  Eigen::VectorXd p(levels);
  const double ratio = (v - 1.0) / (v + 1.0);
  double term = 2.0 / (1.0 + v);
  for (int k = 0; k < levels; ++k) {
    p(k) = term;
    term *= ratio;
  }
  return p;
}

CovarianceModel tmsv(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("tmsv: squeezing must be nonnegative");
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  CovarianceModel g{2, Eigen::MatrixXd::Zero(4, 4), Eigen::VectorXd::Zero(4)};
  g.V.diagonal().setConstant(c);
  g.V(0, 2) = g.V(2, 0) = s;
  g.V(1, 3) = g.V(3, 1) = -s;
  return g;
}

PPTResult ppt_test(const CovarianceModel& g, double tol) {
  if (g.modes != 2) throw std::invalid_argument("ppt_test needs a two-mode model");
  Eigen::MatrixXd v = g.V;
  v.row(3) *= -1.0;
  v.col(3) *= -1.0;
  const double margin = margin_of(v);
  return {margin >= -tol ? Entanglement::ppt : Entanglement::npt, margin};
}

ClassicalityResult classicality_test(const CovarianceModel& g, double tol) {
  const Eigen::MatrixXd d = g.V - Eigen::MatrixXd::Identity(g.V.rows(), g.V.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d, Eigen::EigenvaluesOnly);
  const double margin = solver.eigenvalues().minCoeff();
  return {margin >= -tol ? Classicality::classical : Classicality::nonclassical, margin};
}

ThresholdReport threshold_report(NoisyFamily family, double a, double b, double band) {
  if (family == NoisyFamily::attenuator && !(std::abs(a) <= 1.0)) {
    throw std::invalid_argument("threshold_report: attenuator needs |a| <= 1");
  }
  if (family == NoisyFamily::amplifier && !(std::abs(a) >= 1.0)) {
    throw std::invalid_argument("threshold_report: amplifier needs |a| >= 1");
  }
  ThresholdReport out{family, a, b, std::abs(1.0 - a * a), 1.0 + a * a, 1.0 + a * a, false, false, false};
  out.cp = b >= out.cp_threshold - band;
  out.eb = b >= out.eb_threshold - band;
  out.nb = b >= out.nb_threshold - band;
  return out;
}

std::string to_string(NoisyFamily family) { return family == NoisyFamily::attenuator ? "attenuator" : "amplifier"; }

NoisyFamily parse_family(const std::string& text) {
  if (text == "attenuator" || text == "att") return NoisyFamily::attenuator;
  if (text == "amplifier" || text == "amp") return NoisyFamily::amplifier;
  throw std::invalid_argument("unknown channel family '" + text + "'");
}

CovarianceModel noisy_tmsv_image(double a, double b, double r) {
  return propagate(PhaseSpaceAction{a, -b}, tmsv(r), 1);
}

double ppt_flip(double a, double r, double lo, double hi, double tol) {
  return bisect([&](double b) { return ppt_test(noisy_tmsv_image(a, b, r), 0.0).verdict == Entanglement::ppt; }, lo,
                hi, tol);
}

double classicality_flip(double a, double r, double lo, double hi, double tol) {
  return bisect(
      [&](double b) {
        return classicality_test(noisy_tmsv_image(a, b, r), 0.0).verdict == Classicality::classical;
      },
      lo, hi, tol);
}

}  // namespace qscale
