#include "qscale/quasiprob.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qscale/errors.hpp"

namespace qscale {

namespace {

constexpr double kMaxSourceTail = 1e-6;

// X_k(r) = sign^k sum_{p - m = k} M(m, p) f(p, m), stored at index k + (n - 1),
// where f holds the radial factors at |scale| r.
Eigen::VectorXcd harmonics_from(const Eigen::MatrixXd& f, const Eigen::MatrixXcd& m, double scale) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(2 * n - 1);
  for (int mm = 0; mm < n; ++mm) {
    for (int p = 0; p < n; ++p) {
      const double fp = f(p, mm);
      if (fp != 0.0) x(p - mm + n - 1) += m(mm, p) * fp;
    }
  }
  if (scale < 0.0) {
    for (int k = -(n - 1); k <= n - 1; ++k) {
      if (k % 2 != 0) x(k + n - 1) = -x(k + n - 1);
    }
  }
  return x;
}

Eigen::VectorXcd harmonics_of(const Eigen::MatrixXcd& m, double scale, double r, double log_weight) {
  return harmonics_from(displacement_radial(static_cast<int>(m.rows()), std::abs(scale) * r, log_weight), m, scale);
}

double max_abs_diff(const std::vector<Eigen::MatrixXcd>& a, const std::vector<Eigen::MatrixXcd>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return worst;
}

double max_abs(const std::vector<Eigen::MatrixXcd>& a) {
  double worst = 0.0;
  for (const auto& m : a) worst = std::max(worst, m.cwiseAbs().maxCoeff());
  return worst;
}

std::vector<Eigen::MatrixXcd> weyl_images_on(std::span<const Eigen::MatrixXcd> sources, const PhaseSpaceAction& action,
                                             int out_dim, const PolarGrid& grid) {
  const int n = static_cast<int>(sources.front().rows());
  std::vector<Eigen::MatrixXcd> out(sources.size(), Eigen::MatrixXcd::Zero(out_dim, out_dim));
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid.nodes[i];
    const double w = 2.0 * grid.weights[i] * r;
    const Eigen::MatrixXd f_out = displacement_radial(out_dim, r);
    const Eigen::MatrixXd f_src = displacement_radial(n, std::abs(action.scale) * r, 0.5 * action.gauss * r * r);
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const Eigen::VectorXcd x = harmonics_from(f_src, sources[s], action.scale);
      auto& o = out[s];
      for (int row = 0; row < out_dim; ++row) {
        for (int col = 0; col < out_dim; ++col) {
          const int k = col - row;
          if (std::abs(k) > n - 1) continue;
          const double sign = (k % 2 == 0) ? 1.0 : -1.0;
          o(row, col) += (w * sign * f_out(row, col)) * x(k + n - 1);
        }
      }
    }
  }
  return out;
}

double trace_pairing_on(const Eigen::MatrixXcd& rho, const PhaseSpaceAction& action, double rho_order_gauss,
                        const Eigen::MatrixXcd& sigma, double sigma_order_gauss, const PolarGrid& grid) {
  const int nr = static_cast<int>(rho.rows());
  const int ns = static_cast<int>(sigma.rows());
  cplx acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid.nodes[i];
    const Eigen::VectorXcd a = harmonics_of(rho, action.scale, r, 0.5 * (action.gauss + rho_order_gauss) * r * r);
    const Eigen::VectorXcd b = harmonics_of(sigma, 1.0, r, 0.5 * sigma_order_gauss * r * r);
    cplx sum = 0.0;
    const int kmax = std::min(nr, ns) - 1;
    for (int k = -kmax; k <= kmax; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      sum += sign * a(k + nr - 1) * b(-k + ns - 1);
    }
    acc += (2.0 * grid.weights[i] * r) * sum;
  }
  return acc.real();
}

void require_decay(double exponent, const char* what) {
  if (!(exponent < 0.0)) {
    std::ostringstream os;
    os << what << ": characteristic function envelope exponent c = " << exponent << " >= 0 (image is not trace class)";
    throw DivergentReconstruction(os.str(), exponent);
  }
}

}  // namespace

OrderingParam::OrderingParam(double s) : s_(s) {
  if (!(s >= -1.0 && s <= 1.0)) throw std::invalid_argument("ordering parameter must lie in [-1, 1]");
}

CharFnGrid make_charfn(std::shared_ptr<const TruncatedState> source, OrderingParam s, PhaseSpaceAction action,
                       PolarGrid grid) {
  CharFnGrid out;
  out.ordering_ = s;
  out.source_ = std::move(source);
  out.action_ = action;
  const int n = out.source_->dim().value();
  const int kmax = std::min(n - 1, std::max(0, grid.harmonics));
  out.values_ = Eigen::MatrixXcd::Zero(grid.size(), 2 * kmax + 1);
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid.nodes[i];
    const Eigen::VectorXcd x =
        harmonics_of(out.source_->matrix(), action.scale, r, 0.5 * (action.gauss + s.value()) * r * r);
    for (int k = -kmax; k <= kmax; ++k) out.values_(i, k + kmax) = x(k + n - 1);
  }
  out.grid_ = std::move(grid);
  return out;
}

cplx CharFnGrid::evaluate(cplx xi) const {
  const double r = std::abs(xi);
  const double phi = std::arg(xi);
  const int n = source_->dim().value();
  const Eigen::VectorXcd x =
      harmonics_of(source_->matrix(), action_.scale, r, 0.5 * (action_.gauss + ordering_.value()) * r * r);
  cplx sum = 0.0;
  for (int k = -(n - 1); k <= n - 1; ++k) sum += std::polar(1.0, k * phi) * x(k + n - 1);
  return sum;
}

CharFnGrid char_fn(const TruncatedState& rho, OrderingParam s, const PolarGrid& grid) {
  if (rho.tail_mass() > kMaxSourceTail) {
    throw std::invalid_argument("char_fn: source truncation tail " + std::to_string(rho.tail_mass()) + " exceeds 1e-6");
  }
  return make_charfn(std::make_shared<const TruncatedState>(rho), s, PhaseSpaceAction{}, grid);
}

CharFnGrid char_fn(const TruncatedState& rho, OrderingParam s) {
  return char_fn(rho, s, default_polar_grid(rho.dim().value()));
}

CharFnGrid convert_ordering(const CharFnGrid& chi, OrderingParam s_new) {
  CharFnGrid out = chi;
  const double ds = s_new.value() - chi.ordering().value();
  out.ordering_ = s_new;
  if (ds == 0.0) return out;
  for (int i = 0; i < out.grid_.size(); ++i) {
    const double r = out.grid_.nodes[i];
    out.values_.row(i) *= std::exp(0.5 * ds * r * r);
  }
  return out;
}

CharFnGrid transform_charfn(const CharFnGrid& chi, const PhaseSpaceAction& action) {
  return make_charfn(chi.source_, chi.ordering_, chi.action_.then(action), chi.grid_);
}

double QuasiprobGrid::angle(int l) const { return 2.0 * std::numbers::pi * l / angles; }

double QuasiprobGrid::integral() const {
  double total = 0.0;
  for (int j = 0; j < radial.size(); ++j) {
    total += radial.weights[j] * radial.nodes[j] * values.row(j).sum();
  }
  return total * 2.0 * std::numbers::pi / angles;
}

QuasiprobGrid quasiprob_from_charfn(const CharFnGrid& chi, const PolarGrid& alpha_grid, int angles,
                                    const QuadratureOptions& opts) {
  if (angles < 1) throw std::invalid_argument("quasiprob_from_charfn: need at least one angle");
  require_decay(chi.exponent(), "quasiprob_from_charfn");
  const auto& src = chi.source().matrix();
  const int n = static_cast<int>(src.rows());
  const double s = chi.ordering().value();
  const auto& act = chi.action();
  double rho_max = 0.0;
  for (double r : alpha_grid.nodes) rho_max = std::max(rho_max, r);

  RadialIntegrand integrand{n, act.scale, act.gauss + s, 0, 2.0 * rho_max};
  const PolarGrid xi_grid = plan_radial(integrand, opts);

  // I(j, k) = int r chi_k(r) J_k(2 rho_j r) dr
  Eigen::MatrixXcd integrals = Eigen::MatrixXcd::Zero(alpha_grid.size(), 2 * n - 1);
  for (int i = 0; i < xi_grid.size(); ++i) {
    const double r = xi_grid.nodes[i];
    const Eigen::VectorXcd x = harmonics_of(src, act.scale, r, 0.5 * (act.gauss + s) * r * r);
    for (int j = 0; j < alpha_grid.size(); ++j) {
      const double z = 2.0 * alpha_grid.nodes[j] * r;
      for (int k = 0; k <= n - 1; ++k) {
        const double bessel = std::cyl_bessel_j(static_cast<double>(k), z);
        const double wb = xi_grid.weights[i] * r * bessel;
        integrals(j, k + n - 1) += wb * x(k + n - 1);
        if (k > 0) integrals(j, -k + n - 1) += ((k % 2 == 0) ? wb : -wb) * x(-k + n - 1);
      }
    }
  }

  QuasiprobGrid out{chi.ordering(), alpha_grid, angles, Eigen::MatrixXd::Zero(alpha_grid.size(), angles), 0.0};
  for (int j = 0; j < alpha_grid.size(); ++j) {
    for (int l = 0; l < angles; ++l) {
      const double theta = out.angle(l);
      cplx sum = 0.0;
      for (int k = -(n - 1); k <= n - 1; ++k) sum += std::polar(1.0, k * theta) * integrals(j, k + n - 1);
      sum *= 2.0 / std::numbers::pi;
      out.values(j, l) = sum.real();
      out.max_imaginary = std::max(out.max_imaginary, std::abs(sum.imag()));
    }
  }
  return out;
}

std::vector<Eigen::MatrixXcd> weyl_images(std::span<const Eigen::MatrixXcd> sources, const PhaseSpaceAction& action,
                                          int out_dim, const QuadratureOptions& opts) {
  if (sources.empty()) return {};
  require_decay(action.exponent(), "weyl_images");
  const int n = static_cast<int>(sources.front().rows());
  for (const auto& m : sources) {
    if (m.rows() != n || m.cols() != n) throw std::invalid_argument("weyl_images: sources must share one dimension");
  }
  const PolarGrid grid = plan_radial({n, action.scale, action.gauss, out_dim, 0.0}, opts);
  auto out = weyl_images_on(sources, action, out_dim, grid);
  if (opts.verify) {
    const double shift = std::max(max_abs_diff(out, weyl_images_on(sources, action, out_dim, refine_radial(grid))),
                                  max_abs_diff(out, weyl_images_on(sources, action, out_dim, densify_radial(grid))));
    if (shift > opts.verify_tol * std::max(1.0, max_abs(out))) {
      std::ostringstream os;
      os << "weyl_images: quadrature doubling shifted a matrix element by " << shift << " (cutoff " << grid.cutoff
         << ", " << grid.size() << " nodes)";
      throw QuadratureUnderresolved(os.str(), shift);
    }
  }
  return out;
}

TruncatedState reconstruct_state(const CharFnGrid& chi, FockDim dim, const QuadratureOptions& opts) {
  const Eigen::MatrixXcd& src = chi.source().matrix();
  auto images = weyl_images(std::span<const Eigen::MatrixXcd>(&src, 1), chi.action(), dim.value(), opts);
  return TruncatedState(std::move(images.front()), chi.source().tail_mass(), 1e-8);
}

double trace_pairing(const TruncatedState& rho, const PhaseSpaceAction& action, const TruncatedState& sigma,
                     const QuadratureOptions& opts) {
  const double c = action.exponent() - 1.0;
  if (!(c < 0.0)) {
    std::ostringstream os;
    os << "trace_pairing: integrand exponent " << c << " >= 0";
    throw DivergentReconstruction(os.str(), action.exponent());
  }
  const int nr = rho.dim().value();
  const int ns = sigma.dim().value();
  const PolarGrid grid = plan_radial({nr, action.scale, action.gauss, ns, 0.0}, opts);
  const double value = trace_pairing_on(rho.matrix(), action, 0.0, sigma.matrix(), 0.0, grid);
  if (opts.verify) {
    const double shift =
        std::max(std::abs(value - trace_pairing_on(rho.matrix(), action, 0.0, sigma.matrix(), 0.0, refine_radial(grid))),
                 std::abs(value - trace_pairing_on(rho.matrix(), action, 0.0, sigma.matrix(), 0.0, densify_radial(grid))));
    if (shift > opts.verify_tol * std::max(1.0, std::abs(value))) {
      std::ostringstream os;
      os << "trace_pairing: quadrature doubling shifted the value by " << shift;
      throw QuadratureUnderresolved(os.str(), shift);
    }
  }
  return value;
}

double pairing(const TruncatedState& rho, const TruncatedState& sigma, OrderingParam s, const QuadratureOptions& opts) {
  const int nr = rho.dim().value();
  const int ns = sigma.dim().value();
  const PolarGrid grid = plan_radial({nr, 1.0, 0.0, ns, 0.0}, opts);
  const double sv = s.value();
  auto eval = [&](const PolarGrid& g) {
    return trace_pairing_on(rho.matrix(), PhaseSpaceAction{}, sv, sigma.matrix(), -sv, g) / std::numbers::pi;
  };
  const double value = eval(grid);
  if (opts.verify) {
    const double shift = std::max(std::abs(value - eval(refine_radial(grid))), std::abs(value - eval(densify_radial(grid))));
    if (shift > opts.verify_tol) {
      std::ostringstream os;
      os << "pairing: quadrature doubling shifted the value by " << shift;
      throw QuadratureUnderresolved(os.str(), shift);
    }
  }
  return value;
}

}  // namespace qscale
