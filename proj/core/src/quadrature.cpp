#include "qscale/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qscale {

namespace {

// Newton iteration on P_n with the Tricomi initial guess.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // one more derivative at the converged root
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// log of an upper envelope for |f(m, n)(x)| over m, n < dim.
double log_radial_envelope(double x, int dim) {
  const double turning = 4.0 * dim + 2.0;
  if (x * x <= turning) return 0.0;
  const double bound = std::log(2.0) + (2.0 * dim - 2.0) * std::log(x) - 0.5 * x * x - std::lgamma(static_cast<double>(dim));
  return std::min(0.0, bound);
}

}  // namespace

PolarGrid make_polar_grid(double cutoff, int radial_nodes, int harmonics) {
  if (!(cutoff > 0.0)) throw std::invalid_argument("PolarGrid: cutoff must be positive");
  if (radial_nodes < 2) throw std::invalid_argument("PolarGrid: need at least two radial nodes");
  PolarGrid grid;
  grid.cutoff = cutoff;
  grid.harmonics = harmonics;
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(radial_nodes, x, w);
  grid.nodes.resize(radial_nodes);
  grid.weights.resize(radial_nodes);
  for (int i = 0; i < radial_nodes; ++i) {
    grid.nodes[i] = 0.5 * cutoff * (x[i] + 1.0);
    grid.weights[i] = 0.5 * cutoff * w[i];
  }
  return grid;
}

PolarGrid default_polar_grid(int n) { return make_polar_grid(8.0, 200, 2 * n); }

PolarGrid plan_radial(const RadialIntegrand& in, const QuadratureOptions& opts) {
  const double scale = std::abs(in.scale);
  double cutoff = opts.cutoff;
  if (cutoff <= 0.0) {
    auto log_env = [&](double r) {
      double v = std::log(std::max(r, 1e-300)) + 0.5 * in.gauss * r * r + log_radial_envelope(scale * r, in.src_dim);
      if (in.second_dim > 0) v += log_radial_envelope(r, in.second_dim);
      return v;
    };
    // both factors must be past their turning points before the envelope is trusted
    double r_min = 2.0;
    if (scale > 0.0) r_min = std::max(r_min, std::sqrt(4.0 * in.src_dim + 2.0) / scale);
    if (in.second_dim > 0) r_min = std::max(r_min, std::sqrt(4.0 * in.second_dim + 2.0));
    const double threshold = std::log(1e-18);
    double r = r_min;
    const double step = 0.05 * std::max(1.0, r_min / 10.0);
    while (log_env(r) > threshold) {
      r += step;
      if (r > 1e4) throw std::runtime_error("plan_radial: integrand envelope does not decay");
    }
    cutoff = 1.1 * r;
  }
  int nodes = opts.nodes;
  if (nodes <= 0) {
    const double decay = std::sqrt(std::max(1.0, std::abs(1.0 + scale * scale - in.gauss)));
    const double oscill = in.oscillation * cutoff / std::numbers::pi;
    const double estimate = 2.0 * (in.src_dim + in.second_dim) + 4.0 * cutoff * decay + 2.0 * oscill;
    nodes = std::max(opts.min_nodes, static_cast<int>(std::ceil(estimate)));
  }
  return make_polar_grid(cutoff, nodes, 0);
}

PolarGrid refine_radial(const PolarGrid& grid) {
  return make_polar_grid(2.0 * grid.cutoff, 2 * grid.size(), grid.harmonics);
}

PolarGrid densify_radial(const PolarGrid& grid) {
  return make_polar_grid(grid.cutoff, 2 * grid.size(), grid.harmonics);
}

}  // namespace qscale
