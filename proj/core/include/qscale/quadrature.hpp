#pragma once

#include <vector>

namespace qscale {

/// Gauss-Legendre nodes r_i and weights w_i on [0, cutoff] together with the
/// number of angular harmonics kept by harmonic-resolved samples.
struct PolarGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  int harmonics = 0;
  double cutoff = 0.0;

  int size() const { return static_cast<int>(nodes.size()); }
};

PolarGrid make_polar_grid(double cutoff, int radial_nodes, int harmonics);

/// Default sampling grid for characteristic functions of states in dimension n.
PolarGrid default_polar_grid(int n);

/// Knobs for the radial integrals behind reconstruction and pairing. Zero
/// cutoff / nodes mean "choose from the integrand envelope".
struct QuadratureOptions {
  double cutoff = 0.0;
  int nodes = 0;
  int min_nodes = 200;
  /// Re-run with doubled cutoff and doubled node count and compare.
  bool verify = true;
  double verify_tol = 1e-8;
};

/// Integrand envelope for a radial integral of the form
///   int r e^{gauss r^2/2} f_src(|scale| r) * second(r) dr,
/// where f_src are displacement radial factors of a dimension-src_dim source and
/// `second` is either another set of radial factors (second_dim > 0) or a
/// bounded oscillatory kernel (second_dim == 0, e.g. a Bessel function whose
/// argument reaches `oscillation` * r).
struct RadialIntegrand {
  int src_dim = 2;
  double scale = 1.0;
  double gauss = 0.0;
  int second_dim = 2;
  double oscillation = 0.0;
};

/// Picks a cutoff where the envelope has dropped below 1e-18 relative and a
/// node count that resolves the oscillations of both factors.
PolarGrid plan_radial(const RadialIntegrand& integrand, const QuadratureOptions& opts);

/// Same integrand with both cutoff and node count doubled.
PolarGrid refine_radial(const PolarGrid& grid);

/// Same cutoff, doubled node count.
PolarGrid densify_radial(const PolarGrid& grid);

}  // namespace qscale
