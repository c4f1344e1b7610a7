#include "qscale/certify.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>

#include "qscale/errors.hpp"

namespace qscale {

std::string to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::output_eigen:
      return "output_eigen";
    case WitnessKind::pairing:
      return "pairing";
    case WitnessKind::choi_eigen:
      return "choi_eigen";
    case WitnessKind::gaussian_scalar:
      return "gaussian_scalar";
  }
  return "unknown";
}

Probe make_probe(const StateDesc& desc, FockDim dim) { return {desc, make_state(desc, dim)}; }

std::vector<Probe> standard_probes(FockDim dim, int random_count, std::uint64_t seed) {
  std::vector<Probe> out;
  out.push_back(make_probe(state::Vacuum{}, dim));
  for (int n = 1; n <= 6 && n < dim.value(); ++n) out.push_back(make_probe(state::Fock{n}, dim));
  if (dim.value() >= 20) out.push_back(make_probe(state::Coherent{cplx(1.0, 0.0)}, dim));
  for (int i = 0; i < random_count; ++i) out.push_back(make_probe(state::RandomPure{seed + i}, dim));
  return out;
}

std::optional<Witness> gaussian_scalar_witness(const PhaseSpaceAction& action, double tol) {
  const double forward = action.vacuum_image_variance();
  if (forward < 1.0 - tol) return Witness{WitnessKind::gaussian_scalar, "vacuum", "", forward - 1.0, tol};
  if (action.scale != 0.0) {
    const double dual = action.adjoint_kernel().vacuum_image_variance();
    if (dual < 1.0 - tol) return Witness{WitnessKind::gaussian_scalar, "vacuum", "adjoint", dual - 1.0, tol};
  }
  return std::nullopt;
}

namespace {

// Tr(Phi(rho) sigma) = scale^{-2} Tr(rho Phi~(sigma)): the two arrangements are the
// same integral under r -> r / |scale|; the contracting side decays slowest.
double arranged_pairing(const PhaseSpaceAction& action, const TruncatedState& rho, const TruncatedState& sigma,
                        const QuadratureOptions& opts) {
  const double m = std::abs(action.scale);
  if (m > 0.0 && m < 1.0) {
    return trace_pairing(sigma, action.adjoint_kernel(), rho, opts) / (action.scale * action.scale);
  }
  return trace_pairing(rho, action, sigma, opts);
}

std::optional<Witness> eigen_route(const PhaseSpaceAction& action, const std::vector<Probe>& probes,
                                   const CertifyOptions& opts) {
  // probes of equal dimension share one batched quadrature
  std::size_t start = 0;
  while (start < probes.size()) {
    const int dim = probes[start].state.dim().value();
    std::size_t stop = start;
    std::vector<Eigen::MatrixXcd> sources;
    while (stop < probes.size() && probes[stop].state.dim().value() == dim) {
      sources.push_back(probes[stop].state.matrix());
      ++stop;
    }
    const auto images = weyl_images(std::span<const Eigen::MatrixXcd>(sources), action, dim, opts.quad);
    for (std::size_t i = 0; i < images.size(); ++i) {
      const Eigen::MatrixXcd h = 0.5 * (images[i] + images[i].adjoint());
      const double lowest = hermitian_spectrum(h).eigenvalues(0);
      if (lowest < -opts.tol_pos) {
        return Witness{WitnessKind::output_eigen, to_string(probes[start + i].desc), "", lowest, opts.tol_pos};
      }
    }
    start = stop;
  }
  return std::nullopt;
}

std::optional<Witness> pairing_route(const PhaseSpaceAction& action, const std::vector<Probe>& probes,
                                     const std::vector<Probe>& partners, const CertifyOptions& opts) {
  for (const auto& rho : probes) {
    for (const auto& sigma : partners) {
      const double value = arranged_pairing(action, rho.state, sigma.state, opts.quad);
      if (value < -opts.tol_pos) {
        return Witness{WitnessKind::pairing, to_string(rho.desc), to_string(sigma.desc), value, opts.tol_pos};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Witness> positivity_probe(const ChannelSpec& spec, const std::vector<Probe>& probes,
                                        const CertifyOptions& opts) {
  const PhaseSpaceAction action = action_of(spec);
  if (probes.empty()) return std::nullopt;
  if (action.exponent() < 0.0) {
    try {
      if (auto w = eigen_route(action, probes, opts)) return w;
      return std::nullopt;
    } catch (const QuadratureUnderresolved&) {
    }
  }
  if (action.exponent() < 1.0) {
    const std::vector<Probe> partners =
        opts.partners.empty() ? standard_probes(probes.front().state.dim()) : opts.partners;
    try {
      if (auto w = pairing_route(action, probes, partners, opts)) return w;
    } catch (const QuadratureUnderresolved&) {
    }
  }
  return gaussian_scalar_witness(action);
}

double pairing_probe(const ChannelSpec& spec, const TruncatedState& rho, const TruncatedState& sigma,
                     const QuadratureOptions& opts) {
  return arranged_pairing(action_of(spec), rho, sigma, opts);
}

DualityReport duality_check(double s, double a, int trials, std::uint64_t seed, FockDim dim,
                            const QuadratureOptions& opts) {
  if (a == 0.0) throw std::invalid_argument("duality_check needs a != 0");
  const PhaseSpaceAction forward = action_of(ChannelSpec::scaling(s, a));
  const PhaseSpaceAction dual = action_of(ChannelSpec::dual(s, a));
  std::mt19937_64 rng(seed);
  DualityReport report;
  report.trials = trials;
  report.min_forward = report.min_dual = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const TruncatedState rho = make_state(state::RandomPure{rng()}, dim);
    const TruncatedState sigma = make_state(state::RandomPure{rng()}, dim);
    const double lhs = a * a * trace_pairing(rho, forward, sigma, opts);
    const double rhs = trace_pairing(sigma, dual, rho, opts);
    report.max_difference = std::max(report.max_difference, std::abs(lhs - rhs));
    report.min_forward = std::min(report.min_forward, lhs);
    report.min_dual = std::min(report.min_dual, rhs);
    if (std::abs(lhs) > 1e-8 && std::abs(rhs) > 1e-8 && (lhs < 0.0) != (rhs < 0.0)) report.signs_consistent = false;
  }
  return report;
}

ChoiMatrix choi(const ChannelSpec& spec, int d, int out_dim, const QuadratureOptions& opts) {
  if (d < 1) throw std::invalid_argument("choi: probe dimension must be positive");
  if (out_dim <= 0) out_dim = d;
  const TransferTensor t = transfer_tensor(spec, d, out_dim, opts);
  ChoiMatrix c;
  c.d = d;
  c.out_dim = out_dim;
  c.J = Eigen::MatrixXd::Zero(out_dim * d, out_dim * d);
  for (int n = 0; n < out_dim; ++n)
    for (int m = 0; m < d; ++m)
      for (int p = 0; p < d; ++p) {
        const int q = n + p - m;
        if (q < 0 || q >= out_dim) continue;
        c.J(n * d + m, q * d + p) = t.slot(n, m, p);
      }
  c.trace = c.J.trace();
  c.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int k = -(d - 1); k <= out_dim - 1; ++k) {
    std::vector<int> idx;
    for (int m = 0; m < d; ++m) {
      const int n = m + k;
      if (n >= 0 && n < out_dim) idx.push_back(n * d + m);
    }
    const int size = static_cast<int>(idx.size());
    Eigen::MatrixXd block(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) block(i, j) = c.J(idx[i], idx[j]);
    block = 0.5 * (block + block.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues().minCoeff();
    c.block_min.push_back(lowest);
    c.min_eigenvalue = std::min(c.min_eigenvalue, lowest);
  }
  return c;
}

double cp_bracket(NoisyFamily family, double a, double b_lo, double b_hi, double tol_b, const BracketOptions& opts) {
  auto spec = [&](double b) {
    return family == NoisyFamily::attenuator ? ChannelSpec::noisy_attenuator(a, b) : ChannelSpec::noisy_amplifier(a, b);
  };
  auto negative = [&](double b) { return choi(spec(b), opts.d, opts.d, opts.quad).min_eigenvalue < -opts.negativity; };
  if (!negative(b_lo) || negative(b_hi)) {
    throw std::invalid_argument("cp_bracket: Choi minimum eigenvalue does not change sign on the bracket");
  }
  while (b_hi - b_lo > tol_b) {
    const double mid = 0.5 * (b_lo + b_hi);
    (negative(mid) ? b_lo : b_hi) = mid;
  }
  return 0.5 * (b_lo + b_hi);
}

double planck_overlap(double a_sq, const QuadratureOptions& opts) {
  if (!(a_sq > 0.0)) throw std::invalid_argument("planck_overlap needs a_sq > 0");
  const FockDim dim(2);
  return pairing_probe(ChannelSpec::scaling(0.0, std::sqrt(a_sq)), make_state(state::Fock{1}, dim),
                       make_state(state::Vacuum{}, dim), opts);
}

}  // namespace qscale
