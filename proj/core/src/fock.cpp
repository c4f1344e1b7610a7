#include "qscale/fock.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>

#include "detail/text.hpp"

namespace qscale {

namespace {

// Normalized Laguerre column for fixed k = m - n >= 0:
//   g_j = sqrt(j!/(j+k)!) r^k e^{-r^2/2} L_j^{(k)}(r^2) * exp(log_weight),  j = 0..jmax,
// which is f(j + k, j). Runs the three-term recurrence on a rescaled copy
// and carries the scale in log space.
template <class Sink>
void laguerre_column(int k, int jmax, double r, double log_weight, Sink&& sink) {
  if (jmax < 0) return;
  if (r == 0.0) {
    const double diag = (k == 0) ? std::exp(log_weight) : 0.0;
    for (int j = 0; j <= jmax; ++j) sink(j, diag);
    return;
  }
  const double x = r * r;
  double log_scale = k * std::log(r) - 0.5 * x - 0.5 * std::lgamma(k + 1.0) + log_weight;
  double prev = 0.0;
  double cur = 1.0;
  auto emit = [&](int j, double s) {
    if (s == 0.0) {
      sink(j, 0.0);
      return;
    }
    const double mag = std::log(std::abs(s)) + log_scale;
    sink(j, mag < -745.0 ? 0.0 : std::copysign(std::exp(mag), s));
  };
  emit(0, cur);
  for (int j = 0; j < jmax; ++j) {
    const double next =
        ((2.0 * j + 1.0 + k - x) * cur - std::sqrt(static_cast<double>(j) * (j + k)) * prev) /
        std::sqrt((j + 1.0) * (j + 1.0 + k));
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > 1e100) {
      cur *= 1e-100;
      prev *= 1e-100;
      log_scale += 100.0 * std::log(10.0);
    } else if (mag < 1e-100 && mag > 0.0) {
      cur *= 1e100;
      prev *= 1e100;
      log_scale -= 100.0 * std::log(10.0);
    }
    emit(j + 1, cur);
  }
}

}  // namespace

FockDim::FockDim(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("FockDim: truncation dimension must be >= 2, got " + std::to_string(n));
}

TruncatedState::TruncatedState(Eigen::MatrixXcd m, double tail_mass, double tol_herm) : tail_(tail_mass) {
  if (m.rows() != m.cols()) throw std::invalid_argument("TruncatedState: matrix must be square");
  FockDim check(static_cast<int>(m.rows()));
  (void)check;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > tol_herm * scale) {
    throw std::invalid_argument("TruncatedState: matrix is not Hermitian (deviation " + std::to_string(skew) + ")");
  }
  m_ = 0.5 * (m + m.adjoint());
}

StateDesc parse_state_desc(const std::string& text) {
  auto parts = detail::split(text, ':');
  const auto& head = parts[0];
  if (head == "vacuum" && parts.size() == 1) return state::Vacuum{};
  if (head == "fock" && parts.size() == 2) {
    const int n = detail::parse_integer<int>(parts[1], "fock index");
    if (n < 0) throw std::invalid_argument("fock index must be nonnegative");
    return state::Fock{n};
  }
  if (head == "coherent" && (parts.size() == 2 || parts.size() == 3)) {
    const double re = detail::parse_double(parts[1], "coherent amplitude");
    const double im = parts.size() == 3 ? detail::parse_double(parts[2], "coherent amplitude") : 0.0;
    return state::Coherent{{re, im}};
  }
  if (head == "thermal" && parts.size() == 2) return state::Thermal{detail::parse_double(parts[1], "thermal variance")};
  if (head == "random" && parts.size() == 2) {
    return state::RandomPure{detail::parse_integer<std::uint64_t>(parts[1], "random seed")};
  }
  throw std::invalid_argument("unrecognized state descriptor '" + text + "'");
}

std::string to_string(const StateDesc& desc) {
  struct Printer {
    std::string operator()(const state::Vacuum&) const { return "vacuum"; }
    std::string operator()(const state::Fock& f) const { return "fock:" + std::to_string(f.n); }
    std::string operator()(const state::Coherent& c) const {
      std::string out = "coherent:" + detail::format_double(c.alpha.real());
      if (c.alpha.imag() != 0.0) out += ":" + detail::format_double(c.alpha.imag());
      return out;
    }
    std::string operator()(const state::Thermal& t) const { return "thermal:" + detail::format_double(t.v); }
    std::string operator()(const state::RandomPure& r) const { return "random:" + std::to_string(r.seed); }
  };
  return std::visit(Printer{}, desc);
}

TruncatedState make_state(const StateDesc& desc, FockDim dim) {
  const int n = dim.value();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);

  struct Builder {
    Eigen::MatrixXcd& m;
    int n;

    double operator()(const state::Vacuum&) const {
      m(0, 0) = 1.0;
      return 0.0;
    }
    double operator()(const state::Fock& f) const {
      if (f.n < 0 || f.n >= n) {
        throw std::invalid_argument("fock(" + std::to_string(f.n) + ") does not fit in dimension " + std::to_string(n));
      }
      m(f.n, f.n) = 1.0;
      return 0.0;
    }
    double operator()(const state::Coherent& c) const {
      Eigen::VectorXcd psi(n);
      psi(0) = std::exp(-0.5 * std::norm(c.alpha));
      for (int k = 1; k < n; ++k) psi(k) = psi(k - 1) * c.alpha / std::sqrt(static_cast<double>(k));
      const double tail = std::max(0.0, 1.0 - psi.squaredNorm());
      if (tail > kMaxCoherentTail) {
        throw std::invalid_argument("coherent state |alpha|^2 = " + std::to_string(std::norm(c.alpha)) +
                                    " needs a larger dimension than " + std::to_string(n));
      }
      if (tail > kWarnCoherentTail) {
        std::cerr << "warning: coherent state truncation tail " << tail << " at dimension " << n << "\n";
      }
      m = psi * psi.adjoint();
      return tail;
    }
    double operator()(const state::Thermal& t) const {
      if (!(t.v >= 1.0)) throw std::invalid_argument("thermal state requires v >= 1, got " + std::to_string(t.v));
      const double ratio = (t.v - 1.0) / (t.v + 1.0);
      double p = 2.0 / (1.0 + t.v);
      for (int k = 0; k < n; ++k) {
        m(k, k) = p;
        p *= ratio;
      }
      return std::pow(ratio, n);
    }
    double operator()(const state::RandomPure& r) const {
      std::mt19937_64 gen(r.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::VectorXcd psi(n);
      for (int k = 0; k < n; ++k) {
        const double re = normal(gen);
        const double im = normal(gen);
        psi(k) = cplx(re, im);
      }
      psi.normalize();
      m = psi * psi.adjoint();
      return 0.0;
    }
  };

  const double tail = std::visit(Builder{m, n}, desc);
  return TruncatedState(std::move(m), tail);
}

cplx displacement_element(int m, int n, cplx xi) {
  if (m < 0 || n < 0) throw std::invalid_argument("displacement_element: negative index");
  const int k = std::abs(m - n);
  const int j = std::min(m, n);
  double g = 0.0;
  laguerre_column(k, j, std::abs(xi), 0.0, [&](int idx, double value) {
    if (idx == j) g = value;
  });
  if (m < n && (k % 2 == 1)) g = -g;
  if (g == 0.0 || m == n) return g;
  return std::polar(g, (m - n) * std::arg(xi));
}

Eigen::MatrixXd displacement_radial(int dim, double r, double log_weight) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    laguerre_column(k, dim - 1 - k, r, log_weight, [&](int j, double value) {
      f(j + k, j) = value;
      if (k != 0) f(j, j + k) = sign * value;
    });
  }
  return f;
}

SpectralResult hermitian_spectrum(const Eigen::MatrixXcd& m, double tol_herm) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_spectrum: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > tol_herm * scale) {
    throw std::invalid_argument("hermitian_spectrum: input is not Hermitian (deviation " + std::to_string(skew) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_spectrum: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

TruncatedState parity_conjugate(const TruncatedState& rho) {
  Eigen::MatrixXcd m = rho.matrix();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if ((i + j) % 2 == 1) m(i, j) = -m(i, j);
    }
  }
  return TruncatedState(std::move(m), rho.tail_mass());
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  auto spec = hermitian_spectrum(a - b, 1e-8);
  return 0.5 * spec.eigenvalues.cwiseAbs().sum();
}

}  // namespace qscale
