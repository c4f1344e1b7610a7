#include "qscale/channels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "detail/text.hpp"
#include "qscale/errors.hpp"

namespace qscale {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_finite(double x, const char* what) { require(std::isfinite(x), std::string(what) + " must be finite"); }

void require_ordering(double s) { require(s >= -1.0 && s <= 1.0, "ordering parameter s must lie in [-1, 1]"); }

PhaseSpaceAction scaling_action(double s, double a) { return {a, s * (a * a - 1.0)}; }

// log C(n, k)
double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

ChannelSpec ChannelSpec::scaling(double s, double a) {
  require_ordering(s);
  require_finite(a, "scale a");
  return ChannelSpec(channel::Scaling{s, a});
}

ChannelSpec ChannelSpec::dual(double s, double a) {
  require_ordering(s);
  require_finite(a, "scale a");
  require(a != 0.0, "dual scaling map needs a != 0");
  return ChannelSpec(channel::DualScaling{s, a});
}

ChannelSpec ChannelSpec::noise(double b) {
  require_finite(b, "noise b");
  return ChannelSpec(channel::ClassicalNoise{b});
}

ChannelSpec ChannelSpec::attenuator(double kappa) {
  require(kappa != 0.0 && std::abs(kappa) <= 1.0, "quantum-limited attenuator needs 0 < |kappa| <= 1");
  return ChannelSpec(channel::QLAttenuator{kappa});
}

ChannelSpec ChannelSpec::amplifier(double kappa) {
  require(std::abs(kappa) >= 1.0 && std::isfinite(kappa), "quantum-limited amplifier needs |kappa| >= 1");
  return ChannelSpec(channel::QLAmplifier{kappa});
}

ChannelSpec ChannelSpec::noisy_attenuator(double kappa, double b) {
  require(std::abs(kappa) <= 1.0, "noisy attenuator needs |kappa| <= 1");
  require_finite(b, "noise b");
  return ChannelSpec(channel::NoisyAttenuator{kappa, b});
}

ChannelSpec ChannelSpec::noisy_amplifier(double kappa, double b) {
  require(std::abs(kappa) >= 1.0 && std::isfinite(kappa), "noisy amplifier needs |kappa| >= 1");
  require_finite(b, "noise b");
  return ChannelSpec(channel::NoisyAmplifier{kappa, b});
}

ChannelSpec ChannelSpec::compose(std::vector<ChannelSpec> maps) {
  require(!maps.empty(), "composition needs at least one map");
  return ChannelSpec(Compose{std::move(maps)});
}

bool operator==(const ChannelSpec& x, const ChannelSpec& y) {
  if (x.v_.index() != y.v_.index()) return false;
  return std::visit(
      overloaded{
          [&](const channel::Scaling& a) {
            const auto& b = std::get<channel::Scaling>(y.v_);
            return a.s == b.s && a.a == b.a;
          },
          [&](const channel::DualScaling& a) {
            const auto& b = std::get<channel::DualScaling>(y.v_);
            return a.s == b.s && a.a == b.a;
          },
          [&](const channel::ClassicalNoise& a) { return a.b == std::get<channel::ClassicalNoise>(y.v_).b; },
          [&](const channel::QLAttenuator& a) { return a.kappa == std::get<channel::QLAttenuator>(y.v_).kappa; },
          [&](const channel::QLAmplifier& a) { return a.kappa == std::get<channel::QLAmplifier>(y.v_).kappa; },
          [&](const channel::NoisyAttenuator& a) {
            const auto& b = std::get<channel::NoisyAttenuator>(y.v_);
            return a.kappa == b.kappa && a.b == b.b;
          },
          [&](const channel::NoisyAmplifier& a) {
            const auto& b = std::get<channel::NoisyAmplifier>(y.v_);
            return a.kappa == b.kappa && a.b == b.b;
          },
          [&](const Compose& a) { return a.maps == std::get<Compose>(y.v_).maps; },
      },
      x.v_);
}

namespace {

ChannelSpec parse_single(std::string_view text) {
  using detail::parse_double;
  const auto parts = detail::split(text, ':');
  const std::string_view head = parts.front();
  auto arity = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
      throw std::invalid_argument("wrong number of parameters in channel '" + std::string(text) + "'");
    }
  };
  if (head == "scale") {
    arity(2, 2);
    return ChannelSpec::scaling(parse_double(parts[1], "s"), parse_double(parts[2], "a"));
  }
  if (head == "dual") {
    arity(2, 2);
    return ChannelSpec::dual(parse_double(parts[1], "s"), parse_double(parts[2], "a"));
  }
  if (head == "noise") {
    arity(1, 1);
    return ChannelSpec::noise(parse_double(parts[1], "b"));
  }
  if (head == "att") {
    arity(1, 2);
    const double kappa = parse_double(parts[1], "kappa");
    if (parts.size() == 2) return ChannelSpec::attenuator(kappa);
    return ChannelSpec::noisy_attenuator(kappa, parse_double(parts[2], "b"));
  }
  if (head == "amp") {
    arity(1, 2);
    const double kappa = parse_double(parts[1], "kappa");
    if (parts.size() == 2) return ChannelSpec::amplifier(kappa);
    return ChannelSpec::noisy_amplifier(kappa, parse_double(parts[2], "b"));
  }
  throw std::invalid_argument("unknown channel '" + std::string(text) + "'");
}

void print(const ChannelSpec& spec, std::string& out) {
  using detail::format_double;
  std::visit(overloaded{
                 [&](const channel::Scaling& m) { out += "scale:" + format_double(m.s) + ":" + format_double(m.a); },
                 [&](const channel::DualScaling& m) { out += "dual:" + format_double(m.s) + ":" + format_double(m.a); },
                 [&](const channel::ClassicalNoise& m) { out += "noise:" + format_double(m.b); },
                 [&](const channel::QLAttenuator& m) { out += "att:" + format_double(m.kappa); },
                 [&](const channel::QLAmplifier& m) { out += "amp:" + format_double(m.kappa); },
                 [&](const channel::NoisyAttenuator& m) {
                   out += "att:" + format_double(m.kappa) + ":" + format_double(m.b);
                 },
                 [&](const channel::NoisyAmplifier& m) {
                   out += "amp:" + format_double(m.kappa) + ":" + format_double(m.b);
                 },
                 [&](const Compose& c) {
                   for (std::size_t i = 0; i < c.maps.size(); ++i) {
                     if (i > 0) out += '*';
                     print(c.maps[i], out);
                   }
                 },
             },
             spec.variant());
}

}  // namespace

ChannelSpec parse_channel(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty channel description");
  const auto factors = detail::split(text, '*');
  if (factors.size() == 1) return parse_single(factors.front());
  std::vector<ChannelSpec> maps;
  maps.reserve(factors.size());
  for (auto f : factors) maps.push_back(parse_single(f));
  return ChannelSpec::compose(std::move(maps));
}

std::string to_string(const ChannelSpec& spec) {
  std::string out;
  print(spec, out);
  return out;
}

PhaseSpaceAction action_of(const ChannelSpec& spec) {
  return std::visit(overloaded{
                        [](const channel::Scaling& m) { return scaling_action(m.s, m.a); },
                        [](const channel::DualScaling& m) { return scaling_action(-m.s, 1.0 / m.a); },
                        [](const channel::ClassicalNoise& m) { return PhaseSpaceAction{1.0, -m.b}; },
                        [](const channel::QLAttenuator& m) { return scaling_action(1.0, m.kappa); },
                        [](const channel::QLAmplifier& m) { return scaling_action(-1.0, m.kappa); },
                        [](const channel::NoisyAttenuator& m) { return PhaseSpaceAction{m.kappa, -m.b}; },
                        [](const channel::NoisyAmplifier& m) { return PhaseSpaceAction{m.kappa, -m.b}; },
                        [](const Compose& c) {
                          PhaseSpaceAction acc;
                          for (auto it = c.maps.rbegin(); it != c.maps.rend(); ++it) acc = acc.then(action_of(*it));
                          return acc;
                        },
                    },
                    spec.variant());
}

bool is_unitary(const PhaseSpaceAction& action, double tol) {
  return std::abs(std::abs(action.scale) - 1.0) <= tol && std::abs(action.gauss) <= tol;
}

CharFnGrid apply_charfn(const ChannelSpec& spec, const CharFnGrid& chi) {
  return transform_charfn(chi, action_of(spec));
}

TruncatedState apply_to_state(const ChannelSpec& spec, const TruncatedState& rho, const QuadratureOptions& opts) {
  const CharFnGrid chi = apply_charfn(spec, char_fn(rho, OrderingParam(0.0)));
  return reconstruct_state(chi, rho.dim(), opts);
}

ChannelSpec decompose(const channel::Scaling& scaling) {
  return ChannelSpec::compose(
      {ChannelSpec::noise(scaling.s * (1.0 - scaling.a * scaling.a)), ChannelSpec::scaling(0.0, scaling.a)});
}

double KrausSet::completeness_defect(int levels) const {
  if (operators.empty()) return 1.0;
  const int n = static_cast<int>(operators.front().amplitudes.rows());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& op : operators) sum += op.amplitudes.adjoint() * op.amplitudes;
  const int l = std::min(levels, n);
  return (sum.topLeftCorner(l, l) - Eigen::MatrixXcd::Identity(l, l)).cwiseAbs().maxCoeff();
}

KrausSet kraus_attenuator(double kappa, FockDim dim) {
  if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("kraus_attenuator needs 0 < kappa <= 1");
  const int n = dim.value();
  const double loss = 1.0 - kappa * kappa;
  KrausSet out{{}, ChannelSpec::attenuator(kappa)};
  for (int k = 0; k < n; ++k) {
    if (k > 0 && loss == 0.0) break;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int m = k; m < n; ++m) {
      const double log_amp = 0.5 * log_binomial(m, k) + (k > 0 ? 0.5 * k * std::log(loss) : 0.0) +
                             (m > k ? (m - k) * std::log(kappa) : 0.0);
      a(m - k, m) = std::exp(log_amp);
    }
    out.operators.push_back({dim, std::move(a)});
  }
  return out;
}

KrausSet kraus_amplifier(double kappa, FockDim dim) {
  if (!(kappa >= 1.0 && std::isfinite(kappa))) throw std::invalid_argument("kraus_amplifier needs kappa >= 1");
  KrausSet base = kraus_attenuator(1.0 / kappa, dim);
  // sum_k |<k|A_k^dagger|0>|^2 = sum_k x^k with x = 1 - kappa^{-2}
  const double x = 1.0 - 1.0 / (kappa * kappa);
  const double scalar = std::sqrt(1.0 - x);
  KrausSet out{{}, ChannelSpec::amplifier(kappa)};
  for (auto& op : base.operators) out.operators.push_back({dim, scalar * op.amplitudes.adjoint()});
  return out;
}

KrausSet kraus_set(const ChannelSpec& spec, FockDim dim) {
  const auto& v = spec.variant();
  if (const auto* m = std::get_if<channel::QLAttenuator>(&v); m && m->kappa > 0.0) {
    return kraus_attenuator(m->kappa, dim);
  }
  if (const auto* m = std::get_if<channel::QLAmplifier>(&v); m && m->kappa > 0.0) {
    return kraus_amplifier(m->kappa, dim);
  }
  if (const auto* m = std::get_if<channel::ClassicalNoise>(&v); m && m->b < 0.0) {
    throw NoKrausRepresentation("classical noise with b < 0 is not completely positive and has no Kraus set");
  }
  throw NoKrausRepresentation("no Kraus construction for '" + to_string(spec) + "'");
}

Eigen::MatrixXcd apply_kraus(const KrausSet& kraus, const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& op : kraus.operators) out += op.amplitudes * rho * op.amplitudes.adjoint();
  return out;
}

TransferTensor::TransferTensor(int in_dim, int out_dim)
    : in_(in_dim), out_(out_dim), data_(static_cast<std::size_t>(in_dim) * in_dim * out_dim, 0.0) {
  if (in_dim < 1 || out_dim < 1) throw std::invalid_argument("TransferTensor: dimensions must be positive");
}

cplx TransferTensor::operator()(int n, int q, int m, int p) const {
  if (n - q != m - p) return 0.0;
  return slot(n, m, p);
}

namespace {

// T[n][n + p - m][m][p] = 2 (-1)^{m-p} sgn^{p-m} int r e^{gauss r^2/2} f(p, m)(|scale| r) f(n, q)(r) dr
TransferTensor transfer_on(const PhaseSpaceAction& action, int in_dim, int out_dim, const PolarGrid& grid) {
  TransferTensor t(in_dim, out_dim);
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid.nodes[i];
    const double w = 2.0 * grid.weights[i] * r;
    const Eigen::MatrixXd fs = displacement_radial(in_dim, std::abs(action.scale) * r, 0.5 * action.gauss * r * r);
    const Eigen::MatrixXd fo = displacement_radial(out_dim, r);
    for (int m = 0; m < in_dim; ++m) {
      for (int p = 0; p < in_dim; ++p) {
        const int k = p - m;
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        if (action.scale < 0.0 && k % 2 != 0) sign = -sign;
        const double c = w * sign * fs(p, m);
        if (c == 0.0) continue;
        const int n_lo = std::max(0, -k);
        const int n_hi = std::min(out_dim, out_dim - k);
        for (int n = n_lo; n < n_hi; ++n) t.slot(n, m, p) += c * fo(n, n + k);
      }
    }
  }
  return t;
}

double max_diff(const TransferTensor& a, const TransferTensor& b) {
  double worst = 0.0;
  for (int m = 0; m < a.in_dim(); ++m)
    for (int p = 0; p < a.in_dim(); ++p)
      for (int n = 0; n < a.out_dim(); ++n) worst = std::max(worst, std::abs(a.slot(n, m, p) - b.slot(n, m, p)));
  return worst;
}

double max_entry(const TransferTensor& a) {
  double worst = 0.0;
  for (int m = 0; m < a.in_dim(); ++m)
    for (int p = 0; p < a.in_dim(); ++p)
      for (int n = 0; n < a.out_dim(); ++n) worst = std::max(worst, std::abs(a.slot(n, m, p)));
  return worst;
}

}  // namespace

TransferTensor transfer_tensor(const PhaseSpaceAction& action, int in_dim, int out_dim, const QuadratureOptions& opts) {
  if (!(action.exponent() < 0.0)) {
    std::ostringstream os;
    os << "transfer_tensor: image exponent c = " << action.exponent() << " >= 0";
    throw DivergentReconstruction(os.str(), action.exponent());
  }
  const PolarGrid grid = plan_radial({in_dim, action.scale, action.gauss, out_dim, 0.0}, opts);
  TransferTensor t = transfer_on(action, in_dim, out_dim, grid);
  if (opts.verify) {
    const double shift = std::max(max_diff(t, transfer_on(action, in_dim, out_dim, refine_radial(grid))),
                                  max_diff(t, transfer_on(action, in_dim, out_dim, densify_radial(grid))));
    if (shift > opts.verify_tol * std::max(1.0, max_entry(t))) {
      std::ostringstream os;
      os << "transfer_tensor: quadrature doubling shifted an entry by " << shift;
      throw QuadratureUnderresolved(os.str(), shift);
    }
  }
  return t;
}

TransferTensor transfer_tensor(const ChannelSpec& spec, int in_dim, int out_dim, const QuadratureOptions& opts) {
  return transfer_tensor(action_of(spec), in_dim, out_dim, opts);
}

double ScalingMatrixReduction::residual() const {
  Eigen::Matrix2d target = a * Eigen::Matrix2d::Identity();
  if (sign < 0) target(1, 1) = -a;
  return (S1 * K * S2 - target).cwiseAbs().maxCoeff();
}

ScalingMatrixReduction reduce_scaling_matrix(const Eigen::Matrix2d& K) {
  const double det = K.determinant();
  if (!(std::abs(det) > 1e-12)) throw std::invalid_argument("reduce_scaling_matrix: K is singular");
  ScalingMatrixReduction out;
  out.K = K;
  out.S1 = Eigen::Matrix2d::Identity();
  out.a = std::sqrt(std::abs(det));
  out.sign = det > 0.0 ? 1 : -1;
  out.S2 = out.a * K.inverse();
  if (out.sign < 0) out.S2 = out.S2 * Eigen::Vector2d(1.0, -1.0).asDiagonal();
  return out;
}

}  // namespace qscale
