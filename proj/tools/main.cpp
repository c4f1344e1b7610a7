// qscale: phase diagrams, positivity certificates, Choi spectra and the
// Planck-overlap demonstration for phase-space scaling maps.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qscale/certify.hpp"
#include "qscale/channels.hpp"
#include "qscale/errors.hpp"
#include "qscale/gaussian.hpp"
#include "qscale/phasediagram.hpp"
#include "qscale/serialize.hpp"

namespace {

constexpr int kExitMismatch = 2;
constexpr int kExitUsage = 64;

struct Global {
  std::optional<int> dim;
  int radial_nodes = 0;
  double cutoff = 0.0;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out;
  std::string format = "csv";

  qscale::QuadratureOptions quad() const {
    qscale::QuadratureOptions q;
    q.nodes = radial_nodes;
    q.cutoff = cutoff;
    q.verify_tol = tol;
    return q;
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
auto usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
};

void print_matrix(std::ostream& os, const char* name, const Eigen::Matrix2d& m) {
  os << name << " = [[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", " << m(1, 1) << "]]\n";
}

std::string witness_line(const std::optional<qscale::Witness>& w) {
  if (!w) return "witness=none";
  std::ostringstream os;
  os << std::setprecision(10) << "witness=" << qscale::to_string(w->kind) << " input=" << w->input;
  if (!w->partner.empty()) os << " partner=" << w->partner;
  os << " value=" << w->value;
  return os.str();
}

int cmd_scan(const Global& g, const std::string& kind, const std::string& xs, const std::string& ys,
             double band, int stride, int choi_dim, double tmsv_r) {
  qscale::SweepConfig config = usage([&] {
    qscale::SweepConfig c;
    if (kind == "scaling") {
      c.kind = qscale::SweepKind::scaling;
    } else {
      c.kind = qscale::SweepKind::noisy;
      c.family = qscale::parse_family(kind);
    }
    c.x = qscale::Range::parse(xs);
    c.y = qscale::Range::parse(ys);
    c.band_width = band;
    c.subsample_stride = stride;
    c.choi_dim = choi_dim;
    c.tmsv_r = tmsv_r;
    c.dim = g.dim.value_or(qscale::FockDim::kDefault);
    c.seed = g.seed;
    c.jobs = g.jobs;
    c.quad = g.quad();
    c.validate();
    return c;
  });

  const qscale::SweepResult result = qscale::sweep(config);
  Sink sink(g.out);
  if (g.format == "json") {
    qscale::write_json(sink.stream(), result);
  } else {
    qscale::write_csv(sink.stream(), result);
  }

  std::ostream& log = sink.to_file() ? std::cout : std::cerr;
  const auto& sum = result.summary;
  log << "points=" << sum.points << " certified=" << sum.certified << " mismatches=" << sum.mismatches << '\n';
  if (config.kind == qscale::SweepKind::noisy) {
    log << std::setprecision(6);
    for (int i = 0; i < config.x.count; ++i) {
      log << "kappa=" << config.x.at(i) << " cp_edge=" << sum.cp_edge[i] << " eb_edge=" << sum.eb_edge[i] << '\n';
    }
  }
  for (const auto& f : sum.failures) log << "MISMATCH " << f << '\n';
  return sum.mismatches == 0 ? 0 : kExitMismatch;
}

int cmd_certify(const Global& g, const std::string& channel, const std::string& state, int choi_dim) {
  const auto spec = usage([&] { return qscale::parse_channel(channel); });
  const auto desc = usage([&] { return qscale::parse_state_desc(state); });
  const qscale::FockDim dim(g.dim.value_or(qscale::FockDim::kDefault));
  qscale::AssessOptions opts;
  opts.choi_dim = choi_dim;
  opts.quad = g.quad();
  const auto result = qscale::assess_channel(spec, {qscale::make_probe(desc, dim)}, opts);

  std::cout << "channel=" << qscale::to_string(spec) << " analytic=" << qscale::to_string(result.analytic)
            << " numeric=" << qscale::to_string(result.numeric) << ' ' << witness_line(result.witness) << '\n';
  nlohmann::json j{{"channel", qscale::to_string(spec)},
                   {"state", qscale::to_string(desc)},
                   {"analytic", qscale::to_string(result.analytic)},
                   {"numeric", qscale::to_string(result.numeric)},
                   {"witness", result.witness ? qscale::to_json(*result.witness) : nlohmann::json(nullptr)},
                   {"choi_min", std::isfinite(result.choi_min) ? nlohmann::json(result.choi_min) : nlohmann::json()}};
  Sink sink(g.out);
  sink.stream() << j.dump(2) << '\n';
  return result.analytic == result.numeric ? 0 : kExitMismatch;
}

int cmd_choi(const Global& g, const std::string& channel, int out_dim) {
  const auto spec = usage([&] { return qscale::parse_channel(channel); });
  const int d = g.dim.value_or(12);
  if (d < 1) throw UsageError("--dim must be positive");
  const auto c = qscale::choi(spec, d, out_dim, g.quad());
  std::cout << std::setprecision(10) << "channel=" << qscale::to_string(spec) << " d=" << c.d
            << " out_dim=" << c.out_dim << " trace=" << c.trace << " min_eigenvalue=" << c.min_eigenvalue << '\n';
  if (g.format == "json" || !g.out.empty()) {
    Sink sink(g.out);
    sink.stream() << qscale::to_json(c).dump(2) << '\n';
  }
  return 0;
}

int cmd_planck(const Global& g, double a2) {
  const double value = usage([&] { return qscale::planck_overlap(a2, g.quad()); });
  std::cout << std::setprecision(12) << value << '\n';
  return 0;
}

int cmd_reduce_k(const Global& g, const std::string& text) {
  const Eigen::Matrix2d k = usage([&] {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != 4) throw std::invalid_argument("--matrix needs four comma-separated entries k11,k12,k21,k22");
    Eigen::Matrix2d m;
    m << v[0], v[1], v[2], v[3];
    return m;
  });
  const auto r = usage([&] { return qscale::reduce_scaling_matrix(k); });
  if (g.format == "json") {
    Sink sink(g.out);
    sink.stream() << qscale::to_json(r).dump(2) << '\n';
    return 0;
  }
  std::cout << std::setprecision(12);
  print_matrix(std::cout, "S1", r.S1);
  print_matrix(std::cout, "S2", r.S2);
  std::cout << "a = " << r.a << "\nsign = " << (r.sign > 0 ? "+1" : "-1") << "\nresidual = " << r.residual()
            << "\ndet S1 = " << r.S1.determinant() << "\ndet S2 = " << r.S2.determinant() << '\n';
  return 0;
}

int cmd_thresholds(const Global& g, const std::string& family, double kappa, double b) {
  const auto r = usage([&] { return qscale::threshold_report(qscale::parse_family(family), kappa, b); });
  Sink sink(g.out);
  sink.stream() << qscale::to_json(r).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity and complete positivity of phase-space scaling maps"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--dim", g.dim, "Fock truncation N (choi: probe dimension d)")->check(CLI::PositiveNumber);
  app.add_option("--radial-nodes", g.radial_nodes, "Radial quadrature nodes (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--cutoff", g.cutoff, "Radial cutoff R (0 = automatic)")->check(CLI::NonNegativeNumber);
  app.add_option("--tol", g.tol, "Quadrature doubling tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for random probe states");
  app.add_option("--jobs", g.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (stdout when omitted)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::string kind;
  std::string s_range = "-1:1:21";
  std::string a_range = "0.25:2:21";
  std::string kappa_range;
  std::string b_range;
  double band = 0.02;
  int stride = 4;
  int choi_dim = 12;
  double tmsv_r = 0.5;
  auto* scan = app.add_subcommand("scan", "Sweep a phase diagram and cross-check analytic and numeric verdicts");
  scan->add_option("kind", kind, "scaling | amp | att")->required()->check(CLI::IsMember({"scaling", "amp", "att"}));
  scan->add_option("--s", s_range, "Ordering range lo:hi:count (scaling)");
  scan->add_option("--a", a_range, "Scale range lo:hi:count (scaling)");
  scan->add_option("--kappa", kappa_range, "Kappa range lo:hi:count (amp, att)");
  scan->add_option("--b", b_range, "Noise range lo:hi:count (amp, att)");
  scan->add_option("--band", band, "Boundary band width")->check(CLI::PositiveNumber);
  scan->add_option("--stride", stride, "Full certification every stride-th point (0 = off)")
      ->check(CLI::NonNegativeNumber);
  scan->add_option("--choi-dim", choi_dim, "Choi probe dimension")->check(CLI::PositiveNumber);
  scan->add_option("--tmsv-r", tmsv_r, "Squeezing of the two-mode probe")->check(CLI::NonNegativeNumber);

  std::string channel;
  std::string state = "vacuum";
  auto* certify = app.add_subcommand("certify", "Analytic and numeric verdict for one channel");
  certify->add_option("--channel", channel, "Channel, e.g. scale:0:0.5 or att:0.6:0.5*amp:1.2")->required();
  certify->add_option("--state", state, "Probe state: vacuum | fock:n | coherent:re[:im] | thermal:v | random:seed");
  certify->add_option("--choi-dim", choi_dim, "Choi probe dimension")->check(CLI::PositiveNumber);

  int out_dim = 0;
  auto* choi = app.add_subcommand("choi", "Choi-matrix spectrum on a truncated probe");
  choi->add_option("--channel", channel, "Channel description")->required();
  choi->add_option("--out-dim", out_dim, "Output truncation (defaults to --dim)")->check(CLI::NonNegativeNumber);

  double a2 = 2.0;
  auto* planck = app.add_subcommand("planck", "Overlap of |1><1| and |0><0| Wigner functions at two Planck constants");
  planck->add_option("--a2", a2, "Ratio of the two Planck constants")->required();

  std::string matrix;
  auto* reduce = app.add_subcommand("reduce-k", "Symplectic reduction of a 2x2 scaling matrix");
  reduce->add_option("--matrix", matrix, "k11,k12,k21,k22")->required();

  std::string family;
  double kappa = 1.0;
  double b = 0.0;
  auto* thresholds = app.add_subcommand("thresholds", "Closed-form CP and EB/NB thresholds of a noisy channel");
  thresholds->add_option("--family", family, "amp | att")->required();
  thresholds->add_option("--kappa", kappa, "Scale")->required();
  thresholds->add_option("--b", b, "Noise")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*scan) {
      if (kind == "scaling") return cmd_scan(g, kind, s_range, a_range, band, stride, choi_dim, tmsv_r);
      if (kappa_range.empty() || b_range.empty()) throw UsageError("scan amp|att needs --kappa and --b");
      return cmd_scan(g, kind, kappa_range, b_range, band, stride, choi_dim, tmsv_r);
    }
    if (*certify) return cmd_certify(g, channel, state, choi_dim);
    if (*choi) return cmd_choi(g, channel, out_dim);
    if (*planck) return cmd_planck(g, a2);
    if (*reduce) return cmd_reduce_k(g, matrix);
    if (*thresholds) return cmd_thresholds(g, family, kappa, b);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const qscale::DivergentReconstruction& e) {
    std::cerr << "divergent: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
