#include "qscale/phasediagram.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "detail/text.hpp"
#include "qscale/serialize.hpp"

namespace qscale {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CP_unitary:
      return "CP_unitary";
    case Verdict::CP:
      return "CP";
    case Verdict::NP:
      return "NP";
    case Verdict::EB_NB:
      return "EB_NB";
    case Verdict::pinch_vacuum:
      return "pinch_vacuum";
    case Verdict::pinch_NP:
      return "pinch_NP";
    case Verdict::P_not_CP:
      return "P_not_CP";
    case Verdict::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

Verdict parse_verdict(const std::string& text) {
  for (Verdict v : {Verdict::CP_unitary, Verdict::CP, Verdict::NP, Verdict::EB_NB, Verdict::pinch_vacuum,
                    Verdict::pinch_NP, Verdict::P_not_CP, Verdict::undetermined}) {
    if (to_string(v) == text) return v;
  }
  throw std::invalid_argument("unknown verdict '" + text + "'");
}

std::string to_string(Region r) {
  switch (r) {
    case Region::r1:
      return "1";
    case Region::r2:
      return "2";
    case Region::r3:
      return "3";
    case Region::r4:
      return "4";
    case Region::boundary:
      return "boundary";
    case Region::none:
      return "none";
  }
  return "none";
}

ClassificationRecord classify_scaling(double s, double a) {
  ClassificationRecord rec;
  rec.params = ScalingPoint{s, a};
  const double m = std::abs(a);
  rec.threshold_distance = std::min(std::abs(m - 1.0), m);
  if (m == 1.0) {
    rec.analytic = Verdict::CP_unitary;
  } else if (a == 0.0) {
    rec.analytic = s == 1.0 ? Verdict::pinch_vacuum : Verdict::pinch_NP;
  } else if ((s == 1.0 && m < 1.0) || (s == -1.0 && m > 1.0)) {
    rec.analytic = Verdict::CP;
  } else {
    rec.analytic = Verdict::NP;
    if (s == 0.0) {
      rec.region = Region::boundary;
    } else if (m < 1.0) {
      rec.region = s < 0.0 ? Region::r1 : Region::r2;
    } else {
      rec.region = s > 0.0 ? Region::r3 : Region::r4;
    }
  }
  return rec;
}

ClassificationRecord classify_noisy(NoisyFamily family, double kappa, double b) {
  if (family == NoisyFamily::attenuator && !(std::abs(kappa) <= 1.0)) {
    throw std::invalid_argument("classify_noisy: attenuator needs |kappa| <= 1");
  }
  if (family == NoisyFamily::amplifier && !(std::abs(kappa) >= 1.0)) {
    throw std::invalid_argument("classify_noisy: amplifier needs |kappa| >= 1");
  }
  ClassificationRecord rec;
  rec.params = NoisyPoint{family, kappa, b};
  const double k2 = kappa * kappa;
  const double cp = std::abs(1.0 - k2);
  const double eb = 1.0 + k2;
  rec.threshold_distance = std::min(std::abs(b - cp), std::abs(b - eb));
  rec.analytic = b < cp ? Verdict::NP : (b < eb ? Verdict::CP : Verdict::EB_NB);
  return rec;
}

Verdict classify_action(const PhaseSpaceAction& action, double tol) {
  if (is_unitary(action, tol)) return Verdict::CP_unitary;
  const double b = -action.gauss;
  const double l2 = action.scale * action.scale;
  if (action.scale == 0.0) {
    if (std::abs(b - 1.0) <= tol) return Verdict::pinch_vacuum;
    return b < 1.0 ? Verdict::pinch_NP : Verdict::EB_NB;
  }
  if (b < std::abs(1.0 - l2) - tol) return Verdict::NP;
  if (b < 1.0 + l2 - tol) return Verdict::CP;
  return Verdict::EB_NB;
}

double Range::at(int i) const {
  if (count == 1) return lo;
  if (i == count - 1) return hi;
  return lo + (hi - lo) * i / (count - 1);
}

Range Range::parse(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("range must read lo:hi:count, got '" + text + "'");
  Range r{detail::parse_double(parts[0], "range start"), detail::parse_double(parts[1], "range end"),
          detail::parse_integer<int>(parts[2], "range count")};
  if (r.count < 1) throw std::invalid_argument("range count must be positive");
  if (r.count == 1 && r.lo != r.hi) throw std::invalid_argument("single-point range needs lo == hi");
  return r;
}

void SweepConfig::validate() const {
  if (x.count < 1 || y.count < 1) throw std::invalid_argument("sweep: grid counts must be positive");
  if (!(band_width > 0.0)) throw std::invalid_argument("sweep: band width must be positive");
  if (dim < 2 || choi_dim < 1) throw std::invalid_argument("sweep: dimensions too small");
  if (jobs < 1) throw std::invalid_argument("sweep: jobs must be at least 1");
  if (subsample_stride < 0) throw std::invalid_argument("sweep: negative subsample stride");
  for (int i = 0; i < x.count; ++i) {
    const double v = x.at(i);
    if (kind == SweepKind::scaling) {
      if (v < -1.0 || v > 1.0) throw std::invalid_argument("sweep: s outside [-1, 1]");
    } else if (family == NoisyFamily::attenuator ? std::abs(v) > 1.0 : std::abs(v) < 1.0) {
      throw std::invalid_argument("sweep: kappa outside the family's range");
    }
  }
}

namespace {

ChannelSpec spec_of(const ClassificationRecord& rec) {
  if (const auto* p = std::get_if<ScalingPoint>(&rec.params)) return ChannelSpec::scaling(p->s, p->a);
  const auto& n = std::get<NoisyPoint>(rec.params);
  return n.family == NoisyFamily::attenuator ? ChannelSpec::noisy_attenuator(n.kappa, n.b)
                                             : ChannelSpec::noisy_amplifier(n.kappa, n.b);
}

bool agrees(Verdict analytic, Verdict numeric) {
  // a unitary map is trivially inside the CP zone
  if (analytic == numeric) return true;
  return analytic == Verdict::CP && numeric == Verdict::CP_unitary;
}

}  // namespace

ChannelAssessment assess_channel(const ChannelSpec& spec, const std::vector<Probe>& probes, const AssessOptions& opts) {
  const PhaseSpaceAction action = action_of(spec);
  ChannelAssessment out;
  out.analytic = classify_action(action);

  // Gaussian fast path
  out.witness = gaussian_scalar_witness(action);
  const bool pinch = opts.pinch_labels && action.scale == 0.0;
  Verdict fast;
  if (pinch) {
    if (out.witness) fast = Verdict::pinch_NP;
    else if (std::abs(action.vacuum_image_variance() - 1.0) <= 1e-12) fast = Verdict::pinch_vacuum;
    else fast = Verdict::EB_NB;
  } else if (out.witness) {
    fast = Verdict::NP;
  } else if (is_unitary(action)) {
    fast = Verdict::CP_unitary;
  } else {
    fast = Verdict::CP;
  }
  const CovarianceModel image = propagate(action, tmsv(opts.tmsv_r), 1);
  const auto ppt = ppt_test(image);
  const auto cls = classicality_test(image);
  out.margin_ppt = ppt.margin;
  out.margin_classical = cls.margin;
  if (opts.noise_zones && fast == Verdict::CP) {
    const bool eb = ppt.verdict == Entanglement::ppt;
    const bool nb = cls.verdict == Classicality::classical;
    if (eb && nb) fast = Verdict::EB_NB;
    else if (eb != nb) fast = Verdict::undetermined;
  }
  out.numeric = fast;
  if (!opts.full) return out;

  // Fock and Choi tier
  out.certified = true;
  CertifyOptions copts;
  copts.quad = opts.quad;
  const auto fock_witness = positivity_probe(spec, probes, copts);
  bool choi_ok = true;
  if (action.exponent() < 0.0) {
    out.choi_min = choi(spec, opts.choi_dim, opts.choi_dim, opts.quad).min_eigenvalue;
    choi_ok = out.choi_min >= -opts.choi_tol;
  }
  if (fock_witness) {
    out.witness = fock_witness;
    out.numeric = pinch ? Verdict::pinch_NP : Verdict::NP;
  } else if (!choi_ok) {
    out.witness = Witness{WitnessKind::choi_eigen, to_string(spec), "", out.choi_min, opts.choi_tol};
    out.numeric = Verdict::P_not_CP;
  } else if (fast == Verdict::pinch_NP || fast == Verdict::NP) {
    // the Fock probes found nothing where the Gaussian scalars did
    out.numeric = Verdict::undetermined;
  }
  return out;
}

void certify_record(ClassificationRecord& rec, const SweepConfig& config, bool full) {
  const bool scaling = std::holds_alternative<ScalingPoint>(rec.params);
  AssessOptions opts;
  opts.pinch_labels = scaling;
  opts.noise_zones = !scaling;
  opts.full = full;
  opts.choi_dim = config.choi_dim;
  opts.choi_tol = config.choi_tol;
  opts.tmsv_r = config.tmsv_r;
  opts.quad = config.quad;
  std::vector<Probe> probes;
  if (full) probes = standard_probes(FockDim(config.dim), config.random_probes, config.seed);
  const ChannelAssessment a = assess_channel(spec_of(rec), probes, opts);
  rec.numeric = a.numeric;
  rec.witness = a.witness;
  rec.certified = a.certified;
  rec.choi_min = a.choi_min;
  if (!scaling) {
    rec.margin_ppt = a.margin_ppt;
    rec.margin_classical = a.margin_classical;
  }
}

SweepResult sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.kind = config.kind;
  const int total = config.x.count * config.y.count;
  result.records.resize(total);
  for (int i = 0; i < config.x.count; ++i) {
    for (int j = 0; j < config.y.count; ++j) {
      const double x = config.x.at(i);
      const double y = config.y.at(j);
      result.records[i * config.y.count + j] =
          config.kind == SweepKind::scaling ? classify_scaling(x, y) : classify_noisy(config.family, x, y);
    }
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed) {
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      auto& rec = result.records[idx];
      const bool full = (config.subsample_stride > 0 && idx % config.subsample_stride == 0) ||
                        (config.subsample_stride > 0 && rec.threshold_distance < 2.0 * config.band_width);
      try {
        certify_record(rec, config, full);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  const int jobs = std::min(config.jobs, total);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  auto& sum = result.summary;
  sum.points = total;
  for (const auto& rec : result.records) {
    if (rec.certified) ++sum.certified;
    if (rec.threshold_distance > config.band_width && !agrees(rec.analytic, rec.numeric)) {
      ++sum.mismatches;
      sum.failures.push_back(reproduction(rec) + " analytic=" + to_string(rec.analytic) +
                             " numeric=" + to_string(rec.numeric));
    }
  }
  if (config.kind == SweepKind::noisy) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < config.x.count; ++i) {
      double cp = nan;
      double eb = nan;
      for (int j = 0; j < config.y.count; ++j) {
        const auto& rec = result.records[i * config.y.count + j];
        const double b = config.y.at(j);
        const bool cp_like =
            rec.numeric == Verdict::CP || rec.numeric == Verdict::CP_unitary || rec.numeric == Verdict::EB_NB;
        if (std::isnan(cp) && cp_like) cp = b;
        if (std::isnan(eb) && rec.numeric == Verdict::EB_NB) eb = b;
      }
      sum.cp_edge.push_back(cp);
      sum.eb_edge.push_back(eb);
    }
  }
  return result;
}

std::string reproduction(const ClassificationRecord& rec) {
  return "qscale certify --channel " + to_string(spec_of(rec)) + " --state vacuum";
}

void write_csv(std::ostream& os, const SweepResult& result) {
  using detail::format_double;
  if (result.kind == SweepKind::scaling) {
    os << "s,a,analytic,region,numeric,witness_kind,witness_value\n";
    for (const auto& rec : result.records) {
      const auto& p = std::get<ScalingPoint>(rec.params);
      os << format_double(p.s) << ',' << format_double(p.a) << ',' << to_string(rec.analytic) << ','
         << to_string(rec.region) << ',' << to_string(rec.numeric) << ',';
      if (rec.witness) {
        os << to_string(rec.witness->kind) << ',' << format_double(rec.witness->value);
      } else {
        os << "none,";
      }
      os << '\n';
    }
  } else {
    os << "family,kappa,b,analytic,numeric,margin_ppt,margin_classical\n";
    for (const auto& rec : result.records) {
      const auto& p = std::get<NoisyPoint>(rec.params);
      os << to_string(p.family) << ',' << format_double(p.kappa) << ',' << format_double(p.b) << ','
         << to_string(rec.analytic) << ',' << to_string(rec.numeric) << ',' << format_double(rec.margin_ppt) << ','
         << format_double(rec.margin_classical) << '\n';
    }
  }
}

void write_json(std::ostream& os, const SweepResult& result) { os << to_json(result).dump(2) << '\n'; }

}  // namespace qscale
