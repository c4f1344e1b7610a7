#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qscale/certify.hpp"
#include "qscale/gaussian.hpp"

namespace qscale {

enum class Verdict { CP_unitary, CP, NP, EB_NB, pinch_vacuum, pinch_NP, P_not_CP, undetermined };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& text);

/// Quadrant labels of the scaling-map diagram; s = 0 is the boundary line.
enum class Region { r1, r2, r3, r4, boundary, none };

std::string to_string(Region r);

struct ScalingPoint {
  double s;
  double a;
};

struct NoisyPoint {
  NoisyFamily family;
  double kappa;
  double b;
};

struct ClassificationRecord {
  std::variant<ScalingPoint, NoisyPoint> params;
  Verdict analytic = Verdict::undetermined;
  Region region = Region::none;
  Verdict numeric = Verdict::undetermined;
  std::optional<Witness> witness;
  /// Distance in the swept parameter to the nearest verdict change.
  double threshold_distance = 0.0;
  /// Full Fock/Choi certification ran at this point.
  bool certified = false;
  double choi_min = 0.0;
  double margin_ppt = 0.0;
  double margin_classical = 0.0;
};

ClassificationRecord classify_scaling(double s, double a);
ClassificationRecord classify_noisy(NoisyFamily family, double kappa, double b);

/// Verdict of any phase-covariant action: unitary, constant (pinch), or the
/// three noise zones b < |1 - scale^2| <= b < 1 + scale^2 with b = -gauss.
Verdict classify_action(const PhaseSpaceAction& action, double tol = 1e-12);

/// Inclusive range lo:hi:count.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  double at(int i) const;
  static Range parse(const std::string& text);
};

enum class SweepKind { scaling, noisy };

struct SweepConfig {
  SweepKind kind = SweepKind::scaling;
  NoisyFamily family = NoisyFamily::attenuator;
  /// s for scaling sweeps, kappa for noisy sweeps.
  Range x{-1.0, 1.0, 21};
  /// a for scaling sweeps, b for noisy sweeps.
  Range y{0.25, 2.0, 21};
  double band_width = 0.02;
  int dim = 40;
  int choi_dim = 12;
  /// Every stride-th point and every point within two band widths of a
  /// threshold gets the full certification tier; 0 disables it.
  int subsample_stride = 4;
  int random_probes = 10;
  std::uint64_t seed = 1;
  int jobs = 1;
  double tmsv_r = 0.5;
  double choi_tol = 1e-8;
  QuadratureOptions quad;

  void validate() const;
};

struct SweepSummary {
  int points = 0;
  int certified = 0;
  int mismatches = 0;
  /// Reproduction descriptors of out-of-band mismatches.
  std::vector<std::string> failures;
  /// Noisy sweeps: per kappa, the smallest b classified CP, CP_unitary or EB_NB numerically; NaN if none.
  std::vector<double> cp_edge;
  std::vector<double> eb_edge;
};

struct SweepResult {
  SweepKind kind = SweepKind::scaling;
  std::vector<ClassificationRecord> records;
  SweepSummary summary;
};

/// Records come back in row-major grid order (x outer, y inner) whatever jobs is.
SweepResult sweep(const SweepConfig& config);

struct AssessOptions {
  /// Constant maps report pinch_vacuum / pinch_NP instead of zone verdicts.
  bool pinch_labels = true;
  /// Split the CP zone into CP and EB_NB with the two-mode Gaussian tests.
  bool noise_zones = true;
  /// Run the Fock-probe and Choi tier after the Gaussian fast path.
  bool full = true;
  int choi_dim = 12;
  double choi_tol = 1e-8;
  double tmsv_r = 0.5;
  QuadratureOptions quad;
};

struct ChannelAssessment {
  Verdict analytic = Verdict::undetermined;
  Verdict numeric = Verdict::undetermined;
  std::optional<Witness> witness;
  bool certified = false;
  /// NaN when the Choi matrix was not formed.
  double choi_min = std::numeric_limits<double>::quiet_NaN();
  double margin_ppt = 0.0;
  double margin_classical = 0.0;
};

/// Analytic verdict from classify_action next to the numeric one: Gaussian
/// scalars and two-mode tests first, then positivity_probe over `probes` and
/// the Choi spectrum when opts.full is set.
ChannelAssessment assess_channel(const ChannelSpec& spec, const std::vector<Probe>& probes,
                                 const AssessOptions& opts = {});

/// Fills the numeric side of a record: Gaussian fast path, plus Fock and Choi
/// certification when `full` is set.
void certify_record(ClassificationRecord& record, const SweepConfig& config, bool full);

/// Text that reruns a single point through the CLI.
std::string reproduction(const ClassificationRecord& record);

void write_csv(std::ostream& os, const SweepResult& result);
void write_json(std::ostream& os, const SweepResult& result);

}  // namespace qscale
