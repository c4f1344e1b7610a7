#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "qscale/certify.hpp"
#include "qscale/channels.hpp"
#include "qscale/fock.hpp"
#include "qscale/gaussian.hpp"
#include "qscale/phasediagram.hpp"
#include "qscale/quasiprob.hpp"

namespace qscale {

/// {"dim": N, "amplitudes": [[re, im], ...]} in row-major order.
nlohmann::json to_json(const TruncatedState& rho);
TruncatedState state_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CharFnGrid& chi);
nlohmann::json to_json(const Witness& w);
/// Dimensions, trace, minimum eigenvalue and per-block minima; J itself is omitted.
nlohmann::json to_json(const ChoiMatrix& c);
nlohmann::json to_json(const ThresholdReport& r);
nlohmann::json to_json(const ScalingMatrixReduction& r);
nlohmann::json to_json(const ClassificationRecord& rec);
nlohmann::json to_json(const SweepResult& result);

/// Columns re_alpha, im_alpha, value.
void write_csv(std::ostream& os, const QuasiprobGrid& grid);

}  // namespace qscale
