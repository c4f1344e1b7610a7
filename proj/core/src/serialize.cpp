#include "qscale/serialize.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "detail/text.hpp"

namespace qscale {

using nlohmann::json;

namespace {

json matrix2(const Eigen::Matrix2d& m) { return json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}); }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const TruncatedState& rho) {
  const auto& m = rho.matrix();
  json amps = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) amps.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"dim", m.rows()}, {"amplitudes", std::move(amps)}};
}

TruncatedState state_from_json(const json& j) {
  const int n = j.at("dim").get<int>();
  const auto& amps = j.at("amplitudes");
  if (n < 1 || amps.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("state file: amplitude count does not match dim^2");
  }
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const auto& z = amps.at(static_cast<std::size_t>(i) * n + k);
      m(i, k) = cplx(z.at(0).get<double>(), z.at(1).get<double>());
    }
  }
  return TruncatedState(std::move(m));
}

json to_json(const CharFnGrid& chi) {
  json samples = json::array();
  const int kmax = chi.max_harmonic();
  for (int i = 0; i < chi.grid().size(); ++i) {
    json row = json::array();
    for (int k = -kmax; k <= kmax; ++k) {
      const cplx v = chi.harmonic(i, k);
      row.push_back({v.real(), v.imag()});
    }
    samples.push_back(std::move(row));
  }
  return {{"ordering", chi.ordering().value()},
          {"cutoff", chi.grid().cutoff},
          {"nodes", chi.grid().nodes},
          {"weights", chi.grid().weights},
          {"max_harmonic", kmax},
          {"exponent", chi.exponent()},
          {"action", {{"scale", chi.action().scale}, {"gauss", chi.action().gauss}}},
          {"source_tail", chi.source_tail()},
          {"harmonics", std::move(samples)}};
}

json to_json(const Witness& w) {
  json j{{"kind", to_string(w.kind)}, {"input", w.input}, {"value", w.value}, {"tolerance", w.tolerance}};
  if (!w.partner.empty()) j["partner"] = w.partner;
  return j;
}

json to_json(const ChoiMatrix& c) {
  return {{"d", c.d},
          {"out_dim", c.out_dim},
          {"trace", c.trace},
          {"min_eigenvalue", c.min_eigenvalue},
          {"block_min", c.block_min}};
}

json to_json(const ThresholdReport& r) {
  return {{"family", to_string(r.family)},
          {"a", r.a},
          {"b", r.b},
          {"cp_threshold", r.cp_threshold},
          {"eb_threshold", r.eb_threshold},
          {"nb_threshold", r.nb_threshold},
          {"cp", r.cp},
          {"eb", r.eb},
          {"nb", r.nb}};
}

json to_json(const ScalingMatrixReduction& r) {
  return {{"K", matrix2(r.K)},     {"S1", matrix2(r.S1)},          {"S2", matrix2(r.S2)},
          {"a", r.a},              {"sign", r.sign},               {"residual", r.residual()},
          {"det_S1", r.S1.determinant()}, {"det_S2", r.S2.determinant()}};
}

json to_json(const ClassificationRecord& rec) {
  json j;
  if (const auto* p = std::get_if<ScalingPoint>(&rec.params)) {
    j["s"] = p->s;
    j["a"] = p->a;
    j["analytic"] = to_string(rec.analytic);
    j["region"] = to_string(rec.region);
    j["numeric"] = to_string(rec.numeric);
    j["witness_kind"] = rec.witness ? to_string(rec.witness->kind) : "none";
    j["witness_value"] = rec.witness ? json(rec.witness->value) : json(nullptr);
  } else {
    const auto& n = std::get<NoisyPoint>(rec.params);
    j["family"] = to_string(n.family);
    j["kappa"] = n.kappa;
    j["b"] = n.b;
    j["analytic"] = to_string(rec.analytic);
    j["numeric"] = to_string(rec.numeric);
    j["margin_ppt"] = number_or_null(rec.margin_ppt);
    j["margin_classical"] = number_or_null(rec.margin_classical);
  }
  return j;
}

json to_json(const SweepResult& result) {
  json records = json::array();
  for (const auto& rec : result.records) records.push_back(to_json(rec));
  json summary{{"points", result.summary.points},
               {"certified", result.summary.certified},
               {"mismatches", result.summary.mismatches},
               {"failures", result.summary.failures}};
  if (result.kind == SweepKind::noisy) {
    json cp = json::array();
    json eb = json::array();
    for (double x : result.summary.cp_edge) cp.push_back(number_or_null(x));
    for (double x : result.summary.eb_edge) eb.push_back(number_or_null(x));
    summary["cp_edge"] = std::move(cp);
    summary["eb_edge"] = std::move(eb);
  }
  return {{"records", std::move(records)}, {"summary", std::move(summary)}};
}

void write_csv(std::ostream& os, const QuasiprobGrid& grid) {
  using detail::format_double;
  os << "re_alpha,im_alpha,value\n";
  for (int j = 0; j < grid.radial.size(); ++j) {
    const double r = grid.radial.nodes[j];
    for (int l = 0; l < grid.angles; ++l) {
      const double theta = grid.angle(l);
      os << format_double(r * std::cos(theta)) << ',' << format_double(r * std::sin(theta)) << ','
         << format_double(grid.values(j, l)) << '\n';
    }
  }
}

}  // namespace qscale
