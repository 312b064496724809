#include "margbayes/serialization.hpp"

#include <string>

namespace margbayes {

namespace {

template <typename Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const ProblemConfig& cfg) {
  return Json{{"m", cfg.m}, {"n", cfg.n}, {"N", cfg.N}, {"Nprime", cfg.Nprime}};
}

ProblemConfig config_from_json(const Json& j) {
  return guarded("config", [&] {
    ProblemConfig cfg;
    cfg.m = j.at("m").get<std::int64_t>();
    cfg.n = j.at("n").get<std::int64_t>();
    cfg.N = j.at("N").get<std::int64_t>();
    cfg.Nprime = j.value("Nprime", std::int64_t{0});
    cfg.validate();
    return cfg;
  });
}

Json to_json(const Grid<double>& g) { return Json(g.to_rows()); }
Json to_json(const Grid<std::int64_t>& g) { return Json(g.to_rows()); }

Grid<double> real_grid_from_json(const Json& j) {
  return guarded("grid", [&] {
    return Grid<double>::from_rows(j.get<std::vector<std::vector<double>>>());
  });
}

Grid<std::int64_t> count_grid_from_json(const Json& j) {
  return guarded("counts", [&] {
    return Grid<std::int64_t>::from_rows(j.get<std::vector<std::vector<std::int64_t>>>());
  });
}

Json to_json(const CellProbabilities& p) { return to_json(p.grid()); }
CellProbabilities probabilities_from_json(const Json& j) {
  return validate_probabilities(real_grid_from_json(j));
}

Json to_json(const RowMargins& r) {
  return Json(std::vector<double>(r.values().begin(), r.values().end()));
}
RowMargins margins_from_json(const Json& j) {
  return guarded("margins", [&] { return RowMargins(j.get<std::vector<double>>()); });
}

Json to_json(const DirectCounts& x) { return to_json(x.table()); }
DirectCounts direct_counts_from_json(const Json& j) {
  return DirectCounts(count_grid_from_json(j));
}

Json to_json(const AggregatedCounts& y) {
  return Json(std::vector<std::int64_t>(y.counts().begin(), y.counts().end()));
}
AggregatedCounts aggregated_counts_from_json(const Json& j) {
  return guarded("aggregated counts",
                 [&] { return AggregatedCounts(j.get<std::vector<std::int64_t>>()); });
}

Json to_json(const Estimate& d) { return to_json(d.grid()); }

Json to_json(const RiskReport& r) {
  Json j{{"value", r.value},
         {"method", to_string(r.method)},
         {"error_bound", r.error_bound},
         {"target", to_string(r.target)},
         {"config", to_json(r.config)}};
  if (r.method == RiskMethod::MonteCarlo) j["replicates"] = r.replicates;
  return j;
}

RiskReport risk_report_from_json(const Json& j) {
  return guarded("risk report", [&] {
    RiskReport r;
    r.value = j.at("value").get<double>();
    r.method = parse_risk_method(j.at("method").get<std::string>());
    r.error_bound = j.at("error_bound").get<double>();
    r.target = parse_risk_target(j.at("target").get<std::string>());
    r.config = config_from_json(j.at("config"));
    r.replicates = j.value("replicates", std::int64_t{0});
    return r;
  });
}

Json to_json(const DominanceCertificate& c) {
  Json j{{"config", to_json(c.config)},
         {"sup_bound", c.sup_bound},
         {"certified", c.certified},
         {"threshold_Nprime", nullptr},
         {"reason", c.reason}};
  if (c.threshold_Nprime) j["threshold_Nprime"] = *c.threshold_Nprime;
  return j;
}

DominanceCertificate certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    DominanceCertificate c;
    c.config = config_from_json(j.at("config"));
    c.sup_bound = j.at("sup_bound").get<double>();
    c.certified = j.at("certified").get<bool>();
    if (!j.at("threshold_Nprime").is_null()) {
      c.threshold_Nprime = j.at("threshold_Nprime").get<std::int64_t>();
    }
    c.reason = j.at("reason").get<std::string>();
    return c;
  });
}

Json to_json(const SimulationResult& r) {
  return Json{{"risk_direct_mean", r.risk_direct_mean},
              {"risk_direct_se", r.risk_direct_se},
              {"risk_combined_mean", r.risk_combined_mean},
              {"risk_combined_se", r.risk_combined_se},
              {"delta_mean", r.delta_mean},
              {"delta_se", r.delta_se},
              {"replicates", r.replicates}};
}

SimulationResult simulation_result_from_json(const Json& j) {
  return guarded("simulation result", [&] {
    SimulationResult r;
    r.risk_direct_mean = j.at("risk_direct_mean").get<double>();
    r.risk_direct_se = j.at("risk_direct_se").get<double>();
    r.risk_combined_mean = j.at("risk_combined_mean").get<double>();
    r.risk_combined_se = j.at("risk_combined_se").get<double>();
    r.delta_mean = j.at("delta_mean").get<double>();
    r.delta_se = j.at("delta_se").get<double>();
    r.replicates = j.at("replicates").get<std::int64_t>();
    return r;
  });
}

}  // namespace margbayes
