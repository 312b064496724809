#pragma once

// JSON forms of the library types. Grids are row-major arrays of arrays;
// configs are {"m":..,"n":..,"N":..,"Nprime":..}.

#include "json.hpp"

#include "margbayes/core_model.hpp"
#include "margbayes/exact_risk.hpp"
#include "margbayes/montecarlo.hpp"
#include "margbayes/search.hpp"

namespace margbayes {

using Json = nlohmann::ordered_json;

Json to_json(const ProblemConfig& cfg);
ProblemConfig config_from_json(const Json& j);

Json to_json(const Grid<double>& g);
Json to_json(const Grid<std::int64_t>& g);
Grid<double> real_grid_from_json(const Json& j);
Grid<std::int64_t> count_grid_from_json(const Json& j);

Json to_json(const CellProbabilities& p);
CellProbabilities probabilities_from_json(const Json& j);
Json to_json(const RowMargins& r);
RowMargins margins_from_json(const Json& j);
Json to_json(const DirectCounts& x);
DirectCounts direct_counts_from_json(const Json& j);
Json to_json(const AggregatedCounts& y);
AggregatedCounts aggregated_counts_from_json(const Json& j);
Json to_json(const Estimate& d);

Json to_json(const RiskReport& r);
RiskReport risk_report_from_json(const Json& j);

Json to_json(const DominanceCertificate& c);
DominanceCertificate certificate_from_json(const Json& j);

Json to_json(const SimulationResult& r);
SimulationResult simulation_result_from_json(const Json& j);

}  // namespace margbayes
