#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "margbayes/asymptotics.hpp"
#include "margbayes/exact_risk.hpp"
#include "margbayes/montecarlo.hpp"
#include "margbayes/parallel.hpp"
#include "margbayes/search.hpp"
#include "margbayes/serialization.hpp"
#include "margbayes/svg_plot.hpp"
#include "margbayes/version.hpp"

namespace margbayes::cli {

namespace {

// Flag <-> config-file key binding. Values from --config only fill options
// that were not given on the command line.
struct Binding {
  CLI::Option* option;
  std::string key;
  std::function<void(const Json&)> assign;
  std::function<Json()> current;
};

class Bindings {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& flag, T& var, const std::string& help) {
    auto* opt = app->add_option("--" + flag, var, help);
    push(opt, flag, var);
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& flag, bool& var, const std::string& help) {
    auto* opt = app->add_flag("--" + flag, var, help);
    push(opt, flag, var);
    return opt;
  }

  void apply(const Json& config) {
    for (auto& b : items_) {
      if (b.option->count() == 0 && config.contains(b.key)) {
        b.assign(config.at(b.key));
        given_.push_back(b.key);
      }
    }
  }

  bool given(const std::string& key) const {
    for (const auto& b : items_) {
      if (b.key == key && b.option->count() > 0) return true;
    }
    return std::find(given_.begin(), given_.end(), key) != given_.end();
  }

  Json resolved() const {
    Json j = Json::object();
    for (const auto& b : items_) j[b.key] = b.current();
    return j;
  }

 private:
  template <typename T>
  void push(CLI::Option* opt, const std::string& key, T& var) {
    items_.push_back({opt, key,
                      [&var, key](const Json& j) {
                        try {
                          var = j.get<T>();
                        } catch (const nlohmann::json::exception& e) {
                          throw Error(ErrorKind::InvalidInput,
                                      "config key '" + key + "': " + e.what());
                        }
                      },
                      [&var] { return Json(var); }});
  }

  std::vector<Binding> items_;
  std::vector<std::string> given_;
};

struct Common {
  std::string format = "csv";
  std::string config_path;
  std::string plot_path;
  unsigned workers = default_workers();
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

void write_header(std::ostream& out, const std::string& command, const Json& config) {
  out << "# margbayes " << kVersion << ' ' << command << " config: " << config.dump() << '\n';
}

void write_json(std::ostream& out, const std::string& command, const Json& config, Json result) {
  Json doc{{"version", kVersion}, {"command", command}, {"config", config},
           {"result", std::move(result)}};
  out << doc.dump(2) << '\n';
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Probability grid from --grid (JSON file), --margins (spread evenly over the
// columns of each row) or the uniform p*.
CellProbabilities resolve_grid(const ProblemConfig& cfg, const std::string& grid_path,
                               const std::vector<double>& margins) {
  if (!grid_path.empty()) {
    auto p = probabilities_from_json(read_json_file(grid_path));
    if (p.grid().rows() != cfg.rows() || p.grid().cols() != cfg.cols()) {
      throw Error(ErrorKind::ShapeMismatch, "grid file does not match (1+m) x (1+n)");
    }
    return p;
  }
  if (!margins.empty()) {
    const RowMargins pdot(margins);
    if (pdot.size() != cfg.rows()) {
      throw Error(ErrorKind::ShapeMismatch, "margins length does not equal 1+m");
    }
    Grid<double> g(cfg.rows(), cfg.cols());
    for (std::size_t i = 0; i < cfg.rows(); ++i) {
      for (std::size_t j = 0; j < cfg.cols(); ++j) {
        g(i, j) = pdot[i] / static_cast<double>(cfg.cols());
      }
    }
    return validate_probabilities(std::move(g));
  }
  return CellProbabilities::uniform(cfg.m, cfg.n);
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string input;
  bool combined = false;
};

int cmd_estimate(const EstimateArgs& a, const Common& common, const Json& config,
                 std::ostream& out) {
  const Json doc = read_json_file(a.input);
  const ProblemConfig cfg = config_from_json(doc);
  if (!doc.contains("X")) throw Error(ErrorKind::InvalidInput, "input has no X table");
  const auto X = direct_counts_from_json(doc.at("X"));
  std::optional<Estimate> est;
  if (a.combined) {
    if (!doc.contains("Y")) throw Error(ErrorKind::InvalidInput, "--combined needs Y");
    est = estimate_combined(X, aggregated_counts_from_json(doc.at("Y")), cfg);
  } else {
    est = estimate_direct(X, cfg);
  }
  Json resolved = config;
  resolved["problem"] = to_json(cfg);
  if (common.format == "json") {
    write_json(out, "estimate", resolved,
               Json{{"estimator", a.combined ? "combined" : "direct"},
                    {"estimate", to_json(*est)}});
    return kOk;
  }
  write_header(out, "estimate", resolved);
  const auto& g = est->grid();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) out << (j ? "," : "") << csv_number(g(i, j));
    out << '\n';
  }
  return kOk;
}

// -------------------------------------------------------------------- risk

struct RiskArgs {
  std::int64_t m = 1;
  std::int64_t n = 3;
  std::vector<std::int64_t> N{1};
  std::vector<std::int64_t> Nprime{1};
  std::vector<double> margins;
  std::string grid;
  std::string method = "closed";
  std::string target = "delta";
  std::int64_t reps = 100000;
  std::uint64_t seed = 7;
};

bool uniform_margins(const RowMargins& pdot) {
  const double u = 1.0 / static_cast<double>(pdot.size());
  for (double v : pdot.values()) {
    if (std::abs(v - u) > 1e-12) return false;
  }
  return true;
}

RiskReport evaluate_risk(const RiskArgs& a, const CellProbabilities& p, const ProblemConfig& cfg,
                         unsigned workers) {
  const RiskMethod method = parse_risk_method(a.method);
  const RiskTarget target = parse_risk_target(a.target);
  const RowMargins pdot = row_margins(p);

  if (method == RiskMethod::MonteCarlo) {
    SimulationPlan plan{cfg, p, a.reps, a.seed, workers};
    const auto r = simulate(plan);
    RiskReport report;
    report.method = method;
    report.target = target;
    report.config = cfg;
    report.replicates = r.replicates;
    switch (target) {
      case RiskTarget::RiskDirect:
        report.value = r.risk_direct_mean;
        report.error_bound = r.risk_direct_se;
        break;
      case RiskTarget::RiskCombined:
        report.value = r.risk_combined_mean;
        report.error_bound = r.risk_combined_se;
        break;
      case RiskTarget::Delta:
        report.value = r.delta_mean;
        report.error_bound = r.delta_se;
        break;
    }
    return report;
  }

  if (target != RiskTarget::Delta) {
    if (method != RiskMethod::ExactMarginal) {
      throw Error(ErrorKind::InvalidInput, "individual risks need --method exact or mc");
    }
    return target == RiskTarget::RiskDirect ? exact_risk_direct(p, cfg)
                                            : exact_risk_combined(p, cfg);
  }

  switch (method) {
    case RiskMethod::ExactMarginal:
      return delta_expectation(pdot, cfg.N, cfg.Nprime, cfg);
    case RiskMethod::ClosedForm: {
      if (cfg.Nprime > 1) {
        throw Error(ErrorKind::InvalidInput,
                    "the closed form covers Nprime <= 1; use --method decomposition");
      }
      if (cfg.Nprime == 0) {
        RiskReport zero;
        zero.method = method;
        zero.config = cfg;
        return zero;
      }
      return delta_single(pdot, cfg.N, cfg);
    }
    case RiskMethod::Decomposition:
      return delta_decomposition(pdot, cfg);
    case RiskMethod::Quadrature: {
      if (!uniform_margins(pdot)) {
        throw Error(ErrorKind::InvalidInput, "quadrature is available at uniform margins only");
      }
      RiskReport sum;
      sum.method = method;
      sum.config = cfg;
      for (std::int64_t v = 1; v <= cfg.Nprime; ++v) {
        const auto r = delta_star_quadrature(cfg.N + v - 1, cfg.m, cfg.ntilde());
        sum.value += r.value;
        sum.error_bound += r.error_bound;
      }
      return sum;
    }
    case RiskMethod::MonteCarlo:
      break;
  }
  throw Error(ErrorKind::InvalidInput, "unsupported method");
}

int cmd_risk(const RiskArgs& a, const Common& common, const Json& config, std::ostream& out) {
  if (a.N.empty() || a.Nprime.empty()) throw Error(ErrorKind::InvalidInput, "empty N or Nprime");
  Json rows = Json::array();
  std::vector<RiskReport> reports;
  for (auto N : a.N) {
    for (auto Nprime : a.Nprime) {
      ProblemConfig cfg{a.m, a.n, N, Nprime};
      cfg.validate();
      const auto p = resolve_grid(cfg, a.grid, a.margins);
      reports.push_back(evaluate_risk(a, p, cfg, common.workers));
    }
  }
  if (common.format == "json") {
    for (const auto& r : reports) rows.push_back(to_json(r));
    write_json(out, "risk", config, rows);
    return kOk;
  }
  write_header(out, "risk", config);
  out << "m,n,N,Nprime,target,method,value,error_bound,replicates\n";
  for (const auto& r : reports) {
    out << r.config.m << ',' << r.config.n << ',' << r.config.N << ',' << r.config.Nprime << ','
        << to_string(r.target) << ',' << to_string(r.method) << ',' << csv_number(r.value) << ','
        << csv_number(r.error_bound) << ',' << r.replicates << '\n';
  }
  return kOk;
}

// --------------------------------------------------------------- dominance

struct DominanceArgs {
  std::int64_t m = 1;
  std::int64_t n = 3;
  std::int64_t N = 1;
  std::int64_t Nprime_max = 1000;
};

int cmd_dominance(const DominanceArgs& a, const Common& common, const Json& config,
                  std::ostream& out) {
  if (a.Nprime_max < 1) throw Error(ErrorKind::InvalidInput, "Nprime-max must be >= 1");
  ProblemConfig base{a.m, a.n, a.N, a.Nprime_max};
  base.validate();
  const auto threshold = dominance_threshold(a.m, a.n, a.N, a.Nprime_max);
  ProblemConfig at = base;
  at.Nprime = threshold.value_or(a.Nprime_max);
  const auto cert = certify_dominance(at);

  if (!common.plot_path.empty()) {
    const auto sums = delta_star_partial_sums(a.N, a.m, base.ntilde(), a.Nprime_max);
    PlotSeries series{"sum of worst-case risk differences", {}, sums};
    for (std::size_t k = 0; k < sums.size(); ++k) series.x.push_back(static_cast<double>(k + 1));
    LinePlot plot;
    plot.title = "Worst-case risk difference bound (m=" + std::to_string(a.m) +
                 ", n=" + std::to_string(a.n) + ", N=" + std::to_string(a.N) + ")";
    plot.x_label = "Nprime";
    plot.y_label = "bound on sup risk difference";
    plot.series.push_back(std::move(series));
    plot.reference_y = 0.0;
    plot.reference_label = "0";
    write_svg(common.plot_path, plot);
  }

  if (common.format == "csv") {
    write_header(out, "dominance", config);
    out << "m,n,N,Nprime,sup_bound,certified,threshold_Nprime,reason\n";
    out << at.m << ',' << at.n << ',' << at.N << ',' << at.Nprime << ','
        << csv_number(cert.sup_bound) << ',' << (cert.certified ? "true" : "false") << ','
        << (cert.threshold_Nprime ? std::to_string(*cert.threshold_Nprime) : "none") << ','
        << cert.reason << '\n';
    return kOk;
  }
  write_json(out, "dominance", config, to_json(cert));
  return kOk;
}

// --------------------------------------------------------------- convexity

struct ConvexityArgs {
  std::int64_t n = 3;
  double ntilde = 0.0;
  std::int64_t N_min = 1;
  std::int64_t N_max = 20;
  double step = 0.01;
};

int cmd_convexity(const ConvexityArgs& a, const Common& common, const Json& config,
                  std::ostream& out, bool ntilde_given) {
  const double ntilde = ntilde_given ? a.ntilde : 0.5 * static_cast<double>(a.n + 1);
  if (!(ntilde >= 0.5)) throw Error(ErrorKind::InvalidInput, "ntilde must be >= 1/2");
  if (a.N_min < 1 || a.N_max < a.N_min) throw Error(ErrorKind::InvalidInput, "bad N range");
  std::vector<ConvexityReport> reports;
  for (auto N = a.N_min; N <= a.N_max; ++N) reports.push_back(convexity_scan(N, ntilde, a.step));

  if (common.format == "json") {
    Json rows = Json::array();
    for (const auto& r : reports) {
      rows.push_back(Json{{"N", r.N},
                          {"ntilde", r.ntilde},
                          {"min_second_difference", r.min_second_difference},
                          {"argmin_p", r.argmin_p},
                          {"violation", !r.violations.empty()}});
    }
    write_json(out, "convexity", config, rows);
    return kOk;
  }
  write_header(out, "convexity", config);
  out << "N,ntilde,min_second_difference,argmin_p,violation\n";
  for (const auto& r : reports) {
    out << r.N << ',' << csv_number(r.ntilde) << ',' << csv_number(r.min_second_difference) << ','
        << csv_number(r.argmin_p) << ',' << (r.violations.empty() ? "false" : "true") << '\n';
  }
  return kOk;
}

// ------------------------------------------------------------- asymptotics

struct AsymptoticsArgs {
  std::string mode = "nlimit";
  std::int64_t m = 1;
  std::int64_t n = 3;
  std::int64_t N = 1;
  std::vector<std::int64_t> values;
  double step = 1e-4;
};

int cmd_asymptotics(const AsymptoticsArgs& a, const Common& common, const Json& config,
                    std::ostream& out) {
  const double ntilde = 0.5 * static_cast<double>(a.n + 1);
  LimitReport report;
  std::string quantity;
  bool log_x = true;
  if (a.mode == "nlimit") {
    const std::vector<std::int64_t> defaults{10, 30, 100, 300, 1000, 3000, 10000};
    report = sample_size_limit(a.m, ntilde, a.values.empty() ? defaults : a.values);
    quantity = "(N+1)^2 x worst-case risk difference";
  } else if (a.mode == "mlimit") {
    const std::vector<std::int64_t> defaults{1, 10, 100, 1000, 10000};
    report = row_count_limit(a.N, ntilde, a.values.empty() ? defaults : a.values);
    quantity = "(1+m) x worst-case risk difference";
  } else if (a.mode == "nderiv") {
    if (a.values.empty()) {
      report.parameter_name = "n";
      report.points.push_back({static_cast<double>(a.n), column_derivative(a.N, a.m, ntilde,
                                                                           a.step)});
      report.target = std::nan("");
      report.achieved_gap = std::nan("");
      quantity = "d/dn worst-case risk difference";
      log_x = false;
    } else {
      report = scaled_column_derivative(a.N, a.m, a.values, a.step);
      quantity = "n^3 x d/dn worst-case risk difference";
    }
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown mode '" + a.mode + "'");
  }

  if (!common.plot_path.empty()) {
    LinePlot plot;
    plot.title = quantity;
    plot.x_label = report.parameter_name;
    plot.y_label = quantity;
    plot.log_x = log_x;
    PlotSeries series{quantity, {}, {}};
    for (const auto& pt : report.points) {
      series.x.push_back(pt.parameter);
      series.y.push_back(pt.scaled_value);
    }
    plot.series.push_back(std::move(series));
    if (!std::isnan(report.target)) {
      plot.reference_y = report.target;
      plot.reference_label = "limit " + csv_number(report.target);
    } else {
      plot.reference_y = 0.0;
      plot.reference_label = "0";
    }
    write_svg(common.plot_path, plot);
  }

  if (common.format == "json") {
    Json rows = Json::array();
    for (const auto& pt : report.points) {
      rows.push_back(Json{{"parameter", pt.parameter}, {"scaled_value", pt.scaled_value}});
    }
    Json result{{"parameter_name", report.parameter_name},
                {"quantity", quantity},
                {"points", rows},
                {"target", std::isnan(report.target) ? Json(nullptr) : Json(report.target)},
                {"achieved_gap",
                 std::isnan(report.achieved_gap) ? Json(nullptr) : Json(report.achieved_gap)}};
    write_json(out, "asymptotics", config, result);
    return kOk;
  }
  write_header(out, "asymptotics", config);
  write_csv(out, report);
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t N = 4;
  std::int64_t Nprime = 2;
  std::vector<double> margins;
  std::string grid;
  std::int64_t reps = 100000;
  std::uint64_t seed = 7;
  std::string sweep_path;
};

std::vector<SimulationPlan> sweep_plans(const SimulateArgs& a, unsigned workers) {
  const Json doc = read_json_file(a.sweep_path);
  if (!doc.is_array()) throw Error(ErrorKind::InvalidInput, "sweep file must be a JSON array");
  std::vector<SimulationPlan> plans;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const auto& item = doc[k];
    const ProblemConfig cfg = config_from_json(item);
    auto p = item.contains("grid") ? probabilities_from_json(item.at("grid"))
                                   : CellProbabilities::uniform(cfg.m, cfg.n);
    if (p.grid().rows() != cfg.rows() || p.grid().cols() != cfg.cols()) {
      throw Error(ErrorKind::ShapeMismatch, "sweep plan grid does not match its config");
    }
    const auto reps = item.value("reps", a.reps);
    const auto seed = item.contains("seed") ? item.at("seed").get<std::uint64_t>()
                                            : derive_seed(a.seed, k);
    plans.push_back(SimulationPlan{cfg, std::move(p), reps, seed, workers});
  }
  return plans;
}

int cmd_simulate(const SimulateArgs& a, const Common& common, const Json& config,
                 std::ostream& out) {
  std::vector<SimulationPlan> plans;
  if (!a.sweep_path.empty()) {
    plans = sweep_plans(a, common.workers);
  } else {
    ProblemConfig cfg{a.m, a.n, a.N, a.Nprime};
    cfg.validate();
    plans.push_back(SimulationPlan{cfg, resolve_grid(cfg, a.grid, a.margins), a.reps, a.seed,
                                   common.workers});
  }
  const auto results = sweep(plans);
  if (common.format == "json") {
    Json rows = Json::array();
    for (std::size_t k = 0; k < plans.size(); ++k) {
      Json row = to_json(results[k]);
      row["config"] = to_json(plans[k].cfg);
      row["seed"] = plans[k].master_seed;
      rows.push_back(row);
    }
    write_json(out, "simulate", config, rows);
    return kOk;
  }
  write_header(out, "simulate", config);
  write_csv_header(out);
  for (std::size_t k = 0; k < plans.size(); ++k) write_csv_row(out, plans[k], results[k]);
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return kShapeMismatch;
    case ErrorKind::QuadratureFailure:
    case ErrorKind::NoConvergence: return kNumericalFailure;
    case ErrorKind::HypothesisUnmet: return kHypothesisUnmet;
    default: return kInputError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayes estimation of multinomial cell probabilities with aggregated row counts",
               "margbayes"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  auto add_common = [&](CLI::App* sub, bool plot) {
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", common.config_path, "JSON file with default flag values");
    sub->add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);
    if (plot) sub->add_option("--plot", common.plot_path, "Write an SVG plot to this path");
  };

  Bindings bind_estimate, bind_risk, bind_dominance, bind_convexity, bind_asym, bind_sim;

  EstimateArgs est;
  auto* sub_est = app.add_subcommand("estimate", "Jeffreys-prior Bayes estimate from counts");
  bind_estimate.add(sub_est, "input", est.input, "JSON file with m, n, N, Nprime, X and Y");
  bind_estimate.flag(sub_est, "combined", est.combined, "Use the aggregated counts Y as well");
  add_common(sub_est, false);

  RiskArgs risk;
  auto* sub_risk = app.add_subcommand("risk", "Risk or risk difference table");
  bind_risk.add(sub_risk, "m", risk.m, "Rows minus one");
  bind_risk.add(sub_risk, "n", risk.n, "Columns minus one");
  bind_risk.add(sub_risk, "N", risk.N, "Direct sample size(s)")->delimiter(',');
  bind_risk.add(sub_risk, "Nprime", risk.Nprime, "Aggregated sample size(s)")->delimiter(',');
  bind_risk.add(sub_risk, "margins", risk.margins, "Row margins (comma separated)")
      ->delimiter(',');
  bind_risk.add(sub_risk, "grid", risk.grid, "JSON file with the probability grid");
  bind_risk.add(sub_risk, "method", risk.method, "exact|closed|decomposition|quadrature|mc")
      ->check(CLI::IsMember({"exact", "closed", "decomposition", "quadrature", "mc"}));
  bind_risk.add(sub_risk, "target", risk.target, "delta|risk_direct|risk_combined")
      ->check(CLI::IsMember({"delta", "risk_direct", "risk_combined"}));
  bind_risk.add(sub_risk, "reps", risk.reps, "Monte Carlo replicates");
  bind_risk.add(sub_risk, "seed", risk.seed, "Monte Carlo master seed");
  add_common(sub_risk, false);

  DominanceArgs dom;
  auto* sub_dom = app.add_subcommand("dominance", "Dominance certificate and N' threshold");
  bind_dominance.add(sub_dom, "m", dom.m, "Rows minus one");
  bind_dominance.add(sub_dom, "n", dom.n, "Columns minus one");
  bind_dominance.add(sub_dom, "N", dom.N, "Direct sample size");
  bind_dominance.add(sub_dom, "Nprime-max", dom.Nprime_max, "Largest N' scanned");
  add_common(sub_dom, true);

  ConvexityArgs conv;
  auto* sub_conv = app.add_subcommand("convexity", "Second-difference convexity scan of H");
  bind_convexity.add(sub_conv, "n", conv.n, "Columns minus one");
  bind_convexity.add(sub_conv, "ntilde", conv.ntilde, "Row smoothing (overrides n)");
  bind_convexity.add(sub_conv, "N-min", conv.N_min, "Smallest N");
  bind_convexity.add(sub_conv, "N-max", conv.N_max, "Largest N");
  bind_convexity.add(sub_conv, "step", conv.step, "Grid step in p");
  add_common(sub_conv, false);

  AsymptoticsArgs asym;
  auto* sub_asym = app.add_subcommand("asymptotics", "Scaled limits and derivative probes");
  bind_asym.add(sub_asym, "mode", asym.mode, "nlimit|mlimit|nderiv")
      ->check(CLI::IsMember({"nlimit", "mlimit", "nderiv"}));
  bind_asym.add(sub_asym, "m", asym.m, "Rows minus one");
  bind_asym.add(sub_asym, "n", asym.n, "Columns minus one");
  bind_asym.add(sub_asym, "N", asym.N, "Direct sample size");
  bind_asym.add(sub_asym, "values", asym.values, "Increasing parameter values")->delimiter(',');
  bind_asym.add(sub_asym, "step", asym.step, "Central-difference step in ntilde");
  add_common(sub_asym, true);

  SimulateArgs sim;
  auto* sub_sim = app.add_subcommand("simulate", "Paired Monte Carlo risk estimates");
  bind_sim.add(sub_sim, "m", sim.m, "Rows minus one");
  bind_sim.add(sub_sim, "n", sim.n, "Columns minus one");
  bind_sim.add(sub_sim, "N", sim.N, "Direct sample size");
  bind_sim.add(sub_sim, "Nprime", sim.Nprime, "Aggregated sample size");
  bind_sim.add(sub_sim, "margins", sim.margins, "Row margins (comma separated)")->delimiter(',');
  bind_sim.add(sub_sim, "grid", sim.grid, "JSON file with the probability grid");
  bind_sim.add(sub_sim, "reps", sim.reps, "Replicates");
  bind_sim.add(sub_sim, "seed", sim.seed, "Master seed");
  bind_sim.add(sub_sim, "sweep", sim.sweep_path, "JSON array of plans");
  add_common(sub_sim, false);

  std::vector<const char*> argv{"margbayes"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    Json file_config = Json::object();
    if (!common.config_path.empty()) file_config = read_json_file(common.config_path);

    auto finish = [&](Bindings& b) {
      b.apply(file_config);
      auto* active = app.get_subcommands().front();
      auto from_file = [&](const char* flag, const char* key, auto& var) {
        auto* opt = active->get_option_no_throw(flag);
        if (opt && opt->count() == 0 && file_config.contains(key)) {
          try {
            var = file_config.at(key).get<std::decay_t<decltype(var)>>();
          } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::InvalidInput, std::string("config key '") + key + "': " + e.what());
          }
        }
      };
      // The certificate is a JSON document unless CSV is asked for.
      if (active == sub_dom && active->get_option("--format")->count() == 0) common.format = "json";
      from_file("--format", "format", common.format);
      from_file("--workers", "workers", common.workers);
      from_file("--plot", "plot", common.plot_path);
      if (common.format != "csv" && common.format != "json") {
        throw Error(ErrorKind::InvalidInput, "format must be csv or json");
      }
      if (common.workers < 1) throw Error(ErrorKind::InvalidInput, "workers must be >= 1");
      Json resolved = b.resolved();
      resolved["format"] = common.format;
      if (!common.plot_path.empty()) resolved["plot"] = common.plot_path;
      return resolved;
    };

    if (sub_est->parsed()) {
      const Json resolved = finish(bind_estimate);
      if (est.input.empty()) throw Error(ErrorKind::InvalidInput, "--input is required");
      return cmd_estimate(est, common, resolved, out);
    }
    if (sub_risk->parsed()) {
      const Json resolved = finish(bind_risk);
      if (risk.reps < kMinReplicates && risk.method == "mc") {
        throw Error(ErrorKind::InvalidPlan, "at least 100 replicates are required");
      }
      return cmd_risk(risk, common, resolved, out);
    }
    if (sub_dom->parsed()) {
      const Json resolved = finish(bind_dominance);
      return cmd_dominance(dom, common, resolved, out);
    }
    if (sub_conv->parsed()) {
      const Json resolved = finish(bind_convexity);
      return cmd_convexity(conv, common, resolved, out, bind_convexity.given("ntilde"));
    }
    if (sub_asym->parsed()) {
      const Json resolved = finish(bind_asym);
      return cmd_asymptotics(asym, common, resolved, out);
    }
    if (sub_sim->parsed()) {
      const Json resolved = finish(bind_sim);
      return cmd_simulate(sim, common, resolved, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kInputError;
}

}  // namespace margbayes::cli
