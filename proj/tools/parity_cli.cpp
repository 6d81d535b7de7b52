// Command line front end: single-instance solves, verification, LPs and the
// ensemble pipelines driven by JSON config files.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "parity/analytic.hpp"
#include "parity/bounds.hpp"
#include "parity/ensemble.hpp"
#include "parity/errors.hpp"
#include "parity/evt.hpp"
#include "parity/io.hpp"
#include "parity/layout.hpp"
#include "parity/sdp.hpp"
#include "parity/solver.hpp"

namespace fs = std::filesystem;
using namespace parity;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0 keeps the config value
  std::optional<int> kmax;
  std::string out;
  std::string config;
  std::size_t max_samples = 0;
};

void emit(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(out, j);
  }
}

fs::path output_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  return os;
}

void apply_overrides(EnsembleConfig& cfg, const Common& c) {
  if (c.seed) cfg.master_seed = *c.seed;
  if (c.threads > 0) cfg.threads = c.threads;
  if (c.kmax) cfg.k_max = *c.kmax;
  if (c.max_samples > 0) cfg.schedule.cap = c.max_samples;
  cfg.validate();
}

Json load_config(const Common& c, const std::string& expected) {
  if (c.config.empty()) throw ConfigError("--config is required");
  Json j = read_json_file(c.config);
  const std::string pipeline = pipeline_of(j);
  if (!pipeline.empty() && pipeline != expected)
    throw ConfigError("config is for the '" + pipeline + "' pipeline, not '" + expected + "'");
  return j;
}

EnumerationLimits limits_for(const Common& c, bool higher) {
  EnumerationLimits limits;
  limits.threads = c.threads > 0 ? c.threads : 1;
  limits.allow_higher_defects = higher;
  return limits;
}

void summarize(const EnsembleResult& r, std::ostream& os) {
  for (const Aggregate& a : r.aggregates) {
    os << "n=" << a.n << " samples=" << a.samples;
    if (a.failures) os << " failures=" << a.failures;
    for (std::size_t c = 0; c < r.columns.size(); ++c)
      os << ' ' << r.columns[c] << '=' << a.stats[c].mean;
    os << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity-encoding constraint strengths: exact bounds, LPs, SDP and ensemble studies"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Master seed override");
    sub->add_option("--threads", common.threads, "Worker threads (0 = config/default)");
    sub->add_option("--out", common.out, "Output file or directory");
  };

  // generate
  auto* gen = app.add_subcommand("generate", "Sample an instance and write it as JSON");
  int gen_n = 8;
  std::string gen_dist = "normal", gen_graph = "complete", gen_problem = "couplings";
  double gen_mean = 0.0, gen_std = 1.0, gen_p = 0.5, gen_bimodal = 0.5;
  std::optional<double> gen_ratio, gen_u;
  gen->add_option("-n,--n", gen_n, "Number of logical spins")->required();
  gen->add_option("--dist", gen_dist, "normal | uniform | bimodal");
  gen->add_option("--mean", gen_mean, "Normal mean");
  gen->add_option("--stddev", gen_std, "Normal standard deviation");
  gen->add_option("--ratio", gen_ratio, "Unit-variance distribution with this mean/stddev");
  gen->add_option("--bimodal-p", gen_bimodal, "P(J = +1) for bimodal couplings");
  gen->add_option("--graph", gen_graph, "complete | erdos_renyi");
  gen->add_option("--p", gen_p, "Edge probability for erdos_renyi");
  gen->add_option("--problem", gen_problem, "couplings | maxcut | minbisection");
  gen->add_option("--u", gen_u, "MinBisection penalty (default: threshold + 1)");
  add_common(gen);

  // layout
  auto* lay = app.add_subcommand("layout", "Print plaquettes and defect masks");
  int lay_n = 5;
  lay->add_option("-n,--n", lay_n, "Number of logical spins")->required();

  // solve / verify / lp
  std::string instance_path;
  bool higher = false;
  auto* solve = app.add_subcommand("solve", "Spectrum, a_k and the homogeneous bound family");
  solve->add_option("--instance", instance_path, "Instance JSON")->required();
  solve->add_option("--kmax", common.kmax, "Largest defect count (default 2, capped at q)");
  solve->add_flag("--allow-higher", higher, "Permit k >= 3 enumeration");
  add_common(solve);

  auto* verify = app.add_subcommand("verify", "Check a constraint assignment against a profile family");
  std::string assignment_text, profiles_path;
  bool verify_full = false;
  verify->add_option("--instance", instance_path, "Instance JSON")->required();
  verify->add_option("--assignment", assignment_text, "Number (homogeneous) or assignment JSON file")
      ->required();
  verify->add_option("--kmax", common.kmax, "Check profiles with at most k defects");
  verify->add_flag("--full", verify_full, "Check every profile");
  verify->add_option("--profiles", profiles_path, "JSON list of profiles ([[i, j], ...] each)");
  add_common(verify);

  auto* lp = app.add_subcommand("lp", "Optimal inhomogeneous strengths by linear programming");
  bool lp_full = false;
  lp->add_option("--instance", instance_path, "Instance JSON")->required();
  lp->add_option("--kmax", common.kmax, "Truncate to profiles with at most k defects");
  lp->add_flag("--full", lp_full, "All profiles (q <= 10)");
  add_common(lp);

  // ensemble pipelines
  auto* ens = app.add_subcommand("ensemble", "Run an ensemble config and write CSV tables");
  ens->add_option("--config", common.config, "Ensemble config JSON")->required();
  ens->add_option("--kmax", common.kmax, "Override k_max");
  ens->add_option("--max-samples", common.max_samples, "Cap samples per size");
  add_common(ens);

  auto* fit = app.add_subcommand("fit", "Fit y = beta n^alpha + gamma");
  std::string fit_input, fit_column;
  bool fit_weighted = false;
  fit->add_option("--input", fit_input, "CSV with n,y columns or an aggregates table")->required();
  fit->add_option("--column", fit_column, "Aggregate column to fit (uses <column>_mean)");
  fit->add_flag("--weighted", fit_weighted, "Weight by 1/se^2 (aggregates tables only)");
  add_common(fit);

  auto* sweep = app.add_subcommand("sweep", "Fitted exponent of mean c_-1 over a mu/sigma grid");
  sweep->add_option("--config", common.config, "Sweep config JSON")->required();
  sweep->add_option("--max-samples", common.max_samples, "Cap samples per size");
  add_common(sweep);

  auto* evt = app.add_subcommand("evt", "Extreme-value model curves and delta calibration");
  std::optional<double> evt_delta;
  evt->add_option("--config", common.config, "EVT config JSON");
  evt->add_option("--delta", evt_delta, "Override delta");
  evt->add_option("--max-samples", common.max_samples, "Cap samples per size in calibration");
  add_common(evt);

  auto* sdp = app.add_subcommand("sdp", "SDP bound c_-1,sdp over a MaxCut ensemble");
  sdp->add_option("--config", common.config, "Ensemble config JSON with problem = maxcut")->required();
  sdp->add_option("--max-samples", common.max_samples, "Cap samples per size");
  add_common(sdp);

  auto* ana = app.add_subcommand("analytic", "Closed-form ferro/antiferro limits");
  int ana_n = 6;
  ana->add_option("-n,--n", ana_n, "Number of logical spins")->required();
  add_common(ana);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*gen) {
      DistributionSpec dist = gen_ratio ? DistributionSpec::with_ratio(gen_dist, *gen_ratio)
                              : gen_dist == "normal" ? DistributionSpec::normal(gen_mean, gen_std)
                              : gen_dist == "uniform" ? DistributionSpec::uniform(-1.0, 1.0)
                              : gen_dist == "bimodal" ? DistributionSpec::bimodal(gen_bimodal)
                                                      : throw ConfigError("unknown distribution");
      const std::uint64_t seed = common.seed.value_or(1);
      const GraphSpec graph = gen_graph == "complete" ? GraphSpec::complete(gen_n)
                              : gen_graph == "erdos_renyi"
                                  ? GraphSpec::erdos_renyi(gen_n, gen_p, derive_seed(seed, 1))
                                  : throw ConfigError("unknown graph family");
      const Problem problem = parse_problem(gen_problem);
      IsingInstance inst = problem == Problem::Couplings ? sample_instance(dist, graph, seed)
                           : problem == Problem::MaxCut   ? encode_maxcut(graph.realize())
                                                          : encode_minbisection(graph.realize(), gen_u);
      emit(instance_to_json(inst), common.out);
    } else if (*lay) {
      std::cout << ParityLayout(lay_n).dump();
    } else if (*solve) {
      const IsingInstance inst = instance_from_json(read_json_file(instance_path));
      const ParityLayout layout(inst.n());
      const EnumerationLimits limits = limits_for(common, higher);
      const int k = std::min(common.kmax.value_or(2), std::max(1, layout.plaquette_count()));
      Json out;
      out["spectrum"] = spectrum_to_json(logical_spectrum(inst, limits));
      if (layout.plaquette_count() > 0)
        out["bounds"] = bounds_to_json(homogeneous_optimum(inst, layout, k, limits));
      emit(out, common.out);
    } else if (*verify) {
      const IsingInstance inst = instance_from_json(read_json_file(instance_path));
      const ParityLayout layout(inst.n());
      ConstraintAssignment assignment = ConstraintAssignment::homogeneous(0.0);
      try {
        std::size_t used = 0;
        const double c = std::stod(assignment_text, &used);
        if (used != assignment_text.size()) throw std::invalid_argument("trailing text");
        assignment = ConstraintAssignment::homogeneous(c);
      } catch (const std::invalid_argument&) {
        assignment = assignment_from_json(read_json_file(assignment_text));
      }
      ProfileFamily family = ProfileFamily::full();
      if (!profiles_path.empty()) {
        std::vector<DefectProfile> list;
        for (const auto& p : read_json_file(profiles_path)) list.push_back(profile_from_json(p, layout));
        family = ProfileFamily::explicit_list(std::move(list));
      } else if (common.kmax && !verify_full) {
        family = ProfileFamily::up_to(*common.kmax);
      }
      const Verdict v = verify_assignment(inst, layout, assignment, family,
                                          limits_for(common, family.kind != ProfileFamily::Kind::UpTo ||
                                                                 common.kmax.value_or(0) >= 3));
      Json out = verdict_to_json(v, layout);
      out["family"] = family.describe();
      emit(out, common.out);
      return v.satisfied ? 0 : 1;
    } else if (*lp) {
      const IsingInstance inst = instance_from_json(read_json_file(instance_path));
      const ParityLayout layout(inst.n());
      const ProfileFamily family = (lp_full || !common.kmax) ? ProfileFamily::full()
                                                             : ProfileFamily::up_to(*common.kmax);
      const LpSolution sol = solve_lp(inst, layout, family, limits_for(common, true));
      Json out = lp_to_json(sol, layout);
      out["family"] = family.describe();
      emit(out, common.out);
    } else if (*ens) {
      EnsembleConfig cfg = ensemble_config_from_json(load_config(common, "ensemble"));
      apply_overrides(cfg, common);
      const EnsembleResult r = run_ensemble(cfg);
      const fs::path dir = output_dir(common.out);
      auto records = open_csv(dir / "records.csv");
      write_records_csv(records, r);
      auto aggregates = open_csv(dir / "aggregates.csv");
      write_aggregates_csv(aggregates, r);
      summarize(r, std::cout);
    } else if (*fit) {
      std::ifstream in(fit_input);
      if (!in) throw ConfigError("cannot open '" + fit_input + "'");
      std::vector<std::pair<double, double>> points;
      std::vector<double> weights;
      std::string line;
      std::vector<std::string> header;
      std::size_t ycol = 1, secol = 0;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (header.empty() && !cells.empty() && !std::isdigit(static_cast<unsigned char>(cells[0][0]))) {
          header = cells;
          if (!fit_column.empty()) {
            const auto find = [&](const std::string& name) -> std::size_t {
              for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name) return i;
              throw ConfigError("no column '" + name + "' in " + fit_input);
            };
            ycol = find(fit_column + "_mean");
            if (fit_weighted) secol = find(fit_column + "_se");
          }
          continue;
        }
        if (cells.size() <= ycol) throw ConfigError("short row in " + fit_input);
        const double y = std::stod(cells[ycol]);
        if (!std::isfinite(y)) continue;
        points.emplace_back(std::stod(cells[0]), y);
        if (fit_weighted && secol) {
          const double se = std::stod(cells[secol]);
          weights.push_back(se > 0 && std::isfinite(se) ? 1.0 / (se * se) : 1.0);
        }
      }
      emit(fit_to_json(fit_power_law(points, weights)), common.out);
    } else if (*sweep) {
      SweepConfig cfg = sweep_config_from_json(load_config(common, "sweep"));
      if (common.seed) cfg.master_seed = *common.seed;
      if (common.threads > 0) cfg.threads = common.threads;
      if (common.max_samples > 0) cfg.schedule.cap = common.max_samples;
      const auto cells = scaling_sweep(cfg);
      auto os = open_csv(output_dir(common.out) / "sweep.csv");
      write_sweep_csv(os, cells);
      for (const SweepCell& c : cells)
        std::cout << c.kind << " ratio=" << c.ratio << " alpha="
                  << (c.ok ? std::to_string(c.fit.alpha) : "failed: " + c.error) << '\n';
    } else if (*evt) {
      EvtConfig cfg;
      if (!common.config.empty()) cfg = evt_config_from_json(load_config(common, "evt"));
      if (evt_delta) cfg.delta = *evt_delta;
      const fs::path dir = output_dir(common.out);
      Json summary{{"delta", cfg.delta},
                   {"sqrt_delta_log2", -asymptotic_l0_coefficient(cfg.delta)},
                   {"parisi_reference", kParisiGroundCoefficient}};
      if (cfg.calibration) {
        apply_overrides(*cfg.calibration, common);
        const EnsembleResult r = run_ensemble(*cfg.calibration);
        std::vector<std::pair<int, double>> data;
        for (const auto& [n, mean] : r.means("l0")) data.emplace_back(static_cast<int>(n), mean);
        const EvtCalibration cal = calibrate_delta(data);
        summary["calibrated_delta"] = cal.delta;
        summary["calibration_residual"] = cal.residual;
        summary["calibration_range"] = {cal.n_min, cal.n_max};
        auto agg = open_csv(dir / "calibration_aggregates.csv");
        write_aggregates_csv(agg, r);
      }
      auto os = open_csv(dir / "evt_model.csv");
      write_evt_csv(os, evt_model_curves(cfg.n_min, cfg.n_max, cfg.delta, cfg.polynomial));
      write_json_file((dir / "evt_summary.json").string(), summary);
      std::cout << summary.dump(2) << '\n';
    } else if (*sdp) {
      EnsembleConfig cfg = ensemble_config_from_json(load_config(common, "sdp"));
      apply_overrides(cfg, common);
      if (std::find(cfg.quantities.begin(), cfg.quantities.end(), Quantity::C1Sdp) == cfg.quantities.end())
        throw ConfigError("sdp config must request c1_sdp");
      const EnsembleResult r = run_ensemble(cfg);
      const fs::path dir = output_dir(common.out);
      auto rows = open_csv(dir / "sdp.csv");
      write_sdp_csv(rows, r);
      auto agg = open_csv(dir / "aggregates.csv");
      write_aggregates_csv(agg, r);
      summarize(r, std::cout);
      const auto means = r.means("c1_sdp");
      if (means.size() >= 4)
        write_json_file((dir / "c1_sdp_fit.json").string(), fit_to_json(fit_power_law(means)));
    } else if (*ana) {
      Json out;
      out["n"] = ana_n;
      const FerroLimit f = ferro_limit(ana_n);
      out["ferro"] = {{"l0", f.l0}, {"gap", f.gap}, {"a1", f.a1}, {"c", f.c}};
      const AntiferroLimit a = antiferro_limit(ana_n);
      Json af{{"c_minus_1", a.c_minus_1}};
      if (a.l0) af["l0"] = *a.l0;
      if (a.gap) af["gap"] = *a.gap;
      if (a.a1) af["a1"] = *a.a1;
      out["antiferro"] = af;
      out["complete_graph_maxcut"] = complete_graph_maxcut(ana_n);
      emit(out, common.out);
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
