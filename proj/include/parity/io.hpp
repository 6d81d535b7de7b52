#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "parity/bounds.hpp"
#include "parity/constraints.hpp"
#include "parity/ensemble.hpp"
#include "parity/evt.hpp"
#include "parity/instances.hpp"
#include "parity/layout.hpp"
#include "parity/solver.hpp"

namespace parity {

using Json = nlohmann::json;

// Version tag written as the first line of every CSV table.
inline constexpr const char* kCsvSchemaVersion = "1";

// Files use 1-based spin and plaquette indices throughout.
Json instance_to_json(const IsingInstance& inst);
IsingInstance instance_from_json(const Json& j);

Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

// {"homogeneous": c} or {"strengths": [...]}.
ConstraintAssignment assignment_from_json(const Json& j);
Json assignment_to_json(const ConstraintAssignment& a);

// List of [i, j] plaquette coordinates.
DefectProfile profile_from_json(const Json& j, const ParityLayout& layout);
Json profile_to_json(const DefectProfile& omega, const ParityLayout& layout);

Json spectrum_to_json(const SpectrumSummary& s);
Json bounds_to_json(const BoundsReport& r);
Json verdict_to_json(const Verdict& v, const ParityLayout& layout);
Json lp_to_json(const LpSolution& lp, const ParityLayout& layout);
Json fit_to_json(const FitResult& f);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Config files carry a "pipeline" key naming the consumer. Unknown keys are
// rejected with ConfigError.
std::string pipeline_of(const Json& j);
EnsembleConfig ensemble_config_from_json(const Json& j);
SweepConfig sweep_config_from_json(const Json& j);
DistributionSpec distribution_from_json(const Json& j);

struct EvtConfig {
  double delta = kDefaultDelta;
  int n_min = 4;
  int n_max = 40;
  Quadratic polynomial;
  std::optional<EnsembleConfig> calibration;  // SK ensemble used to refit delta
};

EvtConfig evt_config_from_json(const Json& j);

// CSV tables.
void write_records_csv(std::ostream& os, const EnsembleResult& r);
void write_aggregates_csv(std::ostream& os, const EnsembleResult& r);
void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells);
void write_evt_csv(std::ostream& os, const std::vector<EvtModelRow>& rows);
// (n, seed, primal, dual, a1_plus, c1_sdp[, c_minus_1]) per sample.
void write_sdp_csv(std::ostream& os, const EnsembleResult& r);

}  // namespace parity
