#include <doctest.h>

#include <sstream>

#include "parity/errors.hpp"
#include "parity/io.hpp"

using namespace parity;

TEST_SUITE("io") {
  TEST_CASE("instance round trip") {
    const auto inst = sample_instance(DistributionSpec::normal(0.5, 2.0), GraphSpec::erdos_renyi(7, 0.5, 3), 9);
    const auto back = instance_from_json(instance_to_json(inst));
    REQUIRE(back.n() == inst.n());
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j) CHECK(back.coupling(i, j) == inst.coupling(i, j));
    CHECK(back.offset() == inst.offset());
  }

  TEST_CASE("instance files are one-based") {
    const Json j = Json::parse(R"({"n": 3, "couplings": [[1, 3, -2.0]]})");
    const auto inst = instance_from_json(j);
    CHECK(inst.coupling(0, 2) == -2.0);
    CHECK_THROWS(instance_from_json(Json::parse(R"({"n": 3, "couplings": [[0, 3, 1.0]]})")));
  }

  TEST_CASE("graph and assignment round trips") {
    const auto g = Graph::cycle(5);
    CHECK(graph_from_json(graph_to_json(g)).edge_count() == 5);
    const auto h = assignment_from_json(assignment_to_json(ConstraintAssignment::homogeneous(2.5)));
    CHECK(h.is_homogeneous());
    CHECK(h.homogeneous_value() == 2.5);
    const auto p = assignment_from_json(Json::parse(R"({"strengths": [1, 2, 3]})"));
    CHECK(p.strengths() == std::vector<double>{1, 2, 3});
    CHECK(assignment_from_json(Json(4.0)).homogeneous_value() == 4.0);
  }

  TEST_CASE("profile round trip") {
    const ParityLayout layout(6);
    const DefectProfile omega({0, 3, 7});
    CHECK(profile_from_json(profile_to_json(omega, layout), layout) == omega);
    CHECK(profile_to_json(DefectProfile({0}), layout) == Json::parse("[[1, 2]]"));
  }

  TEST_CASE("ensemble configuration") {
    const Json j = Json::parse(R"({
      "pipeline": "ensemble",
      "distribution": {"kind": "normal", "mean": 0, "stddev": 1},
      "n_range": {"min": 4, "max": 8, "step": 2},
      "samples": {"kind": "geometric", "base": 1000, "n0": 4, "floor": 10},
      "quantities": ["l0", "c_minus_1"],
      "master_seed": 7
    })");
    CHECK(pipeline_of(j) == "ensemble");
    const auto cfg = ensemble_config_from_json(j);
    CHECK(cfg.n_range == std::vector<int>{4, 6, 8});
    CHECK(cfg.master_seed == 7);
    CHECK(cfg.schedule.samples(6) == 250);
  }

  TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(ensemble_config_from_json(Json::parse(R"({"n_range": [4], "bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(distribution_from_json(Json::parse(R"({"kind": "normal", "sigma": 1})")), ConfigError);
    CHECK_THROWS_AS(sweep_config_from_json(Json::parse(R"({"n_range": [4, 5, 6, 7], "kinds": ["normal"], "x": 0})")),
                    ConfigError);
    CHECK_THROWS_AS(sweep_config_from_json(Json::parse(R"({"n_range": [4, 5, 6]})")), ConfigError);
    CHECK_THROWS_AS(evt_config_from_json(Json::parse(R"({"delta": 0.8, "extra": true})")), ConfigError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), ConfigError);
  }

  TEST_CASE("evt configuration") {
    const auto cfg = evt_config_from_json(Json::parse(R"({"delta": 0.79, "model_range": [6, 20], "polynomial": [0, 1, 0]})"));
    CHECK(cfg.delta == 0.79);
    CHECK(cfg.n_min == 6);
    CHECK(cfg.n_max == 20);
    CHECK(cfg.polynomial(5.0) == 5.0);
    CHECK_FALSE(cfg.calibration.has_value());
  }

  TEST_CASE("CSV tables start with a schema line") {
    EnsembleConfig cfg;
    cfg.n_range = {4};
    cfg.schedule = SampleSchedule::fixed_count(3);
    const auto r = run_ensemble(cfg);
    std::ostringstream rec, agg, evt;
    write_records_csv(rec, r);
    write_aggregates_csv(agg, r);
    write_evt_csv(evt, evt_model_curves(4, 6, 0.8));
    CHECK(rec.str().rfind("# schema: parity-constraints/", 0) == 0);
    CHECK(rec.str().find("n,index,seed,status,l0,c_minus_1") != std::string::npos);
    CHECK(agg.str().find("l0_mean,l0_var,l0_se") != std::string::npos);
    CHECK(evt.str().rfind("# schema:", 0) == 0);
  }
}
