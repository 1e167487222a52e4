#include "ffnet/errors.hpp"
#include "ffnet/oracle.hpp"
#include "ffnet/reports.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

using namespace ffnet;
using Json = nlohmann::json;

TEST_SUITE("reports") {

TEST_CASE("analysis JSON of the overlapping pair") {
    const auto report = analyze_network(oracle::reference::overlapping_pair(), PrecisionVector::ones(3));
    const auto j = Json::parse(analysis_json(report));
    CHECK(j["layers"] == Json{3, 2});
    CHECK(j["valid"] == true);
    CHECK(j["isolated_agents"].empty());
    CHECK(j["ideal"] == false);
    CHECK(j["verdict"] == "non-ideal");
    CHECK(j["certificate"].is_null());
    CHECK(j["w_motif_witness"]["layer"] == 2);
    CHECK(j["w_motif_witness"]["agents"] == Json{1, 2});
    CHECK(j["w_motif_witness"]["sources"] == Json{1, 2, 3});
    CHECK(j["alpha"]["exact"] == Json{"1/4", "1/2", "1/4"});
    CHECK(j["alpha"]["float"][1] == 0.5);
    CHECK(j["variance"]["exact"] == "3/8");
    CHECK(j["ideal_variance"]["exact"] == "1/3");
    CHECK(j["reduced_connectivity"] == Json{{1, 1, 0}, {0, 1, 1}});

    const auto text = analysis_text(report);
    CHECK(text.find("non-ideal: variance 3/8 (0.375), ideal variance 1/3") == 0);
    CHECK(text.find("W-motif: layer 2 agents (1, 2), sources (1, 2, 3)") != std::string::npos);
    CHECK(analysis_csv(report) == "agent,alpha_exact,alpha_float\n1,1/4,0.25\n2,1/2,0.5\n3,1/4,0.25\n");
}

TEST_CASE("analysis JSON of an ideal network with isolated agents") {
    // Source 3 feeds nobody; agent 2 of the second layer hears nobody.
    const auto net = test::three_layer({{1, 1, 0}, {0, 0, 0}});
    const auto j = Json::parse(analysis_json(analyze_network(net, PrecisionVector::ones(3))));
    CHECK(j["valid"] == false);
    REQUIRE(j["isolated_agents"].size() == 2);
    CHECK(j["isolated_agents"][0] == Json{{"layer", 2}, {"agent", 2}, {"reason", "zero in-degree"}});
    CHECK(j["isolated_agents"][1] == Json{{"layer", 1}, {"agent", 3}, {"reason", "zero out-degree"}});
    CHECK(j["ideal"] == false);
    CHECK(j["layer_validity"][1] == Json{true, false});
}

TEST_CASE("ideal verdict carries a certificate") {
    const auto j = Json::parse(analysis_json(analyze_network(oracle::reference::triangle(), PrecisionVector::ones(3))));
    CHECK(j["ideal"] == true);
    CHECK(j["certificate"].size() == 3);
    CHECK_FALSE(j["w_motif_witness"].is_null()); // a W-motif does not rule out ideality
    CHECK(j["variance"]["exact"] == "1/3");
}

TEST_CASE("no information and contract errors") {
    const auto net = test::three_layer({{0, 0}});
    const auto report = analyze_network(net, PrecisionVector::ones(2));
    CHECK_FALSE(report.estimate);
    const auto j = Json::parse(analysis_json(report));
    CHECK(j["alpha"].is_null());
    CHECK(j["variance"].is_null());
    CHECK(analysis_text(report).find("no agent in the last layer") != std::string::npos);
    CHECK_THROWS_AS(analyze_network(net, PrecisionVector::ones(3)), ContractViolation);
}

TEST_CASE("simulation and sweep reports") {
    SimulationReport sim;
    sim.result.trials = 10;
    sim.result.seed = 3;
    sim.result.generator = "mt19937_64";
    sim.true_value = 1.5;
    sim.analytic_variance = Rational(3, 8);
    auto j = Json::parse(simulation_json(sim));
    CHECK(j["trials"] == 10);
    CHECK(j["analytic_variance"]["exact"] == "3/8");
    CHECK(j["analytic_bias"].is_null());
    sim.analytic_bias = Rational(1, 2);
    CHECK(Json::parse(simulation_json(sim))["analytic_bias"]["float"] == 0.5);
    CHECK(simulation_csv(sim).find("\n10,3,mt19937_64,1.5,") != std::string::npos);

    EnsembleResult r{{4, 5}, 0.5, 10, 7, 0.7, 0.1, 9};
    j = Json::parse(sweep_json({r}));
    CHECK(j["results"][0]["n_layers"] == 3);
    CHECK(j["results"][0]["layers"] == Json{4, 5});
    CHECK(j["results"][0]["ideal_count"] == 7);
    CHECK(j["ideality_convention"].is_string());
}

}
