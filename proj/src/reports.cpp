#include "ffnet/reports.hpp"

#include "ffnet/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

namespace ffnet {

using Json = nlohmann::ordered_json;

namespace {

Json exact_and_float(const Rational& r) { return Json{{"exact", to_string(r)}, {"float", to_double(r)}}; }

Json vector_json(const RationalVector& v) { return Json{{"exact", to_strings(v)}, {"float", to_doubles(v)}}; }

Json agent_json(const AgentRef& a, const char* reason) {
    return Json{{"layer", a.layer + 1}, {"agent", a.index + 1}, {"reason", reason}};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

AnalysisReport analyze_network(const LayeredNetwork& net, const PrecisionVector& precisions) {
    if (precisions.size() != net.first_layer_size())
        throw ContractViolation("precision vector has " + std::to_string(precisions.size()) +
                                " entries but the first layer has " + std::to_string(net.first_layer_size()));
    AnalysisReport report;
    report.layer_sizes = net.layer_sizes();
    report.validation = validate(net);
    const auto profiles = propagate_weights(net, precisions);
    for (const auto& profile : profiles)
        report.layer_validity.push_back(profile.valid);
    report.verdict = is_ideal_from_profile(profiles.back(), precisions);
    report.witness = has_w_motif(net);
    try {
        report.estimate = final_estimate_from_profile(profiles.back(), precisions);
    } catch (const NoInformationError&) {
    }
    if (net.layer_count() == 2)
        report.reduced_connectivity = reduce(net).connectivity(0);
    return report;
}

std::string analysis_json(const AnalysisReport& report) {
    Json j;
    j["layers"] = report.layer_sizes;
    Json isolated = Json::array();
    for (const auto& a : report.validation.zero_in_degree)
        isolated.push_back(agent_json(a, "zero in-degree"));
    for (const auto& a : report.validation.zero_out_degree)
        isolated.push_back(agent_json(a, "zero out-degree"));
    j["valid"] = report.validation.ok();
    j["isolated_agents"] = std::move(isolated);
    j["ideal"] = report.verdict.ideal;
    j["verdict"] = report.verdict.ideal ? "ideal" : "non-ideal";
    j["certificate"] = report.verdict.certificate ? Json(to_strings(*report.verdict.certificate)) : Json();
    if (report.witness) {
        const auto& w = *report.witness;
        j["w_motif_witness"] = Json{{"layer", w.to_layer + 1},
                                    {"agents", {w.agents[0] + 1, w.agents[1] + 1}},
                                    {"sources", {w.sources[0] + 1, w.sources[1] + 1, w.sources[2] + 1}}};
    } else {
        j["w_motif_witness"] = nullptr;
    }
    if (report.estimate) {
        j["alpha"] = vector_json(report.estimate->alpha);
        j["variance"] = exact_and_float(report.estimate->variance);
        j["ideal_variance"] = exact_and_float(report.estimate->ideal_variance);
    } else {
        j["alpha"] = nullptr;
        j["variance"] = nullptr;
        j["ideal_variance"] = nullptr;
    }
    j["layer_validity"] = report.layer_validity;
    j["reduced_connectivity"] =
        report.reduced_connectivity ? Json(report.reduced_connectivity->to_rows()) : Json();
    return j.dump(2) + "\n";
}

std::string analysis_csv(const AnalysisReport& report) {
    std::ostringstream out;
    out << "agent,alpha_exact,alpha_float\n";
    if (report.estimate)
        for (std::size_t i = 0; i < report.estimate->alpha.size(); ++i)
            out << i + 1 << ',' << to_string(report.estimate->alpha[i]) << ','
                << format_double(to_double(report.estimate->alpha[i])) << '\n';
    return out.str();
}

std::string analysis_text(const AnalysisReport& report) {
    std::ostringstream out;
    out << (report.verdict.ideal ? "ideal" : "non-ideal");
    if (report.estimate)
        out << ": variance " << to_string(report.estimate->variance) << " ("
            << format_double(to_double(report.estimate->variance)) << "), ideal variance "
            << to_string(report.estimate->ideal_variance);
    else
        out << ": no agent in the last layer receives any information";
    out << '\n';
    if (!report.validation.ok())
        out << "warning: " << report.validation.isolated_agents().size() << " isolated agent(s)\n";
    if (report.witness) {
        const auto& w = *report.witness;
        out << "W-motif: layer " << w.to_layer + 1 << " agents (" << w.agents[0] + 1 << ", " << w.agents[1] + 1
            << "), sources (" << w.sources[0] + 1 << ", " << w.sources[1] + 1 << ", " << w.sources[2] + 1 << ")\n";
    }
    return out.str();
}

std::string simulation_json(const SimulationReport& report) {
    const auto& r = report.result;
    Json j;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["generator"] = r.generator;
    j["true_value"] = report.true_value;
    j["mean"] = r.mean;
    j["variance"] = r.variance;
    j["variance_stderr"] = r.variance_stderr;
    j["analytic_variance"] = exact_and_float(report.analytic_variance);
    j["analytic_bias"] = report.analytic_bias ? exact_and_float(*report.analytic_bias) : Json();
    return j.dump(2) + "\n";
}

std::string simulation_csv(const SimulationReport& report) {
    const auto& r = report.result;
    std::ostringstream out;
    out << "trials,seed,generator_name,true_value,mean,variance,variance_stderr,analytic_variance,analytic_bias\n";
    out << r.trials << ',' << r.seed << ',' << r.generator << ',' << format_double(report.true_value) << ','
        << format_double(r.mean) << ',' << format_double(r.variance) << ',' << format_double(r.variance_stderr)
        << ',' << format_double(to_double(report.analytic_variance)) << ','
        << (report.analytic_bias ? format_double(to_double(*report.analytic_bias)) : "") << '\n';
    return out.str();
}

std::string sweep_json(const std::vector<EnsembleResult>& results) {
    Json rows = Json::array();
    for (const auto& r : results)
        rows.push_back(Json{{"n_layers", r.layer_sizes.size() + 1},
                            {"layers", r.layer_sizes},
                            {"p", r.p},
                            {"trials", r.trials},
                            {"ideal_count", r.ideal_count},
                            {"fraction", r.fraction},
                            {"ci95_halfwidth", r.ci95_halfwidth},
                            {"master_seed", r.seed},
                            {"generator_name", kGeneratorName}});
    Json j;
    j["ideality_convention"] = "two explicit layers: connectivity row-space test; deeper: unit precisions";
    j["results"] = std::move(rows);
    return j.dump(2) + "\n";
}

} // namespace ffnet
