#pragma once

#include "ffnet/analysis.hpp"
#include "ffnet/ensembles.hpp"
#include "ffnet/estimation.hpp"
#include "ffnet/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ffnet {

/// Everything `analyze` reports about one network. Indices are 0-based here
/// and become 1-based in the JSON and text renderings.
struct AnalysisReport {
    std::vector<std::size_t> layer_sizes;
    ValidationReport validation;
    IdealityVerdict verdict;
    std::optional<WMotifWitness> witness;
    std::optional<FinalEstimate> estimate; // absent when no last-layer agent carries information
    std::vector<std::vector<bool>> layer_validity;
    std::optional<BinaryMatrix> reduced_connectivity; // two explicit layers only
};

AnalysisReport analyze_network(const LayeredNetwork& net, const PrecisionVector& precisions);

std::string analysis_json(const AnalysisReport& report);
/// One row per first-layer agent: agent, alpha_exact, alpha_float.
std::string analysis_csv(const AnalysisReport& report);
/// Short human-readable summary.
std::string analysis_text(const AnalysisReport& report);

struct SimulationReport {
    SimulationResult result;
    double true_value = 0;
    Rational analytic_variance;
    std::optional<Rational> analytic_bias;
};

std::string simulation_json(const SimulationReport& report);
std::string simulation_csv(const SimulationReport& report);

std::string sweep_json(const std::vector<EnsembleResult>& results);

} // namespace ffnet
