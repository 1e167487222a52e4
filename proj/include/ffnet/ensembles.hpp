#pragma once

#include "ffnet/network.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ffnet {

/// Each potential edge between consecutive layers is present independently with probability p.
LayeredNetwork random_network(const std::vector<std::size_t>& layer_sizes, double p, std::uint64_t seed);

struct EnsembleResult {
    std::vector<std::size_t> layer_sizes;
    double p = 0;
    std::size_t trials = 0;
    std::size_t ideal_count = 0;
    double fraction = 0;
    double ci95_halfwidth = 0;
    std::uint64_t seed = 0;
};

/// Key mixed into trial seeds; depends only on the cell's sizes and probability,
/// so adding or reordering sweep cells never changes another cell's trials.
std::uint64_t cell_key(const std::vector<std::size_t>& layer_sizes, double p);
std::uint64_t trial_seed(std::uint64_t master_seed, const std::vector<std::size_t>& layer_sizes, double p,
                         std::size_t trial);

/// Ideality verdict used by the ensembles: the connectivity test for two
/// explicit layers, the exact weight-profile test under unit precisions otherwise.
bool ensemble_is_ideal(const LayeredNetwork& net);

/// Fraction of ideal networks among `trials` random draws.
EnsembleResult p_ideal(const std::vector<std::size_t>& layer_sizes, double p, std::size_t trials,
                       std::uint64_t master_seed, unsigned threads = 0);

inline constexpr std::size_t kDefaultSweepTrials = 200;
inline constexpr std::uint64_t kDefaultSeed = 20170101;

struct SweepSpec {
    std::vector<std::vector<std::size_t>> layer_size_grid;
    std::vector<double> probabilities;
    std::size_t trials = kDefaultSweepTrials;
    std::uint64_t master_seed = kDefaultSeed;
};

void validate_sweep(const SweepSpec& spec);

/// Grid-major Cartesian product of sizes and probabilities.
std::vector<EnsembleResult> sweep(const SweepSpec& spec, unsigned threads = 0);

std::string sweep_csv(const std::vector<EnsembleResult>& results);

} // namespace ffnet
