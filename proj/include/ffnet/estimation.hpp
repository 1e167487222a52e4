#pragma once

#include "ffnet/network.hpp"
#include "ffnet/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ffnet {

/// Per-agent weights on first-layer measurements for one layer.
///
/// Row i is what agent i applies to the measurement vector. Rows of valid
/// agents sum exactly to one; agents without any information are marked
/// invalid and carry a zero row.
struct WeightProfile {
    std::vector<RationalVector> rows;
    std::vector<bool> valid;

    std::size_t size() const { return rows.size(); }
    std::vector<RationalVector> valid_rows() const;
};

/// Covariance of the estimates within one layer. Symmetric.
struct CovarianceMatrix {
    std::vector<RationalVector> entries;
};

struct FuseResult {
    RationalVector beta;      // one coefficient per provider row, zero off the kept subset
    RationalVector fused_row; // weights on first-layer measurements
    std::vector<std::size_t> kept;
    Rational variance;        // 1 / (1' R^-1 1) over the kept providers
};

/// Minimum-variance unbiased combination of correlated estimates.
///
/// Each provider row holds the first-layer weights behind one incoming
/// estimate. The earliest maximal linearly independent subset of providers
/// (in the given order) is kept; redundant providers get zero weight, which
/// leaves the fused estimate unchanged.
FuseResult fuse(std::span<const RationalVector> provider_rows, const PrecisionVector& precisions);

/// Indices of the earliest maximal linearly independent subset, scanning in order.
std::vector<std::size_t> independent_prefix_subset(std::span<const RationalVector> rows, std::size_t dimension);

struct Propagation {
    std::vector<WeightProfile> profiles;       // one per explicit layer
    std::vector<CovarianceMatrix> covariances; // one per explicit layer
    /// Local weights each layer applies to the previous one (empty for layer 0).
    std::vector<std::vector<RationalVector>> local_weights;
};

Propagation propagate(const LayeredNetwork& net, const PrecisionVector& precisions);

/// Same weight profiles as propagate(), without covariances or local weights.
std::vector<WeightProfile> propagate_weights(const LayeredNetwork& net, const PrecisionVector& precisions);

/// A (profile-row) * Diag(1/w) * A'.
CovarianceMatrix layer_covariance(const WeightProfile& profile, const PrecisionVector& precisions);

struct FinalEstimate {
    RationalVector alpha;
    Rational variance;
    Rational ideal_variance;
};

/// Estimate of the implicit aggregator that listens to every valid agent of the last layer.
FinalEstimate final_estimate(const LayeredNetwork& net, const PrecisionVector& precisions);
FinalEstimate final_estimate_from_profile(const WeightProfile& last_layer, const PrecisionVector& precisions);

/// Sum alpha_i b_i: the bias of the final estimate under additive first-layer biases.
Rational final_bias(const RationalVector& alpha, const RationalVector& biases);

/// Variance sum alpha_i^2 / w_i of a fixed linear combination of measurements.
Rational weighting_variance(const RationalVector& alpha, const PrecisionVector& precisions);

inline constexpr const char* kGeneratorName = "mt19937_64";
inline constexpr std::size_t kSimulationChunk = 8192;

struct SimulationResult {
    double mean = 0;
    double variance = 0;       // unbiased sample variance
    double variance_stderr = 0; // from the sample fourth central moment
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string generator = kGeneratorName;
};

/// Draws Gaussian first-layer measurements around `true_value` (plus optional
/// biases) and applies the final weights. Trials are split into fixed-size
/// chunks, each seeded from (seed, chunk index), so the result depends only on
/// the seed and trial count, never on the thread count.
SimulationResult simulate(const LayeredNetwork& net, const PrecisionVector& precisions, double true_value,
                          const std::optional<RationalVector>& biases, std::size_t trials, std::uint64_t seed,
                          unsigned threads = 0);

/// Monte Carlo draws for a fixed weight vector; the core of simulate().
SimulationResult simulate_weights(const RationalVector& alpha, const PrecisionVector& precisions, double true_value,
                                  const std::optional<RationalVector>& biases, std::size_t trials,
                                  std::uint64_t seed, unsigned threads = 0);

} // namespace ffnet
