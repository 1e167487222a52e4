#include "ffnet/ensembles.hpp"

#include "ffnet/analysis.hpp"
#include "ffnet/errors.hpp"
#include "ffnet/estimation.hpp"
#include "ffnet/parallel.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace ffnet {

namespace {

void check_probability(double p) {
    if (!(p > 0.0 && p <= 1.0))
        throw RangeError("connection probability must lie in (0, 1], got " + std::to_string(p));
}

// 53-bit uniform in [0, 1) from one generator output.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

LayeredNetwork random_network(const std::vector<std::size_t>& layer_sizes, double p, std::uint64_t seed) {
    check_probability(p);
    if (layer_sizes.empty())
        throw RangeError("random_network: need at least one layer");
    std::mt19937_64 rng(seed);
    std::vector<BinaryMatrix> matrices;
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        BinaryMatrix c(layer_sizes[k + 1], layer_sizes[k]);
        for (std::size_t i = 0; i < c.rows(); ++i)
            for (std::size_t j = 0; j < c.cols(); ++j)
                c.set(i, j, unit_uniform(rng) < p);
        matrices.push_back(std::move(c));
    }
    return LayeredNetwork(layer_sizes, std::move(matrices));
}

std::uint64_t cell_key(const std::vector<std::size_t>& layer_sizes, double p) {
    std::uint64_t key = mix64(layer_sizes.size());
    for (auto l : layer_sizes)
        key = mix64(key ^ l);
    return mix64(key ^ std::bit_cast<std::uint64_t>(p));
}

std::uint64_t trial_seed(std::uint64_t master_seed, const std::vector<std::size_t>& layer_sizes, double p,
                         std::size_t trial) {
    return derive_seed(master_seed, cell_key(layer_sizes, p), trial);
}

bool ensemble_is_ideal(const LayeredNetwork& net) {
    if (net.layer_count() == 2)
        return is_ideal_three_layer(net);
    const auto ones = PrecisionVector::ones(net.first_layer_size());
    return precisions_in_row_space(propagate_weights(net, ones).back(), ones);
}

namespace {

EnsembleResult summarize(const std::vector<std::size_t>& sizes, double p, std::size_t trials, std::size_t ideal,
                         std::uint64_t seed) {
    EnsembleResult r;
    r.layer_sizes = sizes;
    r.p = p;
    r.trials = trials;
    r.ideal_count = ideal;
    r.fraction = static_cast<double>(ideal) / static_cast<double>(trials);
    r.ci95_halfwidth = 1.96 * std::sqrt(r.fraction * (1.0 - r.fraction) / static_cast<double>(trials));
    r.seed = seed;
    return r;
}

void check_sizes(const std::vector<std::size_t>& sizes) {
    if (sizes.empty())
        throw RangeError("layer sizes must not be empty");
    for (auto l : sizes)
        if (l == 0)
            throw RangeError("layer sizes must be positive");
}

} // namespace

EnsembleResult p_ideal(const std::vector<std::size_t>& layer_sizes, double p, std::size_t trials,
                       std::uint64_t master_seed, unsigned threads) {
    check_probability(p);
    check_sizes(layer_sizes);
    if (trials == 0)
        throw RangeError("trials must be at least 1");
    std::vector<char> ideal(trials, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
        ideal[t] = ensemble_is_ideal(random_network(layer_sizes, p, trial_seed(master_seed, layer_sizes, p, t)));
    });
    std::size_t count = 0;
    for (char v : ideal)
        count += v;
    return summarize(layer_sizes, p, trials, count, master_seed);
}

void validate_sweep(const SweepSpec& spec) {
    if (spec.trials == 0)
        throw RangeError("sweep: trials must be at least 1");
    for (double p : spec.probabilities)
        check_probability(p);
    for (const auto& sizes : spec.layer_size_grid)
        check_sizes(sizes);
}

std::vector<EnsembleResult> sweep(const SweepSpec& spec, unsigned threads) {
    validate_sweep(spec);
    const std::size_t cells = spec.layer_size_grid.size() * spec.probabilities.size();
    const std::size_t work = cells * spec.trials;
    std::vector<char> ideal(work, 0);
    // Flattened over (cell, trial) so large and small cells share the pool.
    parallel_for(work, threads, [&](std::size_t w) {
        const std::size_t cell = w / spec.trials;
        const std::size_t trial = w % spec.trials;
        const auto& sizes = spec.layer_size_grid[cell / spec.probabilities.size()];
        const double p = spec.probabilities[cell % spec.probabilities.size()];
        ideal[w] = ensemble_is_ideal(random_network(sizes, p, trial_seed(spec.master_seed, sizes, p, trial)));
    });

    std::vector<EnsembleResult> results;
    results.reserve(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t count = 0;
        for (std::size_t t = 0; t < spec.trials; ++t)
            count += ideal[cell * spec.trials + t];
        results.push_back(summarize(spec.layer_size_grid[cell / spec.probabilities.size()],
                                    spec.probabilities[cell % spec.probabilities.size()], spec.trials, count,
                                    spec.master_seed));
    }
    return results;
}

std::string sweep_csv(const std::vector<EnsembleResult>& results) {
    std::size_t max_layers = 2;
    for (const auto& r : results)
        max_layers = std::max(max_layers, r.layer_sizes.size());

    std::ostringstream out;
    out << "n_layers";
    for (std::size_t k = 0; k < max_layers; ++k)
        out << ",L" << k + 1;
    out << ",p,trials,ideal_count,fraction,ci95_halfwidth,master_seed,generator_name\n";

    char buf[64];
    for (const auto& r : results) {
        // Layer count includes the implicit aggregator.
        out << r.layer_sizes.size() + 1;
        for (std::size_t k = 0; k < max_layers; ++k) {
            out << ',';
            if (k < r.layer_sizes.size())
                out << r.layer_sizes[k];
        }
        std::snprintf(buf, sizeof buf, ",%.6g", r.p);
        out << buf << ',' << r.trials << ',' << r.ideal_count;
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f", r.fraction, r.ci95_halfwidth);
        out << buf << ',' << r.seed << ',' << kGeneratorName << '\n';
    }
    return out.str();
}

} // namespace ffnet
