#include "ffnet/estimation.hpp"

#include "ffnet/errors.hpp"
#include "ffnet/linalg.hpp"
#include "ffnet/parallel.hpp"

#include <cmath>
#include <random>

namespace ffnet {

std::vector<RationalVector> WeightProfile::valid_rows() const {
    std::vector<RationalVector> out;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (valid[i])
            out.push_back(rows[i]);
    return out;
}

namespace {

std::vector<std::size_t> support(const RationalVector& row) {
    std::vector<std::size_t> idx;
    for (std::size_t l = 0; l < row.size(); ++l)
        if (sgn(row[l]) != 0)
            idx.push_back(l);
    return idx;
}

RationalVector inverse_precisions(const PrecisionVector& w) {
    RationalVector inv;
    inv.reserve(w.size());
    for (const auto& v : w.values())
        inv.push_back(1 / v);
    return inv;
}

} // namespace

std::vector<std::size_t> independent_prefix_subset(std::span<const RationalVector> rows, std::size_t dimension) {
    // Modular screening is exact for "independent"; the first inconclusive row
    // switches the remainder of the scan to exact elimination.
    std::vector<std::size_t> kept;
    linalg::ModularEchelon modular(dimension);
    std::size_t i = 0;
    for (; i < rows.size() && kept.size() < dimension; ++i) {
        if (!modular.insert(rows[i]))
            break;
        kept.push_back(i);
    }
    if (i == rows.size() || kept.size() == dimension)
        return kept;

    linalg::EchelonBasis exact(dimension);
    for (auto k : kept)
        exact.insert(rows[k]);
    for (; i < rows.size() && exact.rank() < dimension; ++i)
        if (exact.insert(rows[i]))
            kept.push_back(i);
    return kept;
}

FuseResult fuse(std::span<const RationalVector> provider_rows, const PrecisionVector& precisions) {
    if (provider_rows.empty())
        throw NoInformationError("fuse: no provider estimates");
    const std::size_t n = precisions.size();
    for (std::size_t i = 0; i < provider_rows.size(); ++i) {
        if (provider_rows[i].size() != n)
            throw ContractViolation("fuse: provider row " + std::to_string(i) + " has length " +
                                    std::to_string(provider_rows[i].size()) + ", expected " + std::to_string(n));
        if (sum(provider_rows[i]) != 1)
            throw ContractViolation("fuse: provider row " + std::to_string(i) + " sums to " +
                                    to_string(sum(provider_rows[i])) + ", expected 1");
    }

    FuseResult result;
    result.kept = independent_prefix_subset(provider_rows, n);

    const std::size_t k = result.kept.size();
    result.beta.assign(provider_rows.size(), Rational(0));
    if (k == 1) {
        result.beta[result.kept[0]] = 1;
        result.fused_row = provider_rows[result.kept[0]];
        result.variance = weighting_variance(result.fused_row, precisions);
        return result;
    }

    // Covariance of the kept estimates: R = V_S Diag(1/w) V_S'.
    const RationalVector inv_w = inverse_precisions(precisions);
    std::vector<std::vector<std::size_t>> supports;
    supports.reserve(k);
    for (auto idx : result.kept)
        supports.push_back(support(provider_rows[idx]));
    linalg::RationalRows cov(k, RationalVector(k));
    for (std::size_t a = 0; a < k; ++a) {
        const auto& va = provider_rows[result.kept[a]];
        for (std::size_t b = a; b < k; ++b) {
            const auto& vb = provider_rows[result.kept[b]];
            Rational acc = 0;
            for (auto l : supports[a])
                if (sgn(vb[l]) != 0)
                    acc += va[l] * vb[l] * inv_w[l];
            cov[a][b] = acc;
            cov[b][a] = acc;
        }
    }

    auto x = linalg::solve(std::move(cov), RationalVector(k, Rational(1)));
    if (!x)
        throw Error("fuse: covariance of independent providers is singular");
    const Rational total = sum(*x);
    result.fused_row.assign(n, Rational(0));
    for (std::size_t a = 0; a < k; ++a) {
        const Rational b = (*x)[a] / total;
        const auto& va = provider_rows[result.kept[a]];
        for (auto l : supports[a])
            result.fused_row[l] += b * va[l];
        result.beta[result.kept[a]] = b;
    }
    result.variance = 1 / total;
    return result;
}

namespace {

WeightProfile identity_profile(std::size_t n) {
    WeightProfile p;
    p.rows.assign(n, RationalVector(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        p.rows[i][i] = 1;
    p.valid.assign(n, true);
    return p;
}

// Builds the profile of layer k+1 from layer k; optionally records local weights.
WeightProfile next_profile(const WeightProfile& previous, const BinaryMatrix& c, const PrecisionVector& w,
                           std::vector<RationalVector>* local) {
    const std::size_t n = w.size();
    WeightProfile next;
    next.rows.assign(c.rows(), RationalVector(n, Rational(0)));
    next.valid.assign(c.rows(), false);
    if (local)
        local->assign(c.rows(), RationalVector(c.cols(), Rational(0)));

    std::vector<RationalVector> providers;
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < c.rows(); ++i) {
        providers.clear();
        labels.clear();
        for (std::size_t j = 0; j < c.cols(); ++j)
            if (c(i, j) && previous.valid[j]) {
                providers.push_back(previous.rows[j]);
                labels.push_back(j);
            }
        if (providers.empty())
            continue;
        auto fused = fuse(providers, w);
        next.rows[i] = std::move(fused.fused_row);
        next.valid[i] = true;
        if (local)
            for (std::size_t a = 0; a < labels.size(); ++a)
                (*local)[i][labels[a]] = fused.beta[a];
    }
    return next;
}

void check_precisions(const LayeredNetwork& net, const PrecisionVector& w) {
    if (w.size() != net.first_layer_size())
        throw StructuralError("precision vector has " + std::to_string(w.size()) + " entries, first layer has " +
                              std::to_string(net.first_layer_size()) + " agents");
}

} // namespace

std::vector<WeightProfile> propagate_weights(const LayeredNetwork& net, const PrecisionVector& precisions) {
    check_precisions(net, precisions);
    std::vector<WeightProfile> profiles;
    profiles.reserve(net.layer_count());
    profiles.push_back(identity_profile(net.first_layer_size()));
    for (std::size_t k = 0; k + 1 < net.layer_count(); ++k)
        profiles.push_back(next_profile(profiles.back(), net.connectivity(k), precisions, nullptr));
    return profiles;
}

Propagation propagate(const LayeredNetwork& net, const PrecisionVector& precisions) {
    check_precisions(net, precisions);
    Propagation out;
    out.profiles.push_back(identity_profile(net.first_layer_size()));
    out.local_weights.emplace_back();
    for (std::size_t k = 0; k + 1 < net.layer_count(); ++k) {
        std::vector<RationalVector> local;
        out.profiles.push_back(next_profile(out.profiles.back(), net.connectivity(k), precisions, &local));
        out.local_weights.push_back(std::move(local));
    }
    for (const auto& p : out.profiles)
        out.covariances.push_back(layer_covariance(p, precisions));
    return out;
}

CovarianceMatrix layer_covariance(const WeightProfile& profile, const PrecisionVector& precisions) {
    const RationalVector inv_w = inverse_precisions(precisions);
    const std::size_t m = profile.size();
    std::vector<std::vector<std::size_t>> supports;
    supports.reserve(m);
    for (const auto& row : profile.rows)
        supports.push_back(support(row));
    CovarianceMatrix cov{std::vector<RationalVector>(m, RationalVector(m, Rational(0)))};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            Rational acc = 0;
            for (auto l : supports[i])
                if (sgn(profile.rows[j][l]) != 0)
                    acc += profile.rows[i][l] * profile.rows[j][l] * inv_w[l];
            cov.entries[i][j] = acc;
            cov.entries[j][i] = acc;
        }
    return cov;
}

FinalEstimate final_estimate_from_profile(const WeightProfile& last_layer, const PrecisionVector& precisions) {
    const auto rows = last_layer.valid_rows();
    if (rows.empty())
        throw NoInformationError("final estimate: no agent in the last layer carries information");
    auto fused = fuse(rows, precisions);
    FinalEstimate out;
    out.variance = weighting_variance(fused.fused_row, precisions);
    out.alpha = std::move(fused.fused_row);
    out.ideal_variance = 1 / precisions.total();
    return out;
}

FinalEstimate final_estimate(const LayeredNetwork& net, const PrecisionVector& precisions) {
    return final_estimate_from_profile(propagate_weights(net, precisions).back(), precisions);
}

Rational final_bias(const RationalVector& alpha, const RationalVector& biases) {
    if (alpha.size() != biases.size())
        throw ContractViolation("final_bias: " + std::to_string(alpha.size()) + " weights but " +
                                std::to_string(biases.size()) + " biases");
    return dot(alpha, biases);
}

Rational weighting_variance(const RationalVector& alpha, const PrecisionVector& precisions) {
    if (alpha.size() != precisions.size())
        throw ContractViolation("weighting_variance: length mismatch");
    Rational v = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (sgn(alpha[i]) != 0)
            v += alpha[i] * alpha[i] / precisions[i];
    return v;
}

// ------------------------------------------------------------------ simulation

namespace {

constexpr std::uint64_t kSimulationStream = 0x73696d756c617465ULL; // "simulate"

struct PowerSums {
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
};

} // namespace

SimulationResult simulate_weights(const RationalVector& alpha, const PrecisionVector& precisions, double true_value,
                                  const std::optional<RationalVector>& biases, std::size_t trials,
                                  std::uint64_t seed, unsigned threads) {
    if (trials < 2)
        throw RangeError("simulate: need at least 2 trials, got " + std::to_string(trials));
    if (alpha.size() != precisions.size())
        throw ContractViolation("simulate: weight and precision lengths differ");
    if (biases && biases->size() != alpha.size())
        throw ContractViolation("simulate: bias vector length differs from the first layer");

    const std::size_t n = alpha.size();
    std::vector<double> a = to_doubles(alpha);
    std::vector<double> sigma(n);
    std::vector<double> offset(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        sigma[i] = std::sqrt(1.0 / precisions[i].get_d());
        if (biases)
            offset[i] = (*biases)[i].get_d();
    }
    double center = true_value;
    for (std::size_t i = 0; i < n; ++i)
        center += a[i] * offset[i];

    const std::size_t chunks = (trials + kSimulationChunk - 1) / kSimulationChunk;
    std::vector<PowerSums> partial(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        std::mt19937_64 rng(derive_seed(seed, kSimulationStream, c));
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::size_t begin = c * kSimulationChunk;
        const std::size_t end = std::min(trials, begin + kSimulationChunk);
        PowerSums acc;
        for (std::size_t t = begin; t < end; ++t) {
            double estimate = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double x = true_value + offset[i] + sigma[i] * normal(rng);
                estimate += a[i] * x;
            }
            const long double d = estimate - center;
            const long double d2 = d * d;
            acc.s1 += d;
            acc.s2 += d2;
            acc.s3 += d2 * d;
            acc.s4 += d2 * d2;
        }
        partial[c] = acc;
    });

    PowerSums total;
    for (const auto& p : partial) {
        total.s1 += p.s1;
        total.s2 += p.s2;
        total.s3 += p.s3;
        total.s4 += p.s4;
    }
    const long double nt = static_cast<long double>(trials);
    const long double mu = total.s1 / nt;
    const long double m2 = total.s2 / nt - mu * mu;
    const long double m4 =
        total.s4 / nt - 4 * mu * total.s3 / nt + 6 * mu * mu * total.s2 / nt - 3 * mu * mu * mu * mu;
    const long double s2 = m2 * nt / (nt - 1);
    long double se2 = (m4 - s2 * s2 * (nt - 3) / (nt - 1)) / nt;
    if (se2 < 0)
        se2 = 0;

    SimulationResult out;
    out.mean = static_cast<double>(center + mu);
    out.variance = static_cast<double>(s2);
    out.variance_stderr = static_cast<double>(std::sqrt(se2));
    out.trials = trials;
    out.seed = seed;
    return out;
}

SimulationResult simulate(const LayeredNetwork& net, const PrecisionVector& precisions, double true_value,
                          const std::optional<RationalVector>& biases, std::size_t trials, std::uint64_t seed,
                          unsigned threads) {
    if (trials < 2)
        throw RangeError("simulate: need at least 2 trials, got " + std::to_string(trials));
    const auto estimate = final_estimate(net, precisions);
    return simulate_weights(estimate.alpha, precisions, true_value, biases, trials, seed, threads);
}

} // namespace ffnet
