#include "ffnet/oracle.hpp"

#include "ffnet/analysis.hpp"
#include "ffnet/errors.hpp"
#include "ffnet/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <mutex>
#include <random>

namespace ffnet::oracle {

// ------------------------------------------------------------------ oracle_fuse

namespace {

using Rows = std::vector<RationalVector>;

// Gauss-Jordan reduced row-echelon form; returns the nonzero rows.
Rows rref_basis(Rows m) {
    if (m.empty())
        return m;
    const std::size_t cols = m.front().size();
    std::size_t lead = 0;
    for (std::size_t col = 0; col < cols && lead < m.size(); ++col) {
        std::size_t r = lead;
        while (r < m.size() && m[r][col] == 0)
            ++r;
        if (r == m.size())
            continue;
        std::swap(m[r], m[lead]);
        const Rational pivot = m[lead][col];
        for (auto& v : m[lead])
            v /= pivot;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == lead || m[i][col] == 0)
                continue;
            const Rational f = m[i][col];
            for (std::size_t j = 0; j < cols; ++j)
                m[i][j] -= f * m[lead][j];
        }
        ++lead;
    }
    m.resize(lead);
    return m;
}

// Inverse of a nonsingular matrix by Gauss-Jordan on [A | I].
Rows invert(const Rows& a) {
    const std::size_t n = a.size();
    Rows aug(n, RationalVector(2 * n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug[i][j] = a[i][j];
        aug[i][n + i] = 1;
    }
    const Rows reduced = rref_basis(aug);
    if (reduced.size() != n)
        throw Error("oracle: normal-equation matrix is singular");
    Rows inv(n, RationalVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (reduced[i][i] != 1)
            throw Error("oracle: normal-equation matrix is singular");
        for (std::size_t j = 0; j < n; ++j)
            inv[i][j] = reduced[i][n + j];
    }
    return inv;
}

} // namespace

RationalVector oracle_fuse(std::span<const RationalVector> provider_rows, const PrecisionVector& precisions) {
    const Rows basis = rref_basis(Rows(provider_rows.begin(), provider_rows.end()));
    if (basis.empty())
        throw NoInformationError("oracle_fuse: provider rows span nothing");
    const std::size_t n = precisions.size();
    const std::size_t k = basis.size();

    // a = B' c, minimize c' G c with G = B D B', subject to c' (B 1) = 1.
    Rows gram(k, RationalVector(k));
    RationalVector row_sums(k);
    for (std::size_t a = 0; a < k; ++a) {
        row_sums[a] = sum(basis[a]);
        for (std::size_t b = 0; b < k; ++b) {
            Rational acc = 0;
            for (std::size_t l = 0; l < n; ++l)
                acc += basis[a][l] * basis[b][l] / precisions[l];
            gram[a][b] = acc;
        }
    }
    const Rows inv = invert(gram);
    RationalVector c(k, Rational(0));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            c[a] += inv[a][b] * row_sums[b];
    const Rational scale = dot(c, row_sums);
    if (scale == 0)
        throw NoInformationError("oracle_fuse: span contains no unbiased combination");

    RationalVector out(n, Rational(0));
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t l = 0; l < n; ++l)
            out[l] += c[a] * basis[a][l];
    for (auto& v : out)
        v /= scale;
    return out;
}

// ------------------------------------------------------------------ enumeration

std::vector<std::size_t> EnumerationSpec::layer_sizes() const {
    if (l3)
        return {l1, l2, *l3};
    return {l1, l2};
}

namespace {

std::size_t edge_slots(const std::vector<std::size_t>& sizes) {
    std::size_t slots = 0;
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k)
        slots += sizes[k] * sizes[k + 1];
    return slots;
}

} // namespace

void check_feasible(const EnumerationSpec& spec) {
    if (spec.l1 == 0 || spec.l2 == 0 || (spec.l3 && *spec.l3 == 0))
        throw RangeError("enumeration: layer sizes must be positive");
    const std::size_t slots = edge_slots(spec.layer_sizes());
    if (slots > kMaxEdgeSlots)
        throw RangeError("enumeration: " + std::to_string(slots) + " edge slots exceeds the limit of " +
                         std::to_string(kMaxEdgeSlots));
}

std::uint64_t network_count(const std::vector<std::size_t>& layer_sizes) {
    const std::size_t slots = edge_slots(layer_sizes);
    if (slots >= 64)
        throw RangeError("network_count: too many edge slots");
    return std::uint64_t{1} << slots;
}

LayeredNetwork network_from_index(const std::vector<std::size_t>& layer_sizes, std::uint64_t index) {
    std::vector<BinaryMatrix> matrices;
    std::size_t bit = 0;
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        BinaryMatrix c(layer_sizes[k + 1], layer_sizes[k]);
        for (std::size_t i = 0; i < c.rows(); ++i)
            for (std::size_t j = 0; j < c.cols(); ++j, ++bit)
                c.set(i, j, (index >> bit) & 1U);
        matrices.push_back(std::move(c));
    }
    return LayeredNetwork(layer_sizes, std::move(matrices));
}

FuseAudit audit_fuse(const LayeredNetwork& net, const PrecisionVector& precisions) {
    FuseAudit audit;
    const auto profiles = propagate_weights(net, precisions);
    auto compare = [&](const std::vector<RationalVector>& providers, const std::string& where) {
        if (providers.empty())
            return;
        ++audit.comparisons;
        const auto fast = fuse(providers, precisions).fused_row;
        const auto slow = oracle_fuse(providers, precisions);
        if (fast != slow && !audit.first_mismatch)
            audit.first_mismatch = where + ": fuse [" + [&] {
                std::string s;
                for (const auto& v : fast)
                    s += to_string(v) + " ";
                return s;
            }() + "] oracle [" + [&] {
                std::string s;
                for (const auto& v : slow)
                    s += to_string(v) + " ";
                return s;
            }() + "]";
    };
    std::vector<RationalVector> providers;
    for (std::size_t k = 1; k < net.layer_count(); ++k) {
        const auto& c = net.connectivity(k - 1);
        for (std::size_t i = 0; i < c.rows(); ++i) {
            providers.clear();
            for (std::size_t j = 0; j < c.cols(); ++j)
                if (c(i, j) && profiles[k - 1].valid[j])
                    providers.push_back(profiles[k - 1].rows[j]);
            compare(providers, "layer " + std::to_string(k + 1) + " agent " + std::to_string(i + 1));
        }
    }
    compare(profiles.back().valid_rows(), "aggregator");
    return audit;
}

namespace {

void merge_audit(FuseAudit& into, const FuseAudit& from) {
    into.comparisons += from.comparisons;
    if (!into.first_mismatch && from.first_mismatch)
        into.first_mismatch = from.first_mismatch;
}

BinaryMatrix matrix_from_codes(const std::vector<std::uint32_t>& codes, std::size_t cols) {
    BinaryMatrix c(codes.size(), cols);
    for (std::size_t i = 0; i < codes.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            c.set(i, j, (codes[i] >> j) & 1U);
    return c;
}

} // namespace

MaxVarianceResult enumerate_max_variance(const EnumerationSpec& spec, unsigned threads, bool audit_fusion) {
    if (spec.l3)
        throw RangeError("enumerate_max_variance: three-layer networks only");
    check_feasible(spec);
    const std::size_t n = spec.l1, m = spec.l2;
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;

    // Nondecreasing row-code sequences: one representative per row permutation class.
    std::vector<std::vector<std::uint32_t>> canonical;
    std::vector<std::uint32_t> codes(m, 0);
    while (true) {
        std::uint32_t cover = 0;
        for (auto code : codes)
            cover |= code;
        if (!spec.require_full_columns || cover == full)
            canonical.push_back(codes);
        std::size_t pos = m;
        while (pos > 0 && codes[pos - 1] == full)
            --pos;
        if (pos == 0)
            break;
        const std::uint32_t next = codes[pos - 1] + 1;
        for (std::size_t i = pos - 1; i < m; ++i)
            codes[i] = next;
    }

    const PrecisionVector ones = PrecisionVector::ones(n);
    std::vector<std::optional<Rational>> variance(canonical.size());
    std::vector<FuseAudit> audits(canonical.size());
    parallel_for(canonical.size(), threads, [&](std::size_t idx) {
        const LayeredNetwork net({n, m}, {matrix_from_codes(canonical[idx], n)});
        try {
            variance[idx] = final_estimate(net, ones).variance;
        } catch (const NoInformationError&) {
            return; // every second-layer agent silent
        }
        if (audit_fusion)
            audits[idx] = audit_fuse(net, ones);
    });

    MaxVarianceResult result;
    result.networks_examined = canonical.size();
    bool any = false;
    for (std::size_t idx = 0; idx < canonical.size(); ++idx) {
        merge_audit(result.fuse_audit, audits[idx]);
        if (variance[idx] && (!any || *variance[idx] > result.max_variance)) {
            result.max_variance = *variance[idx];
            any = true;
        }
    }
    if (!any)
        throw NoInformationError("enumerate_max_variance: no admissible network");
    for (std::size_t idx = 0; idx < canonical.size(); ++idx) {
        if (!variance[idx] || *variance[idx] != result.max_variance)
            continue;
        auto perm = canonical[idx];
        do {
            result.maximizers.push_back(matrix_from_codes(perm, n));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return result;
}

bool is_ring_relabeling(const BinaryMatrix& c) {
    const std::size_t m = c.rows();
    if (m == 0 || c.cols() != m + 1)
        return false;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t row = 0;
        for (std::size_t j = 0; j < c.cols(); ++j)
            row += c(i, j);
        if (row != 2)
            return false;
    }
    std::size_t hubs = 0, singles = 0;
    for (std::size_t j = 0; j < c.cols(); ++j) {
        std::size_t col = 0;
        for (std::size_t i = 0; i < m; ++i)
            col += c(i, j);
        if (col == m && hubs == 0)
            ++hubs;
        else if (col == 1)
            ++singles;
        else
            return false;
    }
    return hubs == 1 && singles == m;
}

MotifFreeResult enumerate_motif_free(const EnumerationSpec& spec, unsigned threads, bool audit_fusion) {
    check_feasible(spec);
    const auto sizes = spec.layer_sizes();
    const std::uint64_t total = network_count(sizes);
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t blocks = (total + kBlock - 1) / kBlock;
    const PrecisionVector ones = PrecisionVector::ones(spec.l1);

    struct BlockResult {
        std::vector<std::uint64_t> counterexamples;
        std::uint64_t examined = 0;
        FuseAudit audit;
    };
    std::vector<BlockResult> partial(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
        auto& out = partial[b];
        const std::uint64_t end = std::min(total, (b + 1) * kBlock);
        for (std::uint64_t index = b * kBlock; index < end; ++index) {
            const auto net = network_from_index(sizes, index);
            if (!validate(net).ok())
                continue;
            ++out.examined;
            const auto profiles = propagate_weights(net, ones);
            if (!is_ideal_from_profile(profiles.back(), ones).ideal && !has_w_motif(net))
                out.counterexamples.push_back(index);
            if (audit_fusion)
                merge_audit(out.audit, audit_fuse(net, ones));
        }
    });

    MotifFreeResult result;
    for (const auto& p : partial) {
        result.networks_examined += p.examined;
        merge_audit(result.fuse_audit, p.audit);
        for (auto index : p.counterexamples)
            result.counterexamples.push_back(network_from_index(sizes, index));
    }
    return result;
}

McCheck mc_variance_check(const LayeredNetwork& net, const PrecisionVector& precisions, std::size_t trials,
                          std::uint64_t seed, unsigned threads) {
    if (trials < 10000)
        throw RangeError("mc_variance_check: need at least 10^4 trials, got " + std::to_string(trials));
    const auto estimate = final_estimate(net, precisions);
    const auto sim = simulate_weights(estimate.alpha, precisions, 0.0, std::nullopt, trials, seed, threads);
    McCheck check;
    check.empirical = sim.variance;
    check.analytic = estimate.variance.get_d();
    check.standard_error = sim.variance_stderr;
    check.pass = std::abs(check.empirical - check.analytic) <= 3.0 * check.standard_error;
    return check;
}

namespace reference {

LayeredNetwork overlapping_pair() { return LayeredNetwork({3, 2}, {BinaryMatrix{{1, 1, 0}, {0, 1, 1}}}); }

LayeredNetwork triangle() { return LayeredNetwork({3, 3}, {BinaryMatrix{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}}}); }

} // namespace reference

} // namespace ffnet::oracle
