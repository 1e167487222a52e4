#include "ffnet/analysis.hpp"
#include "ffnet/ensembles.hpp"
#include "ffnet/errors.hpp"
#include "ffnet/oracle.hpp"
#include "ffnet/parallel.hpp"

#include <nlohmann/json.hpp>

#include <random>

namespace ffnet::oracle {

namespace {

// Stream tags for derive_seed, one per randomized check.
enum Stream : std::uint64_t { kFuseStream = 1, kEquivalenceStream, kReduceStream, kCor2Stream, kMcStream };

struct Check {
    CheckOutcome outcome;

    explicit Check(std::string name) {
        outcome.name = std::move(name);
        outcome.pass = true;
    }
    void count(std::uint64_t n = 1) { outcome.instances += n; }
    void expect(bool ok, const std::string& detail) {
        if (ok || !outcome.pass)
            return;
        outcome.pass = false;
        outcome.first_failure = detail;
    }
};

std::string vec_string(const RationalVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + to_string(v[i]);
    return s + ")";
}

std::string sizes_string(const std::vector<std::size_t>& sizes) {
    std::string s;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        s += (i ? "x" : "") + std::to_string(sizes[i]);
    return s;
}

RationalVector rationals(std::initializer_list<const char*> values) {
    RationalVector out;
    for (const char* v : values)
        out.push_back(parse_rational(v));
    return out;
}

PrecisionVector random_precisions(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned long> digit(1, 9);
    RationalVector w;
    for (std::size_t i = 0; i < n; ++i) {
        Rational r(digit(rng), digit(rng));
        r.canonicalize();
        w.push_back(r);
    }
    return PrecisionVector(std::move(w));
}

struct RandomCase {
    LayeredNetwork net;
    PrecisionVector precisions;
    std::string label;
};

RandomCase random_case(std::uint64_t seed, std::size_t min_layers, std::size_t max_layers, std::size_t max_size) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> layers(min_layers, max_layers), size(1, max_size);
    static constexpr double kProbabilities[] = {0.3, 0.5, 0.8};
    std::vector<std::size_t> sizes(layers(rng));
    for (auto& s : sizes)
        s = size(rng);
    const double p = kProbabilities[std::uniform_int_distribution<int>(0, 2)(rng)];
    auto net = random_network(sizes, p, rng());
    auto w = random_precisions(sizes.front(), rng);
    return {std::move(net), std::move(w), sizes_string(sizes) + " p=" + std::to_string(p) +
                                              " seed=" + std::to_string(seed)};
}

std::optional<FinalEstimate> try_final(const LayeredNetwork& net, const PrecisionVector& w) {
    try {
        return final_estimate(net, w);
    } catch (const NoInformationError&) {
        return std::nullopt;
    }
}

// Runs body(i, check) for i < count in parallel with one Check per instance, then merges in index order.
template <typename Body>
CheckOutcome parallel_check(const std::string& name, std::size_t count, unsigned threads, Body&& body) {
    std::vector<Check> parts(count, Check(name));
    parallel_for(count, threads, [&](std::size_t i) { body(i, parts[i]); });
    Check total(name);
    for (const auto& part : parts) {
        total.count(part.outcome.instances);
        total.expect(part.outcome.pass, part.outcome.first_failure);
    }
    return total.outcome;
}

void expect_audit(Check& check, const FuseAudit& audit, const std::string& where) {
    check.expect(audit.ok(), where + ": " + audit.first_mismatch.value_or(""));
}

// ------------------------------------------------------------------ individual checks

CheckOutcome golden(const std::string& name, const LayeredNetwork& net, const RationalVector& alpha,
                    const Rational& variance, bool ideal) {
    Check check(name);
    check.count();
    const auto ones = PrecisionVector::ones(net.first_layer_size());
    const auto estimate = final_estimate(net, ones);
    check.expect(estimate.alpha == alpha, "alpha " + vec_string(estimate.alpha) + ", expected " + vec_string(alpha));
    check.expect(estimate.variance == variance,
                 "variance " + to_string(estimate.variance) + ", expected " + to_string(variance));
    check.expect(estimate.ideal_variance == Rational(1, static_cast<unsigned long>(net.first_layer_size())),
                 "ideal variance " + to_string(estimate.ideal_variance));
    check.expect(is_ideal(net, ones).ideal == ideal, "ideality verdict");
    check.expect(is_ideal_three_layer(net) == ideal, "three-layer ideality verdict");
    check.expect(has_w_motif(net).has_value(), "no W-motif witness");
    return check.outcome;
}

CheckOutcome ring_formula(std::size_t max_n) {
    Check check("ring_formula");
    for (std::size_t n = 1; n <= max_n; ++n) {
        check.count();
        const auto estimate = final_estimate(ring_network(n), PrecisionVector::ones(n + 1));
        RationalVector alpha(n + 1, Rational(1, 2 * static_cast<unsigned long>(n)));
        alpha[0] = Rational(1, 2);
        for (auto& a : alpha)
            a.canonicalize();
        check.expect(estimate.variance == ring_variance(n),
                     "n=" + std::to_string(n) + " variance " + to_string(estimate.variance));
        check.expect(estimate.alpha == alpha, "n=" + std::to_string(n) + " alpha " + vec_string(estimate.alpha));
        check.expect(naive_weights(ring_network(n)) == alpha, "n=" + std::to_string(n) + " naive weights");
    }
    return check.outcome;
}

CheckOutcome bias_propagation(std::size_t max_n) {
    Check check("bias_propagation");
    check.count();
    const auto pair = final_estimate(reference::overlapping_pair(), PrecisionVector::ones(3));
    check.expect(final_bias(pair.alpha, rationals({"0", "1", "0"})) == Rational(1, 2), "overlapping pair bias");
    for (std::size_t n = 1; n <= max_n; ++n) {
        check.count();
        const auto estimate = final_estimate(ring_network(n), PrecisionVector::ones(n + 1));
        RationalVector bias(n + 1, Rational(0));
        bias[0] = 1;
        const auto b = final_bias(estimate.alpha, bias);
        check.expect(b == Rational(1, 2), "ring n=" + std::to_string(n) + " bias " + to_string(b));
    }
    return check.outcome;
}

CheckOutcome random_fuse_audit(std::size_t count, std::uint64_t seed, unsigned threads) {
    return parallel_check("fuse_vs_oracle_random", count, threads, [&](std::size_t i, Check& check) {
        const auto c = random_case(derive_seed(seed, kFuseStream, i), 2, 4, 6);
        const auto audit = audit_fuse(c.net, c.precisions);
        check.count(audit.comparisons);
        expect_audit(check, audit, c.label);
    });
}

// Connectivity-only verdict versus the precision-weighted row-space test.
void compare_ideality(Check& check, const LayeredNetwork& net, const PrecisionVector& w, const std::string& label) {
    check.count();
    const bool by_connectivity = is_ideal_three_layer(net);
    const auto verdict = is_ideal(net, w);
    check.expect(by_connectivity == verdict.ideal, label + ": connectivity test says " +
                                                       (by_connectivity ? "ideal" : "non-ideal") +
                                                       ", weight test disagrees");
    if (verdict.ideal) {
        const auto last = propagate_weights(net, w).back();
        RationalVector combined(w.size(), Rational(0));
        for (std::size_t i = 0; i < last.size(); ++i)
            for (std::size_t l = 0; l < w.size(); ++l)
                combined[l] += (*verdict.certificate)[i] * last.rows[i][l];
        check.expect(combined == w.values(), label + ": certificate does not reproduce w");
    }
    if (auto estimate = try_final(net, w)) {
        check.expect(estimate->variance >= estimate->ideal_variance, label + ": variance below the ideal bound");
        check.expect((estimate->variance == estimate->ideal_variance) == verdict.ideal,
                     label + ": variance equality disagrees with the verdict");
    }
}

CheckOutcome random_ideality_equivalence(std::size_t count, std::uint64_t seed, unsigned threads) {
    return parallel_check("ideality_equivalence_random", count, threads, [&](std::size_t i, Check& check) {
        const auto c = random_case(derive_seed(seed, kEquivalenceStream, i), 2, 2, 8);
        compare_ideality(check, c.net, c.precisions, c.label);
        const auto audit = audit_fuse(c.net, c.precisions);
        expect_audit(check, audit, c.label);
    });
}

void check_reduction(Check& check, const LayeredNetwork& net, const PrecisionVector& w, const std::string& label) {
    check.count();
    const auto reduced = reduce(net);
    check.expect(is_reduced(reduced), label + ": output still has an input-set containment");
    check.expect(reduced.edge_count() <= net.edge_count(), label + ": reduction added edges");
    const auto ones = PrecisionVector::ones(w.size());
    for (const auto* precisions : {&w, &ones}) {
        const auto before = try_final(net, *precisions);
        const auto after = try_final(reduced, *precisions);
        check.expect(before.has_value() == after.has_value(), label + ": information lost by reduction");
        if (before && after) {
            check.expect(before->alpha == after->alpha,
                         label + ": alpha " + vec_string(before->alpha) + " became " + vec_string(after->alpha));
            check.expect(before->variance == after->variance, label + ": variance changed");
        }
    }
    expect_audit(check, audit_fuse(reduced, w), label + " (reduced)");
}

CheckOutcome random_reduction(std::size_t count, std::uint64_t seed, unsigned threads) {
    return parallel_check("reduce_soundness_random", count, threads, [&](std::size_t i, Check& check) {
        const auto c = random_case(derive_seed(seed, kReduceStream, i), 2, 2, 8);
        check_reduction(check, c.net, c.precisions, c.label);
    });
}

CheckOutcome random_equal_outdegree(std::size_t count, std::uint64_t seed, unsigned threads) {
    return parallel_check("equal_outdegree_implies_ideal_random", count, threads, [&](std::size_t i, Check& check) {
        auto c = random_case(derive_seed(seed, kCor2Stream, i), 2, 2, 6);
        check.count();
        // Reduction tends to produce equal-degree components, which exercises the implication.
        for (const auto& net : {c.net, reduce(c.net)})
            if (equal_outdegree_components(net))
                check.expect(is_ideal_three_layer(net), c.label + ": equal out-degrees but non-ideal");
    });
}

CheckOutcome mc_check(const std::string& name, const LayeredNetwork& net, std::uint64_t seed, unsigned threads) {
    Check check("monte_carlo_" + name);
    check.count();
    const auto mc = mc_variance_check(net, PrecisionVector::ones(net.first_layer_size()), 100000, seed, threads);
    check.expect(mc.pass, "empirical " + std::to_string(mc.empirical) + " analytic " + std::to_string(mc.analytic) +
                              " se " + std::to_string(mc.standard_error));
    return check.outcome;
}

// ------------------------------------------------------------------ exhaustive checks

std::vector<EnumerationSpec> motif_free_specs() {
    std::vector<EnumerationSpec> specs;
    for (std::size_t l1 = 1; l1 <= 4; ++l1)
        for (std::size_t l2 = 1; l2 <= 3; ++l2)
            specs.push_back({l1, l2, std::nullopt, false});
    for (std::size_t l1 = 1; l1 <= 3; ++l1)
        for (std::size_t l2 = 1; l2 <= 3; ++l2)
            for (std::size_t l3 = 1; l3 <= 3; ++l3)
                specs.push_back({l1, l2, l3, false});
    return specs;
}

std::string spec_label(const EnumerationSpec& spec) { return sizes_string(spec.layer_sizes()); }

CheckOutcome exhaustive_motif_free(unsigned threads) {
    Check check("motif_free_implies_ideal_exhaustive");
    for (const auto& spec : motif_free_specs()) {
        const auto result = enumerate_motif_free(spec, threads, /*audit_fusion=*/true);
        check.count(result.networks_examined);
        check.expect(result.counterexamples.empty(),
                     spec_label(spec) + ": " + std::to_string(result.counterexamples.size()) +
                         " non-ideal networks without a W-motif");
        expect_audit(check, result.fuse_audit, spec_label(spec));
    }
    return check.outcome;
}

CheckOutcome exhaustive_ideality_equivalence(std::uint64_t seed, unsigned threads) {
    Check check("ideality_equivalence_exhaustive");
    for (const auto& spec : motif_free_specs()) {
        if (spec.l3)
            continue;
        const auto sizes = spec.layer_sizes();
        const std::uint64_t total = network_count(sizes);
        auto part = parallel_check("", total, threads, [&](std::size_t index, Check& c) {
            const auto net = network_from_index(sizes, index);
            const auto label = spec_label(spec) + " #" + std::to_string(index);
            std::mt19937_64 rng(derive_seed(seed, kEquivalenceStream, index ^ (std::uint64_t{1} << 40)));
            compare_ideality(c, net, PrecisionVector::ones(spec.l1), label + " (unit precisions)");
            compare_ideality(c, net, random_precisions(spec.l1, rng), label);
        });
        check.count(part.instances);
        check.expect(part.pass, part.first_failure);
    }
    return check.outcome;
}

CheckOutcome exhaustive_max_variance(std::size_t l1, std::size_t l2, unsigned threads) {
    Check check("max_variance_" + std::to_string(l1) + "x" + std::to_string(l2));
    const auto result = enumerate_max_variance({l1, l2, std::nullopt, true}, threads, /*audit_fusion=*/true);
    check.count(result.networks_examined);
    expect_audit(check, result.fuse_audit, "enumeration");
    // The ring with l2 second-layer agents needs l2 + 1 first-layer agents.
    if (l1 == l2 + 1) {
        check.expect(result.max_variance == ring_variance(l2), "maximum " + to_string(result.max_variance) +
                                                                   ", expected " + to_string(ring_variance(l2)));
        for (const auto& c : result.maximizers)
            check.expect(is_ring_relabeling(c), "a maximizer is not a ring relabeling");
    } else {
        // Wider second layers cannot beat the widest ring that fits.
        check.expect(result.max_variance == ring_variance(l1 - 1),
                     "maximum " + to_string(result.max_variance) + ", expected " + to_string(ring_variance(l1 - 1)));
    }
    return check.outcome;
}

} // namespace

std::vector<CheckOutcome> run_verification(VerifyLevel level, std::uint64_t seed, unsigned threads,
                                           const std::function<void(const CheckOutcome&)>& progress) {
    const bool full = level == VerifyLevel::full;
    const std::size_t random_count = full ? 1000 : 200;
    std::vector<CheckOutcome> out;
    auto record = [&](CheckOutcome outcome) {
        if (progress)
            progress(outcome);
        out.push_back(std::move(outcome));
    };

    record(golden("golden_overlapping_pair", reference::overlapping_pair(), rationals({"1/4", "1/2", "1/4"}),
                  Rational(3, 8), false));
    record(golden("golden_triangle", reference::triangle(), rationals({"1/3", "1/3", "1/3"}), Rational(1, 3), true));
    record(ring_formula(full ? 100 : 30));
    record(bias_propagation(full ? 100 : 30));
    record(random_fuse_audit(random_count, seed, threads));
    record(random_ideality_equivalence(random_count, seed, threads));
    record(random_reduction(random_count, seed, threads));
    record(random_equal_outdegree(random_count, seed, threads));
    record(mc_check("overlapping_pair", reference::overlapping_pair(), derive_seed(seed, kMcStream, 0), threads));
    if (full) {
        record(mc_check("triangle", reference::triangle(), derive_seed(seed, kMcStream, 1), threads));
        record(mc_check("ring_10", ring_network(10), derive_seed(seed, kMcStream, 2), threads));
        record(exhaustive_motif_free(threads));
        record(exhaustive_ideality_equivalence(seed, threads));
        record(exhaustive_max_variance(4, 3, threads));
        record(exhaustive_max_variance(4, 4, threads));
        record(exhaustive_max_variance(5, 4, threads));
    }
    return out;
}

std::string verification_json(const std::vector<CheckOutcome>& checks, VerifyLevel level, std::uint64_t seed) {
    nlohmann::ordered_json report;
    report["level"] = level == VerifyLevel::full ? "full" : "quick";
    report["seed"] = seed;
    bool all = true;
    auto& list = report["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json entry;
        entry["name"] = c.name;
        entry["instances"] = c.instances;
        entry["pass"] = c.pass;
        entry["first_failure"] = c.pass ? nlohmann::ordered_json() : nlohmann::ordered_json(c.first_failure);
        list.push_back(std::move(entry));
        all = all && c.pass;
    }
    report["pass"] = all;
    return report.dump(2) + "\n";
}

} // namespace ffnet::oracle
