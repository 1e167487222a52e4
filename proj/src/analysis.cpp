#include "ffnet/analysis.hpp"

#include "ffnet/errors.hpp"
#include "ffnet/linalg.hpp"

#include <numeric>

namespace ffnet {

IdealityVerdict is_ideal_from_profile(const WeightProfile& last_layer, const PrecisionVector& precisions) {
    linalg::EchelonBasis basis(precisions.size(), /*track_combinations=*/true);
    for (std::size_t i = 0; i < last_layer.size() && basis.rank() < precisions.size(); ++i)
        basis.insert(last_layer.rows[i]);
    IdealityVerdict verdict;
    auto coefficients = basis.express(precisions.values());
    if (!coefficients)
        return verdict;
    coefficients->resize(last_layer.size(), Rational(0));
    verdict.ideal = true;
    verdict.certificate = std::move(coefficients);
    return verdict;
}

bool precisions_in_row_space(const WeightProfile& last_layer, const PrecisionVector& precisions) {
    const std::size_t n = precisions.size();
    linalg::ModularEchelon modular(n);
    for (std::size_t i = 0; i < last_layer.size() && modular.rank() < n; ++i)
        if (last_layer.valid[i])
            modular.insert(last_layer.rows[i]);
    if (modular.rank() == n)
        return true;
    linalg::EchelonBasis exact(n);
    for (std::size_t i = 0; i < last_layer.size() && exact.rank() < n; ++i)
        if (last_layer.valid[i])
            exact.insert(last_layer.rows[i]);
    return exact.contains(precisions.values());
}

IdealityVerdict is_ideal(const LayeredNetwork& net, const PrecisionVector& precisions) {
    return is_ideal_from_profile(propagate_weights(net, precisions).back(), precisions);
}

namespace {

std::vector<std::vector<Integer>> integer_rows(const BinaryMatrix& c) {
    std::vector<std::vector<Integer>> rows(c.rows(), std::vector<Integer>(c.cols()));
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            if (c(i, j))
                rows[i][j] = 1;
    return rows;
}

void require_three_layers(const LayeredNetwork& net, const char* what) {
    if (net.layer_count() != 2)
        throw StructuralError(std::string(what) + ": needs exactly two explicit layers, got " +
                              std::to_string(net.layer_count()));
}

} // namespace

bool ones_in_row_space(const BinaryMatrix& c) {
    auto rows = integer_rows(c);
    const std::size_t base = linalg::integer_rank(rows);
    if (base == c.cols())
        return true;
    rows.emplace_back(c.cols(), Integer(1));
    return linalg::integer_rank(std::move(rows)) == base;
}

bool has_full_column_rank(const BinaryMatrix& c) { return linalg::integer_rank(integer_rows(c)) == c.cols(); }

bool is_ideal_three_layer(const LayeredNetwork& net) {
    require_three_layers(net, "is_ideal_three_layer");
    return ones_in_row_space(net.connectivity(0));
}

std::optional<WMotifWitness> has_w_motif(const LayeredNetwork& net) {
    if (net.layer_count() < 2)
        return std::nullopt;
    const std::size_t n = net.first_layer_size();
    BinaryMatrix reach = net.connectivity(0);
    for (std::size_t k = 1;; ++k) {
        for (std::size_t i1 = 0; i1 < reach.rows(); ++i1)
            for (std::size_t i2 = i1 + 1; i2 < reach.rows(); ++i2) {
                std::optional<std::size_t> only1, shared, only2;
                for (std::size_t j = 0; j < n; ++j) {
                    const bool a = reach(i1, j), b = reach(i2, j);
                    if (a && !b && !only1)
                        only1 = j;
                    else if (a && b && !shared)
                        shared = j;
                    else if (!a && b && !only2)
                        only2 = j;
                }
                if (only1 && shared && only2)
                    return WMotifWitness{k, {i1, i2}, {*only1, *shared, *only2}};
            }
        if (k + 1 >= net.layer_count())
            break;
        reach = net.connectivity(k).boolean_product(reach);
    }
    return std::nullopt;
}

namespace {

bool row_empty(const BinaryMatrix& c, std::size_t i) {
    for (std::size_t j = 0; j < c.cols(); ++j)
        if (c(i, j))
            return false;
    return true;
}

bool row_subset(const BinaryMatrix& c, std::size_t i, std::size_t j) {
    for (std::size_t l = 0; l < c.cols(); ++l)
        if (c(i, l) && !c(j, l))
            return false;
    return true;
}

std::optional<std::pair<std::size_t, std::size_t>> first_containment(const BinaryMatrix& c) {
    for (std::size_t i = 0; i < c.rows(); ++i) {
        if (row_empty(c, i))
            continue;
        for (std::size_t j = 0; j < c.rows(); ++j)
            if (i != j && row_subset(c, i, j))
                return std::pair{i, j};
    }
    return std::nullopt;
}

} // namespace

LayeredNetwork reduce(const LayeredNetwork& net) {
    require_three_layers(net, "reduce");
    BinaryMatrix c = net.connectivity(0);
    // Each step deletes at least one edge, so this terminates.
    while (auto pair = first_containment(c)) {
        const auto [i, j] = *pair;
        for (std::size_t l = 0; l < c.cols(); ++l)
            if (c(i, l))
                c.set(j, l, false);
    }
    return LayeredNetwork(net.layer_sizes(), {std::move(c)});
}

bool is_reduced(const LayeredNetwork& net) {
    require_three_layers(net, "is_reduced");
    return !first_containment(net.connectivity(0));
}

bool equal_outdegree_components(const LayeredNetwork& net) {
    require_three_layers(net, "equal_outdegree_components");
    const auto& c = net.connectivity(0);
    const std::size_t n = c.cols();
    const std::size_t m = c.rows();
    // Nodes 0..n-1 are first-layer agents, n..n+m-1 second-layer agents.
    std::vector<std::size_t> parent(n + m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (c(i, j))
                parent[find(j)] = find(n + i);

    const auto degree = out_degrees(net, 0);
    std::vector<std::size_t> component_degree(n + m, 0);
    for (std::size_t j = 0; j < n; ++j) {
        if (degree[j] == 0)
            return false;
        auto& d = component_degree[find(j)];
        if (d == 0)
            d = degree[j];
        else if (d != degree[j])
            return false;
    }
    return true;
}

LayeredNetwork ring_network(std::size_t n) {
    if (n == 0)
        throw RangeError("ring_network: n must be at least 1");
    BinaryMatrix c(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        c.set(i, 0, true);
        c.set(i, i + 1, true);
    }
    return LayeredNetwork({n + 1, n}, {std::move(c)});
}

Rational ring_variance(std::size_t n) {
    if (n == 0)
        throw RangeError("ring_variance: n must be at least 1");
    return Rational(1, 4) + Rational(1, 4 * static_cast<unsigned long>(n));
}

RationalVector naive_weights(const LayeredNetwork& net) {
    require_three_layers(net, "naive_weights");
    const auto degree = out_degrees(net, 0);
    std::size_t total = 0;
    for (std::size_t j = 0; j < degree.size(); ++j) {
        if (degree[j] == 0)
            throw ContractViolation("naive_weights: first-layer agent " + std::to_string(j + 1) +
                                    " has no outgoing edge");
        total += degree[j];
    }
    RationalVector out;
    out.reserve(degree.size());
    for (auto d : degree)
        out.emplace_back(Rational(static_cast<unsigned long>(d), static_cast<unsigned long>(total)));
    for (auto& v : out)
        v.canonicalize();
    return out;
}

} // namespace ffnet
