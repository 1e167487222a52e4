#pragma once

#include "ffnet/estimation.hpp"
#include "ffnet/network.hpp"

#include <array>
#include <optional>

namespace ffnet {

struct IdealityVerdict {
    bool ideal = false;
    /// Coefficients c, one per last-layer agent, with sum_i c_i * profile_row_i == w exactly.
    std::optional<RationalVector> certificate;
};

/// Exact test of whether the precision vector lies in the row space of the
/// last explicit layer's weight profile; that is the condition under which the
/// aggregator recovers the precision-weighted average of all measurements.
IdealityVerdict is_ideal(const LayeredNetwork& net, const PrecisionVector& precisions);
IdealityVerdict is_ideal_from_profile(const WeightProfile& last_layer, const PrecisionVector& precisions);

/// Verdict of is_ideal_from_profile() without the certificate; screens by modular rank first.
bool precisions_in_row_space(const WeightProfile& last_layer, const PrecisionVector& precisions);

/// Two explicit layers only: is the all-ones vector in the row space of the
/// connectivity matrix? Independent of precisions.
bool is_ideal_three_layer(const LayeredNetwork& net);
bool ones_in_row_space(const BinaryMatrix& c);
/// True when the matrix has rank equal to its column count (contains an invertible square minor).
bool has_full_column_rank(const BinaryMatrix& c);

/// Two agents of one layer sharing a first-layer source, each with a private one.
struct WMotifWitness {
    std::size_t to_layer;                // 0-based
    std::array<std::size_t, 2> agents;   // (i1, i2), i1 < i2
    std::array<std::size_t, 3> sources;  // (n1, m, n2): private to i1, shared, private to i2
};

std::optional<WMotifWitness> has_w_motif(const LayeredNetwork& net);

/// Removes input-set containments among second-layer agents until none remain.
/// Only nonempty input sets take part; an empty set is contained in everything
/// and subtracting it changes nothing.
LayeredNetwork reduce(const LayeredNetwork& net);
/// No nonempty second-layer input set is contained in another's.
bool is_reduced(const LayeredNetwork& net);

/// True iff, in every connected component of the first two layers, all
/// first-layer agents have the same out-degree. A first-layer agent with no
/// outgoing edge makes this false.
bool equal_outdegree_components(const LayeredNetwork& net);

/// Hub agent feeding every second-layer agent, each of which also has one private source.
LayeredNetwork ring_network(std::size_t n);
/// Closed form 1/4 + 1/(4n) of the ring network's final variance under unit precisions.
Rational ring_variance(std::size_t n);

/// Out-degree weighted average (d_1..d_n)/sum(d) over the first layer.
RationalVector naive_weights(const LayeredNetwork& net);

} // namespace ffnet
