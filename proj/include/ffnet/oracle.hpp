#pragma once

#include "ffnet/estimation.hpp"
#include "ffnet/network.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

/// Brute-force and independent-route checks for the estimation and analysis code.
namespace ffnet::oracle {

/// Minimum of sum a_l^2 / w_l over the span of `provider_rows` subject to sum a_l = 1,
/// found from a reduced row-echelon basis and its normal equations. Shares no
/// code with fuse().
RationalVector oracle_fuse(std::span<const RationalVector> provider_rows, const PrecisionVector& precisions);

inline constexpr std::size_t kMaxEdgeSlots = 24;

struct EnumerationSpec {
    std::size_t l1 = 0;
    std::size_t l2 = 0;
    std::optional<std::size_t> l3; // present for four-layer enumeration
    bool require_full_columns = true;

    std::vector<std::size_t> layer_sizes() const;
};

/// Throws RangeError when the spec would enumerate more than 2^kMaxEdgeSlots networks.
void check_feasible(const EnumerationSpec& spec);

/// Number of distinct networks with the given explicit layer sizes.
std::uint64_t network_count(const std::vector<std::size_t>& layer_sizes);
/// Network whose edge bits are the binary digits of `index`, matrix by matrix, row-major.
LayeredNetwork network_from_index(const std::vector<std::size_t>& layer_sizes, std::uint64_t index);

/// Outcome of comparing fuse() against oracle_fuse() on every fusion a network performs.
struct FuseAudit {
    std::size_t comparisons = 0;
    std::optional<std::string> first_mismatch;
    bool ok() const { return !first_mismatch; }
};
FuseAudit audit_fuse(const LayeredNetwork& net, const PrecisionVector& precisions);

struct MaxVarianceResult {
    Rational max_variance;
    std::vector<BinaryMatrix> maximizers; // raw (unsorted-row) form
    std::uint64_t networks_examined = 0;
    FuseAudit fuse_audit;
};

/// Maximum final variance (unit precisions) over all three-layer networks of
/// the given size. Rows are canonicalized by sorting, maximizers are expanded
/// back to every distinct row order.
MaxVarianceResult enumerate_max_variance(const EnumerationSpec& spec, unsigned threads = 0,
                                         bool audit_fusion = false);

/// Relabeling of ring_network(m): shape m x (m+1), one hub column full, every
/// other column with a single edge, every row with exactly two.
bool is_ring_relabeling(const BinaryMatrix& c);

struct MotifFreeResult {
    std::vector<LayeredNetwork> counterexamples; // non-ideal yet W-motif free
    std::uint64_t networks_examined = 0;         // fully communicating networks checked
    FuseAudit fuse_audit;
};

/// Checks every fully communicating network of the given size: lacking a W-motif must imply ideal.
MotifFreeResult enumerate_motif_free(const EnumerationSpec& spec, unsigned threads = 0, bool audit_fusion = false);

struct McCheck {
    double empirical = 0;
    double analytic = 0;
    double standard_error = 0;
    bool pass = false;
};

/// Simulated versus exact final variance; passes within three standard errors.
McCheck mc_variance_check(const LayeredNetwork& net, const PrecisionVector& precisions, std::size_t trials,
                          std::uint64_t seed, unsigned threads = 0);

/// Networks used by the golden checks.
namespace reference {
/// Two second-layer agents sharing the middle of three sources.
LayeredNetwork overlapping_pair();
/// Three second-layer agents, each listening to a different pair of three sources.
LayeredNetwork triangle();
} // namespace reference

struct CheckOutcome {
    std::string name;
    std::uint64_t instances = 0;
    bool pass = false;
    std::string first_failure;
};

enum class VerifyLevel { quick, full };

std::vector<CheckOutcome> run_verification(VerifyLevel level, std::uint64_t seed, unsigned threads = 0,
                                           const std::function<void(const CheckOutcome&)>& progress = {});
std::string verification_json(const std::vector<CheckOutcome>& checks, VerifyLevel level, std::uint64_t seed);

} // namespace ffnet::oracle
