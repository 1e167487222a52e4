#pragma once

#include "ffnet/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

/// Exact linear algebra over the rationals and integers.
namespace ffnet::linalg {

using RationalRows = std::vector<RationalVector>;

/// Echelon basis of a row space, grown one candidate row at a time.
///
/// Stored rows are normalized to a unit pivot and reduced against every
/// earlier pivot, so membership of a vector is decided by a single forward
/// reduction. With combination tracking enabled, each stored row also keeps
/// its expression in terms of the inserted candidates, which lets `express`
/// return an exact certificate for a membership query.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t dimension, bool track_combinations = false);

    /// Returns true when `row` is independent of everything accepted so far.
    bool insert(const RationalVector& row);

    bool contains(const RationalVector& vector) const;

    /// Coefficients c, one per insert() call, with sum_i c_i * candidate_i == vector.
    /// Rejected candidates get zero. Requires combination tracking.
    std::optional<RationalVector> express(const RationalVector& vector) const;

    std::size_t rank() const { return entries_.size(); }
    std::size_t dimension() const { return dimension_; }
    std::size_t inserted() const { return inserted_; }

private:
    struct Entry {
        RationalVector row;
        std::size_t pivot;
        RationalVector combination;
    };

    // Reduces `vector` in place; returns the combination of stored rows subtracted.
    void reduce(RationalVector& vector, RationalVector* combination) const;

    std::size_t dimension_;
    bool track_;
    std::size_t inserted_ = 0;
    std::vector<Entry> entries_;
};

/// Echelon basis modulo the prime 2^61 - 1.
///
/// Independence modulo a prime implies independence over the rationals, so an
/// `independent` answer is exact. Anything else is inconclusive and callers
/// must fall back to exact arithmetic.
class ModularEchelon {
public:
    static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

    explicit ModularEchelon(std::size_t dimension);

    /// Inserts and returns true only when the row is provably independent.
    /// A false return leaves the basis unchanged.
    bool insert(const RationalVector& row);

    std::size_t rank() const { return entries_.size(); }

private:
    struct Entry {
        std::vector<std::uint64_t> row;
        std::size_t pivot;
    };
    std::size_t dimension_;
    std::vector<Entry> entries_;
};

/// Solves the square system A x = b. Returns nullopt when A is singular.
std::optional<RationalVector> solve(RationalRows a, RationalVector b);

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
std::size_t integer_rank(std::vector<std::vector<Integer>> rows);

/// Rows scaled by the lcm of their denominators; preserves the row space.
std::vector<std::vector<Integer>> clear_denominators(const RationalRows& rows);

} // namespace ffnet::linalg
