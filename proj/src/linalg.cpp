#include "ffnet/linalg.hpp"

#include "ffnet/errors.hpp"

#include <optional>
#include <utility>

namespace ffnet::linalg {

EchelonBasis::EchelonBasis(std::size_t dimension, bool track_combinations)
    : dimension_(dimension), track_(track_combinations) {}

void EchelonBasis::reduce(RationalVector& vector, RationalVector* combination) const {
    Rational factor;
    for (const auto& entry : entries_) {
        if (sgn(vector[entry.pivot]) == 0)
            continue;
        factor = vector[entry.pivot];
        for (std::size_t j = entry.pivot; j < dimension_; ++j)
            if (sgn(entry.row[j]) != 0)
                vector[j] -= factor * entry.row[j];
        if (combination)
            for (std::size_t j = 0; j < entry.combination.size(); ++j)
                if (sgn(entry.combination[j]) != 0)
                    (*combination)[j] += factor * entry.combination[j];
    }
}

bool EchelonBasis::insert(const RationalVector& row) {
    if (row.size() != dimension_)
        throw ContractViolation("EchelonBasis::insert: row length mismatch");
    const std::size_t label = inserted_++;

    RationalVector residual = row;
    RationalVector subtracted;
    if (track_)
        subtracted.assign(label + 1, Rational(0));
    reduce(residual, track_ ? &subtracted : nullptr);

    std::size_t pivot = 0;
    while (pivot < dimension_ && sgn(residual[pivot]) == 0)
        ++pivot;
    if (pivot == dimension_)
        return false;

    const Rational scale = 1 / residual[pivot];
    for (std::size_t j = pivot; j < dimension_; ++j)
        if (sgn(residual[j]) != 0)
            residual[j] *= scale;

    RationalVector combination;
    if (track_) {
        // residual = candidate - sum(subtracted_j * candidate_j), then scaled.
        combination.assign(label + 1, Rational(0));
        for (std::size_t j = 0; j < label; ++j)
            if (sgn(subtracted[j]) != 0)
                combination[j] = -subtracted[j] * scale;
        combination[label] = scale;
    }
    entries_.push_back({std::move(residual), pivot, std::move(combination)});
    return true;
}

bool EchelonBasis::contains(const RationalVector& vector) const {
    if (vector.size() != dimension_)
        throw ContractViolation("EchelonBasis::contains: length mismatch");
    RationalVector residual = vector;
    reduce(residual, nullptr);
    return is_zero(residual);
}

std::optional<RationalVector> EchelonBasis::express(const RationalVector& vector) const {
    if (!track_)
        throw ContractViolation("EchelonBasis::express requires combination tracking");
    if (vector.size() != dimension_)
        throw ContractViolation("EchelonBasis::express: length mismatch");
    RationalVector residual = vector;
    RationalVector coefficients(inserted_, Rational(0));
    reduce(residual, &coefficients);
    if (!is_zero(residual))
        return std::nullopt;
    return coefficients;
}

std::optional<RationalVector> solve(RationalRows a, RationalVector b) {
    const std::size_t n = a.size();
    if (b.size() != n)
        throw ContractViolation("solve: right-hand side length mismatch");
    for (const auto& row : a)
        if (row.size() != n)
            throw ContractViolation("solve: matrix is not square");

    Rational factor;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(a[pivot][col]) == 0)
            ++pivot;
        if (pivot == n)
            return std::nullopt;
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            if (sgn(a[i][col]) == 0)
                continue;
            factor = a[i][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j)
                if (sgn(a[col][j]) != 0)
                    a[i][j] -= factor * a[col][j];
            b[i] -= factor * b[col];
        }
    }

    RationalVector x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j)
            if (sgn(a[i][j]) != 0)
                acc -= a[i][j] * x[j];
        x[i] = acc / a[i][i];
    }
    return x;
}

std::size_t integer_rank(std::vector<std::vector<Integer>> rows) {
    if (rows.empty())
        return 0;
    const std::size_t m = rows.size();
    const std::size_t n = rows.front().size();
    Integer previous = 1;
    Integer scratch;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < m; ++col) {
        std::size_t pivot = rank;
        while (pivot < m && sgn(rows[pivot][col]) == 0)
            ++pivot;
        if (pivot == m)
            continue;
        std::swap(rows[pivot], rows[rank]);
        const auto& prow = rows[rank];
        for (std::size_t i = rank + 1; i < m; ++i) {
            auto& row = rows[i];
            const Integer lead = row[col];
            for (std::size_t j = col + 1; j < n; ++j) {
                // row[j] = (pivot * row[j] - lead * prow[j]) / previous, exact.
                scratch = prow[col] * row[j];
                if (sgn(lead) != 0 && sgn(prow[j]) != 0)
                    scratch -= lead * prow[j];
                mpz_divexact(row[j].get_mpz_t(), scratch.get_mpz_t(), previous.get_mpz_t());
            }
            row[col] = 0;
        }
        previous = prow[col];
        ++rank;
    }
    return rank;
}

std::vector<std::vector<Integer>> clear_denominators(const RationalRows& rows) {
    std::vector<std::vector<Integer>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        Integer scale = 1;
        for (const auto& v : row)
            if (sgn(v) != 0)
                mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den_mpz_t());
        std::vector<Integer> scaled;
        scaled.reserve(row.size());
        for (const auto& v : row)
            scaled.push_back(Integer(v.get_num() * (scale / v.get_den())));
        out.push_back(std::move(scaled));
    }
    return out;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
constexpr u64 P = ModularEchelon::kPrime;

u64 mul_mod(u64 a, u64 b) {
    const u128 x = static_cast<u128>(a) * b;
    u64 r = static_cast<u64>(x & P) + static_cast<u64>(x >> 61);
    return r >= P ? r - P : r;
}

u64 sub_mod(u64 a, u64 b) { return a >= b ? a - b : a + P - b; }

u64 pow_mod(u64 base, u64 exp) {
    u64 result = 1;
    while (exp) {
        if (exp & 1)
            result = mul_mod(result, base);
        base = mul_mod(base, base);
        exp >>= 1;
    }
    return result;
}

u64 inv_mod(u64 a) { return pow_mod(a, P - 2); }

// Image of a rational in Z/P; nullopt when P divides the denominator.
std::optional<u64> to_mod(const Rational& v) {
    if (sgn(v) == 0)
        return u64{0};
    const u64 den = mpz_fdiv_ui(v.get_den_mpz_t(), P);
    if (den == 0)
        return std::nullopt;
    const u64 num = mpz_fdiv_ui(v.get_num_mpz_t(), P);
    return mul_mod(num, inv_mod(den));
}

} // namespace

ModularEchelon::ModularEchelon(std::size_t dimension) : dimension_(dimension) {}

bool ModularEchelon::insert(const RationalVector& row) {
    if (row.size() != dimension_)
        throw ContractViolation("ModularEchelon::insert: row length mismatch");
    std::vector<u64> residual(dimension_);
    for (std::size_t j = 0; j < dimension_; ++j) {
        auto v = to_mod(row[j]);
        if (!v)
            return false;
        residual[j] = *v;
    }
    for (const auto& entry : entries_) {
        const u64 f = residual[entry.pivot];
        if (f == 0)
            continue;
        for (std::size_t j = entry.pivot; j < dimension_; ++j)
            if (entry.row[j] != 0)
                residual[j] = sub_mod(residual[j], mul_mod(f, entry.row[j]));
    }
    std::size_t pivot = 0;
    while (pivot < dimension_ && residual[pivot] == 0)
        ++pivot;
    if (pivot == dimension_)
        return false;
    const u64 scale = inv_mod(residual[pivot]);
    for (std::size_t j = pivot; j < dimension_; ++j)
        residual[j] = mul_mod(residual[j], scale);
    entries_.push_back({std::move(residual), pivot});
    return true;
}

} // namespace ffnet::linalg
