#include "ffnet/linalg.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace ffnet;
using namespace ffnet::linalg;

namespace {

RationalRows random_rows(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int range) {
    std::uniform_int_distribution<int> num(-range, range), den(1, 4);
    RationalRows out(rows, RationalVector(cols));
    for (auto& r : out)
        for (auto& v : r) {
            v = Rational(num(rng), den(rng));
            v.canonicalize();
        }
    return out;
}

} // namespace

TEST_SUITE("linalg") {

TEST_CASE("echelon basis rank and membership") {
    EchelonBasis b(3);
    CHECK(b.insert(test::q({"1", "1", "0"})));
    CHECK(b.insert(test::q({"0", "1", "1"})));
    CHECK_FALSE(b.insert(test::q({"1", "2", "1"})));
    CHECK(b.rank() == 2);
    CHECK(b.contains(test::q({"2", "1", "-1"})));
    CHECK_FALSE(b.contains(test::q({"1", "1", "1"})));
}

TEST_CASE("express returns a certificate over all inserted rows") {
    EchelonBasis b(3, true);
    const RationalRows rows{test::q({"1", "1", "0"}), test::q({"2", "2", "0"}), test::q({"1", "0", "1"}),
                            test::q({"0", "1", "1"})};
    for (const auto& r : rows)
        b.insert(r);
    const auto target = test::q({"1", "1", "1"});
    const auto c = b.express(target);
    REQUIRE(c);
    REQUIRE(c->size() == rows.size());
    CHECK((*c)[1] == 0);
    RationalVector combined(3, Rational(0));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < 3; ++j)
            combined[j] += (*c)[i] * rows[i][j];
    CHECK(combined == target);
}

TEST_CASE("solve") {
    const auto x = solve({test::q({"2", "1"}), test::q({"1", "3"})}, test::q({"3", "5"}));
    REQUIRE(x);
    CHECK(*x == test::q({"4/5", "7/5"}));
    CHECK_FALSE(solve({test::q({"1", "2"}), test::q({"2", "4"})}, test::q({"1", "1"})));
}

TEST_CASE("integer rank matches rational rank on random matrices") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
        // Small entries make dependencies common.
        auto m = random_rows(rng, rows, cols, 1);
        if (t % 3 == 0)
            m.push_back(m.front());
        EchelonBasis exact(cols);
        for (const auto& r : m)
            exact.insert(r);
        CHECK(integer_rank(clear_denominators(m)) == exact.rank());
    }
}

TEST_CASE("modular screening never claims a dependent row is independent") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        const std::size_t cols = 1 + rng() % 6;
        auto m = random_rows(rng, 1 + rng() % 7, cols, 2);
        ModularEchelon modular(cols);
        EchelonBasis exact(cols);
        for (const auto& r : m) {
            const bool exact_independent = exact.insert(r);
            // The modular basis only ever contains rows that are independent over Q.
            if (modular.insert(r))
                CHECK(exact_independent);
        }
        CHECK(modular.rank() <= exact.rank());
    }
}

TEST_CASE("modular screening sees the ordinary rank of small integer matrices") {
    ModularEchelon m(3);
    CHECK(m.insert(test::q({"1", "1", "0"})));
    CHECK(m.insert(test::q({"0", "1", "1"})));
    CHECK_FALSE(m.insert(test::q({"1", "0", "-1"})));
    CHECK(m.insert(test::q({"1/2", "0", "1/3"})));
    CHECK(m.rank() == 3);
}

}
