#include "ffnet/analysis.hpp"
#include "ffnet/ensembles.hpp"
#include "ffnet/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace ffnet;

TEST_SUITE("ensembles") {

TEST_CASE("random networks") {
    const auto full = random_network({4, 3, 2}, 1.0, 9);
    CHECK(full.edge_count() == 4 * 3 + 3 * 2);
    CHECK(ensemble_is_ideal(full));
    CHECK(random_network({6, 5}, 0.5, 123) == random_network({6, 5}, 0.5, 123));
    CHECK_FALSE(random_network({6, 5}, 0.5, 123) == random_network({6, 5}, 0.5, 124));
    CHECK_THROWS_AS(random_network({2, 2}, 0.0, 1), RangeError);
    CHECK_THROWS_AS(random_network({2, 2}, 1.5, 1), RangeError);
    CHECK_THROWS_AS(random_network({}, 0.5, 1), RangeError);
}

TEST_CASE("p = 1 is always ideal") {
    for (const auto& sizes : std::vector<std::vector<std::size_t>>{{1, 1}, {7, 3}, {3, 7}, {4, 2, 5}, {2, 2, 2, 2}})
        CHECK(p_ideal(sizes, 1.0, 5, 1).fraction == 1.0);
}

TEST_CASE("p_ideal bookkeeping") {
    const auto r = p_ideal({8, 8}, 0.5, 50, 77, 1);
    CHECK(r.trials == 50);
    CHECK(r.ideal_count <= 50);
    CHECK(r.fraction == static_cast<double>(r.ideal_count) / 50);
    CHECK(r.seed == 77);
    CHECK(p_ideal({8, 8}, 0.5, 50, 77, 3).ideal_count == r.ideal_count);
    CHECK_THROWS_AS(p_ideal({8, 8}, 0.5, 0, 77), RangeError);
    CHECK_THROWS_AS(p_ideal({8, 0}, 0.5, 10, 77), RangeError);
}

TEST_CASE("ensemble verdict matches the general test") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto three = random_network({5, 5}, 0.5, seed);
        CHECK(ensemble_is_ideal(three) == is_ideal(three, PrecisionVector::ones(5)).ideal);
        const auto four = random_network({4, 4, 4}, 0.5, seed);
        CHECK(ensemble_is_ideal(four) == is_ideal(four, PrecisionVector::ones(4)).ideal);
    }
}

TEST_CASE("trial seeds depend on the cell, not its position") {
    CHECK(trial_seed(1, {10, 12}, 0.5, 3) == trial_seed(1, {10, 12}, 0.5, 3));
    CHECK(trial_seed(1, {10, 12}, 0.5, 3) != trial_seed(1, {10, 12}, 0.5, 4));
    CHECK(trial_seed(1, {10, 12}, 0.5, 3) != trial_seed(1, {10, 12}, 0.9, 3));
    CHECK(trial_seed(1, {10, 12}, 0.5, 3) != trial_seed(2, {10, 12}, 0.5, 3));
    CHECK(cell_key({1, 23}, 0.5) != cell_key({12, 3}, 0.5));

    SweepSpec a{{{6, 5}, {6, 7}}, {0.5}, 30, 5};
    SweepSpec b{{{6, 7}, {3, 3}, {6, 5}}, {0.3, 0.5}, 30, 5};
    const auto ra = sweep(a, 1);
    const auto rb = sweep(b, 2);
    CHECK(ra[0].ideal_count == rb[5].ideal_count); // {6,5} at 0.5
    CHECK(ra[1].ideal_count == rb[1].ideal_count); // {6,7} at 0.5
}

TEST_CASE("full column rank bounds the ideal fraction from below") {
    // Three layers, p = 1/2, L2 >= L1, on the same trials.
    for (std::size_t l2 : {6, 8, 10}) {
        std::size_t ideal = 0, full_rank = 0;
        for (std::size_t t = 0; t < 200; ++t) {
            const auto net = random_network({6, l2}, 0.5, trial_seed(3, {6, l2}, 0.5, t));
            const bool is = ensemble_is_ideal(net);
            const bool fr = has_full_column_rank(net.connectivity(0));
            ideal += is;
            full_rank += fr;
            if (fr)
                CHECK(is);
        }
        CHECK(ideal >= full_rank);
    }
}

TEST_CASE("sweep and CSV") {
    SweepSpec spec{{{10, 8}, {10, 12}, {4, 4, 3}}, {0.5, 1.0}, 20, 11};
    const auto results = sweep(spec, 2);
    REQUIRE(results.size() == 6);
    CHECK(results[0].layer_sizes == std::vector<std::size_t>{10, 8});
    CHECK(results[1].p == 1.0);
    CHECK(results[4].layer_sizes == std::vector<std::size_t>{4, 4, 3});
    for (const auto& r : results)
        if (r.p == 1.0)
            CHECK(r.fraction == 1.0);

    const auto csv = sweep_csv(results);
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "n_layers,L1,L2,L3,p,trials,ideal_count,fraction,ci95_halfwidth,master_seed,generator_name");
    std::getline(in, row);
    CHECK(row.rfind("3,10,8,,0.5,20,", 0) == 0);
    CHECK(row.find(",11,mt19937_64") != std::string::npos);
    CHECK(csv == sweep_csv(sweep(spec, 1)));

    CHECK(sweep({{{3, 3}}, {}, 10, 1}).empty());
    CHECK_THROWS_AS(sweep({{{3, 3}}, {0.5}, 0, 1}), RangeError);
    CHECK_THROWS_AS(sweep({{{3, 3}}, {0.0}, 10, 1}), RangeError);
    CHECK(sweep_csv({}).rfind("n_layers,L1,L2,p,", 0) == 0);
}

}
