#include "ffnet/errors.hpp"
#include "ffnet/network.hpp"
#include "ffnet/oracle.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>

using namespace ffnet;

TEST_SUITE("network") {

TEST_CASE("shape errors name the matrix") {
    CHECK_THROWS_AS(LayeredNetwork({3, 2}, {}), StructuralError);
    try {
        LayeredNetwork({3, 2, 1}, {BinaryMatrix(2, 3), BinaryMatrix(2, 2)});
        FAIL("expected a structural error");
    } catch (const StructuralError& e) {
        CHECK(std::string(e.what()).find("connectivity matrix 2") != std::string::npos);
    }
    CHECK_THROWS_AS(LayeredNetwork({0}, {}), StructuralError);
    CHECK_THROWS_AS(BinaryMatrix::from_rows({{1, 2}}), StructuralError);
    CHECK_THROWS_AS(BinaryMatrix::from_rows({{1, 0}, {1}}), StructuralError);
}

TEST_CASE("validate") {
    CHECK(validate(oracle::reference::overlapping_pair()).ok());

    const auto silent_source = test::three_layer({{1, 0}, {1, 0}});
    auto report = validate(silent_source);
    CHECK_FALSE(report.ok());
    REQUIRE(report.zero_out_degree.size() == 1);
    CHECK(report.zero_out_degree[0] == AgentRef{0, 1});
    CHECK(report.zero_in_degree.empty());

    const auto deaf_agent = test::three_layer({{0, 0}, {1, 1}});
    report = validate(deaf_agent);
    CHECK_FALSE(report.ok());
    REQUIRE(report.zero_in_degree.size() == 1);
    CHECK(report.zero_in_degree[0] == AgentRef{1, 0});
    CHECK(report.isolated_agents().size() == 1);
}

TEST_CASE("path matrices") {
    const auto pair = oracle::reference::overlapping_pair();
    CHECK(path_matrix(pair, 0, 1) == pair.connectivity(0));

    const LayeredNetwork chain({2, 2, 1}, {BinaryMatrix::identity(2), BinaryMatrix{{1, 1}}});
    CHECK(path_matrix(chain, 0, 2) == BinaryMatrix{{1, 1}});
    CHECK_THROWS_AS(path_matrix(chain, 1, 1), RangeError);
    CHECK_THROWS_AS(path_matrix(chain, 0, 3), RangeError);

    // A W pattern that only appears two steps downstream.
    const LayeredNetwork deep({3, 3, 2}, {BinaryMatrix::identity(3), BinaryMatrix{{1, 1, 0}, {0, 1, 1}}});
    CHECK(path_matrix(deep, 0, 2) == BinaryMatrix{{1, 1, 0}, {0, 1, 1}});
}

TEST_CASE("path matrix rows follow the input-set recursion") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto net = oracle::network_from_index({3, 3, 3, 2}, seed * 2654435761ULL % oracle::network_count({3, 3, 3, 2}));
        for (std::size_t k = 2; k < net.layer_count(); ++k) {
            const auto p = path_matrix(net, 0, k);
            const auto prev = path_matrix(net, 0, k - 1);
            for (std::size_t i = 0; i < net.layer_size(k); ++i) {
                std::vector<int> expected(net.first_layer_size(), 0);
                for (auto j : input_set(net, k, i))
                    for (std::size_t l = 0; l < expected.size(); ++l)
                        expected[l] |= prev(j, l);
                CHECK(p.row(i) == expected);
            }
        }
    }
}

TEST_CASE("degrees and input sets") {
    CHECK(out_degrees(oracle::reference::overlapping_pair(), 0) == std::vector<std::size_t>{1, 2, 1});
    CHECK(out_degrees(oracle::reference::triangle(), 0) == std::vector<std::size_t>{2, 2, 2});
    const LayeredNetwork id({4, 4}, {BinaryMatrix::identity(4)});
    CHECK(out_degrees(id, 0) == std::vector<std::size_t>(4, 1));
    CHECK(in_degrees(oracle::reference::overlapping_pair(), 1) == std::vector<std::size_t>{2, 2});
    CHECK(input_set(oracle::reference::overlapping_pair(), 1, 1) == std::vector<std::size_t>{1, 2});
    CHECK_THROWS_AS(input_set(id, 0, 0), RangeError);
    CHECK_THROWS_AS(input_set(id, 1, 4), RangeError);
    CHECK_THROWS_AS(out_degrees(id, 2), RangeError);
}

TEST_CASE("precision vectors") {
    CHECK_THROWS_AS(PrecisionVector(test::q({"1", "0"})), ContractViolation);
    CHECK_THROWS_AS(PrecisionVector(test::q({"-1/2"})), ContractViolation);
    CHECK(PrecisionVector::from_variances(test::q({"2/3", "4"})).values() == test::q({"3/2", "1/4"}));
    CHECK(PrecisionVector::ones(3).total() == 3);
}

TEST_CASE("file format") {
    SUBCASE("missing precisions default to ones") {
        const auto f = parse_network(R"({"layers": [3, 2], "connectivity": [[[1,1,0],[0,1,1]]]})");
        CHECK(f.network == oracle::reference::overlapping_pair());
        CHECK(f.precisions == PrecisionVector::ones(3));
    }
    SUBCASE("variances become exact precisions") {
        const auto f = parse_network(R"({"layers": [2], "connectivity": [], "variances": ["2/3", 5]})");
        CHECK(f.precisions.values() == test::q({"3/2", "1/5"}));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_network(R"({"layers": [2], "connectivity": [], "extra": 1})"), ParseError);
        CHECK_THROWS_AS(parse_network(R"({"layers": [2], "connectivity": [], "precisions": ["1"]})"), ParseError);
        CHECK_THROWS_AS(parse_network(R"({"layers": [2], "connectivity": [], "precisions": ["1","1"],
                                          "variances": ["1","1"]})"),
                        ParseError);
        CHECK_THROWS_AS(parse_network(R"({"layers": [2], "connectivity": [], "precisions": ["1", "0"]})"),
                        Error);
        CHECK_THROWS_AS(parse_network(R"({"layers": [2, 2], "connectivity": [[[1, 1]]]})"), Error);
        CHECK_THROWS_AS(parse_network(R"({"layers": [2, 1], "connectivity": [[[1, 2]]]})"), Error);
        try {
            parse_network("{\n\"layers\": [2,\n", "net.json");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("net.json") != std::string::npos);
            CHECK(std::string(e.what()).find("line") != std::string::npos);
        }
    }
}

TEST_CASE("save and load round trip exactly") {
    const auto dir = std::filesystem::temp_directory_path() / "ffnet_unit_network";
    std::filesystem::create_directories(dir);
    const auto path = dir / "net.json";
    const LayeredNetwork net({3, 2, 2}, {BinaryMatrix{{1, 1, 0}, {0, 1, 1}}, BinaryMatrix{{1, 0}, {1, 1}}});
    const PrecisionVector w(test::q({"1/3", "7", "22/7"}));
    save(net, w, path);
    const auto back = load(path);
    CHECK(back.network == net);
    CHECK(back.precisions == w);
    CHECK(parse_network(serialize_network(net, w)) == back);
    CHECK_THROWS_AS(load(dir / "missing.json"), Error);
    std::filesystem::remove_all(dir);
}

}
