#pragma once

#include "ffnet/network.hpp"
#include "ffnet/rational.hpp"

#include <initializer_list>
#include <random>

namespace test {

inline ffnet::RationalVector q(std::initializer_list<const char*> values) {
    ffnet::RationalVector out;
    for (auto v : values)
        out.push_back(ffnet::parse_rational(v));
    return out;
}

inline ffnet::LayeredNetwork three_layer(std::initializer_list<std::initializer_list<int>> rows) {
    ffnet::BinaryMatrix c(rows);
    return ffnet::LayeredNetwork({c.cols(), c.rows()}, {c});
}

inline ffnet::PrecisionVector random_precisions(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned long> digit(1, 9);
    ffnet::RationalVector w;
    for (std::size_t i = 0; i < n; ++i) {
        ffnet::Rational r(digit(rng), digit(rng));
        r.canonicalize();
        w.push_back(r);
    }
    return ffnet::PrecisionVector(std::move(w));
}

} // namespace test
