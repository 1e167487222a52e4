#include "ffnet/analysis.hpp"
#include "ffnet/ensembles.hpp"
#include "ffnet/errors.hpp"
#include "ffnet/estimation.hpp"
#include "ffnet/network.hpp"
#include "ffnet/reports.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ffnet;

namespace {

py::object fraction(const Rational& r) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(to_string(r));
}

py::list fractions(const RationalVector& v) {
    py::list out;
    for (const auto& r : v)
        out.append(fraction(r));
    return out;
}

// Accepts ints, strings and fractions.Fraction alike through str().
RationalVector rationals(const py::sequence& values) {
    RationalVector out;
    for (const auto& v : values)
        out.push_back(parse_rational(py::str(v).cast<std::string>()));
    return out;
}

PrecisionVector precisions_for(const LayeredNetwork& net, const std::optional<py::sequence>& precisions) {
    return precisions ? PrecisionVector(rationals(*precisions)) : PrecisionVector::ones(net.first_layer_size());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact analysis of layered estimation networks";
    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    py::class_<LayeredNetwork>(m, "Network")
        .def(py::init([](std::vector<std::size_t> sizes, const std::vector<std::vector<std::vector<int>>>& mats) {
                 std::vector<BinaryMatrix> c;
                 for (const auto& rows : mats)
                     c.push_back(BinaryMatrix::from_rows(rows));
                 return LayeredNetwork(std::move(sizes), std::move(c));
             }),
             py::arg("layers"), py::arg("connectivity"))
        .def_property_readonly("layers", &LayeredNetwork::layer_sizes)
        .def_property_readonly("connectivity",
                               [](const LayeredNetwork& n) {
                                   std::vector<std::vector<std::vector<int>>> out;
                                   for (const auto& c : n.connectivity())
                                       out.push_back(c.to_rows());
                                   return out;
                               })
        .def_property_readonly("edge_count", &LayeredNetwork::edge_count)
        .def("__eq__", [](const LayeredNetwork& a, const LayeredNetwork& b) { return a == b; })
        .def("to_json",
             [](const LayeredNetwork& n, std::optional<py::sequence> p) {
                 return serialize_network(n, precisions_for(n, p));
             },
             py::arg("precisions") = py::none());

    m.def("loads", [](const std::string& text) {
        auto f = parse_network(text);
        return py::make_tuple(f.network, fractions(f.precisions.values()));
    }, py::arg("text"), "Parse network JSON; returns (network, precisions).");

    m.def("final_estimate", [](const LayeredNetwork& n, std::optional<py::sequence> p) {
        const auto e = final_estimate(n, precisions_for(n, p));
        py::dict d;
        d["alpha"] = fractions(e.alpha);
        d["variance"] = fraction(e.variance);
        d["ideal_variance"] = fraction(e.ideal_variance);
        return d;
    }, py::arg("network"), py::arg("precisions") = py::none());

    m.def("is_ideal", [](const LayeredNetwork& n, std::optional<py::sequence> p) {
        return is_ideal(n, precisions_for(n, p)).ideal;
    }, py::arg("network"), py::arg("precisions") = py::none());

    m.def("w_motif", [](const LayeredNetwork& n) -> py::object {
        const auto w = has_w_motif(n);
        if (!w)
            return py::none();
        py::dict d;
        d["layer"] = w->to_layer + 1;
        d["agents"] = py::make_tuple(w->agents[0] + 1, w->agents[1] + 1);
        d["sources"] = py::make_tuple(w->sources[0] + 1, w->sources[1] + 1, w->sources[2] + 1);
        return d;
    }, py::arg("network"), "First W-motif found, 1-based, or None.");

    m.def("analyze", [](const LayeredNetwork& n, std::optional<py::sequence> p) {
        return analysis_json(analyze_network(n, precisions_for(n, p)));
    }, py::arg("network"), py::arg("precisions") = py::none(), "Analysis report as JSON text.");

    m.def("reduce", &ffnet::reduce, py::arg("network"));
    m.def("ring_network", &ring_network, py::arg("n"));
    m.def("ring_variance", [](std::size_t n) { return fraction(ring_variance(n)); }, py::arg("n"));
    m.def("random_network", &random_network, py::arg("layers"), py::arg("p"), py::arg("seed"));

    m.def("p_ideal", [](const std::vector<std::size_t>& sizes, double p, std::size_t trials, std::uint64_t seed,
                        unsigned threads) {
        EnsembleResult r;
        {
            py::gil_scoped_release release;
            r = p_ideal(sizes, p, trials, seed, threads);
        }
        py::dict d;
        d["ideal_count"] = r.ideal_count;
        d["trials"] = r.trials;
        d["fraction"] = r.fraction;
        d["ci95_halfwidth"] = r.ci95_halfwidth;
        return d;
    }, py::arg("layers"), py::arg("p"), py::arg("trials") = kDefaultSweepTrials, py::arg("seed") = kDefaultSeed,
       py::arg("threads") = 0);

    m.def("simulate", [](const LayeredNetwork& n, std::size_t trials, std::uint64_t seed,
                         std::optional<py::sequence> p, double true_value, unsigned threads) {
        const auto w = precisions_for(n, p);
        SimulationResult r;
        {
            py::gil_scoped_release release;
            r = simulate(n, w, true_value, std::nullopt, trials, seed, threads);
        }
        py::dict d;
        d["mean"] = r.mean;
        d["variance"] = r.variance;
        d["variance_stderr"] = r.variance_stderr;
        return d;
    }, py::arg("network"), py::arg("trials"), py::arg("seed") = kDefaultSeed, py::arg("precisions") = py::none(),
       py::arg("true_value") = 0.0, py::arg("threads") = 0);

    m.attr("DEFAULT_SEED") = kDefaultSeed;
}
