#include "cli.hpp"

#include "ffnet/analysis.hpp"
#include "ffnet/ensembles.hpp"
#include "ffnet/errors.hpp"
#include "ffnet/oracle.hpp"
#include "ffnet/reports.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace ffnet::cli {

namespace {

struct Globals {
    std::string seed_text;
    unsigned threads = 0;
    std::string format;
};

std::size_t parse_count(const std::string& text, const std::string& what) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw RangeError("invalid " + what + " '" + text + "'");
    return value;
}

std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw RangeError("invalid seed '" + text + "' (expected an unsigned 64-bit integer or 'random')");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep))
        parts.push_back(part);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

void emit(const std::string& contents, const std::string& path, std::ostream& out) {
    if (path.empty())
        out << contents;
    else
        write_file_atomic(path, contents);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string verification_csv(const std::vector<oracle::CheckOutcome>& checks) {
    std::ostringstream out;
    out << "name,instances,pass,first_failure\n";
    for (const auto& c : checks)
        out << c.name << ',' << c.instances << ',' << (c.pass ? "true" : "false") << ',' << csv_field(c.first_failure)
            << '\n';
    return out.str();
}

SweepSpec preset(const std::string& name) {
    // Varied layer runs from first-layer size - 20 to + 20 in steps of 2, kept positive.
    auto lowest = [](std::size_t l1) -> std::size_t { return l1 > 20 ? l1 - 20 : 2; };
    SweepSpec spec;
    spec.probabilities = {0.1, 0.5, 0.9};
    if (name == "three-layer") {
        for (std::size_t l1 : {20, 50, 100})
            for (std::size_t l2 = lowest(l1); l2 <= l1 + 20; l2 += 2)
                spec.layer_size_grid.push_back({l1, l2});
    } else if (name == "four-layer") {
        for (std::size_t l1 : {20, 50})
            for (std::size_t l3 = lowest(l1); l3 <= l1 + 20; l3 += 2)
                spec.layer_size_grid.push_back({l1, l1, l3});
    } else {
        throw RangeError("unknown preset '" + name + "' (expected three-layer or four-layer)");
    }
    return spec;
}

SweepSpec spec_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open sweep spec '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    SweepSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (key == "layer_size_grid")
            spec.layer_size_grid = value.get<std::vector<std::vector<std::size_t>>>();
        else if (key == "probabilities")
            spec.probabilities = value.get<std::vector<double>>();
        else if (key == "trials")
            spec.trials = value.get<std::size_t>();
        else if (key == "master_seed")
            spec.master_seed = value.get<std::uint64_t>();
        else
            throw ParseError(path + ": unknown key '" + key + "'");
    }
    return spec;
}

std::vector<std::vector<std::size_t>> cartesian(const std::vector<std::vector<std::size_t>>& sets) {
    std::vector<std::vector<std::size_t>> grid{{}};
    for (const auto& set : sets) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& prefix : grid)
            for (auto v : set) {
                next.push_back(prefix);
                next.back().push_back(v);
            }
        grid = std::move(next);
    }
    return grid;
}

} // namespace

std::vector<std::size_t> parse_size_set(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_count(parts[0], "layer size"));
            continue;
        }
        if (parts.size() > 3)
            throw RangeError("invalid layer range '" + item + "'");
        const auto lo = parse_count(parts[0], "layer size");
        const auto hi = parse_count(parts[1], "layer size");
        const auto step = parts.size() == 3 ? parse_count(parts[2], "range step") : 1;
        if (step == 0 || lo > hi)
            throw RangeError("invalid layer range '" + item + "'");
        for (auto v = lo; v <= hi; v += step)
            out.push_back(v);
    }
    for (auto v : out)
        if (v == 0)
            throw RangeError("layer sizes must be positive");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact analysis of layered networks of minimum-variance estimators", "ffnet"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed_text, "Master seed, or 'random' to draw and print one")
        ->default_str(std::to_string(kDefaultSeed));
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->default_val(0);
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    std::string input, output;

    auto* analyze = app.add_subcommand("analyze", "Report weights, variance, ideality and W-motifs of a network");
    analyze->add_option("network", input, "Network JSON file")->required();
    analyze->add_option("-o,--output", output, "Write the report here instead of stdout");

    auto* reduce_cmd = app.add_subcommand("reduce", "Remove input-set containments from a three-layer network");
    reduce_cmd->add_option("network", input, "Network JSON file")->required();
    reduce_cmd->add_option("-o,--output", output, "Output network file")->required();

    auto* generate = app.add_subcommand("generate", "Write a ring or random network file");
    generate->require_subcommand(1);
    std::size_t ring_n = 0;
    auto* ring = generate->add_subcommand("ring", "Hub feeding n agents, each with one private source");
    ring->add_option("-n,--n", ring_n, "Number of second-layer agents")->required();
    ring->add_option("-o,--output", output, "Output network file")->required();
    std::string random_layers;
    double random_p = 0.5;
    auto* random = generate->add_subcommand("random", "Independent edges with probability p");
    random->add_option("--layers", random_layers, "Comma-separated layer sizes, e.g. 5,4")->required();
    random->add_option("--p", random_p, "Edge probability in (0, 1]")->default_val(0.5);
    random->add_option("-o,--output", output, "Output network file")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Fraction of ideal random networks over a grid");
    std::vector<std::string> layer_sets;
    std::vector<double> probabilities;
    std::optional<std::size_t> trials;
    std::string spec_path, preset_name;
    sweep_cmd->add_option("-L,--layer", layer_sets, "Sizes for the next layer: list of n or a:b[:step]; repeat per layer");
    sweep_cmd->add_option("--p", probabilities, "Edge probabilities")->delimiter(',');
    sweep_cmd->add_option("--trials", trials, "Trials per cell (default " + std::to_string(kDefaultSweepTrials) + ")");
    sweep_cmd->add_option("--spec", spec_path, "JSON spec {layer_size_grid, probabilities, trials, master_seed}");
    sweep_cmd->add_option("--preset", preset_name, "Built-in grid")->check(CLI::IsMember({"three-layer", "four-layer"}));
    sweep_cmd->add_option("-o,--output", output, "Write results here instead of stdout");

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo draws of the final estimate");
    std::size_t sim_trials = 100000;
    double true_value = 0;
    std::string bias_text;
    simulate_cmd->add_option("network", input, "Network JSON file")->required();
    simulate_cmd->add_option("--trials", sim_trials, "Number of draws")->default_val(100000);
    simulate_cmd->add_option("--true-value", true_value, "True state s")->default_val(0.0);
    simulate_cmd->add_option("--bias", bias_text, "Comma-separated rational first-layer biases");
    simulate_cmd->add_option("-o,--output", output, "Write results here instead of stdout");

    auto* verify = app.add_subcommand("verify", "Run the oracle cross-checks");
    std::string level = "quick";
    verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}))->default_val("quick");
    verify->add_option("-o,--output", output, "Write the report here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }

    try {
        std::uint64_t seed = kDefaultSeed;
        const bool seed_given = !g.seed_text.empty();
        if (g.seed_text == "random") {
            std::random_device rd;
            seed = (std::uint64_t{rd()} << 32) ^ rd();
            err << "seed: " << seed << '\n';
        } else if (seed_given) {
            seed = parse_seed(g.seed_text);
        }

        if (analyze->parsed()) {
            const auto file = load(input);
            const auto report = analyze_network(file.network, file.precisions);
            const auto format = g.format.empty() ? "json" : g.format;
            emit(format == "csv" ? analysis_csv(report) : analysis_json(report), output, out);
            err << analysis_text(report);
            return report.verdict.ideal ? kOk : kNonIdeal;
        }
        if (reduce_cmd->parsed()) {
            const auto file = load(input);
            save(reduce(file.network), file.precisions, output);
            return kOk;
        }
        if (ring->parsed()) {
            const auto net = ring_network(ring_n);
            save(net, PrecisionVector::ones(net.first_layer_size()), output);
            return kOk;
        }
        if (random->parsed()) {
            std::vector<std::size_t> sizes;
            for (const auto& s : split(random_layers, ','))
                sizes.push_back(parse_count(s, "layer size"));
            const auto net = random_network(sizes, random_p, seed);
            save(net, PrecisionVector::ones(net.first_layer_size()), output);
            return kOk;
        }
        if (sweep_cmd->parsed()) {
            const int sources = !spec_path.empty() + !preset_name.empty() + !layer_sets.empty();
            if (sources != 1)
                throw RangeError("sweep: give exactly one of --layer, --spec or --preset");
            SweepSpec spec;
            if (!spec_path.empty()) {
                spec = spec_from_file(spec_path);
            } else if (!preset_name.empty()) {
                spec = preset(preset_name);
            } else {
                std::vector<std::vector<std::size_t>> sets;
                for (const auto& s : layer_sets)
                    sets.push_back(parse_size_set(s));
                spec.layer_size_grid = cartesian(sets);
            }
            if (!probabilities.empty())
                spec.probabilities = probabilities;
            else if (spec_path.empty() && preset_name.empty())
                spec.probabilities = {0.5};
            if (trials)
                spec.trials = *trials;
            if (seed_given || spec_path.empty())
                spec.master_seed = seed;
            const auto results = sweep(spec, g.threads);
            const auto format = g.format.empty() ? "csv" : g.format;
            emit(format == "json" ? sweep_json(results) : sweep_csv(results), output, out);
            return kOk;
        }
        if (simulate_cmd->parsed()) {
            const auto file = load(input);
            std::optional<RationalVector> biases;
            if (!bias_text.empty()) {
                biases.emplace();
                for (const auto& s : split(bias_text, ','))
                    biases->push_back(parse_rational(s));
                if (biases->size() != file.network.first_layer_size())
                    throw ContractViolation("--bias needs one value per first-layer agent");
            }
            const auto estimate = final_estimate(file.network, file.precisions);
            SimulationReport report;
            report.true_value = true_value;
            report.analytic_variance = estimate.variance;
            if (biases)
                report.analytic_bias = final_bias(estimate.alpha, *biases);
            report.result =
                simulate_weights(estimate.alpha, file.precisions, true_value, biases, sim_trials, seed, g.threads);
            const auto format = g.format.empty() ? "json" : g.format;
            emit(format == "csv" ? simulation_csv(report) : simulation_json(report), output, out);
            return kOk;
        }
        if (verify->parsed()) {
            const auto lvl = level == "full" ? oracle::VerifyLevel::full : oracle::VerifyLevel::quick;
            const auto checks = oracle::run_verification(lvl, seed, g.threads, [&](const oracle::CheckOutcome& c) {
                err << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.instances << " instances)";
                if (!c.pass)
                    err << ": " << c.first_failure;
                err << '\n';
            });
            const auto format = g.format.empty() ? "json" : g.format;
            emit(format == "csv" ? verification_csv(checks) : oracle::verification_json(checks, lvl, seed), output, out);
            for (const auto& c : checks)
                if (!c.pass)
                    return kFailure;
            return kOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

} // namespace ffnet::cli
