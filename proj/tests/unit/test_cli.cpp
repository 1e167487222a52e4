#include "../../tools/cli.hpp"

#include "ffnet/errors.hpp"
#include "ffnet/network.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ffnet;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(FFNET_DATA_DIR) + "/" + name; }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ffnet_cli_test_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("size sets") {
    CHECK(cli::parse_size_set("20,50:60:5") == std::vector<std::size_t>{20, 50, 55, 60});
    CHECK(cli::parse_size_set("3:5") == std::vector<std::size_t>{3, 4, 5});
    CHECK(cli::parse_size_set("7") == std::vector<std::size_t>{7});
    CHECK_THROWS(cli::parse_size_set("5:3"));
    CHECK_THROWS(cli::parse_size_set("0"));
    CHECK_THROWS(cli::parse_size_set("a"));
    CHECK_THROWS(cli::parse_size_set("1:4:0"));
}

TEST_CASE("analyze exit codes and output") {
    auto r = run({"analyze", data("overlapping_pair.json")});
    CHECK(r.code == cli::kNonIdeal);
    CHECK(Json::parse(r.out)["variance"]["exact"] == "3/8");
    CHECK(r.err.find("non-ideal") != std::string::npos);

    r = run({"analyze", data("triangle.json"), "--format", "csv"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.rfind("agent,alpha_exact,alpha_float\n", 0) == 0);

    CHECK(run({"analyze", data("missing.json")}).code == cli::kError);
    CHECK(run({"analyze"}).code == cli::kError);
    CHECK(run({"bogus"}).code == cli::kError);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("generate, reduce and analyze through files") {
    TempDir dir;
    CHECK(run({"generate", "ring", "-n", "4", "-o", dir / "ring.json"}).code == cli::kOk);
    auto r = run({"analyze", dir / "ring.json", "-o", dir / "ring_report.json"});
    CHECK(r.code == cli::kNonIdeal);
    CHECK(r.out.empty());
    CHECK(Json::parse(slurp(dir / "ring_report.json"))["variance"]["exact"] == "5/16");

    CHECK(run({"--seed", "5", "generate", "random", "--layers", "5,4", "--p", "0.5", "-o", dir / "a.json"}).code == 0);
    CHECK(run({"generate", "random", "--layers", "5,4", "--seed", "5", "-o", dir / "b.json"}).code == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    CHECK(run({"generate", "random", "--layers", "5,4", "--p", "0", "-o", dir / "c.json"}).code == cli::kError);

    CHECK(run({"reduce", data("overlapping_pair.json"), "-o", dir / "reduced.json"}).code == cli::kOk);
    CHECK(load(dir / "reduced.json").network.layer_sizes() == std::vector<std::size_t>{3, 2});
}

TEST_CASE("sweep outputs are reproducible and thread independent") {
    const auto one = run({"sweep", "-L", "6,8", "-L", "5", "--p", "0.3,0.6", "--trials", "40", "--threads", "1"});
    REQUIRE(one.code == 0);
    const auto four = run({"--threads", "4", "sweep", "-L", "6,8", "-L", "5", "--p", "0.3,0.6", "--trials", "40"});
    CHECK(one.out == four.out);
    std::istringstream lines(one.out);
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line))
        ++count;
    CHECK(count == 5);
    CHECK(Json::parse(run({"sweep", "-L", "3", "-L", "3", "--trials", "5", "--format", "json"}).out)["results"]
              .size() == 1);

    CHECK(run({"sweep", "-L", "3", "--trials", "0"}).code == cli::kError);
    CHECK(run({"sweep", "--trials", "5"}).code == cli::kError);
    CHECK(run({"sweep", "-L", "3", "--preset", "three-layer"}).code == cli::kError);

    TempDir dir;
    {
        std::ofstream spec(dir / "spec.json");
        spec << R"({"layer_size_grid": [[4, 4], [4, 6]], "probabilities": [0.5], "trials": 10, "master_seed": 3})";
    }
    auto r = run({"sweep", "--spec", dir / "spec.json"});
    CHECK(r.code == 0);
    CHECK(r.out.find(",10,") != std::string::npos);
    {
        std::ofstream spec(dir / "bad.json");
        spec << R"({"layer_size_grid": [[4, 4]], "probabilities": [0.5], "trails": 10})";
    }
    CHECK(run({"sweep", "--spec", dir / "bad.json"}).code == cli::kError);
}

TEST_CASE("simulate and seeds") {
    auto r = run({"simulate", data("overlapping_pair.json"), "--trials", "20000", "--bias", "1,0,1", "--seed", "9"});
    REQUIRE(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["analytic_variance"]["exact"] == "3/8");
    CHECK(j["analytic_bias"]["exact"] == "1/2");
    CHECK(j["seed"] == 9);
    CHECK(r.out == run({"simulate", data("overlapping_pair.json"), "--trials", "20000", "--bias", "1,0,1", "--seed",
                        "9", "--threads", "3"})
                       .out);
    CHECK(run({"simulate", data("overlapping_pair.json"), "--bias", "1,0"}).code == cli::kError);

    r = run({"--seed", "random", "generate", "ring", "-n", "2", "-o", TempDir() / "x.json"});
    CHECK(r.err.rfind("seed: ", 0) == 0);
    CHECK(run({"--seed", "-3", "sweep", "-L", "3", "--trials", "2"}).code == cli::kError);
}

}
