#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "powernet/cli.hpp"
#include "powernet/netcore.hpp"

namespace fs = std::filesystem;
using powernet::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    fs::path dir = fs::temp_directory_path() / "powernet_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("build-mono writes a net of the expected depth") {
    std::string path = (scratch() / "mono7.json").string();
    auto r = call({"build-mono", "--s", "2", "--n", "7", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    auto net = powernet::deserialize(slurp(path));
    CHECK(net.depth() == 4);

    auto e = call({"eval", "--net", path, "--x", "1.5"});
    REQUIRE(e.code == 0);
    CHECK(std::stod(e.out) == doctest::Approx(17.0859375).epsilon(1e-13));
}

TEST_CASE("stats prints depth, nodes and nonzeros as json") {
    std::string path = (scratch() / "mono5.json").string();
    REQUIRE(call({"build-mono", "--s", "3", "--n", "5", "--out", path}).code == 0);
    auto r = call({"stats", "--net", path});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    auto net = powernet::deserialize(slurp(path));
    auto ns = powernet::stats(net);
    CHECK(j["depth"].get<int>() == ns.depth);
    CHECK(j["nodes"].get<long>() == static_cast<long>(ns.nodes));
    CHECK(j["nonzeros"].get<long>() == static_cast<long>(ns.nonzeros));
    CHECK(j["power"].get<int>() == 3);
}

TEST_CASE("build-poly accepts csv and json coefficients") {
    std::string csv = write("p.csv", "1\n-2\n0.5\n3\n");
    std::string js = write("p.json", "[1, -2, 0.5, 3]");
    for (const char* strat : {"shallow", "horner", "recursive", "optimal", "auto"}) {
        CAPTURE(strat);
        auto a = call({"build-poly", "--coeffs", csv, "--s", "3", "--strategy", strat});
        auto b = call({"build-poly", "--coeffs", js, "--s", "3", "--strategy", strat});
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        auto net = powernet::deserialize(a.out);
        CHECK(powernet::evaluate_scalar(net, 0.7) == doctest::Approx(1 - 1.4 + 0.5 * 0.49 + 3 * 0.343).epsilon(1e-12));
    }
}

TEST_CASE("build-mpoly and batch evaluation") {
    std::string terms = write("t.json", R"({"dim":2,"terms":[{"k":[1,0],"a":2},{"k":[1,1],"a":-1},{"k":[0,2],"a":0.5}]})");
    std::string net = (scratch() / "mp.json").string();
    REQUIRE(call({"build-mpoly", "--terms", terms, "--s", "2", "--complete", "--out", net}).code == 0);
    std::string pts = write("pts.csv", "0.5,1\n-1,2\n\n0,0\n");
    auto r = call({"eval", "--net", net, "--points", pts});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    double v;
    std::vector<double> vals;
    while (in >> v) vals.push_back(v);
    REQUIRE(vals.size() == 3);
    CHECK(vals[0] == doctest::Approx(1 - 0.5 + 0.5).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(-2 + 2 + 2).epsilon(1e-12));
    CHECK(vals[2] == doctest::Approx(0.0));
}

TEST_CASE("cond writes one row per scheme and s") {
    std::string path = (scratch() / "cond.csv").string();
    auto r = call({"cond", "--schemes", "chebyshev,equidistant", "--max-s", "12", "--out", path});
    REQUIRE(r.code == 0);
    std::string csv = slurp(path);
    CHECK(csv.rfind("s,scheme,cond_inf\n", 0) == 0);
    CHECK(count_lines(csv) == 23);
}

TEST_CASE("sweep and approx emit data on stdout") {
    auto s = call({"sweep", "--func", "exp", "--Ns", "2,4,6"});
    REQUIRE(s.code == 0);
    CHECK(s.out.rfind("N,l2,linf\n", 0) == 0);
    CHECK(count_lines(s.out) == 4);
    CHECK(s.err.find("rate:") != std::string::npos);

    auto a = call({"approx", "--func", "sin", "--N", "12", "--s", "2"});
    REQUIRE(a.code == 0);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["degree"].get<int>() == 12);
    CHECK(j["linf_error"].get<double>() < 1e-8);

    auto m = call({"approx", "--func", "exp", "--N", "6", "--d", "2"});
    REQUIRE(m.code == 0);
    CHECK(nlohmann::json::parse(m.out)["linf_error"].get<double>() < 0.05);

    std::string coeffs = write("q.csv", "0\n0\n1\n");
    auto p = call({"approx", "--func", "poly", "--coeffs", coeffs, "--N", "4"});
    REQUIRE(p.code == 0);
    CHECK(nlohmann::json::parse(p.out)["linf_error"].get<double>() < 1e-13);
}

TEST_CASE("validation errors exit 1") {
    CHECK(call({}).code == 1);
    CHECK(call({"frobnicate"}).code == 1);
    CHECK(call({"build-mono", "--s", "2"}).code == 1);
    CHECK(call({"build-mono", "--s", "2", "--n", "3", "--bogus"}).code == 1);
    CHECK(call({"build-mono", "--s", "1", "--n", "3"}).code == 1);
    CHECK(call({"build-mono", "--s", "2", "--n", "-1"}).code == 1);
    CHECK(call({"eval", "--net", (scratch() / "missing.json").string(), "--x", "1"}).code == 1);
    CHECK(call({"build-poly", "--coeffs", write("bad.csv", "1\nabc\n"), "--s", "2"}).code == 1);
    CHECK(call({"build-poly", "--coeffs", write("ok.csv", "1\n2\n"), "--s", "2", "--strategy", "magic"}).code == 1);
    CHECK(call({"cond", "--schemes", "random"}).code == 1);
    CHECK(call({"approx", "--func", "nope", "--N", "4"}).code == 1);
    CHECK(call({"sweep", "--func", "exp", "--Ns", "4,2"}).code == 1);

    std::string path = (scratch() / "mono3.json").string();
    REQUIRE(call({"build-mono", "--s", "2", "--n", "3", "--out", path}).code == 0);
    auto r = call({"eval", "--net", path, "--x", "1,2"});
    CHECK(r.code == 1);
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("help exits 0") {
    auto r = call({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("build-mono") != std::string::npos);
}

TEST_CASE("fixed seed gives identical output") {
    ::setenv("POWERNET_SEED", "11", 1);
    auto a = call({"approx", "--func", "runge", "--N", "8", "--s", "3"});
    auto b = call({"approx", "--func", "runge", "--N", "8", "--s", "3"});
    ::setenv("POWERNET_SEED", "oops", 1);
    auto c = call({"build-mono", "--s", "2", "--n", "3"});
    ::unsetenv("POWERNET_SEED");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(c.code == 1);

    auto m1 = call({"build-mono", "--s", "4", "--n", "37", "--seed", "3"});
    auto m2 = call({"build-mono", "--s", "4", "--n", "37", "--seed", "3"});
    CHECK(m1.out == m2.out);
}
