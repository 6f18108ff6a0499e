#include <doctest.h>

#include <fstream>
#include <sstream>

#include "blockshift/cli.hpp"

using namespace blockshift;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "blockshift");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("density") {
    const Run r = run({"density", "--sparse", "evens", "--L", "15", "--range", "1:1000"});
    CHECK(r.code == 3);
    CHECK(r.out.starts_with("max=8 quotient=0.5333 violates 1/(3·1)"));
    const Run ok = run({"density", "--sparse", "squares", "--L", "15", "--range", "1:1000000"});
    CHECK(ok.code == 0);
    CHECK(ok.out.starts_with("max=3 quotient=0.2000 satisfies"));
}

TEST_CASE("schedule table") {
    const Run r = run({"schedule", "--alphabet", "01", "--sparse", "squares", "--depth", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\n1\t15\t30826\t") != std::string::npos);
    CHECK(r.out.find("\n2\t1387215\tln in [") != std::string::npos);
    CHECK(run({"schedule", "--sparse", "evens", "--depth", "1"}).code == 3);
    CHECK(run({"schedule", "--depth", "3"}).code == 3);
}

TEST_CASE("usage errors") {
    const Run r = run({"density", "--bogus"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"schedule", "--depth", "1", "--alphabet", "0"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("realize, verify, complexity") {
    const Run made = run({"realize", "--depth", "1", "--u", "mu-indicator", "--out", "cli_depth1.bsw"});
    REQUIRE(made.code == 0);
    const Run ok = run({"verify", "cli_depth1.bsw"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("realization\tpass") != std::string::npos);

    const Run comp = run({"complexity", "cli_depth1.bsw", "--nmax", "3", "--format", "csv"});
    CHECK(comp.code == 0);
    CHECK(comp.out.starts_with("kind,length,distinct\nsubword,1,2\n"));

    std::string text = slurp("cli_depth1.bsw");
    const auto at = text.find("checksum=") + 9;
    text[at] = text[at] == '0' ? '1' : '0';
    std::ofstream("cli_corrupt.bsw", std::ios::binary) << text;
    const Run bad = run({"verify", "cli_corrupt.bsw"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("checksum mismatch") != std::string::npos);

    std::ofstream("cli_target.txt") << "# u\n1 0\n";
    CHECK(run({"realize", "--depth", "1", "--u", "file:cli_target.txt", "--out", "cli_file.bsw"}).code == 0);
    CHECK(run({"verify", "cli_file.bsw"}).code == 0);
    std::ofstream("cli_target.txt") << "1\n";
    CHECK(run({"realize", "--depth", "1", "--u", "file:cli_target.txt", "--out", "cli_file.bsw"}).code == 1);
}

TEST_CASE("demo output is deterministic") {
    const Run a = run({"demo-sarnak", "--profile", "faithful", "--depth", "1", "--N", "2", "--format", "csv"});
    CHECK(a.code == 0);
    CHECK(a.out == "N,numerator,average\n1,1,1.000000000\n2,1,0.500000000\n");
    const Run j1 = run({"demo-sarnak", "--depth", "1", "--N", "2"});
    const Run j2 = run({"demo-sarnak", "--depth", "1", "--N", "2"});
    CHECK(j1.code == 0);
    CHECK(j1.out == j2.out);
    CHECK(j1.out.find("\"exact_identity\": true") != std::string::npos);
}
