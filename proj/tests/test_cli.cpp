// Command-line front end: output formats, exit codes, and file handling.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modfold/cli.hpp"

namespace {

struct CliRun {
    int code;
    std::string out;
};

CliRun run_cli(std::vector<std::string> args) {
    std::ostringstream captured;
    std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
    int code = modfold::cli::run(std::move(args));
    std::cout.rdbuf(old);
    return {code, captured.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("check: human-readable verdicts and exit codes") {
    CliRun ok = run_cli({"check", "--n", "7", "--v", "0,1"});
    REQUIRE(ok.code == 0);
    REQUIRE(ok.out == "identifiable\n");

    CliRun bad = run_cli({"check", "--n", "7", "--v", "1"});
    REQUIRE(bad.code == 0);  // the question was answered; 'no' is not an error
    REQUIRE(bad.out == "not identifiable; class {0} unhit\n");

    CliRun tail = run_cli({"check", "--n", "7", "--v", "1", "--tail"});
    REQUIRE(tail.code == 0);
    REQUIRE(tail.out == "identifiable\n");

    CliRun pbl = run_cli({"check", "--n", "12", "--pbl", "2"});
    REQUIRE(pbl.code == 0);
    REQUIRE(pbl.out.rfind("not identifiable", 0) == 0);
}

TEST_CASE("check: JSON output parses and is stable across runs") {
    CliRun a = run_cli({"check", "--n", "16", "--v", "0,1,2,3,4,6,8,12", "--json"});
    REQUIRE(a.code == 0);
    nlohmann::json j = nlohmann::json::parse(a.out);
    REQUIRE(j["identifiable"] == true);
    REQUIRE(j["condition_used"] == "thm1_full");

    CliRun b = run_cli({"check", "--n", "16", "--v", "0,1,2,3,4,6,8,12", "--json"});
    REQUIRE(a.out == b.out);

    CliRun miss = run_cli({"check", "--n", "16", "--v", "0", "--json"});
    nlohmann::json jm = nlohmann::json::parse(miss.out);
    REQUIRE(jm["identifiable"] == false);
    REQUIRE_FALSE(jm["failing_classes"].empty());
}

TEST_CASE("partition: JSON lists the Gaussian classes") {
    CliRun r = run_cli({"partition", "--n", "16", "--json"});
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["n"] == 16);
    REQUIRE(j["classes"].size() == 8);

    CliRun rat = run_cli({"partition", "--n", "16", "--field", "rational"});
    REQUIRE(rat.code == 0);
    REQUIRE(rat.out.find("d=16") != std::string::npos);
}

TEST_CASE("recover: round trip through a measurement file") {
    // Folded measurements of a small identifiable model, written as JSON.
    using namespace modfold;
    int n = 7;
    IndexSet v{0, 1};
    Rng rng{21u};
    ComplexVector s = gen_signal(n, v, rng);
    SensingConfig scfg;
    scfg.n = n;
    scfg.zero_set = v;
    ComplexVector z = forward(s, scfg);
    nlohmann::json jz = nlohmann::json::array();
    for (Complex c : z) jz.push_back({c.real(), c.imag()});
    std::string path = write_temp("modfold_cli_z.json", jz.dump());

    CliRun human = run_cli({"recover", "--z", path, "--v", "0,1"});
    REQUIRE(human.code == 0);
    REQUIRE(human.out.find("status: unique_in_box") != std::string::npos);
    REQUIRE(human.out.find("solutions: 1") != std::string::npos);

    CliRun json = run_cli({"recover", "--z", path, "--v", "0,1", "--json"});
    REQUIRE(json.code == 0);
    nlohmann::json jr = nlohmann::json::parse(json.out);
    REQUIRE(jr["status"] == "unique_in_box");
    REQUIRE(jr["eps_solutions"].size() == 1);
    REQUIRE(jr["s_hat"].size() == static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        REQUIRE(std::abs(jr["s_hat"][k][0].get<double>() - s[k].real()) <= 1e-6);
        REQUIRE(std::abs(jr["s_hat"][k][1].get<double>() - s[k].imag()) <= 1e-6);
    }
    std::remove(path.c_str());
}

TEST_CASE("recover: infeasible measurements exit 1") {
    std::string path = write_temp("modfold_cli_bad.json",
                                  "[[0.23,-0.41],[-0.17,0.31],[0.05,-0.29],[0.44,0.11]]");
    CliRun r = run_cli({"recover", "--z", path, "--v", "0,1,2"});
    REQUIRE(r.code == 1);
    REQUIRE(r.out.find("status: infeasible") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("recover: PBL samples as plain reals") {
    std::string path = write_temp("modfold_cli_pbl.json",
                                  "[0.1,0.2,0.1,-0.1,-0.2,-0.1,0.1,0.2,0.1,-0.1,-0.2,-0.1]");
    CliRun r = run_cli({"recover", "--z", path, "--pbl", "2", "--json"});
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE((j["status"] == "unique_in_box" || j["status"] == "multiple" ||
             j["status"] == "infeasible"));
    std::remove(path.c_str());
}

TEST_CASE("table1 prints the exact fractions") {
    CliRun r = run_cli({"table1"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("15/32") != std::string::npos);
    REQUIRE(r.out.find("2025/65536") != std::string::npos);

    CliRun j = run_cli({"table1", "--json"});
    nlohmann::json rows = nlohmann::json::parse(j.out);
    REQUIRE(rows.size() == 8);
    REQUIRE(rows[0]["n"] == 5);
    REQUIRE(rows[0]["fraction"] == "15/32");
}

TEST_CASE("montecarlo: small run to stdout CSV") {
    CliRun r = run_cli({"montecarlo", "--n-list", "5,7", "--trials", "10", "--scenario", "1",
                        "--csv", "-"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.rfind("# modfold-mc-v1", 0) == 0);
    REQUIRE(r.out.find("\n5,") != std::string::npos);
}

TEST_CASE("cyclo: coefficient dump") {
    CliRun h = run_cli({"cyclo", "--d", "6"});
    REQUIRE(h.code == 0);
    REQUIRE(h.out == "Phi_6 coefficients (ascending): 1 -1 1\n");

    CliRun j = run_cli({"cyclo", "--d", "105", "--json"});
    REQUIRE(j.code == 0);
    nlohmann::json arr = nlohmann::json::parse(j.out);
    REQUIRE(arr.size() == 49);
    REQUIRE(arr[7] == "-2");
}

TEST_CASE("usage errors exit 2, domain errors exit 1") {
    REQUIRE(run_cli({"check", "--n", "7", "--frobnicate"}).code == 2);
    REQUIRE(run_cli({"check", "--v", "0,1"}).code == 2);       // missing required --n
    REQUIRE(run_cli({"check", "--n", "7", "--v", "0;1"}).code == 2);
    REQUIRE(run_cli({"nonsense"}).code == 2);
    REQUIRE(run_cli({"check", "--n", "7", "--v", "9"}).code == 1);  // V out of range
    REQUIRE(run_cli({"recover", "--z", "/nonexistent.json", "--v", "0"}).code == 2);
}
