#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = FPSUM_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/fpsum_cli_test_out.txt";
    std::string cmd = kCli + " " + args + " > " + out_path + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const char* kPopA = R"({"elements":[{"score":1},{"score":2},{"score":3},{"score":6}],"n":2})";
const char* kPopB = R"({"elements":[{"support":[-1,1],"probs":[0.5,0.5]},{"score":0}],"n":1})";

}  // namespace

TEST_CASE("moments: sigma2 lands in the report") {
    std::string pop = write_temp("cli_pop_a.json", kPopA);
    RunResult r = run_cli("--pop " + pop + " --cmd moments");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"sigma2\": 1.75") != std::string::npos);
    CHECK(r.output.find("\"version\"") != std::string::npos);
    CHECK(r.output.find("\"config_hash\"") != std::string::npos);
}

TEST_CASE("malformed JSON exits 2, naming the problem") {
    std::string pop = write_temp("cli_bad.json", "{\"elements\": [");
    RunResult r = run_cli("--pop " + pop + " --cmd moments");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("JSON") != std::string::npos);
}

TEST_CASE("n = N with the moments command exits 3") {
    std::string pop = write_temp(
        "cli_full.json", R"({"elements":[{"score":1},{"score":2},{"score":3},{"score":6}],"n":4})");
    RunResult r = run_cli("--pop " + pop + " --cmd moments");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("n < N") != std::string::npos);
}

TEST_CASE("approx: order 1 column equals Phi, bad grid exits 2") {
    std::string pop = write_temp("cli_pop_a2.json", kPopA);
    RunResult r = run_cli("--pop " + pop + " --cmd approx --order 1 --grid 0:0:1 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0,0.5\n") != std::string::npos);  // Phi(0) = 1/2

    RunResult bad = run_cli("--pop " + pop + " --cmd approx --grid 1:0:0.5");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("compare: POP-B report carries Delta_1 = 0.25 and is deterministic") {
    std::string pop = write_temp("cli_pop_b.json", kPopB);
    RunResult r1 = run_cli("--pop " + pop + " --cmd compare --seed 1");
    RunResult r2 = run_cli("--pop " + pop + " --cmd compare --seed 99");
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("0.25") != std::string::npos);
    // Monte Carlo is not part of compare, so the seed must not leak anywhere.
    CHECK(r1.output == r2.output);
}

TEST_CASE("exact: pmf rows with decimal-string values") {
    std::string pop = write_temp("cli_pop_b2.json", kPopB);
    RunResult r = run_cli("--pop " + pop + " --cmd exact --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("value,probability") != std::string::npos);
    CHECK(r.output.find("-1,0.25") != std::string::npos);
    CHECK(r.output.find("0,0.5") != std::string::npos);
}

TEST_CASE("exact: oversized DP exits 4 with the size estimate") {
    // N = 200 on a fine decimal lattice (varying sixth decimal): the common
    // lattice step drops to 1e-6 and the span outgrows the budget.
    std::ostringstream pop;
    pop << "{\"elements\":[";
    for (int i = 0; i < 200; ++i) {
        if (i) pop << ",";
        pop << "{\"score\":\"" << i << ".00000" << (i % 7) << "\"}";
    }
    pop << "],\"n\":100}";
    std::string path = write_temp("cli_dense.json", pop.str());
    RunResult r = run_cli("--pop " + path + " --cmd exact");
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("budget") != std::string::npos);
}

TEST_CASE("mc: deterministic given the seed, band reported") {
    std::string pop = write_temp("cli_pop_a3.json", kPopA);
    RunResult r1 = run_cli("--pop " + pop + " --cmd mc --mc-count 2000 --seed 5");
    RunResult r2 = run_cli("--pop " + pop + " --cmd mc --mc-count 2000 --seed 5");
    RunResult r3 = run_cli("--pop " + pop + " --cmd mc --mc-count 2000 --seed 6");
    CHECK(r1.exit_code == 0);
    CHECK(r1.output == r2.output);
    CHECK(r1.output != r3.output);
    CHECK(r1.output.find("dkw_band_99") != std::string::npos);
}

TEST_CASE("tail: table with warnings column") {
    std::string pop = write_temp("cli_pop_a4.json", kPopA);
    RunResult r = run_cli("--pop " + pop + " --cmd tail --grid 0:2:0.5 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("range_warning") != std::string::npos);
    CHECK(r.output.find("\n0,1,1,") != std::string::npos);  // ratio 1 at x = 0
}

TEST_CASE("version flag") {
    RunResult r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("fpsum") != std::string::npos);
}
