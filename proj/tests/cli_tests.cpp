// Integration tests that spawn the installed CLI binary (path injected by the
// build as CLUSTERCERT_CLI_PATH) and assert on exit codes and outputs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::ordered_json;

namespace {

const std::filesystem::path kTmp =
    std::filesystem::temp_directory_path() / "clustercert_cli_tests";

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& stderr_file = "") {
    std::string cmd = std::string(CLUSTERCERT_CLI_PATH) + " " + args;
    cmd += stderr_file.empty() ? " 2>/dev/null" : " 2>" + stderr_file;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp(const char* name) { return (kTmp / name).string(); }

struct Setup {
    Setup() { std::filesystem::create_directories(kTmp); }
} setup;

}  // namespace

TEST_CASE("sample runs are byte-identical") {
    const std::string spec =
        R"('{"family":"random-trig","params":{"seed":7,"terms":4,"amplitude":1}}')";
    const RunResult a = run_cli("sample --function " + spec +
                                " --grid 2,16,0,0,1 --output " + tmp("a.json"));
    const RunResult b = run_cli("sample --function " + spec +
                                " --grid 2,16,0,0,1 --output " + tmp("b.json"));
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    const std::string file_a = slurp(tmp("a.json"));
    CHECK(!file_a.empty());
    CHECK(file_a == slurp(tmp("b.json")));
    // Summaries match except for the output path they echo back.
    CHECK(a.out.substr(a.out.find("\"family\"")) ==
          b.out.substr(b.out.find("\"family\"")));

    // --seed overrides the family seed.
    const RunResult c = run_cli("sample --function " + spec +
                                " --seed 8 --grid 2,16,0,0,1 --output " +
                                tmp("c.json"));
    CHECK(c.exit_code == 0);
    CHECK(slurp(tmp("c.json")) != file_a);
}

TEST_CASE("invalid inputs exit with code 2") {
    CHECK(run_cli("sample --function '{\"family\":\"spline\"}' "
                  "--grid 2,4,0,0,1 --output " + tmp("x.json")).exit_code == 2);
    CHECK(run_cli("seminorm --input /nonexistent/u.json").exit_code == 2);
    CHECK(run_cli("seminorm").exit_code == 2);  // no input source at all
    CHECK(run_cli("bound --alpha 0.5 --gamma 1 --lambda 1").exit_code == 2);
    CHECK(run_cli("search --c 1 --alpha 0.5").exit_code == 2);  // no gamma
    CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("seminorm reports the oracle gap") {
    REQUIRE(run_cli("sample --function "
                    R"('{"family":"bump","params":{"center":[0.1,0.0],"width":0.3,"height":1}}')"
                    " --grid 2,8,0,0,1 --output " + tmp("bump.json"))
                .exit_code == 0);
    const RunResult r =
        run_cli("seminorm --input " + tmp("bump.json") + " --oracle");
    REQUIRE(r.exit_code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    CHECK(j["oracle_relative_gap"].get<double>() <= 1e-12);
    CHECK(j["gagliardo"].get<double>() > 0.0);
    CHECK(j.contains("grad_lp"));
    CHECK(j.contains("bv"));
}

TEST_CASE("seminorm computes only the requested subset") {
    const RunResult r = run_cli(
        "seminorm --function '{\"family\":\"constant\",\"params\":{\"value\":1}}' "
        "--grid 2,4,0,0,1 --which bv");
    REQUIRE(r.exit_code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    CHECK(j["bv"] == 0.0);
    CHECK(!j.contains("gagliardo"));
    CHECK(!j.contains("grad_lp"));
}

TEST_CASE("search exit codes distinguish found from exhausted") {
    const std::string grid = " --grid 2,12,0,0,1 ";
    const RunResult found = run_cli(
        "search --function '{\"family\":\"constant\",\"params\":{\"value\":2}}'" +
        grid + "--c 1 --alpha 0.5 --gamma 1 --output " + tmp("cert.json"));
    CHECK(found.exit_code == 0);
    const ordered_json cert = ordered_json::parse(slurp(tmp("cert.json")));
    CHECK(cert["found"] == true);
    CHECK(cert["k"] == 2);
    CHECK(cert["fraction"] == 1.0);

    const RunResult lost = run_cli(
        "search --function '{\"family\":\"constant\",\"params\":{\"value\":0}}'" +
        grid + "--c 1 --alpha 0.5 --gamma 1");
    CHECK(lost.exit_code == 3);
    const ordered_json diag = ordered_json::parse(lost.out);
    CHECK(diag["found"] == false);
    CHECK(diag["hypothesis_a"]["passed"] == false);
}

TEST_CASE("search writes per-depth partition data") {
    const RunResult r = run_cli(
        "search --function '{\"family\":\"constant\",\"params\":{\"value\":2}}' "
        "--grid 2,4,0,0,1 --c 1 --alpha 0.5 --gamma 1 --plot-data " +
        tmp("part.csv"));
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(tmp("part.csv"));
    CHECK(csv.rfind("k,index,count_c,count_lambda_c,class\n", 0) == 0);
    CHECK(csv.find("2,0 0,4,4,plus") != std::string::npos);
}

TEST_CASE("corollary route populates the reduction object") {
    REQUIRE(run_cli("sample --function "
                    R"('{"family":"indicator-halfspace","params":{"axis":0,"threshold":0,"low":0,"high":2}}')"
                    " --grid 2,12,0,0,1 --output " + tmp("half.json"))
                .exit_code == 0);
    const RunResult r = run_cli("search --input " + tmp("half.json") +
                                " --c 1 --alpha 0.4 --corollary bv "
                                "--gamma-prime 1");
    REQUIRE(r.exit_code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    CHECK(j["reduction"]["kind"] == "bv");
    CHECK(j["reduction"]["gamma_prime"] == 1.0);
    CHECK(j["reduction"]["C"].get<double>() > 0.0);
    CHECK(j["found"] == true);

    // --gamma and --corollary are mutually exclusive.
    CHECK(run_cli("search --input " + tmp("half.json") +
                  " --c 1 --alpha 0.4 --gamma 1 --corollary bv "
                  "--gamma-prime 1").exit_code == 2);
}

TEST_CASE("bound reports the worked query") {
    const RunResult r = run_cli(
        "bound --alpha 0.5 --gamma 1 --delta 0.5 --lambda 0.5 --dim 2 "
        "--s 0.5 --p 2");
    REQUIRE(r.exit_code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    CHECK(j["k_star"] == 4345);
    CHECK(j["B"].get<double>() ==
          doctest::Approx(4344.4640636101485).epsilon(1e-12));
    CHECK(j["eta_lower_bound"].get<double>() ==
          doctest::Approx(1.0 / 4345.0).epsilon(1e-15));
    CHECK(j["factors"]["four_pow_p"] == 16.0);

    // Clamped case: a tiny budget pins the bound at the minimum depth 2.
    const RunResult clamped =
        run_cli("bound --alpha 0.9 --gamma 0.001 --dim 2");
    REQUIRE(clamped.exit_code == 0);
    CHECK(ordered_json::parse(clamped.out)["k_star"] == 2);
}

TEST_CASE("verify sweeps pass on the shipped corpus") {
    const RunResult r = run_cli(
        "verify --sweep scaling --dim 2 --grid 2,12,0.2,0.2,1 --family bump");
    REQUIRE(r.exit_code == 0);
    const ordered_json j = ordered_json::parse(r.out);
    CHECK(j["failures"] == 0);
    CHECK(j["total"].get<int>() > 0);

    CHECK(run_cli("verify --sweep scaling --family no-such-function")
              .exit_code == 2);
}

TEST_CASE("dimension one gets a diagnostic note") {
    const std::string err_file = tmp("warn.txt");
    const RunResult r = run_cli(
        "seminorm --function '{\"family\":\"constant\",\"params\":{\"value\":1}}' "
        "--grid 1,8,0,1 --which bv",
        err_file);
    CHECK(r.exit_code == 0);
    CHECK(slurp(err_file).find("dimension") != std::string::npos);
}
