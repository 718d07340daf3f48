#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(WALKCAST_CLI_PATH) + " " + args;
    cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        res.output.append(buf.data(), got);
    }
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path tmp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("walkcast_cli_test_" + name);
}

}  // namespace

TEST_CASE("oracle prints the exact expectation") {
    CliResult r = run_cli("oracle --graph path --n 2 --k 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("1/2") != std::string::npos);

    CliResult c = run_cli("oracle --graph cycle --n 3 --k 2");
    CHECK(c.exit_code == 0);
    CHECK(c.output.find("4/3") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("simulate --no-such-flag").exit_code == 2);
    CHECK(run_cli("simulate --n 10 --k 1 --trials 1").exit_code == 2);     // k < 2
    CHECK(run_cli("simulate --n 10 --trials 1").exit_code == 2);           // no k rule
    CHECK(run_cli("simulate --n 10 --k 3 --k-rule const:3").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("oracle --graph path --n 50 --k 2").exit_code == 2);     // oracle too large
    CHECK(run_cli("simulate --n 10 --k 4 --format xml").exit_code == 2);
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    CliResult r = run_cli("simulate --help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("--cap") != std::string::npos);
}

TEST_CASE("repeated seeds give byte-identical files") {
    auto f1 = tmp_file("rep1.jsonl");
    auto f2 = tmp_file("rep2.jsonl");
    std::string base =
        "simulate --graph cycle --n 24 --k 4 --trials 50 --seed 99 --format jsonl --out ";
    CHECK(run_cli(base + f1.string()).exit_code == 0);
    CHECK(run_cli(base + f2.string() + " --workers 3").exit_code == 0);
    std::string a = slurp(f1), b = slurp(f2);
    CHECK(!a.empty());
    CHECK(a == b);
    std::filesystem::remove(f1);
    std::filesystem::remove(f2);
}

TEST_CASE("jsonl output re-parses with the expected fields") {
    auto f = tmp_file("parse.jsonl");
    CHECK(run_cli("simulate --graph path --n 16 --k 3 --trials 20 --seed 5 --format jsonl --out " +
                  f.string())
              .exit_code == 0);
    std::ifstream in(f);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        nlohmann::json rec = nlohmann::json::parse(line);
        CHECK(rec.at("schema").get<int>() == 1);
        CHECK(rec.at("graph").get<std::string>() == "path");
        CHECK(rec.at("n").get<int>() == 16);
        CHECK(rec.at("k").get<int>() == 3);
        CHECK(rec.at("trial").get<int>() == lines);
        CHECK(rec.at("xi").get<long long>() >= 0);
        CHECK(rec.contains("capped"));
        CHECK(rec.at("phase_entry").is_object());
        ++lines;
    }
    CHECK(lines == 20);
    std::filesystem::remove(f);
}

TEST_CASE("csv summary has the documented header") {
    CliResult r = run_cli("simulate --graph cycle --n 20 --k 4 --trials 30 --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("schema,graph,n,k,trials,mean,median,q05,q25,q75,q95,se,capped_count",
                         0) == 0);
    // exactly one data row
    int newlines = 0;
    for (char ch : r.output) newlines += ch == '\n';
    CHECK(newlines == 2);
    CHECK(r.output.find("1,cycle,20,4,30,") != std::string::npos);
}

TEST_CASE("sweep over several n with a k rule") {
    CliResult r = run_cli(
        "sweep --graph cycle --n 16,24,32 --k-rule power:0.5 --trials 8 --seed 3 --format csv",
        true);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("1,cycle,16,4,8,") != std::string::npos);
    CHECK(r.output.find("1,cycle,24,5,8,") != std::string::npos);
    CHECK(r.output.find("1,cycle,32,6,8,") != std::string::npos);
    CHECK(r.output.find("fitted log-log exponent") != std::string::npos);
}

TEST_CASE("analytic checks run clean") {
    CHECK(run_cli("analytic --check reversibility --graph cycle --n 12 --t 32").exit_code == 0);
    CHECK(run_cli("analytic --check reversibility --graph path --n 16 --t 64").exit_code == 0);
    CHECK(run_cli("analytic --check zwalk-bounds --t 64").exit_code == 0);
    CHECK(run_cli("analytic --check reflection --t 64").exit_code == 0);
    CHECK(run_cli("analytic --check bogus").exit_code == 2);
}

TEST_CASE("coupled runs report dominance") {
    auto f = tmp_file("couple.jsonl");
    CliResult r = run_cli("couple --n 8 --k 3 --trials 40 --seed 11 --out " + f.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(f);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        nlohmann::json rec = nlohmann::json::parse(line);
        CHECK(rec.at("n").get<int>() == 8);
        CHECK(rec.contains("xi_cycle"));
        CHECK(rec.contains("xi_path"));
        CHECK(rec.contains("comparable"));
        if (rec.at("comparable").get<bool>()) {
            CHECK(rec.at("xi_path").get<long long>() <= rec.at("xi_cycle").get<long long>());
            CHECK(rec.at("containment_ok").get<bool>());
        }
        ++lines;
    }
    CHECK(lines == 40);
    std::filesystem::remove(f);
}

TEST_CASE("regime classifier prints a band") {
    CliResult r = run_cli("regime --n 1000 --k 40");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("regime") != std::string::npos);
    CHECK(r.output.find("envelope") != std::string::npos);
}
