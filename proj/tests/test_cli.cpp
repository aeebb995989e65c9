// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks that spawn the real binary. The path comes in via
// the VECFI_BIN compile definition.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout and stderr combined
};

fs::path scratch_root() {
    return fs::temp_directory_path() / "vecfi_cli_tests";
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = scratch_root() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::create_directories(scratch_root());
    const fs::path capture =
        scratch_root() / ("capture_" + std::to_string(counter++) + ".txt");
    const std::string cmd = std::string(VECFI_BIN) + ' ' + args + " > " +
                            capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    r.output = slurp(capture);
    fs::remove(capture);
    return r;
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file())
            out[fs::relative(entry.path(), dir).string()] =
                slurp(entry.path());
    return out;
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("codec decodes patterns") {
    const RunResult one = run_cli("codec 0x3c fp8");
    CHECK(one.exit_code == 0);
    CHECK(one.output == "1.0 normal s=0 e=01111 m=00\n");

    const RunResult sub = run_cli("codec 0x01 fp8");
    CHECK(sub.exit_code == 0);
    CHECK(sub.output == "1.52587890625e-05 subnormal s=0 e=00000 m=01\n");

    const RunResult inf = run_cli("codec 0x7c00 fp16");
    CHECK(inf.exit_code == 0);
    CHECK(inf.output == "+Inf inf s=0 e=11111 m=0000000000\n");

    const RunResult ninf = run_cli("codec 0xfc00 fp16");
    CHECK(ninf.output == "-Inf inf s=1 e=11111 m=0000000000\n");

    const RunResult nan = run_cli("codec 0x7e fp8");
    CHECK(nan.output == "NaN nan s=0 e=11111 m=10\n");

    const RunResult negzero = run_cli("codec 0x8000 bp16");
    CHECK(negzero.exit_code == 0);
    CHECK(negzero.output == "-0.0 zero s=1 e=00000000 m=0000000\n");

    CHECK(run_cli("codec 0xzz fp8").exit_code == 2);
    CHECK(run_cli("codec 0x100 fp8").exit_code == 2);
    CHECK(run_cli("codec 0x3c fp64").exit_code == 2);
    CHECK(run_cli("codec").exit_code == 2);
}

TEST_CASE("bare invocation fails, help succeeds") {
    CHECK(run_cli("").exit_code == 2);
    const RunResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("codec") != std::string::npos);
    CHECK(help.output.find("trial") != std::string::npos);
}

TEST_CASE("single trial reports a json record") {
    const RunResult clean =
        run_cli("trial --precision fp16 --dims 4x4x4 --lanes 8");
    CHECK(clean.exit_code == 0);
    const auto doc = nlohmann::json::parse(clean.output);
    CHECK(doc["fault"].is_null());
    CHECK(doc["class"] == "masked");
    CHECK(doc["sdc"] == false);
    CHECK(doc["first_divergence_cycle"].is_null());
    CHECK(doc["K"] == 0);
    CHECK(doc["rmse"].is_null());

    const RunResult crash = run_cli(
        "trial --dims 4x4x4 --site vlsu.valid --fault-kind set --bit 0 "
        "--cycle 0");
    CHECK(crash.exit_code == 0);
    const auto cdoc = nlohmann::json::parse(crash.output);
    CHECK(cdoc["class"] == "fs");
    CHECK(cdoc["fault"]["site_id"] == "vlsu.valid");
    CHECK(cdoc["fault"]["kind"] == "set");
    CHECK(cdoc["K"].is_null());
    CHECK(cdoc["first_divergence_cycle"] == 0);

    const RunResult corrupt = run_cli(
        "trial --dims 4x4x4 --site tcdm.state --fault-kind seu --bit 223 "
        "--cycle 0");
    CHECK(corrupt.exit_code == 0);
    const auto fdoc = nlohmann::json::parse(corrupt.output);
    CHECK(fdoc["class"] == "fd");
    CHECK(fdoc["sdc"] == true);
    CHECK(fdoc["K"].get<int>() >= 1);
    CHECK(fdoc["rmse"].is_number());
}

TEST_CASE("trial strobe mode changes what counts as corruption") {
    // A sequence-counter jump back to a group boundary replays cleanly:
    // visible on the strobes, invisible in the output.
    const std::string base =
        "trial --dims 4x4x4 --site controller.seq --fault-kind seu --bit 2 "
        "--cycle 4";
    const auto full = nlohmann::json::parse(
        run_cli(base + " --strobes full").output);
    CHECK(full["class"] == "fd");
    CHECK(full["sdc"] == false);
    const auto output_only = nlohmann::json::parse(
        run_cli(base + " --strobes output").output);
    CHECK(output_only["class"] == "masked");
    CHECK(run_cli(base + " --strobes sideways").exit_code == 2);
}

TEST_CASE("trial rejects bad fault specs") {
    CHECK(run_cli("trial --site nowhere.state --fault-kind set --bit 0 "
                  "--cycle 0")
              .exit_code == 2);
    CHECK(run_cli("trial --dims 4x4x4 --site vlsu.data --fault-kind seu "
                  "--bit 0 --cycle 0")
              .exit_code == 2);
    CHECK(run_cli("trial --dims 4x4x4 --site tcdm.state --fault-kind set "
                  "--bit 0 --cycle 0")
              .exit_code == 2);
    CHECK(run_cli("trial --dims 4x4x4 --site controller.seq --fault-kind "
                  "seu --bit 99 --cycle 0")
              .exit_code == 2);
    CHECK(run_cli("trial --precision fp4").exit_code == 2);
    CHECK(run_cli("trial --dims 4x4").exit_code == 2);
}

TEST_CASE("trial dumps golden matrices on request") {
    const fs::path dir = fresh_dir("dump");
    const RunResult r = run_cli(
        "trial --dims 3x3x3 --precision fp8 --dump-golden --out-dir " +
        dir.string());
    CHECK(r.exit_code == 0);
    for (const char* name : {"golden_a.csv", "golden_b.csv", "golden_c.csv"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(dir / name));
        const std::string text = slurp(dir / name);
        CHECK(line_count(text) == 3);
        CHECK(text.find("0x") == 0);
    }
}

TEST_CASE("operand-flip suite writes a reproducible report tree") {
    const fs::path d1 = fresh_dir("sdc1");
    const fs::path d2 = fresh_dir("sdc2");
    const std::string args =
        "sdc --dims 4x4x4 --trials 5 --seed 0x5 --out-dir ";
    const RunResult r1 = run_cli(args + d1.string());
    CHECK(r1.exit_code == 0);
    const RunResult r2 = run_cli(args + d2.string());
    CHECK(r2.exit_code == 0);

    const auto c1 = dir_contents(d1);
    CHECK(c1 == dir_contents(d2));

    // 18 record files, results in two formats, scatter pair, manifest.
    CHECK(c1.size() == 18 + 2 + 2 + 1);
    CHECK(c1.count("sdc_results.csv") == 1);
    CHECK(c1.count("sdc_results.json") == 1);
    CHECK(c1.count("manifest.json") == 1);
    CHECK(c1.count("sdc_scatter_suite_5.csv") == 1);
    CHECK(c1.count("sdc_scatter_suite_5.svg") == 1);
    CHECK(c1.count("records_fp32_matmul_sign.csv") == 1);
    CHECK(c1.count("records_fp8_widening_matmul_mantissa.csv") == 1);

    CHECK(line_count(c1.at("sdc_results.csv")) == 19);
    CHECK(line_count(c1.at("records_fp32_matmul_sign.csv")) == 6);
    const auto manifest =
        nlohmann::json::parse(c1.at("manifest.json"));
    CHECK(manifest["kind"] == "sdc");
    CHECK(manifest["groups"].size() == 18);
}

TEST_CASE("worker count never changes campaign output") {
    const fs::path d1 = fresh_dir("workers1");
    const fs::path d3 = fresh_dir("workers3");
    const std::string base = "sdc --dims 6x6x6 --precision fp16 --trials 40 "
                             "--seed 0xabc ";
    CHECK(run_cli(base + "--workers 1 --out-dir " + d1.string()).exit_code ==
          0);
    CHECK(run_cli(base + "--workers 3 --out-dir " + d3.string()).exit_code ==
          0);
    CHECK(dir_contents(d1) == dir_contents(d3));
}

TEST_CASE("suite filters narrow the campaign list") {
    const fs::path dir = fresh_dir("filtered");
    const RunResult r = run_cli(
        "sdc --dims 4x4x4 --precision fp8 --kernel matmul --field exponent "
        "--trials 4 --seed 9 --out-dir " + dir.string());
    CHECK(r.exit_code == 0);
    const auto files = dir_contents(dir);
    CHECK(files.count("records_fp8_matmul_exponent.csv") == 1);
    CHECK(files.count("sdc_scatter_fp8_matmul_9.csv") == 1);
    CHECK(line_count(files.at("sdc_results.csv")) == 2);
    CHECK(files.at("sdc_results.csv").find("fp8,matmul,exponent,set,4,") !=
          std::string::npos);

    CHECK(run_cli("sdc --precision fp32 --kernel widening_matmul --out-dir " +
                  fresh_dir("impossible").string())
              .exit_code == 2);
}

TEST_CASE("module campaigns write their own tree") {
    const fs::path dir = fresh_dir("modules");
    const RunResult r = run_cli(
        "modules --fault-kind seu --dims 4x4x4 --trials 30 --seed 3 "
        "--out-dir " + dir.string());
    CHECK(r.exit_code == 0);
    const auto files = dir_contents(dir);
    CHECK(files.count("records_fp32_matmul_seu.csv") == 1);
    CHECK(files.count("module_results.csv") == 1);
    CHECK(files.count("module_results.json") == 1);
    CHECK(files.count("module_manifest.json") == 1);
    CHECK(line_count(files.at("records_fp32_matmul_seu.csv")) == 31);
    // Rows are grouped by module; every row carries kind seu.
    const auto doc = nlohmann::json::parse(files.at("module_results.json"));
    for (const auto& row : doc) {
        CHECK(row["fault_kind"] == "seu");
        CHECK(row["kernel"] == "matmul");
    }

    CHECK(run_cli("modules --dims 4x4x4 --trials 5").exit_code == 2);
    CHECK(run_cli("modules --fault-kind seu --modules vsldu --out-dir " +
                  fresh_dir("unsupported").string())
              .exit_code == 2);
    CHECK(run_cli("modules --fault-kind seu --modules dma --out-dir " +
                  fresh_dir("unknown").string())
              .exit_code == 2);
}

TEST_CASE("module suite crosses workloads with both fault kinds") {
    const fs::path dir = fresh_dir("module_suite");
    const RunResult r = run_cli(
        "modules --suite --dims 4x4x4 --trials 24 --seed 8 --out-dir " +
        dir.string());
    CHECK(r.exit_code == 0);
    const auto files = dir_contents(dir);
    std::size_t record_files = 0;
    for (const auto& [name, text] : files)
        if (name.rfind("records_", 0) == 0) {
            ++record_files;
            CHECK(line_count(text) == 3); // 24 trials over 12 campaigns
        }
    CHECK(record_files == 12);
    CHECK(files.count("records_fp16_widening_matmul_set.csv") == 1);

    const fs::path just_set = fresh_dir("module_suite_set");
    CHECK(run_cli("modules --suite --fault-kind set --dims 4x4x4 --trials "
                  "24 --seed 8 --out-dir " + just_set.string())
              .exit_code == 0);
    std::size_t set_records = 0;
    for (const auto& [name, text] : dir_contents(just_set))
        if (name.rfind("records_", 0) == 0) {
            ++set_records;
            CHECK(name.find("_set.csv") != std::string::npos);
        }
    CHECK(set_records == 6);
}

TEST_CASE("report regenerates results from recorded trials") {
    const fs::path camp = fresh_dir("report_src");
    CHECK(run_cli("sdc --dims 4x4x4 --trials 6 --seed 0x11 --out-dir " +
                  camp.string())
              .exit_code == 0);
    const fs::path rebuilt = fresh_dir("report_dst");
    const RunResult r =
        run_cli("report --manifest " + (camp / "manifest.json").string() +
                " --out-dir " + rebuilt.string());
    CHECK(r.exit_code == 0);

    const auto before = dir_contents(camp);
    const auto after = dir_contents(rebuilt);
    for (const char* name :
         {"sdc_results.csv", "sdc_results.json", "sdc_scatter_suite_11.csv",
          "sdc_scatter_suite_11.svg"}) {
        CAPTURE(name);
        REQUIRE(after.count(name) == 1);
        CHECK(after.at(name) == before.at(name));
    }

    const fs::path mod_camp = fresh_dir("report_mod_src");
    CHECK(run_cli("modules --fault-kind set --dims 4x4x4 --trials 20 "
                  "--seed 0x12 --out-dir " + mod_camp.string())
              .exit_code == 0);
    const fs::path mod_rebuilt = fresh_dir("report_mod_dst");
    CHECK(run_cli("report --manifest " +
                  (mod_camp / "module_manifest.json").string() +
                  " --out-dir " + mod_rebuilt.string())
              .exit_code == 0);
    CHECK(dir_contents(mod_rebuilt).at("module_results.csv") ==
          dir_contents(mod_camp).at("module_results.csv"));

    CHECK(run_cli("report --manifest /nonexistent/manifest.json").exit_code ==
          2);
    CHECK(run_cli("report").exit_code == 2);
}

TEST_CASE("config files feed settings and flags override them") {
    const fs::path dir = fresh_dir("config");
    const fs::path cfg = dir / "run.json";
    {
        std::ofstream out(cfg);
        out << R"({"trials": 3, "dims": "4x4x4", "seed": "0x7",
                   "precision": "fp8", "field": "sign",
                   "kernel": "matmul",
                   "out_dir": ")" << (dir / "from_config").string()
            << R"("})";
    }
    CHECK(run_cli("sdc --config " + cfg.string()).exit_code == 0);
    const auto from_config = dir_contents(dir / "from_config");
    CHECK(line_count(from_config.at("records_fp8_matmul_sign.csv")) == 4);

    // The explicit flag wins over the config value.
    CHECK(run_cli("sdc --config " + cfg.string() + " --trials 2 --out-dir " +
                  (dir / "overridden").string())
              .exit_code == 0);
    const auto overridden = dir_contents(dir / "overridden");
    CHECK(line_count(overridden.at("records_fp8_matmul_sign.csv")) == 3);

    const fs::path obj_cfg = dir / "obj.json";
    {
        std::ofstream out(obj_cfg);
        out << R"({"dims": {"m": 4, "n": 4, "d": 4}, "trials": 2,
                   "precision": "fp16", "field": "sign",
                   "kernel": "matmul",
                   "out_dir": ")" << (dir / "obj_dims").string() << R"("})";
    }
    CHECK(run_cli("sdc --config " + obj_cfg.string()).exit_code == 0);
    CHECK(dir_contents(dir / "obj_dims")
              .count("records_fp16_matmul_sign.csv") == 1);

    const fs::path bad = dir / "bad.json";
    {
        std::ofstream out(bad);
        out << R"({"trails": 3})"; // misspelled key
    }
    CHECK(run_cli("sdc --config " + bad.string()).exit_code == 2);
    CHECK(run_cli("sdc --config " + (dir / "missing.json").string())
              .exit_code == 2);
}

TEST_CASE("input seed can diverge from the campaign seed") {
    const fs::path d1 = fresh_dir("inseed1");
    const fs::path d2 = fresh_dir("inseed2");
    const std::string base = "sdc --dims 4x4x4 --precision fp16 --field "
                             "exponent --kernel matmul --trials 10 ";
    CHECK(run_cli(base + "--seed 5 --input-seed 7 --out-dir " + d1.string())
              .exit_code == 0);
    CHECK(run_cli(base + "--seed 5 --input-seed 8 --out-dir " + d2.string())
              .exit_code == 0);
    // Same fault draws, different matrices: the record streams differ.
    CHECK(dir_contents(d1).at("records_fp16_matmul_exponent.csv") !=
          dir_contents(d2).at("records_fp16_matmul_exponent.csv"));
}
