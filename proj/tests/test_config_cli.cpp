#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "co3/config.hpp"
#include "co3/csv.hpp"
#include "co3/gennorm.hpp"

using namespace co3;

namespace {

const char* kGoodConfig = R"(# demo experiment
[task]
kind = quadratic
dimension = 64
users = 2
data_seed = 3
noise_scale = 0.4
eig_min = 1.0
eig_max = 2.0

[run]
rounds = 6
eta = 0.05
seed = 42

[scheme co3_fp4]
scheme = co3
format = fp4
gamma = 0.7
refit_interval = 5

[scheme plain]
scheme = uncompressed
)";

std::string run_cli(const std::string& args, int* exit_code) {
    const std::string cmd = std::string(CO3_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) output += buf;
    *exit_code = pclose(pipe);
    return output;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("well-formed config parses") {
    const ExperimentConfig config = parse_experiment_config_text(kGoodConfig, "demo");
    CHECK(config.task.kind == TaskKind::Quadratic);
    CHECK(config.task.dimension == 64);
    REQUIRE(config.schemes.size() == 2);
    CHECK(config.schemes[0].name == "co3_fp4");
    CHECK(config.schemes[0].scheme == Scheme::CO3);
    CHECK(config.schemes[0].gamma == 0.7);
    CHECK(config.schemes[0].rounds == 6);   // inherited from [run]
    CHECK(config.schemes[0].seed == 42);
    CHECK(config.schemes[1].scheme == Scheme::Uncompressed);
    CHECK(config.schemes[1].users == 2);    // mirrors the task
}

TEST_CASE("config errors carry the line number and field") {
    auto expect_error = [](const std::string& text, const std::string& fragment) {
        try {
            parse_experiment_config_text(text, "t");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            INFO(what);
            CHECK(what.find(fragment) != std::string::npos);
        }
    };
    expect_error("[task]\nkind = bogus\n[scheme a]\nscheme = co3\n", "unknown task 'bogus'");
    expect_error("[scheme a]\nscheme = sketchy\n", "unknown scheme 'sketchy'");
    expect_error("[scheme a]\nscheme = co3\nrounds = soon\n", "not an integer");
    expect_error("[task]\nwhatever = 1\n[scheme a]\nscheme = co3\n", "unknown [task] key");
    expect_error("key = 1\n", "before any [section]");
    expect_error("[task]\nkind quadratic\n", "expected key = value");
    expect_error("[task]\nkind = quadratic\n", "no [scheme");
    // Line numbers are 1-based and point at the offending line.
    try {
        parse_experiment_config_text("[task]\n\nkind = bogus\n", "t");
    } catch (const ConfigError& e) {
        CHECK(e.line_no == 3);
    }
}

TEST_CASE("csv doubles round trip at 17 significant digits") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.2250738585072014e-308, 123456.789}) {
        const std::string s = format_g17(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("cli run produces deterministic csv outputs") {
    const std::string dir = "co3_cli_test_out";
    const std::string config_path = dir + ".cfg";
    {
        std::ofstream out(config_path);
        out << kGoodConfig;
    }
    int code = 0;
    run_cli("run --config " + config_path + " --out " + dir + "_a", &code);
    CHECK(code == 0);
    run_cli("run --config " + config_path + " --out " + dir + "_b", &code);
    CHECK(code == 0);
    CHECK(slurp(dir + "_a/co3_fp4.csv") == slurp(dir + "_b/co3_fp4.csv"));
    CHECK(slurp(dir + "_a/plain.csv") == slurp(dir + "_b/plain.csv"));
    CHECK(slurp(dir + "_a/summary.csv") == slurp(dir + "_b/summary.csv"));
    const std::string manifest = slurp(dir + "_a/manifest.txt");
    CHECK(manifest.find("schemes = co3_fp4 plain") != std::string::npos);
    // Header row of the per-round csv is pinned.
    const std::string csv = slurp(dir + "_a/co3_fp4.csv");
    CHECK(csv.rfind("t,loss,gap,bits_payload,bits_header,mem_l1,grad_l1,beta_hat,alpha_hat,"
                    "w2_gennorm,w2_norm,w2_laplace,w2_dweibull\n",
                    0) == 0);
}

TEST_CASE("cli rejects bad configs with a nonzero exit") {
    const std::string config_path = "co3_cli_bad.cfg";
    {
        std::ofstream out(config_path);
        out << "[scheme a]\nscheme = sketchy\n";
    }
    int code = 0;
    const std::string output = run_cli("run --config " + config_path + " --out co3_cli_bad_out",
                                       &code);
    CHECK(code != 0);
    CHECK(output.find("sketchy") != std::string::npos);
    CHECK(output.find(":2:") != std::string::npos);  // line-precise
}

TEST_CASE("cli fit handles gennorm samples and empty files") {
    const std::string sample_path = "co3_cli_fit_samples.txt";
    {
        const auto samples = gennorm_sample({0.0, 1.0, 1.0}, 20000, 61);
        std::ofstream out(sample_path);
        for (Eigen::Index i = 0; i < samples.size(); ++i) out << format_g17(samples[i]) << "\n";
    }
    int code = 0;
    const std::string output = run_cli("fit " + sample_path, &code);
    CHECK(code == 0);
    CHECK(output.find("best = ") != std::string::npos);
    // Laplace data: the winner is laplace or gennorm with shape near 1.
    const bool plausible = output.find("best = laplace") != std::string::npos ||
                           output.find("best = gennorm") != std::string::npos;
    CHECK(plausible);

    const std::string empty_path = "co3_cli_fit_empty.txt";
    {
        std::ofstream out(empty_path);
    }
    const std::string err = run_cli("fit " + empty_path, &code);
    CHECK(code != 0);
    CHECK(err.find("no numeric samples") != std::string::npos);
}

TEST_CASE("cli verify rejects unknown suites") {
    int code = 0;
    const std::string output = run_cli("verify --suite nonsense", &code);
    CHECK(code != 0);
    CHECK(output.find("unknown suite") != std::string::npos);
}

TEST_CASE("cli verify distfit suite passes") {
    int code = 0;
    const std::string output = run_cli("verify --suite distfit", &code);
    INFO(output);
    CHECK(code == 0);
    CHECK(output.find("PASS (distfit)") != std::string::npos);
    CHECK(output.find("VIOLATION") == std::string::npos);
}
