#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "tcentroid/cli.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = tcentroid::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::vector<std::string> kFigureFlags{"--mu", "1", "--sigma", "2", "--lower", "-1",
                                            "--upper", "4"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

TEST(Cli, CentroidFigureBase) {
    const Outcome r = cli(with({"centroid", "--shift", "0", "--format", "json"}, kFigureFlags));
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["results"][0]["value"].get<double>(), 0.0025, 5e-4);
    EXPECT_EQ(j["results"][0]["method"], "closed_form");
}

TEST(Cli, CompareFigureDelta) {
    const Outcome r = cli(with({"compare", "--shift", "2", "--format", "json"}, kFigureFlags));
    ASSERT_EQ(r.code, 0) << r.err;
    const double delta = json::parse(r.out)["results"][0]["delta"].get<double>();
    EXPECT_NEAR(delta, 4.7970, 1e-3);
    EXPECT_GT(delta, 0.0);

    const Outcome text = cli(with({"compare", "--shift", "2"}, kFigureFlags));
    EXPECT_NE(text.out.find("(positive)"), std::string::npos);
}

TEST(Cli, SigmaZeroIsADomainError) {
    const Outcome r = cli({"centroid", "--sigma", "0"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("sigma must be > 0"), std::string::npos);
}

TEST(Cli, DomainErrors) {
    EXPECT_EQ(cli({"centroid", "--lower", "2", "--upper", "1"}).code, 1);
    EXPECT_EQ(cli({"centroid", "--lower", "1", "--upper", "1"}).code, 1);
    EXPECT_EQ(cli({"centroid", "--method", "quadrature", "--lower", "-40", "--upper", "40"}).code,
              1);
    EXPECT_EQ(cli({"sample", "--n", "10", "--seed", "1", "--lower", "-40", "--upper", "40"}).code,
              1);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"centroid", "--bogus"}).code, 2);
    EXPECT_EQ(cli({"centroid", "--mu", "abc"}).code, 2);
    EXPECT_EQ(cli({"centroid", "--mu", "nan"}).code, 2);
    EXPECT_EQ(cli({"centroid", "--upper", "inf"}).code, 2);
    EXPECT_EQ(cli({"centroid", "--method", "magic"}).code, 2);
    EXPECT_EQ(cli({"centroid", "--format", "xml"}).code, 2);
    EXPECT_EQ(cli({"verify", "--check", "nonsense"}).code, 2);
}

TEST(Cli, RandomizedCommandsNeedASeed) {
    EXPECT_EQ(cli({"centroid", "--method", "monte_carlo"}).code, 2);
    EXPECT_EQ(cli({"centroid", "--method", "all"}).code, 2);
    EXPECT_EQ(cli({"sample", "--n", "10"}).code, 2);
    EXPECT_EQ(cli({"verify", "--check", "theorem"}).code, 2);
    EXPECT_EQ(cli({"verify", "--check", "omega"}).code, 0);
}

TEST(Cli, HelpExitsCleanly) {
    const Outcome r = cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("centroid"), std::string::npos);
}

TEST(Cli, MethodAllSideBySide) {
    const Outcome r = cli(with({"centroid", "--method", "all", "--seed", "3", "--n", "200000",
                                "--shift", "2", "--format", "json"},
                               kFigureFlags));
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    ASSERT_EQ(j["results"].size(), 3u);
    EXPECT_EQ(j["results"][1]["method"], "quadrature");
    EXPECT_EQ(j["results"][2]["method"], "monte_carlo");
    ASSERT_EQ(j["discrepancies"].size(), 2u);
    EXPECT_LT(std::abs(j["discrepancies"][0]["minus_closed_form"].get<double>()), 1e-9);
    EXPECT_LT(std::abs(j["discrepancies"][1]["standard_errors"].get<double>()), 4.0);
}

TEST(Cli, JsonRoundTrips) {
    for (const std::string command : {"centroid", "compare"}) {
        const auto first_args = with({command, "--method", "all", "--seed", "11", "--n", "5000",
                                      "--shift", "0.75", "--format", "json"},
                                     kFigureFlags);
        const Outcome first = cli(first_args);
        ASSERT_EQ(first.code, 0) << first.err;
        const fs::path cfg = temp_file("tcentroid_cli_roundtrip.json");
        std::ofstream(cfg) << first.out;
        const Outcome second = cli({command, "--config", cfg.string(), "--format", "json"});
        ASSERT_EQ(second.code, 0) << second.err;
        EXPECT_EQ(first.out, second.out) << command;
        fs::remove(cfg);
    }
}

TEST(Cli, FlagsOverrideConfig) {
    const Outcome first = cli(with({"centroid", "--format", "json"}, kFigureFlags));
    const fs::path cfg = temp_file("tcentroid_cli_override.json");
    std::ofstream(cfg) << first.out;
    const Outcome second =
        cli({"centroid", "--config", cfg.string(), "--shift", "2", "--format", "json"});
    ASSERT_EQ(second.code, 0) << second.err;
    EXPECT_NEAR(json::parse(second.out)["results"][0]["value"].get<double>(), 4.7995, 5e-4);
    fs::remove(cfg);
}

TEST(Cli, BadConfigIsAUsageError) {
    const fs::path cfg = temp_file("tcentroid_cli_bad.json");
    std::ofstream(cfg) << "{ not json";
    EXPECT_EQ(cli({"centroid", "--config", cfg.string()}).code, 2);
    std::ofstream(cfg) << R"({"command": "sample"})";
    EXPECT_EQ(cli({"centroid", "--config", cfg.string()}).code, 2);
    std::ofstream(cfg) << R"({"params": {"mu": "one"}})";
    EXPECT_EQ(cli({"centroid", "--config", cfg.string()}).code, 2);
    fs::remove(cfg);
}

TEST(Cli, CsvAndJsonCarryTheSameNumbers) {
    const auto base = with({"centroid", "--method", "all", "--seed", "5", "--n", "3000",
                            "--shift", "1.25"},
                           kFigureFlags);
    const json j = json::parse(cli(with(base, {"--format", "json"})).out);
    std::istringstream csv(cli(with(base, {"--format", "csv"})).out);
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "method,value,support_mass,std_error,minus_closed_form,warnings");
    for (std::size_t i = 0; i < 3; ++i) {
        ASSERT_TRUE(std::getline(csv, line));
        const std::string method = line.substr(0, line.find(','));
        const std::size_t start = line.find(',') + 1;
        const double value = std::strtod(line.c_str() + start, nullptr);
        EXPECT_EQ(method, j["results"][i]["method"]);
        EXPECT_EQ(value, j["results"][i]["value"].get<double>()) << method;
    }
}

TEST(Cli, VerifyReports) {
    const Outcome r = cli({"verify", "--seed", "7", "--n-random", "200", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["reports"].size(), 7u);

    const Outcome csv = cli({"verify", "--check", "omega", "--format", "csv"});
    EXPECT_EQ(csv.out.rfind("check,x1,x2,h,lhs,rhs,margin\n", 0), 0u);
    EXPECT_NE(csv.out.find("omega_positive/min_margin"), std::string::npos);

    const Outcome random = cli({"verify", "--check", "derivative", "--mode", "random", "--seed",
                                "2", "--n-random", "300"});
    EXPECT_EQ(random.code, 0);
    EXPECT_NE(random.out.find("PASS derivative: 900 checks"), std::string::npos) << random.out;
}

TEST(Cli, VerifyIsDeterministic) {
    const std::vector<std::string> args{"verify", "--check", "theorem,equivariance", "--seed",
                                        "19",     "--n-random", "500", "--format", "csv"};
    EXPECT_EQ(cli(args).out, cli(args).out);
}

TEST(Cli, Sample) {
    const Outcome r = cli({"sample", "--n", "2000", "--seed", "4", "--lower", "-6", "--upper",
                           "6", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["strategy"], "tail_mixture");
    EXPECT_EQ(j["values"].size(), 2000u);
    for (const auto& v : j["values"]) {
        EXPECT_GE(std::abs(v.get<double>()), 6.0);
    }
    const Outcome again = cli({"sample", "--n", "2000", "--seed", "4", "--lower", "-6", "--upper",
                               "6", "--format", "json"});
    EXPECT_EQ(r.out, again.out);

    const Outcome csv = cli({"sample", "--n", "3", "--seed", "4", "--format", "csv"});
    EXPECT_EQ(csv.out.rfind("value\n", 0), 0u);
    EXPECT_EQ(cli({"sample", "--seed", "4"}).code, 2);
}

TEST(Cli, FigureToFile) {
    const fs::path path = temp_file("tcentroid_cli_figure.csv");
    const Outcome r = cli({"figure", "--output", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const std::string text = slurp(path);
    EXPECT_EQ(text.rfind("x,fX_masked,fY_masked\n", 0), 0u);
    EXPECT_NE(text.find("\ncentroid,0.00246691846461"), std::string::npos);
    fs::remove(path);
    EXPECT_EQ(cli({"figure", "--output", "/nonexistent-dir/f.csv"}).code, 1);
}

#ifdef TCENTROID_TOOL_PATH
int exit_status(const std::string& command) {
    const int status = std::system((command + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinary, ExitCodes) {
    const std::string tool = TCENTROID_TOOL_PATH;
    EXPECT_EQ(exit_status(tool + " centroid --mu 1 --sigma 2 --lower -1 --upper 4"), 0);
    EXPECT_EQ(exit_status(tool + " centroid --sigma 0"), 1);
    EXPECT_EQ(exit_status(tool + " centroid --sigma"), 2);
    EXPECT_EQ(exit_status("TRUNC_CENTROID_THREADS=0 " + tool + " verify --check omega"), 1);
    EXPECT_EQ(exit_status("TRUNC_CENTROID_THREADS=1 " + tool + " verify --check omega"), 0);
}
#endif

}  // namespace
