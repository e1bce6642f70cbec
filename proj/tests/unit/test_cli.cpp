#include "commands.hpp"
#include "spec_file.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace isac;
using namespace isac::cli;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(M = 4
N = 5
K = 4
L = 30
R0 = 2
eigenvalues = 1, 0.1, 0.05, 0.01
correlation_seed = 7
snr_grid_db = 10
trials = 100
seed = 3
)";

SpecError expect_error(const std::string& text) {
    try {
        parse_spec(text);
    } catch (const SpecError& e) {
        return e;
    }
    ADD_FAILURE() << "no SpecError for:\n" << text;
    return SpecError("", 0, "");
}

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
    const std::string head = key + " =";
    const auto pos = text.rfind(head, 0) == 0 ? 0 : text.find("\n" + head) + 1;
    const auto end = text.find('\n', pos);
    return text.replace(pos, end - pos, line);
}

const OutputFile& file(const CommandOutput& out, const std::string& name) {
    for (const auto& f : out.files) {
        if (f.name == name) return f;
    }
    throw std::runtime_error("missing output " + name);
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t line_count(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("isac_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const int status = std::system((std::string(ISAC_REGION_EXE) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(SpecFile, ParsesSmallSpec) {
    const auto s = parse_spec(kSmall);
    EXPECT_EQ(s.system.M, 4);
    EXPECT_EQ(s.system.L, 30);
    EXPECT_EQ(s.trials, 100u);
    EXPECT_EQ(s.seed, 3u);
    EXPECT_EQ(s.eigenvalues.size(), 4u);
    EXPECT_EQ(s.designs.size(), 4u);
    EXPECT_EQ(s.region_trials, 100u);
    EXPECT_TRUE(s.alpha_grid.empty());
    EXPECT_EQ(s.kappa_grid.size(), 21u);
    EXPECT_EQ(s.epsilon_grid.size(), 11u);
}

TEST(SpecFile, MissingKeyIsNamed) {
    const auto e = expect_error(replace_line(kSmall, "M", "# no M"));
    EXPECT_EQ(e.field(), "M");
    EXPECT_EQ(e.line(), 0);
}

TEST(SpecFile, BadNumberCarriesLine) {
    const auto e = expect_error(replace_line(kSmall, "L", "L = thirty"));
    EXPECT_EQ(e.field(), "L");
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
}

TEST(SpecFile, UnknownAndDuplicateKeys) {
    EXPECT_EQ(expect_error(std::string(kSmall) + "colour = red\n").field(), "colour");
    const auto dup = expect_error(std::string(kSmall) + "seed = 4\n");
    EXPECT_EQ(dup.field(), "seed");
    EXPECT_EQ(dup.line(), 11);
}

TEST(SpecFile, ValueChecks) {
    EXPECT_EQ(expect_error(replace_line(kSmall, "snr_grid_db", "snr_grid_db =")).field(), "snr_grid_db");
    EXPECT_EQ(expect_error(replace_line(kSmall, "trials", "trials = 99")).field(), "trials");
    EXPECT_EQ(expect_error(replace_line(kSmall, "eigenvalues", "eigenvalues = 1, 0.1, 0.05")).field(),
              "eigenvalues");
    EXPECT_EQ(expect_error(replace_line(kSmall, "eigenvalues", "eigenvalues = 1, 0.1, 0.05, 0")).field(),
              "eigenvalues");
    EXPECT_EQ(expect_error(replace_line(kSmall, "K", "K = 3")).field(), "K");
    EXPECT_EQ(expect_error(std::string(kSmall) + "designs = SC, Magic\n").field(), "designs");
    EXPECT_EQ(expect_error(std::string(kSmall) + "alpha = 1.5\n").field(), "alpha");
}

TEST(SpecFile, SeedTokens) {
    EXPECT_EQ(seed_from_token("42"), 42u);
    EXPECT_EQ(seed_from_token("run-a"), seed_from_token("run-a"));
    EXPECT_NE(seed_from_token("run-a"), seed_from_token("run-b"));
    const auto s = parse_spec(replace_line(kSmall, "seed", "seed = run-a"));
    EXPECT_EQ(s.seed, seed_from_token("run-a"));
    EXPECT_EQ(s.seed_token, "run-a");
}

TEST(SpecFile, PresetParsesAndRoundTrips) {
    const auto s = load_spec(std::string(ISAC_PRESET_DIR) + "/default.spec");
    EXPECT_EQ(s.snr_grid_db.size(), 9u);
    EXPECT_EQ(s.trials, 100000u);
    EXPECT_EQ(s.region_trials, 20000u);
    EXPECT_EQ(s.alpha_points, 21u);
    const auto again = parse_spec(format_spec(s));
    EXPECT_EQ(format_spec(again), format_spec(s));
    EXPECT_EQ(again.eigenvalues, s.eigenvalues);
    EXPECT_EQ(again.epsilon_grid, s.epsilon_grid);
}

TEST(SpecFile, MissingFile) {
    EXPECT_THROW(load_spec("/nonexistent/x.spec"), SpecError);
}

TEST(Commands, SmallRunsProduceExpectedColumns) {
    const auto s = parse_spec(kSmall);
    const RunOptions opts;
    const auto op = cmd_op(s, opts);
    EXPECT_EQ(first_line(file(op, "op.csv").content), "p_db,design,op,std_err,reference");
    EXPECT_EQ(line_count(file(op, "op.csv").content), 5u);
    const auto ecr = cmd_ecr(s, opts);
    EXPECT_EQ(first_line(file(ecr, "ecr.csv").content),
              "p_db,design,ecr,std_err,closed_form,asymptote");
    EXPECT_TRUE(ecr.failure.empty());
    const auto sr = cmd_sr(s, opts);
    EXPECT_EQ(first_line(file(sr, "sr.csv").content), "p_db,design,sr,asymptote");
    // A single SNR point gives no high-SNR fit, and the reason is recorded.
    EXPECT_NE(file(sr, "sr.json").content.find("\"reason\""), std::string::npos);
}

TEST(Commands, RegionWithEndpointsOnly) {
    auto s = parse_spec(std::string(kSmall) +
                        "region_trials = 200\nalpha_grid = 0, 1\nkappa_grid = 0, 0.5, 1\n"
                        "mu_grid = 0, 0.5, 1\nepsilon_grid = 0, 0.5, 1\n");
    const auto out = cmd_region(s, {});
    EXPECT_EQ(line_count(file(out, "isac_boundary.csv").content), 3u);
    EXPECT_EQ(line_count(file(out, "fdsac_grid.csv").content), 10u);
    EXPECT_EQ(first_line(file(out, "aux_c1.csv").content),
              "alpha,kappa,mu,epsilon,sr,cr,sr_std_err,cr_std_err");
    EXPECT_NE(file(out, "region.json").content.find("\"sandwich\""), std::string::npos);
}

TEST(Executable, ExitCodes) {
    const fs::path dir = scratch("exit");
    {
        std::ofstream(dir / "bad.spec") << replace_line(kSmall, "M", "");
        std::ofstream(dir / "good.spec") << kSmall;
    }
    EXPECT_EQ(run("ecr --spec " + (dir / "bad.spec").string() + " --out " + dir.string()), 2);
    EXPECT_EQ(run("ecr --spec " + (dir / "missing.spec").string()), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("ecr --spec " + (dir / "good.spec").string() + " --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "ecr.csv"));
    EXPECT_TRUE(fs::exists(dir / "ecr.json"));
}

TEST(Executable, OutputDoesNotDependOnThreads) {
    const fs::path base = scratch("threads");
    std::ofstream(base / "s.spec") << std::string(kSmall).replace(std::string(kSmall).find("trials = 100"), 12, "trials = 3000");
    std::string ref;
    for (int t : {1, 3}) {
        const fs::path out = base / std::to_string(t);
        fs::create_directories(out);
        ASSERT_EQ(run("op --spec " + (base / "s.spec").string() + " --out " + out.string() +
                      " --threads " + std::to_string(t)), 0);
        const std::string csv = slurp(out / "op.csv");
        if (ref.empty()) ref = csv;
        EXPECT_EQ(csv, ref);
    }
}
