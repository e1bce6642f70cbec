#include "commands.hpp"
#include "spec_file.hpp"

#include "isac/errors.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <thread>

namespace {

unsigned threads_from_env() {
    const char* env = std::getenv("ISAC_REGION_THREADS");
    if (env == nullptr || *env == '\0') return std::max(1u, std::thread::hardware_concurrency());
    const std::string_view text(env);
    unsigned value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || value == 0) {
        throw isac::cli::SpecError("ISAC_REGION_THREADS", 0,
                                   "expected a positive integer, got '" + std::string(text) +
                                       "'");
    }
    return value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ISAC rate-region experiments: outage, ergodic rate, sensing rate, regions"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_dir = ".";
    unsigned threads = 0;
    const char* names[] = {"op", "ecr", "sr", "region"};
    const char* help[] = {
        "outage probability of the sum communication rate",
        "sum ergodic communication rate with closed form and asymptote",
        "sensing rate with high-SNR asymptote",
        "ISAC and FDSAC rate regions, containment and auxiliary-region checks",
    };
    for (int i = 0; i < 4; ++i) {
        auto* sub = app.add_subcommand(names[i], help[i]);
        sub->add_option("--spec", spec_path, "experiment file (key = value lines)")
            ->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--threads", threads, "worker threads (default: ISAC_REGION_THREADS or "
                                              "all cores)")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const isac::cli::ExperimentSpec spec = isac::cli::load_spec(spec_path);
        isac::RunOptions opts;
        opts.threads = threads > 0 ? threads : threads_from_env();

        isac::cli::CommandOutput out;
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "op") {
            out = isac::cli::cmd_op(spec, opts);
        } else if (cmd == "ecr") {
            out = isac::cli::cmd_ecr(spec, opts);
        } else if (cmd == "sr") {
            out = isac::cli::cmd_sr(spec, opts);
        } else {
            out = isac::cli::cmd_region(spec, opts);
        }
        isac::cli::write_outputs(out, out_dir);
        for (const auto& f : out.files) std::cout << out_dir << '/' << f.name << '\n';
        if (!out.failure.empty()) {
            std::cerr << "isac_region " << cmd << ": " << out.failure << '\n';
            return 1;
        }
        return 0;
    } catch (const isac::cli::SpecError& e) {
        std::cerr << "invalid experiment: " << e.what() << '\n';
        return 2;
    } catch (const isac::RankDeficiencyError& e) {
        std::cerr << "invalid experiment: " << e.what() << '\n';
        return 2;
    } catch (const isac::ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << " (SR residual " << e.sr_residual()
                  << ", CR residual " << e.cr_residual() << ")\n";
        return 1;
    } catch (const isac::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    }
}
