#pragma once

#include "isac/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isac::cli {

/// A problem with the experiment file. `field` names the offending key and
/// `line` is 1-based (0 when the key is missing altogether).
class SpecError : public std::runtime_error {
public:
    SpecError(std::string field, int line, const std::string& message);

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

/// Resolved experiment description. Every default has been filled in.
struct ExperimentSpec {
    SystemConfig system;

    // Sensing correlation: eigenvalues + seed, or a target scene.
    std::vector<double> eigenvalues;
    std::uint64_t correlation_seed = 0;
    std::vector<double> target_gains;       ///< sigma^2 per target
    std::vector<double> target_angles_deg;  ///< direction per target

    std::vector<double> snr_grid_db;
    std::uint64_t trials = 0;
    std::string seed_token;
    std::uint64_t seed = 0;

    std::vector<std::string> designs{"SC", "CC", "Pareto", "FDSAC"};
    double alpha = 0.5;
    double kappa = 0.5;
    double mu = 0.5;

    // Region experiment.
    double region_snr_db = 5.0;
    std::uint64_t region_trials = 0;     ///< 0 means `trials`
    std::vector<double> alpha_grid;      ///< empty means automatic placement
    std::size_t alpha_points = 21;
    std::vector<double> kappa_grid;
    std::vector<double> mu_grid;
    std::vector<double> epsilon_grid;
    std::string isac_profile = "ergodic";

    bool uses_scene() const noexcept { return !target_gains.empty(); }
    SensingCorrelation correlation() const;
};

/// Parses `key = value` lines. `#` starts a comment, lists are comma
/// separated. Unknown keys, duplicates, malformed numbers and missing
/// required keys raise SpecError.
ExperimentSpec parse_spec(const std::string& text);
ExperimentSpec load_spec(const std::string& path);

/// Numeric seeds are used as is; any other token is hashed (FNV-1a).
std::uint64_t seed_from_token(const std::string& token);

/// Writes the spec back as `key = value` lines; parse_spec round-trips it.
std::string format_spec(const ExperimentSpec& spec);

}  // namespace isac::cli
