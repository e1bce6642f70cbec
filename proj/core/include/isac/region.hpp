#pragma once

#include "isac/model.hpp"
#include "isac/montecarlo.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace isac {

enum class RegionLabel { Isac, Fdsac, AuxC1, AuxC2 };

std::string to_string(RegionLabel label);

/// Averaged (SR, CR) tuple with its Monte Carlo standard errors and the
/// sweep parameter that produced it. Unused parameters are NaN.
struct RegionPoint {
    double sr = 0.0;
    double cr = 0.0;
    double sr_std_err = 0.0;
    double cr_std_err = 0.0;
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double kappa = std::numeric_limits<double>::quiet_NaN();
    double mu = std::numeric_limits<double>::quiet_NaN();
    double epsilon = std::numeric_limits<double>::quiet_NaN();
};

/// Boundary points sorted by descending SR.
struct RegionBoundary {
    RegionLabel label = RegionLabel::Isac;
    std::vector<RegionPoint> points;

    /// True if CR does not decrease as SR decreases, within tol.
    bool is_monotone(double tol = 1e-6) const;
};

/// How the rate-profile constraint of the ISAC boundary is imposed.
///  Ergodic: on the averaged rates. Each realization maximizes
///    R_c + w R_s with one weight w per alpha shared by all draws, and w is
///    tuned so that the average rates sit on the alpha ray.
///  PerRealization: each draw solves its own rate profile, then averages.
///    This gives an achievable curve that can sit strictly inside the
///    averaged-rate region.
enum class IsacProfile { Ergodic, PerRealization };

std::string to_string(IsacProfile profile);

/// ISAC Pareto boundary over an alpha grid that includes 0 and 1. Both
/// endpoints are the sensing-centric (alpha = 1) and communications-centric
/// (alpha = 0) designs.
RegionBoundary isac_boundary(const SystemConfig& cfg, const SensingCorrelation& corr,
                             std::span<const double> alphas, std::uint64_t trials,
                             std::uint64_t seed, const RunOptions& opts = {},
                             IsacProfile profile = IsacProfile::Ergodic);
RegionBoundary isac_boundary(const GainTable& table, const SystemConfig& cfg,
                             const SensingCorrelation& corr, std::span<const double> alphas,
                             const RunOptions& opts = {},
                             IsacProfile profile = IsacProfile::Ergodic);

/// `count` alpha values (count >= 2): 0, 1, and count - 2 values spread
/// evenly between the rays through the communications-centric and the
/// sensing-centric points. Outside that range the rate profile returns
/// one of the two endpoints, so a uniform grid wastes most of its points.
std::vector<double> isac_alpha_grid(const GainTable& table, const SystemConfig& cfg,
                                    const SensingCorrelation& corr, std::size_t count);

struct FdsacRegion {
    std::vector<RegionPoint> grid;  ///< every (kappa, mu) pair, row-major in kappa
    RegionBoundary boundary;        ///< Pareto-dominant subset of grid
};

/// FDSAC rates over a (kappa, mu) grid. Both grids must lie in [0, 1] and
/// include the endpoints.
FdsacRegion fdsac_region(const SystemConfig& cfg, const SensingCorrelation& corr,
                         std::span<const double> kappas, std::span<const double> mus,
                         std::uint64_t trials, std::uint64_t seed, const RunOptions& opts = {});

FdsacRegion fdsac_region(const GainTable& table, const SystemConfig& cfg,
                         const SensingCorrelation& corr, std::span<const double> kappas,
                         std::span<const double> mus, const RunOptions& opts = {});

RegionBoundary fdsac_boundary(const SystemConfig& cfg, const SensingCorrelation& corr,
                              std::span<const double> kappas, std::span<const double> mus,
                              std::uint64_t trials, std::uint64_t seed,
                              const RunOptions& opts = {});

/// Points that no other point weakly dominates, sorted by descending SR.
std::vector<RegionPoint> pareto_front(std::span<const RegionPoint> points);

struct PointMargin {
    RegionPoint point;
    double cr_bound = 0.0;   ///< outer boundary CR interpolated at point.sr
    double margin = 0.0;     ///< cr_bound - point.cr
    double tolerance = 0.0;  ///< 3 * combined standard error + 1e-6
    bool clamped = false;    ///< point.sr fell outside the boundary's SR span
    bool violation = false;
    std::string note;
};

struct ContainmentReport {
    std::vector<PointMargin> margins;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();

    bool ok() const noexcept { return violations == 0; }
};

/// Checks that every inner point lies under the piecewise-linear
/// interpolation of the outer boundary, up to 3 combined standard errors
/// plus 1e-6.
ContainmentReport check_containment(std::span<const RegionPoint> inner,
                                    const RegionBoundary& outer);
ContainmentReport check_containment(const RegionBoundary& inner, const RegionBoundary& outer);

struct SandwichReport {
    RegionBoundary c1;  ///< full-band split: sensing budget (1-eps)p, comm budget eps p
    RegionBoundary c2;  ///< ISAC with the summed powers k + u
    ContainmentReport fdsac_in_c1;
    ContainmentReport c1_in_c2;
    ContainmentReport c2_in_isac;
    /// C2(eps) >= C1(eps) componentwise for every eps.
    bool c2_dominates_c1 = true;
    /// Largest sum(k + u) - p over the first 1000 draws.
    double max_power_excess = 0.0;

    bool ok() const noexcept {
        return fdsac_in_c1.ok() && c1_in_c2.ok() && c2_in_isac.ok() && c2_dominates_c1 &&
               max_power_excess <= 1e-9;
    }
};

/// Builds the two auxiliary regions over an epsilon grid and checks the
/// chain FDSAC <= C1 <= C2 <= ISAC.
SandwichReport verify_sandwich(const SystemConfig& cfg, const SensingCorrelation& corr,
                               std::span<const double> epsilons, std::uint64_t trials,
                               std::uint64_t seed, std::span<const RegionPoint> fdsac_points,
                               const RegionBoundary& isac, const RunOptions& opts = {});
SandwichReport verify_sandwich(const GainTable& table, const SystemConfig& cfg,
                               const SensingCorrelation& corr, std::span<const double> epsilons,
                               std::span<const RegionPoint> fdsac_points,
                               const RegionBoundary& isac, const RunOptions& opts = {});

}  // namespace isac
