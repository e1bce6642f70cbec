#pragma once

#include "isac/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isac {

/// Which optimization produced a power vector.
struct AllocationTag {
    enum class Kind { SensingCentric, CommCentric, Pareto, FdsacComm, FdsacSense, WaterFill };

    Kind kind = Kind::WaterFill;
    double alpha = 0.0;  ///< rate-profile parameter, Pareto only
    double kappa = 0.0;  ///< FDSAC bandwidth fraction for communications
    double mu = 0.0;     ///< FDSAC power fraction for communications

    std::string label() const;
};

struct PowerAllocation {
    std::vector<double> powers;
    AllocationTag design;
    /// Water level 1/w for water-filling solutions, or the shared KKT
    /// multiplier for the Pareto solver. Empty when no stream is active.
    std::optional<double> water_level;

    double total() const;
};

/// Maximizes sum_m log2(1 + g_m x_m) subject to sum_m x_m <= budget.
/// Solution x_m = max(0, level - 1/g_m) with the level chosen so the budget
/// is met exactly. Gains of zero are allowed and receive zero power; at
/// least one gain must be positive.
PowerAllocation waterfill(std::span<const double> gains, double budget);

/// Sensing-centric design: water-filling over L*lambda_m with budget p.
PowerAllocation sensing_waterfill(const SensingCorrelation& corr, const SystemConfig& cfg);
PowerAllocation sensing_waterfill(std::span<const double> lambdas, const SystemConfig& cfg);

/// Communications-centric design: water-filling over the ZF gains rho_m.
/// Throws DegenerateInputError if every rho_m is zero.
PowerAllocation comm_waterfill(std::span<const double> rho, double budget);

struct FdsacAllocation {
    PowerAllocation comm;   ///< a_m, budget mu*p over gains rho_m / kappa
    PowerAllocation sense;  ///< b_m, budget (1-mu)*p over gains L*lambda_m / (1-kappa)
};

/// Frequency-division baseline: kappa of the band and mu of the power go to
/// communications. A function with no band or no power gets all-zero powers.
FdsacAllocation fdsac_allocate(std::span<const double> rho, std::span<const double> lambdas,
                               const SystemConfig& cfg, double kappa, double mu);

struct ParetoPoint {
    double alpha = 0.0;
    double R = 0.0;  ///< common scale: sr >= alpha*R, cr >= (1-alpha)*R
    PowerAllocation powers;
    double sr = 0.0;
    double cr = 0.0;
};

/// Rate-profile Pareto point for one channel realization:
///   max R  s.t.  R_s(p) >= alpha R,  R_c(p) >= (1-alpha) R,  sum p <= budget
/// with R_s(p) = (N/L) sum log2(1 + L lambda_m p_m) and
/// R_c(p) = sum log2(1 + rho_m p_m). alpha = 1 returns the sensing
/// water-filling solution and alpha = 0 the communication one.
///
/// Throws ConvergenceError (carrying the best iterate) if neither the
/// weighted-sum bisection nor the subgradient fallback converges.
ParetoPoint pareto_allocate(std::span<const double> rho, std::span<const double> lambdas,
                            const SystemConfig& cfg, double alpha);
ParetoPoint pareto_allocate(std::span<const double> rho, const SensingCorrelation& corr,
                            const SystemConfig& cfg, double alpha);

namespace detail {

/// Maximizes R_c(p) + weight * R_s(p) over the budget simplex. Returns the
/// powers and writes the KKT multiplier.
std::vector<double> weighted_sum_powers(std::span<const double> rho,
                                        std::span<const double> lambdas,
                                        const SystemConfig& cfg, double weight,
                                        double* multiplier = nullptr);

/// Projected supergradient ascent on min(R_s/alpha, R_c/(1-alpha)) over the
/// budget simplex, with diminishing steps. Used when the bisection solver
/// cannot bracket the rate profile.
ParetoPoint pareto_subgradient(std::span<const double> rho, std::span<const double> lambdas,
                               const SystemConfig& cfg, double alpha, int max_iter = 10000);

/// Euclidean projection onto {x >= 0, sum x = budget}.
std::vector<double> project_to_simplex(std::span<const double> v, double budget);

}  // namespace detail

}  // namespace isac
