#pragma once

#include "isac/allocation.hpp"
#include "isac/model.hpp"
#include "isac/parallel.hpp"
#include "isac/rates.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace isac {

/// Precoding scheme evaluated by the Monte Carlo estimators.
struct Design {
    enum class Scheme { SensingCentric, CommCentric, Pareto, Fdsac };

    Scheme scheme = Scheme::SensingCentric;
    double alpha = 0.5;  ///< Pareto rate profile
    double kappa = 0.5;  ///< FDSAC bandwidth fraction for communications
    double mu = 0.5;     ///< FDSAC power fraction for communications

    static Design sensing_centric() { return {Scheme::SensingCentric}; }
    static Design comm_centric() { return {Scheme::CommCentric}; }
    static Design pareto(double alpha) { return {Scheme::Pareto, alpha}; }
    static Design fdsac(double kappa, double mu) { return {Scheme::Fdsac, 0.5, kappa, mu}; }

    /// "SC", "CC", "Pareto(0.5)", "FDSAC(0.5,0.5)".
    std::string label() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    /// Outage estimates only: no event was observed, mean is 0 and
    /// upper_bound_95 = 3/trials is the one-sided 95% bound.
    bool zero_events = false;
    double upper_bound_95 = 0.0;
};

/// Per-realization (SR, CR) of one design at the power in cfg.p.
class DesignEvaluator {
public:
    DesignEvaluator(const Design& design, const SystemConfig& cfg, std::span<const double> lambdas);

    RateTuple rates(std::span<const double> rho) const;

    /// True if the sum CR falls below r0. For CC and Pareto designs the S-C
    /// rate is checked first: both designs dominate it in CR for every
    /// realization, so the expensive allocation only runs when S-C is in
    /// outage.
    bool in_outage(std::span<const double> rho, double r0) const;

    const SystemConfig& config() const noexcept { return cfg_; }

private:
    Design design_;
    SystemConfig cfg_;
    std::vector<double> lambdas_;
    std::vector<double> sc_powers_;
    double sc_rate_ = 0.0;
};

struct RatePoint {
    double p = 0.0;
    McEstimate ecr;
    McEstimate sr;
};

/// Sum ECR and average SR of a design over a power grid. Every grid point
/// sees the same channel realizations (trial i uses stream (seed, i)).
std::vector<RatePoint> estimate_rate_curve(const Design& design, const SystemConfig& cfg,
                                           const SensingCorrelation& corr,
                                           std::span<const double> powers, std::uint64_t trials,
                                           std::uint64_t seed, const RunOptions& opts = {});

/// estimate_op_curve for several designs over the same realizations; one
/// curve per design, each identical to its own estimate_op_curve call.
std::vector<std::vector<McEstimate>> estimate_op_curves(
    std::span<const Design> designs, const SystemConfig& cfg, const SensingCorrelation& corr,
    double r0, std::span<const double> powers, std::uint64_t trials, std::uint64_t seed,
    const RunOptions& opts = {});

/// Outage probability Pr(sum CR < r0) over a power grid with common
/// realizations.
std::vector<McEstimate> estimate_op_curve(const Design& design, const SystemConfig& cfg,
                                          const SensingCorrelation& corr, double r0,
                                          std::span<const double> powers, std::uint64_t trials,
                                          std::uint64_t seed, const RunOptions& opts = {});

/// Sum ECR at cfg.p. Refuses fewer than 100 trials.
McEstimate estimate_ecr(const Design& design, const SystemConfig& cfg,
                        const SensingCorrelation& corr, std::uint64_t trials, std::uint64_t seed,
                        const RunOptions& opts = {});

/// Average SR at cfg.p. Deterministic (std_err 0) for the S-C design.
McEstimate estimate_avg_sr(const Design& design, const SystemConfig& cfg,
                           const SensingCorrelation& corr, std::uint64_t trials,
                           std::uint64_t seed, const RunOptions& opts = {});

/// Outage probability at cfg.p.
McEstimate estimate_op(const Design& design, const SystemConfig& cfg,
                       const SensingCorrelation& corr, double r0, std::uint64_t trials,
                       std::uint64_t seed, const RunOptions& opts = {});

/// ZF gains of `trials` channel realizations, stored row-major (trial x M).
/// Row t equals what ChannelSampler::gains returns for trial t.
struct GainTable {
    int M = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> rho;

    std::span<const double> row(std::uint64_t t) const {
        return {rho.data() + t * static_cast<std::size_t>(M), static_cast<std::size_t>(M)};
    }
};

GainTable sample_gain_table(const SystemConfig& cfg, const SensingCorrelation& corr,
                            std::uint64_t trials, std::uint64_t seed, const RunOptions& opts = {});

struct CurvePoint {
    double p = 0.0;  ///< linear SNR
    double value = 0.0;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<double> grid;  ///< abscissae used in the fit
};

/// Least-squares slope of -log10(OP) against log10(p). Needs >= 3 points
/// with strictly increasing p and OP > 0.
SlopeFit fit_diversity_order(std::span<const CurvePoint> op_curve);

/// Least-squares slope of rate against log2(p). Needs >= 3 points, all at
/// p >= 30 dB.
SlopeFit fit_high_snr_slope(std::span<const CurvePoint> rate_curve);

/// Points of an OP curve inside [lo, hi], restricted to the highest-SNR
/// decade among them.
std::vector<CurvePoint> diversity_window(std::span<const CurvePoint> op_curve, double lo = 1e-6,
                                         double hi = 1e-2);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace isac
