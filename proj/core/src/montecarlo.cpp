#include "isac/montecarlo.hpp"

#include "isac/errors.hpp"

#include <cmath>
#include <sstream>

namespace isac {
namespace {

constexpr std::uint64_t kMinTrials = 100;

void require_trials(std::uint64_t trials) {
    if (trials < kMinTrials) {
        throw DomainError("Monte Carlo estimate needs at least " + std::to_string(kMinTrials) +
                          " trials (got " + std::to_string(trials) + ")");
    }
}

std::span<const double> lambda_span(const SensingCorrelation& corr) {
    return {corr.lambdas.data(), static_cast<std::size_t>(corr.lambdas.size())};
}

McEstimate mean_estimate(const RunningStats& s, std::uint64_t seed) {
    McEstimate e;
    e.mean = s.mean;
    e.std_err = s.n > 1 ? std::sqrt(s.variance() / static_cast<double>(s.n)) : 0.0;
    e.trials = s.n;
    e.seed = seed;
    return e;
}

McEstimate outage_estimate(const RunningStats& s, std::uint64_t seed) {
    McEstimate e;
    e.trials = s.n;
    e.seed = seed;
    const double n = static_cast<double>(s.n);
    // The indicator mean is events / n up to merge round-off; recover the
    // exact count.
    e.mean = std::round(s.mean * n) / n;
    if (e.mean <= 0.0) {
        e.mean = 0.0;
        e.zero_events = true;
        e.upper_bound_95 = 3.0 / n;
        return e;
    }
    e.std_err = std::sqrt(e.mean * (1.0 - e.mean) / n);
    return e;
}

std::vector<DesignEvaluator> evaluators_for(const Design& design, const SystemConfig& cfg,
                                            const SensingCorrelation& corr,
                                            std::span<const double> powers) {
    std::vector<DesignEvaluator> out;
    out.reserve(powers.size());
    for (double p : powers) out.emplace_back(design, cfg.with_power(p), lambda_span(corr));
    return out;
}

void check_dimensions(const SystemConfig& cfg, const SensingCorrelation& corr) {
    cfg.validate();
    if (corr.size() != cfg.M) {
        throw DomainError("correlation matrix size " + std::to_string(corr.size()) +
                          " does not match M = " + std::to_string(cfg.M));
    }
}

}  // namespace

std::string Design::label() const {
    std::ostringstream os;
    switch (scheme) {
        case Scheme::SensingCentric: return "SC";
        case Scheme::CommCentric: return "CC";
        case Scheme::Pareto: os << "Pareto(" << alpha << ")"; break;
        case Scheme::Fdsac: os << "FDSAC(" << kappa << "," << mu << ")"; break;
    }
    return os.str();
}

DesignEvaluator::DesignEvaluator(const Design& design, const SystemConfig& cfg,
                                 std::span<const double> lambdas)
    : design_(design), cfg_(cfg), lambdas_(lambdas.begin(), lambdas.end()) {
    cfg_.validate();
    if (design.scheme == Design::Scheme::Pareto && !(design.alpha >= 0.0 && design.alpha <= 1.0)) {
        throw DomainError("Pareto design needs alpha in [0, 1]");
    }
    if (design.scheme == Design::Scheme::Fdsac &&
        !(design.kappa >= 0.0 && design.kappa <= 1.0 && design.mu >= 0.0 && design.mu <= 1.0)) {
        throw DomainError("FDSAC design needs kappa and mu in [0, 1]");
    }
    sc_powers_ = sensing_waterfill(lambdas_, cfg_).powers;
    sc_rate_ = sensing_rate(sc_powers_, lambdas_, cfg_);
}

RateTuple DesignEvaluator::rates(std::span<const double> rho) const {
    RateTuple out;
    out.design = design_.label();
    switch (design_.scheme) {
        case Design::Scheme::SensingCentric:
            out.sr = sc_rate_;
            out.cr = comm_sum_rate(sc_powers_, rho);
            break;
        case Design::Scheme::CommCentric: {
            const PowerAllocation c = comm_waterfill(rho, cfg_.p);
            out.sr = sensing_rate(c.powers, lambdas_, cfg_);
            out.cr = comm_sum_rate(c.powers, rho);
            break;
        }
        case Design::Scheme::Pareto: {
            const ParetoPoint pt = pareto_allocate(rho, lambdas_, cfg_, design_.alpha);
            out.sr = pt.sr;
            out.cr = pt.cr;
            break;
        }
        case Design::Scheme::Fdsac: {
            const FdsacAllocation a = fdsac_allocate(rho, lambdas_, cfg_, design_.kappa, design_.mu);
            const RateTuple r = fdsac_rates(a.comm, a.sense, rho, lambdas_, cfg_, design_.kappa);
            out.sr = r.sr;
            out.cr = r.cr;
            break;
        }
    }
    return out;
}

bool DesignEvaluator::in_outage(std::span<const double> rho, double r0) const {
    if (design_.scheme == Design::Scheme::CommCentric ||
        design_.scheme == Design::Scheme::Pareto) {
        if (comm_sum_rate(sc_powers_, rho) >= r0) return false;
    }
    return rates(rho).cr < r0;
}

std::vector<RatePoint> estimate_rate_curve(const Design& design, const SystemConfig& cfg,
                                           const SensingCorrelation& corr,
                                           std::span<const double> powers, std::uint64_t trials,
                                           std::uint64_t seed, const RunOptions& opts) {
    check_dimensions(cfg, corr);
    require_trials(trials);
    const auto evaluators = evaluators_for(design, cfg, corr, powers);
    const ChannelSampler sampler(cfg, corr.U, seed);
    const std::size_t P = powers.size();

    auto stats = run_trials(trials, 2 * P, opts, [&] {
        return [&, ws = ChannelSampler::Workspace{}, rho = std::vector<double>(cfg.M)](
                   std::uint64_t trial, std::span<double> out) mutable {
            sampler.gains(trial, rho, ws);
            for (std::size_t k = 0; k < P; ++k) {
                const RateTuple r = evaluators[k].rates(rho);
                out[2 * k] = r.cr;
                out[2 * k + 1] = r.sr;
            }
        };
    });

    std::vector<RatePoint> curve(P);
    for (std::size_t k = 0; k < P; ++k) {
        curve[k].p = powers[k];
        curve[k].ecr = mean_estimate(stats[2 * k], seed);
        curve[k].sr = mean_estimate(stats[2 * k + 1], seed);
    }
    return curve;
}

std::vector<McEstimate> estimate_op_curve(const Design& design, const SystemConfig& cfg,
                                          const SensingCorrelation& corr, double r0,
                                          std::span<const double> powers, std::uint64_t trials,
                                          std::uint64_t seed, const RunOptions& opts) {
    return estimate_op_curves(std::span(&design, 1), cfg, corr, r0, powers, trials, seed, opts)
        .front();
}

std::vector<std::vector<McEstimate>> estimate_op_curves(
    std::span<const Design> designs, const SystemConfig& cfg, const SensingCorrelation& corr,
    double r0, std::span<const double> powers, std::uint64_t trials, std::uint64_t seed,
    const RunOptions& opts) {
    check_dimensions(cfg, corr);
    require_trials(trials);
    if (!(r0 >= 0.0)) throw DomainError("outage target R0 must be >= 0");
    std::vector<DesignEvaluator> evaluators;
    for (const Design& d : designs) {
        auto e = evaluators_for(d, cfg, corr, powers);
        evaluators.insert(evaluators.end(), e.begin(), e.end());
    }
    const ChannelSampler sampler(cfg, corr.U, seed);
    const std::size_t P = powers.size();
    const std::size_t W = evaluators.size();

    auto stats = run_trials(trials, W, opts, [&] {
        return [&, ws = ChannelSampler::Workspace{}, rho = std::vector<double>(cfg.M)](
                   std::uint64_t trial, std::span<double> out) mutable {
            sampler.gains(trial, rho, ws);
            for (std::size_t k = 0; k < W; ++k) {
                out[k] = evaluators[k].in_outage(rho, r0) ? 1.0 : 0.0;
            }
        };
    });

    std::vector<std::vector<McEstimate>> curves(designs.size(), std::vector<McEstimate>(P));
    for (std::size_t d = 0; d < designs.size(); ++d) {
        for (std::size_t k = 0; k < P; ++k) curves[d][k] = outage_estimate(stats[d * P + k], seed);
    }
    return curves;
}

McEstimate estimate_ecr(const Design& design, const SystemConfig& cfg,
                        const SensingCorrelation& corr, std::uint64_t trials, std::uint64_t seed,
                        const RunOptions& opts) {
    const double p[] = {cfg.p};
    return estimate_rate_curve(design, cfg, corr, p, trials, seed, opts).front().ecr;
}

McEstimate estimate_avg_sr(const Design& design, const SystemConfig& cfg,
                           const SensingCorrelation& corr, std::uint64_t trials,
                           std::uint64_t seed, const RunOptions& opts) {
    const double p[] = {cfg.p};
    return estimate_rate_curve(design, cfg, corr, p, trials, seed, opts).front().sr;
}

McEstimate estimate_op(const Design& design, const SystemConfig& cfg,
                       const SensingCorrelation& corr, double r0, std::uint64_t trials,
                       std::uint64_t seed, const RunOptions& opts) {
    const double p[] = {cfg.p};
    return estimate_op_curve(design, cfg, corr, r0, p, trials, seed, opts).front();
}

GainTable sample_gain_table(const SystemConfig& cfg, const SensingCorrelation& corr,
                            std::uint64_t trials, std::uint64_t seed, const RunOptions& opts) {
    check_dimensions(cfg, corr);
    require_trials(trials);
    GainTable table;
    table.M = cfg.M;
    table.trials = trials;
    table.seed = seed;
    table.rho.assign(static_cast<std::size_t>(trials) * cfg.M, 0.0);
    const ChannelSampler sampler(cfg, corr.U, seed);
    const std::uint64_t block = std::max<std::uint64_t>(opts.block_size, 1);
    const std::size_t blocks = static_cast<std::size_t>((trials + block - 1) / block);
    parallel_for(blocks, opts, [&](std::size_t b) {
        ChannelSampler::Workspace ws;
        const std::uint64_t end = std::min<std::uint64_t>(trials, (b + 1) * block);
        for (std::uint64_t t = b * block; t < end; ++t) {
            sampler.gains(t, std::span<double>(table.rho.data() + t * cfg.M, cfg.M), ws);
        }
    });
    return table;
}

namespace {

SlopeFit least_squares(std::vector<double> x, std::vector<double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? std::min(1.0, sxy * sxy / (sxx * syy)) : 1.0;
    return fit;
}

void check_grid(std::span<const CurvePoint> curve, const char* who) {
    if (curve.size() < 3) {
        throw DomainError(std::string(who) + ": need at least 3 points (got " +
                          std::to_string(curve.size()) + ")");
    }
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!(curve[i].p > 0.0)) throw DomainError(std::string(who) + ": powers must be > 0");
        if (i > 0 && !(curve[i].p > curve[i - 1].p)) {
            throw DomainError(std::string(who) + ": power grid must be strictly increasing");
        }
    }
}

}  // namespace

SlopeFit fit_diversity_order(std::span<const CurvePoint> op_curve) {
    check_grid(op_curve, "fit_diversity_order");
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& pt : op_curve) {
        if (!(pt.value > 0.0)) {
            throw DomainError(
                "fit_diversity_order: zero outage probability in the fit window; increase the "
                "trial count");
        }
        x.push_back(std::log10(pt.p));
        y.push_back(-std::log10(pt.value));
    }
    SlopeFit fit = least_squares(x, y);
    for (const auto& pt : op_curve) fit.grid.push_back(pt.p);
    return fit;
}

SlopeFit fit_high_snr_slope(std::span<const CurvePoint> rate_curve) {
    check_grid(rate_curve, "fit_high_snr_slope");
    constexpr double kHighSnr = 1000.0 * (1.0 - 1e-12);  // 30 dB
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& pt : rate_curve) {
        if (pt.p < kHighSnr) {
            throw DomainError("fit_high_snr_slope: all points must be at p >= 30 dB");
        }
        x.push_back(std::log2(pt.p));
        y.push_back(pt.value);
    }
    SlopeFit fit = least_squares(x, y);
    for (const auto& pt : rate_curve) fit.grid.push_back(pt.p);
    return fit;
}

std::vector<CurvePoint> diversity_window(std::span<const CurvePoint> op_curve, double lo,
                                         double hi) {
    std::vector<CurvePoint> inside;
    for (const auto& pt : op_curve) {
        if (pt.value >= lo && pt.value <= hi) inside.push_back(pt);
    }
    if (inside.empty()) return inside;
    double top = inside.front().p;
    for (const auto& pt : inside) top = std::max(top, pt.p);
    std::vector<CurvePoint> out;
    for (const auto& pt : inside) {
        if (pt.p >= top / 10.0 * (1.0 - 1e-12)) out.push_back(pt);
    }
    return out;
}

}  // namespace isac
