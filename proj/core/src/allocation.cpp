#include "isac/allocation.hpp"

#include "isac/errors.hpp"
#include "isac/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace isac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::span<const double> lambda_span(const SensingCorrelation& corr) {
    return {corr.lambdas.data(), static_cast<std::size_t>(corr.lambdas.size())};
}

std::vector<double> scaled(std::span<const double> v, double factor) {
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out) x *= factor;
    return out;
}

PowerAllocation zeros(std::size_t M, AllocationTag tag) {
    PowerAllocation out;
    out.powers.assign(M, 0.0);
    out.design = tag;
    return out;
}

// Power for one stream at KKT multiplier eta, solving
//   rho/(1 + rho x) + w c g/(1 + g x) = eta
// for the unique nonnegative root (zero if the marginal gain at x = 0 is
// already below eta).
double stream_power(double rho, double wg, double g, double eta) {
    const double d0 = rho + wg;
    if (d0 <= eta) return 0.0;
    const double A = eta * rho * g;
    const double B = eta * (rho + g) - rho * g - wg * rho;
    const double C = eta - d0;  // < 0
    if (A == 0.0) {
        return B > 0.0 ? -C / B : kInf;
    }
    const double disc = std::sqrt(std::max(B * B - 4.0 * A * C, 0.0));
    return B > 0.0 ? -2.0 * C / (B + disc) : (-B + disc) / (2.0 * A);
}

struct ParetoRates {
    double sr;
    double cr;
};

ParetoRates rates_of(std::span<const double> powers, std::span<const double> rho,
                     std::span<const double> lambdas, const SystemConfig& cfg) {
    return {sensing_rate(powers, lambdas, cfg), comm_sum_rate(powers, rho)};
}

double profile_value(const ParetoRates& r, double alpha) {
    return std::min(r.sr / alpha, r.cr / (1.0 - alpha));
}

ParetoPoint make_point(std::vector<double> powers, double alpha, const ParetoRates& r,
                       std::optional<double> level) {
    ParetoPoint pt;
    pt.alpha = alpha;
    pt.sr = r.sr;
    pt.cr = r.cr;
    if (alpha >= 1.0) {
        pt.R = r.sr;
    } else if (alpha <= 0.0) {
        pt.R = r.cr;
    } else {
        pt.R = profile_value(r, alpha);
    }
    pt.powers.powers = std::move(powers);
    pt.powers.design = {AllocationTag::Kind::Pareto, alpha, 0.0, 0.0};
    pt.powers.water_level = level;
    return pt;
}

}  // namespace

std::string AllocationTag::label() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::SensingCentric: return "SC";
        case Kind::CommCentric: return "CC";
        case Kind::WaterFill: return "WF";
        case Kind::Pareto: os << "Pareto(" << alpha << ")"; break;
        case Kind::FdsacComm: os << "FdsacComm(" << kappa << "," << mu << ")"; break;
        case Kind::FdsacSense: os << "FdsacSense(" << kappa << "," << mu << ")"; break;
    }
    return os.str();
}

double PowerAllocation::total() const {
    return std::accumulate(powers.begin(), powers.end(), 0.0);
}

PowerAllocation waterfill(std::span<const double> gains, double budget) {
    if (!(budget > 0.0) || !std::isfinite(budget)) {
        throw DomainError("waterfill: budget must be positive and finite");
    }
    std::vector<double> inverse;
    inverse.reserve(gains.size());
    for (double g : gains) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw DomainError("waterfill: gains must be nonnegative and finite");
        }
        if (g > 0.0) inverse.push_back(1.0 / g);
    }
    if (inverse.empty()) {
        throw DegenerateInputError("waterfill: all gains are zero");
    }
    std::sort(inverse.begin(), inverse.end());

    // Grow the active set in order of decreasing gain until the next stream
    // would sit above the water level.
    double partial = 0.0;
    double level = 0.0;
    for (std::size_t k = 0; k < inverse.size(); ++k) {
        partial += inverse[k];
        level = (budget + partial) / static_cast<double>(k + 1);
        if (k + 1 == inverse.size() || level <= inverse[k + 1]) break;
    }

    PowerAllocation out;
    out.powers.resize(gains.size());
    for (std::size_t m = 0; m < gains.size(); ++m) {
        out.powers[m] = gains[m] > 0.0 ? std::max(0.0, level - 1.0 / gains[m]) : 0.0;
    }
    out.water_level = level;
    return out;
}

PowerAllocation sensing_waterfill(std::span<const double> lambdas, const SystemConfig& cfg) {
    for (double l : lambdas) {
        if (!(l > 0.0)) throw DomainError("sensing_waterfill: eigenvalues must be positive");
    }
    PowerAllocation out = waterfill(scaled(lambdas, cfg.L), cfg.p);
    out.design.kind = AllocationTag::Kind::SensingCentric;
    return out;
}

PowerAllocation sensing_waterfill(const SensingCorrelation& corr, const SystemConfig& cfg) {
    return sensing_waterfill(lambda_span(corr), cfg);
}

PowerAllocation comm_waterfill(std::span<const double> rho, double budget) {
    PowerAllocation out = waterfill(rho, budget);
    out.design.kind = AllocationTag::Kind::CommCentric;
    return out;
}

FdsacAllocation fdsac_allocate(std::span<const double> rho, std::span<const double> lambdas,
                               const SystemConfig& cfg, double kappa, double mu) {
    if (!(kappa >= 0.0 && kappa <= 1.0) || !(mu >= 0.0 && mu <= 1.0)) {
        throw DomainError("fdsac_allocate: kappa and mu must lie in [0, 1]");
    }
    const AllocationTag comm_tag{AllocationTag::Kind::FdsacComm, 0.0, kappa, mu};
    const AllocationTag sense_tag{AllocationTag::Kind::FdsacSense, 0.0, kappa, mu};
    FdsacAllocation out{zeros(rho.size(), comm_tag), zeros(lambdas.size(), sense_tag)};

    const bool any_rho = std::any_of(rho.begin(), rho.end(), [](double r) { return r > 0.0; });
    if (kappa > 0.0 && mu > 0.0 && any_rho) {
        out.comm = waterfill(scaled(rho, 1.0 / kappa), mu * cfg.p);
        out.comm.design = comm_tag;
    }
    if (kappa < 1.0 && mu < 1.0) {
        out.sense = waterfill(scaled(lambdas, cfg.L / (1.0 - kappa)), (1.0 - mu) * cfg.p);
        out.sense.design = sense_tag;
    }
    return out;
}

namespace detail {

std::vector<double> weighted_sum_powers(std::span<const double> rho,
                                        std::span<const double> lambdas,
                                        const SystemConfig& cfg, double weight,
                                        double* multiplier) {
    const std::size_t M = rho.size();
    const double c = static_cast<double>(cfg.N) / cfg.L;
    std::vector<double> g(M);
    std::vector<double> wg(M);
    double eta_hi = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        g[m] = cfg.L * lambdas[m];
        wg[m] = weight * c * g[m];
        eta_hi = std::max(eta_hi, rho[m] + wg[m]);
    }
    std::vector<double> x(M, 0.0);
    if (!(eta_hi > 0.0)) {
        throw DegenerateInputError("weighted_sum_powers: objective has no positive gain");
    }
    auto total_at = [&](double eta) {
        double sum = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            x[m] = stream_power(rho[m], wg[m], g[m], eta);
            sum += x[m];
        }
        return sum;
    };

    double eta_lo = eta_hi;
    for (int i = 0; i < 2100 && total_at(eta_lo) < cfg.p; ++i) eta_lo *= 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (eta_lo + eta_hi);
        if (mid <= eta_lo || mid >= eta_hi) break;
        if (total_at(mid) > cfg.p) {
            eta_lo = mid;
        } else {
            eta_hi = mid;
        }
        if (eta_hi - eta_lo <= 1e-15 * eta_hi) break;
    }
    const double eta = 0.5 * (eta_lo + eta_hi);
    const double sum = total_at(eta);
    if (sum > 0.0) {
        for (double& v : x) v *= cfg.p / sum;
    }
    if (multiplier != nullptr) *multiplier = eta;
    return x;
}

std::vector<double> project_to_simplex(std::span<const double> v, double budget) {
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cumulative += u[k];
        const double t = (cumulative - budget) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) theta = t;
    }
    std::vector<double> out(v.size());
    for (std::size_t m = 0; m < v.size(); ++m) out[m] = std::max(v[m] - theta, 0.0);
    return out;
}

ParetoPoint pareto_subgradient(std::span<const double> rho, std::span<const double> lambdas,
                               const SystemConfig& cfg, double alpha, int max_iter) {
    const std::size_t M = rho.size();
    const double c = static_cast<double>(cfg.N) / cfg.L;
    const double ln2 = std::log(2.0);
    std::vector<double> x(M, cfg.p / static_cast<double>(M));
    std::vector<double> best = x;
    double best_value = profile_value(rates_of(x, rho, lambdas, cfg), alpha);
    double value_at_window_start = best_value;
    std::vector<double> grad(M);
    for (int t = 0; t < max_iter; ++t) {
        const ParetoRates r = rates_of(x, rho, lambdas, cfg);
        const bool sensing_binds = r.sr / alpha <= r.cr / (1.0 - alpha);
        double norm2 = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const double g = cfg.L * lambdas[m];
            grad[m] = sensing_binds ? c * g / ((1.0 + g * x[m]) * ln2 * alpha)
                                    : rho[m] / ((1.0 + rho[m] * x[m]) * ln2 * (1.0 - alpha));
            norm2 += grad[m] * grad[m];
        }
        if (!(norm2 > 0.0)) break;
        const double step = 0.5 * cfg.p / std::sqrt(static_cast<double>(t) + 1.0) / std::sqrt(norm2);
        for (std::size_t m = 0; m < M; ++m) x[m] += step * grad[m];
        x = project_to_simplex(x, cfg.p);
        const double value = profile_value(rates_of(x, rho, lambdas, cfg), alpha);
        if (value > best_value) {
            best_value = value;
            best = x;
        }
        if ((t + 1) % 1000 == 0) {
            if (best_value - value_at_window_start <= 1e-9 * std::max(1.0, best_value) && t > 2000) {
                break;
            }
            value_at_window_start = best_value;
        }
    }
    const ParetoRates r = rates_of(best, rho, lambdas, cfg);
    if (!std::isfinite(r.sr) || !std::isfinite(r.cr)) {
        throw ConvergenceError("pareto_allocate: subgradient fallback produced non-finite rates",
                               best, r.sr, r.cr);
    }
    return make_point(best, alpha, r, std::nullopt);
}

}  // namespace detail

ParetoPoint pareto_allocate(std::span<const double> rho, std::span<const double> lambdas,
                            const SystemConfig& cfg, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw DomainError("pareto_allocate: alpha must lie in [0, 1]");
    }
    if (rho.size() != lambdas.size()) {
        throw DomainError("pareto_allocate: rho and lambdas differ in length");
    }

    if (alpha >= 1.0) {
        PowerAllocation s = sensing_waterfill(lambdas, cfg);
        const ParetoRates r = rates_of(s.powers, rho, lambdas, cfg);
        return make_point(std::move(s.powers), 1.0, r, s.water_level);
    }
    const bool any_rho = std::any_of(rho.begin(), rho.end(), [](double v) { return v > 0.0; });
    if (alpha <= 0.0) {
        if (!any_rho) {
            throw DegenerateInputError("pareto_allocate: alpha = 0 with all rho zero");
        }
        PowerAllocation cc = comm_waterfill(rho, cfg.p);
        const ParetoRates r = rates_of(cc.powers, rho, lambdas, cfg);
        return make_point(std::move(cc.powers), 0.0, r, cc.water_level);
    }

    // h(w) = (1-alpha) R_s - alpha R_c is nondecreasing along the weighted-sum
    // path w -> argmax R_c + w R_s. Its root balances both profile
    // constraints; if it has no root one endpoint is already optimal.
    const double beta = 1.0 - alpha;
    auto balance = [&](const ParetoRates& r) { return beta * r.sr - alpha * r.cr; };

    if (any_rho) {
        PowerAllocation cc = comm_waterfill(rho, cfg.p);
        const ParetoRates r = rates_of(cc.powers, rho, lambdas, cfg);
        if (balance(r) >= 0.0) return make_point(std::move(cc.powers), alpha, r, cc.water_level);
    }
    {
        PowerAllocation s = sensing_waterfill(lambdas, cfg);
        const ParetoRates r = rates_of(s.powers, rho, lambdas, cfg);
        if (balance(r) <= 0.0) return make_point(std::move(s.powers), alpha, r, s.water_level);
    }

    double w_lo = 0.0;
    double w_hi = 1.0;
    double eta = 0.0;
    std::vector<double> x_hi = detail::weighted_sum_powers(rho, lambdas, cfg, w_hi, &eta);
    ParetoRates r_hi = rates_of(x_hi, rho, lambdas, cfg);
    while (balance(r_hi) < 0.0) {
        w_lo = w_hi;
        w_hi *= 4.0;
        if (w_hi > 1e15) {
            return detail::pareto_subgradient(rho, lambdas, cfg, alpha);
        }
        x_hi = detail::weighted_sum_powers(rho, lambdas, cfg, w_hi, &eta);
        r_hi = rates_of(x_hi, rho, lambdas, cfg);
    }
    double eta_hi = eta;
    std::vector<double> x_lo = detail::weighted_sum_powers(rho, lambdas, cfg, w_lo, &eta);
    ParetoRates r_lo = rates_of(x_lo, rho, lambdas, cfg);
    double eta_lo = eta;

    bool converged = false;
    for (int iter = 0; iter < 300; ++iter) {
        const double w_mid = 0.5 * (w_lo + w_hi);
        std::vector<double> x_mid = detail::weighted_sum_powers(rho, lambdas, cfg, w_mid, &eta);
        const ParetoRates r_mid = rates_of(x_mid, rho, lambdas, cfg);
        if (balance(r_mid) < 0.0) {
            w_lo = w_mid;
            x_lo = std::move(x_mid);
            r_lo = r_mid;
            eta_lo = eta;
        } else {
            w_hi = w_mid;
            x_hi = std::move(x_mid);
            r_hi = r_mid;
            eta_hi = eta;
        }
        const double gap = std::abs(profile_value(r_hi, alpha) - profile_value(r_lo, alpha));
        if (gap <= 1e-10 || w_hi - w_lo <= 1e-14 * w_hi) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        return detail::pareto_subgradient(rho, lambdas, cfg, alpha);
    }
    if (profile_value(r_lo, alpha) >= profile_value(r_hi, alpha)) {
        return make_point(std::move(x_lo), alpha, r_lo, eta_lo);
    }
    return make_point(std::move(x_hi), alpha, r_hi, eta_hi);
}

ParetoPoint pareto_allocate(std::span<const double> rho, const SensingCorrelation& corr,
                            const SystemConfig& cfg, double alpha) {
    return pareto_allocate(rho, lambda_span(corr), cfg, alpha);
}

}  // namespace isac
