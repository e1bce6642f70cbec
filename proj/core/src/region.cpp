#include "isac/region.hpp"

#include "isac/allocation.hpp"
#include "isac/errors.hpp"
#include "isac/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isac {
namespace {

std::span<const double> lambda_span(const SensingCorrelation& corr) {
    return {corr.lambdas.data(), static_cast<std::size_t>(corr.lambdas.size())};
}

void require_unit_grid(std::span<const double> grid, const char* name, bool need_endpoints) {
    if (grid.empty()) throw DomainError(std::string(name) + " grid is empty");
    bool has0 = false;
    bool has1 = false;
    for (double v : grid) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError(std::string(name) + " grid values must lie in [0, 1]");
        }
        has0 = has0 || v == 0.0;
        has1 = has1 || v == 1.0;
    }
    if (need_endpoints && !(has0 && has1)) {
        throw DomainError(std::string(name) + " grid must include 0 and 1");
    }
}

void sort_descending_sr(std::vector<RegionPoint>& pts) {
    std::stable_sort(pts.begin(), pts.end(), [](const RegionPoint& a, const RegionPoint& b) {
        if (a.sr != b.sr) return a.sr > b.sr;
        if (a.cr != b.cr) return a.cr < b.cr;
        return a.alpha > b.alpha;
    });
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

double std_err(const RunningStats& s) {
    return s.n > 0 ? std::sqrt(s.variance() / static_cast<double>(s.n)) : 0.0;
}

void require_table(const GainTable& table, const SystemConfig& cfg) {
    cfg.validate();
    if (table.M != cfg.M) throw DomainError("gain table width does not match M");
    if (table.trials < 100) throw DomainError("region estimates need at least 100 trials");
}

struct Averages {
    RunningStats sr;
    RunningStats cr;

    RegionPoint point() const {
        RegionPoint pt;
        pt.sr = sr.mean;
        pt.cr = cr.mean;
        pt.sr_std_err = std_err(sr);
        pt.cr_std_err = std_err(cr);
        return pt;
    }
};

// Averages the rates of a per-draw power policy, in trial order.
template <class Policy>
Averages average(const GainTable& table, Policy&& policy, std::span<const double> lambdas,
                 const SystemConfig& cfg) {
    Averages avg;
    for (std::uint64_t t = 0; t < table.trials; ++t) {
        const auto rho = table.row(t);
        const std::vector<double> x = policy(rho);
        avg.sr.add(sensing_rate(x, lambdas, cfg));
        avg.cr.add(comm_sum_rate(x, rho));
    }
    return avg;
}

// Rate profile on the averaged rates. Every weight w gives a point on the
// boundary of the averaged region (the weighted sum separates over draws);
// w is tuned by Illinois false position in log w until the averages sit on
// the alpha ray.
Averages ergodic_profile(const GainTable& table, std::span<const double> lambdas,
                         const SystemConfig& cfg, double alpha, const std::vector<double>& sc) {
    auto at = [&](double log_w) {
        const double w = std::exp(log_w);
        return average(table, [&](std::span<const double> rho) {
            return detail::weighted_sum_powers(rho, lambdas, cfg, w);
        }, lambdas, cfg);
    };
    auto balance = [&](const Averages& a) { return (1.0 - alpha) * a.sr.mean - alpha * a.cr.mean; };

    const Averages cc = average(table, [&](std::span<const double> rho) {
        return comm_waterfill(rho, cfg.p).powers;
    }, lambdas, cfg);
    if (balance(cc) >= 0.0) return cc;
    const Averages sens = average(table, [&](std::span<const double>) { return sc; }, lambdas, cfg);
    if (balance(sens) <= 0.0) return sens;

    double u_lo = 0.0;
    double u_hi = 0.0;
    Averages a_lo = at(0.0);
    double b_lo = balance(a_lo);
    Averages a_hi = a_lo;
    double b_hi = b_lo;
    while (b_lo > 0.0) {
        if (u_lo < -60.0) return a_lo;
        u_hi = u_lo;
        a_hi = a_lo;
        b_hi = b_lo;
        u_lo -= 3.0;
        a_lo = at(u_lo);
        b_lo = balance(a_lo);
    }
    while (b_hi < 0.0) {
        if (u_hi > 60.0) return a_hi;
        u_lo = u_hi;
        a_lo = a_hi;
        b_lo = b_hi;
        u_hi += 3.0;
        a_hi = at(u_hi);
        b_hi = balance(a_hi);
    }
    const double scale = cc.cr.mean + sens.sr.mean;
    int side = 0;
    for (int iter = 0; iter < 100; ++iter) {
        if (u_hi - u_lo <= 1e-12 || b_hi - b_lo <= 0.0) break;
        const double u = u_lo - b_lo * (u_hi - u_lo) / (b_hi - b_lo);
        const Averages a = at(u);
        const double b = balance(a);
        if (std::abs(b) <= 1e-10 * scale) return a;
        if (b < 0.0) {
            u_lo = u;
            a_lo = a;
            b_lo = b;
            if (side == -1) b_hi *= 0.5;
            side = -1;
        } else {
            u_hi = u;
            a_hi = a;
            b_hi = b;
            if (side == 1) b_lo *= 0.5;
            side = 1;
        }
    }
    return std::abs(balance(a_lo)) <= std::abs(balance(a_hi)) ? a_lo : a_hi;
}

}  // namespace

std::string to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::Isac: return "ISAC";
        case RegionLabel::Fdsac: return "FDSAC";
        case RegionLabel::AuxC1: return "C1";
        case RegionLabel::AuxC2: return "C2";
    }
    return "?";
}

bool RegionBoundary::is_monotone(double tol) const {
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].sr > points[i - 1].sr + tol) return false;
        if (points[i].cr < points[i - 1].cr - tol) return false;
    }
    return true;
}

std::string to_string(IsacProfile profile) {
    return profile == IsacProfile::Ergodic ? "ergodic" : "per_realization";
}

RegionBoundary isac_boundary(const SystemConfig& cfg, const SensingCorrelation& corr,
                             std::span<const double> alphas, std::uint64_t trials,
                             std::uint64_t seed, const RunOptions& opts, IsacProfile profile) {
    require_unit_grid(alphas, "alpha", true);
    const GainTable table = sample_gain_table(cfg, corr, trials, seed, opts);
    return isac_boundary(table, cfg, corr, alphas, opts, profile);
}

RegionBoundary isac_boundary(const GainTable& table, const SystemConfig& cfg,
                             const SensingCorrelation& corr, std::span<const double> alphas,
                             const RunOptions& opts, IsacProfile profile) {
    require_unit_grid(alphas, "alpha", true);
    require_table(table, cfg);
    const auto lambdas = lambda_span(corr);
    const std::vector<double> sc = sensing_waterfill(lambdas, cfg).powers;

    std::vector<RegionPoint> points(alphas.size());
    parallel_for(alphas.size(), opts, [&](std::size_t i) {
        const double alpha = alphas[i];
        try {
            Averages avg;
            if (profile == IsacProfile::PerRealization || alpha == 0.0 || alpha == 1.0) {
                avg = average(table, [&](std::span<const double> rho) {
                    if (alpha == 1.0) return sc;
                    if (alpha == 0.0) return comm_waterfill(rho, cfg.p).powers;
                    return pareto_allocate(rho, lambdas, cfg, alpha).powers.powers;
                }, lambdas, cfg);
            } else {
                avg = ergodic_profile(table, lambdas, cfg, alpha, sc);
            }
            points[i] = avg.point();
            points[i].alpha = alpha;
        } catch (const ConvergenceError& e) {
            std::ostringstream os;
            os << "ISAC boundary: Pareto solver failed at alpha = " << alpha << ": " << e.what();
            throw ConvergenceError(os.str(), e.best_powers(), e.sr_residual(), e.cr_residual());
        }
    });
    RegionBoundary out;
    out.label = RegionLabel::Isac;
    out.points = std::move(points);
    sort_descending_sr(out.points);
    return out;
}

std::vector<double> isac_alpha_grid(const GainTable& table, const SystemConfig& cfg,
                                    const SensingCorrelation& corr, std::size_t count) {
    if (count < 2) throw DomainError("alpha grid needs at least 2 points");
    require_table(table, cfg);
    const auto lambdas = lambda_span(corr);
    const std::vector<double> sc = sensing_waterfill(lambdas, cfg).powers;
    const RegionPoint s = average(table, [&](std::span<const double>) { return sc; },
                                  lambdas, cfg).point();
    const RegionPoint c = average(table, [&](std::span<const double> rho) {
        return comm_waterfill(rho, cfg.p).powers;
    }, lambdas, cfg).point();
    const double a_hi = s.sr / (s.sr + s.cr);
    const double a_lo = c.sr / (c.sr + c.cr);
    std::vector<double> grid{0.0};
    const std::size_t inner = count - 2;
    for (std::size_t i = 0; i < inner; ++i) {
        const double t = inner == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(inner - 1);
        grid.push_back(a_lo + t * (a_hi - a_lo));
    }
    grid.push_back(1.0);
    return grid;
}

FdsacRegion fdsac_region(const SystemConfig& cfg, const SensingCorrelation& corr,
                         std::span<const double> kappas, std::span<const double> mus,
                         std::uint64_t trials, std::uint64_t seed, const RunOptions& opts) {
    require_unit_grid(kappas, "kappa", true);
    require_unit_grid(mus, "mu", true);
    const GainTable table = sample_gain_table(cfg, corr, trials, seed, opts);
    return fdsac_region(table, cfg, corr, kappas, mus, opts);
}

FdsacRegion fdsac_region(const GainTable& table, const SystemConfig& cfg,
                         const SensingCorrelation& corr, std::span<const double> kappas,
                         std::span<const double> mus, const RunOptions& opts) {
    require_unit_grid(kappas, "kappa", true);
    require_unit_grid(mus, "mu", true);
    require_table(table, cfg);
    const auto lambdas = lambda_span(corr);
    FdsacRegion out;
    out.grid.resize(kappas.size() * mus.size());
    parallel_for(out.grid.size(), opts, [&](std::size_t i) {
        const double kappa = kappas[i / mus.size()];
        const double mu = mus[i % mus.size()];
        // The sensing share does not depend on the channel.
        const FdsacAllocation fixed = fdsac_allocate(table.row(0), lambdas, cfg, kappa, mu);
        RunningStats cr;
        for (std::uint64_t t = 0; t < table.trials; ++t) {
            const auto rho = table.row(t);
            const FdsacAllocation a = fdsac_allocate(rho, lambdas, cfg, kappa, mu);
            cr.add(fdsac_rates(a.comm, a.sense, rho, lambdas, cfg, kappa).cr);
        }
        RegionPoint pt;
        pt.sr = fdsac_rates(fixed.comm, fixed.sense, table.row(0), lambdas, cfg, kappa).sr;
        pt.cr = cr.mean;
        pt.cr_std_err = std_err(cr);
        pt.kappa = kappa;
        pt.mu = mu;
        out.grid[i] = pt;
    });
    out.boundary.label = RegionLabel::Fdsac;
    out.boundary.points = pareto_front(out.grid);
    return out;
}

RegionBoundary fdsac_boundary(const SystemConfig& cfg, const SensingCorrelation& corr,
                              std::span<const double> kappas, std::span<const double> mus,
                              std::uint64_t trials, std::uint64_t seed, const RunOptions& opts) {
    return fdsac_region(cfg, corr, kappas, mus, trials, seed, opts).boundary;
}

std::vector<RegionPoint> pareto_front(std::span<const RegionPoint> points) {
    std::vector<RegionPoint> sorted(points.begin(), points.end());
    // Descending SR; among equal SR the largest CR first so ties collapse.
    std::stable_sort(sorted.begin(), sorted.end(), [](const RegionPoint& a, const RegionPoint& b) {
        if (a.sr != b.sr) return a.sr > b.sr;
        return a.cr > b.cr;
    });
    std::vector<RegionPoint> front;
    double best_cr = -std::numeric_limits<double>::infinity();
    for (const auto& pt : sorted) {
        if (pt.cr > best_cr) {
            front.push_back(pt);
            best_cr = pt.cr;
        }
    }
    return front;
}

ContainmentReport check_containment(std::span<const RegionPoint> inner,
                                    const RegionBoundary& outer) {
    if (outer.points.empty()) throw DomainError("check_containment: outer boundary is empty");
    const auto& b = outer.points;  // descending SR
    ContainmentReport report;
    for (const RegionPoint& q : inner) {
        PointMargin pm;
        pm.point = q;
        double bound_se = 0.0;
        if (q.sr >= b.front().sr) {
            pm.cr_bound = b.front().cr;
            bound_se = b.front().cr_std_err;
            if (q.sr > b.front().sr) {
                pm.clamped = true;
                const double sr_tol = 3.0 * combined(q.sr_std_err, b.front().sr_std_err) + 1e-6;
                if (q.sr - b.front().sr > sr_tol) {
                    pm.violation = true;
                    pm.note = "SR exceeds the outer boundary's maximum SR";
                } else {
                    pm.note = "SR above outer span within tolerance; clamped to endpoint";
                }
            }
        } else if (q.sr <= b.back().sr) {
            pm.cr_bound = b.back().cr;
            bound_se = b.back().cr_std_err;
            pm.clamped = q.sr < b.back().sr;
            if (pm.clamped) pm.note = "SR below outer span; clamped to endpoint";
        } else {
            std::size_t j = 0;
            while (j + 1 < b.size() && b[j + 1].sr > q.sr) ++j;
            const RegionPoint& hi = b[j];      // sr > q.sr
            const RegionPoint& lo = b[j + 1];  // sr <= q.sr
            const double t = (hi.sr - q.sr) / (hi.sr - lo.sr);
            pm.cr_bound = hi.cr + t * (lo.cr - hi.cr);
            bound_se = hi.cr_std_err + t * (lo.cr_std_err - hi.cr_std_err);
        }
        pm.margin = pm.cr_bound - q.cr;
        pm.tolerance = 3.0 * combined(q.cr_std_err, bound_se) + 1e-6;
        if (pm.margin < -pm.tolerance) {
            pm.violation = true;
            if (pm.note.empty()) pm.note = "CR exceeds the interpolated outer boundary";
        }
        report.min_margin = std::min(report.min_margin, pm.margin);
        if (pm.violation) ++report.violations;
        report.margins.push_back(std::move(pm));
    }
    return report;
}

ContainmentReport check_containment(const RegionBoundary& inner, const RegionBoundary& outer) {
    return check_containment(std::span<const RegionPoint>(inner.points), outer);
}

SandwichReport verify_sandwich(const SystemConfig& cfg, const SensingCorrelation& corr,
                               std::span<const double> epsilons, std::uint64_t trials,
                               std::uint64_t seed, std::span<const RegionPoint> fdsac_points,
                               const RegionBoundary& isac, const RunOptions& opts) {
    require_unit_grid(epsilons, "epsilon", false);
    const GainTable table = sample_gain_table(cfg, corr, trials, seed, opts);
    return verify_sandwich(table, cfg, corr, epsilons, fdsac_points, isac, opts);
}

SandwichReport verify_sandwich(const GainTable& table, const SystemConfig& cfg,
                               const SensingCorrelation& corr, std::span<const double> epsilons,
                               std::span<const RegionPoint> fdsac_points,
                               const RegionBoundary& isac, const RunOptions& opts) {
    require_unit_grid(epsilons, "epsilon", false);
    require_table(table, cfg);
    const auto lambdas = lambda_span(corr);
    const std::size_t E = epsilons.size();
    const std::size_t M = static_cast<std::size_t>(cfg.M);
    const std::uint64_t checked = std::min<std::uint64_t>(table.trials, 1000);

    SandwichReport report;
    report.c1.label = RegionLabel::AuxC1;
    report.c2.label = RegionLabel::AuxC2;
    report.c1.points.resize(E);
    report.c2.points.resize(E);
    std::vector<double> excess(E, 0.0);
    parallel_for(E, opts, [&](std::size_t e) {
        const double eps = epsilons[e];
        // Sensing share k is channel independent; u follows the channel.
        std::vector<double> k(M, 0.0);
        if (eps < 1.0) k = sensing_waterfill(lambdas, cfg.with_power((1.0 - eps) * cfg.p)).powers;
        RunningStats cr1;
        Averages two;
        std::vector<double> total(M);
        for (std::uint64_t t = 0; t < table.trials; ++t) {
            const auto rho = table.row(t);
            std::vector<double> u(M, 0.0);
            if (eps > 0.0) u = comm_waterfill(rho, eps * cfg.p).powers;
            double sum = 0.0;
            for (std::size_t m = 0; m < M; ++m) {
                total[m] = k[m] + u[m];
                sum += total[m];
            }
            if (t < checked) excess[e] = std::max(excess[e], sum - cfg.p);
            cr1.add(comm_sum_rate(u, rho));
            two.sr.add(sensing_rate(total, lambdas, cfg));
            two.cr.add(comm_sum_rate(total, rho));
        }
        RegionPoint p1;
        p1.epsilon = eps;
        p1.sr = sensing_rate(k, lambdas, cfg);
        p1.cr = cr1.mean;
        p1.cr_std_err = std_err(cr1);
        RegionPoint p2 = two.point();
        p2.epsilon = eps;
        report.c1.points[e] = p1;
        report.c2.points[e] = p2;
    });
    for (std::size_t e = 0; e < E; ++e) {
        const RegionPoint& p1 = report.c1.points[e];
        const RegionPoint& p2 = report.c2.points[e];
        if (p2.sr < p1.sr - 1e-12 || p2.cr < p1.cr - 1e-12) report.c2_dominates_c1 = false;
        report.max_power_excess = std::max(report.max_power_excess, excess[e]);
    }
    sort_descending_sr(report.c1.points);
    sort_descending_sr(report.c2.points);

    report.fdsac_in_c1 = check_containment(fdsac_points, report.c1);
    report.c1_in_c2 = check_containment(report.c1, report.c2);
    report.c2_in_isac = check_containment(report.c2, isac);
    return report;
}

}  // namespace isac
