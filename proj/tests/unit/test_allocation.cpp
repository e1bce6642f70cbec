#include "isac/allocation.hpp"
#include "isac/errors.hpp"
#include "isac/rates.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace isac;

namespace {

const std::vector<double> kLambdas{1.0, 0.1, 0.05, 0.01};

double objective(std::span<const double> g, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) s += std::log2(1.0 + g[m] * x[m]);
    return s;
}

double sum(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

// Water-level grid oracle: scan 1e5 levels, bracket the budget, and
// interpolate inside the bracket (the spent power is piecewise linear in the
// level). Returns the objective at the interpolated level.
double grid_oracle(std::span<const double> g, double budget) {
    double min_inv = std::numeric_limits<double>::infinity();
    for (double v : g) {
        if (v > 0.0) min_inv = std::min(min_inv, 1.0 / v);
    }
    auto spent = [&](double level) {
        double s = 0.0;
        for (double v : g) {
            if (v > 0.0) s += std::max(0.0, level - 1.0 / v);
        }
        return s;
    };
    const int n = 100000;
    const double lo = min_inv;
    const double hi = min_inv + budget;
    double prev_level = lo;
    double prev_spent = 0.0;
    double level = hi;
    for (int i = 1; i <= n; ++i) {
        const double l = lo + (hi - lo) * i / n;
        const double s = spent(l);
        if (s >= budget) {
            level = prev_level + (l - prev_level) * (budget - prev_spent) / (s - prev_spent);
            break;
        }
        prev_level = l;
        prev_spent = s;
    }
    std::vector<double> x(g.size());
    for (std::size_t m = 0; m < g.size(); ++m) {
        x[m] = g[m] > 0.0 ? std::max(0.0, level - 1.0 / g[m]) : 0.0;
    }
    return objective(g, x);
}

struct Instance {
    std::vector<double> gains;
    double budget;
};

Instance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(1, 8);
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    std::bernoulli_distribution zero(0.1);
    Instance in;
    in.gains.resize(dim(rng));
    for (double& g : in.gains) g = zero(rng) ? 0.0 : std::pow(10.0, expo(rng));
    if (std::all_of(in.gains.begin(), in.gains.end(), [](double g) { return g == 0.0; })) {
        in.gains[0] = 1.0;
    }
    in.budget = std::pow(10.0, expo(rng));
    return in;
}

// max min(R_s/alpha, R_c/(1-alpha)) for M = 2 by a 200x200 simplex grid plus
// a dense scan of the budget line (both rates increase in every power, so
// the optimum spends the whole budget).
double pareto_oracle(std::span<const double> rho, std::span<const double> lambdas,
                     const SystemConfig& cfg, double alpha) {
    auto profile = [&](double x1, double x2) {
        const double x[] = {x1, x2};
        const double sr = sensing_rate(x, lambdas, cfg);
        const double cr = comm_sum_rate(x, rho);
        if (alpha == 0.0) return cr;
        if (alpha == 1.0) return sr;
        return std::min(sr / alpha, cr / (1.0 - alpha));
    };
    double best = 0.0;
    for (int i = 0; i <= 200; ++i) {
        for (int j = 0; i + j <= 200; ++j) {
            best = std::max(best, profile(cfg.p * i / 200.0, cfg.p * j / 200.0));
        }
    }
    for (int i = 0; i <= 100000; ++i) {
        const double x1 = cfg.p * i / 100000.0;
        best = std::max(best, profile(x1, cfg.p - x1));
    }
    return best;
}

}  // namespace

TEST(Waterfill, AllActiveClosedForm) {
    const std::vector<double> g{30.0, 3.0, 1.5, 0.3};
    const double p = 100.0;
    const auto a = waterfill(g, p);
    double mean_inv = 0.0;
    for (double v : g) mean_inv += 1.0 / v / 4.0;
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(a.powers[m], p / 4 + mean_inv - 1.0 / g[m], 1e-12);
}

TEST(Waterfill, SmallCases) {
    const std::vector<double> ones{1.0, 1.0, 1.0, 1.0};
    for (double x : waterfill(ones, 4.0).powers) EXPECT_NEAR(x, 1.0, 1e-15);

    const std::vector<double> g{30.0, 3.0};
    const auto a = waterfill(g, 1.0);
    EXPECT_NEAR(a.powers[0], 0.65, 1e-14);
    EXPECT_NEAR(a.powers[1], 0.35, 1e-14);
    ASSERT_TRUE(a.water_level.has_value());
    EXPECT_NEAR(*a.water_level, 0.68333333333333333, 1e-14);
    // Grid search on the budget line agrees.
    double best = 0.0, arg = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double x[] = {i / 10000.0, 1.0 - i / 10000.0};
        if (objective(g, x) > best) {
            best = objective(g, x);
            arg = x[0];
        }
    }
    EXPECT_NEAR(arg, 0.65, 1e-4);
}

TEST(Waterfill, Errors) {
    const std::vector<double> zeros{0.0, 0.0};
    EXPECT_THROW(waterfill(zeros, 1.0), DegenerateInputError);
    const std::vector<double> g{1.0};
    EXPECT_THROW(waterfill(g, 0.0), DomainError);
    const std::vector<double> neg{1.0, -1.0};
    EXPECT_THROW(waterfill(neg, 1.0), DomainError);
}

TEST(Waterfill, KktAndGridOracleOnRandomInstances) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const Instance in = random_instance(rng);
        const auto a = waterfill(in.gains, in.budget);
        const double w = 1.0 / *a.water_level;
        for (std::size_t m = 0; m < in.gains.size(); ++m) {
            const double g = in.gains[m];
            if (a.powers[m] > 0.0) {
                EXPECT_LE(std::abs(g / (1.0 + g * a.powers[m]) - w), 1e-8 * w) << trial;
            } else {
                EXPECT_LE(g, w + 1e-8) << trial;
            }
        }
        EXPECT_NEAR(sum(a.powers), in.budget, 1e-9 * std::max(1.0, in.budget)) << trial;
        EXPECT_NEAR(objective(in.gains, a.powers), grid_oracle(in.gains, in.budget), 1e-6)
            << trial;
    }
}

TEST(Waterfill, ObjectiveIncreasesWithBudget) {
    const std::vector<double> g{5.0, 0.7, 0.02};
    double prev = 0.0;
    for (double p = 0.01; p < 1000.0; p *= 1.3) {
        const double v = objective(g, waterfill(g, p).powers);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(SensingWaterfill, SectionFiveConfig) {
    SystemConfig cfg;
    cfg.p = 10.0;
    const auto s = sensing_waterfill(kLambdas, cfg);
    for (double x : s.powers) EXPECT_GT(x, 0.0);
    EXPECT_NEAR(sum(s.powers), 10.0, 1e-12);
    EXPECT_NEAR(s.powers[0] - s.powers[3], 3.3, 1e-12);
    EXPECT_EQ(s.design.kind, AllocationTag::Kind::SensingCentric);
}

TEST(SensingWaterfill, SingleStreamAndLowPower) {
    SystemConfig cfg;
    cfg.M = 1;
    cfg.K = 1;
    cfg.L = 1;
    cfg.p = 3.0;
    const double one[] = {1.0};
    EXPECT_NEAR(sensing_waterfill(one, cfg).powers[0], 3.0, 1e-15);

    SystemConfig two;
    two.M = 2;
    two.p = 1e-3;
    const double spread[] = {1.0, 0.01};
    const auto s = sensing_waterfill(spread, two);
    EXPECT_GT(s.powers[0], 0.0);
    EXPECT_EQ(s.powers[1], 0.0);
}

TEST(CommWaterfill, Examples) {
    const double a[] = {1.0, 1.0};
    EXPECT_NEAR(comm_waterfill(a, 2.0).powers[0], 1.0, 1e-15);
    const double b[] = {4.0, 1.0};
    const auto cb = comm_waterfill(b, 0.5);
    EXPECT_NEAR(cb.powers[0], 0.5, 1e-15);
    EXPECT_EQ(cb.powers[1], 0.0);
    const double c[] = {2.0, 1.0};
    const auto cc = comm_waterfill(c, 10.0);
    EXPECT_NEAR(cc.powers[0], 5.25, 1e-13);
    EXPECT_NEAR(cc.powers[1], 4.75, 1e-13);
    const double z[] = {0.0, 0.0};
    EXPECT_THROW(comm_waterfill(z, 1.0), DegenerateInputError);
}

TEST(Fdsac, HalfSplitUsesScaledGains) {
    SystemConfig cfg;
    cfg.p = 8.0;
    const double rho[] = {0.3, 2.0, 1.1, 0.05};
    const auto f = fdsac_allocate(rho, kLambdas, cfg, 0.5, 0.5);
    const double doubled[] = {0.6, 4.0, 2.2, 0.1};
    const auto expect = waterfill(doubled, 4.0);
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(f.comm.powers[m], expect.powers[m], 1e-14);
    std::vector<double> sense_gains;
    for (double l : kLambdas) sense_gains.push_back(60.0 * l);
    const auto se = waterfill(sense_gains, 4.0);
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(f.sense.powers[m], se.powers[m], 1e-14);
}

TEST(Fdsac, DegenerateSplits) {
    SystemConfig cfg;
    const double rho[] = {0.3, 2.0, 1.1, 0.05};
    const auto all_comm = fdsac_allocate(rho, kLambdas, cfg, 1.0, 1.0);
    EXPECT_EQ(sum(all_comm.sense.powers), 0.0);
    const auto r = fdsac_rates(all_comm.comm, all_comm.sense, rho, kLambdas, cfg, 1.0);
    EXPECT_EQ(r.sr, 0.0);
    const auto no_power = fdsac_allocate(rho, kLambdas, cfg, 0.5, 0.0);
    EXPECT_EQ(sum(no_power.comm.powers), 0.0);
    EXPECT_THROW(fdsac_allocate(rho, kLambdas, cfg, 1.5, 0.5), DomainError);
}

TEST(Pareto, EndpointsAreTheWaterfillingDesigns) {
    SystemConfig cfg;
    std::mt19937_64 rng(7);
    std::gamma_distribution<double> gamma(1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        cfg.p = std::pow(10.0, std::uniform_real_distribution<double>(-1.0, 3.0)(rng));
        std::vector<double> rho(4);
        for (double& r : rho) r = gamma(rng);
        const auto s1 = pareto_allocate(rho, kLambdas, cfg, 1.0);
        const auto sc = sensing_waterfill(kLambdas, cfg);
        const auto s0 = pareto_allocate(rho, kLambdas, cfg, 0.0);
        const auto cc = comm_waterfill(rho, cfg.p);
        for (int m = 0; m < 4; ++m) {
            EXPECT_NEAR(s1.powers.powers[m], sc.powers[m], 1e-6);
            EXPECT_NEAR(s0.powers.powers[m], cc.powers[m], 1e-6);
        }
    }
}

TEST(Pareto, ZeroGainStreamGetsNoPowerAtAlphaZero) {
    SystemConfig cfg;
    const double rho[] = {1.0, 0.0, 0.5, 2.0};
    const auto pt = pareto_allocate(rho, kLambdas, cfg, 0.0);
    EXPECT_EQ(pt.powers.powers[1], 0.0);
}

TEST(Pareto, MatchesGridSearchOracle) {
    SystemConfig cfg;
    cfg.M = 2;
    cfg.K = 2;
    cfg.p = 1.0;
    const double lambdas[] = {1.0, 0.1};
    const double rho[] = {1.0, 1.0};
    const auto pt = pareto_allocate(rho, lambdas, cfg, 0.5);
    const double oracle = pareto_oracle(rho, lambdas, cfg, 0.5);
    EXPECT_NEAR(pt.R, oracle, 1e-3);
    // Feasible, and R + 1e-3 is beyond the oracle's reach.
    EXPECT_GE(pt.sr, 0.5 * pt.R - 1e-9);
    EXPECT_GE(pt.cr, 0.5 * pt.R - 1e-9);
    EXPECT_LT(oracle, pt.R + 1e-3);
    EXPECT_NEAR(sum(pt.powers.powers), 1.0, 1e-9);
}

TEST(Pareto, MatchesGridSearchOracleOnRandomInstances) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::gamma_distribution<double> gamma(2.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        SystemConfig cfg;
        cfg.M = 2;
        cfg.K = 3;
        cfg.N = 1 + static_cast<int>(u(rng) * 8);
        cfg.L = 2 + static_cast<int>(u(rng) * 40);
        cfg.p = std::pow(10.0, -1.0 + 3.0 * u(rng));
        const double lambdas[] = {0.05 + u(rng), 0.01 + 0.2 * u(rng)};
        const double rho[] = {gamma(rng), gamma(rng)};
        const double alpha = u(rng);
        const auto pt = pareto_allocate(rho, lambdas, cfg, alpha);
        EXPECT_NEAR(pt.R, pareto_oracle(rho, lambdas, cfg, alpha), 1e-3) << t;
    }
}

TEST(Pareto, MirrorSymmetry) {
    // N = L and L lambda_m = rho_m make the two rate functions identical.
    SystemConfig cfg;
    cfg.M = 3;
    cfg.N = 10;
    cfg.L = 10;
    cfg.p = 5.0;
    const double rho[] = {2.0, 0.5, 0.1};
    const double lambdas[] = {0.2, 0.05, 0.01};
    for (double alpha : {0.1, 0.3, 0.45}) {
        const auto a = pareto_allocate(rho, lambdas, cfg, alpha);
        const auto b = pareto_allocate(rho, lambdas, cfg, 1.0 - alpha);
        EXPECT_NEAR(a.sr, b.cr, 1e-6);
        EXPECT_NEAR(a.cr, b.sr, 1e-6);
    }
}

TEST(Pareto, TradeOffIsMonotoneInAlpha) {
    SystemConfig cfg;
    cfg.p = 3.0;
    const double rho[] = {0.9, 0.2, 1.7, 0.4};
    double prev_sr = 0.0;
    double prev_cr = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20; ++i) {
        const auto pt = pareto_allocate(rho, kLambdas, cfg, i / 20.0);
        EXPECT_GE(pt.sr, prev_sr - 1e-9);
        EXPECT_LE(pt.cr, prev_cr + 1e-9);
        prev_sr = pt.sr;
        prev_cr = pt.cr;
    }
}

TEST(Pareto, SubgradientFallbackReachesTheSameProfile) {
    SystemConfig cfg;
    cfg.p = 2.0;
    const double rho[] = {0.9, 0.2, 1.7, 0.4};
    const auto exact = pareto_allocate(rho, kLambdas, cfg, 0.3);
    const auto sub = detail::pareto_subgradient(rho, kLambdas, cfg, 0.3);
    EXPECT_NEAR(sub.R, exact.R, 1e-3);
    EXPECT_LE(sub.R, exact.R + 1e-9);
}

TEST(Simplex, ProjectionProperties) {
    const double v[] = {0.5, 2.0, -1.0, 0.7};
    const auto x = detail::project_to_simplex(v, 1.0);
    EXPECT_NEAR(sum(x), 1.0, 1e-14);
    for (double e : x) EXPECT_GE(e, 0.0);
    const double inside[] = {0.2, 0.3, 0.5};
    const auto y = detail::project_to_simplex(inside, 1.0);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(y[i], inside[i], 1e-15);
}
