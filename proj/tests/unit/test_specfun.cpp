#include "isac/errors.hpp"
#include "isac/specfun.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <cmath>

namespace sf = isac::specfun;
using Big = boost::multiprecision::cpp_bin_float_100;

namespace {

// Grids shared with the acceptance run.
const double kE1Grid[] = {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
const double kEiGrid[] = {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0};
const double kPsiGrid[] = {0.1, 0.5, 1.0, 2.0, 3.7, 5.0, 10.0, 25.0, 100.0};
const double kLgGrid[] = {0.1, 0.5, 1.0, 1.5, 2.5, 5.0, 9.0, 10.0, 20.0, 50.0, 170.0};

Big euler() { return boost::math::constants::euler<Big>(); }

// E1(x) = -gamma - ln x - sum (-x)^k / (k k!), summed in 100 digits so the
// cancellation at x = 50 is harmless.
double e1_series(double xd) {
    const Big x(xd);
    Big term = 1;
    Big sum = 0;
    for (int k = 1; k < 400; ++k) {
        term *= -x / k;
        sum += term / k;
    }
    return static_cast<double>(-euler() - log(x) - sum);
}

// Ei(x) = gamma + ln x + sum x^k / (k k!)
double ei_series(double xd) {
    const Big x(xd);
    Big term = 1;
    Big sum = 0;
    for (int k = 1; k < 600; ++k) {
        term *= x / k;
        sum += term / k;
        if (term / k < sum * Big(1e-60)) break;
    }
    return static_cast<double>(euler() + log(x) + sum);
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST(E1, PublishedValues) {
    EXPECT_NEAR(sf::exp_integral_e1(1.0), 0.2193839344, 1e-10);
    EXPECT_LT(rel(sf::exp_integral_e1(10.0), 4.156968929685324e-06), 1e-10);
    // x e^x E1(x) = 1 - 1/x + 2/x^2 - 6/x^3 + ..., so the limit 1 is
    // approached at rate 1/x: 0.9808 at x = 50, within 1% from x = 200.
    const double x = 50.0;
    EXPECT_NEAR(sf::exp_integral_e1(x) * x * std::exp(x),
                1.0 - 1.0 / x + 2.0 / (x * x) - 6.0 / (x * x * x), 24.0 / std::pow(x, 4));
    EXPECT_NEAR(sf::exp_integral_e1(200.0) * 200.0 * std::exp(200.0), 1.0, 0.01);
}

TEST(E1, MatchesHighPrecisionSeries) {
    for (double x : kE1Grid) EXPECT_LT(rel(sf::exp_integral_e1(x), e1_series(x)), 1e-10) << x;
}

TEST(E1, MatchesBoostAndQuadrature) {
    for (double x : kE1Grid) {
        EXPECT_LT(rel(sf::exp_integral_e1(x), boost::math::expint(1, x)), 1e-12) << x;
    }
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    for (double x : {0.5, 1.0, 2.0}) {
        const double q = gk.integrate([](double t) { return std::exp(-t) / t; }, x, x + 50.0, 15,
                                      1e-14);
        EXPECT_LT(rel(sf::exp_integral_e1(x), q), 1e-10) << x;
    }
}

TEST(E1, ErrorEstimateCoversActualError) {
    for (double x : kE1Grid) {
        const auto r = sf::exp_integral_e1_eval(x);
        EXPECT_LE(std::abs(r.value - e1_series(x)), std::max(r.est_abs_err * 10.0, 1e-300)) << x;
    }
}

TEST(En, RecurrenceAndScaling) {
    for (double x : {0.05, 0.7, 1.0, 3.0, 12.0, 80.0}) {
        for (int n = 1; n <= 6; ++n) {
            const double en = sf::exp_integral_en(n, x);
            EXPECT_LT(rel(en, boost::math::expint(n, x)), 1e-12) << n << " " << x;
            // n E_{n+1}(x) = e^-x - x E_n(x)
            const double next = sf::exp_integral_en(n + 1, x);
            EXPECT_LT(rel(n * next, std::exp(-x) - x * en), 1e-10) << n << " " << x;
            EXPECT_LT(rel(sf::exp_integral_en_scaled(n, x), std::exp(x) * en), 1e-12);
        }
    }
    // Scaled form stays finite where e^x overflows; e^x E_1(x) ~ 1/x.
    EXPECT_NEAR(sf::exp_integral_en_scaled(1, 1e6) * 1e6, 1.0, 1e-5);
}

TEST(Ei, PublishedValues) {
    EXPECT_NEAR(sf::exp_integral_ei(1.0), 1.8951178163, 1e-10);
    EXPECT_NEAR(sf::exp_integral_ei(2.0), 4.9542343561, 1e-10);
    EXPECT_NEAR(sf::exp_integral_ei(1e-8) - std::log(1e-8), sf::kEulerGamma, 1e-7);
}

TEST(Ei, MatchesHighPrecisionSeriesAndBoost) {
    for (double x : kEiGrid) {
        EXPECT_LT(rel(sf::exp_integral_ei(x), ei_series(x)), 1e-10) << x;
        EXPECT_LT(rel(sf::exp_integral_ei(x), boost::math::expint(x)), 1e-12) << x;
    }
}

TEST(Ei, ErrorBoundIsRelativeForLargeArguments) {
    const auto r = sf::exp_integral_ei_eval(60.0);
    EXPECT_GT(r.est_abs_err, 0.0);
    EXPECT_LT(r.est_abs_err / r.value, 1e-13);
    EXPECT_LE(std::abs(r.value - ei_series(60.0)), 10.0 * r.est_abs_err);
}

TEST(Digamma, PublishedValues) {
    EXPECT_NEAR(sf::digamma(1.0), -0.5772156649, 1e-10);
    EXPECT_NEAR(sf::digamma(2.0), 0.4227843351, 1e-10);
    EXPECT_NEAR(sf::digamma(5.0), 1.5061176684, 1e-10);
    EXPECT_NEAR(sf::digamma(1.0), -sf::kEulerGamma, 1e-14);
}

TEST(Digamma, MatchesMultiprecisionAndQuadrature) {
    for (double x : kPsiGrid) {
        const double want = static_cast<double>(boost::math::digamma(Big(x)));
        EXPECT_LT(std::abs(sf::digamma(x) - want), 1e-10 * std::max(1.0, std::abs(want))) << x;
    }
    // Gauss' integral psi(x) = int_0^inf (e^-t / t - e^{-xt} / (1 - e^-t)) dt.
    boost::math::quadrature::exp_sinh<double> es;
    for (double x : {0.5, 1.0, 3.7}) {
        const double q = es.integrate([x](double t) {
            if (t < 1e-6) return x - 1.5 + t * (5.0 / 12.0 + x / 2.0 - x * x / 2.0);
            return std::exp(-t) / t - std::exp(-x * t) / -std::expm1(-t);
        });
        EXPECT_NEAR(sf::digamma(x), q, 1e-9) << x;
    }
}

TEST(Digamma, Recurrence) {
    for (double x : {0.5, 1.0, 3.7, 10.0}) {
        EXPECT_NEAR(sf::digamma(x + 1.0) - sf::digamma(x), 1.0 / x, 1e-12) << x;
    }
}

TEST(LogGamma, PublishedValues) {
    EXPECT_NEAR(sf::log_gamma(1.0), 0.0, 1e-15);
    EXPECT_NEAR(sf::log_gamma(5.0), 3.1780538303, 1e-10);
    EXPECT_NEAR(sf::log_gamma(0.5), 0.5723649429, 1e-10);
}

TEST(LogGamma, MatchesMultiprecisionAndQuadrature) {
    for (double x : kLgGrid) {
        const double want = static_cast<double>(boost::math::lgamma(Big(x)));
        EXPECT_LT(std::abs(sf::log_gamma(x) - want), 1e-10 * std::max(1.0, std::abs(want))) << x;
    }
    boost::math::quadrature::exp_sinh<double> es;
    for (double x : {1.5, 2.5, 9.0}) {
        const double g = es.integrate([x](double t) { return std::exp((x - 1.0) * std::log(t) - t); });
        EXPECT_NEAR(sf::log_gamma(x), std::log(g), 1e-10) << x;
    }
}

TEST(LogGamma, Recurrence) {
    for (double x : {0.5, 1.0, 2.5, 9.0}) {
        EXPECT_LT(rel(std::exp(sf::log_gamma(x + 1.0)), x * std::exp(sf::log_gamma(x))), 1e-10);
    }
}

TEST(SpecFun, DomainErrors) {
    EXPECT_THROW(sf::exp_integral_e1(0.0), isac::DomainError);
    EXPECT_THROW(sf::exp_integral_ei(-1.0), isac::DomainError);
    EXPECT_THROW(sf::digamma(0.0), isac::DomainError);
    EXPECT_THROW(sf::log_gamma(-2.0), isac::DomainError);
    EXPECT_THROW(sf::exp_integral_en(0, 1.0), isac::DomainError);
}
