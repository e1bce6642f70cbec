#include "isac/specfun.hpp"

#include "isac/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace isac::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || std::isnan(x)) {
        throw DomainError(std::string(name) + ": argument must be > 0 (got " + std::to_string(x) +
                          ")");
    }
}

// Modified Lentz evaluation of the continued fraction for e^x E_n(x), x > 1.
double en_scaled_continued_fraction(int n, double x) {
    constexpr double tiny = 1e-300;
    double b = x + n;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= 0.5 * kEps) return h;
    }
    throw DomainError("exponential integral continued fraction did not converge");
}

// Series for E_n(x), 0 < x <= 1.
SpecFunResult en_series(int n, double x) {
    const int nm1 = n - 1;
    double sum = (nm1 != 0) ? 1.0 / nm1 : -std::log(x) - kEulerGamma;
    double abs_sum = std::abs(sum);
    double fact = 1.0;
    double last = 0.0;
    for (int i = 1; i <= kMaxIter; ++i) {
        fact *= -x / i;
        double del = 0.0;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -kEulerGamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(x) + psi);
        }
        sum += del;
        abs_sum += std::abs(del);
        last = std::abs(del);
        if (last <= 0.25 * kEps * std::abs(sum)) break;
    }
    return {sum, last + 4.0 * kEps * abs_sum};
}

}  // namespace

SpecFunResult exp_integral_e1_eval(double x) {
    require_positive(x, "E1");
    if (x <= 1.0) return en_series(1, x);
    const double h = en_scaled_continued_fraction(1, x);
    const double value = h * std::exp(-x);
    return {value, 8.0 * kEps * value};
}

double exp_integral_e1(double x) { return exp_integral_e1_eval(x).value; }

double exp_integral_en(int n, double x) {
    if (n < 1) throw DomainError("E_n: order must be >= 1");
    require_positive(x, "E_n");
    if (x <= 1.0) return en_series(n, x).value;
    return en_scaled_continued_fraction(n, x) * std::exp(-x);
}

double exp_integral_en_scaled(int n, double x) {
    if (n < 1) throw DomainError("E_n: order must be >= 1");
    require_positive(x, "E_n");
    if (x <= 1.0) return std::exp(x) * en_series(n, x).value;
    return en_scaled_continued_fraction(n, x);
}

SpecFunResult exp_integral_ei_eval(double x) {
    require_positive(x, "Ei");
    if (x <= 40.0) {
        double term = 1.0;
        double sum = 0.0;
        double last = 0.0;
        for (int k = 1; k <= kMaxIter; ++k) {
            term *= x / k;
            const double add = term / k;
            sum += add;
            last = add;
            if (add <= 0.25 * kEps * sum) break;
        }
        const double lx = std::log(x);
        const double value = kEulerGamma + lx + sum;
        const double err = last + 4.0 * kEps * (kEulerGamma + std::abs(lx) + sum);
        return {value, err};
    }
    // Asymptotic: Ei(x) ~ e^x / x * sum_k k! / x^k, truncated at the
    // smallest term.
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * k / x;
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 0.25 * kEps * sum) break;
    }
    const double value = std::exp(x) / x * sum;
    return {value, (term + 4.0 * kEps * sum) * std::exp(x) / x};
}

double exp_integral_ei(double x) { return exp_integral_ei_eval(x).value; }

SpecFunResult digamma_eval(double x) {
    require_positive(x, "digamma");
    double shift = 0.0;
    double abs_shift = 0.0;
    while (x < 8.0) {
        shift -= 1.0 / x;
        abs_shift += 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli terms B_2k / (2k x^2k), k = 1..7.
    const double series =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 -
                                        inv2 * (1.0 / 132.0 -
                                                inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    const double lx = std::log(x);
    const double value = lx - 0.5 * inv - series + shift;
    // Next omitted term is 3617/(8160 x^16).
    const double trunc = 3617.0 / 8160.0 * std::pow(inv2, 8);
    return {value, trunc + 4.0 * kEps * (std::abs(lx) + abs_shift + 1.0)};
}

double digamma(double x) { return digamma_eval(x).value; }

SpecFunResult log_gamma_eval(double x) {
    require_positive(x, "log_gamma");
    double log_prod = 0.0;
    double abs_acc = 0.0;
    while (x < 10.0) {
        const double l = std::log(x);
        log_prod += l;
        abs_acc += std::abs(l);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 / 12.0 -
               inv2 * (1.0 / 360.0 -
                       inv2 * (1.0 / 1260.0 -
                               inv2 * (1.0 / 1680.0 -
                                       inv2 * (1.0 / 1188.0 -
                                               inv2 * (691.0 / 360360.0 - inv2 / 156.0))))));
    const double lx = std::log(x);
    const double head = (x - 0.5) * lx - x + 0.5 * std::log(2.0 * std::numbers::pi);
    const double value = head + series - log_prod;
    const double trunc = 3617.0 / 122400.0 * std::pow(inv, 15);
    return {value, trunc + 8.0 * kEps * (std::abs(head) + abs_acc)};
}

double log_gamma(double x) { return log_gamma_eval(x).value; }

}  // namespace isac::specfun
