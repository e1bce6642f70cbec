#pragma once

// Real-argument special functions used by the ergodic-rate closed form and
// its high-SNR asymptote. All functions throw DomainError for x <= 0.

namespace isac::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct SpecFunResult {
    double value = 0.0;
    double est_abs_err = 0.0;  ///< truncation plus accumulated rounding estimate
};

/// E1(x) = integral_x^inf e^-t / t dt. Power series for x <= 1, continued
/// fraction above.
SpecFunResult exp_integral_e1_eval(double x);
double exp_integral_e1(double x);

/// Generalized exponential integral E_n(x) = integral_1^inf e^{-xt} t^-n dt, n >= 1.
double exp_integral_en(int n, double x);

/// e^x * E_n(x), computed without forming e^x for large x.
double exp_integral_en_scaled(int n, double x);

/// Ei(x) = -PV integral_{-x}^inf e^-t / t dt for x > 0. Power series up to
/// x = 40, asymptotic expansion beyond. The error bound is absolute for
/// |Ei(x)| <= 1 and relative above.
SpecFunResult exp_integral_ei_eval(double x);
double exp_integral_ei(double x);

/// psi(x) = d/dx ln Gamma(x): upward recurrence to x >= 8, then the
/// asymptotic series.
SpecFunResult digamma_eval(double x);
double digamma(double x);

/// ln Gamma(x) via recurrence to x >= 10 and the Stirling series. Reentrant,
/// unlike std::lgamma which writes the global signgam on glibc.
SpecFunResult log_gamma_eval(double x);
double log_gamma(double x);

}  // namespace isac::specfun
