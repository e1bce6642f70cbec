#pragma once

#include "isac/allocation.hpp"
#include "isac/model.hpp"

#include <span>
#include <string>

namespace isac {

/// (SR, CR) pair in bits/s/Hz.
struct RateTuple {
    double sr = 0.0;
    double cr = 0.0;
    std::string design;
};

/// log2(1 + x) with log1p accuracy for small x.
double log2_1p(double x) noexcept;

/// (N/L) * sum_m log2(1 + L lambda_m powers_m), the SR of a precoder
/// U diag(powers)^{1/2}.
double sensing_rate(std::span<const double> powers, std::span<const double> lambdas,
                    const SystemConfig& cfg);
double sensing_rate(std::span<const double> powers, const SensingCorrelation& corr,
                    const SystemConfig& cfg);

/// (N/L) * log2 det(I + L W^H R W) for an arbitrary M x M precoder W.
double sensing_rate_det(const CMatrix& W, const CMatrix& R, const SystemConfig& cfg);

/// sum_m log2(1 + powers_m rho_m) under zero forcing.
double comm_sum_rate(std::span<const double> powers, std::span<const double> rho);

/// E{ sum_m log2(1 + s_m X_m) } with X_m ~ Gamma(K'+1, 1), evaluated as
///   sum_m (1/ln2) sum_{k=1}^{K'+1} e^{a_m} E_k(a_m),  a_m = 1 / s_m,
/// which needs only positive arguments and has no alternating terms.
/// Streams with s_m = 0 contribute nothing; negative powers throw DomainError.
double ecr_closed_form(std::span<const double> s_star, int k_prime);

/// Sign convention for the exponential-integral term of the printed
/// finite-sum ECR expression.
enum class EiConvention {
    /// -e^{-1/s} Ei(1/s), as typeset. Produces negative rates.
    AsPrinted,
    /// e^{1/s} E1(1/s) = -e^{1/s} Ei(-1/s), the value consistent with Monte Carlo.
    Corrected,
};

/// Literal evaluation of the alternating finite-sum ECR expression with the
/// chosen Ei convention. Only used as a checksum against ecr_closed_form;
/// it loses precision to cancellation for small s and large K'.
double ecr_finite_sum(std::span<const double> s_star, int k_prime, EiConvention convention);

/// Constant term (1/M) sum_m log2(L lambda_m / M) of the SR asymptote.
double asymptote_sr_constant(std::span<const double> lambdas, const SystemConfig& cfg);

/// High-SNR SR, (NM/L) (log2 p + (1/M) sum_m log2(L lambda_m / M)). Shared by
/// the S-C, C-C and Pareto designs.
double asymptote_sr(std::span<const double> lambdas, const SystemConfig& cfg, double p);
double asymptote_sr(const SensingCorrelation& corr, const SystemConfig& cfg, double p);

/// High-SNR sum ECR, M (log2 p - log2 M + psi(K'+1)/ln 2).
double asymptote_ecr(const SystemConfig& cfg, double p);

/// FDSAC high-SNR lines: the full-band asymptotes scaled to the band share
/// and evaluated at the per-band power, i.e.
///   sr ~ (1-kappa) asymptote_sr((1-mu) p / (1-kappa)),
///   cr ~ kappa asymptote_ecr(mu p / kappa).
/// A function with no band or no power gets 0.
double fdsac_asymptote_sr(std::span<const double> lambdas, const SystemConfig& cfg, double p,
                          double kappa, double mu);
double fdsac_asymptote_ecr(const SystemConfig& cfg, double p, double kappa, double mu);

/// FDSAC rates for one realization:
///   cr = sum kappa log2(1 + a_m rho_m / kappa)              (0 when kappa = 0)
///   sr = (N(1-kappa)/L) sum log2(1 + L lambda_m b_m/(1-kappa)) (0 when kappa = 1)
RateTuple fdsac_rates(const PowerAllocation& comm, const PowerAllocation& sense,
                      std::span<const double> rho, std::span<const double> lambdas,
                      const SystemConfig& cfg, double kappa);

}  // namespace isac
