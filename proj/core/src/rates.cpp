#include "isac/rates.hpp"

#include "isac/errors.hpp"
#include "isac/specfun.hpp"

#include <cmath>
#include <numbers>

namespace isac {
namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DomainError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

double log2_1p(double x) noexcept { return std::log1p(x) / kLn2; }

double sensing_rate(std::span<const double> powers, std::span<const double> lambdas,
                    const SystemConfig& cfg) {
    check_lengths(powers.size(), lambdas.size(), "sensing_rate");
    double sum = 0.0;
    for (std::size_t m = 0; m < powers.size(); ++m) {
        sum += log2_1p(cfg.L * lambdas[m] * std::max(powers[m], 0.0));
    }
    return static_cast<double>(cfg.N) / cfg.L * sum;
}

double sensing_rate(std::span<const double> powers, const SensingCorrelation& corr,
                    const SystemConfig& cfg) {
    return sensing_rate(powers, std::span<const double>(corr.lambdas.data(), corr.lambdas.size()),
                        cfg);
}

double sensing_rate_det(const CMatrix& W, const CMatrix& R, const SystemConfig& cfg) {
    const Eigen::Index M = W.cols();
    CMatrix A = CMatrix::Identity(M, M) + static_cast<double>(cfg.L) * (W.adjoint() * R * W);
    A = 0.5 * (A + A.adjoint());
    Eigen::LLT<CMatrix> llt(A);
    if (llt.info() != Eigen::Success) {
        throw DomainError("sensing_rate_det: I + L W^H R W is not positive definite");
    }
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < M; ++i) logdet += 2.0 * std::log(llt.matrixLLT()(i, i).real());
    return static_cast<double>(cfg.N) / cfg.L * logdet / kLn2;
}

double comm_sum_rate(std::span<const double> powers, std::span<const double> rho) {
    check_lengths(powers.size(), rho.size(), "comm_sum_rate");
    double sum = 0.0;
    for (std::size_t m = 0; m < powers.size(); ++m) {
        sum += log2_1p(std::max(powers[m], 0.0) * rho[m]);
    }
    return sum;
}

double ecr_closed_form(std::span<const double> s_star, int k_prime) {
    if (k_prime < 0) throw DomainError("ecr_closed_form: K' must be >= 0");
    double total = 0.0;
    for (double s : s_star) {
        if (!(s >= 0.0)) throw DomainError("ecr_closed_form: powers must be >= 0");
        if (s == 0.0) continue;  // inactive stream, limit s -> 0+ of the rate
        const double a = 1.0 / s;
        double stream = 0.0;
        for (int k = 1; k <= k_prime + 1; ++k) {
            stream += specfun::exp_integral_en_scaled(k, a);
        }
        total += stream / kLn2;
    }
    return total;
}

double ecr_finite_sum(std::span<const double> s_star, int k_prime, EiConvention convention) {
    if (k_prime < 0) throw DomainError("ecr_finite_sum: K' must be >= 0");
    double total = 0.0;
    for (double s : s_star) {
        if (!(s >= 0.0)) throw DomainError("ecr_finite_sum: powers must be >= 0");
        if (s == 0.0) continue;  // inactive stream, limit s -> 0+ of the rate
        const double a = 1.0 / s;
        const double head = convention == EiConvention::AsPrinted
                                ? -std::exp(-a) * specfun::exp_integral_ei(a)
                                : specfun::exp_integral_en_scaled(1, a);
        for (int mu = 0; mu <= k_prime; ++mu) {
            const int order = k_prime - mu;
            double inner = head;
            for (int i = 1; i <= order; ++i) {
                inner += factorial(i - 1) * std::pow(-a, -i);
            }
            total += std::pow(-a, order) / (factorial(order) * kLn2) * inner;
        }
    }
    return total;
}

double asymptote_sr_constant(std::span<const double> lambdas, const SystemConfig& cfg) {
    const double M = static_cast<double>(lambdas.size());
    double sum = 0.0;
    for (double l : lambdas) sum += std::log2(cfg.L * l / M);
    return sum / M;
}

double asymptote_sr(std::span<const double> lambdas, const SystemConfig& cfg, double p) {
    if (!(p > 0.0)) throw DomainError("asymptote_sr: p must be > 0");
    const double M = static_cast<double>(lambdas.size());
    return cfg.N * M / cfg.L * (std::log2(p) + asymptote_sr_constant(lambdas, cfg));
}

double asymptote_sr(const SensingCorrelation& corr, const SystemConfig& cfg, double p) {
    return asymptote_sr(std::span<const double>(corr.lambdas.data(), corr.lambdas.size()), cfg,
                        p);
}

double asymptote_ecr(const SystemConfig& cfg, double p) {
    if (!(p > 0.0)) throw DomainError("asymptote_ecr: p must be > 0");
    return cfg.M * (std::log2(p) - std::log2(static_cast<double>(cfg.M)) +
                    specfun::digamma(cfg.k_prime() + 1.0) / kLn2);
}

RateTuple fdsac_rates(const PowerAllocation& comm, const PowerAllocation& sense,
                      std::span<const double> rho, std::span<const double> lambdas,
                      const SystemConfig& cfg, double kappa) {
    check_lengths(comm.powers.size(), rho.size(), "fdsac_rates");
    check_lengths(sense.powers.size(), lambdas.size(), "fdsac_rates");
    RateTuple out;
    out.design = "FDSAC";
    if (kappa > 0.0) {
        double cr = 0.0;
        for (std::size_t m = 0; m < rho.size(); ++m) {
            cr += kappa * log2_1p(comm.powers[m] * rho[m] / kappa);
        }
        out.cr = cr;
    }
    if (kappa < 1.0) {
        const double band = 1.0 - kappa;
        double sr = 0.0;
        for (std::size_t m = 0; m < lambdas.size(); ++m) {
            sr += log2_1p(cfg.L * lambdas[m] * sense.powers[m] / band);
        }
        out.sr = static_cast<double>(cfg.N) * band / cfg.L * sr;
    }
    return out;
}

double fdsac_asymptote_sr(std::span<const double> lambdas, const SystemConfig& cfg, double p,
                          double kappa, double mu) {
    if (kappa >= 1.0 || mu >= 1.0) return 0.0;
    return (1.0 - kappa) * asymptote_sr(lambdas, cfg, (1.0 - mu) * p / (1.0 - kappa));
}

double fdsac_asymptote_ecr(const SystemConfig& cfg, double p, double kappa, double mu) {
    if (kappa <= 0.0 || mu <= 0.0) return 0.0;
    return kappa * asymptote_ecr(cfg, mu * p / kappa);
}

}  // namespace isac
