#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace isac {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// System dimensions and power budget.
///
/// M  number of UTs, equal to the number of BS transmit antennas
/// N  BS receive antennas
/// K  receive antennas per UT (K >= M, so zero forcing removes all IUI)
/// L  frame length in symbols
/// p  total transmit power as linear SNR (noise variance is 1)
/// R0 outage target for the sum CR in bits/s/Hz
struct SystemConfig {
    int M = 4;
    int N = 5;
    int K = 4;
    int L = 30;
    double p = 1.0;
    double R0 = 2.0;

    /// Throws DomainError naming the first invalid field.
    void validate() const;

    /// K' = K - M, the extra spatial degrees of freedom at each UT.
    int k_prime() const noexcept { return K - M; }

    SystemConfig with_power(double power) const {
        SystemConfig copy = *this;
        copy.p = power;
        return copy;
    }
};

/// R = U diag(lambdas) U^H with eigenvalues sorted in descending order.
struct SensingCorrelation {
    CMatrix R;
    Eigen::VectorXd lambdas;
    CMatrix U;

    int size() const noexcept { return static_cast<int>(lambdas.size()); }
    std::vector<double> eigenvalues() const {
        return {lambdas.data(), lambdas.data() + lambdas.size()};
    }
};

struct Target {
    double sigma2 = 1.0;  ///< average reflection strength
    double theta = 0.0;   ///< direction of arrival in radians
};

/// Point targets seen through half-wavelength uniform linear arrays.
struct TargetScene {
    std::vector<Target> targets;
};

/// Half-wavelength ULA steering vector, b(theta)_k = exp(i*pi*k*sin(theta)).
/// Entries have unit modulus; the vector is not normalized.
CVector steering_vector(int antennas, double theta);

/// Builds R with the given eigenvalues and a Haar-distributed eigenbasis.
/// Deterministic for a fixed seed. Throws DomainError on a nonpositive
/// eigenvalue.
SensingCorrelation correlation_from_eigenvalues(std::span<const double> lambdas,
                                                std::uint64_t seed);

/// Builds R = sum_t sigma_t^2 b(theta_t) b(theta_t)^H for an M-antenna
/// transmit array. Throws RankDeficiencyError if R is not positive definite.
SensingCorrelation correlation_from_scene(const TargetScene& scene, int M);

/// Eigendecomposes a Hermitian matrix into a SensingCorrelation. Throws
/// RankDeficiencyError if any eigenvalue falls below the relative rank
/// tolerance.
SensingCorrelation correlation_from_matrix(const CMatrix& R);

/// One realization of the communication channels.
struct ChannelDraw {
    std::vector<CMatrix> H;   ///< M matrices of size K x M, CN(0, 1) entries
    std::vector<double> rho;  ///< effective ZF gains |v_m^H h_m|^2
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
};

/// Draws communication channels and ZF effective gains. Trial i is a pure
/// function of (seed, i), so any subset of trials can be regenerated in
/// any order or in parallel.
class ChannelSampler {
public:
    /// Scratch buffers reused across draws on one thread.
    struct Workspace {
        CMatrix H;
        CMatrix P;
        CMatrix gram;
        Eigen::LLT<CMatrix> llt;
        CVector unit;
        CVector coeffs;
        CVector q;
    };

    ChannelSampler(const SystemConfig& cfg, const CMatrix& precoder, std::uint64_t seed);

    ChannelDraw draw(std::uint64_t trial) const;

    /// Effective gains only; writes M values into rho.
    void gains(std::uint64_t trial, std::span<double> rho, Workspace& ws) const;

    int M() const noexcept { return M_; }
    int K() const noexcept { return K_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    int M_;
    int K_;
    CMatrix precoder_;
    std::uint64_t seed_;
};

/// Process-wide count of channel resamples triggered by a singular Gram
/// matrix.
std::uint64_t channel_resample_count() noexcept;

/// Zero-forcing gains for explicit channels using precoder P:
/// v_m is the normalized m-th column of P_m (P_m^H P_m)^{-1} with P_m = H_m P,
/// rho_m = |v_m^H h_m|^2 with h_m the m-th column of P_m. Returns false if a
/// Gram matrix is numerically singular.
bool zf_gains(std::span<const CMatrix> H, const CMatrix& precoder, std::span<double> rho,
              std::vector<CVector>* equalizers = nullptr);

/// N x M target response whose rows are i.i.d. CN(0, R).
CMatrix sample_target_response(const SensingCorrelation& corr, int N, std::uint64_t seed);

}  // namespace isac
