#include "isac/model.hpp"

#include "isac/errors.hpp"
#include "isac/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <memory>
#include <numbers>
#include <string>

namespace isac {
namespace {

constexpr double kRankTolerance = 1e-10;
constexpr int kMaxResamples = 64;

std::atomic<std::uint64_t> g_resamples{0};

void fill_complex_normal(CMatrix& m, CounterRng& rng) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            m(i, j) = rng.complex_normal();
        }
    }
}

CMatrix haar_unitary(int M, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    CMatrix Z(M, M);
    fill_complex_normal(Z, rng);
    Eigen::HouseholderQR<CMatrix> qr(Z);
    CMatrix Q = qr.householderQ();
    const CMatrix& Rf = qr.matrixQR();
    // Rotating each column by the phase of R's diagonal makes Q Haar.
    for (int k = 0; k < M; ++k) {
        const Complex d = Rf(k, k);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            Q.col(k) *= d / mag;
        }
    }
    return Q;
}

// ZF gain for stream m given P_m = H_m U: q_m is the m-th column of
// P_m (P_m^H P_m)^{-1}, v_m = q_m / |q_m|, rho_m = |v_m^H h_m|^2.
// Returns false on a numerically singular Gram matrix.
bool stream_gain(const CMatrix& P, int m, double& rho, ChannelSampler::Workspace& ws,
                 CVector* v_out) {
    const Eigen::Index M = P.cols();
    ws.gram.noalias() = P.adjoint() * P;
    ws.llt.compute(ws.gram);
    if (ws.llt.info() != Eigen::Success) {
        return false;
    }
    const auto& Lmat = ws.llt.matrixLLT();
    double min_diag = std::abs(Lmat(0, 0));
    double max_diag = min_diag;
    for (Eigen::Index i = 1; i < M; ++i) {
        min_diag = std::min(min_diag, std::abs(Lmat(i, i)));
        max_diag = std::max(max_diag, std::abs(Lmat(i, i)));
    }
    if (!(min_diag > 1e-7 * max_diag)) {
        return false;
    }
    ws.unit.setZero(M);
    ws.unit(m) = 1.0;
    ws.coeffs = ws.llt.solve(ws.unit);
    ws.q.noalias() = P * ws.coeffs;
    const double qnorm = ws.q.norm();
    if (!(qnorm > 0.0) || !std::isfinite(qnorm)) {
        return false;
    }
    const Complex proj = ws.q.dot(P.col(m)) / qnorm;  // v^H h
    rho = std::norm(proj);
    if (v_out != nullptr) {
        *v_out = ws.q / qnorm;
    }
    return true;
}

}  // namespace

void SystemConfig::validate() const {
    if (M < 1) throw DomainError("M must be >= 1 (got " + std::to_string(M) + ")");
    if (N < 1) throw DomainError("N must be >= 1 (got " + std::to_string(N) + ")");
    if (K < M) {
        throw DomainError("K must be >= M for zero-forcing (got K=" + std::to_string(K) +
                          ", M=" + std::to_string(M) + ")");
    }
    if (L < M) {
        throw DomainError("L must be >= M (got L=" + std::to_string(L) + ", M=" +
                          std::to_string(M) + ")");
    }
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("p must be a positive finite power");
    if (!(R0 >= 0.0) || !std::isfinite(R0)) throw DomainError("R0 must be a nonnegative rate");
}

CVector steering_vector(int antennas, double theta) {
    CVector b(antennas);
    const double phase = std::numbers::pi * std::sin(theta);
    for (int k = 0; k < antennas; ++k) {
        b(k) = std::polar(1.0, phase * k);
    }
    return b;
}

SensingCorrelation correlation_from_matrix(const CMatrix& R) {
    if (R.rows() != R.cols() || R.rows() == 0) {
        throw DomainError("correlation matrix must be square and nonempty");
    }
    const CMatrix herm = 0.5 * (R + R.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    if (es.info() != Eigen::Success) {
        throw DomainError("eigendecomposition of the correlation matrix failed");
    }
    const int M = static_cast<int>(R.rows());
    SensingCorrelation out;
    out.R = herm;
    out.lambdas.resize(M);
    out.U.resize(M, M);
    // Eigen returns ascending eigenvalues.
    for (int k = 0; k < M; ++k) {
        out.lambdas(k) = es.eigenvalues()(M - 1 - k);
        out.U.col(k) = es.eigenvectors().col(M - 1 - k);
    }
    const double top = std::max(out.lambdas(0), 0.0);
    int rank = 0;
    for (int k = 0; k < M; ++k) {
        if (out.lambdas(k) > kRankTolerance * top) ++rank;
    }
    if (rank < M) {
        throw RankDeficiencyError(rank, M);
    }
    return out;
}

SensingCorrelation correlation_from_eigenvalues(std::span<const double> lambdas,
                                                std::uint64_t seed) {
    if (lambdas.empty()) {
        throw DomainError("at least one eigenvalue is required");
    }
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw DomainError("eigenvalues must be positive and finite (got " + std::to_string(l) +
                              ")");
        }
    }
    const int M = static_cast<int>(lambdas.size());
    std::vector<double> sorted(lambdas.begin(), lambdas.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    SensingCorrelation out;
    out.lambdas = Eigen::Map<const Eigen::VectorXd>(sorted.data(), M);
    out.U = haar_unitary(M, seed);
    const CMatrix R = out.U * out.lambdas.cast<Complex>().asDiagonal() * out.U.adjoint();
    out.R = 0.5 * (R + R.adjoint());
    return out;
}

SensingCorrelation correlation_from_scene(const TargetScene& scene, int M) {
    if (M < 1) throw DomainError("M must be >= 1");
    if (scene.targets.empty()) {
        throw DomainError("target scene must contain at least one target");
    }
    CMatrix R = CMatrix::Zero(M, M);
    for (const Target& t : scene.targets) {
        if (!(t.sigma2 > 0.0)) throw DomainError("target strength sigma2 must be positive");
        const CVector b = steering_vector(M, t.theta);
        R.noalias() += t.sigma2 * (b * b.adjoint());
    }
    return correlation_from_matrix(R);
}

bool zf_gains(std::span<const CMatrix> H, const CMatrix& precoder, std::span<double> rho,
              std::vector<CVector>* equalizers) {
    const int M = static_cast<int>(precoder.cols());
    ChannelSampler::Workspace ws;
    if (equalizers != nullptr) equalizers->assign(M, CVector());
    for (int m = 0; m < M; ++m) {
        const CMatrix P = H[m] * precoder;
        CVector* v = equalizers != nullptr ? &(*equalizers)[m] : nullptr;
        if (!stream_gain(P, m, rho[m], ws, v)) return false;
    }
    return true;
}

ChannelSampler::ChannelSampler(const SystemConfig& cfg, const CMatrix& precoder,
                               std::uint64_t seed)
    : M_(cfg.M), K_(cfg.K), precoder_(precoder), seed_(seed) {
    cfg.validate();
    if (precoder.rows() != cfg.M || precoder.cols() != cfg.M) {
        throw DomainError("precoder must be M x M");
    }
}

void ChannelSampler::gains(std::uint64_t trial, std::span<double> rho, Workspace& ws) const {
    CounterRng rng(seed_, trial);
    ws.H.resize(K_, M_);
    for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
        bool ok = true;
        // A resample redraws the whole realization from the continuing stream.
        for (int m = 0; m < M_ && ok; ++m) {
            fill_complex_normal(ws.H, rng);
            ws.P.noalias() = ws.H * precoder_;
            ok = stream_gain(ws.P, m, rho[m], ws, nullptr);
        }
        if (ok) return;
        g_resamples.fetch_add(1, std::memory_order_relaxed);
        std::clog << "isac: warning: singular Gram matrix in trial " << trial
                  << ", resampling channels\n";
    }
    throw DomainError("channel sampling failed: repeated singular Gram matrices");
}

ChannelDraw ChannelSampler::draw(std::uint64_t trial) const {
    CounterRng rng(seed_, trial);
    ChannelDraw out;
    out.seed = seed_;
    out.trial = trial;
    out.rho.assign(M_, 0.0);
    Workspace ws;
    for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
        out.H.assign(M_, CMatrix(K_, M_));
        bool ok = true;
        for (int m = 0; m < M_ && ok; ++m) {
            fill_complex_normal(out.H[m], rng);
            ws.P.noalias() = out.H[m] * precoder_;
            ok = stream_gain(ws.P, m, out.rho[m], ws, nullptr);
        }
        if (ok) return out;
        g_resamples.fetch_add(1, std::memory_order_relaxed);
        std::clog << "isac: warning: singular Gram matrix in trial " << trial
                  << ", resampling channels\n";
    }
    throw DomainError("channel sampling failed: repeated singular Gram matrices");
}

std::uint64_t channel_resample_count() noexcept {
    return g_resamples.load(std::memory_order_relaxed);
}

CMatrix sample_target_response(const SensingCorrelation& corr, int N, std::uint64_t seed) {
    if (N < 1) throw DomainError("N must be >= 1");
    const int M = corr.size();
    const CMatrix sqrt_r = corr.U * corr.lambdas.cwiseSqrt().cast<Complex>().asDiagonal() *
                           corr.U.adjoint();
    CMatrix G(N, M);
    CVector z(M);
    for (int n = 0; n < N; ++n) {
        CounterRng rng(seed, static_cast<std::uint64_t>(n));
        for (int k = 0; k < M; ++k) z(k) = rng.complex_normal();
        G.row(n) = (sqrt_r * z).transpose();
    }
    return G;
}

}  // namespace isac
