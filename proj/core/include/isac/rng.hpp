#pragma once

#include <complex>
#include <cstdint>
#include <limits>

namespace isac {

/// Counter-based random stream: the output sequence is a pure function of
/// (seed, stream). Trial i of any estimator draws from stream i, so results
/// do not depend on the order in which trials are evaluated.
///
/// The generator is SplitMix64 keyed by a hash of (seed, stream); it meets
/// the UniformRandomBitGenerator requirements and can drive <random>
/// distributions.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Standard real normal N(0, 1).
    double normal();
    /// Circularly-symmetric CN(0, 1): (x + iy)/sqrt(2) with x, y ~ N(0, 1).
    std::complex<double> complex_normal();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Mixes a parent seed with a label so that independent sub-experiments get
/// unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) noexcept;

}  // namespace isac
