#include "isac/rng.hpp"

#include <cmath>

namespace isac {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) noexcept {
    return mix64(mix64(seed + kGolden) ^ (label * 0xD1B54A32D192ED03ULL + kGolden));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(derive_seed(seed, stream)) {}

CounterRng::result_type CounterRng::operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

// Marsaglia polar method. Written out rather than using
// std::normal_distribution so the stream is identical across standard
// library implementations.
double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * (static_cast<double>((*this)() >> 11) * 0x1.0p-53) - 1.0;
        v = 2.0 * (static_cast<double>((*this)() >> 11) * 0x1.0p-53) - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

std::complex<double> CounterRng::complex_normal() {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {re * kInvSqrt2, im * kInvSqrt2};
}

}  // namespace isac
