#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace isac {

struct RunOptions {
    unsigned threads = 1;
    /// Trials per reduction block. Block boundaries do not depend on the
    /// thread count, which keeps the reduction order (and every output bit)
    /// fixed under any schedule.
    std::uint64_t block_size = 4096;
};

/// Welford accumulator with Chan's pairwise merge.
struct RunningStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats& other) noexcept {
        if (other.n == 0) return;
        if (n == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(other.n);
        const double delta = other.mean - mean;
        const double total = na + nb;
        mean += delta * nb / total;
        m2 += other.m2 + delta * delta * na * nb / total;
        n += other.n;
    }

    double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

/// Runs trials [0, trials) and accumulates `width` statistics per trial.
/// `make_worker()` is called once per thread and must return a callable
/// `void(std::uint64_t trial, std::span<double> out)`.
template <class MakeWorker>
std::vector<RunningStats> run_trials(std::uint64_t trials, std::size_t width,
                                     const RunOptions& opts, MakeWorker&& make_worker) {
    const std::uint64_t block = std::max<std::uint64_t>(opts.block_size, 1);
    const std::uint64_t blocks = (trials + block - 1) / block;
    std::vector<std::vector<RunningStats>> partial(blocks, std::vector<RunningStats>(width));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto body = [&] {
        try {
            auto worker = make_worker();
            std::vector<double> out(width);
            for (std::uint64_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
                const std::uint64_t end = std::min(trials, (b + 1) * block);
                auto& acc = partial[b];
                for (std::uint64_t t = b * block; t < end; ++t) {
                    worker(t, std::span<double>(out));
                    for (std::size_t k = 0; k < width; ++k) acc[k].add(out[k]);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(blocks);
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(opts.threads, 1u), std::max<std::uint64_t>(blocks, 1)));
    if (threads <= 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(body);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<RunningStats> total(width);
    for (const auto& blk : partial) {
        for (std::size_t k = 0; k < width; ++k) total[k].merge(blk[k]);
    }
    return total;
}

/// Calls fn(i) for i in [0, count) on up to opts.threads threads. Each
/// index is processed exactly once; callers write results by index.
template <class Fn>
void parallel_for(std::size_t count, const RunOptions& opts, Fn&& fn) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        try {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(count);
        }
    };
    const std::size_t threads =
        std::min<std::size_t>(std::max(opts.threads, 1u), std::max<std::size_t>(count, 1));
    if (threads <= 1) {
        body();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(body);
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace isac
