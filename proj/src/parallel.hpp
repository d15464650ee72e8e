#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace fm {

// Runs fn(i) for i in [0, n).  Work is split into contiguous chunks over
// `threads` workers.  Callers that need determinism write per-index results
// into a preallocated buffer and reduce sequentially afterwards, so the
// outcome does not depend on the thread count.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2 * threads) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::int64_t chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// Sequential mean/stderr reduction over a per-index sample buffer.
struct MeanStderr {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::int64_t n = 0;
};

inline MeanStderr reduce_mean(const std::vector<double>& samples) {
    MeanStderr out;
    out.n = static_cast<std::int64_t>(samples.size());
    if (out.n == 0) return out;
    // compensated summation keeps the reduction bit-stable
    double sum = 0.0, c = 0.0;
    for (double x : samples) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    out.mean = sum / static_cast<double>(out.n);
    if (out.n > 1) {
        double ss = 0.0, cc = 0.0;
        for (double x : samples) {
            double d = x - out.mean;
            double y = d * d - cc;
            double t = ss + y;
            cc = (t - ss) - y;
            ss = t;
        }
        const double var = ss / static_cast<double>(out.n - 1);
        out.stderr_of_mean = std::sqrt(var / static_cast<double>(out.n));
    }
    return out;
}

}  // namespace fm
