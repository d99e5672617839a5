#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace diolab {

// Distance to the nearest integer. Ties (exact .5) round away from zero,
// which keeps the result deterministic; strict-inequality callers subtract
// their tolerance anyway.
inline double dist_to_nearest_int(double t) {
    return std::fabs(t - std::round(t));
}

inline long double dist_to_nearest_int_ld(long double t) {
    return fabsl(t - roundl(t));
}

inline std::int64_t nearest_int(double t) {
    return static_cast<std::int64_t>(std::llround(t));
}

// ---------------------------------------------------------------------------
// Seeded, splittable RNG (splitmix64). Per-work-unit streams are derived from
// (seed, index) so results do not depend on scheduling order.
// ---------------------------------------------------------------------------

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

inline std::uint64_t split_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    g.next();
    return g.next();
}

// ---------------------------------------------------------------------------
// Deterministic data-parallel helper: [lo, hi] is split into contiguous
// chunks; fn(chunk_index, chunk_lo, chunk_hi) runs on worker threads. The
// caller indexes any output by chunk, so thread count never affects results.
// ---------------------------------------------------------------------------

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class Fn>
void parallel_chunks(std::int64_t lo, std::int64_t hi, int threads, int chunks, Fn&& fn) {
    if (hi < lo) return;
    threads = resolve_threads(threads);
    std::int64_t n = hi - lo + 1;
    if (chunks <= 0) chunks = threads * 4;
    if (static_cast<std::int64_t>(chunks) > n) chunks = static_cast<int>(n);
    if (threads <= 1 || chunks <= 1) {
        std::int64_t done = lo;
        for (int c = 0; c < chunks; ++c) {
            std::int64_t len = n / chunks + (c < n % chunks ? 1 : 0);
            fn(c, done, done + len - 1);
            done += len;
        }
        return;
    }
    std::vector<std::int64_t> starts(static_cast<std::size_t>(chunks) + 1);
    starts[0] = lo;
    for (int c = 0; c < chunks; ++c) {
        std::int64_t len = n / chunks + (c < n % chunks ? 1 : 0);
        starts[static_cast<std::size_t>(c) + 1] = starts[static_cast<std::size_t>(c)] + len;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (int c = w; c < chunks; c += threads)
                fn(c, starts[static_cast<std::size_t>(c)], starts[static_cast<std::size_t>(c) + 1] - 1);
        });
    }
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Exact length of a union of closed intervals (sort + sweep). Order of the
// input does not matter and repeated merging is idempotent.
// ---------------------------------------------------------------------------

inline double union_length(std::vector<std::pair<double, double>> ivals) {
    std::erase_if(ivals, [](const auto& p) { return !(p.second > p.first); });
    if (ivals.empty()) return 0.0;
    std::sort(ivals.begin(), ivals.end());
    double total = 0.0;
    double cur_lo = ivals[0].first, cur_hi = ivals[0].second;
    for (std::size_t i = 1; i < ivals.size(); ++i) {
        if (ivals[i].first <= cur_hi) {
            cur_hi = std::max(cur_hi, ivals[i].second);
        } else {
            total += cur_hi - cur_lo;
            cur_lo = ivals[i].first;
            cur_hi = ivals[i].second;
        }
    }
    total += cur_hi - cur_lo;
    return total;
}

// Ordinary least squares y = slope*x + intercept.
struct LinFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double rms = 0.0;
};

inline LinFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    LinFit out;
    std::size_t n = x.size();
    if (n < 2 || y.size() != n) return out;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) return out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (out.slope * x[i] + out.intercept);
        ss += r * r;
    }
    out.rms = std::sqrt(ss / static_cast<double>(n));
    if (n > 2) out.stderr_slope = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    return out;
}

}  // namespace diolab
