#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pseudolap/numerics.hpp"

namespace pseudolap {

// Fixed block width for deterministic map-reduce. Partials are produced per
// block in index order and combined serially in block order, so the result
// does not depend on the number of worker threads.
inline constexpr std::size_t kSumBlock = 4096;

namespace detail {

struct NeumaierAcc {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double result() const { return s + c; }
};

template <class F>
double block_partial(F& f, std::size_t b, std::size_t n) {
    NeumaierAcc acc;
    const std::size_t lo = b * kSumBlock;
    const std::size_t hi = std::min(n, lo + kSumBlock);
    for (std::size_t i = lo; i < hi; ++i) acc.add(f(i));
    return acc.result();
}

}  // namespace detail

// Serial reference for blocked_sum: same blocking, same combination order.
template <class F>
double blocked_sum_serial(std::size_t n, F&& f) {
    if (n == 0) return 0.0;
    const std::size_t nb = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nb);
    for (std::size_t b = 0; b < nb; ++b) partial[b] = detail::block_partial(f, b, n);
    return deterministic_sum(partial);
}

// OpenMP-parallel blocked sum. Bit-identical to blocked_sum_serial for any
// thread count: blocks are fixed, partials land in per-block slots, and the
// final combine is serial.
template <class F>
double blocked_sum(std::size_t n, F&& f) {
#ifdef _OPENMP
    if (n == 0) return 0.0;
    const std::size_t nb = (n + kSumBlock - 1) / kSumBlock;
    if (nb < 2) return blocked_sum_serial(n, std::forward<F>(f));
    std::vector<double> partial(nb);
#pragma omp parallel for schedule(dynamic)
    for (long long b = 0; b < static_cast<long long>(nb); ++b)
        partial[static_cast<std::size_t>(b)] =
            detail::block_partial(f, static_cast<std::size_t>(b), n);
    return deterministic_sum(partial);
#else
    return blocked_sum_serial(n, std::forward<F>(f));
#endif
}

}  // namespace pseudolap
