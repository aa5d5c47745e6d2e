#pragma once

// Shared lattice-sum machinery for models.cpp and scattering.cpp.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "pseudolap/models.hpp"
#include "pseudolap/reduce.hpp"

namespace pseudolap::detail {

inline double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm3(const std::array<double, 3>& a) { return std::sqrt(dot3(a, a)); }

// Coefficient box so that every lattice vector with |v| <= R is covered:
// n_i = <v, A*_i>, hence |n_i| <= R |A*_i|.
inline std::array<long long, 3> coeff_bounds(const LatticeBasis& basis, double R) {
    const LatticeBasis dual = basis.dual();
    std::array<long long, 3> b{0, 0, 0};
    for (int i = 0; i < basis.dimension; ++i)
        b[i] = static_cast<long long>(std::floor(R * norm3(dual.rows[i]))) + 1;
    return b;
}

// Shortest distance from the origin to a lattice vector outside the
// coefficient box max|n_i| <= k: |v| >= (k+1)/max_i |A*_i|.
inline double outside_box_distance(const LatticeBasis& basis, long long k) {
    const LatticeBasis dual = basis.dual();
    double m = 0.0;
    for (int i = 0; i < basis.dimension; ++i) m = std::max(m, norm3(dual.rows[i]));
    return static_cast<double>(k + 1) / m;
}

struct LatticeSumResult {
    double value = 0.0;
    double tail_bound = 0.0;
};

// Sum f(|disp + v|) over lattice vectors v, expanding coefficient shells
// until the analytic remainder bound drops below eps relative to the
// accumulated value. bound_f must dominate |f| pointwise and decrease.
template <class F, class FB>
LatticeSumResult lattice_sum(const LatticeBasis& basis, const std::array<double, 3>& disp,
                             bool skip_zero, F&& f, FB&& bound_f, double eps,
                             long long max_shells = 4000) {
    const int dim = basis.dimension;
    const double disp_norm = norm3(disp);
    NeumaierAcc acc;
    auto add_point = [&](long long m, long long n, long long l) {
        if (skip_zero && m == 0 && n == 0 && l == 0) return;
        const auto v = basis.vec(m, n, l);
        const std::array<double, 3> w{disp[0] + v[0], disp[1] + v[1], disp[2] + v[2]};
        acc.add(f(norm3(w)));
    };

    // points with max coefficient norm exactly k, fixed face-by-face order
    auto sweep_shell = [&](long long k) {
        if (k == 0) {
            add_point(0, 0, 0);
            return;
        }
        if (dim == 2) {
            for (long long s = -1; s <= 1; s += 2)
                for (long long n = -k; n <= k; ++n) add_point(s * k, n, 0);
            for (long long s = -1; s <= 1; s += 2)
                for (long long m = -k + 1; m <= k - 1; ++m) add_point(m, s * k, 0);
        } else {
            for (long long s = -1; s <= 1; s += 2)
                for (long long n = -k; n <= k; ++n)
                    for (long long l = -k; l <= k; ++l) add_point(s * k, n, l);
            for (long long s = -1; s <= 1; s += 2)
                for (long long m = -k + 1; m <= k - 1; ++m)
                    for (long long l = -k; l <= k; ++l) add_point(m, s * k, l);
            for (long long s = -1; s <= 1; s += 2)
                for (long long m = -k + 1; m <= k - 1; ++m)
                    for (long long n = -k + 1; n <= k - 1; ++n) add_point(m, n, s * k);
        }
    };

    // remainder over shells > k: per-shell point counts times the dominating
    // envelope at the nearest possible distance
    auto remainder_bound = [&](long long k) {
        double rem = 0.0;
        for (long long j = k + 1; j <= k + 2000; ++j) {
            const double r = outside_box_distance(basis, j - 1) - disp_norm;
            if (r <= 0.0) return 1e300;
            const double count = (dim == 2) ? 8.0 * static_cast<double>(j)
                                            : 24.0 * static_cast<double>(j) * j + 2.0;
            const double contrib = count * bound_f(r);
            rem += contrib;
            if (contrib <= 1e-6 * rem) break;
        }
        return rem;
    };

    for (long long k = 0;; ++k) {
        sweep_shell(k);
        if (k >= 1) {
            const double scale = std::max(std::abs(acc.result()), 1e-300);
            const double rem = remainder_bound(k);
            if (rem <= eps * scale) return {acc.result(), rem};
        }
        if (k >= max_shells) return {acc.result(), remainder_bound(k)};
    }
}

}  // namespace pseudolap::detail
