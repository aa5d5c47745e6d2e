#include "pseudolap/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lattice_internal.hpp"
#include "pseudolap/reduce.hpp"

namespace pseudolap {

namespace {
constexpr double kTwoPi = 6.283185307179586476925;
constexpr double kFourPiSq = 39.47841760435743447534;
}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::FlatTorus2: return "torus2";
        case ModelKind::FlatTorus3: return "torus3";
        case ModelKind::Sphere3: return "sphere3";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// LatticeBasis
// ---------------------------------------------------------------------------

LatticeBasis LatticeBasis::square(double L) {
    LatticeBasis b;
    b.dimension = 2;
    b.rows = {{{L, 0, 0}, {0, L, 0}, {0, 0, 0}}};
    return b;
}

LatticeBasis LatticeBasis::cubic(double L) {
    LatticeBasis b;
    b.dimension = 3;
    b.rows = {{{L, 0, 0}, {0, L, 0}, {0, 0, L}}};
    return b;
}

LatticeBasis LatticeBasis::from_rows(int dim, const std::vector<double>& entries) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("LatticeBasis: dimension must be 2 or 3");
    if (entries.size() != static_cast<std::size_t>(dim * dim))
        throw std::invalid_argument("LatticeBasis: wrong number of entries");
    LatticeBasis b;
    b.dimension = dim;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) b.rows[i][j] = entries[i * dim + j];
    if (!(b.det() > 0.0))
        throw std::invalid_argument("LatticeBasis: rows must be independent with det > 0");
    return b;
}

double LatticeBasis::det() const {
    const auto& r = rows;
    if (dimension == 2) return r[0][0] * r[1][1] - r[0][1] * r[1][0];
    return r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
           r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
           r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
}

LatticeBasis LatticeBasis::dual() const {
    LatticeBasis d;
    d.dimension = dimension;
    const double dt = det();
    const auto& r = rows;
    if (dimension == 2) {
        // (M^{-1})^T for M = [[a,b],[c,d]]: rows (d,-c)/det, (-b,a)/det
        d.rows = {{{r[1][1] / dt, -r[1][0] / dt, 0},
                   {-r[0][1] / dt, r[0][0] / dt, 0},
                   {0, 0, 0}}};
        return d;
    }
    auto cross = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return std::array<double, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                     a[0] * b[1] - a[1] * b[0]};
    };
    const auto c0 = cross(r[1], r[2]);
    const auto c1 = cross(r[2], r[0]);
    const auto c2 = cross(r[0], r[1]);
    for (int j = 0; j < 3; ++j) {
        d.rows[0][j] = c0[j] / dt;
        d.rows[1][j] = c1[j] / dt;
        d.rows[2][j] = c2[j] / dt;
    }
    return d;
}

std::array<double, 3> LatticeBasis::vec(long long m, long long n, long long l) const {
    std::array<double, 3> v{0, 0, 0};
    for (int j = 0; j < 3; ++j)
        v[j] = m * rows[0][j] + n * rows[1][j] + (dimension == 3 ? l * rows[2][j] : 0.0);
    return v;
}

double LatticeBasis::shortest_vector() const {
    double best = 1e300;
    const long long K = 5;
    for (long long m = -K; m <= K; ++m)
        for (long long n = -K; n <= K; ++n)
            for (long long l = (dimension == 3 ? -K : 0); l <= (dimension == 3 ? K : 0); ++l) {
                if (m == 0 && n == 0 && l == 0) continue;
                best = std::min(best, detail::norm3(vec(m, n, l)));
            }
    return best;
}

// ---------------------------------------------------------------------------
// ManifoldModel
// ---------------------------------------------------------------------------

ManifoldModel ManifoldModel::flat_torus2(const LatticeBasis& basis) {
    if (basis.dimension != 2) throw std::invalid_argument("flat_torus2: 2x2 basis required");
    return {ModelKind::FlatTorus2, basis, 2, basis.det()};
}

ManifoldModel ManifoldModel::flat_torus3(const LatticeBasis& basis) {
    if (basis.dimension != 3) throw std::invalid_argument("flat_torus3: 3x3 basis required");
    return {ModelKind::FlatTorus3, basis, 3, basis.det()};
}

ManifoldModel ManifoldModel::sphere3() {
    ManifoldModel m;
    m.kind = ModelKind::Sphere3;
    m.dimension = 3;
    m.volume = 2.0 * M_PI * M_PI;
    return m;
}

// ---------------------------------------------------------------------------
// Spectrum enumeration
// ---------------------------------------------------------------------------

namespace {

SpectrumTable enumerate_sphere(const ManifoldModel& model, double lambda_max) {
    SpectrumTable tab;
    tab.model = model;
    tab.cutoff = lambda_max;
    tab.complete = true;
    for (long long k = 0;; ++k) {
        const double mu = static_cast<double>(k) * (k + 2);
        if (mu > lambda_max) break;
        tab.levels.push_back({mu, (k + 1) * (k + 1)});
    }
    return tab;
}

// Dual Gram matrix: G*_{ij} = <A*_i, A*_j>; eigenvalue of k is
// 4 pi^2 k^T G* k.
std::array<std::array<double, 3>, 3> dual_gram(const LatticeBasis& basis) {
    const LatticeBasis d = basis.dual();
    std::array<std::array<double, 3>, 3> g{};
    for (int i = 0; i < basis.dimension; ++i)
        for (int j = 0; j < basis.dimension; ++j) g[i][j] = detail::dot3(d.rows[i], d.rows[j]);
    return g;
}

bool gram_is_integer(const std::array<std::array<double, 3>, 3>& g, int dim,
                     std::array<std::array<long long, 3>, 3>& gi) {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const double r = std::round(g[i][j]);
            if (std::abs(g[i][j] - r) > 1e-12 * std::max(1.0, std::abs(g[i][j]))) return false;
            gi[i][j] = static_cast<long long>(r);
        }
    return true;
}

// Integer fast path: exact arithmetic histogram over q = k^T G k <= Q.
SpectrumTable enumerate_torus_integer(const ManifoldModel& model,
                                      const std::array<std::array<long long, 3>, 3>& gi,
                                      double lambda_max) {
    const int dim = model.dimension;
    const long long Q = static_cast<long long>(std::floor(lambda_max / kFourPiSq));
    const auto bounds = detail::coeff_bounds(model.basis, std::sqrt(lambda_max) / kTwoPi);
    const long long M = bounds[0], N = bounds[1], L = (dim == 3 ? bounds[2] : 0);
    const double box = (2.0 * M + 1) * (2.0 * N + 1) * (2.0 * L + 1);
    if (Q > 100000000LL || box > 6.0e9)
        throw std::runtime_error("enumerate_levels: cutoff too large for memory budget");
    std::vector<long long> hist(static_cast<std::size_t>(Q) + 1, 0);

#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<long long> local(hist.size(), 0);
#pragma omp for schedule(dynamic, 1) nowait
        for (long long m = -M; m <= M; ++m) {
            for (long long n = -N; n <= N; ++n)
                for (long long l = -L; l <= L; ++l) {
                    const long long q = gi[0][0] * m * m + gi[1][1] * n * n + gi[2][2] * l * l +
                                        2 * (gi[0][1] * m * n + gi[0][2] * m * l + gi[1][2] * n * l);
                    if (q >= 0 && q <= Q && kFourPiSq * static_cast<double>(q) <= lambda_max)
                        ++local[static_cast<std::size_t>(q)];
                }
        }
#pragma omp critical
        for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += local[i];
    }
#else
    for (long long m = -M; m <= M; ++m)
        for (long long n = -N; n <= N; ++n)
            for (long long l = -L; l <= L; ++l) {
                const long long q = gi[0][0] * m * m + gi[1][1] * n * n + gi[2][2] * l * l +
                                    2 * (gi[0][1] * m * n + gi[0][2] * m * l + gi[1][2] * n * l);
                if (q >= 0 && q <= Q && kFourPiSq * static_cast<double>(q) <= lambda_max)
                    ++hist[static_cast<std::size_t>(q)];
            }
#endif

    SpectrumTable tab;
    tab.model = model;
    tab.cutoff = lambda_max;
    tab.complete = true;
    for (long long q = 0; q <= Q; ++q)
        if (hist[static_cast<std::size_t>(q)] > 0)
            tab.levels.push_back({kFourPiSq * static_cast<double>(q), hist[static_cast<std::size_t>(q)]});
    return tab;
}

SpectrumTable enumerate_torus_general(const ManifoldModel& model,
                                      const std::array<std::array<double, 3>, 3>& g,
                                      double lambda_max) {
    const int dim = model.dimension;
    const auto bounds = detail::coeff_bounds(model.basis, std::sqrt(lambda_max) / kTwoPi);
    const long long M = bounds[0], N = bounds[1], L = (dim == 3 ? bounds[2] : 0);
    const double box = (2.0 * M + 1) * (2.0 * N + 1) * (2.0 * L + 1);
    if (box > 2.5e8)
        throw std::runtime_error("enumerate_levels: cutoff too large for memory budget");

    std::vector<double> vals;
    vals.reserve(1 << 12);
    for (long long m = -M; m <= M; ++m)
        for (long long n = -N; n <= N; ++n)
            for (long long l = -L; l <= L; ++l) {
                const double q = g[0][0] * m * m + g[1][1] * n * n + g[2][2] * l * l +
                                 2.0 * (g[0][1] * m * n + g[0][2] * m * l + g[1][2] * n * l);
                const double mu = kFourPiSq * q;
                if (mu <= lambda_max) vals.push_back(mu);
            }
    std::sort(vals.begin(), vals.end());

    SpectrumTable tab;
    tab.model = model;
    tab.cutoff = lambda_max;
    tab.complete = true;
    // coincidence merge at 1e-9 relative
    std::size_t i = 0;
    while (i < vals.size()) {
        std::size_t j = i + 1;
        while (j < vals.size() && vals[j] - vals[i] <= 1e-9 * std::max(1.0, vals[i])) ++j;
        tab.levels.push_back({vals[i], static_cast<long long>(j - i)});
        i = j;
    }
    return tab;
}

}  // namespace

SpectrumTable enumerate_levels(const ManifoldModel& model, double lambda_max) {
    if (!(lambda_max > 0.0)) throw std::domain_error("enumerate_levels: lambda_max > 0 required");
    if (model.kind == ModelKind::Sphere3) return enumerate_sphere(model, lambda_max);

    const auto g = dual_gram(model.basis);
    std::array<std::array<long long, 3>, 3> gi{};
    if (gram_is_integer(g, model.dimension, gi))
        return enumerate_torus_integer(model, gi, lambda_max);
    return enumerate_torus_general(model, g, lambda_max);
}

// ---------------------------------------------------------------------------
// Heat trace
// ---------------------------------------------------------------------------

namespace detail {

double heat_trace_direct(const ManifoldModel& model, double t) {
    if (!(t > 0.0)) throw std::domain_error("heat_trace: t > 0 required");
    if (model.kind == ModelKind::Sphere3) {
        // Theta = e^t sum_{n>=1} n^2 e^{-n^2 t}
        NeumaierAcc acc;
        for (long long n = 1;; ++n) {
            const double term = static_cast<double>(n) * n * std::exp(-static_cast<double>(n) * n * t);
            acc.add(term);
            if (static_cast<double>(n) * n * t > 50.0 + 2.0 * std::log(static_cast<double>(n))) break;
        }
        return std::exp(t) * acc.result();
    }
    // sum over the dual lattice of e^{-4 pi^2 |k*|^2 t}
    const double R = std::sqrt(50.0 / t) / kTwoPi;
    const LatticeBasis dual = model.basis.dual();
    const auto bounds = detail::coeff_bounds(dual, R);
    const int dim = model.dimension;
    const long long M = bounds[0], N = bounds[1], L = (dim == 3 ? bounds[2] : 0);
    NeumaierAcc acc;
    for (long long m = -M; m <= M; ++m)
        for (long long n = -N; n <= N; ++n)
            for (long long l = -L; l <= L; ++l) {
                const auto v = dual.vec(m, n, l);
                acc.add(std::exp(-kFourPiSq * dot3(v, v) * t));
            }
    return acc.result();
}

double heat_trace_dual(const ManifoldModel& model, double t) {
    if (!(t > 0.0)) throw std::domain_error("heat_trace: t > 0 required");
    if (model.kind == ModelKind::Sphere3) {
        // S(t) = sqrt(pi)/4 t^{-3/2} Phi0 - sqrt(pi) pi^2/2 t^{-5/2} Phi2,
        // Phi0 = 1 + 2 sum e^{-pi^2 m^2/t}, Phi2 = 2 sum m^2 e^{-pi^2 m^2/t}
        double p0 = 0.0, p2 = 0.0;
        for (long long m = 1;; ++m) {
            const double e = std::exp(-M_PI * M_PI * m * m / t);
            p0 += e;
            p2 += static_cast<double>(m) * m * e;
            if (M_PI * M_PI * m * m / t > 60.0) break;
        }
        const double sq = std::sqrt(M_PI);
        const double S = sq / 4.0 * std::pow(t, -1.5) * (1.0 + 2.0 * p0) -
                         sq * M_PI * M_PI * std::pow(t, -2.5) * p2;
        return std::exp(t) * S;
    }
    // Vol/(4 pi t)^{d/2} sum_{v in L} e^{-|v|^2/(4t)}
    const double R = std::sqrt(220.0 * t);
    const auto bounds = detail::coeff_bounds(model.basis, R);
    const int dim = model.dimension;
    const long long M = bounds[0], N = bounds[1], L = (dim == 3 ? bounds[2] : 0);
    NeumaierAcc acc;
    for (long long m = -M; m <= M; ++m)
        for (long long n = -N; n <= N; ++n)
            for (long long l = -L; l <= L; ++l) {
                const auto v = model.basis.vec(m, n, l);
                acc.add(std::exp(-dot3(v, v) / (4.0 * t)));
            }
    return model.volume * std::pow(4.0 * M_PI * t, -0.5 * model.dimension) * acc.result();
}

}  // namespace detail

double heat_trace(const ManifoldModel& model, double t) {
    if (!(t > 0.0)) throw std::domain_error("heat_trace: t > 0 required");
    return t >= 1.0 ? detail::heat_trace_direct(model, t) : detail::heat_trace_dual(model, t);
}

// ---------------------------------------------------------------------------
// Resolvent kernels
// ---------------------------------------------------------------------------

namespace {

double resolvent_sphere(double theta, double lam) {
    if (!(theta > 0.0 && theta < M_PI))
        throw std::domain_error("resolvent_kernel: S^3 distance must lie in (0, pi)");
    const double s2 = -lam - 1.0;  // kernel variable after the unit shift
    const double sth = std::sin(theta);
    if (s2 > 1e-12) {
        const double s = std::sqrt(s2);
        // sinh((pi-theta)s)/sinh(pi s), overflow-safe form
        const double num = std::exp(-theta * s) * (1.0 - std::exp(-2.0 * (M_PI - theta) * s));
        const double den = 1.0 - std::exp(-2.0 * M_PI * s);
        return num / (4.0 * M_PI * sth * den);
    }
    if (s2 < -1e-12) {
        const double sig = std::sqrt(-s2);
        return std::sin((M_PI - theta) * sig) / (4.0 * M_PI * sth * std::sin(M_PI * sig));
    }
    return (M_PI - theta) / (4.0 * M_PI * M_PI * sth);
}

double resolvent_torus(const ManifoldModel& model, double dist, double lam) {
    const double a_len = detail::norm3(model.basis.rows[0]);
    if (!(dist > 0.0 && dist < 0.5 * a_len))
        throw std::domain_error(
            "resolvent_kernel: torus separation must lie in (0, |A|/2) along the first period");
    const double s = std::sqrt(-lam);
    std::array<double, 3> disp{0, 0, 0};
    for (int j = 0; j < 3; ++j) disp[j] = dist * model.basis.rows[0][j] / a_len;

    if (model.dimension == 3) {
        auto f = [s](double r) { return std::exp(-s * r) / (4.0 * M_PI * r); };
        auto fb = [s](double r) { return std::exp(-s * r) / (4.0 * M_PI * r); };
        return detail::lattice_sum(model.basis, disp, false, f, fb, 1e-15).value;
    }
    auto f = [s](double r) { return bessel_k0(s * r) / (2.0 * M_PI); };
    auto fb = [s](double r) {
        const double z = s * r;
        return (z < 0.25 ? 3.0 - std::log(z) : 2.0 * std::exp(-z) / std::sqrt(z)) / (2.0 * M_PI);
    };
    return detail::lattice_sum(model.basis, disp, false, f, fb, 1e-15).value;
}

}  // namespace

double resolvent_kernel(const ManifoldModel& model, double dist, double lam) {
    if (!(dist > 0.0)) throw std::domain_error("resolvent_kernel: dist > 0 required");
    if (!(lam < 0.0)) throw std::domain_error("resolvent_kernel: lam < 0 required");
    if (model.kind == ModelKind::Sphere3) return resolvent_sphere(dist, lam);
    return resolvent_torus(model, dist, lam);
}

}  // namespace pseudolap
