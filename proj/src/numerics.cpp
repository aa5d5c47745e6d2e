#include "pseudolap/numerics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace pseudolap {

void Tolerance::validate() const {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
        throw std::invalid_argument("Tolerance: negative or NaN tolerance");
    if (abs_tol == 0.0 && rel_tol == 0.0)
        throw std::invalid_argument("Tolerance: abs_tol and rel_tol both zero");
    if (max_iter < 1) throw std::invalid_argument("Tolerance: max_iter < 1");
}

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Ascending series, x <= 2:
//   K0 = -(log(x/2)+gamma) I0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k
void bessel_k01_series(double x, double& k0, double& k1) {
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x) + kEulerGamma;

    double term = 1.0;     // (x^2/4)^k / (k!)^2
    double i0 = 1.0;
    double s0 = 0.0;       // sum term*H_k
    double hk = 0.0;
    // I1/(x/2) = sum (x^2/4)^k / (k!(k+1)!),  and the K1 companion sum
    double term1 = 1.0;    // (x^2/4)^k / (k!(k+1)!)
    double i1h = 1.0;
    double s1 = 1.0;       // sum term1*(H_k + H_{k+1}), H_0 + H_1 = 1
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        i0 += term;
        s0 += term * hk;
        term1 *= q / (static_cast<double>(k) * (k + 1));
        i1h += term1;
        s1 += term1 * (2.0 * hk + 1.0 / (k + 1));
        if (term < 1e-18 * i0 && term1 < 1e-18 * i1h) break;
    }
    k0 = -lg * i0 + s0;
    // K1 = 1/x + (x/2) [ lg*I1h - 1/2 - (1/2) sum term1*(H_k+H_{k+1}-1) ] ...
    // assembled from the standard expansion K1(x) = 1/x + log(x/2) I1(x)
    //   - (x/4) sum (x^2/4)^k (psi(k+1)+psi(k+2)) / (k!(k+1)!)
    // with psi(k+1) = -gamma + H_k.
    const double i1 = 0.5 * x * i1h;
    k1 = 1.0 / x + (std::log(0.5 * x)) * i1 - 0.25 * x * (s1 - 2.0 * kEulerGamma * i1h);
}

// Continued-fraction evaluation (Thompson–Barnett CF2 with Temme's series),
// valid for x >= 2. Produces K0 and K1 together.
void bessel_k01_cf2(double x, double& k0, double& k1) {
    constexpr double eps = 1e-17;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 20000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    const double scale = std::sqrt(M_PI / (2.0 * x)) / s;
    // e^{-x} underflows past ~745; split so K0(700) is still representable.
    const double ex = std::exp(-0.5 * x);
    k0 = scale * ex * ex;
    k1 = k0 * (x + 0.5 - h) / x;
}

}  // namespace

double bessel_k0(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k0: requires x > 0");
    if (x > 745.0) return 0.0;
    double k0, k1;
    if (x <= 2.0)
        bessel_k01_series(x, k0, k1);
    else
        bessel_k01_cf2(x, k0, k1);
    return k0;
}

namespace detail {

double bessel_k1(double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k1: requires x > 0");
    if (x > 745.0) return 0.0;
    double k0, k1;
    if (x <= 2.0)
        bessel_k01_series(x, k0, k1);
    else
        bessel_k01_cf2(x, k0, k1);
    return k1;
}

double erfcx(double x) {
    if (x < 0.0) throw std::domain_error("erfcx: requires x >= 0");
    if (x <= 6.0) return std::exp(x * x) * std::erfc(x);
    // asymptotic series 1/(x sqrt(pi)) sum (-1)^k (2k-1)!!/(2x^2)^k
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= -(2.0 * k - 1.0) * inv2x2;
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum / (x * std::sqrt(M_PI));
}

double expint_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1: requires x > 0");
    if (x > 708.0) return 0.0;
    if (x <= 1.0) {
        double term = 1.0, sum = 0.0;
        for (int k = 1; k < 40; ++k) {
            term *= -x / k;
            sum += term / k;
            if (std::abs(term) < 1e-20) break;
        }
        return -kEulerGamma - std::log(x) - sum;
    }
    // modified Lentz on E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    const double tiny = 1e-300;
    double b = x + 1.0;
    double cc = 1.0 / tiny;
    double dd = 1.0 / b;
    double hh = dd;
    for (int i = 1; i <= 200; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        dd = 1.0 / (an * dd + b);
        cc = b + an / cc;
        const double del = cc * dd;
        hh *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return hh * std::exp(-x);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, long n,
               long& evals) {
    // n panels, n even
    const double h = (b - a) / n;
    double s_end = f(a) + f(b);
    double s_odd = 0.0, s_even = 0.0;
    for (long i = 1; i < n; ++i) {
        const double v = f(a + h * i);
        if (i & 1)
            s_odd += v;
        else
            s_even += v;
    }
    evals += n + 1;
    return h / 3.0 * (s_end + 4.0 * s_odd + 2.0 * s_even);
}

}  // namespace

QuadResult quad_doubling(const std::function<double(double)>& f, double a, double b,
                         const Tolerance& tol) {
    tol.validate();
    QuadResult r;
    if (a == b) return r;
    long n = 16;
    double prev = simpson(f, a, b, n, r.evaluations);
    for (int it = 0; it < tol.max_iter; ++it) {
        n *= 2;
        const double cur = simpson(f, a, b, n, r.evaluations);
        const double diff = std::abs(cur - prev);
        if (diff <= tol.abs_tol + tol.rel_tol * std::abs(cur)) {
            r.value = cur;
            r.error_estimate = diff;
            return r;
        }
        prev = cur;
        if (n >= (1L << 22))
            throw std::runtime_error("quad_doubling: no convergence within panel budget");
    }
    throw std::runtime_error("quad_doubling: max_iter exceeded");
}

QuadResult quad_0_inf(const std::function<double(double)>& f, const Tolerance& tol) {
    tol.validate();
    // (0, 1]: t = e^u. Expand the window to the left until the integrand is
    // dead; integrands here decay at least exponentially in u.
    auto g_lo = [&f](double u) {
        const double t = std::exp(u);
        const double v = f(t) * t;
        return std::isfinite(v) ? v : 0.0;
    };
    double u_min = -4.0;
    double scale = 0.0;
    for (double u = 0.0; u >= -700.0; u -= 2.0) {
        const double v = std::abs(g_lo(u));
        scale = std::max(scale, v);
        if (scale > 0.0 && v < 1e-18 * scale) {
            u_min = u;
            break;
        }
        u_min = u;
    }
    // [1, inf): t = 1/u, integrand f(1/u)/u^2 on (0, 1].
    auto g_hi = [&f](double u) {
        if (u <= 0.0) return 0.0;
        const double v = f(1.0 / u) / (u * u);
        return std::isfinite(v) ? v : 0.0;
    };
    const QuadResult lo = quad_doubling(g_lo, u_min, 0.0, tol);
    const QuadResult hi = quad_doubling(g_hi, 0.0, 1.0, tol);
    return {lo.value + hi.value, lo.error_estimate + hi.error_estimate,
            lo.evaluations + hi.evaluations};
}

QuadResult heat_integral_identity_check(double d, double lam, const Tolerance& tol) {
    if (!(d > 0.0)) throw std::domain_error("heat_integral_identity_check: d > 0 required");
    if (!(lam < 0.0)) throw std::domain_error("heat_integral_identity_check: lam < 0 required");
    auto f = [d, lam](double t) {
        return std::exp(lam * t - d * d / (4.0 * t)) * std::pow(t, -1.5);
    };
    return quad_0_inf(f, tol);
}

// ---------------------------------------------------------------------------
// Root bracketing (Brent)
// ---------------------------------------------------------------------------

double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      const Tolerance& tol) {
    tol.validate();
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("bracketed_root: no sign change on [lo, hi]");
    double c = a, fc = fa;
    double e = b - a, dstep = e;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = dstep = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 =
            0.5 * (tol.abs_tol + tol.rel_tol * std::abs(b)) +
            2.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = dstep;
                dstep = p / q;
            } else {
                dstep = xm;
                e = dstep;
            }
        } else {
            dstep = xm;
            e = dstep;
        }
        a = b;
        fa = fb;
        b += (std::abs(dstep) > tol1) ? dstep : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw std::runtime_error("bracketed_root: max_iter exceeded");
}

// ---------------------------------------------------------------------------
// Deterministic summation
// ---------------------------------------------------------------------------

double deterministic_sum(std::span<const double> terms) {
    double s = 0.0, c = 0.0;
    for (const double x : terms) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

}  // namespace pseudolap
