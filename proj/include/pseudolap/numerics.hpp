#pragma once

#include <functional>
#include <span>
#include <stdexcept>

namespace pseudolap {

struct Tolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_iter = 200;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

// Modified Bessel function K0. Series for x <= 2, continued fraction above.
// Relative error below 1e-12 on [1e-6, 700]; returns 0 past the underflow
// point x > 745. Throws std::domain_error for x <= 0.
double bessel_k0(double x);

namespace detail {
// K1, same regimes as K0. Internal helper (needed for d/dlambda of 2D
// lattice sums); not part of the public surface.
double bessel_k1(double x);
// Scaled complementary error function exp(x^2) erfc(x), x >= 0.
double erfcx(double x);
// Exponential integral E1(x), x > 0.
double expint_e1(double x);
}  // namespace detail

// Composite-Simpson refinement with interval doubling until two successive
// refinements differ by less than the tolerance.
QuadResult quad_doubling(const std::function<double(double)>& f, double a, double b,
                         const Tolerance& tol);

// Integral over (0, inf): substitution t = e^u near 0 and t = 1/u at infinity.
// The integrand must decay at both ends after substitution.
QuadResult quad_0_inf(const std::function<double(double)>& f, const Tolerance& tol);

// Quadrature of int_0^inf e^{lam t} t^{-3/2} e^{-d^2/(4t)} dt. The closed form
// is (2 sqrt(pi)/d) e^{-d sqrt(-lam)}; the caller compares.
QuadResult heat_integral_identity_check(double d, double lam, const Tolerance& tol);

// Brent root bracketing. Requires f(lo) f(hi) < 0; deterministic for
// identical inputs. Throws std::invalid_argument when the bracket has no
// sign change and std::runtime_error when max_iter is exhausted.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      const Tolerance& tol);

// Neumaier-compensated sum in index order. Identical result across runs;
// never exposes a nondeterministic reduction order.
double deterministic_sum(std::span<const double> terms);

}  // namespace pseudolap
