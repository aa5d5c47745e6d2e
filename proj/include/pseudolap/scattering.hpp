#pragma once

#include <stdexcept>

#include "pseudolap/models.hpp"

namespace pseudolap {

enum class EvalMethod { closed_form, spectral_sum, asymptotic };

std::string to_string(EvalMethod m);

struct ScatterEval {
    double value = 0.0;
    double error_bound = 0.0;
    EvalMethod method = EvalMethod::closed_form;
};

// Extension angle alpha in [0, pi); alpha = 0 is the Friedrichs extension
// (the plain Laplacian), where cot(alpha) is undefined.
struct ExtensionParam {
    double alpha = 0.0;
    double cot_alpha = 0.0;
    bool friedrichs = true;

    static ExtensionParam from_alpha(double alpha);
};

// Evaluation too close to an eigenvalue of the operator involved.
struct pole_error : std::runtime_error {
    double lambda;
    double nearest_mu;
    pole_error(double lam, double mu)
        : std::runtime_error("evaluation at a spectral pole"), lambda(lam), nearest_mu(mu) {}
};

// Scattering coefficient F(lambda) from the closed kernel representations:
// S^3 for any real lambda off the spectrum (cot continuation above -1),
// flat tori for lambda < 0 (image sums, Ewald-split near zero).
ScatterEval f_closed(const ManifoldModel& model, double lam);

// F(lam) - F(lam0) through the eigenfunction expansion over the table,
// with the Weyl-density integral beyond the cutoff. Homogeneity gives
// |phi_k(P)|^2 = m_k / Vol.
ScatterEval f_diff_spectral(const ManifoldModel& model, double lam, double lam0,
                            const SpectrumTable& table);

// F'(lambda) < 0. Closed derivative of the kernel representation.
ScatterEval f_prime(const ManifoldModel& model, double lam);
// Same quantity through -(1/Vol) sum m_k/(mu_k - lam)^2 over the table.
ScatterEval f_prime_spectral(const ManifoldModel& model, double lam, const SpectrumTable& table);

// Large negative-lambda laws: d=2 Fay form (flat conformal factor), d=3
// leading sqrt(-lambda)/4pi with model-specific remainder tags.
ScatterEval f_asymptotic(const ManifoldModel& model, double lam);

// Krein coefficient k = sin(alpha) / (F sin(alpha) - cos(alpha)).
double krein_coefficient(const ManifoldModel& model, double lam, const ExtensionParam& ext);

// g(lambda) = F' sin(alpha) / (cos(alpha) - F sin(alpha)), the real trace of
// the resolvent difference on the real axis off both spectra. Zero for the
// Friedrichs extension.
double shift_derivative(const ManifoldModel& model, double lam, const ExtensionParam& ext);

namespace detail {

// Image-sum primitives for flat tori (lambda < 0, s = sqrt(-lambda)):
//   A3 = sum' e^{-s|v|},  B3 = sum' e^{-s|v|}/|v|,
//   K0S = sum' K0(s|v|),  K1S = sum' K1(s|v|) |v|.
double torus_image_exp(const ManifoldModel& model, double s);       // A3
double torus_image_exp_over_r(const ManifoldModel& model, double s);  // B3
double torus_image_k0(const ManifoldModel& model, double s);        // K0S
double torus_image_k1_r(const ManifoldModel& model, double s);      // K1S

// Ewald-split closed forms, valid for every lam < 0 including lam -> 0-.
double f_torus_ewald(const ManifoldModel& model, double lam);

// F through the best closed route for real lambda off the spectrum; for
// torus gaps (lambda >= 0) falls back to the spectral difference from a
// reference point. Used by the secular solver.
double f_eval_secular(const ManifoldModel& model, double lam, const SpectrumTable& table,
                      double f_ref, double lam_ref);

// Weyl-density tail integral of 1/((mu-lam0)(mu-lam)) from cutoff to
// infinity (times the eigenvalue density without the volume factor).
double weyl_tail_diff(const ManifoldModel& model, double cutoff, double lam, double lam0);

}  // namespace detail

}  // namespace pseudolap
