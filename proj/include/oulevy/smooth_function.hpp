#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "oulevy/trig_polynomial.hpp"

namespace oulevy {

// Evaluable C^2_b bundle with declared sup-norm bounds. The optional fields
// carry structure the quadrature layer can exploit: exact compact support and
// a dominant oscillation frequency.
struct SmoothFunction {
    int dim = 1;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;

    double bound_value = 0.0;    // ||f||_0
    double bound_gradient = 0.0; // ||Df||_0
    double bound_hessian = 0.0;  // ||D^2 f||_0 (spectral norm)

    std::optional<double> support_radius;  // f == 0 for |x| > support_radius
    std::optional<double> osc_hint;        // dominant frequency along rays
};

/// C^2 bump supported in the closed ball: profile (1 - |x-c|^2/R^2)^3.
SmoothFunction make_bump(const Vec& center, double radius);

/// real (or imaginary) part of a trig polynomial wrapped as a C^2_b bundle
SmoothFunction trig_as_smooth(const TrigPolynomial& p, bool imaginary_part = false);

/// x -> exp(-|x|^2 / (2 s^2)), a convenient non-compact C^2_0 test function
SmoothFunction make_gaussian_profile(int dim, double s);

struct DerivativeCheck {
    double max_gradient_error = 0.0;
    double max_hessian_asym = 0.0;
    bool passed = true;
};

/// central finite-difference check of the declared gradient and Hessian
/// symmetry at random probe points
DerivativeCheck validate_derivatives(const SmoothFunction& f, int n_probes,
                                     double probe_radius, unsigned seed,
                                     double step = 1e-4);

struct ShellDecayRow {
    double radius;
    double max_value;
    double max_gradient;
    double max_hessian;
    double max_drift_pairing;  // max |<A x, Df(x)>| over the shell
};

struct ShellDecayReport {
    std::vector<ShellDecayRow> rows;
    bool consistent_with_decay_core = false;  // all four columns decay below tol
    double tol = 1e-6;
};

/// samples shells |x| = r and reports decay of f, Df, D^2 f and <Ax, Df(x)>;
/// a sampled diagnostic, not a proof of membership
ShellDecayReport d0_membership(const SmoothFunction& f, const Mat& a,
                               const std::vector<double>& shell_radii,
                               int samples_per_shell = 64, double tol = 1e-6);

}  // namespace oulevy
