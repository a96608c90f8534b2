#pragma once

#include <variant>

#include "oulevy/semigroup.hpp"

namespace oulevy {

// Time-averaged Fourier mode phi_{a,h}(x) = int_0^a P_s(e^{i<.,h>})(x) ds.
struct D1Function {
    double a = 1.0;
    Vec h;
};

struct PhiValue {
    Cplx value{};
    double error = 0.0;
    bool converged = true;
};

/// nested-quadrature evaluation of phi_{a,h}(x); |value| <= a always
PhiValue eval_phi(const OUModel& model, const D1Function& phi, const Vec& x,
                  const QuadOptions& opt = QuadOptions{1e-9, 1e-9, 4000});

/// closed-form generator action:
/// L phi_{a,h}(x) = e^{i<e^{aA}x,h>} e^{-int_0^a psi(e^{rA^T}h) dr} - e^{i<x,h>}
PhiValue apply_L_phi(const OUModel& model, const D1Function& phi, const Vec& x,
                     const QuadOptions& opt = QuadOptions{1e-9, 1e-9, 4000});

struct PhiIdentityReport {
    double residual = 0.0;  // |P_t phi_{a,h}(x) - phi_{a+t,h}(x) + phi_{t,h}(x)|
    double budget = 0.0;
    bool converged = true;
};

/// invariance identity P_t phi_{a,h} = phi_{a+t,h} - phi_{t,h}; the left side
/// exchanges the time integrals (one marginal_char per quadrature node)
PhiIdentityReport phi_semigroup_identity(const OUModel& model, const D1Function& phi,
                                         double t, const Vec& x,
                                         const QuadOptions& opt = QuadOptions{
                                             1e-9, 1e-9, 4000});

/// real or imaginary part of phi_{a,h} as a C^2_b bundle; derivatives are the
/// closed-form time integrals of flowed Fourier modes
SmoothFunction phi_as_smooth(const OUModel& model, const D1Function& phi,
                             bool imaginary_part = false,
                             const QuadOptions& opt = QuadOptions{1e-9, 1e-9, 4000});

/// fixed-rule trig-polynomial representation of phi_{a,h} (composite
/// Gauss-Kronrod in the time average); cheap to evaluate over path ensembles
TrigPolynomial phi_trig_representation(const OUModel& model, const D1Function& phi,
                                       int panels = 8,
                                       const QuadOptions& opt = QuadOptions{1e-10, 1e-10,
                                                                            4000});

// ---------------------------------------------------------------------------
// Fokker-Planck-Kolmogorov measure equation
// ---------------------------------------------------------------------------

struct EmpiricalMeasure {
    std::vector<Vec> atoms;  // uniform weights 1/N
    double t = 0.0;

    double total_mass() const { return atoms.empty() ? 0.0 : 1.0; }
    Cplx integrate(const std::function<Cplx(const Vec&)>& f) const;
};

/// snapshots of P_t* delta_x realized as empirical measures from one ensemble
std::vector<EmpiricalMeasure> empirical_snapshots(const OUModel& model, const Vec& x,
                                                  const std::vector<double>& grid,
                                                  int n_paths,
                                                  std::uint64_t master_seed,
                                                  const PathScheme& scheme = {},
                                                  int threads = 0);

using FpkObservable = std::variant<TrigPolynomial, D1Function>;

struct FpkRow {
    double t;
    double f_mean_re, f_mean_im;
    double lf_mean_re, lf_mean_im;
    double running_integral_re, running_integral_im;
    double residual;  // |int f dgamma_t - f(x) - int_0^t int L0 f dgamma_s ds|
};

struct FpkReport {
    std::vector<FpkRow> rows;
    double residual = 0.0;  // at the final time
    double budget = 0.0;
    int n_paths = 0;
};

/// weak-form measure equation d/dt int f dgamma = int L0 f dgamma, gamma_0 =
/// delta_x, gamma realized by path snapshots; the time integral is a
/// trapezoid over the snapshots with a Richardson error estimate
FpkReport fpk_residual(const OUModel& model, const FpkObservable& f, const Vec& x,
                       double t, int n_paths, int snapshots,
                       std::uint64_t master_seed, const PathScheme& scheme = {},
                       int threads = 0);

}  // namespace oulevy
