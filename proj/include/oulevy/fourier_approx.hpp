#pragma once

#include <vector>

#include "oulevy/smooth_function.hpp"
#include "oulevy/trig_polynomial.hpp"

namespace oulevy {

struct MollifyOptions {
    int oversample = 4;  // grid spacing 1 / (4 n oversample)
};

// The constructive approximation f -> f_{nm}: mollify with a C^inf kernel of
// radius 1/n, cut off with a plateau function at scale n, periodize with
// period 4n, Fourier-expand by FFT and truncate at |h|_2 <= m. Not
// thread-safe (FFTW plans); intended for sequential use.
class FourierApproximation {
public:
    FourierApproximation(const SmoothFunction& f, int n, MollifyOptions opt = {});

    int dim() const { return dim_; }
    int n() const { return n_; }
    int points_per_axis() const { return npts_; }
    double spacing() const { return spacing_; }
    double period() const { return 4.0 * n_; }

    /// f_{nm} as an evaluable trig polynomial (frequencies (pi/2n) h, |h| <= m)
    TrigPolynomial truncate(int m) const;

    /// max over the grid of |f_{nm} - f_n| (truncation error only)
    double grid_sup_error_vs_periodized(int m) const;

    struct GridNorms {
        double value;
        double gradient;  // Euclidean norm of the gradient
        double hessian;   // spectral norm
    };
    /// sup-norms of the truncated series and its derivatives over the grid
    GridNorms grid_norms(int m) const;

    /// largest m representable on this grid
    int max_m() const { return npts_ / 2 - 1; }

private:
    std::vector<double> masked_inverse(int m, const std::vector<int>& deriv_axes) const;

    int dim_, n_, npts_;
    double spacing_;
    std::vector<Cplx> spectrum_;      // c_h, FFT layout
    std::vector<double> periodized_;  // f_n^* on the grid
};

/// convenience wrapper for the full construction
TrigPolynomial mollify_periodize(const SmoothFunction& f, int n, int m,
                                 MollifyOptions opt = {});

/// the uniform bound M of the construction, expressed through the declared
/// bounds of f and the cutoff profile constants
double lemma_uniform_bound(const SmoothFunction& f);

/// smoothstep-composed plateau: 1 on [0,1], 0 beyond 3/2, C^inf in between
double plateau_profile(double r);

}  // namespace oulevy
