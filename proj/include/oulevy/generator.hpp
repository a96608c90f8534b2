#pragma once

#include "oulevy/levy_integral.hpp"
#include "oulevy/ou_model.hpp"
#include "oulevy/smooth_function.hpp"
#include "oulevy/trig_polynomial.hpp"

namespace oulevy {

struct GeneratorResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

struct GeneratorResultC {
    Cplx value{};
    double error = 0.0;
    bool converged = true;
};

/// L1 f(x): compensated jump integral + (1/2) Tr(Q D^2 f(x)) + <a, Df(x)>
GeneratorResult apply_L1(const LevyTriplet& triplet, const SmoothFunction& f,
                         const Vec& x, double split_radius = 0.01,
                         const QuadOptions& opt = QuadOptions{1e-9, 1e-7, 4000});

/// L0 f(x) = <Ax, Df(x)> + L1 f(x)
GeneratorResult apply_L0(const OUModel& model, const SmoothFunction& f, const Vec& x,
                         double split_radius = 0.01,
                         const QuadOptions& opt = QuadOptions{1e-9, 1e-7, 4000});

/// exact action on trig polynomials:
/// sum_k c_k e^{i<h_k,x>} (i<Ax,h_k> - psi(h_k)); the only quadrature is psi's
GeneratorResultC apply_L0_trig(const OUModel& model, const TrigPolynomial& p,
                               const Vec& x,
                               const QuadOptions& opt = QuadOptions{1e-10, 1e-10, 4000});

}  // namespace oulevy
