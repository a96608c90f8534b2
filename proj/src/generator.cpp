#include "oulevy/generator.hpp"

#include <cmath>
#include <stdexcept>

namespace oulevy {

GeneratorResult apply_L1(const LevyTriplet& triplet, const SmoothFunction& f,
                         const Vec& x, double split_radius, const QuadOptions& opt) {
    if (x.size() != triplet.dim() || f.dim != triplet.dim())
        throw std::invalid_argument("apply_L1: dimension mismatch");
    GeneratorResult res;
    const Vec grad = f.gradient(x);
    res.value = 0.5 * (triplet.q() * f.hessian(x)).trace() + triplet.a().dot(grad);
    if (!triplet.has_jumps()) return res;

    const double fx = f.value(x);
    CompensatedIntegrand gi;
    gi.g = [&f, &x, fx, &grad](const Vec& y) {
        double v = f.value(x + y) - fx;
        if (y.norm() <= 1.0) v -= y.dot(grad);
        return v;
    };
    gi.sup_bound = 2.0 * f.bound_value;
    if (f.support_radius) {
        gi.limit_at_infinity = -fx;
        gi.limit_radius = *f.support_radius + x.norm();
    }
    gi.osc_hint = f.osc_hint;
    const auto jump = levy_integral(triplet.nu(), gi, split_radius, opt);
    res.value += jump.value;
    res.error = jump.error;
    res.converged = jump.converged;
    return res;
}

GeneratorResult apply_L0(const OUModel& model, const SmoothFunction& f, const Vec& x,
                         double split_radius, const QuadOptions& opt) {
    GeneratorResult res = apply_L1(model.triplet(), f, x, split_radius, opt);
    res.value += (model.a() * x).dot(f.gradient(x));
    return res;
}

GeneratorResultC apply_L0_trig(const OUModel& model, const TrigPolynomial& p,
                               const Vec& x, const QuadOptions& opt) {
    if (x.size() != model.dim() || p.dim() != model.dim())
        throw std::invalid_argument("apply_L0_trig: dimension mismatch");
    GeneratorResultC res;
    const Cplx i_unit{0.0, 1.0};
    const Vec ax = model.a() * x;
    for (const auto& term : p.terms()) {
        const auto psi = model.psi(term.freq, opt);
        res.value += term.coeff * std::exp(i_unit * term.freq.dot(x)) *
                     (i_unit * ax.dot(term.freq) - psi.value);
        res.error += std::abs(term.coeff) * psi.error;
        res.converged = res.converged && psi.converged;
    }
    return res;
}

}  // namespace oulevy
