#include "oulevy/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace oulevy {

double EigenSequence::eval(int k) const { return -scale * std::pow(k, power); }

double TraceClassSequence::eval(int k) const {
    if (kind == Kind::Geometric) return scale * std::pow(ratio, k);
    return scale * std::pow(k, -power);
}

double TraceClassSequence::declared_sum() const {
    if (kind == Kind::Geometric) return scale * ratio / (1.0 - ratio);
    // power decay: partial sum plus integral tail bound at k = 10^6
    double s = 0.0;
    for (int k = 1; k <= 1000000; ++k) s += eval(k);
    s += scale * std::pow(1e6, 1.0 - power) / (power - 1.0);
    return s;
}

double CoordinateSequence::eval(int k) const {
    if (scale == 0.0) return 0.0;
    return scale * std::pow(k, -power);
}

SpectralModel::SpectralModel(EigenSequence eigen, TraceClassSequence q,
                             CoordinateSequence a, NuRecipe nu)
    : eigen_(eigen), q_(q), a_(a), nu_(nu) {
    if (eigen_.scale <= 0.0 || eigen_.power < 1.0)
        throw std::invalid_argument(
            "SpectralModel: eigenvalue sequence must be -scale k^p with scale > 0, p >= 1");
    if (q_.scale < 0.0) throw std::invalid_argument("SpectralModel: q_k must be >= 0");
    if (q_.kind == TraceClassSequence::Kind::Geometric) {
        if (!(q_.ratio > 0.0 && q_.ratio < 1.0))
            throw std::invalid_argument("SpectralModel: geometric ratio outside (0,1)");
    } else if (!(q_.power > 1.0)) {
        throw std::invalid_argument(
            "SpectralModel: trace-class gate rejected q_k ~ k^-p with p <= 1");
    }
    if (q_.scale > 0.0) {
        // partial sums must stabilize against the declared limit
        const double limit = q_.declared_sum();
        double partial = 0.0;
        for (int k = 1; k <= 1000; ++k) partial += q_.eval(k);
        if (!(partial <= limit * (1.0 + 1e-10)))
            throw std::invalid_argument("SpectralModel: partial sums exceed declared trace");
        const double tail_frac = (limit - partial) / limit;
        if (q_.kind == TraceClassSequence::Kind::Geometric && tail_frac > 1e-10)
            throw std::invalid_argument(
                "SpectralModel: partial sums do not reach the declared trace");
    }
    if (nu_.kind == NuRecipe::Kind::AxisAtoms) {
        if (!(nu_.w0 > 0.0) || !(nu_.decay > 0.0 && nu_.decay < 1.0) || !(nu_.size > 0.0))
            throw std::invalid_argument("SpectralModel: invalid axis-atom recipe");
    }
    if (nu_.kind == NuRecipe::Kind::IsotropicStable) {
        if (!(nu_.alpha > 0.0 && nu_.alpha < 2.0) || !(nu_.c > 0.0))
            throw std::invalid_argument("SpectralModel: invalid stable recipe");
    }
}

OUModel galerkin_project(const SpectralModel& sm, int d) {
    if (d < 1) throw std::invalid_argument("galerkin_project: d must be >= 1");
    Mat a_mat = Mat::Zero(d, d);
    Mat q = Mat::Zero(d, d);
    Vec a = Vec::Zero(d);
    for (int k = 1; k <= d; ++k) {
        a_mat(k - 1, k - 1) = sm.eigen().eval(k);
        q(k - 1, k - 1) = sm.q().eval(k);
        a[k - 1] = sm.a().eval(k);
    }
    const auto& nr = sm.nu();
    if (nr.kind == NuRecipe::Kind::None)
        return OUModel(a_mat, LevyTriplet(q, a, LevyMeasureSpec::empty(d)));
    if (nr.kind == NuRecipe::Kind::AxisAtoms) {
        std::vector<FiniteAtomicSpec::Atom> atoms;
        atoms.reserve(2 * d);
        for (int k = 1; k <= d; ++k) {
            Vec e = Vec::Zero(d);
            e[k - 1] = nr.size;
            const double w = nr.w0 * std::pow(nr.decay, k);
            atoms.push_back({w, e});
            atoms.push_back({w, -e});
        }
        return OUModel(a_mat,
                       LevyTriplet(q, a, LevyMeasureSpec::finite_atomic(d, atoms)));
    }
    if (d > 3)
        throw std::invalid_argument(
            "galerkin_project: isotropic stable recipe limited to d <= 3");
    return OUModel(a_mat, LevyTriplet(q, a, LevyMeasureSpec::isotropic_stable(
                                                d, nr.alpha, nr.c, nr.r_max)));
}

DimSweepReport dimension_sweep(const SpectralModel& sm, const CoordinateSequence& x,
                               const Vec& h_active, double t,
                               const std::vector<int>& dims, const QuadOptions& opt) {
    if (dims.empty()) throw std::invalid_argument("dimension_sweep: empty dim list");
    DimSweepReport rep;

    // D(A) surrogate: does sum |lambda_k x_k|^2 converge along the recipe?
    // lambda_k x_k ~ k^{p_eig - p_x}; convergence iff p_x - p_eig > 1/2.
    rep.x_in_domain_surrogate =
        x.scale == 0.0 || (x.power - sm.eigen().power) > 0.5;

    double prev = kInf;
    for (int d : dims) {
        if (d < h_active.size())
            throw std::invalid_argument(
                "dimension_sweep: dims must cover the active coordinates of h");
        OUModel model = galerkin_project(sm, d);
        Vec xd(d), hd = Vec::Zero(d);
        for (int k = 1; k <= d; ++k) xd[k - 1] = x.eval(k);
        hd.head(h_active.size()) = h_active;
        auto res = cauchy_residual(model, TrigPolynomial::monomial(1.0, hd), t, xd, opt);
        rep.rows.push_back(DimSweepRow{d, res.residual, res.budget, res.converged});
        rep.max_residual = std::max(rep.max_residual, res.residual);
        if (std::isfinite(prev))
            rep.max_residual_change =
                std::max(rep.max_residual_change, std::abs(res.residual - prev));
        prev = res.residual;
    }
    return rep;
}

}  // namespace oulevy
