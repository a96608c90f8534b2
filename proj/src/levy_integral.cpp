#include "oulevy/levy_integral.hpp"

#include <cmath>
#include <stdexcept>

#include "oulevy/geometry.hpp"

namespace oulevy {

namespace {

struct RegionAccum {
    LevyIntegralResult* res;
    void add_inner(double v, double e) {
        res->inner += v;
        res->inner_error += e;
    }
    void add_annulus(double v, double e) {
        res->annulus += v;
        res->annulus_error += e;
    }
    void add_tail(double v, double e) {
        res->tail += v;
        res->tail_error += e;
    }
    void add_by_radius(double r, double eps, double v, double e = 0.0) {
        if (r <= eps)
            add_inner(v, e);
        else if (r <= 1.0)
            add_annulus(v, e);
        else
            add_tail(v, e);
    }
};

// radial weight w(r) of the absolutely continuous variants, so that
// int g dnu = int_0^inf w(r) * S_g(r) dr with S_g the sphere average sum
struct RadialDensity {
    std::function<double(double)> w;   // includes the r^{d-1} polar factor
    double support_end = kInf;
};

class SphereAverager {
public:
    SphereAverager(int dim, int resolution) : rule_(sphere_rule(dim, resolution)) {}

    double sum(const std::function<double(const Vec&)>& g, double r) const {
        double s = 0.0;
        for (std::size_t i = 0; i < rule_.dirs.size(); ++i)
            s += rule_.weights[i] * g(r * rule_.dirs[i]);
        return s;
    }

private:
    SphereRule rule_;
};

// Integrate w(r) * S(r) over [lo, hi] adaptively (hi finite).
QuadResult<double> radial_segment(const std::function<double(double)>& radial, double lo,
                                  double hi, const QuadOptions& opt) {
    return integrate_adaptive<double>(radial, lo, hi, opt);
}

}  // namespace

LevyIntegralResult levy_integral(const LevyMeasureSpec& nu,
                                 const CompensatedIntegrand& gi, double split_radius,
                                 const QuadOptions& opt) {
    if (!(split_radius > 0.0 && split_radius <= 1.0))
        throw std::invalid_argument("levy_integral: split radius must lie in (0, 1]");
    const double eps = split_radius;
    const int d = nu.dim();
    LevyIntegralResult res;
    RegionAccum acc{&res};

    struct V {
        const CompensatedIntegrand& gi;
        double eps;
        int d;
        const QuadOptions& opt;
        RegionAccum& acc;
        LevyIntegralResult& res;

        void operator()(const FiniteAtomicSpec& s) {
            for (const auto& a : s.atoms)
                acc.add_by_radius(a.point.norm(), eps, a.weight * gi.g(a.point));
        }

        void operator()(const CompoundPoissonSpec& s) {
            if (const auto* p = std::get_if<PointMassLaw>(&s.law)) {
                acc.add_by_radius(p->point.norm(), eps, s.rate * gi.g(p->point));
                return;
            }
            SphereAverager sph(d, 96);
            if (const auto* g = std::get_if<GaussianLaw>(&s.law)) {
                GaussianDensity dens(g->mean, g->cov);
                const double reach = g->mean.norm() + 10.0 * dens.max_std();
                auto radial = [&](double r) {
                    return s.rate * std::pow(r, d - 1) *
                           sph.sum([&](const Vec& y) { return gi.g(y) * dens(y); }, r);
                };
                auto q1 = radial_segment(radial, 0.0, std::min(eps, reach), opt);
                acc.add_inner(q1.value, q1.error);
                res.converged = res.converged && q1.converged;
                if (reach > eps) {
                    auto q2 = radial_segment(radial, eps, std::min(1.0, reach), opt);
                    acc.add_annulus(q2.value, q2.error);
                    res.converged = res.converged && q2.converged;
                }
                if (reach > 1.0) {
                    auto q3 = radial_segment(radial, 1.0, reach, opt);
                    acc.add_tail(q3.value, q3.error);
                    res.converged = res.converged && q3.converged;
                }
                return;
            }
            const auto& b = std::get<UniformBallLaw>(s.law);
            const double vol = sphere_surface(d) * std::pow(b.radius, d) / d;
            const double w0 = s.rate / vol;
            auto radial = [&, w0](double r) {
                return w0 * std::pow(r, d - 1) * sph.sum(gi.g, r);
            };
            const double re = b.radius;
            auto q1 = radial_segment(radial, 0.0, std::min(eps, re), opt);
            acc.add_inner(q1.value, q1.error);
            if (re > eps) {
                auto q2 = radial_segment(radial, eps, std::min(1.0, re), opt);
                acc.add_annulus(q2.value, q2.error);
            }
            if (re > 1.0) {
                auto q3 = radial_segment(radial, 1.0, re, opt);
                acc.add_tail(q3.value, q3.error);
            }
        }

        void operator()(const TemperedStableSpec& s) {
            auto side = [&](double c, double sign) {
                if (c == 0.0) return;
                auto w = [c, &s](double r) {
                    return c * std::exp(-s.theta * r) * std::pow(r, -1.0 - s.alpha);
                };
                auto radial = [&, w](double r) {
                    return w(r) * gi.g(Vec::Constant(1, sign * r));
                };
                auto q1 = radial_segment(radial, 0.0, eps, opt);
                acc.add_inner(q1.value, q1.error);
                auto q2 = radial_segment(radial, eps, 1.0, opt);
                acc.add_annulus(q2.value, q2.error);
                res.converged = res.converged && q1.converged && q2.converged;
                if (s.theta > 0.0) {
                    const double r_stop = 1.0 + 40.0 / s.theta;
                    auto q3 = radial_segment(radial, 1.0, r_stop, opt);
                    const double dropped =
                        gi.sup_bound * c * std::exp(-s.theta * r_stop) *
                        std::pow(r_stop, -s.alpha) / s.theta;
                    acc.add_tail(q3.value, q3.error + dropped);
                    res.converged = res.converged && q3.converged;
                    return;
                }
                // theta = 0: one-sided stable tail
                if (gi.limit_at_infinity) {
                    const double L = *gi.limit_at_infinity;
                    const double r_lim = std::max(1.0, gi.limit_radius);
                    auto rml = [&, w](double r) {
                        return w(r) * (gi.g(Vec::Constant(1, sign * r)) - L);
                    };
                    auto q3 = radial_segment(rml, 1.0, r_lim, opt);
                    acc.add_tail(q3.value + L * c / s.alpha, q3.error);
                    res.converged = res.converged && q3.converged;
                    return;
                }
                if (gi.osc_hint && *gi.osc_hint > 0.05) {
                    const double cyc = M_PI / *gi.osc_hint;
                    auto q3 = integrate_oscillatory_tail<double>(radial, 1.0, cyc, opt);
                    acc.add_tail(q3.value, q3.error);
                    res.converged = res.converged && q3.converged;
                    return;
                }
                const double budget = std::max(opt.abs_tol, 1e-14) /
                                      std::max(gi.sup_bound, 1e-300);
                const double r_cut = std::pow(c / (s.alpha * budget), 1.0 / s.alpha);
                const double r_stop = std::min(r_cut, 1e6);
                auto q3 = radial_segment(radial, 1.0, r_stop, opt);
                const double dropped =
                    gi.sup_bound * c * std::pow(r_stop, -s.alpha) / s.alpha;
                acc.add_tail(q3.value, q3.error + dropped);
                if (dropped > opt.abs_tol) {
                    res.tail_truncated = true;
                    res.tail_truncation_bound += dropped;
                }
            };
            side(s.c_plus, 1.0);
            side(s.c_minus, -1.0);
        }

        void operator()(const IsotropicStableSpec& s) {
            SphereAverager sph(d, 96);
            auto radial = [&](double r) {
                return s.c * std::pow(r, -1.0 - s.alpha) * sph.sum(gi.g, r);
            };
            const double re = s.r_max;
            auto q1 = radial_segment(radial, 0.0, std::min(eps, re), opt);
            acc.add_inner(q1.value, q1.error);
            res.converged = res.converged && q1.converged;
            if (re > eps) {
                auto q2 = radial_segment(radial, eps, std::min(1.0, re), opt);
                acc.add_annulus(q2.value, q2.error);
                res.converged = res.converged && q2.converged;
            }
            if (re > 1.0) {
                if (std::isfinite(re)) {
                    auto q3 = radial_segment(radial, 1.0, re, opt);
                    acc.add_tail(q3.value, q3.error);
                    res.converged = res.converged && q3.converged;
                    return;
                }
                if (gi.limit_at_infinity) {
                    const double L = *gi.limit_at_infinity;
                    const double r_lim = std::max(1.0, gi.limit_radius);
                    const double surface = sphere_surface(d);
                    auto rml = [&](double r) {
                        return s.c * std::pow(r, -1.0 - s.alpha) *
                               (sph.sum(gi.g, r) - L * surface);
                    };
                    auto q3 = radial_segment(rml, 1.0, r_lim, opt);
                    acc.add_tail(q3.value + L * surface * s.c / s.alpha, q3.error);
                    res.converged = res.converged && q3.converged;
                    return;
                }
                if (gi.osc_hint && *gi.osc_hint > 0.05) {
                    const double cyc = M_PI / *gi.osc_hint;
                    auto q3 = integrate_oscillatory_tail<double>(radial, 1.0, cyc, opt);
                    acc.add_tail(q3.value, q3.error);
                    res.converged = res.converged && q3.converged;
                    return;
                }
                const double budget = std::max(opt.abs_tol, 1e-14) /
                                      std::max(gi.sup_bound, 1e-300);
                const double w = s.c * sphere_surface(d);
                const double r_cut = std::pow(w / (s.alpha * budget), 1.0 / s.alpha);
                const double r_stop = std::min(r_cut, 1e6);
                auto q3 = radial_segment(radial, 1.0, r_stop, opt);
                const double dropped = gi.sup_bound * w * std::pow(r_stop, -s.alpha) / s.alpha;
                acc.add_tail(q3.value, q3.error + dropped);
                if (dropped > opt.abs_tol) {
                    res.tail_truncated = true;
                    res.tail_truncation_bound += dropped;
                }
            }
        }

        void operator()(const SuperpositionSpec& s) {
            for (const auto& p : s.parts) {
                auto sub = levy_integral(p, gi, eps, opt);
                res.inner += sub.inner;
                res.annulus += sub.annulus;
                res.tail += sub.tail;
                res.inner_error += sub.inner_error;
                res.annulus_error += sub.annulus_error;
                res.tail_error += sub.tail_error;
                res.converged = res.converged && sub.converged;
                res.tail_truncated = res.tail_truncated || sub.tail_truncated;
                res.tail_truncation_bound += sub.tail_truncation_bound;
            }
        }
    };

    V visitor{gi, eps, d, opt, acc, res};
    std::visit(visitor, nu.node());

    res.value = res.inner + res.annulus + res.tail;
    res.error = res.inner_error + res.annulus_error + res.tail_error;
    return res;
}

}  // namespace oulevy
