#include "oulevy/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oulevy/geometry.hpp"

namespace oulevy {

namespace {

constexpr double kSamplerMinAcceptance = 1e-3;

double half_line_mass_above(double c, double alpha, double theta, double r) {
    // int_r^inf c e^{-theta y} y^{-1-alpha} dy
    if (c == 0.0) return 0.0;
    if (theta == 0.0) return c * std::pow(r, -alpha) / alpha;
    auto res = integrate_to_infinity<double>(
        [&](double y) { return c * std::exp(-theta * y) * std::pow(y, -1.0 - alpha); }, r,
        QuadOptions{1e-13, 1e-12, 2000});
    return res.value;
}

// int_{r0}^{r1} c e^{-theta y} y^{p - 1 - alpha} dy
double half_line_power_integral(double c, double alpha, double theta, double p,
                                double r0, double r1) {
    if (c == 0.0 || r1 <= r0) return 0.0;
    auto f = [&](double y) {
        return c * std::exp(-theta * y) * std::pow(y, p - 1.0 - alpha);
    };
    if (std::isinf(r1)) {
        return integrate_to_infinity<double>(f, r0, QuadOptions{1e-13, 1e-12, 2000}).value;
    }
    return integrate_adaptive<double>(f, r0, r1, QuadOptions{1e-13, 1e-12, 2000}).value;
}

struct LawMoments {
    // moments of a single jump Y under the law, restricted by |Y|
    double mass_above;
    Vec mean_annulus;        // E[Y 1_{r0<|Y|<=r1}]
    Mat second_below;        // E[Y Y^T 1_{|Y|<=r}]
};

template <class F>
double radial_law_integral(const GaussianDensity& dens, int d, double r0, double r1,
                           const F& angular_fn) {
    // int_{r0<|y|<=r1} angular_fn-weighted density, via polar coordinates
    SphereRule rule = sphere_rule(d, 96);
    auto radial = [&](double r) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.dirs.size(); ++i)
            s += rule.weights[i] * angular_fn(r, rule.dirs[i]) * dens(r * rule.dirs[i]);
        return std::pow(r, d - 1) * s;
    };
    return integrate_adaptive<double>(radial, r0, r1, QuadOptions{1e-12, 1e-10, 2000})
        .value;
}

double gaussian_mass_above(const GaussianLaw& law, int d, double r) {
    if (r <= 0.0) return 1.0;
    if (d == 1) {
        const double mu = law.mean[0];
        const double sd = std::sqrt(law.cov(0, 0));
        auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (sd * M_SQRT2)); };
        return 1.0 - (cdf(r) - cdf(-r));
    }
    GaussianDensity dens(law.mean, law.cov);
    const double reach = law.mean.norm() + 10.0 * dens.max_std();
    if (r >= reach) return 0.0;
    const double inside =
        radial_law_integral(dens, d, 0.0, r, [](double, const Vec&) { return 1.0; });
    return std::clamp(1.0 - inside, 0.0, 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// construction / validation
// ---------------------------------------------------------------------------

LevyMeasureSpec::LevyMeasureSpec(int dim, MeasureNode node)
    : dim_(dim), node_(std::move(node)) {
    small_square_mass_ =
        second_moment_below(*this, 1.0).trace() + mass_above(*this, 1.0);
    if (!std::isfinite(small_square_mass_))
        throw std::invalid_argument("LevyMeasureSpec: int (1 ^ |y|^2) dnu diverges");
    const double tfm = oulevy::tail_first_moment(*this);
    has_first_moment_ = std::isfinite(tfm);
}

LevyMeasureSpec LevyMeasureSpec::empty(int dim) {
    return finite_atomic(dim, {});
}

LevyMeasureSpec LevyMeasureSpec::finite_atomic(
    int dim, std::vector<FiniteAtomicSpec::Atom> atoms) {
    if (dim < 1) throw std::invalid_argument("finite_atomic: dim must be >= 1");
    for (const auto& a : atoms) {
        if (a.weight <= 0.0) throw std::invalid_argument("finite_atomic: weight <= 0");
        if (a.point.size() != dim)
            throw std::invalid_argument("finite_atomic: atom dimension mismatch");
        if (a.point.norm() == 0.0)
            throw std::invalid_argument("finite_atomic: atom at the origin rejected");
    }
    return LevyMeasureSpec(dim, FiniteAtomicSpec{std::move(atoms)});
}

LevyMeasureSpec LevyMeasureSpec::compound_poisson(int dim, double rate, JumpLaw law) {
    if (dim < 1) throw std::invalid_argument("compound_poisson: dim must be >= 1");
    if (!(rate > 0.0)) throw std::invalid_argument("compound_poisson: rate must be > 0");
    if (const auto* g = std::get_if<GaussianLaw>(&law)) {
        if (g->mean.size() != dim || g->cov.rows() != dim || g->cov.cols() != dim)
            throw std::invalid_argument("compound_poisson: Gaussian law dimension mismatch");
        if ((g->cov - g->cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("compound_poisson: Gaussian covariance not symmetric");
    } else if (const auto* b = std::get_if<UniformBallLaw>(&law)) {
        if (!(b->radius > 0.0))
            throw std::invalid_argument("compound_poisson: ball radius must be > 0");
    } else if (const auto* p = std::get_if<PointMassLaw>(&law)) {
        if (p->point.size() != dim)
            throw std::invalid_argument("compound_poisson: point mass dimension mismatch");
        if (p->point.norm() == 0.0)
            throw std::invalid_argument("compound_poisson: point mass at origin rejected");
    }
    return LevyMeasureSpec(dim, CompoundPoissonSpec{rate, std::move(law)});
}

LevyMeasureSpec LevyMeasureSpec::tempered_stable(double alpha, double c_plus,
                                                 double c_minus, double theta) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("tempered_stable: alpha must lie in (0,2)");
    if (c_plus < 0.0 || c_minus < 0.0 || c_plus + c_minus == 0.0)
        throw std::invalid_argument("tempered_stable: intensities must be >= 0, not both 0");
    if (theta < 0.0) throw std::invalid_argument("tempered_stable: theta must be >= 0");
    return LevyMeasureSpec(1, TemperedStableSpec{alpha, c_plus, c_minus, theta});
}

LevyMeasureSpec LevyMeasureSpec::isotropic_stable(int dim, double alpha, double c,
                                                  double r_max) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("isotropic_stable: dim must lie in {1,2,3}");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("isotropic_stable: alpha must lie in (0,2)");
    if (!(c > 0.0)) throw std::invalid_argument("isotropic_stable: c must be > 0");
    if (!(r_max > 0.0)) throw std::invalid_argument("isotropic_stable: r_max must be > 0");
    return LevyMeasureSpec(dim, IsotropicStableSpec{alpha, c, r_max});
}

LevyMeasureSpec LevyMeasureSpec::superposition(std::vector<LevyMeasureSpec> parts) {
    if (parts.empty()) throw std::invalid_argument("superposition: empty component list");
    const int d = parts.front().dim();
    for (const auto& p : parts)
        if (p.dim() != d)
            throw std::invalid_argument("superposition: component dimension mismatch");
    return LevyMeasureSpec(d, SuperpositionSpec{std::move(parts)});
}

std::string LevyMeasureSpec::variant_name() const {
    struct V {
        std::string operator()(const FiniteAtomicSpec&) { return "finite_atomic"; }
        std::string operator()(const CompoundPoissonSpec&) { return "compound_poisson"; }
        std::string operator()(const TemperedStableSpec&) { return "tempered_stable"; }
        std::string operator()(const IsotropicStableSpec&) { return "isotropic_stable"; }
        std::string operator()(const SuperpositionSpec&) { return "superposition"; }
    };
    return std::visit(V{}, node_);
}

// ---------------------------------------------------------------------------
// scalar functionals
// ---------------------------------------------------------------------------

double mass_above(const LevyMeasureSpec& nu, double r) {
    const int d = nu.dim();
    struct V {
        double r;
        int d;
        double operator()(const FiniteAtomicSpec& s) const {
            double m = 0.0;
            for (const auto& a : s.atoms)
                if (a.point.norm() > r) m += a.weight;
            return m;
        }
        double operator()(const CompoundPoissonSpec& s) const {
            return s.rate * law_mass_above(s.law, d, r);
        }
        double operator()(const TemperedStableSpec& s) const {
            return half_line_mass_above(s.c_plus, s.alpha, s.theta, r) +
                   half_line_mass_above(s.c_minus, s.alpha, s.theta, r);
        }
        double operator()(const IsotropicStableSpec& s) const {
            if (r >= s.r_max) return 0.0;
            const double hi = std::isinf(s.r_max) ? 0.0 : std::pow(s.r_max, -s.alpha);
            return s.c * sphere_surface(d) * (std::pow(r, -s.alpha) - hi) / s.alpha;
        }
        double operator()(const SuperpositionSpec& s) const {
            double m = 0.0;
            for (const auto& p : s.parts) m += mass_above(p, r);
            return m;
        }
    };
    return std::visit(V{r, d}, nu.node());
}

double law_mass_above(const JumpLaw& law, int dim, double r) {
    if (const auto* g = std::get_if<GaussianLaw>(&law))
        return gaussian_mass_above(*g, dim, r);
    if (const auto* b = std::get_if<UniformBallLaw>(&law)) {
        if (r >= b->radius) return 0.0;
        if (r <= 0.0) return 1.0;
        return 1.0 - std::pow(r / b->radius, dim);
    }
    const auto& p = std::get<PointMassLaw>(law);
    return p.point.norm() > r ? 1.0 : 0.0;
}

Vec mean_in_annulus(const LevyMeasureSpec& nu, double r0, double r1) {
    const int d = nu.dim();
    Vec out = Vec::Zero(d);
    struct V {
        double r0, r1;
        int d;
        Vec* out;
        void operator()(const FiniteAtomicSpec& s) const {
            for (const auto& a : s.atoms) {
                const double n = a.point.norm();
                if (n > r0 && n <= r1) *out += a.weight * a.point;
            }
        }
        void operator()(const CompoundPoissonSpec& s) const {
            if (const auto* g = std::get_if<GaussianLaw>(&s.law)) {
                if (d == 1) {
                    const double mu = g->mean[0], sd = std::sqrt(g->cov(0, 0));
                    auto f = [&](double y) {
                        const double z = (y - mu) / sd;
                        return y * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
                    };
                    const double hi = std::min(r1, std::abs(mu) + 12.0 * sd);
                    if (hi > r0)
                        (*out)[0] +=
                            s.rate *
                            (integrate_adaptive<double>(f, r0, hi, QuadOptions{}).value +
                             integrate_adaptive<double>(f, -hi, -r0, QuadOptions{}).value);
                    return;
                }
                GaussianDensity dens(g->mean, g->cov);
                const double reach = g->mean.norm() + 10.0 * dens.max_std();
                const double hi = std::min(r1, reach);
                if (hi <= r0) return;
                for (int i = 0; i < d; ++i) {
                    const double mi = radial_law_integral(
                        dens, d, r0, hi,
                        [i](double r, const Vec& th) { return r * th[i]; });
                    (*out)[i] += s.rate * mi;
                }
                return;
            }
            if (std::holds_alternative<UniformBallLaw>(s.law)) return;  // symmetric
            const auto& p = std::get<PointMassLaw>(s.law);
            const double n = p.point.norm();
            if (n > r0 && n <= r1) *out += s.rate * p.point;
        }
        void operator()(const TemperedStableSpec& s) const {
            (*out)[0] += half_line_power_integral(s.c_plus, s.alpha, s.theta, 1.0, r0, r1) -
                         half_line_power_integral(s.c_minus, s.alpha, s.theta, 1.0, r0, r1);
        }
        void operator()(const IsotropicStableSpec&) const {}  // symmetric
        void operator()(const SuperpositionSpec& s) const {
            for (const auto& p : s.parts) *out += mean_in_annulus(p, r0, r1);
        }
    };
    std::visit(V{r0, r1, d, &out}, nu.node());
    return out;
}

Mat second_moment_below(const LevyMeasureSpec& nu, double r) {
    const int d = nu.dim();
    Mat out = Mat::Zero(d, d);
    struct V {
        double r;
        int d;
        Mat* out;
        void operator()(const FiniteAtomicSpec& s) const {
            for (const auto& a : s.atoms)
                if (a.point.norm() <= r) *out += a.weight * a.point * a.point.transpose();
        }
        void operator()(const CompoundPoissonSpec& s) const {
            if (const auto* g = std::get_if<GaussianLaw>(&s.law)) {
                GaussianDensity dens(g->mean, g->cov);
                const double hi = std::min(r, g->mean.norm() + 10.0 * dens.max_std());
                if (hi <= 0.0) return;
                if (d == 1) {
                    auto f = [&](double y) { return y * y * dens(Vec::Constant(1, y)); };
                    (*out)(0, 0) +=
                        s.rate *
                        integrate_adaptive<double>(f, -hi, hi, QuadOptions{}).value;
                    return;
                }
                for (int i = 0; i < d; ++i)
                    for (int j = i; j < d; ++j) {
                        const double mij = radial_law_integral(
                            dens, d, 0.0, hi, [i, j](double rr, const Vec& th) {
                                return rr * rr * th[i] * th[j];
                            });
                        (*out)(i, j) += s.rate * mij;
                        if (j != i) (*out)(j, i) += s.rate * mij;
                    }
                return;
            }
            if (const auto* b = std::get_if<UniformBallLaw>(&s.law)) {
                const double m = std::min(r, b->radius);
                if (m <= 0.0) return;
                const double e_r2 =
                    d * std::pow(m, d + 2) / ((d + 2) * std::pow(b->radius, d));
                *out += (s.rate * e_r2 / d) * Mat::Identity(d, d);
                return;
            }
            const auto& p = std::get<PointMassLaw>(s.law);
            if (p.point.norm() <= r) *out += s.rate * p.point * p.point.transpose();
        }
        void operator()(const TemperedStableSpec& s) const {
            (*out)(0, 0) +=
                half_line_power_integral(s.c_plus + s.c_minus, s.alpha, s.theta, 2.0,
                                         0.0, r);
        }
        void operator()(const IsotropicStableSpec& s) const {
            const double m = std::min(r, s.r_max);
            const double mass2 =
                s.c * sphere_surface(d) * std::pow(m, 2.0 - s.alpha) / (2.0 - s.alpha);
            *out += (mass2 / d) * Mat::Identity(d, d);
        }
        void operator()(const SuperpositionSpec& s) const {
            for (const auto& p : s.parts) *out += second_moment_below(p, r);
        }
    };
    std::visit(V{r, d, &out}, nu.node());
    return out;
}

double third_abs_moment_below(const LevyMeasureSpec& nu, double r) {
    const int d = nu.dim();
    struct V {
        double r;
        int d;
        double operator()(const FiniteAtomicSpec& s) const {
            double m = 0.0;
            for (const auto& a : s.atoms) {
                const double n = a.point.norm();
                if (n <= r) m += a.weight * n * n * n;
            }
            return m;
        }
        double operator()(const CompoundPoissonSpec& s) const {
            if (const auto* g = std::get_if<GaussianLaw>(&s.law)) {
                GaussianDensity dens(g->mean, g->cov);
                const double hi = std::min(r, g->mean.norm() + 10.0 * dens.max_std());
                if (hi <= 0.0) return 0.0;
                return s.rate * radial_law_integral(dens, d, 0.0, hi,
                                                    [](double rr, const Vec&) {
                                                        return rr * rr * rr;
                                                    });
            }
            if (const auto* b = std::get_if<UniformBallLaw>(&s.law)) {
                const double m = std::min(r, b->radius);
                return s.rate * d * std::pow(m, d + 3) / ((d + 3) * std::pow(b->radius, d));
            }
            const auto& p = std::get<PointMassLaw>(s.law);
            const double n = p.point.norm();
            return n <= r ? s.rate * n * n * n : 0.0;
        }
        double operator()(const TemperedStableSpec& s) const {
            // e^{-theta y} <= 1 upper bound keeps this closed form
            return (s.c_plus + s.c_minus) * std::pow(r, 3.0 - s.alpha) / (3.0 - s.alpha);
        }
        double operator()(const IsotropicStableSpec& s) const {
            const double m = std::min(r, s.r_max);
            return s.c * sphere_surface(d) * std::pow(m, 3.0 - s.alpha) / (3.0 - s.alpha);
        }
        double operator()(const SuperpositionSpec& s) const {
            double m = 0.0;
            for (const auto& p : s.parts) m += third_abs_moment_below(p, r);
            return m;
        }
    };
    return std::visit(V{r, d}, nu.node());
}

double tail_first_moment(const LevyMeasureSpec& nu) {
    const int d = nu.dim();
    struct V {
        int d;
        double operator()(const FiniteAtomicSpec& s) const {
            double m = 0.0;
            for (const auto& a : s.atoms) {
                const double n = a.point.norm();
                if (n > 1.0) m += a.weight * n;
            }
            return m;
        }
        double operator()(const CompoundPoissonSpec& s) const {
            if (const auto* g = std::get_if<GaussianLaw>(&s.law)) {
                GaussianDensity dens(g->mean, g->cov);
                const double hi = g->mean.norm() + 12.0 * dens.max_std();
                if (hi <= 1.0) return 0.0;
                if (d == 1) {
                    auto f = [&](double y) {
                        return std::abs(y) * dens(Vec::Constant(1, y));
                    };
                    return s.rate *
                           (integrate_adaptive<double>(f, 1.0, hi, QuadOptions{}).value +
                            integrate_adaptive<double>(f, -hi, -1.0, QuadOptions{}).value);
                }
                return s.rate * radial_law_integral(dens, d, 1.0, hi,
                                                    [](double rr, const Vec&) {
                                                        return rr;
                                                    });
            }
            if (const auto* b = std::get_if<UniformBallLaw>(&s.law)) {
                if (b->radius <= 1.0) return 0.0;
                const double rd = std::pow(b->radius, d);
                return s.rate * d *
                       (std::pow(b->radius, d + 1) - 1.0) / ((d + 1) * rd);
            }
            const auto& p = std::get<PointMassLaw>(s.law);
            const double n = p.point.norm();
            return n > 1.0 ? s.rate * n : 0.0;
        }
        double operator()(const TemperedStableSpec& s) const {
            if (s.theta == 0.0 && s.alpha <= 1.0) return kInf;
            return half_line_power_integral(s.c_plus + s.c_minus, s.alpha, s.theta, 1.0,
                                            1.0, kInf);
        }
        double operator()(const IsotropicStableSpec& s) const {
            if (s.r_max <= 1.0) return 0.0;
            const double w = s.c * sphere_surface(d);
            if (std::isinf(s.r_max)) {
                if (s.alpha <= 1.0) return kInf;
                return w / (s.alpha - 1.0);
            }
            if (s.alpha == 1.0) return w * std::log(s.r_max);
            return w * (std::pow(s.r_max, 1.0 - s.alpha) - 1.0) / (1.0 - s.alpha);
        }
        double operator()(const SuperpositionSpec& s) const {
            double m = 0.0;
            for (const auto& p : s.parts) m += tail_first_moment(p);
            return m;
        }
    };
    return std::visit(V{d}, nu.node());
}

bool is_symmetric(const LevyMeasureSpec& nu) {
    struct V {
        bool operator()(const FiniteAtomicSpec& s) const {
            for (const auto& a : s.atoms) {
                bool matched = false;
                for (const auto& b : s.atoms) {
                    if ((a.point + b.point).norm() < 1e-14 &&
                        std::abs(a.weight - b.weight) < 1e-14) {
                        matched = true;
                        break;
                    }
                }
                if (!matched) return false;
            }
            return true;
        }
        bool operator()(const CompoundPoissonSpec& s) const {
            if (const auto* g = std::get_if<GaussianLaw>(&s.law))
                return g->mean.norm() == 0.0;
            if (std::holds_alternative<UniformBallLaw>(s.law)) return true;
            return false;
        }
        bool operator()(const TemperedStableSpec& s) const {
            return s.c_plus == s.c_minus;
        }
        bool operator()(const IsotropicStableSpec&) const { return true; }
        bool operator()(const SuperpositionSpec& s) const {
            for (const auto& p : s.parts)
                if (!is_symmetric(p)) return false;
            return true;
        }
    };
    return std::visit(V{}, nu.node());
}

bool is_finite_activity(const LevyMeasureSpec& nu) {
    struct V {
        bool operator()(const FiniteAtomicSpec&) const { return true; }
        bool operator()(const CompoundPoissonSpec&) const { return true; }
        bool operator()(const TemperedStableSpec&) const { return false; }
        bool operator()(const IsotropicStableSpec&) const { return false; }
        bool operator()(const SuperpositionSpec& s) const {
            for (const auto& p : s.parts)
                if (!is_finite_activity(p)) return false;
            return true;
        }
    };
    return std::visit(V{}, nu.node());
}

double support_radius(const LevyMeasureSpec& nu) {
    struct V {
        int d;
        double operator()(const FiniteAtomicSpec& s) const {
            double m = 0.0;
            for (const auto& a : s.atoms) m = std::max(m, a.point.norm());
            return m;
        }
        double operator()(const CompoundPoissonSpec& s) const {
            if (std::holds_alternative<GaussianLaw>(s.law)) return kInf;
            if (const auto* b = std::get_if<UniformBallLaw>(&s.law)) return b->radius;
            return std::get<PointMassLaw>(s.law).point.norm();
        }
        double operator()(const TemperedStableSpec&) const { return kInf; }
        double operator()(const IsotropicStableSpec& s) const { return s.r_max; }
        double operator()(const SuperpositionSpec& s) const {
            double m = 0.0;
            for (const auto& p : s.parts) m = std::max(m, support_radius(p));
            return m;
        }
    };
    return std::visit(V{nu.dim()}, nu.node());
}

double truncation_radius(const LevyMeasureSpec& nu, double mass_budget) {
    const double sup = support_radius(nu);
    if (std::isfinite(sup)) return sup;
    double r = 1.0;
    for (int i = 0; i < 400; ++i) {
        if (mass_above(nu, r) <= mass_budget) return r;
        r *= 2.0;
    }
    return r;
}

Vec sample_above(const LevyMeasureSpec& nu, double r, RngStream& rng) {
    const int d = nu.dim();
    struct V {
        double r;
        int d;
        RngStream* rng;
        Vec operator()(const FiniteAtomicSpec& s) const {
            double total = 0.0;
            for (const auto& a : s.atoms)
                if (a.point.norm() > r) total += a.weight;
            if (total <= 0.0)
                throw std::runtime_error("sample_above: no atoms beyond radius");
            double u = rng->uniform01() * total;
            for (const auto& a : s.atoms) {
                if (a.point.norm() <= r) continue;
                u -= a.weight;
                if (u <= 0.0) return a.point;
            }
            return s.atoms.back().point;
        }
        Vec operator()(const CompoundPoissonSpec& s) const {
            const double acc = law_mass_above(s.law, d, r);
            if (acc < kSamplerMinAcceptance)
                throw std::runtime_error(
                    "sample_above: restricted sampler unavailable for compound_poisson "
                    "(acceptance below threshold)");
            for (int i = 0; i < 100000; ++i) {
                Vec y = law_sample(s.law, d, *rng);
                if (y.norm() > r) return y;
            }
            throw std::runtime_error("sample_above: rejection sampler stalled");
        }
        Vec operator()(const TemperedStableSpec& s) const {
            const double mp = half_line_mass_above(s.c_plus, s.alpha, s.theta, r);
            const double mm = half_line_mass_above(s.c_minus, s.alpha, s.theta, r);
            const double side = rng->uniform01() * (mp + mm) < mp ? 1.0 : -1.0;
            for (int i = 0; i < 1000000; ++i) {
                const double rho = r * std::pow(rng->uniform01(), -1.0 / s.alpha);
                if (s.theta == 0.0 ||
                    rng->uniform01() <= std::exp(-s.theta * (rho - r)))
                    return Vec::Constant(1, side * rho);
            }
            throw std::runtime_error("sample_above: tempered-stable sampler stalled");
        }
        Vec operator()(const IsotropicStableSpec& s) const {
            const double lo = std::pow(r, -s.alpha);
            const double hi = std::isinf(s.r_max) ? 0.0 : std::pow(s.r_max, -s.alpha);
            const double u = rng->uniform01();
            const double rho = std::pow(lo - u * (lo - hi), -1.0 / s.alpha);
            return rho * rng->uniform_on_sphere(d);
        }
        Vec operator()(const SuperpositionSpec& s) const {
            std::vector<double> masses(s.parts.size());
            double total = 0.0;
            for (std::size_t i = 0; i < s.parts.size(); ++i) {
                masses[i] = mass_above(s.parts[i], r);
                total += masses[i];
            }
            double u = rng->uniform01() * total;
            for (std::size_t i = 0; i < s.parts.size(); ++i) {
                u -= masses[i];
                if (u <= 0.0) return sample_above(s.parts[i], r, *rng);
            }
            return sample_above(s.parts.back(), r, *rng);
        }
    };
    return std::visit(V{r, d, &rng}, nu.node());
}

Vec law_sample(const JumpLaw& law, int dim, RngStream& rng) {
    if (const auto* g = std::get_if<GaussianLaw>(&law)) {
        Eigen::LLT<Mat> llt(g->cov);
        return g->mean + llt.matrixL() * rng.normal_vec(dim);
    }
    if (const auto* b = std::get_if<UniformBallLaw>(&law)) {
        const double rho = b->radius * std::pow(rng.uniform01(), 1.0 / dim);
        return rho * rng.uniform_on_sphere(dim);
    }
    return std::get<PointMassLaw>(law).point;
}

bool is_empty(const LevyMeasureSpec& nu) {
    const auto* s = std::get_if<FiniteAtomicSpec>(&nu.node());
    return s != nullptr && s->atoms.empty();
}

// ---------------------------------------------------------------------------
// prepared restricted sampler
// ---------------------------------------------------------------------------

struct RestrictedSampler::Node {
    int dim = 1;
    double r = 0.0;

    // atomic: cumulative weights for atoms beyond r
    std::vector<double> atom_cum;
    std::vector<Vec> atom_points;

    // compound Poisson: prepared law with rejection
    enum class LawKind { None, Gaussian, Ball, Point } law_kind = LawKind::None;
    Vec law_mean;
    Mat law_chol;
    double law_radius = 0.0;
    Vec law_point;

    // tempered stable
    bool tempered = false;
    double ts_alpha = 0.0, ts_theta = 0.0;
    double ts_p_plus = 1.0;

    // isotropic stable
    bool stable = false;
    double st_alpha = 0.0, st_lo = 0.0, st_hi = 0.0;

    // superposition
    std::vector<std::shared_ptr<const Node>> parts;
    std::vector<double> part_cum;

    Vec draw(RngStream& rng) const {
        if (!parts.empty()) {
            const double u = rng.uniform01() * part_cum.back();
            std::size_t i = 0;
            while (i + 1 < part_cum.size() && u > part_cum[i]) ++i;
            return parts[i]->draw(rng);
        }
        if (!atom_cum.empty()) {
            const double u = rng.uniform01() * atom_cum.back();
            std::size_t i = 0;
            while (i + 1 < atom_cum.size() && u > atom_cum[i]) ++i;
            return atom_points[i];
        }
        if (tempered) {
            const double side = rng.uniform01() < ts_p_plus ? 1.0 : -1.0;
            for (int it = 0; it < 1000000; ++it) {
                const double rho = r * std::pow(rng.uniform01(), -1.0 / ts_alpha);
                if (ts_theta == 0.0 ||
                    rng.uniform01() <= std::exp(-ts_theta * (rho - r)))
                    return Vec::Constant(1, side * rho);
            }
            throw std::runtime_error("RestrictedSampler: tempered sampler stalled");
        }
        if (stable) {
            const double u = rng.uniform01();
            const double rho = std::pow(st_lo - u * (st_lo - st_hi), -1.0 / st_alpha);
            return rho * rng.uniform_on_sphere(dim);
        }
        // compound-Poisson laws by rejection beyond r
        for (int it = 0; it < 100000; ++it) {
            Vec y;
            switch (law_kind) {
                case LawKind::Gaussian:
                    y = law_mean + law_chol * rng.normal_vec(dim);
                    break;
                case LawKind::Ball: {
                    const double rho =
                        law_radius * std::pow(rng.uniform01(), 1.0 / dim);
                    y = rho * rng.uniform_on_sphere(dim);
                    break;
                }
                case LawKind::Point: y = law_point; break;
                case LawKind::None:
                    throw std::runtime_error("RestrictedSampler: empty measure");
            }
            if (y.norm() > r) return y;
        }
        throw std::runtime_error("RestrictedSampler: rejection sampler stalled");
    }

    static std::shared_ptr<const Node> build(const LevyMeasureSpec& nu, double r);
};

std::shared_ptr<const RestrictedSampler::Node> RestrictedSampler::Node::build(
    const LevyMeasureSpec& nu, double r) {
    auto node = std::make_shared<Node>();
    node->dim = nu.dim();
    node->r = r;
    struct V {
        Node& n;
        const LevyMeasureSpec& spec;
        void operator()(const FiniteAtomicSpec& s) const {
            double cum = 0.0;
            for (const auto& a : s.atoms) {
                if (a.point.norm() <= n.r) continue;
                cum += a.weight;
                n.atom_cum.push_back(cum);
                n.atom_points.push_back(a.point);
            }
            if (n.atom_cum.empty())
                throw std::runtime_error(
                    "RestrictedSampler: no atomic mass beyond the cut");
        }
        void operator()(const CompoundPoissonSpec& s) const {
            const double acc = law_mass_above(s.law, n.dim, n.r);
            if (acc < kSamplerMinAcceptance)
                throw std::runtime_error(
                    "RestrictedSampler: restricted sampler unavailable for "
                    "compound_poisson (acceptance below threshold)");
            if (const auto* g = std::get_if<GaussianLaw>(&s.law)) {
                n.law_kind = Node::LawKind::Gaussian;
                n.law_mean = g->mean;
                n.law_chol = Eigen::LLT<Mat>(g->cov).matrixL();
            } else if (const auto* b = std::get_if<UniformBallLaw>(&s.law)) {
                n.law_kind = Node::LawKind::Ball;
                n.law_radius = b->radius;
            } else {
                n.law_kind = Node::LawKind::Point;
                n.law_point = std::get<PointMassLaw>(s.law).point;
            }
        }
        void operator()(const TemperedStableSpec& s) const {
            n.tempered = true;
            n.ts_alpha = s.alpha;
            n.ts_theta = s.theta;
            const double mp = half_line_mass_above(s.c_plus, s.alpha, s.theta, n.r);
            const double mm = half_line_mass_above(s.c_minus, s.alpha, s.theta, n.r);
            n.ts_p_plus = mp / (mp + mm);
        }
        void operator()(const IsotropicStableSpec& s) const {
            n.stable = true;
            n.st_alpha = s.alpha;
            n.st_lo = std::pow(n.r, -s.alpha);
            n.st_hi = std::isinf(s.r_max) ? 0.0 : std::pow(s.r_max, -s.alpha);
        }
        void operator()(const SuperpositionSpec& s) const {
            double cum = 0.0;
            for (const auto& p : s.parts) {
                const double m = mass_above(p, n.r);
                if (m <= 0.0) continue;
                cum += m;
                n.parts.push_back(Node::build(p, n.r));
                n.part_cum.push_back(cum);
            }
            if (n.parts.empty())
                throw std::runtime_error(
                    "RestrictedSampler: no component mass beyond the cut");
        }
    };
    std::visit(V{*node, nu}, nu.node());
    return node;
}

RestrictedSampler::RestrictedSampler(const LevyMeasureSpec& nu, double r)
    : root_(Node::build(nu, r)) {}

Vec RestrictedSampler::sample(RngStream& rng) const { return root_->draw(rng); }

LevyMeasureReport check_levy_measure(const LevyMeasureSpec& nu) {
    LevyMeasureReport rep;
    rep.small_square_mass =
        second_moment_below(nu, 1.0).trace() + mass_above(nu, 1.0);
    rep.small_square_error = 1e-10 * std::abs(rep.small_square_mass);
    const double tfm = tail_first_moment(nu);
    rep.tail_first_infinite = std::isinf(tfm);
    rep.tail_first_moment = tfm;
    rep.tail_first_error = rep.tail_first_infinite ? 0.0 : 1e-10 * std::abs(tfm);
    rep.has_first_moment = nu.has_first_moment();
    return rep;
}

}  // namespace oulevy
