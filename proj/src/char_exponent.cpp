#include "oulevy/levy_triplet.hpp"

#include <cmath>
#include <stdexcept>

#include "oulevy/geometry.hpp"

namespace oulevy {

LevyTriplet::LevyTriplet(Mat q, Vec a, LevyMeasureSpec nu)
    : dim_(static_cast<int>(a.size())), a_(std::move(a)), nu_(std::move(nu)) {
    if (q.rows() != dim_ || q.cols() != dim_ || nu_.dim() != dim_)
        throw std::invalid_argument("LevyTriplet: component dimensions disagree");
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("LevyTriplet: Q not symmetric within 1e-12");
    Mat qs = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(qs);
    Vec lam = es.eigenvalues();
    for (int i = 0; i < dim_; ++i) {
        if (lam[i] < -1e-12)
            throw std::invalid_argument("LevyTriplet: Q has a negative eigenvalue");
        lam[i] = std::max(lam[i], 0.0);
    }
    q_ = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    q_ = 0.5 * (q_ + q_.transpose());
    has_jumps_ = !is_empty(nu_);
}

LevyTriplet LevyTriplet::gaussian(Mat q) {
    const int d = static_cast<int>(q.rows());
    return LevyTriplet(std::move(q), Vec::Zero(d), LevyMeasureSpec::empty(d));
}

LevyTriplet LevyTriplet::pure_jump(LevyMeasureSpec nu) {
    const int d = nu.dim();
    return LevyTriplet(Mat::Zero(d, d), Vec::Zero(d), std::move(nu));
}

LevyTriplet LevyTriplet::drift_only(Vec a) {
    const int d = static_cast<int>(a.size());
    return LevyTriplet(Mat::Zero(d, d), std::move(a), LevyMeasureSpec::empty(d));
}

LevyTriplet make_triplet_no_jumps(Mat q, Vec a) {
    const int d = static_cast<int>(a.size());
    return LevyTriplet(std::move(q), std::move(a), LevyMeasureSpec::empty(d));
}

namespace {

constexpr Cplx kI{0.0, 1.0};

struct JumpIntegral {
    Cplx value{};
    double error = 0.0;
    bool converged = true;

    void add(const QuadResult<Cplx>& q) {
        value += q.value;
        error += q.error;
        converged = converged && q.converged;
    }
    void add(const QuadResult<double>& q) {
        value += q.value;
        error += q.error;
        converged = converged && q.converged;
    }
    void add(const JumpIntegral& o) {
        value += o.value;
        error += o.error;
        converged = converged && o.converged;
    }
};

// int_0^inf (e^{iuy} - 1 - iuy 1_{y<=1}) c e^{-theta y} y^{-1-alpha} dy
JumpIntegral half_line_jump_integral(double u, double c, double alpha, double theta,
                                     const QuadOptions& opt) {
    JumpIntegral out;
    if (c == 0.0) return out;
    auto weight = [c, theta, alpha](double y) {
        return c * std::exp(-theta * y) * std::pow(y, -1.0 - alpha);
    };
    // compensated part on (0, 1]
    auto inner = integrate_adaptive<Cplx>(
        [&](double y) {
            return (std::exp(kI * (u * y)) - 1.0 - kI * (u * y)) * weight(y);
        },
        0.0, 1.0, opt);
    out.add(inner);
    if (theta > 0.0) {
        const double r_stop = 1.0 + 40.0 / theta;
        auto tail = integrate_adaptive<Cplx>(
            [&](double y) { return (std::exp(kI * (u * y)) - 1.0) * weight(y); }, 1.0,
            r_stop, opt);
        out.add(tail);
        out.error += 2.0 * c * std::exp(-theta * r_stop) / theta;
        return out;
    }
    // theta = 0: closed-form constant part, cycle-summed oscillatory part after
    // the self-similar substitution v = |u| y
    out.value += -c / alpha;  // int_1^inf (-1) c y^{-1-alpha} dy
    if (u == 0.0) return out;
    const double au = std::abs(u);
    const double su = u > 0.0 ? 1.0 : -1.0;
    const double scale = c * std::pow(au, alpha);
    auto osc = [&](double v) {
        return scale * std::exp(kI * (su * v)) * std::pow(v, -1.0 - alpha);
    };
    const double breakpoint = std::max(au, M_PI);
    if (breakpoint > au) {
        auto head = integrate_adaptive<Cplx>(osc, au, breakpoint, opt);
        out.add(head);
    }
    auto tail = integrate_oscillatory_tail<Cplx>(osc, breakpoint, M_PI, opt);
    out.add(tail);
    return out;
}

// c * omega_d * int_0^{r_max} (Lambda_d(|u| r) - 1) r^{-1-alpha} dr  (real)
JumpIntegral radial_jump_integral(int d, double umod, double c, double alpha,
                                  double r_max, const QuadOptions& opt) {
    JumpIntegral out;
    if (umod == 0.0) return out;
    const double w = c * sphere_surface(d);
    const double scale = w * std::pow(umod, alpha);
    const double vmax = std::isinf(r_max) ? kInf : umod * r_max;
    auto compensated = [&](double v) {
        return scale * (radial_cos_kernel(d, v) - 1.0) * std::pow(v, -1.0 - alpha);
    };
    const double head_end = std::min(vmax, M_PI);
    auto head = integrate_adaptive<double>(compensated, 0.0, head_end, opt);
    out.add(head);
    if (vmax <= M_PI) return out;
    if (std::isfinite(vmax)) {
        if (vmax < 64.0 * M_PI) {
            auto mid = integrate_adaptive<double>(compensated, M_PI, vmax, opt);
            out.add(mid);
            return out;
        }
    }
    // constant part in closed form
    const double hi_term = std::isinf(vmax) ? 0.0 : std::pow(vmax, -alpha);
    out.value += -scale * (std::pow(M_PI, -alpha) - hi_term) / alpha;
    // oscillatory kernel part, cycle length pi
    auto osc = [&](double v) {
        return scale * radial_cos_kernel(d, v) * std::pow(v, -1.0 - alpha);
    };
    if (std::isinf(vmax)) {
        auto tail = integrate_oscillatory_tail<double>(osc, M_PI, M_PI, opt);
        out.add(tail);
        return out;
    }
    // finite but distant cutoff: cycle-sum to infinity and correct with the
    // (small, oscillatory) remainder integrated beyond vmax by cycle summation
    auto tail_inf = integrate_oscillatory_tail<double>(osc, M_PI, M_PI, opt);
    auto beyond = integrate_oscillatory_tail<double>(osc, vmax, M_PI, opt);
    out.add(tail_inf);
    out.value -= beyond.value;
    out.error += beyond.error;
    out.converged = out.converged && beyond.converged;
    return out;
}

JumpIntegral jump_integral(const LevyMeasureSpec& nu, const Vec& u,
                           const QuadOptions& opt);

struct JumpVisitor {
    const LevyMeasureSpec& spec;
    const Vec& u;
    const QuadOptions& opt;
    int d;

    JumpIntegral operator()(const FiniteAtomicSpec& s) const {
        JumpIntegral out;
        for (const auto& a : s.atoms) {
            const double uy = u.dot(a.point);
            Cplx term = std::exp(kI * uy) - 1.0;
            if (a.point.norm() <= 1.0) term -= kI * uy;
            out.value += a.weight * term;
        }
        return out;
    }

    JumpIntegral operator()(const CompoundPoissonSpec& s) const {
        JumpIntegral out;
        Cplx cf;  // E[e^{i<u,Y>}]
        if (const auto* g = std::get_if<GaussianLaw>(&s.law)) {
            cf = std::exp(kI * u.dot(g->mean) - 0.5 * u.dot(g->cov * u));
        } else if (const auto* b = std::get_if<UniformBallLaw>(&s.law)) {
            const double x = u.norm() * b->radius;
            double v;
            if (x < 1e-8) {
                v = 1.0 - x * x / (2.0 * (d + 2.0));
            } else if (d == 1) {
                v = std::sin(x) / x;
            } else if (d == 2) {
                v = 2.0 * std::cyl_bessel_j(1.0, x) / x;
            } else {
                v = 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
            }
            cf = v;
        } else {
            const auto& p = std::get<PointMassLaw>(s.law);
            cf = std::exp(kI * u.dot(p.point));
        }
        out.value = s.rate * (cf - 1.0);
        // compensation of jumps inside the unit ball
        const Vec comp = mean_in_annulus(spec, 0.0, 1.0);
        out.value -= kI * u.dot(comp);
        out.error += 1e-13 * (1.0 + std::abs(out.value));
        return out;
    }

    JumpIntegral operator()(const TemperedStableSpec& s) const {
        JumpIntegral out;
        const double uu = u[0];
        out.add(half_line_jump_integral(uu, s.c_plus, s.alpha, s.theta, opt));
        out.add(half_line_jump_integral(-uu, s.c_minus, s.alpha, s.theta, opt));
        return out;
    }

    JumpIntegral operator()(const IsotropicStableSpec& s) const {
        return radial_jump_integral(d, u.norm(), s.c, s.alpha, s.r_max, opt);
    }

    JumpIntegral operator()(const SuperpositionSpec& s) const {
        JumpIntegral out;
        for (const auto& p : s.parts) out.add(jump_integral(p, u, opt));
        return out;
    }
};

JumpIntegral jump_integral(const LevyMeasureSpec& nu, const Vec& u,
                           const QuadOptions& opt) {
    return std::visit(JumpVisitor{nu, u, opt, nu.dim()}, nu.node());
}

}  // namespace

CharExponentResult char_exponent(const LevyTriplet& triplet, const Vec& u,
                                 const QuadOptions& opt) {
    if (u.size() != triplet.dim())
        throw std::invalid_argument("char_exponent: dimension mismatch");
    CharExponentResult res;
    if (u.norm() == 0.0) return res;  // psi(0) = 0 exactly
    res.value = 0.5 * u.dot(triplet.q() * u) - kI * triplet.a().dot(u);
    if (triplet.has_jumps()) {
        const JumpIntegral j = jump_integral(triplet.nu(), u, opt);
        res.value -= j.value;
        res.error = j.error;
        res.converged = j.converged;
    }
    return res;
}

}  // namespace oulevy
