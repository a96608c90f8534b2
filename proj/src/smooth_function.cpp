#include "oulevy/smooth_function.hpp"

#include <cmath>
#include <stdexcept>

#include "oulevy/geometry.hpp"
#include "oulevy/rng.hpp"

namespace oulevy {

SmoothFunction make_bump(const Vec& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("make_bump: radius must be > 0");
    const int d = static_cast<int>(center.size());
    const double r2 = radius * radius;
    SmoothFunction f;
    f.dim = d;
    f.value = [center, r2](const Vec& x) {
        const double q = (x - center).squaredNorm() / r2;
        if (q >= 1.0) return 0.0;
        const double w = 1.0 - q;
        return w * w * w;
    };
    f.gradient = [center, r2, d](const Vec& x) {
        const Vec z = x - center;
        const double q = z.squaredNorm() / r2;
        if (q >= 1.0) return Vec(Vec::Zero(d));
        const double w = 1.0 - q;
        return Vec((-6.0 * w * w / r2) * z);
    };
    f.hessian = [center, r2, d](const Vec& x) {
        const Vec z = x - center;
        const double q = z.squaredNorm() / r2;
        if (q >= 1.0) return Mat(Mat::Zero(d, d));
        const double w = 1.0 - q;
        Mat h = (-6.0 * w * w / r2) * Mat::Identity(d, d);
        h += (24.0 * w / (r2 * r2)) * (z * z.transpose());
        return h;
    };
    f.bound_value = 1.0;
    // max_s 6 s (1-s^2)^2 / R at s = 1/sqrt(5)
    f.bound_gradient = (96.0 / (25.0 * std::sqrt(5.0))) / radius;
    f.bound_hessian = 6.0 / r2;
    f.support_radius = center.norm() + radius;
    return f;
}

SmoothFunction trig_as_smooth(const TrigPolynomial& p, bool imaginary_part) {
    SmoothFunction f;
    f.dim = p.dim();
    if (imaginary_part) {
        f.value = [p](const Vec& x) { return p.value(x).imag(); };
        f.gradient = [p](const Vec& x) { return Vec(p.gradient(x).imag()); };
        f.hessian = [p](const Vec& x) { return Mat(p.hessian(x).imag()); };
    } else {
        f.value = [p](const Vec& x) { return p.value(x).real(); };
        f.gradient = [p](const Vec& x) { return Vec(p.gradient(x).real()); };
        f.hessian = [p](const Vec& x) { return Mat(p.hessian(x).real()); };
    }
    f.bound_value = p.sup_bound();
    f.bound_gradient = p.grad_bound();
    f.bound_hessian = p.hess_bound();
    f.osc_hint = p.max_freq_norm();
    return f;
}

SmoothFunction make_gaussian_profile(int dim, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("make_gaussian_profile: s must be > 0");
    const double is2 = 1.0 / (s * s);
    SmoothFunction f;
    f.dim = dim;
    f.value = [is2](const Vec& x) { return std::exp(-0.5 * is2 * x.squaredNorm()); };
    f.gradient = [is2](const Vec& x) {
        return Vec(-is2 * std::exp(-0.5 * is2 * x.squaredNorm()) * x);
    };
    f.hessian = [is2, dim](const Vec& x) {
        const double v = std::exp(-0.5 * is2 * x.squaredNorm());
        return Mat(v * (is2 * is2 * x * x.transpose() -
                        is2 * Mat::Identity(dim, dim)));
    };
    f.bound_value = 1.0;
    f.bound_gradient = is2 * s * std::exp(-0.5);  // max |x| e^{-x^2/2s^2} / s^2
    f.bound_hessian = is2;                        // attained at the origin
    return f;
}

DerivativeCheck validate_derivatives(const SmoothFunction& f, int n_probes,
                                     double probe_radius, unsigned seed, double step) {
    DerivativeCheck out;
    RngStream rng(seed, 7);
    for (int i = 0; i < n_probes; ++i) {
        Vec x = probe_radius * rng.normal_vec(f.dim);
        const Vec g = f.gradient(x);
        for (int k = 0; k < f.dim; ++k) {
            Vec e = Vec::Zero(f.dim);
            e[k] = step;
            const double fd = (f.value(x + e) - f.value(x - e)) / (2.0 * step);
            out.max_gradient_error = std::max(out.max_gradient_error, std::abs(fd - g[k]));
        }
        const Mat h = f.hessian(x);
        out.max_hessian_asym =
            std::max(out.max_hessian_asym, (h - h.transpose()).cwiseAbs().maxCoeff());
    }
    const double fd_tol = 10.0 * step * step *
                              std::max(1.0, f.bound_hessian * probe_radius) +
                          1e-9;
    out.passed = out.max_gradient_error < std::max(fd_tol, 1e-6 * (1.0 + f.bound_gradient)) &&
                 out.max_hessian_asym < 1e-8;
    return out;
}

ShellDecayReport d0_membership(const SmoothFunction& f, const Mat& a,
                               const std::vector<double>& shell_radii,
                               int samples_per_shell, double tol) {
    for (std::size_t i = 1; i < shell_radii.size(); ++i)
        if (shell_radii[i] <= shell_radii[i - 1] || shell_radii[i - 1] <= 0.0)
            throw std::invalid_argument("d0_membership: radii must be positive increasing");
    ShellDecayReport rep;
    rep.tol = tol;
    const SphereRule rule = sphere_rule(f.dim, std::max(8, samples_per_shell));
    for (double r : shell_radii) {
        ShellDecayRow row{r, 0.0, 0.0, 0.0, 0.0};
        for (const auto& dir : rule.dirs) {
            const Vec x = r * dir;
            row.max_value = std::max(row.max_value, std::abs(f.value(x)));
            const Vec g = f.gradient(x);
            row.max_gradient = std::max(row.max_gradient, g.norm());
            row.max_hessian =
                std::max(row.max_hessian, f.hessian(x).cwiseAbs().maxCoeff());
            row.max_drift_pairing =
                std::max(row.max_drift_pairing, std::abs((a * x).dot(g)));
        }
        rep.rows.push_back(row);
    }
    const auto& last = rep.rows.back();
    rep.consistent_with_decay_core = last.max_value < tol && last.max_gradient < tol &&
                                     last.max_hessian < tol &&
                                     last.max_drift_pairing < tol;
    return rep;
}

}  // namespace oulevy
