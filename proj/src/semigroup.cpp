#include "oulevy/semigroup.hpp"

#include <cmath>
#include <stdexcept>

#include "oulevy/fourier_approx.hpp"

namespace oulevy {

namespace {
constexpr Cplx kI{0.0, 1.0};
}

SemigroupValue apply_Pt_trig(const OUModel& model, const TrigPolynomial& p, double t,
                             const Vec& x, const QuadOptions& opt) {
    SemigroupValue out;
    for (const auto& term : p.terms()) {
        const auto mc = marginal_char(model, t, x, term.freq, opt);
        out.value += term.coeff * mc.value;
        out.error += std::abs(term.coeff) * mc.error;
        out.converged = out.converged && mc.converged;
    }
    return out;
}

TrigPolynomial semigroup_trig_image(const OUModel& model, const TrigPolynomial& p,
                                    double s, const QuadOptions& opt) {
    std::vector<TrigPolynomial::Term> terms;
    terms.reserve(p.terms().size());
    for (const auto& term : p.terms()) {
        FlowExponentIntegral psi_int(model, term.freq, s, opt);
        terms.push_back(TrigPolynomial::Term{term.coeff * std::exp(-psi_int.value(s)),
                                             model.adjoint_state(s, term.freq)});
    }
    return TrigPolynomial(model.dim(), std::move(terms));
}

McEstimate apply_Pt_mc(const OUModel& model, const std::function<double(const Vec&)>& f,
                       double t, const Vec& x, int n_paths, std::uint64_t master_seed,
                       const PathScheme& scheme, int threads) {
    if (n_paths < 100)
        throw std::invalid_argument("apply_Pt_mc: need at least 100 paths");
    std::vector<double> grid;
    if (t == 0.0)
        grid = {0.0};
    else
        grid = {0.0, t};
    const int d = model.dim();
    const std::size_t last = (grid.size() - 1) * d;
    auto leaf = [&](const double* states, const std::vector<PathJump>&, double* out) {
        Vec z(d);
        for (int k = 0; k < d; ++k) z[k] = states[last + k];
        out[0] = f(z);
    };
    const auto red =
        reduce_paths(model, x, grid, n_paths, scheme, master_seed, 1, leaf, threads);
    return McEstimate{red.mean(0), red.std_error(0), n_paths};
}

CauchyResidualReport cauchy_residual(const OUModel& model, const TrigPolynomial& p,
                                     double t, const Vec& x, const QuadOptions& opt) {
    if (!(t > 0.0)) throw std::invalid_argument("cauchy_residual: t must be > 0");
    CauchyResidualReport rep;
    const Vec ax = model.a() * x;

    // one prefix integral per term
    std::vector<FlowExponentIntegral> prefixes;
    prefixes.reserve(p.terms().size());
    for (const auto& term : p.terms()) prefixes.emplace_back(model, term.freq, t, opt);

    double psi_err_budget = 0.0;
    bool conv = true;

    // left side P_t p(x) from the same prefix integrals
    Cplx pt{};
    for (std::size_t k = 0; k < p.terms().size(); ++k) {
        const auto& term = p.terms()[k];
        const Vec ht = model.adjoint_state(t, term.freq);
        pt += term.coeff * std::exp(kI * ht.dot(x)) * std::exp(-prefixes[k].value(t));
        psi_err_budget += std::abs(term.coeff) * prefixes[k].error();
        conv = conv && prefixes[k].converged();
    }

    // integrand s -> L0 (P_s p)(x), exact trig action at the flowed frequency
    double max_psi_err = 0.0;
    auto integrand = [&](double s) {
        Cplx v{};
        for (std::size_t k = 0; k < p.terms().size(); ++k) {
            const auto& term = p.terms()[k];
            const Vec hs = model.adjoint_state(s, term.freq);
            const Cplx coeff = term.coeff * std::exp(-prefixes[k].value(s));
            const auto psi = model.psi(hs, opt);
            max_psi_err = std::max(max_psi_err, psi.error);
            v += coeff * std::exp(kI * hs.dot(x)) * (kI * ax.dot(hs) - psi.value);
        }
        return v;
    };
    auto integral = integrate_complex(integrand, 0.0, t, opt);

    rep.semigroup_value = pt;
    rep.integral_value = integral.value;
    rep.residual = std::abs(pt - p.value(x) - integral.value);
    rep.budget = integral.error + psi_err_budget + max_psi_err * t +
                 10.0 * opt.abs_tol;
    rep.converged = conv && integral.converged;
    return rep;
}

// ---------------------------------------------------------------------------
// Fourier-inversion surrogate of P_t f in d = 1 (compact-support f):
// P_t f(x) = (1/2pi) int fhat(h) mchar_t(x, h) dh and, differentiating the
// flowed monomials, L0 P_t f(x) = (1/2pi) int fhat(h) e^{-Psi_h(t)}
// e^{i e^{tA*}h x} (i <Ax, e^{tA*}h> - psi(e^{tA*}h)) dh.
// ---------------------------------------------------------------------------

namespace {

class FourierSurrogate1D {
public:
    FourierSurrogate1D(const OUModel& model, const SmoothFunction& f,
                       const QuadOptions& opt)
        : model_(&model), f_(&f), opt_(opt) {
        if (model.dim() != 1 || f.dim != 1)
            throw std::invalid_argument("FourierSurrogate1D: requires d = 1");
        if (!f.support_radius)
            throw std::invalid_argument(
                "FourierSurrogate1D: requires compact support metadata");
        r_ = *f.support_radius;
        // frequency cutoff from the measured decay of fhat (C^2 bump: ~ h^-3)
        cutoff_ = 8.0;
        double tail = tail_estimate(cutoff_);
        while (cutoff_ < 4096.0 && tail > 1e-9) {
            cutoff_ *= 1.5;
            tail = tail_estimate(cutoff_);
        }
        tail_bound_ = tail;
    }

    Cplx fhat(double h) const {
        auto re = integrate(
            [&](double z) {
                return f_->value(Vec::Constant(1, z)) * std::cos(h * z);
            },
            -r_, r_, opt_);
        auto im = integrate(
            [&](double z) {
                return f_->value(Vec::Constant(1, z)) * std::sin(h * z);
            },
            -r_, r_, opt_);
        return Cplx{re.value, -im.value};
    }

    // sup_h >= K |fhat(h)| (h/K)^3 * psi growth, integrated: crude but honest
    double tail_estimate(double k) const {
        const double fk = std::abs(fhat(k)) + std::abs(fhat(0.93 * k));
        // |fhat| <~ fk (k/h)^3 for h > k; psi growth <= c2 h^2
        const auto& tr = model_->triplet();
        double c2 = 0.5 * tr.q()(0, 0);
        if (tr.has_jumps()) c2 += 0.5 * second_moment_below(tr.nu(), 1.0)(0, 0);
        const double c0c1 =
            std::abs(tr.a()[0]) +
            (tr.has_jumps() ? 2.0 * mass_above(tr.nu(), 1.0) : 0.0) + 1.0;
        // int_K^inf fk (K/h)^3 (c2 h^2 + c0c1 (1 + h)) dh
        return fk * (c2 * k + c0c1 * (1.5 + k / 2.0 + 1.0));
    }

    // integral (1/2pi) int_{-K}^{K} fhat(h) kernel(h) dh
    Cplx inversion(const std::function<Cplx(double)>& kernel) const {
        auto q = integrate_complex(
            [&](double h) { return fhat(h) * kernel(h); }, -cutoff_, cutoff_,
            QuadOptions{1e-8, 1e-8, 4000});
        last_error_ = (q.error + tail_bound_) / (2.0 * M_PI);
        return q.value / (2.0 * M_PI);
    }

    double l0_pt(double t, double x) const {
        const double a = model_->a()(0, 0);
        const double eat = std::exp(t * a);
        return inversion([&](double h) {
                   const double ht = eat * h;
                   auto psi_int = integrate_complex(
                       [&](double s) {
                           return model_
                               ->psi(Vec::Constant(1, std::exp(s * a) * h), opt_)
                               .value;
                       },
                       0.0, t, QuadOptions{1e-9, 1e-9, 2000});
                   const auto psi_t = model_->psi(Vec::Constant(1, ht), opt_);
                   return std::exp(-psi_int.value) * std::exp(kI * ht * x) *
                          (kI * (a * x) * ht - psi_t.value);
               })
            .real();
    }

    double pt_value(double t, double x) const {
        const double a = model_->a()(0, 0);
        const double eat = std::exp(t * a);
        return inversion([&](double h) {
                   const double ht = eat * h;
                   auto psi_int = integrate_complex(
                       [&](double s) {
                           return model_
                               ->psi(Vec::Constant(1, std::exp(s * a) * h), opt_)
                               .value;
                       },
                       0.0, t, QuadOptions{1e-9, 1e-9, 2000});
                   return std::exp(-psi_int.value) * std::exp(kI * ht * x);
               })
            .real();
    }

    double last_error() const { return last_error_; }
    double frequency_cutoff() const { return cutoff_; }

private:
    const OUModel* model_;
    const SmoothFunction* f_;
    QuadOptions opt_;
    double r_;
    double cutoff_;
    double tail_bound_ = 0.0;
    mutable double last_error_ = 0.0;
};

}  // namespace

CommutationReport commutation_check(const OUModel& model, const SmoothFunction& bump,
                                    double t, const std::vector<Vec>& x_grid,
                                    int n_paths, std::uint64_t master_seed,
                                    const PathScheme& scheme, int threads) {
    if (!bump.support_radius)
        throw std::invalid_argument("commutation_check: f must have compact support");
    CommutationReport rep;
    const QuadOptions opt{1e-9, 1e-9, 4000};

    // right side: P_t (L0 f)(x) by Monte Carlo
    auto l0f = [&](const Vec& z) { return apply_L0(model, bump, z).value; };

    double budget = 0.0;
    if (model.dim() == 1) {
        rep.method = "fourier-surrogate-1d";
        FourierSurrogate1D surrogate(model, bump, opt);
        for (const auto& x : x_grid) {
            const double left = surrogate.l0_pt(t, x[0]);
            budget = std::max(budget, surrogate.last_error());
            const auto right =
                apply_Pt_mc(model, l0f, t, x, n_paths, master_seed, scheme, threads);
            budget = std::max(budget, budget + 4.0 * right.std_error);
            rep.left_values.push_back(left);
            rep.right_values.push_back(right.estimate);
            rep.max_discrepancy =
                std::max(rep.max_discrepancy, std::abs(left - right.estimate));
        }
        // quadrature error of the L0 f evaluations feeding the MC side
        const auto probe = apply_L0(model, bump, x_grid.front());
        budget += probe.error + 1e-8;
    } else {
        // mollified-MC representation of P_t f: the OU structure X_t^z =
        // e^{tA} z + Y_t lets one noise ensemble serve every grid point
        rep.method = "mollified-mc";
        const int d = model.dim();
        const int n_noise = std::max(2000, n_paths / 10);
        PathEnsemble noise =
            simulate_paths(model, Vec::Zero(d),
                           t == 0.0 ? std::vector<double>{0.0}
                                    : std::vector<double>{0.0, t},
                           n_noise, scheme, master_seed + 1337, threads);
        const Mat eta = model.flow().exp(t);
        SmoothFunction ptf;
        ptf.dim = d;
        const int last = static_cast<int>(noise.grid.size()) - 1;
        auto value = [eta, last, d, n_noise, noise = std::move(noise),
                      &bump](const Vec& z) {
            double s = 0.0;
            for (int p = 0; p < n_noise; ++p) {
                Vec y(d);
                for (int k = 0; k < d; ++k) y[k] = noise.state(p, last, k);
                s += bump.value(eta * z + y);
            }
            return s / n_noise;
        };
        ptf.value = value;
        ptf.bound_value = bump.bound_value;
        ptf.bound_gradient = bump.bound_gradient * eta.cwiseAbs().rowwise().sum().maxCoeff();
        ptf.bound_hessian = bump.bound_hessian * std::pow(eta.norm(), 2);
        const int n_mollify = 2;
        const int m_trunc = 24;
        // mollify-periodize the MC field and act exactly on the trig image
        TrigPolynomial rep_trig = mollify_periodize(ptf, n_mollify, m_trunc,
                                                    MollifyOptions{2});
        for (const auto& x : x_grid) {
            const auto left = apply_L0_trig(model, rep_trig, x);
            const auto right =
                apply_Pt_mc(model, l0f, t, x, n_paths, master_seed, scheme, threads);
            rep.left_values.push_back(left.value.real());
            rep.right_values.push_back(right.estimate);
            rep.max_discrepancy = std::max(
                rep.max_discrepancy, std::abs(left.value.real() - right.estimate));
            budget = std::max(budget,
                              left.error + 4.0 * right.std_error +
                                  bump.bound_gradient / std::sqrt(double(n_noise)) +
                                  0.05 * bump.bound_value);
        }
    }
    rep.budget = budget;
    rep.status = rep.max_discrepancy <= rep.budget ? "pass" : "inconclusive";
    return rep;
}

TruncationGapTable ito_truncation_gap(const OUModel& model, const SmoothFunction& f,
                                      double t, const Vec& x,
                                      const std::vector<double>& levels, int n_paths,
                                      std::uint64_t master_seed,
                                      const PathScheme& scheme, int threads) {
    if (levels.empty())
        throw std::invalid_argument("ito_truncation_gap: need at least one level");
    double min_level = kInf;
    for (double n : levels) min_level = std::min(min_level, n);
    const int d = model.dim();
    const int n_levels = static_cast<int>(levels.size());
    const std::vector<double> grid{0.0, t};

    // stats: [f(X_t), f(X^n_t) - f(X_t) for each level]
    auto leaf = [&](const double* states, const std::vector<PathJump>& jumps,
                    double* out) {
        Vec xt(d);
        for (int k = 0; k < d; ++k) xt[k] = states[d + k];
        const double full = f.value(xt);
        out[0] = full;
        for (int li = 0; li < n_levels; ++li) {
            Vec corr = Vec::Zero(d);
            for (const auto& j : jumps)
                if (j.y.norm() > levels[li])
                    corr += model.flow().apply(t - j.t, j.y);
            out[1 + li] = f.value(xt - corr) - full;
        }
    };
    const auto red = reduce_paths(model, x, grid, n_paths, scheme, master_seed,
                                  1 + n_levels, leaf, threads, min_level);
    TruncationGapTable table;
    table.n_paths = n_paths;
    for (int li = 0; li < n_levels; ++li) {
        TruncationGapRow row{};
        row.level = levels[li];
        row.gap = std::abs(red.mean(1 + li));
        row.std_error = red.std_error(1 + li);
        row.mean_full = red.mean(0);
        row.mean_truncated = red.mean(0) + red.mean(1 + li);
        row.bound = 2.0 * t * f.bound_value *
                    (model.triplet().has_jumps()
                         ? mass_above(model.triplet().nu(), levels[li])
                         : 0.0);
        table.rows.push_back(row);
    }
    return table;
}

CoreIdentityReport core_identity_check(const OUModel& model, const SmoothFunction& bump,
                                       double t, const Vec& x, int n_paths,
                                       int snapshots, std::uint64_t master_seed,
                                       const PathScheme& scheme, int threads) {
    if (snapshots < 3)
        throw std::invalid_argument("core_identity_check: need at least 3 snapshots");
    const int d = model.dim();
    std::vector<double> grid(snapshots);
    for (int j = 0; j < snapshots; ++j)
        grid[j] = t * static_cast<double>(j) / (snapshots - 1);

    // stats: [f(X_t), L0 f(X_{s_j}) for each snapshot]
    double l0_quad_err = 0.0;
    auto leaf = [&](const double* states, const std::vector<PathJump>&, double* out) {
        Vec z(d);
        for (int k = 0; k < d; ++k) z[k] = states[(snapshots - 1) * d + k];
        out[0] = bump.value(z);
        for (int j = 0; j < snapshots; ++j) {
            for (int k = 0; k < d; ++k) z[k] = states[j * d + k];
            out[1 + j] = apply_L0(model, bump, z).value;
        }
    };
    const auto red = reduce_paths(model, x, grid, n_paths, scheme, master_seed,
                                  1 + snapshots, leaf, threads);
    l0_quad_err = apply_L0(model, bump, x).error;

    // trapezoid over snapshots, with a half-resolution Richardson comparison
    auto trapezoid = [&](int stride) {
        double s = 0.0;
        double se = 0.0;
        int prev = 0;
        for (int j = stride; j < snapshots; j += stride) {
            const int cur = std::min(j, snapshots - 1);
            const double dt = grid[cur] - grid[prev];
            s += 0.5 * dt * (red.mean(1 + prev) + red.mean(1 + cur));
            se += 0.5 * dt * (red.std_error(1 + prev) + red.std_error(1 + cur));
            prev = cur;
        }
        if (prev != snapshots - 1) {
            const double dt = grid[snapshots - 1] - grid[prev];
            s += 0.5 * dt * (red.mean(1 + prev) + red.mean(1 + snapshots - 1));
        }
        return std::pair<double, double>{s, se};
    };
    const auto [int_fine, int_fine_err] = trapezoid(1);
    const auto [int_coarse, int_coarse_err] = trapezoid(2);

    CoreIdentityReport rep;
    const double ptf = red.mean(0);
    const double ptf_err = red.std_error(0);
    rep.residual_forward = std::abs(ptf - bump.value(x) - int_fine);
    rep.budget_forward = 4.0 * ptf_err + 4.0 * int_fine_err +
                         std::abs(int_fine - int_coarse) + l0_quad_err * t + 1e-8;
    (void)int_coarse_err;

    // backward form int_0^t L0 (P_s f)(x) ds via the d = 1 Fourier surrogate
    if (d == 1) {
        FourierSurrogate1D surrogate(model, bump, QuadOptions{1e-9, 1e-9, 4000});
        double max_surr_err = 0.0;
        auto q = integrate(
            [&](double s) {
                const double v = surrogate.l0_pt(s, x[0]);
                max_surr_err = std::max(max_surr_err, surrogate.last_error());
                return v;
            },
            0.0, t, QuadOptions{1e-7, 1e-7, 600});
        rep.residual_two_forms = std::abs(int_fine - q.value);
        rep.budget_two_forms = 4.0 * int_fine_err + std::abs(int_fine - int_coarse) +
                               q.error + max_surr_err * t + l0_quad_err * t + 1e-8;
    } else {
        rep.residual_two_forms = 0.0;
        rep.budget_two_forms = kInf;  // not evaluated in d >= 2
    }
    rep.pass = rep.residual_forward <= rep.budget_forward &&
               rep.residual_two_forms <= rep.budget_two_forms;
    return rep;
}

}  // namespace oulevy
