#include "oulevy/d1_core.hpp"

#include <cmath>
#include <stdexcept>

namespace oulevy {

namespace {
constexpr Cplx kI{0.0, 1.0};
}

PhiValue eval_phi(const OUModel& model, const D1Function& phi, const Vec& x,
                  const QuadOptions& opt) {
    if (!(phi.a > 0.0)) throw std::invalid_argument("eval_phi: a must be > 0");
    PhiValue out;
    FlowExponentIntegral psi_int(model, phi.h, phi.a, opt);
    auto integrand = [&](double s) {
        return std::exp(kI * model.adjoint_state(s, phi.h).dot(x)) *
               std::exp(-psi_int.value(s));
    };
    auto q = integrate_complex(integrand, 0.0, phi.a, opt);
    out.value = q.value;
    out.error = q.error + psi_int.error() * phi.a;
    out.converged = q.converged && psi_int.converged();
    return out;
}

PhiValue apply_L_phi(const OUModel& model, const D1Function& phi, const Vec& x,
                     const QuadOptions& opt) {
    PhiValue out;
    FlowExponentIntegral psi_int(model, phi.h, phi.a, opt);
    const Cplx boundary = std::exp(kI * model.adjoint_state(phi.a, phi.h).dot(x)) *
                          std::exp(-psi_int.value(phi.a));
    out.value = boundary - std::exp(kI * phi.h.dot(x));
    out.error = psi_int.error();
    out.converged = psi_int.converged();
    return out;
}

PhiIdentityReport phi_semigroup_identity(const OUModel& model, const D1Function& phi,
                                         double t, const Vec& x,
                                         const QuadOptions& opt) {
    if (t < 0.0)
        throw std::invalid_argument("phi_semigroup_identity: t must be >= 0");
    PhiIdentityReport rep;
    if (t == 0.0) return rep;  // exact identity at t = 0

    // left side: P_t phi_{a,h}(x) = int_0^a P_{s+t}(e^{i<.,h>})(x) ds
    FlowExponentIntegral psi_int(model, phi.h, phi.a + t, opt);
    auto lhs_integrand = [&](double s) {
        return std::exp(kI * model.adjoint_state(s + t, phi.h).dot(x)) *
               std::exp(-psi_int.value(s + t));
    };
    auto lhs = integrate_complex(lhs_integrand, 0.0, phi.a, opt);

    // right side from the same prefix integral
    auto mode = [&](double s) {
        return std::exp(kI * model.adjoint_state(s, phi.h).dot(x)) *
               std::exp(-psi_int.value(s));
    };
    auto phi_at = integrate_complex(mode, 0.0, phi.a + t, opt);  // phi_{a+t,h}(x)
    auto phi_t = integrate_complex(mode, 0.0, t, opt);           // phi_{t,h}(x)

    rep.residual = std::abs(lhs.value - phi_at.value + phi_t.value);
    rep.budget = lhs.error + phi_at.error + phi_t.error +
                 3.0 * psi_int.error() * (phi.a + t) + 10.0 * opt.abs_tol;
    rep.converged = lhs.converged && phi_at.converged && phi_t.converged &&
                    psi_int.converged();
    return rep;
}

SmoothFunction phi_as_smooth(const OUModel& model, const D1Function& phi,
                             bool imaginary_part, const QuadOptions& opt) {
    const int d = model.dim();
    auto psi_int = std::make_shared<FlowExponentIntegral>(model, phi.h, phi.a, opt);
    const OUModel* mp = &model;
    const D1Function ph = phi;

    auto mode_weight = [psi_int, mp, ph](double s) {
        return std::exp(-psi_int->value(s));
    };
    auto value_c = [mp, ph, mode_weight, opt](const Vec& x) {
        return integrate_complex(
                   [&](double s) {
                       return std::exp(kI * mp->adjoint_state(s, ph.h).dot(x)) *
                              mode_weight(s);
                   },
                   0.0, ph.a, opt)
            .value;
    };
    // D phi(x) = i int_0^a e^{sA^T}h e^{i<e^{sA^T}h, x>} w(s) ds (component-wise)
    auto grad_c = [mp, ph, mode_weight, opt, d](const Vec& x) {
        CVec g = CVec::Zero(d);
        for (int k = 0; k < d; ++k) {
            g[k] = integrate_complex(
                       [&](double s) {
                           const Vec hs = mp->adjoint_state(s, ph.h);
                           return kI * hs[k] * std::exp(kI * hs.dot(x)) *
                                  mode_weight(s);
                       },
                       0.0, ph.a, opt)
                       .value;
        }
        return g;
    };
    auto hess_c = [mp, ph, mode_weight, opt, d](const Vec& x) {
        CMat h = CMat::Zero(d, d);
        for (int j = 0; j < d; ++j)
            for (int k = j; k < d; ++k) {
                h(j, k) = integrate_complex(
                              [&](double s) {
                                  const Vec hs = mp->adjoint_state(s, ph.h);
                                  return -hs[j] * hs[k] * std::exp(kI * hs.dot(x)) *
                                         mode_weight(s);
                              },
                              0.0, ph.a, opt)
                              .value;
                h(k, j) = h(j, k);
            }
        return h;
    };

    SmoothFunction f;
    f.dim = d;
    if (imaginary_part) {
        f.value = [value_c](const Vec& x) { return value_c(x).imag(); };
        f.gradient = [grad_c](const Vec& x) { return Vec(grad_c(x).imag()); };
        f.hessian = [hess_c](const Vec& x) { return Mat(hess_c(x).imag()); };
    } else {
        f.value = [value_c](const Vec& x) { return value_c(x).real(); };
        f.gradient = [grad_c](const Vec& x) { return Vec(grad_c(x).real()); };
        f.hessian = [hess_c](const Vec& x) { return Mat(hess_c(x).real()); };
    }
    // |w(s)| <= 1 and |e^{sA^T}h| <= max_s ...: crude but valid declared bounds
    double hmax = phi.h.norm();
    for (int i = 1; i <= 16; ++i)
        hmax = std::max(hmax,
                        model.adjoint_state(phi.a * i / 16.0, phi.h).norm());
    f.bound_value = phi.a;
    f.bound_gradient = phi.a * hmax;
    f.bound_hessian = phi.a * hmax * hmax;
    f.osc_hint = hmax;
    return f;
}

TrigPolynomial phi_trig_representation(const OUModel& model, const D1Function& phi,
                                       int panels, const QuadOptions& opt) {
    // composite GK15 in s: phi(x) = sum_i w_i e^{-Psi(s_i)} e^{i<e^{s_iA^T}h, x>}
    FlowExponentIntegral psi_int(model, phi.h, phi.a, opt);
    std::vector<TrigPolynomial::Term> terms;
    terms.reserve(static_cast<std::size_t>(panels) * 15);
    const double w = phi.a / panels;
    for (int p = 0; p < panels; ++p) {
        const double a0 = p * w;
        const double c = a0 + 0.5 * w;
        const double hw = 0.5 * w;
        for (int i = 0; i < 15; ++i) {
            double node, weight;
            if (i < 7) {
                node = c - hw * detail::kGK15Nodes[i];
                weight = hw * detail::kGK15WeightsK[i];
            } else if (i == 7) {
                node = c;
                weight = hw * detail::kGK15WeightsK[7];
            } else {
                node = c + hw * detail::kGK15Nodes[14 - i];
                weight = hw * detail::kGK15WeightsK[14 - i];
            }
            terms.push_back(TrigPolynomial::Term{
                weight * std::exp(-psi_int.value(node)),
                model.adjoint_state(node, phi.h)});
        }
    }
    return TrigPolynomial(model.dim(), std::move(terms));
}

Cplx EmpiricalMeasure::integrate(const std::function<Cplx(const Vec&)>& f) const {
    Cplx s{};
    for (const auto& atom : atoms) s += f(atom);
    return s / static_cast<double>(atoms.size());
}

std::vector<EmpiricalMeasure> empirical_snapshots(const OUModel& model, const Vec& x,
                                                  const std::vector<double>& grid,
                                                  int n_paths,
                                                  std::uint64_t master_seed,
                                                  const PathScheme& scheme,
                                                  int threads) {
    PathEnsemble ens =
        simulate_paths(model, x, grid, n_paths, scheme, master_seed, threads);
    std::vector<EmpiricalMeasure> out(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        out[g].t = grid[g];
        out[g].atoms.reserve(n_paths);
        for (int p = 0; p < n_paths; ++p)
            out[g].atoms.push_back(ens.state_vec(p, static_cast<int>(g)));
    }
    return out;
}

FpkReport fpk_residual(const OUModel& model, const FpkObservable& f, const Vec& x,
                       double t, int n_paths, int snapshots,
                       std::uint64_t master_seed, const PathScheme& scheme,
                       int threads) {
    if (n_paths < 1000)
        throw std::invalid_argument("fpk_residual: need at least 1000 paths");
    if (snapshots < 3)
        throw std::invalid_argument("fpk_residual: need at least 3 snapshots");
    const int d = model.dim();

    // evaluable f and exact L0 f (closed forms, precomputed coefficients)
    std::function<Cplx(const Vec&)> f_eval, lf_eval;
    double lf_coeff_error = 0.0;
    if (const auto* p = std::get_if<TrigPolynomial>(&f)) {
        struct TermAction {
            Cplx c;
            Vec h;
            Cplx psi;
        };
        auto actions = std::make_shared<std::vector<TermAction>>();
        for (const auto& term : p->terms()) {
            const auto psi = model.psi(term.freq);
            lf_coeff_error += std::abs(term.coeff) * psi.error;
            actions->push_back(TermAction{term.coeff, term.freq, psi.value});
        }
        const Mat a_mat = model.a();
        TrigPolynomial pc = *p;
        f_eval = [pc](const Vec& z) { return pc.value(z); };
        lf_eval = [actions, a_mat](const Vec& z) {
            Cplx s{};
            const Vec az = a_mat * z;
            for (const auto& ta : *actions)
                s += ta.c * std::exp(kI * ta.h.dot(z)) *
                     (kI * az.dot(ta.h) - ta.psi);
            return s;
        };
    } else {
        const auto& phi = std::get<D1Function>(f);
        TrigPolynomial rep = phi_trig_representation(model, phi);
        FlowExponentIntegral psi_int(model, phi.h, phi.a);
        const Cplx e_a = std::exp(-psi_int.value(phi.a));
        const Mat flow_a = model.flow().exp(phi.a);
        const Vec h = phi.h;
        lf_coeff_error = psi_int.error();
        f_eval = [rep](const Vec& z) { return rep.value(z); };
        lf_eval = [e_a, flow_a, h](const Vec& z) {
            return std::exp(kI * h.dot(flow_a * z)) * e_a -
                   std::exp(kI * h.dot(z));
        };
    }

    std::vector<double> grid(snapshots);
    for (int j = 0; j < snapshots; ++j)
        grid[j] = t * static_cast<double>(j) / (snapshots - 1);

    // stats per snapshot: Re f, Im f, Re L0 f, Im L0 f
    const int n_stats = 4 * snapshots;
    auto leaf = [&](const double* states, const std::vector<PathJump>&, double* out) {
        Vec z(d);
        for (int j = 0; j < snapshots; ++j) {
            for (int k = 0; k < d; ++k) z[k] = states[j * d + k];
            const Cplx fv = f_eval(z);
            const Cplx lv = lf_eval(z);
            out[4 * j + 0] = fv.real();
            out[4 * j + 1] = fv.imag();
            out[4 * j + 2] = lv.real();
            out[4 * j + 3] = lv.imag();
        }
    };
    const auto red = reduce_paths(model, x, grid, n_paths, scheme, master_seed,
                                  n_stats, leaf, threads);

    auto mean_c = [&](int j, int base) {
        return Cplx{red.mean(4 * j + base), red.mean(4 * j + base + 1)};
    };
    auto err_c = [&](int j, int base) {
        return std::hypot(red.std_error(4 * j + base), red.std_error(4 * j + base + 1));
    };

    // running trapezoid of int L0 f dgamma_s, fine and half resolution
    FpkReport rep;
    rep.n_paths = n_paths;
    const Cplx f0 = f_eval(x);
    Cplx run{};
    double run_stat_err = 0.0;
    std::vector<Cplx> run_at(snapshots);
    for (int j = 0; j < snapshots; ++j) {
        if (j > 0) {
            const double dt = grid[j] - grid[j - 1];
            run += 0.5 * dt * (mean_c(j - 1, 2) + mean_c(j, 2));
            run_stat_err += 0.5 * dt * (err_c(j - 1, 2) + err_c(j, 2));
        }
        run_at[j] = run;
        FpkRow row{};
        row.t = grid[j];
        row.f_mean_re = mean_c(j, 0).real();
        row.f_mean_im = mean_c(j, 0).imag();
        row.lf_mean_re = mean_c(j, 2).real();
        row.lf_mean_im = mean_c(j, 2).imag();
        row.running_integral_re = run.real();
        row.running_integral_im = run.imag();
        row.residual = std::abs(mean_c(j, 0) - f0 - run);
        rep.rows.push_back(row);
    }
    Cplx run_coarse{};
    int prev = 0;
    for (int j = 2; j < snapshots; j += 2) {
        const double dt = grid[j] - grid[prev];
        run_coarse += 0.5 * dt * (mean_c(prev, 2) + mean_c(j, 2));
        prev = j;
    }
    if (prev != snapshots - 1) {
        const double dt = grid[snapshots - 1] - grid[prev];
        run_coarse += 0.5 * dt * (mean_c(prev, 2) + mean_c(snapshots - 1, 2));
    }

    rep.residual = rep.rows.back().residual;
    rep.budget = 4.0 * err_c(snapshots - 1, 0) + 4.0 * run_stat_err +
                 std::abs(run - run_coarse) + lf_coeff_error * t + 1e-7;
    return rep;
}

}  // namespace oulevy
