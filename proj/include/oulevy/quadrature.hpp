#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace oulevy {

using Cplx = std::complex<double>;

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    std::size_t max_panels = 4000;
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;          // achieved error estimate
    bool converged = true;
    std::size_t evals = 0;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss (QUADPACK dqk15 constants).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

inline double scalar_norm(double x) { return std::abs(x); }
inline double scalar_norm(const Cplx& x) { return std::abs(x); }

template <class T, class F>
void gk15_panel(const F& f, double a, double b, T& out_k, double& out_err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T resk = kGK15WeightsK[7] * f(c);
    T resg = kGK15WeightsG[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kGK15Nodes[i];
        const T fsum = f(c - dx) + f(c + dx);
        resk += kGK15WeightsK[i] * fsum;
        if (i % 2 == 1) resg += kGK15WeightsG[i / 2] * fsum;
    }
    out_k = resk * h;
    out_err = scalar_norm((resk - resg) * h);
}

template <class T>
struct Panel {
    double a, b;
    T value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval. Endpoints are never evaluated,
// so integrable endpoint singularities are handled by subdivision.
template <class T, class F>
QuadResult<T> integrate_adaptive(const F& f, double a, double b,
                                 const QuadOptions& opt = {}) {
    QuadResult<T> res;
    if (a == b) return res;
    double sign = 1.0;
    if (b < a) { std::swap(a, b); sign = -1.0; }

    std::priority_queue<detail::Panel<T>> heap;
    detail::Panel<T> p0{a, b, T{}, 0.0};
    detail::gk15_panel(f, a, b, p0.value, p0.err);
    res.evals = 15;
    T total = p0.value;
    double total_err = p0.err;
    heap.push(p0);

    std::size_t n_panels = 1;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * detail::scalar_norm(total)) &&
           n_panels < opt.max_panels) {
        detail::Panel<T> worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) {  // interval exhausted at machine precision
            heap.push(detail::Panel<T>{worst.a, worst.b, worst.value, 0.0});
            continue;
        }
        detail::Panel<T> left{worst.a, m, T{}, 0.0}, right{m, worst.b, T{}, 0.0};
        detail::gk15_panel(f, left.a, left.b, left.value, left.err);
        detail::gk15_panel(f, right.a, right.b, right.value, right.err);
        res.evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++n_panels;
    }
    res.converged =
        total_err <= std::max(opt.abs_tol, opt.rel_tol * detail::scalar_norm(total));
    // Re-sum panels in heap order for a cleaner error figure.
    res.value = sign * total;
    res.error = total_err;
    return res;
}

// Same driver, but also hands back the final partition sorted by left endpoint
// (used to build prefix integrals s -> int_a^s f).
template <class T>
struct QuadPanel {
    double a, b;
    T value;
    double err;
};

template <class T, class F>
QuadResult<T> integrate_adaptive_collect(const F& f, double a, double b,
                                         std::vector<QuadPanel<T>>& panels,
                                         const QuadOptions& opt = {}) {
    QuadResult<T> res;
    panels.clear();
    if (a == b) return res;

    std::priority_queue<detail::Panel<T>> heap;
    detail::Panel<T> p0{a, b, T{}, 0.0};
    detail::gk15_panel(f, a, b, p0.value, p0.err);
    res.evals = 15;
    T total = p0.value;
    double total_err = p0.err;
    heap.push(p0);
    std::size_t n_panels = 1;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * detail::scalar_norm(total)) &&
           n_panels < opt.max_panels) {
        detail::Panel<T> worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) {
            heap.push(detail::Panel<T>{worst.a, worst.b, worst.value, 0.0});
            continue;
        }
        detail::Panel<T> left{worst.a, m, T{}, 0.0}, right{m, worst.b, T{}, 0.0};
        detail::gk15_panel(f, left.a, left.b, left.value, left.err);
        detail::gk15_panel(f, right.a, right.b, right.value, right.err);
        res.evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++n_panels;
    }
    res.converged =
        total_err <= std::max(opt.abs_tol, opt.rel_tol * detail::scalar_norm(total));
    res.value = total;
    res.error = total_err;
    while (!heap.empty()) {
        const auto& p = heap.top();
        panels.push_back(QuadPanel<T>{p.a, p.b, p.value, p.err});
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const QuadPanel<T>& x, const QuadPanel<T>& y) { return x.a < y.a; });
    return res;
}

inline QuadResult<double> integrate(const std::function<double(double)>& f, double a,
                                    double b, const QuadOptions& opt = {}) {
    return integrate_adaptive<double>(f, a, b, opt);
}

inline QuadResult<Cplx> integrate_complex(const std::function<Cplx(double)>& f, double a,
                                          double b, const QuadOptions& opt = {}) {
    return integrate_adaptive<Cplx>(f, a, b, opt);
}

// Wynn epsilon extrapolation of a sequence of partial sums; returns the deepest
// stable diagonal entry together with a difference-based error estimate.
template <class T>
struct EpsilonResult {
    T value{};
    double error = std::numeric_limits<double>::infinity();
};

template <class T>
EpsilonResult<T> wynn_epsilon(const std::vector<T>& partial) {
    EpsilonResult<T> out;
    const std::size_t n = partial.size();
    if (n == 0) return out;
    if (n == 1) { out.value = partial[0]; return out; }
    std::vector<T> cur = partial, prev(n, T{});
    out.value = partial.back();
    out.error = detail::scalar_norm(partial[n - 1] - partial[n - 2]);
    T best = partial.back();
    // even columns of the epsilon table hold the extrapolants
    for (std::size_t k = 1; k + 1 <= n; ++k) {
        std::vector<T> next(cur.size() - 1);
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
            const T d = cur[j + 1] - cur[j];
            const double nd = detail::scalar_norm(d);
            if (nd < 1e-300) {  // converged exactly
                out.value = cur[j + 1];
                out.error = 0.0;
                return out;
            }
            next[j] = prev[j + 1] + T(1.0) / d;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0 && cur.size() >= 2) {
            const T cand = cur.back();
            const double e = detail::scalar_norm(cand - best);
            if (e < out.error) {
                out.error = e;
                out.value = cand;
            }
            best = cand;
        }
    }
    return out;
}

// Integral over [a, +inf) of a decaying oscillatory integrand: the tail is
// summed in blocks of one half-cycle and the block partial sums are
// extrapolated with the epsilon algorithm (the QUADPACK QAWF strategy).
template <class T, class F>
QuadResult<T> integrate_oscillatory_tail(const F& f, double a, double cycle,
                                         const QuadOptions& opt = {},
                                         std::size_t max_cycles = 96) {
    QuadResult<T> res;
    std::vector<T> partial;
    partial.reserve(max_cycles);
    T sum{};
    QuadOptions block_opt = opt;
    block_opt.abs_tol = std::max(opt.abs_tol * 1e-2, 1e-15);
    block_opt.max_panels = 60;
    double lo = a;
    EpsilonResult<T> best;
    for (std::size_t k = 0; k < max_cycles; ++k) {
        const double hi = lo + cycle;
        auto blk = integrate_adaptive<T>(f, lo, hi, block_opt);
        res.evals += blk.evals;
        sum += blk.value;
        partial.push_back(sum);
        lo = hi;
        if (partial.size() >= 6 && partial.size() % 2 == 0) {
            auto e = wynn_epsilon(partial);
            if (e.error < best.error) best = e;
            if (best.error < opt.abs_tol) break;
        }
    }
    if (partial.size() < 6) {
        res.value = sum;
        res.error = partial.empty() ? 0.0
                                    : detail::scalar_norm(partial.back() -
                                                          partial[partial.size() - 1]);
        return res;
    }
    res.value = best.value;
    res.error = best.error;
    res.converged = best.error <= std::max(opt.abs_tol, opt.rel_tol *
                                                            detail::scalar_norm(best.value));
    return res;
}

// Map [a, +inf) to a finite interval for integrands with fast monotone decay.
template <class T, class F>
QuadResult<T> integrate_to_infinity(const F& f, double a, const QuadOptions& opt = {}) {
    auto g = [&](double s) {
        const double om = 1.0 - s;
        const double y = a + s / om;
        return f(y) * (1.0 / (om * om));
    };
    return integrate_adaptive<T>(g, 0.0, 1.0, opt);
}

}  // namespace oulevy
