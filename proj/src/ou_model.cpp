#include "oulevy/ou_model.hpp"

#include <cmath>
#include <stdexcept>

namespace oulevy {

OUModel::OUModel(Mat a, LevyTriplet triplet)
    : dim_(static_cast<int>(a.rows())), a_mat_(std::move(a)), triplet_(std::move(triplet)) {
    if (a_mat_.rows() != a_mat_.cols())
        throw std::invalid_argument("OUModel: A must be square");
    if (triplet_.dim() != dim_)
        throw std::invalid_argument("OUModel: drift matrix and triplet dimensions disagree");
    flow_ = std::make_shared<FlowPropagator>(a_mat_);
    adjoint_flow_ = std::make_shared<FlowPropagator>(Mat(a_mat_.transpose()));
}

FlowExponentIntegral::FlowExponentIntegral(const OUModel& model, Vec h, double s_max,
                                           const QuadOptions& opt)
    : model_(&model), h_(std::move(h)), s_max_(s_max), opt_(opt) {
    if (s_max_ < 0.0)
        throw std::invalid_argument("FlowExponentIntegral: horizon must be >= 0");
    if (s_max_ == 0.0) return;
    auto res = integrate_adaptive_collect<Cplx>(
        [this](double s) { return psi_at(s); }, 0.0, s_max_, panels_, opt_);
    converged_ = res.converged;
    error_ = res.error + psi_error_ * s_max_;
    prefix_.resize(panels_.size() + 1);
    prefix_[0] = Cplx{};
    for (std::size_t i = 0; i < panels_.size(); ++i)
        prefix_[i + 1] = prefix_[i] + panels_[i].value;
}

Cplx FlowExponentIntegral::psi_at(double s) const {
    auto r = model_->psi(model_->adjoint_state(s, h_), opt_);
    psi_error_ = std::max(psi_error_, r.error);
    return r.value;
}

Cplx FlowExponentIntegral::value(double s) const {
    if (s <= 0.0) return Cplx{};
    if (s >= s_max_ && !panels_.empty()) return prefix_.back();
    // locate the panel containing s
    std::size_t lo = 0, hi = panels_.size();
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (panels_[mid].a <= s)
            lo = mid;
        else
            hi = mid;
    }
    Cplx partial{};
    double perr = 0.0;
    detail::gk15_panel([this](double r) { return psi_at(r); }, panels_[lo].a, s, partial,
                       perr);
    return prefix_[lo] + partial;
}

MarginalCharResult marginal_char(const OUModel& model, double t, const Vec& x,
                                 const Vec& h, const QuadOptions& opt) {
    if (x.size() != model.dim() || h.size() != model.dim())
        throw std::invalid_argument("marginal_char: dimension mismatch");
    if (t < 0.0) throw std::invalid_argument("marginal_char: t must be >= 0");
    MarginalCharResult res;
    const Cplx i{0.0, 1.0};
    if (t == 0.0) {
        res.value = std::exp(i * h.dot(x));
        return res;
    }
    double psi_err = 0.0;
    auto integral = integrate_complex(
        [&](double s) {
            auto r = model.psi(model.adjoint_state(s, h), opt);
            psi_err = std::max(psi_err, r.error);
            return r.value;
        },
        0.0, t, opt);
    const Cplx phase = std::exp(i * model.adjoint_state(t, h).dot(x));
    res.value = phase * std::exp(-integral.value);
    res.error = (integral.error + psi_err * t) * std::abs(res.value);
    res.converged = integral.converged;
    // the exact modulus never exceeds 1; trim roundoff overshoot only
    const double m = std::abs(res.value);
    if (m > 1.0 && m < 1.0 + 1e-9) res.value /= m;
    return res;
}

}  // namespace oulevy
