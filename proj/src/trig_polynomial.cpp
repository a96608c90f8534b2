#include "oulevy/trig_polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace oulevy {

namespace {
constexpr Cplx kI{0.0, 1.0};
}

TrigPolynomial::TrigPolynomial(int dim, std::vector<Term> terms)
    : dim_(dim), terms_(std::move(terms)) {
    if (dim_ < 1) throw std::invalid_argument("TrigPolynomial: dim must be >= 1");
    for (const auto& t : terms_)
        if (t.freq.size() != dim_)
            throw std::invalid_argument("TrigPolynomial: frequency dimension mismatch");
}

TrigPolynomial TrigPolynomial::monomial(Cplx coeff, const Vec& freq) {
    return TrigPolynomial(static_cast<int>(freq.size()), {Term{coeff, freq}});
}

TrigPolynomial TrigPolynomial::constant(int dim, Cplx c) {
    return TrigPolynomial(dim, {Term{c, Vec::Zero(dim)}});
}

TrigPolynomial TrigPolynomial::cosine(const Vec& freq) {
    return TrigPolynomial(static_cast<int>(freq.size()),
                          {Term{0.5, freq}, Term{0.5, -freq}});
}

TrigPolynomial TrigPolynomial::sine(const Vec& freq) {
    return TrigPolynomial(static_cast<int>(freq.size()),
                          {Term{-0.5 * kI, freq}, Term{0.5 * kI, -freq}});
}

Cplx TrigPolynomial::value(const Vec& x) const {
    Cplx s{};
    for (const auto& t : terms_) s += t.coeff * std::exp(kI * t.freq.dot(x));
    return s;
}

CVec TrigPolynomial::gradient(const Vec& x) const {
    CVec g = CVec::Zero(dim_);
    for (const auto& t : terms_)
        g += (t.coeff * kI * std::exp(kI * t.freq.dot(x))) * t.freq.cast<Cplx>();
    return g;
}

CMat TrigPolynomial::hessian(const Vec& x) const {
    CMat h = CMat::Zero(dim_, dim_);
    for (const auto& t : terms_) {
        const Cplx w = -t.coeff * std::exp(kI * t.freq.dot(x));
        h += w * (t.freq * t.freq.transpose()).cast<Cplx>();
    }
    return h;
}

bool TrigPolynomial::is_real() const {
    for (const auto& t : terms_) {
        bool matched = false;
        for (const auto& u : terms_) {
            if ((t.freq + u.freq).norm() < 1e-14 &&
                std::abs(t.coeff - std::conj(u.coeff)) < 1e-14) {
                matched = true;
                break;
            }
        }
        if (!matched) return false;
    }
    return true;
}

double TrigPolynomial::sup_bound() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff);
    return s;
}

double TrigPolynomial::grad_bound() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff) * t.freq.norm();
    return s;
}

double TrigPolynomial::hess_bound() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff) * t.freq.squaredNorm();
    return s;
}

double TrigPolynomial::max_freq_norm() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, t.freq.norm());
    return m;
}

TrigPolynomial TrigPolynomial::scaled(Cplx s) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff *= s;
    return TrigPolynomial(dim_, std::move(out));
}

TrigPolynomial TrigPolynomial::plus(const TrigPolynomial& other) const {
    if (other.dim_ != dim_)
        throw std::invalid_argument("TrigPolynomial::plus: dimension mismatch");
    std::vector<Term> out = terms_;
    out.insert(out.end(), other.terms_.begin(), other.terms_.end());
    return TrigPolynomial(dim_, std::move(out));
}

}  // namespace oulevy
