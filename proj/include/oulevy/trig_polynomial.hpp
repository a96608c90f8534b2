#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "oulevy/quadrature.hpp"

namespace oulevy {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Finite sum sum_k c_k e^{i<h_k, x>} with exact term-wise calculus.
class TrigPolynomial {
public:
    struct Term {
        Cplx coeff;
        Vec freq;
    };

    TrigPolynomial(int dim, std::vector<Term> terms);

    static TrigPolynomial monomial(Cplx coeff, const Vec& freq);
    static TrigPolynomial constant(int dim, Cplx c);
    /// cos<h, x> = (e^{ihx} + e^{-ihx}) / 2
    static TrigPolynomial cosine(const Vec& freq);
    static TrigPolynomial sine(const Vec& freq);

    int dim() const { return dim_; }
    const std::vector<Term>& terms() const { return terms_; }

    Cplx value(const Vec& x) const;
    CVec gradient(const Vec& x) const;
    CMat hessian(const Vec& x) const;

    /// true iff the term set is closed under (c, h) -> (conj c, -h)
    bool is_real() const;

    /// sum |c_k| (sup-norm bound), sum |c_k||h_k|, sum |c_k||h_k|^2
    double sup_bound() const;
    double grad_bound() const;
    double hess_bound() const;
    double max_freq_norm() const;

    TrigPolynomial scaled(Cplx s) const;
    TrigPolynomial plus(const TrigPolynomial& other) const;

private:
    int dim_;
    std::vector<Term> terms_;
};

}  // namespace oulevy
