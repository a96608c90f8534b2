#pragma once

#include <Eigen/Dense>

namespace oulevy {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// e^{M} by scaling-and-squaring with a degree-13 Pade approximant.
Mat matrix_exp(const Mat& m);

/// e^{tA}
inline Mat matrix_exp(const Mat& a, double t) { return matrix_exp(Mat(t * a)); }

/// int_0^dt e^{sA} ds, computed from the exponential of the augmented block
/// matrix [[A, I], [0, 0]].
Mat flow_drift_integral(const Mat& a, double dt);

/// int_0^dt e^{sA} Q e^{sA^T} ds (Van Loan block-exponential construction).
Mat flow_covariance(const Mat& a, const Mat& q, double dt);

/// Symmetric PSD square-root factor L with L L^T = C (eigenvalues clamped at 0).
Mat psd_sqrt(const Mat& c);

/// Repeated evaluation of e^{tA} and e^{tA} v: uses the eigendecomposition of A
/// when it reproduces the Pade exponential to 1e-12, otherwise falls back to
/// scaling-and-squaring per call.
class FlowPropagator {
public:
    explicit FlowPropagator(const Mat& a);

    Mat exp(double t) const;
    Vec apply(double t, const Vec& v) const;
    bool spectral() const { return spectral_ok_; }

private:
    Mat a_;
    bool spectral_ok_ = false;
    Eigen::MatrixXcd v_, vinv_;
    Eigen::VectorXcd lam_;
};

}  // namespace oulevy
