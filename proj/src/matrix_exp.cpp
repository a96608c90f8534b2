#include "oulevy/matrix_exp.hpp"

#include <cmath>
#include <complex>

namespace oulevy {

namespace {

// Higham's 2005 degree-13 coefficients.
constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0,
                              7771770303897600.0,  1187353796428800.0,
                              129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,
                              1323241920.0,        40840800.0,
                              960960.0,            16380.0,
                              182.0,               1.0};

}  // namespace

Mat matrix_exp(const Mat& m) {
    const int d = static_cast<int>(m.rows());
    const double theta13 = 5.371920351148152;
    const double nrm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int squarings = 0;
    Mat a = m;
    if (nrm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
        a /= std::pow(2.0, squarings);
    }
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    const Mat eye = Mat::Identity(d, d);
    const Mat u = a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
                       kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 +
                       kPade13[1] * eye);
    const Mat v = a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
                  kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 +
                  kPade13[0] * eye;
    Mat r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

Mat flow_drift_integral(const Mat& a, double dt) {
    const int d = static_cast<int>(a.rows());
    Mat blk = Mat::Zero(2 * d, 2 * d);
    blk.topLeftCorner(d, d) = a * dt;
    blk.topRightCorner(d, d) = Mat::Identity(d, d) * dt;
    const Mat e = matrix_exp(blk);
    return e.topRightCorner(d, d);
}

Mat flow_covariance(const Mat& a, const Mat& q, double dt) {
    const int d = static_cast<int>(a.rows());
    Mat blk = Mat::Zero(2 * d, 2 * d);
    blk.topLeftCorner(d, d) = -a * dt;
    blk.topRightCorner(d, d) = q * dt;
    blk.bottomRightCorner(d, d) = a.transpose() * dt;
    const Mat e = matrix_exp(blk);
    const Mat f3 = e.bottomRightCorner(d, d);
    const Mat g = e.topRightCorner(d, d);
    Mat c = f3.transpose() * g;
    return 0.5 * (c + c.transpose());
}

Mat psd_sqrt(const Mat& c) {
    Eigen::SelfAdjointEigenSolver<Mat> es(c);
    Vec lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

FlowPropagator::FlowPropagator(const Mat& a) : a_(a) {
    const int d = static_cast<int>(a.rows());
    Eigen::EigenSolver<Mat> es(a);
    if (es.info() == Eigen::Success) {
        v_ = es.eigenvectors();
        lam_ = es.eigenvalues();
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(v_);
        if (lu.isInvertible()) {
            vinv_ = lu.inverse();
            // cross-check against the Pade route at t = 1 and t = 0.37
            for (double t : {1.0, 0.37}) {
                Eigen::MatrixXcd e =
                    v_ * (lam_ * t).array().exp().matrix().asDiagonal() * vinv_;
                const Mat ref = matrix_exp(a_, t);
                if ((e.real() - ref).cwiseAbs().maxCoeff() >
                        1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff()) ||
                    e.imag().cwiseAbs().maxCoeff() > 1e-12) {
                    spectral_ok_ = false;
                    return;
                }
            }
            spectral_ok_ = true;
        }
    }
    (void)d;
}

Mat FlowPropagator::exp(double t) const {
    if (!spectral_ok_) return matrix_exp(a_, t);
    Eigen::MatrixXcd e = v_ * (lam_ * t).array().exp().matrix().asDiagonal() * vinv_;
    return e.real();
}

Vec FlowPropagator::apply(double t, const Vec& v) const {
    if (!spectral_ok_) return matrix_exp(a_, t) * v;
    Eigen::VectorXcd w = vinv_ * v.cast<std::complex<double>>();
    w.array() *= (lam_ * t).array().exp();
    return (v_ * w).real();
}

}  // namespace oulevy
