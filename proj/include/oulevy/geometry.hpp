#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oulevy {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// surface measure of the unit sphere S^{d-1} (d = 1: counting measure {+-1})
inline double sphere_surface(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        case 3: return 4.0 * M_PI;
        default: {
            // 2 pi^{d/2} / Gamma(d/2)
            return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
        }
    }
}

/// fixed quadrature nodes (direction, weight) for integration over S^{d-1};
/// exact enough for the smooth angular integrands used here (d <= 3)
struct SphereRule {
    std::vector<Vec> dirs;
    std::vector<double> weights;  // sum to sphere_surface(d)
};

inline SphereRule sphere_rule(int d, int resolution = 64) {
    SphereRule rule;
    if (d == 1) {
        rule.dirs = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
        rule.weights = {1.0, 1.0};
        return rule;
    }
    if (d == 2) {
        const int k = resolution;
        rule.dirs.reserve(k);
        rule.weights.assign(k, 2.0 * M_PI / k);
        for (int j = 0; j < k; ++j) {
            const double th = 2.0 * M_PI * (j + 0.5) / k;
            Vec v(2);
            v << std::cos(th), std::sin(th);
            rule.dirs.push_back(v);
        }
        return rule;
    }
    if (d == 3) {
        // Gauss-Legendre in cos(theta) x midpoint in phi
        const int n_mu = std::max(8, resolution / 4);
        const int n_phi = std::max(16, resolution / 2);
        // Golub-Welsch via Eigen on the Jacobi matrix
        Mat j = Mat::Zero(n_mu, n_mu);
        for (int i = 1; i < n_mu; ++i) {
            const double b = i / std::sqrt(4.0 * i * i - 1.0);
            j(i, i - 1) = b;
            j(i - 1, i) = b;
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(j);
        for (int i = 0; i < n_mu; ++i) {
            const double mu = es.eigenvalues()[i];
            const double w_mu = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
            const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            for (int p = 0; p < n_phi; ++p) {
                const double phi = 2.0 * M_PI * (p + 0.5) / n_phi;
                Vec v(3);
                v << s * std::cos(phi), s * std::sin(phi), mu;
                rule.dirs.push_back(v);
                rule.weights.push_back(w_mu * 2.0 * M_PI / n_phi);
            }
        }
        return rule;
    }
    throw std::invalid_argument("sphere_rule: only d <= 3 supported");
}

/// average over the sphere of cos<u, y> for |y| = r, as a function of x = |u| r:
/// d=1: cos x, d=2: J0(x), d=3: sin(x)/x
inline double radial_cos_kernel(int d, double x) {
    switch (d) {
        case 1: return std::cos(x);
        case 2: return std::cyl_bessel_j(0.0, std::abs(x));
        case 3: return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
        default:
            throw std::invalid_argument("radial_cos_kernel: only d <= 3 supported");
    }
}

/// multivariate Gaussian density with cached factorization
class GaussianDensity {
public:
    GaussianDensity(const Vec& mean, const Mat& cov) : mean_(mean) {
        llt_.compute(cov);
        if (llt_.info() != Eigen::Success)
            throw std::invalid_argument("GaussianDensity: covariance not positive definite");
        double log_det = 0.0;
        for (int i = 0; i < cov.rows(); ++i)
            log_det += 2.0 * std::log(llt_.matrixL()(i, i));
        log_norm_ = -0.5 * (cov.rows() * std::log(2.0 * M_PI) + log_det);
    }

    double operator()(const Vec& y) const {
        const Vec z = llt_.matrixL().solve(y - mean_);
        return std::exp(log_norm_ - 0.5 * z.squaredNorm());
    }

    const Vec& mean() const { return mean_; }
    double max_std() const {
        return std::sqrt(
            Eigen::SelfAdjointEigenSolver<Mat>(llt_.reconstructedMatrix()).eigenvalues().maxCoeff());
    }

private:
    Vec mean_;
    Eigen::LLT<Mat> llt_;
    double log_norm_;
};

}  // namespace oulevy
