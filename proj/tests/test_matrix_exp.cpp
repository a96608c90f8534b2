#include <doctest.h>

#include <cmath>

#include "oulevy/matrix_exp.hpp"
#include "oulevy/rng.hpp"

using namespace oulevy;

TEST_CASE("exp of the zero matrix is the identity") {
    Mat a = Mat::Zero(3, 3);
    CHECK((matrix_exp(a) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((matrix_exp(a, 0.0) - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("rotation generator gives the rotation matrix") {
    Mat a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;
    for (double t : {0.1, M_PI / 2.0, 2.7}) {
        const Mat e = matrix_exp(a, t);
        Mat ref(2, 2);
        ref << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
        CHECK((e - ref).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("random matrix matches an eigendecomposition oracle") {
    RngStream rng(91, 0);
    for (int trial = 0; trial < 5; ++trial) {
        Mat a(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a(i, j) = rng.normal();
        const double t = 0.7;
        const Mat e = matrix_exp(a, t);
        Eigen::EigenSolver<Mat> es(a);
        Eigen::MatrixXcd v = es.eigenvectors();
        Eigen::VectorXcd lam = es.eigenvalues();
        Eigen::MatrixXcd oracle =
            v * (lam * t).array().exp().matrix().asDiagonal() * v.inverse();
        CHECK((e - oracle.real()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(oracle.imag().cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("semigroup property of the exponential") {
    RngStream rng(92, 0);
    Mat a(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = rng.normal();
    const Mat e1 = matrix_exp(a, 0.4);
    const Mat e2 = matrix_exp(a, 0.9);
    const Mat e12 = matrix_exp(a, 1.3);
    CHECK((e1 * e2 - e12).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("drift integral equals the closed form for invertible A") {
    Mat a(2, 2);
    a << -1.0, 0.3, 0.0, -0.5;
    const double dt = 0.37;
    const Mat d = flow_drift_integral(a, dt);
    const Mat ref = a.inverse() * (matrix_exp(a, dt) - Mat::Identity(2, 2));
    CHECK((d - ref).cwiseAbs().maxCoeff() < 1e-12);
    const Mat d0 = flow_drift_integral(Mat::Zero(2, 2), dt);
    CHECK((d0 - dt * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("flow covariance matches a Riemann-sum oracle") {
    Mat a(2, 2);
    a << -0.8, 0.2, -0.1, -1.2;
    Mat q(2, 2);
    q << 1.0, 0.3, 0.3, 0.5;
    const double dt = 0.6;
    const Mat c = flow_covariance(a, q, dt);
    const int n = 20000;
    Mat ref = Mat::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
        const double s = dt * (i + 0.5) / n;
        const Mat e = matrix_exp(a, s);
        ref += e * q * e.transpose() * (dt / n);
    }
    CHECK((c - ref).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Mat> es(c);
    CHECK(es.eigenvalues().minCoeff() > -1e-14);
}

TEST_CASE("flow propagator agrees with the direct exponential") {
    Mat a(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;  // normal matrix: spectral path engaged
    FlowPropagator flow(a);
    CHECK(flow.spectral());
    for (double t : {0.0, 0.21, 1.7}) {
        CHECK((flow.exp(t) - matrix_exp(a, t)).cwiseAbs().maxCoeff() < 1e-12);
        Vec v(2);
        v << 0.3, -1.1;
        CHECK((flow.apply(t, v) - matrix_exp(a, t) * v).norm() < 1e-12);
    }
    // defective matrix falls back to the Pade route
    Mat jordan(2, 2);
    jordan << 1.0, 1.0, 0.0, 1.0;
    FlowPropagator flow2(jordan);
    CHECK((flow2.exp(0.5) - matrix_exp(jordan, 0.5)).cwiseAbs().maxCoeff() < 1e-12);
}
