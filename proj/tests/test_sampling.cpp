#include <doctest.h>

#include <cmath>

#include "oulevy/increment_sampler.hpp"

using namespace oulevy;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

// empirical characteristic function at several frequencies over one sample set
std::vector<Cplx> ecf_grid(const IncrementSampler& sampler, double dt,
                           const std::vector<double>& us, int n,
                           std::uint64_t seed) {
    std::vector<Cplx> out(us.size(), Cplx{});
    for (int i = 0; i < n; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const double z = sampler.sample(dt, rng)[0];
        for (std::size_t k = 0; k < us.size(); ++k)
            out[k] += std::exp(Cplx{0.0, us[k] * z});
    }
    for (auto& v : out) v /= static_cast<double>(n);
    return out;
}

}  // namespace

TEST_CASE("pure drift increment is deterministic") {
    LevyTriplet t = LevyTriplet::drift_only(v2(1.0, 0.0));
    IncrementSampler sampler(t);
    RngStream rng(5, 0);
    const Vec z = sampler.sample(0.5, rng);
    CHECK(z[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(z[1] == 0.0);
}

TEST_CASE("increments are reproducible per stream") {
    auto nu = LevyMeasureSpec::compound_poisson(1, 3.0, PointMassLaw{v1(0.4)});
    IncrementSampler sampler(LevyTriplet::pure_jump(nu));
    RngStream a(9, 3), b(9, 3);
    for (int i = 0; i < 50; ++i)
        CHECK(sampler.sample(0.1, a)[0] == sampler.sample(0.1, b)[0]);
}

TEST_CASE("compound Poisson mean with compensation") {
    // jump inside the unit ball: compensator cancels the jump mean entirely
    const int n = 100000;
    const double dt = 1.0;
    {
        auto nu = LevyMeasureSpec::compound_poisson(1, 2.0, PointMassLaw{v1(0.3)});
        IncrementSampler sampler(LevyTriplet::pure_jump(nu));
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            RngStream rng(11, static_cast<std::uint64_t>(i));
            const double z = sampler.sample(dt, rng)[0];
            s += z;
            s2 += z * z;
        }
        const double mean = s / n;
        const double sd = std::sqrt((s2 / n - mean * mean) / n);
        CHECK(std::abs(mean - 0.0) < 4.0 * sd);
    }
    // jump outside the unit ball: no compensation, mean = lambda y0 dt
    {
        auto nu = LevyMeasureSpec::compound_poisson(1, 2.0, PointMassLaw{v1(2.0)});
        IncrementSampler sampler(LevyTriplet::pure_jump(nu));
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            RngStream rng(12, static_cast<std::uint64_t>(i));
            const double z = sampler.sample(dt, rng)[0];
            s += z;
            s2 += z * z;
        }
        const double mean = s / n;
        const double sd = std::sqrt((s2 / n - mean * mean) / n);
        CHECK(std::abs(mean - 4.0) < 4.0 * sd);
    }
}

TEST_CASE("Gaussian-only increments have covariance Q dt") {
    Mat q(2, 2);
    q << 1.0, 0.4, 0.4, 0.8;
    IncrementSampler sampler(LevyTriplet::gaussian(q));
    const double dt = 0.3;
    const int n = 100000;
    Mat cov = Mat::Zero(2, 2);
    Vec mean = Vec::Zero(2);
    for (int i = 0; i < n; ++i) {
        RngStream rng(13, static_cast<std::uint64_t>(i));
        const Vec z = sampler.sample(dt, rng);
        mean += z;
        cov += z * z.transpose();
    }
    mean /= n;
    cov = cov / n - mean * mean.transpose();
    CHECK((cov - q * dt).cwiseAbs().maxCoeff() < 0.05 * dt);
}

TEST_CASE("small-jump policy switches on for infinite activity") {
    auto stable = LevyMeasureSpec::isotropic_stable(1, 0.5, 1.0);
    IncrementSampler s1(LevyTriplet::pure_jump(stable));
    CHECK(s1.substitution_enabled());  // sigma(eps)/eps > 1 here
    CHECK(s1.cut() == doctest::Approx(0.01));

    auto cp = LevyMeasureSpec::compound_poisson(1, 2.0, PointMassLaw{v1(0.4)});
    IncrementSampler s2(LevyTriplet::pure_jump(cp));
    CHECK_FALSE(s2.substitution_enabled());  // finite activity sampled exactly
    CHECK(s2.cut() == 0.0);
}

TEST_CASE("empirical characteristic function matches exp(-dt psi)") {
    const int n = 100000;
    const double dt = 0.2;
    const double mc_tol = 3.0 / std::sqrt(static_cast<double>(n));

    std::vector<LevyTriplet> triplets;
    triplets.push_back(LevyTriplet(Mat::Identity(1, 1) * 0.5, v1(0.3),
                                   LevyMeasureSpec::compound_poisson(
                                       1, 1.5, GaussianLaw{v1(0.1), Mat::Identity(1, 1) * 0.09})));
    triplets.push_back(
        LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_stable(1, 0.5, 1.0)));
    triplets.push_back(
        LevyTriplet::pure_jump(LevyMeasureSpec::tempered_stable(0.7, 1.0, 0.3, 1.0)));

    const std::vector<double> us{0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, -1.0};
    int seed = 1000;
    for (const auto& t : triplets) {
        IncrementSampler sampler(t);
        const auto emp = ecf_grid(sampler, dt, us, n, seed);
        for (std::size_t k = 0; k < us.size(); ++k) {
            const Cplx target = std::exp(-dt * char_exponent(t, v1(us[k])).value);
            double bias = 0.0;
            if (sampler.substitution_enabled())
                bias = dt * std::pow(std::abs(us[k]), 3) *
                       sampler.substitution_bias_third_moment() / 6.0;
            CHECK(std::abs(emp[k] - target) < mc_tol + bias);
        }
        ++seed;
    }
}

TEST_CASE("restricted samplers stay beyond the cut and follow the tail law") {
    auto stable = LevyMeasureSpec::isotropic_stable(2, 0.7, 1.0);
    RngStream rng(77, 0);
    int beyond_two = 0;
    const int n = 40000;
    const double eps = 0.05;
    for (int i = 0; i < n; ++i) {
        const Vec y = sample_above(stable, eps, rng);
        CHECK(y.norm() > eps);
        if (y.norm() > 2.0) ++beyond_two;
    }
    // P(|Y| > 2 | |Y| > eps) = (eps/2)^alpha
    const double p = std::pow(eps / 2.0, 0.7);
    CHECK(std::abs(beyond_two / static_cast<double>(n) - p) <
          4.0 * std::sqrt(p / n) + 1e-3);
}
