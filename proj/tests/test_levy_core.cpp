#include <doctest.h>

#include <cmath>

#include "oulevy/levy_integral.hpp"
#include "oulevy/levy_triplet.hpp"

using namespace oulevy;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

// frozen oracle values (30-digit quadrature with singularity subtraction,
// computed independently of this implementation)
constexpr double kPsiTS1Re = 0.34982607387843334;
constexpr double kPsiTS1Im = -0.11960328609829431;
constexpr double kPsiTS07Re = 0.19043570901272161;
constexpr double kPsiTS07Im = -0.13190949689789329;
constexpr double kPsiTS2Re = 0.96428455060636063;
constexpr double kPsiTS2Im = 0.20046245744806422;
// int_0^inf (1 - cos v) v^{-3/2} dv = sqrt(2 pi)
const double kCosIntegral = std::sqrt(2.0 * M_PI);
// int_0^inf (1 - J0(v)) v^{-3/2} dv
constexpr double kBesselIntegral = 1.9119551899445000;
// int_1^inf y^{-1/2} e^{-y} dy = Gamma(1/2, 1)
constexpr double kTailFirstMomentTS = 0.27880558528066198;
constexpr double kSmallSquareTS = 0.55709240342254539;

}  // namespace

TEST_CASE("psi: Gaussian-only triplet") {
    LevyTriplet t = LevyTriplet::gaussian(Mat::Identity(2, 2));
    const auto r = char_exponent(t, v2(1.0, 0.0));
    CHECK(std::abs(r.value - Cplx{0.5, 0.0}) < 1e-14);
    CHECK(char_exponent(t, v2(0.0, 0.0)).value == Cplx{0.0, 0.0});  // psi(0) = 0 exactly
}

TEST_CASE("psi: single atom beyond the unit ball at a resonant frequency") {
    auto nu = LevyMeasureSpec::finite_atomic(2, {{1.0, v2(2.0, 0.0)}});
    LevyTriplet t = LevyTriplet::pure_jump(nu);
    const auto r = char_exponent(t, v2(M_PI, 0.0));
    CHECK(std::abs(r.value) < 1e-12);  // e^{2 pi i} - 1 = 0, no compensation
}

TEST_CASE("psi: finite atomic equals the explicit sum") {
    auto nu = LevyMeasureSpec::finite_atomic(
        1, {{0.7, v1(0.4)}, {0.2, v1(-1.8)}, {1.1, v1(0.9)}});
    LevyTriplet t(Mat::Zero(1, 1), v1(0.3), nu);
    const Vec u = v1(1.7);
    Cplx expected = -Cplx{0.0, 1.0} * (0.3 * 1.7);
    for (const auto& [w, y] :
         std::vector<std::pair<double, double>>{{0.7, 0.4}, {0.2, -1.8}, {1.1, 0.9}}) {
        Cplx term = std::exp(Cplx{0.0, 1.7 * y}) - 1.0;
        if (std::abs(y) <= 1.0) term -= Cplx{0.0, 1.7 * y};
        expected -= w * term;
    }
    CHECK(std::abs(char_exponent(t, u).value - expected) < 1e-14);
}

TEST_CASE("psi: tempered stable against the frozen quadrature oracle") {
    auto nu = LevyMeasureSpec::tempered_stable(0.5, 1.0, 0.0, 1.0);
    LevyTriplet t = LevyTriplet::pure_jump(nu);
    struct Probe {
        double u, re, im;
    };
    for (const auto& p : {Probe{1.0, kPsiTS1Re, kPsiTS1Im},
                          Probe{0.7, kPsiTS07Re, kPsiTS07Im},
                          Probe{2.0, kPsiTS2Re, kPsiTS2Im}}) {
        const auto r = char_exponent(t, v1(p.u));
        CHECK(r.converged);
        CHECK(std::abs(r.value - Cplx{p.re, p.im}) <
              1e-8 * std::abs(Cplx{p.re, p.im}));
    }
}

TEST_CASE("psi: symmetric stable closed form, d = 1") {
    auto nu = LevyMeasureSpec::isotropic_stable(1, 0.5, 1.0);
    LevyTriplet t = LevyTriplet::pure_jump(nu);
    for (double u : {0.5, 1.0, 2.0, 5.0}) {
        const auto r = char_exponent(t, v1(u));
        const double expected = 2.0 * kCosIntegral * std::sqrt(u);
        CHECK(r.converged);
        CHECK(std::abs(r.value.real() - expected) < 1e-7 * expected);
        CHECK(std::abs(r.value.imag()) < 1e-9);
    }
}

TEST_CASE("psi: isotropic stable closed form, d = 2") {
    auto nu = LevyMeasureSpec::isotropic_stable(2, 0.5, 1.0);
    LevyTriplet t = LevyTriplet::pure_jump(nu);
    for (double u : {0.7, 1.0, 3.0}) {
        const auto r = char_exponent(t, v2(u, 0.0));
        const double expected = 2.0 * M_PI * kBesselIntegral * std::sqrt(u);
        CHECK(std::abs(r.value.real() - expected) < 2e-7 * expected);
        CHECK(std::abs(r.value.imag()) < 1e-9);
    }
}

TEST_CASE("psi: Hermitian property and symmetric-measure realness") {
    std::vector<LevyTriplet> triplets;
    triplets.push_back(LevyTriplet::pure_jump(
        LevyMeasureSpec::tempered_stable(0.8, 1.0, 0.4, 0.7)));
    triplets.push_back(
        LevyTriplet::pure_jump(LevyMeasureSpec::isotropic_stable(1, 1.2, 0.5)));
    triplets.push_back(LevyTriplet::pure_jump(LevyMeasureSpec::compound_poisson(
        1, 2.0, GaussianLaw{v1(0.2), Mat::Identity(1, 1) * 0.04})));
    triplets.push_back(LevyTriplet(Mat::Identity(1, 1) * 0.3, v1(-0.4),
                                   LevyMeasureSpec::finite_atomic(
                                       1, {{0.5, v1(0.6)}, {0.9, v1(-1.4)}})));
    for (const auto& t : triplets) {
        for (double u : {0.3, 1.1, 2.6}) {
            const Cplx plus = char_exponent(t, v1(u)).value;
            const Cplx minus = char_exponent(t, v1(-u)).value;
            CHECK(std::abs(minus - std::conj(plus)) < 1e-9);
        }
    }
    // symmetric measure, a = 0: psi is real
    LevyTriplet sym = LevyTriplet::pure_jump(
        LevyMeasureSpec::tempered_stable(0.6, 0.8, 0.8, 0.5));
    CHECK(is_symmetric(sym.nu()));
    for (double u : {0.4, 1.3}) {
        CHECK(std::abs(char_exponent(sym, v1(u)).value.imag()) < 1e-9);
    }
}

TEST_CASE("levy_integral: atomic measures are summed exactly") {
    auto nu = LevyMeasureSpec::finite_atomic(
        2, {{0.5, v2(0.3, 0.1)}, {2.0, v2(1.5, -0.5)}});
    CompensatedIntegrand gi;
    gi.g = [](const Vec& y) { return y.squaredNorm(); };
    gi.sup_bound = 10.0;
    const auto r = levy_integral(nu, gi, 0.01);
    const double expected = 0.5 * (0.09 + 0.01) + 2.0 * (2.25 + 0.25);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-14));
    CHECK(r.error == 0.0);
}

TEST_CASE("levy_integral: zero integrand gives zero with zero error") {
    auto nu = LevyMeasureSpec::tempered_stable(0.5, 1.0, 1.0, 1.0);
    CompensatedIntegrand gi;
    gi.g = [](const Vec&) { return 0.0; };
    gi.sup_bound = 0.0;
    gi.limit_at_infinity = 0.0;
    gi.limit_radius = 1.0;
    const auto r = levy_integral(nu, gi, 0.01);
    CHECK(std::abs(r.value) < 1e-15);
    CHECK(r.error < 1e-12);
}

TEST_CASE("levy_integral: stable measure with g = 1 ^ y^2 hits the closed form") {
    // alpha = 1, c = 1, d = 1: int (1 ^ y^2) nu(dy) = 2 (1/(2-alpha) + 1/alpha) = 4
    auto nu = LevyMeasureSpec::isotropic_stable(1, 1.0, 1.0);
    CompensatedIntegrand gi;
    gi.g = [](const Vec& y) { return std::min(1.0, y.squaredNorm()); };
    gi.sup_bound = 1.0;
    gi.limit_at_infinity = 1.0;
    gi.limit_radius = 1.0;
    const auto r = levy_integral(nu, gi, 0.01, QuadOptions{1e-11, 1e-11, 20000});
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-9));
    // the three-region split is reported
    CHECK(r.inner + r.annulus + r.tail == doctest::Approx(r.value));
    CHECK(r.tail == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("check_levy_measure: reports match the stated examples") {
    // single atom of weight 1 at (2, 0)
    auto atom = LevyMeasureSpec::finite_atomic(2, {{1.0, v2(2.0, 0.0)}});
    auto rep = check_levy_measure(atom);
    CHECK(rep.small_square_mass == doctest::Approx(1.0));  // 1 ^ 4 = 1
    CHECK(rep.tail_first_moment == doctest::Approx(2.0));
    CHECK(rep.has_first_moment);

    // stable alpha = 1/2 has no first moment
    auto stbl = LevyMeasureSpec::isotropic_stable(1, 0.5, 1.0);
    rep = check_levy_measure(stbl);
    CHECK(rep.tail_first_infinite);
    CHECK_FALSE(rep.has_first_moment);
    CHECK_FALSE(stbl.has_first_moment());

    // tempering restores the first moment
    auto ts = LevyMeasureSpec::tempered_stable(0.5, 1.0, 0.0, 1.0);
    rep = check_levy_measure(ts);
    CHECK(rep.has_first_moment);
    CHECK(rep.tail_first_moment ==
          doctest::Approx(kTailFirstMomentTS).epsilon(1e-9));
    CHECK(rep.small_square_mass == doctest::Approx(kSmallSquareTS).epsilon(1e-9));
}

TEST_CASE("validation gates") {
    CHECK_THROWS(LevyMeasureSpec::finite_atomic(1, {{1.0, v1(0.0)}}));   // origin
    CHECK_THROWS(LevyMeasureSpec::finite_atomic(1, {{-1.0, v1(0.5)}}));  // weight
    CHECK_THROWS(LevyMeasureSpec::tempered_stable(2.3, 1.0, 0.0, 1.0));  // alpha
    CHECK_THROWS(LevyMeasureSpec::tempered_stable(0.5, 0.0, 0.0, 1.0));  // no mass
    CHECK_THROWS(LevyMeasureSpec::isotropic_stable(1, 0.5, -1.0));       // c < 0
    CHECK_THROWS(LevyMeasureSpec::compound_poisson(
        1, -2.0, PointMassLaw{v1(1.0)}));                                // rate
    Mat q(1, 1);
    q << -1.0;
    CHECK_THROWS(LevyTriplet(q, v1(0.0), LevyMeasureSpec::empty(1)));  // Q < 0
    Mat asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS(LevyTriplet(asym, v2(0.0, 0.0), LevyMeasureSpec::empty(2)));
    CHECK_THROWS(
        LevyTriplet(Mat::Zero(2, 2), v2(0.0, 0.0), LevyMeasureSpec::empty(1)));
}

TEST_CASE("measure moments: closed forms for the stable family") {
    auto nu = LevyMeasureSpec::isotropic_stable(2, 0.5, 1.0);
    // nu({|y| > r}) = c omega_2 r^{-1/2} / (1/2)
    CHECK(mass_above(nu, 4.0) ==
          doctest::Approx(2.0 * M_PI * 2.0 * 0.5).epsilon(1e-12));
    const Mat m2 = second_moment_below(nu, 0.01);
    CHECK(m2(0, 0) == doctest::Approx(m2(1, 1)));
    CHECK(std::abs(m2(0, 1)) < 1e-15);
    // trace = c omega_2 eps^{3/2} / (3/2)
    CHECK(m2.trace() ==
          doctest::Approx(2.0 * M_PI * std::pow(0.01, 1.5) / 1.5).epsilon(1e-12));
    CHECK(mean_in_annulus(nu, 0.01, 1.0).norm() == 0.0);
}
