#include <doctest.h>

#include <cmath>

#include "oulevy/quadrature.hpp"

using namespace oulevy;

TEST_CASE("adaptive GK reproduces smooth integrals") {
    auto r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));

    auto g = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(g.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("endpoint singularities are integrable without endpoint evaluation") {
    // int_0^1 x^{-1/2} dx = 2
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                       QuadOptions{1e-10, 1e-10, 20000});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
    // int_0^1 x^{-0.9} dx = 10 (strongly singular)
    auto s = integrate([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0,
                       QuadOptions{1e-9, 1e-9, 40000});
    CHECK(s.value == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("orientation flips the sign") {
    auto r = integrate([](double x) { return x; }, 1.0, 0.0);
    CHECK(r.value == doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("complex integrand") {
    auto r = integrate_complex(
        [](double x) { return std::exp(Cplx{0.0, x}); }, 0.0, M_PI / 2.0);
    CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.value.imag() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oscillatory tail by half-cycle summation hits the frozen reference") {
    // int_pi^inf cos(v) v^{-3/2} dv, 30-digit oscillation-aware quadrature
    constexpr double kReference = -0.055681563789933241;
    auto cyc = integrate_oscillatory_tail<double>(
        [](double v) { return std::cos(v) * std::pow(v, -1.5); }, M_PI, M_PI,
        QuadOptions{1e-11, 1e-11, 4000});
    CHECK(cyc.converged);
    CHECK(std::abs(cyc.value - kReference) < 1e-10);
}

TEST_CASE("prefix panels reproduce partial integrals") {
    std::vector<QuadPanel<double>> panels;
    auto full = integrate_adaptive_collect<double>(
        [](double x) { return std::exp(x); }, 0.0, 2.0, panels);
    CHECK(full.value == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));
    double prefix = 0.0;
    for (const auto& p : panels) prefix += p.value;
    CHECK(prefix == doctest::Approx(full.value).epsilon(1e-14));
}

TEST_CASE("wynn epsilon accelerates a geometric tail") {
    std::vector<double> partial;
    double s = 0.0;
    for (int k = 0; k < 12; ++k) {
        s += std::pow(-0.7, k);
        partial.push_back(s);
    }
    auto e = wynn_epsilon(partial);
    CHECK(std::abs(e.value - 1.0 / 1.7) < 1e-10);
}
