#include <doctest.h>

#include <cmath>

#include "oulevy/rng.hpp"

using namespace oulevy;

TEST_CASE("streams are deterministic and independent of construction order") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    RngStream c(42, 8);
    CHECK(RngStream(42, 7).next_u64() != c.next_u64());
}

TEST_CASE("uniform moments") {
    RngStream rng(1, 0);
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(std::abs(s / n - 0.5) < 0.005);
    CHECK(std::abs(s2 / n - 1.0 / 3.0) < 0.005);
}

TEST_CASE("normal moments") {
    RngStream rng(2, 0);
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
    CHECK(std::abs(s4 / n - 3.0) < 0.1);
}

TEST_CASE("poisson mean and variance across regimes") {
    for (double mean : {0.3, 4.0, 80.0}) {
        RngStream rng(3, static_cast<std::uint64_t>(mean * 10));
        double s = 0.0, s2 = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            s += k;
            s2 += k * k;
        }
        const double m = s / n;
        const double var = s2 / n - m * m;
        CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / n) + 0.01);
        CHECK(std::abs(var - mean) < 0.05 * mean + 0.05);
    }
}

TEST_CASE("sphere samples live on the sphere and average to zero") {
    RngStream rng(4, 0);
    for (int d : {1, 2, 3}) {
        Vec mean = Vec::Zero(d);
        const int n = 50000;
        for (int i = 0; i < n; ++i) {
            const Vec v = rng.uniform_on_sphere(d);
            CHECK(std::abs(v.norm() - 1.0) < 1e-12);
            mean += v;
        }
        CHECK((mean / n).norm() < 0.02);
    }
}
