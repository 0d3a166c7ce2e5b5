#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mollify/kernels.hpp"
#include "oracles.hpp"

using namespace mollify;

namespace {

constexpr double kPi = std::numbers::pi;

double audit_integral_1d(const Kernel& k, double t, double window) {
    ScaledKernel kt(k, t);
    return oracles::integrate([&](double x) { return kt.value1(x); }, -window, 0.0, 1e-10) +
           oracles::integrate([&](double x) { return kt.value1(x); }, 0.0, window, 1e-10);
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("poisson normalization hits 1/pi") {
    const Kernel& k = kernel_by_name("poisson");
    CHECK(k.norm_factor() == doctest::Approx(1.0 / kPi).epsilon(1e-8));
    CHECK(k.value1(0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-8));
    CHECK(k.parity_even());
    CHECK(k.decay_c() == doctest::Approx(2.0 / kPi));
}

TEST_CASE("gaussian normalization hits 1/sqrt(pi)") {
    const Kernel& k = kernel_by_name("gauss");
    CHECK(k.norm_factor() == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-8));
    CHECK(k.parity_even());
}

TEST_CASE("bump normalization matches a refined quadrature oracle") {
    const Kernel& k = kernel_by_name("bump");
    double raw = oracles::richardson_trapezoid(
        [](double x) {
            double w = 1.0 - x * x;
            return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
        },
        -1.0, 1.0, 1e-13);
    CHECK(k.norm_factor() == doctest::Approx(1.0 / raw).epsilon(1e-7));
    CHECK(k.support_radius() == doctest::Approx(1.0));
}

TEST_CASE("normalize rejects a zero integral") {
    RawKernel raw;
    raw.dim = 1;
    raw.support_radius = 1.0;
    raw.eval = [](const Point& x) { return x[0]; };  // odd, integral 0
    CHECK_THROWS_AS(normalize(raw), ZeroIntegral);
}

TEST_CASE("normalize rejects a non-integrable evaluator") {
    RawKernel raw;
    raw.dim = 1;
    raw.eval = [](const Point& x) { return 1.0 / (1.0 + std::abs(x[0])); };  // log-divergent
    CHECK_THROWS_AS(normalize(raw), NonIntegrable);
}

TEST_CASE("scaling identities") {
    const Kernel& poisson = kernel_by_name("poisson");
    ScaledKernel unit(poisson, 1.0);
    for (double x : {-2.0, 0.0, 0.7}) {
        CHECK(unit.value1(x) == doctest::Approx(poisson.value1(x)).epsilon(1e-14));
    }

    for (double t : {0.4, 2.5}) {
        ScaledKernel kt(poisson, t);
        for (double x : {-1.0, 0.0, 0.3, 2.0}) {
            CHECK(kt.value1(x) == doctest::Approx(t / (kPi * (t * t + x * x))).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(ScaledKernel(poisson, 0.0), NonPositiveScale);
}

TEST_CASE("scaled kernels keep unit integral") {
    for (const char* name : {"poisson", "gauss", "bump"}) {
        const Kernel& k = kernel_by_name(name);
        for (double t : {0.1, 1.0, 10.0}) {
            double window = std::isfinite(k.support_radius()) ? t * k.support_radius()
                                                              : std::max(4e6 * t, 4e6);
            CHECK(audit_integral_1d(k, t, window) == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("eq-style scaling consistency on an audit grid") {
    for (const char* name : {"poisson", "poisson2", "gauss", "bump"}) {
        const Kernel& k = kernel_by_name(name);
        for (double t : {0.05, 0.5, 2.0}) {
            ScaledKernel kt(k, t);
            for (int i = 0; i <= 64; ++i) {
                double x = -3.0 + 6.0 * i / 64.0;
                double expect = k.value1(x / t) / t;
                CHECK(std::abs(kt.value1(x) - expect) <= 1e-12 * (1.0 + std::abs(expect)));
            }
        }
    }
}

TEST_CASE("decay bound holds on an audit grid") {
    for (const char* name : {"poisson", "poisson2", "gauss", "bump"}) {
        const Kernel& k = kernel_by_name(name);
        for (int i = 0; i < 1000; ++i) {
            double x = -50.0 + 100.0 * i / 999.0;
            CHECK(std::abs(k.value1(x)) <= k.decay_c() / (1.0 + std::abs(x) * std::abs(x)) + 1e-300);
        }
    }
}

TEST_CASE("parity audit") {
    for (const char* name : {"poisson", "poisson2", "gauss", "bump"}) {
        const Kernel& k = kernel_by_name(name);
        REQUIRE(k.parity_even());
        for (int i = 1; i <= 200; ++i) {
            double x = 4.0 * i / 200.0;
            CHECK(std::abs(k.value1(x) - k.value1(-x)) <= 1e-12 * (1.0 + std::abs(k.value1(x))));
        }
    }
}

TEST_CASE("ball mass of the poisson kernel is arctan") {
    const Kernel& k = kernel_by_name("poisson");
    for (double t : {1.0, 0.1, 0.01}) {
        double want = (2.0 / kPi) * std::atan(1.0 / t);
        CHECK(ball_mass(k, t, 1.0) == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("ball mass concentrates as t shrinks") {
    const Kernel& g = kernel_by_name("gauss");
    double prev = 0.0;
    for (double t : {1.0, 0.1, 0.01}) {
        double mass = ball_mass(g, t, 1.0);
        // Gaussian mass saturates to 1.0 exactly in double precision past
        // t = 0.1, so the last comparison cannot be strict.
        CHECK(mass >= prev);
        if (prev < 0.999) CHECK(mass > prev);
        prev = mass;
    }
    CHECK(prev >= 0.99);

    const Kernel& p = kernel_by_name("poisson");
    CHECK(ball_mass(p, 1.0, 0.001) <= 0.01);
}

TEST_CASE("concentration across the catalog") {
    for (const char* name : {"poisson", "poisson2", "gauss", "bump"}) {
        const Kernel& k = kernel_by_name(name);
        CHECK(ball_mass(k, 0.01, 1.0) >= 0.95);
    }
    // Bump mass is exactly 1 once the scaled support fits in the ball.
    const Kernel& b = kernel_by_name("bump");
    CHECK(ball_mass(b, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tensor kernel basics") {
    Kernel g2 = make_tensor({make_gaussian(1), make_gaussian(1)});
    CHECK(g2.dim() == 2);
    double want0 = 1.0 / kPi;  // (1/sqrt(pi))^2
    CHECK(g2.value(point2(0.0, 0.0)) == doctest::Approx(want0).epsilon(1e-12));

    Kernel one = make_tensor({make_gaussian(1)});
    const Kernel& g1 = kernel_by_name("gauss");
    for (double x : {-1.0, 0.2, 2.0}) {
        CHECK(one.value1(x) == doctest::Approx(g1.value1(x)).epsilon(1e-14));
    }

    // 2-d integral via an iterated oracle: factors are independent.
    auto one_d = [&](double x) { return make_gaussian(1).value1(x); };
    double along = oracles::integrate(one_d, -8.0, 8.0, 1e-10);
    CHECK(along * along == doctest::Approx(1.0).epsilon(1e-7));

    CHECK_THROWS_AS(make_tensor({make_gaussian(1), make_gaussian(1), make_gaussian(1),
                                 make_gaussian(1)}),
                    DimensionLimit);
}

TEST_CASE("tensor support radius is the box circumradius") {
    Kernel b2 = make_tensor({make_bump(1.0), make_bump(2.0)});
    CHECK(b2.support_radius() == doctest::Approx(std::sqrt(5.0)));
    CHECK(b2.value(point2(1.5, 0.0)) == 0.0);
}

TEST_CASE("radial kernel in 2-d") {
    Kernel k = make_radial([](double s) { return std::exp(-s * s); }, 2, 1.0);
    CHECK(k.value(point2(0.0, 0.0)) == doctest::Approx(1.0 / kPi).epsilon(1e-8));
    CHECK(k.parity_even());

    double base = k.value(point2(0.7, 0.0));
    for (int i = 0; i < 64; ++i) {
        double ang = 2.0 * kPi * i / 64.0;
        double v = k.value(point2(0.7 * std::cos(ang), 0.7 * std::sin(ang)));
        CHECK(std::abs(v - base) <= 1e-12 * (1.0 + std::abs(base)));
    }
}

TEST_CASE("radial n=1 coincides with the even normalize") {
    Kernel radial = make_radial([](double s) { return 1.0 / (1.0 + s * s * s * s); }, 1,
                                /*decay_c=*/2.0);
    RawKernel raw;
    raw.dim = 1;
    raw.decay_c = 2.0;
    raw.eval = [](const Point& x) {
        double s = std::abs(x[0]);
        return 1.0 / (1.0 + s * s * s * s);
    };
    raw.parity_even = true;
    Kernel direct = normalize(raw);
    for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
        CHECK(radial.value1(x) == doctest::Approx(direct.value1(x)).epsilon(1e-9));
    }
}

TEST_CASE("catalog lookup") {
    CHECK_THROWS_AS(kernel_by_name("nope"), std::invalid_argument);
    CHECK(kernel_by_name("poisson2").value1(0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-8));
}

}  // TEST_SUITE
