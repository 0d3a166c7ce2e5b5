#include "doctest.h"

#include <algorithm>
#include <random>

#include "mollify/poly.hpp"
#include "oracles.hpp"

using namespace mollify;

namespace {

Polynomial rpoly(std::initializer_list<double> coeffs) {
    return Polynomial::from_real(std::vector<double>(coeffs));
}

std::vector<Cx> sorted_by_parts(std::vector<Cx> v) {
    std::sort(v.begin(), v.end(), [](Cx a, Cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("eval by direct substitution") {
    Polynomial p = rpoly({1.0, 0.0, 1.0});  // x^2 + 1
    CHECK(p(Cx(2.0)) == Cx(5.0));
    CHECK(Polynomial()(Cx(3.7, -1.2)) == Cx(0.0));
    CHECK(std::abs(p(Cx(0.0, 1.0))) < 1e-15);
}

TEST_CASE("arith basics") {
    Polynomial xp1 = rpoly({1.0, 1.0});
    Polynomial xm1 = rpoly({-1.0, 1.0});
    Polynomial prod = xp1 * xm1;
    CHECK(prod.degree() == 2);
    CHECK(prod.coeff(0) == Cx(-1.0));
    CHECK(prod.coeff(1) == Cx(0.0));
    CHECK(prod.coeff(2) == Cx(1.0));

    Polynomial p = rpoly({3.0, 0.0, 2.0});
    CHECK((p + Polynomial()).coeffs() == p.coeffs());
    CHECK((p - p).is_zero());
}

TEST_CASE("shift is p(x - a)") {
    Polynomial sq = rpoly({0.0, 0.0, 1.0});
    Polynomial shifted = sq.shifted(Cx(1.0));  // (x-1)^2
    CHECK(shifted.coeff(0) == Cx(1.0));
    CHECK(shifted.coeff(1) == Cx(-2.0));
    CHECK(shifted.coeff(2) == Cx(1.0));

    Polynomial p = rpoly({2.0, -1.0, 0.5, 3.0});
    CHECK(p.shifted(Cx(0.0)).coeffs() == p.coeffs());

    // Evaluation oracle at random points for a complex shift.
    Polynomial cube = rpoly({0.0, 0.0, 0.0, 1.0});
    Cx a(0.0, 1.0);
    Polynomial q = cube.shifted(a);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        Cx z(u(rng), u(rng));
        worst = std::max(worst, std::abs(q(z) - cube(z - a)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("roots of x^2 + 1") {
    auto roots = sorted_by_parts(find_roots(rpoly({1.0, 0.0, 1.0})));
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - Cx(0.0, -1.0)) < 1e-10);
    CHECK(std::abs(roots[1] - Cx(0.0, 1.0)) < 1e-10);
}

TEST_CASE("double root is clustered") {
    Polynomial p = rpoly({1.0, -2.0, 1.0});  // (x-1)^2
    auto clusters = clustered_roots(p);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].multiplicity == 2);
    CHECK(std::abs(clusters[0].root - Cx(1.0)) < 1e-5);
}

TEST_CASE("planted degree-6 roots are recovered") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<Cx> planted;
    while (planted.size() < 6) {
        Cx cand(u(rng), u(rng));
        bool ok = true;
        for (Cx r : planted) {
            if (std::abs(cand - r) < 0.35) ok = false;
        }
        if (ok) planted.push_back(cand);
    }
    Polynomial p{oracles::expand_from_roots(Cx(1.0), planted)};
    auto found = sorted_by_parts(find_roots(p));
    auto want = sorted_by_parts(planted);
    REQUIRE(found.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) {
        CHECK(std::abs(found[i] - want[i]) < 1e-8);
    }
}

TEST_CASE("eval distributes over products") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::uniform_int_distribution<int> deg(0, 8);
        auto rand_poly = [&]() {
            std::vector<Cx> c(static_cast<size_t>(deg(rng)) + 1);
            for (Cx& v : c) v = Cx(u(rng), u(rng));
            return Polynomial(std::move(c));
        };
        Polynomial a = rand_poly();
        Polynomial b = rand_poly();
        Cx z(u(rng), u(rng));
        Cx lhs = (a * b)(z);
        Cx rhs = a(z) * b(z);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("shift evaluation identity") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Cx> c(5);
        for (Cx& v : c) v = Cx(u(rng), u(rng));
        Polynomial p(std::move(c));
        Cx a(u(rng), u(rng));
        Cx z(u(rng), u(rng));
        CHECK(std::abs(p.shifted(a)(z) - p(z - a)) <= 1e-10 * (1.0 + std::abs(p(z - a))));
    }
}

TEST_CASE("roots round-trip through expansion") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Cx> roots;
        while (roots.size() < 5) {
            Cx cand(u(rng), u(rng));
            bool ok = true;
            for (Cx r : roots) {
                if (std::abs(cand - r) < 0.3) ok = false;
            }
            if (ok) roots.push_back(cand);
        }
        Polynomial p{oracles::expand_from_roots(Cx(1.0), roots)};
        std::vector<Cx> found = find_roots(p);
        Polynomial back = Polynomial::from_roots(p.leading(), found);
        for (int k = 0; k <= p.degree(); ++k) {
            CHECK(std::abs(back.coeff(k) - p.coeff(k)) <= 1e-6 * (1.0 + std::abs(p.coeff(k))));
        }
    }
}

TEST_CASE("non-finite coefficients are rejected") {
    std::vector<Cx> bad{Cx(1.0), Cx(std::numeric_limits<double>::quiet_NaN())};
    CHECK_THROWS_AS(Polynomial(std::move(bad)), std::invalid_argument);
}

TEST_CASE("canonical zero has empty coefficients") {
    Polynomial z(std::vector<Cx>{Cx(0.0), Cx(0.0)});
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
}

}  // TEST_SUITE
