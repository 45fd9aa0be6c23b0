#include "doctest.h"

#include "fermat/errors.hpp"
#include "fermat/tower_field.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace fermat;

namespace {

// Independent floating evaluation of an element from its printed terms.
std::complex<double> float_value(const FieldElement& a) {
    const auto& f = *a.field();
    const double pi = std::acos(-1.0);
    std::complex<double> acc = 0;
    for (int j = 0; j < f.t_degree(); ++j)
        for (int i = 0; i < f.cyclotomic_degree(); ++i) {
            double c = a.coeff(i, j).get_d();
            if (c == 0) continue;
            acc += c * std::polar(1.0, pi * i / f.degree()) *
                   std::pow(static_cast<double>(f.radicand()), static_cast<double>(j) / f.degree());
        }
    return acc;
}

bool near(const ComplexBall& b, double re, double im) {
    return std::abs(b.real() - re) < 1e-14 * (1 + std::abs(re)) &&
           std::abs(b.imag() - im) < 1e-14 * (1 + std::abs(im)) && b.radius() < 1e-15;
}

} // namespace

TEST_CASE("constants satisfy their defining relations") {
    auto f5 = TowerField::get(5);
    CHECK(f5->u().pow(5) == f5->rational(-1));
    CHECK(f5->zeta().pow(5) == f5->one());
    CHECK_FALSE(f5->zeta() == f5->one());
    CHECK(f5->zeta() == f5->u() * f5->u());

    auto f4 = TowerField::get(4);
    CHECK(f4->t().pow(4) == f4->rational(2));
    CHECK(f4->t_degree() == 2);
    CHECK(f4->dimension() == 8);

    CHECK_THROWS_AS(TowerField::get(2), std::invalid_argument);
    CHECK_THROWS_AS(TowerField::get(65), std::invalid_argument);
}

TEST_CASE("arith examples") {
    auto f6 = TowerField::get(6);
    CHECK((f6->u() * f6->u().pow(11)).is_one());

    auto f3 = TowerField::get(3);
    CHECK(f3->t() * f3->t().pow(2) == f3->rational(2));

    auto f4 = TowerField::get(4);
    FieldElement s = f4->u() - f4->u().pow(3);
    CHECK(s * s == f4->rational(2));
    auto ball = s.embed(128);
    CHECK(near(ball, std::sqrt(2.0), 0.0));
    CHECK(std::abs(float_value(s) - std::sqrt(2.0)) < 1e-12);

    CHECK_THROWS_AS(f3->u() + f4->u(), DegreeMismatch);
}

TEST_CASE("invert examples") {
    for (int d : {3, 4, 5, 6, 7, 8}) {
        auto f = TowerField::get(d);
        CHECK(f->t().inverse() == f->t().pow(d - 1) * mpq_class(1, 2));
        CHECK(f->u().inverse() == -f->u().pow(d - 1));
    }
    auto f3 = TowerField::get(3);
    FieldElement a = f3->one() + f3->u();
    CHECK((a * a.inverse()).is_one());
    CHECK_THROWS_AS(f3->zero().inverse(), ZeroInput);
}

TEST_CASE("is_zero examples") {
    for (int d : {3, 4, 5, 6, 7, 8}) {
        auto f = TowerField::get(d);
        const auto& cyclo = f->cyclotomic_poly();
        FieldElement acc = f->zero();
        FieldElement power = f->one();
        for (long c : cyclo) {
            acc += power * c;
            power *= f->u();
        }
        CHECK(acc.is_zero());
        CHECK_FALSE((f->u() + f->t()).is_zero());
    }
    auto f4 = TowerField::get(4);
    CHECK((f4->t().pow(2) - (f4->u() - f4->u().pow(3))).is_zero());
    CHECK(near(f4->t().pow(2).embed(128), std::sqrt(2.0), 0.0));
}

TEST_CASE("embedding examples") {
    auto f4 = TowerField::get(4);
    auto b = f4->u().embed(128);
    CHECK(near(b, std::cos(M_PI / 4), std::sin(M_PI / 4)));
    CHECK(b.radius() < 1e-30);

    auto f3 = TowerField::get(3);
    CHECK(near(f3->t().embed(64), std::cbrt(2.0), 0.0));
    CHECK(std::abs(f3->t().embed(64).real() - 1.2599210498948732) < 1e-15);

    auto f5 = TowerField::get(5);
    FieldElement w = f5->u_pow(-1) * f5->t();
    auto wb = w.embed(128);
    double modulus = std::hypot(wb.real(), wb.imag());
    CHECK(std::abs(modulus - std::pow(2.0, 0.2)) < 1e-14);
    CHECK(wb.certainly_nonzero());

    CHECK_THROWS_AS(f5->u().embed(32), std::invalid_argument);
}

TEST_CASE("ring axioms on random elements") {
    for (int d : {3, 4, 5, 6, 7, 8}) {
        CAPTURE(d);
        auto f = TowerField::get(d);
        std::mt19937_64 rng(1000 + d);
        for (int trial = 0; trial < 1000; ++trial) {
            FieldElement a = random_element(f, rng, 9, 0.3);
            FieldElement b = random_element(f, rng, 9, 0.3);
            FieldElement c = random_element(f, rng, 9, 0.3);
            REQUIRE((a + b) + c == a + (b + c));
            REQUIRE(a * (b + c) == a * b + a * c);
            if (trial % 10 == 0) {
                REQUIRE((a * b) * c == a * (b * c));
                REQUIRE(a * b == b * a);
            }
        }
    }
}

TEST_CASE("inverse property on random elements") {
    for (int d : {3, 4, 5, 6, 7, 8}) {
        CAPTURE(d);
        auto f = TowerField::get(d);
        std::mt19937_64 rng(2000 + d);
        int checked = 0;
        while (checked < 200) {
            FieldElement a = random_element(f, rng, 7, checked % 2 ? 0.2 : 0.7);
            if (a.is_zero()) continue;
            REQUIRE((a.inverse() * a).is_one());
            ++checked;
        }
    }
}

TEST_CASE("embedding is a ring homomorphism") {
    for (int d : {3, 4, 5, 6, 7, 8}) {
        CAPTURE(d);
        auto f = TowerField::get(d);
        std::mt19937_64 rng(3000 + d);
        for (int trial = 0; trial < 200; ++trial) {
            FieldElement a = random_element(f, rng, 9, 0.4);
            FieldElement b = random_element(f, rng, 9, 0.4);
            REQUIRE((a * b).embed(128).overlaps(a.embed(128) * b.embed(128)));
            REQUIRE((a + b).embed(128).overlaps(a.embed(128) + b.embed(128)));
            auto ab = float_value(a * b);
            auto fa = float_value(a), fb = float_value(b);
            REQUIRE(std::abs(ab - fa * fb) < 1e-8 * (1 + std::abs(ab)));
        }
    }
}

TEST_CASE("exact zeros embed into balls around zero at 256 bits") {
    for (int d : {3, 4, 5, 6, 7, 8}) {
        auto f = TowerField::get(d);
        std::mt19937_64 rng(4000 + d);
        for (int trial = 0; trial < 30; ++trial) {
            FieldElement a = random_element(f, rng, 9, 0.5);
            FieldElement b = random_element(f, rng, 9, 0.5);
            FieldElement z = a * b - b * a;
            REQUIRE(z.is_zero());
            // Evaluate the unreduced expression in balls: products of balls.
            auto ball = a.embed(256) * b.embed(256) - (a * b).embed(256);
            REQUIRE(ball.contains_zero());
            if (!a.is_zero()) REQUIRE(a.embed(256).certainly_nonzero());
        }
    }
}

TEST_CASE("json serialization") {
    auto f5 = TowerField::get(5);
    FieldElement a = f5->u() * mpq_class(3, 4) - f5->t().pow(3) * 2;
    auto j = a.to_json();
    CHECK(j["d"] == 5);
    CHECK_FALSE(j.contains("radicand"));
    CHECK(j["terms"].size() == 2);
    CHECK(j["terms"][0][2] == "3/4");
    CHECK(FieldElement::from_json(j) == a);

    std::mt19937_64 rng(77);
    for (int d : {3, 4, 6, 8}) {
        auto f = TowerField::get(d);
        for (int k = 0; k < 20; ++k) {
            FieldElement r = random_element(f, rng);
            REQUIRE(FieldElement::from_json(r.to_json()) == r);
        }
    }
}

TEST_CASE("general radicands") {
    auto f = TowerField::get(5, 3 * 7);
    CHECK(f->t().pow(5) == f->rational(21));
    CHECK(near(f->t().embed(128), std::pow(21.0, 0.2), 0.0));
    auto g = TowerField::get(4, 17);
    CHECK(g->t_degree() == 4);
    CHECK(FieldElement::from_json(g->t().to_json()) == g->t());
    // 9 = 3^2 and 5 | 2d for d = 5: no admissible prime
    CHECK_THROWS_AS(TowerField::get(5, 9), std::invalid_argument);
    CHECK_THROWS_AS(TowerField::get(5, 10), std::invalid_argument);
}

TEST_CASE("sanity guard exposes a reducible t-relation") {
    // For 4 | d, t^d - 2 factors over the cyclotomic field.
    auto naive = TowerField::make_naive(4, 2);
    CHECK_THROWS_AS(naive->sanity_guard(), ZeroDivisor);
    FieldElement sqrt2 = naive->u() - naive->u().pow(3);
    FieldElement factor = naive->t().pow(2) - sqrt2;
    try {
        (void)factor.inverse();
        FAIL("expected ZeroDivisor");
    } catch (const ZeroDivisor& e) {
        CHECK_FALSE(e.factor().empty());
    }
    CHECK_NOTHROW(TowerField::get(4)->sanity_guard());
}

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(6) == std::vector<long>{1, -1, 1});
    CHECK(cyclotomic_polynomial(8) == std::vector<long>{1, 0, 0, 0, 1});
    CHECK(cyclotomic_polynomial(12) == std::vector<long>{1, 0, -1, 0, 1});
    CHECK(euler_phi(14) == 6);
    CHECK(euler_phi(16) == 8);
}
