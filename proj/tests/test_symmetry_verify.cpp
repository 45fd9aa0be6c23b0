#include "doctest.h"

#include "fermat/errors.hpp"
#include "fermat/symmetry_verify.hpp"

#include <set>

using namespace fermat;

namespace {

HomPoly var(const FieldPtr& K, int i) { return HomPoly::variable(K, i); }

LabeledLine find_line(const FieldPtr& K, char fam, char sub, int index) {
    for (const auto& l : family_lines(K, fam, sub))
        if (l.index == index) return l;
    throw std::logic_error("no such line");
}

std::vector<ProjPoint> special_points(const FermatCurve& C) {
    std::vector<ProjPoint> pts = C.inflection_points();
    for (const auto& s : C.sextactic_points()) pts.push_back(s.point);
    return pts;
}

} // namespace

TEST_CASE("group elements") {
    for (int d = 3; d <= 5; ++d) {
        CAPTURE(d);
        auto K = TowerField::get(d);
        auto G = group_elements(K);
        CHECK(G.size() == static_cast<std::size_t>(6 * d * d));
        std::set<Automorphism> set(G.begin(), G.end());
        CHECK(set.size() == G.size());
        HomPoly F = HomPoly::fermat(K, d);
        for (const auto& g : G) CHECK(proportional(g.pullback(F), F));
        if (d == 3) {
            for (const auto& g : G)
                for (const auto& h : G) CHECK(set.count(g * h) == 1);
        }
        for (const auto& g : G) CHECK(g * g.inverse() == Automorphism::identity(K));
        // Reflections: 3(d-1) diagonal ones and d for each transposition.
        int with_line = 0;
        for (const auto& g : G) with_line += fixed_line(g).has_value();
        CHECK(with_line == 6 * d - 3);
        CHECK(set.count(Automorphism::rho(K)) == 1);
        CHECK(set.count(Automorphism::psi(K) * Automorphism::rho(K) * Automorphism::psi(K)) == 1);
    }
}

TEST_CASE("fixed lines and orbits") {
    auto K = TowerField::get(4);
    auto rho = Automorphism::rho(K), phi = Automorphism::varphi(K), psi = Automorphism::psi(K);
    CHECK(proportional(*fixed_line(rho), var(K, 0)));
    CHECK(proportional(*fixed_line(phi), var(K, 0) - var(K, 1)));
    CHECK(proportional(*fixed_line(psi), var(K, 0) - var(K, 2)));
    CHECK_FALSE(fixed_line(rho * phi).has_value());
    auto g = psi * rho * psi;
    CHECK(g == Automorphism::scale(K, 2));
    CHECK(proportional(*fixed_line(g), var(K, 2)));

    FermatCurve C(4);
    auto s = C.sextactic_point(Cluster::z, 1, 3);
    auto orb = orbit(s.point, rho);
    CHECK(orb.size() == 4);
    std::set<ProjPoint> expected;
    for (int j = 0; j < 4; ++j) expected.insert(C.sextactic_point(Cluster::z, j, 3).point);
    CHECK(std::set<ProjPoint>(orb.begin(), orb.end()) == expected);
    ProjPoint infl(K->u_pow(1), K->one(), K->zero());
    auto orb2 = orbit(infl, rho);
    CHECK(orb2.size() == 4);
    for (const auto& p : orb2) CHECK(p[2].is_zero());
    ProjPoint fixed(K->zero(), K->one(), K->u());
    CHECK(orbit(fixed, rho).size() == 1);
    CHECK(verify_invariant_intersection(C, rho, fixed, 1));
    CHECK_THROWS_AS(verify_invariant_intersection(C, rho * phi, fixed, 1), NoFixedLine);
}

TEST_CASE("tangents at swapped inflection points meet on x = y") {
    for (int d = 3; d <= 6; ++d) {
        FermatCurve C(d);
        auto K = C.field();
        for (int k = 1; k < 2 * d; k += 2) {
            ProjPoint px(K->zero(), K->u_pow(k), K->one()), py(K->u_pow(k), K->zero(), K->one());
            CHECK(Automorphism::varphi(K).apply(px) == py);
            ProjPoint q(K->one(), K->one(), K->u_pow(-k));
            CHECK(C.tangent_line(px).evaluate(q).is_zero());
            CHECK(C.tangent_line(py).evaluate(q).is_zero());
            CHECK(verify_invariant_intersection(C, Automorphism::varphi(K), px, 1));
        }
    }
}

TEST_CASE("invariant intersections over all reflections") {
    for (int d = 3; d <= 4; ++d) {
        CAPTURE(d);
        FermatCurve C(d);
        auto K = C.field();
        OsculatingCache cache(C);
        auto infl = C.inflection_points();
        std::set<ProjPoint> inflections(infl.begin(), infl.end());
        for (const auto& g : group_elements(K)) {
            if (!fixed_line(g)) continue;
            for (const auto& p : special_points(C)) {
                CHECK(verify_invariant_intersection(C, g, p, 1, &cache));
                if (!inflections.count(p)) CHECK(verify_invariant_intersection(C, g, p, 2, &cache));
            }
        }
    }
    // Random points on a curve over another radicand.
    std::mt19937_64 rng(77);
    for (const auto& sample : random_curve_points(4, 3, rng)) {
        FermatCurve C(sample.field);
        for (auto g : {Automorphism::rho(sample.field), Automorphism::varphi(sample.field), Automorphism::psi(sample.field)}) {
            CHECK(verify_invariant_intersection(C, g, sample.point, 1));
            CHECK(verify_invariant_intersection(C, g, sample.point, 2));
        }
    }
}

TEST_CASE("tangent concurrency") {
    for (int d = 3; d <= 6; ++d) {
        CAPTURE(d);
        FermatCurve C(d);
        auto K = C.field();
        for (const auto& l : grid_lines(K)) {
            auto r = tangent_concurrency(C, l);
            CHECK(r.ok());
            CHECK(r.count == 1);
            CHECK(r.points.size() == static_cast<std::size_t>(d));
        }
        auto rb = tangent_concurrency(C, find_line(K, 'B', 'x', 0));
        CHECK(proportional(rb.grid_line, var(K, 1) - var(K, 2)));
        ProjPoint q(K->zero(), -K->one(), K->one());
        CHECK(rb.common_points[0] == q);
        CHECK(C.poly().evaluate(q).is_zero() == (d % 2 == 1));
        FieldElement t_dm1 = K->t().pow(d - 1);
        for (int k = 1; k < 2 * d; k += 2) {
            auto rm = tangent_concurrency(C, find_line(K, 'M', 'x', k));
            // Since u^(-kd) = -1 for odd k, the common point is (0 : +u^k 2^((d-1)/d) : 1).
            CHECK(rm.common_points[0] == ProjPoint(K->zero(), K->u_pow(k) * t_dm1, K->one()));
            CHECK(rm.common_points[0] != ProjPoint(K->zero(), -K->u_pow(k) * t_dm1, K->one()));
        }
        for (int j = 0; j < d; ++j) {
            auto rz = tangent_concurrency(C, find_line(K, 'B', 'z', j));
            CHECK(rz.common_points[0] == ProjPoint(K->zeta_pow(j), -K->one(), K->zero()));
        }
    }
    FermatCurve C(4);
    LabeledLine bogus{"T", 'x', 0, var(C.field(), 0) - var(C.field(), 1) * 3};
    CHECK_THROWS_AS(tangent_concurrency(C, bogus), FewerPoints);
}

TEST_CASE("conic common points") {
    for (int d = 3; d <= 6; ++d) {
        CAPTURE(d);
        FermatCurve C(d);
        auto K = C.field();
        for (const auto& l : grid_lines(K)) {
            auto r = conic_common_points(C, l);
            CHECK_MESSAGE(r.ok(), l.label());
            int expected = (d == 3 && l.family == "B") ? 1 : 2;
            CHECK(r.count == expected);
        }
        const long dd = d;
        // The displayed restriction to V(z) for the B_z line with index j.
        for (int j = 0; j < d; ++j) {
            auto s = C.sextactic_point(Cluster::z, j, 1);
            BinaryForm q = restrict_to_line(C.hyperosculating_conic(s), var(K, 2));
            BinaryForm displayed{2, {K->zeta_pow(-j) * (dd * (dd + 1)), K->rational(-2 * (dd - 2) * (5 * dd - 3)), K->zeta_pow(j) * (dd * (dd + 1))}};
            CHECK(proportional(q, displayed));
            CHECK(disc2(displayed) == K->rational(mpq_class(96 * (dd - 3) * (dd - 1) * (dd - 1) * (2 * dd - 1), 2)));
            if (d == 3) {
                auto r = conic_common_points(C, find_line(K, 'B', 'z', j));
                CHECK(r.common_points[0] == ProjPoint(K->one(), K->zeta_pow(-j), K->zero()));
            }
        }
        // The displayed restriction to V(x) for the M_x line with index k.
        for (int k = 1; k < 2 * d; k += 2) {
            auto pts = points_on_line(C, find_line(K, 'M', 'x', k).line);
            BinaryForm q = restrict_to_line(C.hyperosculating_conic(pts[0]), var(K, 0));
            FieldElement c = K->u_pow(-k) * K->t();
            BinaryForm displayed{2, {c * (dd * (dd + 1)), K->rational(8 * dd * (dd - 2)), c.inverse() * (-4 * (dd + 1) * (2 * dd - 3))}};
            CHECK(proportional(q, displayed));
            CHECK(disc2(displayed) == K->rational(48 * dd * (2 * dd - 1) * (dd - 1) * (dd - 1)));
        }
    }
}

TEST_CASE("degenerate pencil member") {
    for (int d = 3; d <= 6; ++d) {
        CAPTURE(d);
        FermatCurve C(d);
        for (int j = 0; j < d; ++j)
            for (int k2 = 3; k2 < 2 * d; k2 += 2) {
                auto cert = pencil_degenerate(C, j, 1, k2);
                CHECK(cert.rank == 2);
                CHECK_FALSE(cert.residual_disc.is_zero());
            }
    }
    FermatCurve C(4);
    auto cert = pencil_degenerate(C, 0, 1, 3);
    auto K = C.field();
    FieldElement expected = -(K->t().inverse() * 5 * 5) * (K->u_pow(1) + K->u_pow(3));
    CHECK(cert.ell.coeff({0, 0, 1}) == expected);
    CHECK_THROWS_AS(pencil_degenerate(C, 0, 1, 1), std::invalid_argument);
}
