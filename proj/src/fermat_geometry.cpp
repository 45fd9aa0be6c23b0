#include "fermat/fermat_geometry.hpp"

#include "fermat/errors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fermat {

namespace {

HomPoly var(const FieldPtr& K, int i) { return HomPoly::variable(K, i); }

// Cluster y and x points are cyclic coordinate shifts of cluster z points;
// conics follow with the matching variable permutation.
std::array<int, 3> cluster_perm(Cluster c) {
    switch (c) {
    case Cluster::z: return {0, 1, 2};
    case Cluster::y: return {1, 2, 0};
    case Cluster::x: return {2, 0, 1};
    }
    return {0, 1, 2};
}

std::string monomial_name(const Exponent& e) {
    static const char* names[3] = {"x", "y", "z"};
    std::string s;
    for (int i = 0; i < 3; ++i) {
        if (e[static_cast<std::size_t>(i)] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[i];
        if (e[static_cast<std::size_t>(i)] > 1) s += "^" + std::to_string(e[static_cast<std::size_t>(i)]);
    }
    return s.empty() ? "1" : s;
}

} // namespace

std::string cluster_name(Cluster c) {
    switch (c) {
    case Cluster::z: return "z";
    case Cluster::y: return "y";
    case Cluster::x: return "x";
    }
    return "?";
}

Cluster cluster_from_name(const std::string& s) {
    if (s == "z") return Cluster::z;
    if (s == "y") return Cluster::y;
    if (s == "x") return Cluster::x;
    throw std::invalid_argument("unknown cluster '" + s + "'");
}

FermatCurve::FermatCurve(FieldPtr field)
    : field_(std::move(field)), d_(field_->degree()), poly_(HomPoly::fermat(field_, d_)), hessian_(fermat::hessian(poly_)) {}

bool FermatCurve::contains(const ProjPoint& p) const { return poly_.evaluate(p).is_zero(); }

HomPoly FermatCurve::tangent_line(const ProjPoint& p) const {
    if (!contains(p)) throw NotOnCurve("tangent requested off the curve at " + p.to_string());
    return HomPoly::linear(p[0].pow(d_ - 1), p[1].pow(d_ - 1), p[2].pow(d_ - 1));
}

std::vector<ProjPoint> FermatCurve::inflection_points() const {
    const FieldPtr& K = field_;
    std::vector<ProjPoint> out;
    for (int k = 1; k < 2 * d_; k += 2) out.emplace_back(K->zero(), K->one(), K->u_pow(k));
    for (int k = 1; k < 2 * d_; k += 2) out.emplace_back(K->u_pow(k), K->zero(), K->one());
    for (int k = 1; k < 2 * d_; k += 2) out.emplace_back(K->one(), K->u_pow(k), K->zero());
    return out;
}

HomPoly FermatCurve::two_hessian() const {
    const FieldPtr& K = field_;
    std::array<std::array<HomPoly, 3>, 3> m{{{HomPoly(K, 0), HomPoly(K, 0), HomPoly(K, 0)},
                                             {HomPoly(K, 0), HomPoly(K, 0), HomPoly(K, 0)},
                                             {HomPoly(K, 0), HomPoly(K, 0), HomPoly(K, 0)}}};
    const int powers[3] = {5 * d_ - 9, 4 * d_ - 9, 3 * d_ - 9};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            Exponent e{0, 0, 0};
            e[static_cast<std::size_t>(r)] = powers[c];
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = HomPoly::monomial(K->one(), e);
        }
    return det3(m);
}

HomPoly FermatCurve::two_hessian_factored() const {
    const FieldPtr& K = field_;
    auto pw = [&](int i) { return var(K, i).pow(d_); };
    HomPoly xyz = (var(K, 0) * var(K, 1) * var(K, 2)).pow(3 * d_ - 9);
    return xyz * (pw(0) - pw(1)) * (pw(1) - pw(2)) * (pw(2) - pw(0));
}

SextacticPoint FermatCurve::sextactic_point(Cluster c, int j, int k) const {
    if (field_->radicand() != 2) throw std::logic_error("sextactic points need the radicand-2 field");
    if (k <= 0 || k >= 2 * d_ || k % 2 == 0) throw std::invalid_argument("sextactic index k must be odd in (0, 2d)");
    j = ((j % d_) + d_) % d_;
    const FieldPtr& K = field_;
    std::array<FieldElement, 3> base{K->zeta_pow(j), K->one(), K->u_pow(-k) * K->t()};
    auto perm = cluster_perm(c);
    // Coordinate i of the shifted point is base[perm[i]].
    std::array<FieldElement, 3> q{base[static_cast<std::size_t>(perm[0])], base[static_cast<std::size_t>(perm[1])],
                                  base[static_cast<std::size_t>(perm[2])]};
    return {c, j, k, ProjPoint(q)};
}

std::vector<SextacticPoint> FermatCurve::sextactic_points() const {
    std::vector<SextacticPoint> out;
    for (Cluster c : {Cluster::z, Cluster::y, Cluster::x})
        for (int j = 0; j < d_; ++j)
            for (int k = 1; k < 2 * d_; k += 2) out.push_back(sextactic_point(c, j, k));
    return out;
}

long FermatCurve::sextactic_count_formula() const {
    const long d = d_, g = genus();
    return 6 * (2 * d + 5 * g - 5) - 3 * d * (4 + 4 * d - 15);
}

HomPoly FermatCurve::omega() const {
    const FieldPtr& K = field_;
    std::array<HomPoly, 3> Fi{poly_.partial(0), poly_.partial(1), poly_.partial(2)};
    std::array<std::array<HomPoly, 3>, 3> M{{{Fi[0].partial(0), Fi[0].partial(1), Fi[0].partial(2)},
                                             {Fi[1].partial(0), Fi[1].partial(1), Fi[1].partial(2)},
                                             {Fi[2].partial(0), Fi[2].partial(1), Fi[2].partial(2)}}};
    HomPoly acc(K, 0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            HomPoly cof = M[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c0)] * M[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c1)] -
                          M[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c1)] * M[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c0)];
            acc += cof * hessian_.partial(i).partial(j);
        }
    return acc;
}

HomPoly FermatCurve::psi() const {
    const FieldPtr& K = field_;
    std::array<HomPoly, 3> Fi{poly_.partial(0), poly_.partial(1), poly_.partial(2)};
    std::array<std::array<HomPoly, 3>, 3> M{{{Fi[0].partial(0), Fi[0].partial(1), Fi[0].partial(2)},
                                             {Fi[1].partial(0), Fi[1].partial(1), Fi[1].partial(2)},
                                             {Fi[2].partial(0), Fi[2].partial(1), Fi[2].partial(2)}}};
    std::array<HomPoly, 3> Hi{hessian_.partial(0), hessian_.partial(1), hessian_.partial(2)};
    HomPoly acc(K, 0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            HomPoly cof = M[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c0)] * M[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c1)] -
                          M[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c1)] * M[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c0)];
            acc += cof * Hi[static_cast<std::size_t>(i)] * Hi[static_cast<std::size_t>(j)];
        }
    return acc;
}

void FermatCurve::require_osculating(const ProjPoint& p) const {
    if (!contains(p)) throw NotOnCurve("osculating conic requested off the curve at " + p.to_string());
    if (hessian_.evaluate(p).is_zero()) throw HessianVanishes("H(p) = 0 at " + p.to_string());
}

HomPoly FermatCurve::osculating_conic_cayley(const ProjPoint& p) const {
    require_osculating(p);
    const FieldPtr& K = field_;
    FieldElement h = hessian_.evaluate(p);
    FieldElement h2 = h * h, h3 = h2 * h;
    HomPoly DF(K, 1), DH(K, 1), D2F(K, 2);
    for (int i = 0; i < 3; ++i) {
        DF += var(K, i) * poly_.partial(i).evaluate(p);
        DH += var(K, i) * hessian_.partial(i).evaluate(p);
        for (int j = 0; j < 3; ++j) D2F += var(K, i) * var(K, j) * poly_.partial(i).partial(j).evaluate(p);
    }
    // 9 H^3 Lambda = -3 Omega H + 4 Psi
    FieldElement lambda9 = omega().evaluate(p) * h * -3L + psi().evaluate(p) * 4L;
    return D2F * (h3 * 9L) - (DH * (h2 * 6L) + DF * lambda9) * DF;
}

HomPoly FermatCurve::osculating_conic_closed(const ProjPoint& p) const {
    require_osculating(p);
    const FieldPtr& K = field_;
    const long d = d_;
    std::array<FieldElement, 3> pd{p[0].pow(d), p[1].pow(d), p[2].pow(d)};
    HomPoly out(K, 2);
    // Squares: p_i^(2d-2) (d+1) ((2d-1) p_j^d p_k^d + (2-d)(p_j^d + p_k^d) p_i^d)
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        if (j > k) std::swap(j, k);
        FieldElement c = p[i].pow(2 * d - 2) * (d + 1) *
                         (pd[static_cast<std::size_t>(j)] * pd[static_cast<std::size_t>(k)] * (2 * d - 1) +
                          (pd[static_cast<std::size_t>(j)] + pd[static_cast<std::size_t>(k)]) * pd[static_cast<std::size_t>(i)] * (2 - d));
        Exponent e{0, 0, 0};
        e[static_cast<std::size_t>(i)] = 2;
        out.add_term(e, c);
    }
    // Mixed: -(2(d+1)(d-2) p_i^(2d-1) p_j^(2d-1) + 4(2d-1)(d-2)(p_i^(d-1) p_j^(2d-1) + p_i^(2d-1) p_j^(d-1)) p_k^d)
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        int k = 3 - i - j;
        FieldElement c = p[i].pow(2 * d - 1) * p[j].pow(2 * d - 1) * (2 * (d + 1) * (d - 2)) +
                         (p[i].pow(d - 1) * p[j].pow(2 * d - 1) + p[i].pow(2 * d - 1) * p[j].pow(d - 1)) *
                             pd[static_cast<std::size_t>(k)] * (4 * (2 * d - 1) * (d - 2));
        Exponent e{0, 0, 0};
        e[static_cast<std::size_t>(i)] = 1;
        e[static_cast<std::size_t>(j)] = 1;
        out.add_term(e, -c);
    }
    return out;
}

HomPoly FermatCurve::hyperosculating_conic(const SextacticPoint& s) const {
    const FieldPtr& K = field_;
    if (K->radicand() != 2) throw std::logic_error("hyperosculating conics need the radicand-2 field");
    const long d = d_;
    const int j = s.j, k = s.k;
    HomPoly x = var(K, 0), y = var(K, 1), z = var(K, 2);
    FieldElement zi = K->zeta_pow(-j);
    FieldElement uk = K->u_pow(k);
    FieldElement tinv = K->t().inverse();
    HomPoly o = x * x * (zi * zi * (d * (d + 1))) + y * y * (d * (d + 1)) -
                z * z * (uk * uk * tinv * tinv * (4 * (d + 1) * (2 * d - 3))) -
                x * y * (zi * (2 * (d - 2) * (5 * d - 3))) + x * z * (zi * uk * tinv * (8 * d * (d - 2))) +
                y * z * (uk * tinv * (8 * d * (d - 2)));
    auto perm = cluster_perm(s.cluster);
    if (s.cluster == Cluster::z) return o;
    // q[i] = p[perm[i]], so C_q(X) = C_p(X[inv[0]], X[inv[1]], X[inv[2]]).
    std::array<int, 3> inv{};
    for (int i = 0; i < 3; ++i) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
    return o.permute(inv);
}

int two_hessian_sign(const FermatCurve& C) {
    HomPoly det = C.two_hessian(), fac = C.two_hessian_factored();
    if (det == fac) return 1;
    if (det == -fac) return -1;
    return 0;
}

std::vector<CurvePointSample> random_curve_points(int d, int count, std::mt19937_64& rng) {
    std::vector<CurvePointSample> out;
    std::uniform_int_distribution<int> pick(1, 6);
    std::set<std::pair<long, long>> rejected;
    static const std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > 100000) throw std::runtime_error("no admissible radicand found");
        long a = pick(rng), b = pick(rng);
        if (rejected.count({a, b})) continue;
        mpz_class ad, bd;
        mpz_ui_pow_ui(ad.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(d));
        mpz_ui_pow_ui(bd.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(d));
        mpz_class c = ad + bd;
        FieldPtr K;
        try {
            if (!c.fits_slong_p()) throw std::invalid_argument("radicand too large");
            K = TowerField::get(d, c.get_si());
        } catch (const std::invalid_argument&) {
            rejected.insert({a, b});
            continue;
        }
        int i = static_cast<int>(rng() % static_cast<unsigned>(d));
        int k = 2 * static_cast<int>(rng() % static_cast<unsigned>(d)) + 1;
        std::array<FieldElement, 3> base{K->zeta_pow(i) * a, K->rational(b), K->u_pow(k) * K->t()};
        const auto& perm = perms[rng() % perms.size()];
        ProjPoint p(base[static_cast<std::size_t>(perm[0])], base[static_cast<std::size_t>(perm[1])],
                    base[static_cast<std::size_t>(perm[2])]);
        out.push_back({K, p, a, b});
    }
    return out;
}

std::vector<std::string> conic_diff(const HomPoly& a, const HomPoly& b) {
    std::vector<std::string> out;
    std::set<Exponent> keys;
    for (const auto& [e, c] : a.terms()) keys.insert(e);
    for (const auto& [e, c] : b.terms()) keys.insert(e);
    if (a.is_zero() || b.is_zero()) {
        if (!(a.is_zero() && b.is_zero())) out.push_back("one conic is zero");
        return out;
    }
    // Pivot on the first monomial present in both.
    const Exponent* pivot = nullptr;
    for (const auto& e : keys)
        if (!a.coeff(e).is_zero() && !b.coeff(e).is_zero()) {
            pivot = &e;
            break;
        }
    if (!pivot) {
        out.push_back("no common monomial");
        return out;
    }
    FieldElement pa = a.coeff(*pivot), pb = b.coeff(*pivot);
    for (const auto& e : keys) {
        FieldElement ca = a.coeff(e), cb = b.coeff(e);
        if ((ca * pb - cb * pa).is_zero()) continue;
        out.push_back(monomial_name(e) + ": " + ca.to_string() + " vs " + cb.to_string() + " (pivot " +
                      monomial_name(*pivot) + ")");
    }
    return out;
}

} // namespace fermat
