#include "fermat/symmetry_verify.hpp"

#include "fermat/errors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace fermat {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

// Rank of a small matrix over the field by elimination.
int rank_of(std::vector<std::vector<FieldElement>> m) {
    int rank = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
        auto r = static_cast<std::size_t>(rank);
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c].is_zero()) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[r]);
        FieldElement inv = m[r][c].inverse();
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c].is_zero()) continue;
            FieldElement f = m[i][c] * inv;
            for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
        }
        ++rank;
    }
    return rank;
}

std::vector<FieldElement> conic_row(const HomPoly& q) {
    std::vector<FieldElement> row;
    for (Exponent e : {Exponent{2, 0, 0}, Exponent{1, 1, 0}, Exponent{1, 0, 1}, Exponent{0, 2, 0}, Exponent{0, 1, 1},
                       Exponent{0, 0, 2}})
        row.push_back(q.coeff(e));
    return row;
}

nlohmann::json form_json(const BinaryForm& q) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : q.c) j.push_back(c.to_json());
    return j;
}

nlohmann::json cert(const std::string& name, bool ok, nlohmann::json value) {
    return {{"name", name}, {"ok", ok}, {"value", std::move(value)}};
}

std::string grid_label(const LabeledLine& l) { return l.label(); }

} // namespace

Automorphism::Automorphism(FieldPtr field, std::array<int, 3> perm, std::array<int, 3> expo)
    : field_(std::move(field)), perm_(perm), expo_(expo) {
    std::array<int, 3> sorted = perm_;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 3>{0, 1, 2}) throw std::invalid_argument("automorphism needs a permutation");
    const int n = 2 * field_->degree();
    for (int& e : expo_) e = mod(e, n);
}

Automorphism Automorphism::identity(const FieldPtr& K) { return Automorphism(K, {0, 1, 2}, {0, 0, 0}); }
Automorphism Automorphism::rho(const FieldPtr& K) { return scale(K, 0); }
Automorphism Automorphism::varphi(const FieldPtr& K) { return Automorphism(K, {1, 0, 2}, {0, 0, 0}); }
Automorphism Automorphism::psi(const FieldPtr& K) { return Automorphism(K, {2, 1, 0}, {0, 0, 0}); }

Automorphism Automorphism::scale(const FieldPtr& K, int i) {
    std::array<int, 3> e{0, 0, 0};
    e[static_cast<std::size_t>(i)] = 2;
    return Automorphism(K, {0, 1, 2}, e);
}

std::array<std::array<FieldElement, 3>, 3> Automorphism::matrix() const {
    std::array<std::array<FieldElement, 3>, 3> m{{{field_->zero(), field_->zero(), field_->zero()},
                                                  {field_->zero(), field_->zero(), field_->zero()},
                                                  {field_->zero(), field_->zero(), field_->zero()}}};
    for (std::size_t i = 0; i < 3; ++i) m[i][static_cast<std::size_t>(perm_[i])] = field_->u_pow(expo_[i]);
    return m;
}

ProjPoint Automorphism::apply(const ProjPoint& p) const {
    std::array<FieldElement, 3> q{field_->zero(), field_->zero(), field_->zero()};
    for (std::size_t i = 0; i < 3; ++i) q[i] = field_->u_pow(expo_[i]) * p[perm_[i]];
    return ProjPoint(q);
}

HomPoly Automorphism::pullback(const HomPoly& f) const {
    std::array<HomPoly, 3> s{HomPoly(field_, 1), HomPoly(field_, 1), HomPoly(field_, 1)};
    for (std::size_t i = 0; i < 3; ++i) s[i] = HomPoly::variable(field_, perm_[i]) * field_->u_pow(expo_[i]);
    return f.substitute(s);
}

Automorphism Automorphism::operator*(const Automorphism& h) const {
    std::array<int, 3> p{}, e{};
    for (std::size_t i = 0; i < 3; ++i) {
        auto gi = static_cast<std::size_t>(perm_[i]);
        p[i] = h.perm_[gi];
        e[i] = expo_[i] + h.expo_[gi];
    }
    return Automorphism(field_, p, e);
}

Automorphism Automorphism::inverse() const {
    std::array<int, 3> p{}, e{};
    for (std::size_t i = 0; i < 3; ++i) {
        auto j = static_cast<std::size_t>(perm_[i]);
        p[j] = static_cast<int>(i);
        e[j] = -expo_[i];
    }
    return Automorphism(field_, p, e);
}

Automorphism Automorphism::pow(int n) const {
    Automorphism base = n < 0 ? inverse() : *this;
    Automorphism r = identity(field_);
    for (int i = 0; i < std::abs(n); ++i) r = base * r;
    return r;
}

Automorphism Automorphism::normalized() const {
    int shift = 0;
    for (std::size_t i = 0; i < 3; ++i)
        if (perm_[i] == 2) shift = expo_[i];
    return Automorphism(field_, perm_, {expo_[0] - shift, expo_[1] - shift, expo_[2] - shift});
}

bool Automorphism::operator==(const Automorphism& o) const {
    Automorphism a = normalized(), b = o.normalized();
    return a.perm_ == b.perm_ && a.expo_ == b.expo_;
}

bool Automorphism::operator<(const Automorphism& o) const {
    Automorphism a = normalized(), b = o.normalized();
    return std::tie(a.perm_, a.expo_) < std::tie(b.perm_, b.expo_);
}

std::string Automorphism::to_string() const {
    const char* names = "xyz";
    std::string s = "(";
    for (std::size_t i = 0; i < 3; ++i) {
        if (i) s += " : ";
        if (expo_[i]) s += "u^" + std::to_string(expo_[i]) + " ";
        s += names[perm_[i]];
    }
    return s + ")";
}

nlohmann::json Automorphism::to_json() const {
    return {{"perm", perm_}, {"u_exponents", expo_}, {"map", to_string()}};
}

std::vector<Automorphism> group_elements(const FieldPtr& K) {
    const int d = K->degree();
    std::vector<Automorphism> out;
    std::array<int, 3> p{0, 1, 2};
    do {
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                std::array<int, 3> diag{2 * a, 2 * b, 0};
                std::array<int, 3> e{};
                for (std::size_t i = 0; i < 3; ++i) e[i] = diag[static_cast<std::size_t>(p[i])];
                out.push_back(Automorphism(K, p, e).normalized());
            }
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::optional<HomPoly> fixed_line(const Automorphism& g) {
    const auto& K = g.field();
    auto m = g.matrix();
    for (int k = 0; k < 2 * K->degree(); ++k) {
        auto a = m;
        FieldElement lambda = K->u_pow(k);
        for (std::size_t i = 0; i < 3; ++i) a[i][i] -= lambda;
        // Rank one: some row is nonzero and all 2x2 minors vanish.
        int pivot = -1;
        for (int i = 0; i < 3 && pivot < 0; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (!a[static_cast<std::size_t>(i)][j].is_zero()) pivot = i;
        if (pivot < 0) continue;
        bool rank_one = true;
        for (std::size_t r = 0; r < 3 && rank_one; ++r)
            for (std::size_t s = r + 1; s < 3 && rank_one; ++s)
                for (std::size_t c = 0; c < 3 && rank_one; ++c)
                    for (std::size_t e = c + 1; e < 3 && rank_one; ++e)
                        rank_one = (a[r][c] * a[s][e] - a[r][e] * a[s][c]).is_zero();
        if (!rank_one) continue;
        const auto& row = a[static_cast<std::size_t>(pivot)];
        return canonical_line(HomPoly::linear(row[0], row[1], row[2]));
    }
    return std::nullopt;
}

std::vector<ProjPoint> orbit(const ProjPoint& p, const Automorphism& g) {
    std::vector<ProjPoint> out{p};
    const int cap = 6 * g.field()->degree() * g.field()->degree() + 1;
    for (ProjPoint q = g.apply(p); q != p; q = g.apply(q)) {
        out.push_back(q);
        if (static_cast<int>(out.size()) > cap) throw std::logic_error("orbit does not close");
    }
    return out;
}

const HomPoly& OsculatingCache::get(const ProjPoint& p, int n) {
    auto key = std::make_pair(n, p);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    if (n == 1) return memo_.emplace(key, canonical_line(curve_.tangent_line(p))).first->second;
    if (n == 2) return memo_.emplace(key, curve_.osculating_conic_closed(p)).first->second;
    throw std::invalid_argument("osculating degree must be 1 or 2");
}

bool verify_invariant_intersection(const FermatCurve& C, const Automorphism& g, const ProjPoint& p, int n,
                                   OsculatingCache* cache) {
    if (n != 1 && n != 2) throw std::invalid_argument("osculating degree must be 1 or 2");
    auto L = fixed_line(g);
    if (!L) throw NoFixedLine("automorphism " + g.to_string() + " fixes no line pointwise");
    if (!C.contains(p)) throw NotOnCurve("point " + p.to_string() + " is not on the curve");
    OsculatingCache local(C);
    OsculatingCache& oc = cache ? *cache : local;
    auto pts = orbit(p, g);
    BinaryForm first = restrict_to_line(oc.get(p, n), *L);
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (!proportional(first, restrict_to_line(oc.get(pts[i], n), *L))) return false;
    return true;
}

nlohmann::json ConcurrencyReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array(), common = nlohmann::json::array();
    for (const auto& p : points) pts.push_back(p.to_string());
    for (const auto& p : common_points) common.push_back(p.to_string());
    return {{"family", family},           {"grid_line", grid_line_label},     {"grid_line_poly", grid_line.to_string()},
            {"automorphism", automorphism}, {"fixed_line", fixed_line.to_string()}, {"points", pts},
            {"common_points", common},    {"count", count},                     {"certificates", certificates},
            {"failures", failures},       {"ok", ok()}};
}

std::vector<SextacticPoint> points_on_line(const FermatCurve& C, const HomPoly& line) {
    std::vector<SextacticPoint> out;
    for (const auto& s : C.sextactic_points())
        if (line.evaluate(s.point).is_zero()) out.push_back(s);
    if (static_cast<int>(out.size()) != C.degree())
        throw FewerPoints("line " + line.to_string() + " carries " + std::to_string(out.size()) +
                          " sextactic points, expected " + std::to_string(C.degree()));
    return out;
}

std::optional<Automorphism> orbit_scaling(const FieldPtr& K, const std::vector<ProjPoint>& pts) {
    std::set<ProjPoint> all(pts.begin(), pts.end());
    for (int i = 0; i < 3; ++i) {
        Automorphism g = Automorphism::scale(K, i);
        bool closed = std::all_of(pts.begin(), pts.end(), [&](const ProjPoint& p) {
            ProjPoint q = g.apply(p);
            return q != p && all.count(q) > 0;
        });
        if (closed && orbit(pts.front(), g).size() == pts.size()) return g;
    }
    return std::nullopt;
}

namespace {

struct GridSetup {
    std::vector<SextacticPoint> sp;
    std::vector<ProjPoint> pts;
    Automorphism g;
    HomPoly L;
};

GridSetup grid_setup(const FermatCurve& C, const LabeledLine& grid_line, ConcurrencyReport& r) {
    auto sp = points_on_line(C, grid_line.line);
    std::vector<ProjPoint> pts;
    for (const auto& s : sp) pts.push_back(s.point);
    auto g = orbit_scaling(C.field(), pts);
    if (!g) throw CertificationFailure("no coordinate scaling permutes the points on " + grid_line.label());
    auto L = fixed_line(*g);
    if (!L) throw NoFixedLine("orbit automorphism " + g->to_string() + " fixes no line");
    r.grid_line_label = grid_label(grid_line);
    r.grid_line = grid_line.line;
    r.automorphism = g->to_string();
    r.fixed_line = *L;
    r.points = pts;
    return {sp, pts, *g, *L};
}

} // namespace

ConcurrencyReport tangent_concurrency(const FermatCurve& C, const LabeledLine& grid_line) {
    ConcurrencyReport r(C.field());
    r.family = "tangent lines at the sextactic points on " + grid_line.label();
    auto setup = grid_setup(C, grid_line, r);
    std::vector<HomPoly> T;
    for (const auto& p : setup.pts) T.push_back(canonical_line(C.tangent_line(p)));

    bool distinct = true;
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i + 1; j < T.size(); ++j)
            if (T[i] == T[j]) distinct = false;
    r.certificates.push_back(cert("tangents_pairwise_distinct", distinct, distinct));
    if (!distinct) r.failures.push_back("two tangents coincide on " + grid_line.label());

    ProjPoint q = meet(T[0], T[1]);
    nlohmann::json values = nlohmann::json::array();
    bool all_on = true;
    for (const auto& t : T) {
        FieldElement v = t.evaluate(q);
        values.push_back(v.to_json());
        all_on = all_on && v.is_zero();
    }
    r.certificates.push_back(cert("tangents_at_common_point", all_on, values));
    if (!all_on) r.failures.push_back("tangent misses " + q.to_string());

    FieldElement on_L = setup.L.evaluate(q);
    r.certificates.push_back(cert("common_point_on_fixed_line", on_L.is_zero(), on_L.to_json()));
    if (!on_L.is_zero()) r.failures.push_back("common point " + q.to_string() + " is off the fixed line");

    r.common_points = {q};
    r.count = all_on && distinct ? 1 : 0;
    return r;
}

ConcurrencyReport conic_common_points(const FermatCurve& C, const LabeledLine& grid_line) {
    ConcurrencyReport r(C.field());
    r.family = "hyperosculating conics at the sextactic points on " + grid_line.label();
    auto setup = grid_setup(C, grid_line, r);
    const auto& L = setup.L;
    std::vector<HomPoly> O;
    for (const auto& s : setup.sp) O.push_back(C.hyperosculating_conic(s));

    // (i) every conic cuts the fixed line in the same divisor.
    std::vector<BinaryForm> q;
    for (const auto& o : O) q.push_back(restrict_to_line(o, L));
    bool nonzero = std::any_of(q[0].c.begin(), q[0].c.end(), [](const FieldElement& c) { return !c.is_zero(); });
    bool prop = nonzero;
    for (std::size_t i = 1; i < q.size(); ++i) prop = prop && proportional(q[0], q[i]);
    r.certificates.push_back(cert("restrictions_proportional", prop, form_json(q[0])));
    if (!prop) {
        r.failures.push_back("restrictions to " + L.to_string() + " are not proportional");
        return r;
    }

    // (ii) distinct roots on the line.
    FieldElement disc = disc2(q[0]);
    nlohmann::json dj = {{"discriminant", disc.to_json()}};
    FieldElement ac = q[0].c[0] * q[0].c[2];
    if (!ac.is_zero()) dj["discriminant_over_c0_c2"] = (disc / ac).to_json();
    r.certificates.push_back(cert("restriction_discriminant", true, dj));
    if (disc.is_zero()) {
        auto v = line_parametrization(L);
        const auto& c = q[0].c;
        FieldElement s = c[0].is_zero() ? C.field()->one() : -c[1];
        FieldElement t = c[0].is_zero() ? C.field()->zero() : c[0] * 2;
        std::array<FieldElement, 3> pt{s * v[0][0] + t * v[1][0], s * v[0][1] + t * v[1][1], s * v[0][2] + t * v[1][2]};
        r.common_points = {ProjPoint(pt)};
        r.count = 1;
    } else {
        r.count = 2;
    }

    // (iii) no common point off the line: scale O_1, O_2 to agree with O_0 on
    // L, so O_i - O_0 = L * l_i and an off-line common point must be l_1 = l_2 = 0.
    std::size_t m = 0;
    while (q[0].c[m].is_zero()) ++m;
    std::vector<HomPoly> ell;
    bool divisible = true;
    for (std::size_t i = 1; i <= 2 && i < O.size(); ++i) {
        HomPoly D = O[i] * (q[0].c[m] / q[i].c[m]) - O[0];
        try {
            ell.push_back(D.divide_exact(L));
        } catch (const std::domain_error&) {
            divisible = false;
        }
    }
    r.certificates.push_back(cert("differences_divisible_by_fixed_line", divisible, divisible));
    if (!divisible || ell.size() < 2) {
        r.failures.push_back("pairwise differences are not divisible by " + L.to_string());
        r.count = 0;
        return r;
    }
    bool indep = !ell[0].is_zero() && !ell[1].is_zero() && !proportional(ell[0], ell[1]);
    nlohmann::json ej = {{"l1", ell[0].to_string()}, {"l2", ell[1].to_string()}};
    if (indep) {
        ProjPoint X = meet(ell[0], ell[1]);
        FieldElement onL = L.evaluate(X);
        FieldElement val = O[0].evaluate(X);
        ej["crossing"] = X.to_string();
        ej["fixed_line_at_crossing"] = onL.to_json();
        ej["conic_at_crossing"] = val.to_json();
        bool excluded = onL.is_zero() || !val.is_zero();
        r.certificates.push_back(cert("off_line_exclusion", excluded, ej));
        if (!excluded) {
            r.failures.push_back("off-line point " + X.to_string() + " lies on every conic");
            r.count = 0;
        }
    } else {
        r.certificates.push_back(cert("off_line_exclusion", false, ej));
        r.failures.push_back("cofactor lines are proportional");
        r.count = 0;
    }
    return r;
}

nlohmann::json PencilCertificate::to_json() const {
    return {{"ell", ell.to_string()}, {"rank", rank}, {"residual_discriminant", residual_disc.to_json()}};
}

PencilCertificate pencil_degenerate(const FermatCurve& C, int j, int k1, int k2) {
    if (k1 == k2) throw std::invalid_argument("a pencil needs two distinct conics (k1 != k2)");
    const auto& K = C.field();
    const long d = C.degree();
    HomPoly O1 = C.hyperosculating_conic(C.sextactic_point(Cluster::z, j, k1));
    HomPoly O2 = C.hyperosculating_conic(C.sextactic_point(Cluster::z, j, k2));
    FieldElement a = K->rational(2 * d * (d - 2));
    FieldElement cz = -(K->t().inverse() * ((d + 1) * (2 * d - 3))) * (K->u_pow(k1) + K->u_pow(k2));
    HomPoly ell = HomPoly::linear(a * K->zeta_pow(-j), a, cz);
    HomPoly zl = HomPoly::variable(K, 2) * ell;
    int rank = rank_of({conic_row(O1), conic_row(O2), conic_row(zl)});
    if (rank > 2)
        throw CertificationFailure("z * ell is not in the pencil of O_{j,k1}, O_{j,k2} (rank " + std::to_string(rank) + ")");
    FieldElement disc = disc2(restrict_to_line(O1, ell));
    if (disc.is_zero()) throw CertificationFailure("residual intersection points coincide: discriminant 0");
    ProjPoint corner = meet(ell, HomPoly::variable(K, 2));
    if (O1.evaluate(corner).is_zero())
        throw CertificationFailure("residual point " + corner.to_string() + " lies on V(z)");
    return {ell, rank, disc};
}

} // namespace fermat
