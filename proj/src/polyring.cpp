#include "fermat/polyring.hpp"

#include "fermat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fermat {

namespace {

const char* const kVarNames[3] = {"x", "y", "z"};

void require_same(const FieldPtr& a, const FieldPtr& b) {
    if (a != b) throw DegreeMismatch("polynomials over different fields");
}

} // namespace

// ---------------------------------------------------------------------------
// HomPoly

HomPoly::HomPoly(FieldPtr field, int deg) : field_(std::move(field)), deg_(deg) {
    if (!field_) throw std::invalid_argument("HomPoly needs a field");
    if (deg < 0) throw std::invalid_argument("negative degree");
}

HomPoly HomPoly::constant(const FieldElement& c) {
    HomPoly p(c.field(), 0);
    p.add_term({0, 0, 0}, c);
    return p;
}

HomPoly HomPoly::variable(FieldPtr field, int var) {
    Exponent e{0, 0, 0};
    e[static_cast<std::size_t>(var)] = 1;
    HomPoly p(field, 1);
    p.add_term(e, field->one());
    return p;
}

HomPoly HomPoly::monomial(const FieldElement& c, const Exponent& e) {
    HomPoly p(c.field(), e[0] + e[1] + e[2]);
    p.add_term(e, c);
    return p;
}

HomPoly HomPoly::linear(const FieldElement& a, const FieldElement& b, const FieldElement& c) {
    HomPoly p(a.field(), 1);
    p.add_term({1, 0, 0}, a);
    p.add_term({0, 1, 0}, b);
    p.add_term({0, 0, 1}, c);
    return p;
}

HomPoly HomPoly::fermat(FieldPtr field, int d) {
    HomPoly p(field, d);
    p.add_term({d, 0, 0}, field->one());
    p.add_term({0, d, 0}, field->one());
    p.add_term({0, 0, d}, field->one());
    return p;
}

FieldElement HomPoly::coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? field_->zero() : it->second;
}

void HomPoly::add_term(const Exponent& e, const FieldElement& c) {
    if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != deg_)
        throw std::invalid_argument("exponent does not match the degree");
    require_same(field_, c.field());
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

HomPoly HomPoly::operator+(const HomPoly& o) const {
    require_same(field_, o.field_);
    if (o.is_zero()) return *this;
    if (is_zero()) return o;
    if (deg_ != o.deg_) throw std::invalid_argument("adding polynomials of different degrees");
    HomPoly r(*this);
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

HomPoly HomPoly::operator-() const {
    HomPoly r(field_, deg_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

HomPoly HomPoly::operator-(const HomPoly& o) const { return *this + (-o); }

HomPoly HomPoly::operator*(const HomPoly& o) const {
    require_same(field_, o.field_);
    HomPoly r(field_, deg_ + o.deg_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_)
            r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    return r;
}

HomPoly HomPoly::operator*(const FieldElement& c) const {
    require_same(field_, c.field());
    HomPoly r(field_, deg_);
    if (c.is_zero()) return r;
    for (const auto& [e, a] : terms_) r.terms_.emplace(e, a * c);
    return r;
}

HomPoly HomPoly::operator*(long c) const { return *this * field_->rational(c); }

HomPoly operator*(const FieldElement& c, const HomPoly& f) { return f * c; }

HomPoly HomPoly::pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative power of a polynomial");
    HomPoly result = constant(field_->one());
    HomPoly base = *this;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

bool HomPoly::operator==(const HomPoly& o) const {
    if (field_ != o.field_) return false;
    if (is_zero() && o.is_zero()) return true;
    return deg_ == o.deg_ && terms_ == o.terms_;
}

HomPoly HomPoly::partial(int var) const {
    HomPoly r(field_, deg_ > 0 ? deg_ - 1 : 0);
    for (const auto& [e, c] : terms_) {
        int k = e[static_cast<std::size_t>(var)];
        if (k == 0) continue;
        Exponent f = e;
        f[static_cast<std::size_t>(var)] -= 1;
        r.add_term(f, c * static_cast<long>(k));
    }
    return r;
}

FieldElement HomPoly::evaluate(const std::array<FieldElement, 3>& v) const {
    for (const auto& x : v) require_same(field_, x.field());
    std::array<std::vector<FieldElement>, 3> powers;
    for (int i = 0; i < 3; ++i) {
        auto& pw = powers[static_cast<std::size_t>(i)];
        pw.push_back(field_->one());
        for (int k = 1; k <= deg_; ++k) pw.push_back(pw.back() * v[static_cast<std::size_t>(i)]);
    }
    FieldElement acc = field_->zero();
    for (const auto& [e, c] : terms_)
        acc += c * powers[0][static_cast<std::size_t>(e[0])] * powers[1][static_cast<std::size_t>(e[1])] *
               powers[2][static_cast<std::size_t>(e[2])];
    return acc;
}

FieldElement HomPoly::evaluate(const ProjPoint& p) const { return evaluate(p.coords()); }

HomPoly HomPoly::permute(const std::array<int, 3>& perm) const {
    HomPoly r(field_, deg_);
    for (const auto& [e, c] : terms_) {
        Exponent f{0, 0, 0};
        for (int i = 0; i < 3; ++i) f[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] += e[static_cast<std::size_t>(i)];
        r.add_term(f, c);
    }
    return r;
}

HomPoly HomPoly::substitute(const std::array<HomPoly, 3>& s) const {
    int sub_deg = -1;
    for (const auto& q : s) {
        require_same(field_, q.field());
        if (q.is_zero()) continue;
        if (sub_deg >= 0 && q.deg() != sub_deg) throw std::invalid_argument("substitutes of mixed degree");
        sub_deg = q.deg();
    }
    if (sub_deg < 0) sub_deg = 1;
    std::array<std::vector<HomPoly>, 3> powers;
    for (int i = 0; i < 3; ++i) {
        auto& pw = powers[static_cast<std::size_t>(i)];
        pw.push_back(constant(field_->one()));
        for (int k = 1; k <= deg_; ++k) pw.push_back(pw.back() * s[static_cast<std::size_t>(i)]);
    }
    HomPoly r(field_, deg_ * sub_deg);
    for (const auto& [e, c] : terms_) {
        HomPoly m = powers[0][static_cast<std::size_t>(e[0])] * powers[1][static_cast<std::size_t>(e[1])] *
                    powers[2][static_cast<std::size_t>(e[2])];
        r += m * c;
    }
    return r;
}

HomPoly HomPoly::divide_exact(const HomPoly& g) const {
    require_same(field_, g.field_);
    if (g.is_zero()) throw ZeroInput("division by the zero polynomial");
    if (is_zero()) return HomPoly(field_, std::max(0, deg_ - g.deg_));
    if (g.deg_ > deg_) throw std::domain_error("divisor degree exceeds dividend degree");
    // Lex order, x > y > z: the largest key in the map is the leading term.
    const auto& [lead_e, lead_c] = *g.terms_.rbegin();
    FieldElement lead_inv = lead_c.inverse();
    HomPoly rem = *this;
    HomPoly quot(field_, deg_ - g.deg_);
    while (!rem.is_zero()) {
        const auto& [e, c] = *rem.terms_.rbegin();
        Exponent q{e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2]};
        if (q[0] < 0 || q[1] < 0 || q[2] < 0) throw std::domain_error("polynomial division is not exact");
        HomPoly step = monomial(c * lead_inv, q);
        quot += step;
        rem -= step * g;
    }
    return quot;
}

nlohmann::json HomPoly::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : terms_) terms.push_back({e[0], e[1], e[2], c.to_json()});
    return {{"deg", deg_}, {"terms", terms}};
}

HomPoly HomPoly::from_json(const nlohmann::json& j) {
    const auto& terms = j.at("terms");
    if (terms.empty()) throw std::invalid_argument("cannot infer the field of an empty polynomial");
    FieldElement first = FieldElement::from_json(terms.at(0).at(3));
    HomPoly p(first.field(), j.at("deg").get<int>());
    for (const auto& t : terms)
        p.add_term({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()}, FieldElement::from_json(t.at(3)));
    return p;
}

std::string HomPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) out << " + ";
        first = false;
        out << "(" << it->second.to_string() << ")";
        for (int i = 0; i < 3; ++i) {
            int k = it->first[static_cast<std::size_t>(i)];
            if (k == 0) continue;
            out << "*" << kVarNames[i];
            if (k > 1) out << "^" << k;
        }
    }
    return out.str();
}

FieldElement det3(const std::array<std::array<FieldElement, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

HomPoly det3(const std::array<std::array<HomPoly, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

HomPoly hessian(const HomPoly& f) {
    if (f.deg() < 2) return HomPoly(f.field(), 0);
    std::array<HomPoly, 3> first{f.partial(0), f.partial(1), f.partial(2)};
    std::array<std::array<HomPoly, 3>, 3> m{{{first[0].partial(0), first[0].partial(1), first[0].partial(2)},
                                             {first[1].partial(0), first[1].partial(1), first[1].partial(2)},
                                             {first[2].partial(0), first[2].partial(1), first[2].partial(2)}}};
    return det3(m);
}

bool proportional(const HomPoly& a, const HomPoly& b) {
    require_same(a.field(), b.field());
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (a.deg() != b.deg()) return false;
    // Minors against a fixed pivot term suffice once the pivot is nonzero in a.
    const auto& [pe, pa] = *a.terms().begin();
    FieldElement pb = b.coeff(pe);
    if (pb.is_zero()) return false;
    if (a.terms().size() != b.terms().size()) return false;
    for (const auto& [e, ca] : a.terms()) {
        FieldElement cb = b.coeff(e);
        if (!(ca * pb - cb * pa).is_zero()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// ProjPoint and lines

ProjPoint::ProjPoint(const FieldElement& x, const FieldElement& y, const FieldElement& z) : c_{x, y, z} {
    require_same(x.field(), y.field());
    require_same(x.field(), z.field());
    int lead = -1;
    for (int i = 0; i < 3; ++i)
        if (!c_[static_cast<std::size_t>(i)].is_zero()) {
            lead = i;
            break;
        }
    if (lead < 0) throw ZeroInput("projective point with all coordinates zero");
    if (c_[static_cast<std::size_t>(lead)].is_one()) return;
    FieldElement inv = c_[static_cast<std::size_t>(lead)].inverse();
    for (auto& v : c_) v = v * inv;
}

int ProjPoint::chart() const {
    for (int i = 0; i < 3; ++i)
        if (!c_[static_cast<std::size_t>(i)].is_zero()) return i;
    return 0;
}

bool ProjPoint::operator==(const ProjPoint& o) const { return c_ == o.c_; }

int ProjPoint::compare(const ProjPoint& o) const {
    for (int i = 0; i < 3; ++i) {
        int c = c_[static_cast<std::size_t>(i)].compare(o.c_[static_cast<std::size_t>(i)]);
        if (c != 0) return c;
    }
    return 0;
}

nlohmann::json ProjPoint::to_json() const {
    return nlohmann::json::array({c_[0].to_json(), c_[1].to_json(), c_[2].to_json()});
}

std::string ProjPoint::to_string() const {
    return "(" + c_[0].to_string() + " : " + c_[1].to_string() + " : " + c_[2].to_string() + ")";
}

std::array<FieldElement, 3> line_coeffs(const HomPoly& l) {
    if (l.deg() != 1 || l.is_zero()) throw std::invalid_argument("not a line: " + l.to_string());
    return {l.coeff({1, 0, 0}), l.coeff({0, 1, 0}), l.coeff({0, 0, 1})};
}

HomPoly canonical_line(const HomPoly& l) {
    ProjPoint dual(line_coeffs(l));
    return HomPoly::linear(dual[0], dual[1], dual[2]);
}

std::array<FieldElement, 3> cross(const std::array<FieldElement, 3>& a, const std::array<FieldElement, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

HomPoly join(const ProjPoint& p, const ProjPoint& q) {
    auto c = cross(p.coords(), q.coords());
    ProjPoint dual(c);
    return HomPoly::linear(dual[0], dual[1], dual[2]);
}

ProjPoint meet(const HomPoly& l1, const HomPoly& l2) { return ProjPoint(cross(line_coeffs(l1), line_coeffs(l2))); }

// ---------------------------------------------------------------------------
// Power series

Series series_mul(const Series& a, const Series& b, int n) {
    const FieldPtr& f = !a.empty() ? a[0].field() : b.at(0).field();
    Series r(static_cast<std::size_t>(n), f->zero());
    for (std::size_t i = 0; i < a.size() && static_cast<int>(i) < n; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) < n; ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

Series series_inverse(const Series& a, int n) {
    if (a.empty() || a[0].is_zero()) throw ZeroInput("series with zero constant term is not invertible");
    const FieldPtr& f = a[0].field();
    Series r{a[0].inverse()};
    int prec = 1;
    while (prec < n) {
        prec = std::min(2 * prec, n);
        // r <- r (2 - a r)
        Series ar = series_mul(a, r, prec);
        for (auto& c : ar) c = -c;
        ar[0] += f->rational(2);
        r = series_mul(r, ar, prec);
    }
    r.resize(static_cast<std::size_t>(n), f->zero());
    return r;
}

int valuation(const Series& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) return static_cast<int>(i);
    return -1;
}

namespace {

Series compose_coords(const HomPoly& g, const std::array<Series, 3>& coords, int n) {
    const FieldPtr& f = g.field();
    std::array<std::vector<Series>, 3> powers;
    for (int i = 0; i < 3; ++i) {
        auto& pw = powers[static_cast<std::size_t>(i)];
        Series one(static_cast<std::size_t>(n), f->zero());
        one[0] = f->one();
        pw.push_back(one);
        for (int k = 1; k <= g.deg(); ++k) pw.push_back(series_mul(pw.back(), coords[static_cast<std::size_t>(i)], n));
    }
    Series acc(static_cast<std::size_t>(n), f->zero());
    for (const auto& [e, c] : g.terms()) {
        Series m = series_mul(powers[0][static_cast<std::size_t>(e[0])], powers[1][static_cast<std::size_t>(e[1])], n);
        m = series_mul(m, powers[2][static_cast<std::size_t>(e[2])], n);
        for (int i = 0; i < n; ++i)
            if (!m[static_cast<std::size_t>(i)].is_zero()) acc[static_cast<std::size_t>(i)] += c * m[static_cast<std::size_t>(i)];
    }
    return acc;
}

} // namespace

BranchSeries branch_series(const HomPoly& f, const ProjPoint& p, int order) {
    if (order < 1) throw std::invalid_argument("series order must be positive");
    require_same(f.field(), p.field());
    if (!f.evaluate(p).is_zero()) throw NotOnCurve("point " + p.to_string() + " is not on the curve");
    const int chart = p.chart();
    std::array<FieldElement, 3> grad{f.partial(0).evaluate(p), f.partial(1).evaluate(p), f.partial(2).evaluate(p)};
    int solved = -1;
    double best = -1;
    for (int i = 0; i < 3; ++i) {
        if (i == chart || grad[static_cast<std::size_t>(i)].is_zero()) continue;
        double m = grad[static_cast<std::size_t>(i)].embed(64).center_modulus_upper();
        if (solved < 0 || m > best * (1 + 1e-12)) {
            solved = i;
            best = m;
        }
    }
    if (solved < 0) throw SingularPoint("gradient vanishes at " + p.to_string());
    const int param = 3 - chart - solved;
    const FieldPtr& K = f.field();

    BranchSeries br{p, chart, param, solved, order, {}};
    br.coords[static_cast<std::size_t>(chart)] = Series{K->one()};
    br.coords[static_cast<std::size_t>(param)] = Series{p[param], K->one()};
    br.coords[static_cast<std::size_t>(solved)] = Series{p[solved]};
    HomPoly fv = f.partial(solved);
    int prec = 1;
    while (prec < order) {
        prec = std::min(2 * prec, order);
        Series& h = br.coords[static_cast<std::size_t>(solved)];
        h.resize(static_cast<std::size_t>(prec), K->zero());
        Series value = compose_coords(f, br.coords, prec);
        Series slope = compose_coords(fv, br.coords, prec);
        Series step = series_mul(value, series_inverse(slope, prec), prec);
        for (int i = 0; i < prec; ++i) h[static_cast<std::size_t>(i)] -= step[static_cast<std::size_t>(i)];
    }
    for (auto& s : br.coords) s.resize(static_cast<std::size_t>(order), K->zero());
    if (valuation(compose_coords(f, br.coords, order)) >= 0)
        throw std::logic_error("branch series residual is not zero");
    return br;
}

Series compose(const HomPoly& g, const BranchSeries& branch) {
    require_same(g.field(), branch.base.field());
    return compose_coords(g, branch.coords, branch.order);
}

int int_mult(const HomPoly& f, const HomPoly& g, const ProjPoint& p) {
    const int df = f.deg(), dg = g.deg();
    int bound = dg == 2 ? 7 : dg == 1 ? df + 1 : df * dg + 1;
    const int cap = 4 * df * dg + 8;
    int n = std::min(bound + 2, cap);
    while (true) {
        BranchSeries br = branch_series(f, p, n);
        int v = valuation(compose(g, br));
        if (v >= 0) return v;
        if (n >= cap)
            throw TruncationExhausted("g vanishes on the branch to order " + std::to_string(n) + " at " + p.to_string());
        n = std::min(2 * n, cap);
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials

int udeg(const UPoly& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (!a[static_cast<std::size_t>(i)].is_zero()) return i;
    return -1;
}

void utrim(UPoly& a) { a.erase(a.begin() + (udeg(a) + 1), a.end()); }

void udivmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
    const int db = udeg(b);
    if (db < 0) throw ZeroInput("polynomial division by zero");
    r = a;
    utrim(r);
    const FieldPtr& K = b[0].field();
    int dr = udeg(r);
    q.assign(static_cast<std::size_t>(std::max(dr - db + 1, 0)), K->zero());
    FieldElement lead_inv = b[static_cast<std::size_t>(db)].inverse();
    while (dr >= db) {
        FieldElement c = r[static_cast<std::size_t>(dr)] * lead_inv;
        q[static_cast<std::size_t>(dr - db)] = c;
        for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(dr - db + i)] -= c * b[static_cast<std::size_t>(i)];
        dr = udeg(r);
    }
    utrim(r);
    utrim(q);
}

UPoly ugcd(UPoly a, UPoly b) {
    utrim(a);
    utrim(b);
    while (udeg(b) >= 0) {
        UPoly q, r;
        udivmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (udeg(a) < 0) return a;
    FieldElement inv = a.back().inverse();
    for (auto& c : a) c = c * inv;
    return a;
}

FieldElement uresultant(UPoly a, UPoly b) {
    utrim(a);
    utrim(b);
    if (a.empty() && b.empty()) throw ZeroInput("resultant of two zero polynomials");
    const FieldPtr& K = a.empty() ? b[0].field() : a[0].field();
    if (a.empty() || b.empty()) return K->zero();
    FieldElement result = K->one();
    while (true) {
        int da = udeg(a), db = udeg(b);
        if (db == 0) return result * b[0].pow(da);
        if (da == 0) return result * a[0].pow(db);
        if (da < db) {
            std::swap(a, b);
            if ((da * db) % 2) result = -result;
            std::swap(da, db);
        }
        UPoly q, r;
        udivmod(a, b, q, r);
        int dr = udeg(r);
        if (dr < 0) return K->zero();
        if ((da * db) % 2) result = -result;
        result *= b.back().pow(da - dr);
        a = std::move(b);
        b = std::move(r);
    }
}

FieldElement ueval(const UPoly& a, const FieldElement& x) {
    FieldElement acc = x.field()->zero();
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// ---------------------------------------------------------------------------
// Resultant oracle

namespace {

using QMatrix = std::array<std::array<mpq_class, 3>, 3>;

mpq_class qdet(const QMatrix& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

QMatrix qinverse(const QMatrix& m) {
    mpq_class det = qdet(m);
    QMatrix r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (m[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c0)] * m[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c1)] -
                 m[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c1)] * m[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c0)]) /
                det;
        }
    return r;
}

// Coefficients in z of h(xv, 1, z).
UPoly fiber_poly(const HomPoly& h, const FieldElement& xv) {
    const FieldPtr& K = h.field();
    UPoly r(static_cast<std::size_t>(h.deg() + 1), K->zero());
    std::vector<FieldElement> xp{K->one()};
    for (int k = 1; k <= h.deg(); ++k) xp.push_back(xp.back() * xv);
    for (const auto& [e, c] : h.terms()) r[static_cast<std::size_t>(e[2])] += c * xp[static_cast<std::size_t>(e[0])];
    return r;
}

int resultant_order_once(const HomPoly& f, const HomPoly& g, const ProjPoint& p, std::uint64_t seed) {
    const FieldPtr& K = f.field();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> entry(-4, 4);
    QMatrix m;
    do {
        for (auto& row : m)
            for (auto& v : row) v = entry(rng);
    } while (qdet(m) == 0);

    std::array<HomPoly, 3> sub{HomPoly(K, 1), HomPoly(K, 1), HomPoly(K, 1)};
    for (int i = 0; i < 3; ++i)
        sub[static_cast<std::size_t>(i)] =
            HomPoly::linear(K->rational(m[static_cast<std::size_t>(i)][0]), K->rational(m[static_cast<std::size_t>(i)][1]),
                            K->rational(m[static_cast<std::size_t>(i)][2]));
    HomPoly fp = f.substitute(sub), gp = g.substitute(sub);
    QMatrix minv = qinverse(m);
    std::array<FieldElement, 3> q{K->zero(), K->zero(), K->zero()};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            q[static_cast<std::size_t>(i)] += p[j] * minv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (q[1].is_zero()) throw GenericityFailure("transformed point lies on y = 0");
    if (fp.coeff({0, 0, fp.deg()}).is_zero() || gp.coeff({0, 0, gp.deg()}).is_zero())
        throw GenericityFailure("leading z coefficient vanishes after the change of coordinates");
    FieldElement yinv = q[1].inverse();
    FieldElement x0 = q[0] * yinv, z0 = q[2] * yinv;

    // The common zeros on the fiber through the point must reduce to the point itself.
    UPoly common = ugcd(fiber_poly(fp, x0), fiber_poly(gp, x0));
    int m0 = udeg(common);
    if (m0 < 1) throw std::logic_error("point is not a common zero");
    UPoly expected{K->one()};
    for (int k = 0; k < m0; ++k) {
        UPoly next(expected.size() + 1, K->zero());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            next[i + 1] += expected[i];
            next[i] -= expected[i] * z0;
        }
        expected = std::move(next);
    }
    if (common != expected) throw GenericityFailure("another common zero shares the fiber");

    const int n = fp.deg() * gp.deg();
    std::vector<FieldElement> values;
    bool all_zero = true;
    for (int i = 0; i <= n; ++i) {
        values.push_back(uresultant(fiber_poly(fp, K->rational(i)), fiber_poly(gp, K->rational(i))));
        all_zero = all_zero && values.back().is_zero();
    }
    if (all_zero) throw ResultantZero("curves share a component");

    // Newton divided differences on nodes 0..n, then expand to monomials.
    std::vector<FieldElement> dd = values;
    for (int level = 1; level <= n; ++level)
        for (int i = n; i >= level; --i)
            dd[static_cast<std::size_t>(i)] =
                (dd[static_cast<std::size_t>(i)] - dd[static_cast<std::size_t>(i - 1)]) * mpq_class(1, level);
    UPoly poly{dd[static_cast<std::size_t>(n)]};
    for (int i = n - 1; i >= 0; --i) {
        UPoly next(poly.size() + 1, K->zero());
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] += poly[k];
            next[k] -= poly[k] * static_cast<long>(i);
        }
        next[0] += dd[static_cast<std::size_t>(i)];
        poly = std::move(next);
    }
    utrim(poly);
    int order = 0;
    while (ueval(poly, x0).is_zero()) {
        ++order;
        // Synthetic division by (x - x0).
        UPoly q(poly.size() - 1, K->zero());
        FieldElement carry = K->zero();
        for (int k = static_cast<int>(poly.size()) - 1; k >= 1; --k) {
            carry = carry * x0 + poly[static_cast<std::size_t>(k)];
            q[static_cast<std::size_t>(k - 1)] = carry;
        }
        poly = std::move(q);
    }
    return order;
}

} // namespace

ResultantOrder resultant_order(const HomPoly& f, const HomPoly& g, const ProjPoint& p, std::uint64_t seed,
                               int max_attempts) {
    require_same(f.field(), g.field());
    if (!f.evaluate(p).is_zero() || !g.evaluate(p).is_zero())
        throw NotOnCurve("point is not a common zero: " + p.to_string());
    std::string last;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        try {
            return {resultant_order_once(f, g, p, seed + static_cast<std::uint64_t>(attempt)), seed + static_cast<std::uint64_t>(attempt),
                    attempt + 1};
        } catch (const GenericityFailure& e) {
            last = e.what();
        }
    }
    throw GenericityFailure("no generic coordinate change found: " + last);
}

// ---------------------------------------------------------------------------
// Restriction to lines

std::array<std::array<FieldElement, 3>, 2> line_parametrization(const HomPoly& l) {
    auto c = line_coeffs(l);
    const FieldPtr& K = l.field();
    int pivot = 0;
    while (c[static_cast<std::size_t>(pivot)].is_zero()) ++pivot;
    FieldElement inv = c[static_cast<std::size_t>(pivot)].inverse();
    std::array<std::array<FieldElement, 3>, 2> basis{{{K->zero(), K->zero(), K->zero()}, {K->zero(), K->zero(), K->zero()}}};
    int slot = 0;
    for (int i = 0; i < 3; ++i) {
        if (i == pivot) continue;
        auto& v = basis[static_cast<std::size_t>(slot++)];
        v[static_cast<std::size_t>(i)] = K->one();
        v[static_cast<std::size_t>(pivot)] = -(c[static_cast<std::size_t>(i)] * inv);
    }
    return basis;
}

BinaryForm restrict_to_line(const HomPoly& c, const HomPoly& l) {
    require_same(c.field(), l.field());
    auto basis = line_parametrization(l);
    const FieldPtr& K = c.field();
    // Substitute X_i = s v1_i + t v2_i using the first two variables as s, t.
    std::array<HomPoly, 3> sub{HomPoly(K, 1), HomPoly(K, 1), HomPoly(K, 1)};
    for (int i = 0; i < 3; ++i)
        sub[static_cast<std::size_t>(i)] = HomPoly::linear(basis[0][static_cast<std::size_t>(i)], basis[1][static_cast<std::size_t>(i)], K->zero());
    HomPoly r = c.substitute(sub);
    BinaryForm form{c.deg(), {}};
    for (int i = 0; i <= c.deg(); ++i) form.c.push_back(r.coeff({c.deg() - i, i, 0}));
    return form;
}

FieldElement disc2(const BinaryForm& q) {
    if (q.deg != 2) throw std::invalid_argument("discriminant needs a quadratic form");
    return q.c[1] * q.c[1] - q.c[0] * q.c[2] * 4;
}

bool proportional(const BinaryForm& a, const BinaryForm& b) {
    if (a.deg != b.deg) return false;
    int pivot = -1;
    for (int i = 0; i <= a.deg; ++i)
        if (!a.c[static_cast<std::size_t>(i)].is_zero()) {
            pivot = i;
            break;
        }
    if (pivot < 0) return std::all_of(b.c.begin(), b.c.end(), [](const FieldElement& v) { return v.is_zero(); });
    const FieldElement& pa = a.c[static_cast<std::size_t>(pivot)];
    const FieldElement& pb = b.c[static_cast<std::size_t>(pivot)];
    if (pb.is_zero()) return false;
    for (int i = 0; i <= a.deg; ++i)
        if (!(a.c[static_cast<std::size_t>(i)] * pb - b.c[static_cast<std::size_t>(i)] * pa).is_zero()) return false;
    return true;
}

} // namespace fermat
