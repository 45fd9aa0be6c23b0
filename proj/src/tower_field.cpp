#include "fermat/tower_field.hpp"

#include "fermat/errors.hpp"

#include <algorithm>
#include <complex>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fermat {

// ---------------------------------------------------------------------------
// integer helpers

int euler_phi(int n) {
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

std::vector<long> cyclotomic_polynomial(int n) {
    // x^n - 1 divided by every Phi_m with m | n, m < n.
    std::vector<long> poly(n + 1, 0);
    poly[0] = -1;
    poly[n] = 1;
    for (int m = 1; m < n; ++m) {
        if (n % m != 0) continue;
        std::vector<long> divisor = cyclotomic_polynomial(m);
        int dd = static_cast<int>(divisor.size()) - 1;
        int dp = static_cast<int>(poly.size()) - 1;
        std::vector<long> quot(dp - dd + 1, 0);
        for (int i = dp; i >= dd; --i) {
            long c = poly[i];
            quot[i - dd] = c;
            if (c == 0) continue;
            for (int k = 0; k <= dd; ++k) poly[i - dd + k] -= c * divisor[k];
        }
        poly = quot;
    }
    return poly;
}

std::string rational_to_string(const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class rational_from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + s + "'");
    q.canonicalize();
    return q;
}

namespace {

// ---------------------------------------------------------------------------
// Dense polynomials over Q, used only by the extended-gcd inversion.

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

int qdeg(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

QPoly qsub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), mpq_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

void qdivmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
    r = a;
    trim(r);
    q.clear();
    int db = qdeg(b);
    if (qdeg(r) < db) return;
    q.assign(r.size() - b.size() + 1, mpq_class(0));
    mpq_class lead_inv = 1 / b.back();
    for (int i = qdeg(r); i >= db; --i) {
        if (sgn(r[i]) == 0) continue;
        mpq_class c = r[i] * lead_inv;
        q[i - db] = c;
        for (int k = 0; k <= db; ++k) r[i - db + k] -= c * b[k];
    }
    trim(r);
    trim(q);
}

std::string qpoly_to_string(const QPoly& p, const char* var) {
    if (p.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = qdeg(p); i >= 0; --i) {
        if (sgn(p[i]) == 0) continue;
        if (!first) out << " + ";
        first = false;
        out << "(" << p[i].get_str() << ")";
        if (i > 0) out << "*" << var << "^" << i;
    }
    return out.str();
}

// Q(u) = Q[u] / Phi.
struct CycloRing {
    QPoly modulus;

    explicit CycloRing(const std::vector<long>& cyclo) {
        for (long c : cyclo) modulus.emplace_back(c);
    }

    QPoly reduce(QPoly p) const {
        if (qdeg(p) < qdeg(modulus)) return p;
        QPoly q, r;
        qdivmod(p, modulus, q, r);
        return r;
    }

    QPoly mul(const QPoly& a, const QPoly& b) const { return reduce(qmul(a, b)); }

    QPoly inverse(const QPoly& a) const {
        QPoly r0 = modulus, r1 = reduce(a);
        if (r1.empty()) throw ZeroInput("inverse of zero in the cyclotomic field");
        QPoly s0, s1{mpq_class(1)};
        while (qdeg(r1) > 0) {
            QPoly q, r;
            qdivmod(r0, r1, q, r);
            r0 = std::move(r1);
            r1 = std::move(r);
            QPoly s = qsub(s0, qmul(q, s1));
            s0 = std::move(s1);
            s1 = std::move(s);
            if (r1.empty()) {
                mpq_class lead = r0.back();
                for (auto& c : r0) c /= lead;
                throw ZeroDivisor("cyclotomic inversion", qpoly_to_string(r0, "u"));
            }
        }
        mpq_class c = 1 / r1[0];
        for (auto& x : s1) x *= c;
        return reduce(s1);
    }
};

// Polynomials in t over Q(u).
using TPoly = std::vector<QPoly>;

void ttrim(TPoly& p) {
    while (!p.empty() && p.back().empty()) p.pop_back();
}

int tdeg(const TPoly& p) { return static_cast<int>(p.size()) - 1; }

void tdivmod(const CycloRing& ring, const TPoly& a, const TPoly& b, TPoly& q, TPoly& r) {
    r = a;
    ttrim(r);
    q.clear();
    int db = tdeg(b);
    if (tdeg(r) < db) return;
    q.assign(r.size() - b.size() + 1, QPoly{});
    QPoly lead_inv = ring.inverse(b.back());
    for (int i = tdeg(r); i >= db; --i) {
        if (r[i].empty()) continue;
        QPoly c = ring.mul(r[i], lead_inv);
        for (int k = 0; k <= db; ++k) r[i - db + k] = qsub(r[i - db + k], ring.mul(c, b[k]));
        q[i - db] = std::move(c);
    }
    ttrim(r);
    ttrim(q);
}

TPoly tsub(const CycloRing& ring, const TPoly& a, const TPoly& b) {
    (void)ring;
    TPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        QPoly ai = i < a.size() ? a[i] : QPoly{};
        QPoly bi = i < b.size() ? b[i] : QPoly{};
        r[i] = qsub(ai, bi);
    }
    ttrim(r);
    return r;
}

TPoly tmul(const CycloRing& ring, const TPoly& a, const TPoly& b) {
    if (a.empty() || b.empty()) return {};
    TPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].empty()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j].empty()) continue;
            QPoly prod = ring.mul(a[i], b[j]);
            QPoly sum = r[i + j];
            sum.resize(std::max(sum.size(), prod.size()), mpq_class(0));
            for (std::size_t k = 0; k < prod.size(); ++k) sum[k] += prod[k];
            trim(sum);
            r[i + j] = std::move(sum);
        }
    }
    ttrim(r);
    return r;
}

std::string tpoly_to_string(const TPoly& p) {
    std::ostringstream out;
    bool first = true;
    for (int i = tdeg(p); i >= 0; --i) {
        if (p[i].empty()) continue;
        if (!first) out << " + ";
        first = false;
        out << "[" << qpoly_to_string(p[i], "u") << "]";
        if (i > 0) out << "*t^" << i;
    }
    return first ? "0" : out.str();
}

// In-place reduction of a u-polynomial stored in slot[0..len) by the monic
// cyclotomic polynomial; afterwards only slot[0..phi) is meaningful.
void reduce_u(mpz_class* slot, int len, const std::vector<long>& cyclo) {
    const int phi = static_cast<int>(cyclo.size()) - 1;
    for (int i = len - 1; i >= phi; --i) {
        if (sgn(slot[i]) == 0) continue;
        mpz_class r = slot[i];
        slot[i] = 0;
        for (int m = 0; m < phi; ++m) {
            long c = cyclo[m];
            if (c > 0)
                mpz_submul_ui(slot[i - phi + m].get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(c));
            else if (c < 0)
                mpz_addmul_ui(slot[i - phi + m].get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(-c));
        }
    }
}

bool odd_prime_factor_once(long c, int two_d) {
    long n = c;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (p != 2 && e == 1 && two_d % p != 0) return true;
    }
    return n > 2 && two_d % n != 0;
}

} // namespace

// ---------------------------------------------------------------------------
// TowerField

TowerField::TowerField(int d, long radicand, bool naive) : d_(d), radicand_(radicand) {
    if (d < kMinDegree || d > kMaxDegree)
        throw std::invalid_argument("degree d must lie in [3, 64], got " + std::to_string(d));
    if (radicand < 2) throw std::invalid_argument("radicand must be at least 2");
    if (!naive && radicand != 2 && !odd_prime_factor_once(radicand, 2 * d))
        throw std::invalid_argument("radicand " + std::to_string(radicand) +
                                    " needs an odd prime factor of multiplicity one coprime to 2d");
    phi_ = euler_phi(2 * d);
    cyclo_ = cyclotomic_polynomial(2 * d);
    t_rel_.assign(phi_, mpz_class(0));
    if (!naive && radicand == 2 && d % 4 == 0) {
        deg_t_ = d / 2;
        // sqrt(2) = u^(d/4) - u^(3d/4)
        std::vector<mpz_class> buf(std::max(2 * d, phi_), mpz_class(0));
        buf[d / 4] += 1;
        buf[3 * d / 4] -= 1;
        reduce_u(buf.data(), static_cast<int>(buf.size()), cyclo_);
        for (int i = 0; i < phi_; ++i) t_rel_[i] = buf[i];
    } else {
        deg_t_ = d;
        t_rel_[0] = radicand;
    }
}

FieldPtr TowerField::get(int d, long radicand) {
    static std::mutex mutex;
    static std::map<std::pair<int, long>, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(d, radicand);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto field = std::make_shared<TowerField>(d, radicand);
    field->self_ = field;
    FieldPtr result = field;
    result->sanity_guard();
    cache.emplace(key, result);
    return result;
}

FieldPtr TowerField::make_naive(int d, long radicand) {
    auto field = std::make_shared<TowerField>(d, radicand, true);
    field->self_ = field;
    return field;
}

FieldPtr TowerField::self() const {
    FieldPtr p = self_.lock();
    if (!p) throw std::logic_error("TowerField must be created through TowerField::get");
    return p;
}

void TowerField::sanity_guard() const {
    // Inversion of random elements; a reducible t-relation surfaces as a
    // ZeroDivisor naming the factor.
    std::mt19937_64 rng(0x5eed0000ULL + static_cast<unsigned>(d_) * 131 + static_cast<unsigned long>(radicand_));
    FieldPtr f = self();
    FieldElement one_el = one();
    for (int trial = 0; trial < 50; ++trial) {
        double density = trial < 25 ? 0.3 : 0.8;
        if (dimension() > 64) density = std::min(density, 6.0 / dimension());
        FieldElement a = random_element(f, rng, dimension() > 64 ? 2 : 5, density);
        if (a.is_zero()) continue;
        if (!(a * a.inverse() == one_el))
            throw std::logic_error("field sanity guard: a * a^-1 != 1 for " + describe());
    }
    // Over Q(u) every factor of t^n - r is a binomial t^m - b with b^(n/m) = r.
    // Random elements almost never meet such a factor, so probe small b directly.
    const double pi = std::acos(-1.0);
    const int period = 2 * d_;
    const double rel_value = std::pow(static_cast<double>(radicand_), static_cast<double>(deg_t_) / d_);
    FieldElement rel = t().pow(deg_t_);
    auto probe = [&](int m, const FieldElement& b) {
        if (!(b.pow(deg_t_ / m) == rel)) return;
        (void)(t().pow(m) - b).inverse();
        throw std::logic_error("field sanity guard: t^" + std::to_string(m) + " - b divides the t-relation");
    };
    for (int m = 1; m < deg_t_; ++m) {
        if (deg_t_ % m != 0) continue;
        const int q = deg_t_ / m;
        auto close = [&](std::complex<double> z) {
            return std::abs(std::pow(z, q) - rel_value) < 1e-9 * (1 + rel_value);
        };
        for (int a = 0; a < period; ++a) {
            std::complex<double> ua = std::polar(1.0, pi * a / d_);
            for (int n : {1, -1, 2, -2})
                if (close(static_cast<double>(n) * ua)) probe(m, u_pow(a) * n);
            for (int b = a + 1; b < period; ++b) {
                std::complex<double> ub = std::polar(1.0, pi * b / d_);
                if (close(ua + ub)) probe(m, u_pow(a) + u_pow(b));
                if (close(ua - ub)) probe(m, u_pow(a) - u_pow(b));
            }
        }
    }
}

std::string TowerField::describe() const {
    std::ostringstream out;
    out << "Q(u, t), u^" << d_ << " = -1, ";
    if (deg_t_ == d_)
        out << "t^" << d_ << " = " << radicand_;
    else
        out << "t^" << deg_t_ << " = u^" << d_ / 4 << " - u^" << 3 * d_ / 4;
    out << " [dim " << dimension() << "]";
    return out.str();
}

const ComplexBall& TowerField::basis_embedding(int i, int j, long precision_bits) const {
    std::lock_guard<std::mutex> lock(embed_mutex_);
    auto it = embed_cache_.find(precision_bits);
    if (it == embed_cache_.end()) {
        std::vector<ComplexBall> balls;
        balls.reserve(dimension());
        for (int jj = 0; jj < deg_t_; ++jj) {
            mpz_class power;
            mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(radicand_), static_cast<unsigned long>(jj));
            ComplexBall tpow = ComplexBall::real_root(power, static_cast<unsigned long>(d_), precision_bits);
            for (int ii = 0; ii < phi_; ++ii)
                balls.push_back(ComplexBall::unit_root(ii, d_, precision_bits) * tpow);
        }
        it = embed_cache_.emplace(precision_bits, std::move(balls)).first;
    }
    return it->second[static_cast<std::size_t>(j * phi_ + i)];
}

FieldElement TowerField::zero() const { return FieldElement(self()); }
FieldElement TowerField::one() const { return FieldElement::from_rational(self(), 1); }
FieldElement TowerField::rational(const mpq_class& q) const { return FieldElement::from_rational(self(), q); }
FieldElement TowerField::u() const { return FieldElement::basis(self(), 1, 0); }
FieldElement TowerField::t() const { return FieldElement::basis(self(), 0, 1); }
FieldElement TowerField::zeta() const { return u_pow(2); }
FieldElement TowerField::zeta_pow(long k) const { return u_pow(2 * k); }

FieldElement TowerField::u_pow(long k) const {
    long period = 2L * d_;
    long e = ((k % period) + period) % period;
    if (e < phi_) return FieldElement::basis(self(), static_cast<int>(e), 0);
    std::vector<mpz_class> buf(static_cast<std::size_t>(e + 1), mpz_class(0));
    buf[static_cast<std::size_t>(e)] = 1;
    reduce_u(buf.data(), static_cast<int>(buf.size()), cyclo_);
    FieldElement acc(self());
    for (int i = 0; i < phi_; ++i)
        if (sgn(buf[i]) != 0) acc += FieldElement::basis(self(), i, 0) * mpq_class(buf[i]);
    return acc;
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(FieldPtr field) : field_(std::move(field)), den_(1) {
    if (!field_) throw std::invalid_argument("FieldElement needs a field");
    num_.assign(static_cast<std::size_t>(field_->dimension()), mpz_class(0));
}

FieldElement::FieldElement(FieldPtr field, std::vector<mpz_class> num, mpz_class den)
    : field_(std::move(field)), num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

FieldElement FieldElement::basis(FieldPtr field, int i, int j) {
    if (i < 0 || i >= field->cyclotomic_degree() || j < 0 || j >= field->t_degree())
        throw std::out_of_range("basis index outside normal form");
    FieldElement e(std::move(field));
    e.num_[static_cast<std::size_t>(j * e.field_->cyclotomic_degree() + i)] = 1;
    return e;
}

FieldElement FieldElement::from_rational(FieldPtr field, const mpq_class& q) {
    FieldElement e(std::move(field));
    e.num_[0] = q.get_num();
    e.den_ = q.get_den();
    e.normalize();
    return e;
}

int FieldElement::degree() const noexcept { return field_->degree(); }

void FieldElement::normalize() {
    if (sgn(den_) < 0) {
        den_ = -den_;
        for (auto& n : num_) n = -n;
    }
    mpz_class g = den_;
    bool any = false;
    for (const auto& n : num_) {
        if (sgn(n) == 0) continue;
        any = true;
        if (g == 1) break;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    if (!any) {
        den_ = 1;
        return;
    }
    if (g != 1) {
        for (auto& n : num_)
            if (sgn(n) != 0) mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
}

void FieldElement::check_same_field(const FieldElement& o) const {
    if (field_ != o.field_)
        throw DegreeMismatch("operands live in different fields: " + field_->describe() + " vs " +
                             o.field_->describe());
}

mpq_class FieldElement::coeff(int i, int j) const {
    mpq_class q(num_[static_cast<std::size_t>(j * field_->cyclotomic_degree() + i)], den_);
    q.canonicalize();
    return q;
}

bool FieldElement::is_zero() const {
    return std::all_of(num_.begin(), num_.end(), [](const mpz_class& n) { return sgn(n) == 0; });
}

bool FieldElement::is_rational() const {
    return std::all_of(num_.begin() + 1, num_.end(), [](const mpz_class& n) { return sgn(n) == 0; });
}

bool FieldElement::is_one() const { return is_rational() && den_ == 1 && num_[0] == 1; }

mpq_class FieldElement::rational_value() const {
    mpq_class q(num_[0], den_);
    q.canonicalize();
    return q;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_field(o);
    std::vector<mpz_class> num(num_.size());
    if (den_ == o.den_) {
        for (std::size_t i = 0; i < num.size(); ++i) num[i] = num_[i] + o.num_[i];
        return FieldElement(field_, std::move(num), den_);
    }
    for (std::size_t i = 0; i < num.size(); ++i) num[i] = num_[i] * o.den_ + o.num_[i] * den_;
    return FieldElement(field_, std::move(num), den_ * o.den_);
}

FieldElement FieldElement::operator-() const {
    FieldElement r(*this);
    for (auto& n : r.num_) n = -n;
    return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const { return *this + (-o); }

FieldElement& FieldElement::operator+=(const FieldElement& o) { return *this = *this + o; }
FieldElement& FieldElement::operator-=(const FieldElement& o) { return *this = *this - o; }
FieldElement& FieldElement::operator*=(const FieldElement& o) { return *this = *this * o; }

FieldElement FieldElement::operator+(long q) const { return *this + FieldElement::from_rational(field_, q); }

FieldElement FieldElement::operator*(const mpq_class& q) const {
    std::vector<mpz_class> num(num_.size());
    for (std::size_t i = 0; i < num.size(); ++i) num[i] = num_[i] * q.get_num();
    return FieldElement(field_, std::move(num), den_ * q.get_den());
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_field(o);
    const TowerField& f = *field_;
    const int phi = f.cyclotomic_degree();
    const int dt = f.t_degree();
    const int width = 2 * phi - 1;

    std::vector<int> nza, nzb;
    for (int k = 0; k < static_cast<int>(num_.size()); ++k) {
        if (sgn(num_[k]) != 0) nza.push_back(k);
        if (sgn(o.num_[k]) != 0) nzb.push_back(k);
    }
    if (nza.empty() || nzb.empty()) return FieldElement(field_);

    const int slots = 2 * dt - 1;
    std::vector<mpz_class> wide(static_cast<std::size_t>(slots * width));
    for (int a : nza) {
        const int ja = a / phi, ia = a % phi;
        for (int b : nzb) {
            const int jb = b / phi, ib = b % phi;
            mpz_addmul(wide[static_cast<std::size_t>((ja + jb) * width + ia + ib)].get_mpz_t(),
                       num_[a].get_mpz_t(), o.num_[b].get_mpz_t());
        }
    }

    const auto& cyclo = f.cyclotomic_poly();
    const auto& trel = f.t_relation();
    for (int j = slots - 1; j >= dt; --j) {
        mpz_class* high = &wide[static_cast<std::size_t>(j * width)];
        reduce_u(high, width, cyclo);
        mpz_class* low = &wide[static_cast<std::size_t>((j - dt) * width)];
        for (int i = 0; i < phi; ++i) {
            if (sgn(high[i]) == 0) continue;
            for (int m = 0; m < phi; ++m) {
                if (sgn(trel[m]) == 0) continue;
                mpz_addmul(low[i + m].get_mpz_t(), high[i].get_mpz_t(), trel[m].get_mpz_t());
            }
        }
    }
    std::vector<mpz_class> num(num_.size());
    for (int j = 0; j < dt; ++j) {
        mpz_class* slot = &wide[static_cast<std::size_t>(j * width)];
        reduce_u(slot, width, cyclo);
        for (int i = 0; i < phi; ++i) num[static_cast<std::size_t>(j * phi + i)] = std::move(slot[i]);
    }
    return FieldElement(field_, std::move(num), den_ * o.den_);
}

FieldElement FieldElement::t_conjugate(int k) const {
    // t -> xi^k t with xi = u^(2d/deg_t), a primitive deg_t-th root of unity.
    const TowerField& f = *field_;
    const int phi = f.cyclotomic_degree();
    const int dt = f.t_degree();
    const int period = 2 * f.degree();
    const int step = period / dt;
    std::vector<mpz_class> num(num_.size());
    std::vector<mpz_class> buf(static_cast<std::size_t>(phi + period));
    for (int j = 0; j < dt; ++j) {
        const int shift = static_cast<int>((static_cast<long>(step) * k * j) % period);
        for (auto& b : buf) b = 0;
        bool any = false;
        for (int i = 0; i < phi; ++i) {
            const mpz_class& c = num_[static_cast<std::size_t>(j * phi + i)];
            if (sgn(c) == 0) continue;
            buf[static_cast<std::size_t>(i + shift)] = c;
            any = true;
        }
        if (!any) continue;
        reduce_u(buf.data(), static_cast<int>(buf.size()), f.cyclotomic_poly());
        for (int i = 0; i < phi; ++i) num[static_cast<std::size_t>(j * phi + i)] = buf[static_cast<std::size_t>(i)];
    }
    return FieldElement(field_, std::move(num), den_);
}

FieldElement FieldElement::u_conjugate(int m) const {
    // u -> u^m on elements of Q(u); m must be coprime to 2d.
    const TowerField& f = *field_;
    const int phi = f.cyclotomic_degree();
    const int period = 2 * f.degree();
    std::vector<mpz_class> buf(static_cast<std::size_t>(period));
    for (int i = 0; i < phi; ++i) {
        const mpz_class& c = num_[static_cast<std::size_t>(i)];
        if (sgn(c) != 0) buf[static_cast<std::size_t>((static_cast<long>(i) * m) % period)] += c;
    }
    reduce_u(buf.data(), period, f.cyclotomic_poly());
    std::vector<mpz_class> num(num_.size());
    for (int i = 0; i < phi; ++i) num[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(i)];
    return FieldElement(field_, std::move(num), den_);
}

bool FieldElement::in_cyclotomic_part() const {
    const int phi = field_->cyclotomic_degree();
    return std::all_of(num_.begin() + phi, num_.end(), [](const mpz_class& n) { return sgn(n) == 0; });
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw ZeroInput("inverse of zero");
    if (is_rational()) return FieldElement::from_rational(field_, 1 / rational_value());
    // a^-1 = (product of the other conjugates) / norm, first over Q(u)
    // along t -> xi^k t, then over Q along u -> u^m.
    const TowerField& f = *field_;
    // prod_{k<n} sigma^k(a) by binary splitting: P(m+n) = P(m) * sigma^m(P(n)).
    const int n = f.t_degree() - 1;
    FieldElement acc = FieldElement::from_rational(field_, 1);
    int acc_len = 0;
    FieldElement block = *this;
    int block_len = 1;
    for (int bits = n; bits > 0; bits >>= 1) {
        if (bits & 1) {
            acc = acc_len == 0 ? block : acc * block.t_conjugate(acc_len);
            acc_len += block_len;
        }
        if (bits > 1) {
            block = block * block.t_conjugate(block_len);
            block_len *= 2;
        }
    }
    FieldElement cof = acc.t_conjugate(1);
    FieldElement norm = *this * cof;
    if (!norm.in_cyclotomic_part()) throw std::logic_error("relative norm left the cyclotomic field");
    if (norm.is_zero()) euclid_inverse();
    if (!norm.is_rational()) {
        const int period = 2 * f.degree();
        FieldElement ccof = FieldElement::from_rational(field_, 1);
        for (int m = 2; m < period; ++m)
            if (std::gcd(m, period) == 1) ccof *= norm.u_conjugate(m);
        cof *= ccof;
        norm *= ccof;
        if (!norm.is_rational()) throw std::logic_error("absolute norm is not rational");
        if (norm.is_zero()) euclid_inverse();
    }
    return cof * (1 / norm.rational_value());
}

FieldElement FieldElement::euclid_inverse() const {
    const TowerField& f = *field_;
    const int phi = f.cyclotomic_degree();
    const int dt = f.t_degree();

    CycloRing ring(f.cyclotomic_poly());
    TPoly a(static_cast<std::size_t>(dt));
    for (int j = 0; j < dt; ++j) {
        QPoly c(static_cast<std::size_t>(phi));
        for (int i = 0; i < phi; ++i) c[i] = coeff(i, j);
        trim(c);
        a[j] = std::move(c);
    }
    ttrim(a);

    TPoly modulus(static_cast<std::size_t>(dt + 1));
    QPoly rel;
    for (const auto& c : f.t_relation()) rel.emplace_back(-c);
    trim(rel);
    modulus[0] = rel;
    modulus[dt] = QPoly{mpq_class(1)};

    TPoly r0 = modulus, r1 = a;
    TPoly s0, s1{QPoly{mpq_class(1)}};
    while (tdeg(r1) > 0) {
        TPoly q, r;
        tdivmod(ring, r0, r1, q, r);
        r0 = std::move(r1);
        r1 = std::move(r);
        TPoly s = tsub(ring, s0, tmul(ring, q, s1));
        s0 = std::move(s1);
        s1 = std::move(s);
        if (r1.empty()) {
            QPoly lead_inv = ring.inverse(r0.back());
            for (auto& c : r0) c = ring.mul(c, lead_inv);
            throw ZeroDivisor("tower inversion", tpoly_to_string(r0));
        }
    }
    QPoly c_inv = ring.inverse(r1[0]);
    for (auto& c : s1) c = ring.mul(c, c_inv);

    mpz_class common = 1;
    for (const auto& c : s1)
        for (const auto& q : c) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> num(num_.size());
    for (std::size_t j = 0; j < s1.size(); ++j)
        for (std::size_t i = 0; i < s1[j].size(); ++i) {
            mpq_class scaled = s1[j][i] * common;
            num[j * static_cast<std::size_t>(phi) + i] = scaled.get_num();
        }
    return FieldElement(field_, std::move(num), common);
}

FieldElement FieldElement::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    FieldElement result = FieldElement::from_rational(field_, 1);
    FieldElement base = *this;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

bool FieldElement::operator==(const FieldElement& o) const {
    if (field_ != o.field_) return false;
    return den_ == o.den_ && num_ == o.num_;
}

int FieldElement::compare(const FieldElement& o) const {
    if (field_ != o.field_) return field_->degree() < o.field_->degree() ? -1 : 1;
    int c = cmp(den_, o.den_);
    if (c != 0) return c < 0 ? -1 : 1;
    for (std::size_t i = 0; i < num_.size(); ++i) {
        c = cmp(num_[i], o.num_[i]);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
}

std::size_t FieldElement::hash() const {
    auto mix = [](std::size_t h, const mpz_class& z) {
        std::size_t v = mpz_size(z.get_mpz_t()) ? mpz_getlimbn(z.get_mpz_t(), 0) : 0;
        v ^= static_cast<std::size_t>(sgn(z) + 1) << 61;
        return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    };
    std::size_t h = mix(0, den_);
    for (const auto& n : num_) h = mix(h, n);
    return h;
}

ComplexBall FieldElement::embed(long precision_bits) const {
    if (precision_bits < 53) throw std::invalid_argument("embedding precision must be at least 53 bits");
    const int phi = field_->cyclotomic_degree();
    ComplexBall acc(precision_bits);
    for (std::size_t k = 0; k < num_.size(); ++k) {
        if (sgn(num_[k]) == 0) continue;
        mpq_class q(num_[k], den_);
        q.canonicalize();
        int i = static_cast<int>(k) % phi, j = static_cast<int>(k) / phi;
        acc = acc + ComplexBall::from_rational(q, precision_bits) * field_->basis_embedding(i, j, precision_bits);
    }
    return acc;
}

nlohmann::json FieldElement::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    const int phi = field_->cyclotomic_degree();
    for (std::size_t k = 0; k < num_.size(); ++k) {
        if (sgn(num_[k]) == 0) continue;
        mpq_class q(num_[k], den_);
        q.canonicalize();
        terms.push_back({static_cast<int>(k) % phi, static_cast<int>(k) / phi, rational_to_string(q)});
    }
    nlohmann::json j = {{"d", field_->degree()}, {"terms", terms}};
    if (field_->radicand() != 2) j["radicand"] = field_->radicand();
    return j;
}

FieldElement FieldElement::from_json(const nlohmann::json& j) {
    long radicand = j.contains("radicand") ? j.at("radicand").get<long>() : 2;
    FieldPtr field = TowerField::get(j.at("d").get<int>(), radicand);
    FieldElement acc(field);
    for (const auto& term : j.at("terms")) {
        int i = term.at(0).get<int>(), jj = term.at(1).get<int>();
        acc += FieldElement::basis(field, i, jj) * rational_from_string(term.at(2).get<std::string>());
    }
    return acc;
}

std::string FieldElement::to_string() const {
    std::ostringstream out;
    const int phi = field_->cyclotomic_degree();
    bool first = true;
    for (std::size_t k = 0; k < num_.size(); ++k) {
        if (sgn(num_[k]) == 0) continue;
        mpq_class q(num_[k], den_);
        q.canonicalize();
        int i = static_cast<int>(k) % phi, j = static_cast<int>(k) / phi;
        bool neg = sgn(q) < 0;
        if (neg) q = -q;
        if (first)
            out << (neg ? "-" : "");
        else
            out << (neg ? " - " : " + ");
        first = false;
        bool unit = q == 1 && (i > 0 || j > 0);
        if (!unit) out << q.get_str();
        if (i > 0) out << (unit ? "" : "*") << "u" << (i > 1 ? "^" + std::to_string(i) : "");
        if (j > 0) out << ((unit && i == 0) ? "" : "*") << "t" << (j > 1 ? "^" + std::to_string(j) : "");
    }
    return first ? "0" : out.str();
}

FieldElement random_element(const FieldPtr& field, std::mt19937_64& rng, int max_abs, double density) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> numer(-max_abs, max_abs);
    std::uniform_int_distribution<int> denom(1, max_abs);
    FieldElement acc(field);
    for (int j = 0; j < field->t_degree(); ++j)
        for (int i = 0; i < field->cyclotomic_degree(); ++i) {
            if (coin(rng) >= density) continue;
            mpq_class q(numer(rng), denom(rng));
            q.canonicalize();
            acc += FieldElement::basis(field, i, j) * q;
        }
    return acc;
}

} // namespace fermat
