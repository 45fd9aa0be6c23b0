#pragma once

#include "fermat/complex_ball.hpp"

#include <gmpxx.h>
#include "json.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

namespace fermat {

class TowerField;
class FieldElement;
using FieldPtr = std::shared_ptr<const TowerField>;

// K = Q(u, t) with u a primitive 2d-th root of unity and t^d = c.
//
// Normal form: u-exponents below phi(2d) (reduction by the cyclotomic
// polynomial), t-exponents below deg_t. For c = 2 and 4 | d the cyclotomic
// part already contains sqrt(2) = u^(d/4) - u^(3d/4), so t is reduced by
// t^(d/2) - sqrt(2) instead of t^d - 2. The embedding sends u to
// exp(i*pi/d) and t to the real positive c^(1/d).
//
// The radicand defaults to 2. Other radicands c are accepted only when an
// odd prime q with q not dividing 2d divides c exactly once; t^d - c is
// then irreducible over Q(u) (Eisenstein at a prime above q).
class TowerField {
public:
    static constexpr int kMinDegree = 3;
    static constexpr int kMaxDegree = 64;

    // Shared instance per (d, c). Runs the field sanity guard on first use.
    static FieldPtr get(int d, long radicand = 2);
    // Always reduces t by t^d - c, skipping validation, caching and the
    // guard. Only useful to exhibit what the guard catches.
    static FieldPtr make_naive(int d, long radicand);

    // Inverts ~50 random elements; throws ZeroDivisor if the quotient ring
    // is not a field.
    void sanity_guard() const;

    int degree() const noexcept { return d_; }
    long radicand() const noexcept { return radicand_; }
    int cyclotomic_degree() const noexcept { return phi_; }
    int t_degree() const noexcept { return deg_t_; }
    int dimension() const noexcept { return phi_ * deg_t_; }

    // Coefficients of the 2d-th cyclotomic polynomial, low to high, monic.
    const std::vector<long>& cyclotomic_poly() const noexcept { return cyclo_; }
    // t^deg_t equals this u-polynomial (integer coefficients, length phi).
    const std::vector<mpz_class>& t_relation() const noexcept { return t_rel_; }

    std::string describe() const;

    // Embedding of the basis element u^i t^j, cached per precision.
    const ComplexBall& basis_embedding(int i, int j, long precision_bits) const;

    // Generators in normal form.
    FieldElement u() const;
    FieldElement zeta() const;
    FieldElement t() const;
    FieldElement zero() const;
    FieldElement one() const;
    FieldElement rational(const mpq_class& q) const;
    // u^k for any integer k (uses u^(2d) = 1).
    FieldElement u_pow(long k) const;
    FieldElement zeta_pow(long k) const;

    // TowerField objects are only created through get().
    TowerField(int d, long radicand, bool naive = false);

private:
    int d_;
    long radicand_;
    int phi_;
    int deg_t_;
    std::vector<long> cyclo_;
    std::vector<mpz_class> t_rel_;
    std::weak_ptr<const TowerField> self_;

    mutable std::mutex embed_mutex_;
    mutable std::map<long, std::vector<ComplexBall>> embed_cache_;

    FieldPtr self() const;
};

// Element of a TowerField: sum of (num[idx] / den) u^i t^j with
// idx = j * phi + i. den > 0 and gcd(den, num...) = 1, so equal elements
// have identical representations.
class FieldElement {
public:
    explicit FieldElement(FieldPtr field);

    static FieldElement basis(FieldPtr field, int i, int j);
    static FieldElement from_rational(FieldPtr field, const mpq_class& q);

    const FieldPtr& field() const noexcept { return field_; }
    int degree() const noexcept;

    mpq_class coeff(int i, int j) const;
    const std::vector<mpz_class>& numerators() const noexcept { return num_; }
    const mpz_class& denominator() const noexcept { return den_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    // Valid only when is_rational().
    mpq_class rational_value() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);

    FieldElement operator*(const mpq_class& q) const;
    FieldElement operator*(long q) const { return *this * mpq_class(q); }
    FieldElement operator+(long q) const;
    FieldElement operator-(long q) const { return *this + (-q); }

    // Throws ZeroInput for zero, ZeroDivisor if the gcd step finds a factor.
    FieldElement inverse() const;
    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }
    FieldElement pow(long n) const;

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    // Deterministic total order on normal forms.
    int compare(const FieldElement& o) const;
    std::size_t hash() const;

    ComplexBall embed(long precision_bits) const;

    nlohmann::json to_json() const;
    static FieldElement from_json(const nlohmann::json& j);
    std::string to_string() const;

private:
    FieldPtr field_;
    std::vector<mpz_class> num_;
    mpz_class den_;

    FieldElement(FieldPtr field, std::vector<mpz_class> num, mpz_class den);

    void normalize();
    FieldElement t_conjugate(int k) const;
    FieldElement u_conjugate(int m) const;
    bool in_cyclotomic_part() const;
    // Extended Euclid over Q(u)[t]; used to name the factor when the norm vanishes.
    FieldElement euclid_inverse() const;
    void check_same_field(const FieldElement& o) const;
};

inline FieldElement operator*(long q, const FieldElement& a) { return a * q; }
inline FieldElement operator*(const mpq_class& q, const FieldElement& a) { return a * q; }

// Random element with small rational coefficients, used by the sanity
// guard and by property tests.
FieldElement random_element(const FieldPtr& field, std::mt19937_64& rng, int max_abs = 9,
                            double density = 0.5);

int euler_phi(int n);
// Integer coefficients of the n-th cyclotomic polynomial, low to high.
std::vector<long> cyclotomic_polynomial(int n);

std::string rational_to_string(const mpq_class& q);
mpq_class rational_from_string(const std::string& s);

} // namespace fermat
