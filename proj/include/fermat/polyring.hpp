#pragma once

#include "fermat/tower_field.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fermat {

using Exponent = std::array<int, 3>;

class ProjPoint;

// Homogeneous polynomial in x, y, z over a tower field.
class HomPoly {
public:
    using Terms = std::map<Exponent, FieldElement>;

    HomPoly(FieldPtr field, int deg);

    static HomPoly constant(const FieldElement& c);
    static HomPoly variable(FieldPtr field, int var);
    static HomPoly monomial(const FieldElement& c, const Exponent& e);
    // a x + b y + c z
    static HomPoly linear(const FieldElement& a, const FieldElement& b, const FieldElement& c);
    // x^d + y^d + z^d
    static HomPoly fermat(FieldPtr field, int d);

    const FieldPtr& field() const noexcept { return field_; }
    int deg() const noexcept { return deg_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    FieldElement coeff(const Exponent& e) const;
    void add_term(const Exponent& e, const FieldElement& c);

    HomPoly operator+(const HomPoly& o) const;
    HomPoly operator-(const HomPoly& o) const;
    HomPoly operator-() const;
    HomPoly operator*(const HomPoly& o) const;
    HomPoly operator*(const FieldElement& c) const;
    HomPoly operator*(long c) const;
    HomPoly& operator+=(const HomPoly& o) { return *this = *this + o; }
    HomPoly& operator-=(const HomPoly& o) { return *this = *this - o; }
    HomPoly& operator*=(const HomPoly& o) { return *this = *this * o; }
    HomPoly pow(int n) const;

    bool operator==(const HomPoly& o) const;
    bool operator!=(const HomPoly& o) const { return !(*this == o); }

    HomPoly partial(int var) const;
    FieldElement evaluate(const std::array<FieldElement, 3>& v) const;
    FieldElement evaluate(const ProjPoint& p) const;

    // Result g with g(X0, X1, X2) = f(X_perm[0], X_perm[1], X_perm[2]).
    HomPoly permute(const std::array<int, 3>& perm) const;
    // f(s0, s1, s2) for homogeneous substitutes of a common degree.
    HomPoly substitute(const std::array<HomPoly, 3>& s) const;
    // Exact quotient; throws std::domain_error if g does not divide f.
    HomPoly divide_exact(const HomPoly& g) const;

    nlohmann::json to_json() const;
    static HomPoly from_json(const nlohmann::json& j);
    std::string to_string() const;

private:
    FieldPtr field_;
    int deg_;
    Terms terms_;
};

HomPoly operator*(const FieldElement& c, const HomPoly& f);

HomPoly hessian(const HomPoly& f);
FieldElement det3(const std::array<std::array<FieldElement, 3>, 3>& m);
HomPoly det3(const std::array<std::array<HomPoly, 3>, 3>& m);

// Equal up to a nonzero scalar: every 2x2 minor of the coefficient pair vanishes.
bool proportional(const HomPoly& a, const HomPoly& b);

// Point of P^2 with first nonzero coordinate 1.
class ProjPoint {
public:
    ProjPoint(const FieldElement& x, const FieldElement& y, const FieldElement& z);
    explicit ProjPoint(const std::array<FieldElement, 3>& c) : ProjPoint(c[0], c[1], c[2]) {}

    const FieldElement& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::array<FieldElement, 3>& coords() const noexcept { return c_; }
    const FieldPtr& field() const noexcept { return c_[0].field(); }
    // Index of the coordinate equal to 1.
    int chart() const;

    bool operator==(const ProjPoint& o) const;
    bool operator!=(const ProjPoint& o) const { return !(*this == o); }
    bool operator<(const ProjPoint& o) const { return compare(o) < 0; }
    int compare(const ProjPoint& o) const;

    nlohmann::json to_json() const;
    std::string to_string() const;

private:
    std::array<FieldElement, 3> c_;
};

// Lines as degree-1 HomPolys.
std::array<FieldElement, 3> line_coeffs(const HomPoly& l);
HomPoly canonical_line(const HomPoly& l);
HomPoly join(const ProjPoint& p, const ProjPoint& q);
// Throws ZeroInput for proportional lines.
ProjPoint meet(const HomPoly& l1, const HomPoly& l2);
std::array<FieldElement, 3> cross(const std::array<FieldElement, 3>& a, const std::array<FieldElement, 3>& b);

// Truncated power series in s: coefficient vector, index = power.
using Series = std::vector<FieldElement>;

Series series_mul(const Series& a, const Series& b, int n);
Series series_inverse(const Series& a, int n);
int valuation(const Series& a);

// Local branch of f through a smooth point p: coordinate `chart` is 1,
// coordinate `param` is p[param] + s and coordinate `solved` is a power
// series in s, exact modulo s^order.
struct BranchSeries {
    ProjPoint base;
    int chart;
    int param;
    int solved;
    int order;
    std::array<Series, 3> coords;
};

BranchSeries branch_series(const HomPoly& f, const ProjPoint& p, int order);
// g composed with the branch, truncated at the branch order.
Series compose(const HomPoly& g, const BranchSeries& branch);

// Intersection multiplicity of f and g at p (p smooth on f).
int int_mult(const HomPoly& f, const HomPoly& g, const ProjPoint& p);

struct ResultantOrder {
    int order;
    std::uint64_t seed;
    int attempts;
};

// Order of the resultant at the image of p after a random rational change of
// coordinates. Retries with consecutive seeds on GenericityFailure.
ResultantOrder resultant_order(const HomPoly& f, const HomPoly& g, const ProjPoint& p,
                               std::uint64_t seed = 1, int max_attempts = 8);

// Univariate polynomials over the field, low to high.
using UPoly = std::vector<FieldElement>;

int udeg(const UPoly& a);
void utrim(UPoly& a);
void udivmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
UPoly ugcd(UPoly a, UPoly b);
FieldElement uresultant(UPoly a, UPoly b);
FieldElement ueval(const UPoly& a, const FieldElement& x);

// Binary form sum c[i] s^(deg-i) t^i.
struct BinaryForm {
    int deg;
    std::vector<FieldElement> c;
};

// Kernel basis (v1, v2) of the line: the pivot is the first nonzero
// coefficient, the two free coordinates are set to unit vectors in order.
std::array<std::array<FieldElement, 3>, 2> line_parametrization(const HomPoly& l);
BinaryForm restrict_to_line(const HomPoly& c, const HomPoly& l);
FieldElement disc2(const BinaryForm& q);
bool proportional(const BinaryForm& a, const BinaryForm& b);

} // namespace fermat
