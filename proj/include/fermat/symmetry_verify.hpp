#pragma once

#include "fermat/arrangements.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fermat {

// Monomial automorphism of P^2: g(p)_i = u^e[i] * p_perm[i]. Entries are
// roots of unity in mu(2d), stored as exponents of u modulo 2d.
class Automorphism {
public:
    Automorphism(FieldPtr field, std::array<int, 3> perm, std::array<int, 3> expo);

    static Automorphism identity(const FieldPtr& K);
    static Automorphism rho(const FieldPtr& K);     // (zeta x : y : z)
    static Automorphism varphi(const FieldPtr& K);  // (y : x : z)
    static Automorphism psi(const FieldPtr& K);     // (z : y : x)
    // Scales coordinate i by zeta.
    static Automorphism scale(const FieldPtr& K, int i);

    const FieldPtr& field() const noexcept { return field_; }
    const std::array<int, 3>& perm() const noexcept { return perm_; }
    const std::array<int, 3>& expo() const noexcept { return expo_; }

    std::array<std::array<FieldElement, 3>, 3> matrix() const;
    ProjPoint apply(const ProjPoint& p) const;
    // f composed with g.
    HomPoly pullback(const HomPoly& f) const;
    Automorphism operator*(const Automorphism& h) const;  // this after h
    Automorphism inverse() const;
    Automorphism pow(int n) const;

    // Projective normal form: the entry acting on z is 1.
    Automorphism normalized() const;
    bool operator==(const Automorphism& o) const;
    bool operator<(const Automorphism& o) const;

    std::string to_string() const;
    nlohmann::json to_json() const;

private:
    FieldPtr field_;
    std::array<int, 3> perm_;
    std::array<int, 3> expo_;
};

// The 6d^2 maps permutation o diag(zeta^a, zeta^b, 1), normalized.
std::vector<Automorphism> group_elements(const FieldPtr& K);

// Line fixed pointwise by g: some eigenvalue (a power of u) with a
// two-dimensional eigenspace.
std::optional<HomPoly> fixed_line(const Automorphism& g);

std::vector<ProjPoint> orbit(const ProjPoint& p, const Automorphism& g);

// Memoized osculating curves of degree 1 (tangent) and 2 (closed-form conic).
class OsculatingCache {
public:
    explicit OsculatingCache(const FermatCurve& C) : curve_(C) {}
    const HomPoly& get(const ProjPoint& p, int n);

private:
    const FermatCurve& curve_;
    std::map<std::pair<int, ProjPoint>, HomPoly> memo_;
};

// Restrictions to the fixed line of g of the degree-n osculating curves along
// the orbit of p are pairwise proportional. Throws NoFixedLine.
bool verify_invariant_intersection(const FermatCurve& C, const Automorphism& g, const ProjPoint& p, int n,
                                   OsculatingCache* cache = nullptr);

struct ConcurrencyReport {
    explicit ConcurrencyReport(const FieldPtr& K) : grid_line(K, 1), fixed_line(K, 1) {}
    std::string family;
    std::string grid_line_label;
    HomPoly grid_line;
    std::string automorphism;
    HomPoly fixed_line;
    std::vector<ProjPoint> points;
    std::vector<ProjPoint> common_points;
    int count = 0;
    nlohmann::json certificates = nlohmann::json::array();
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
    nlohmann::json to_json() const;
};

// The d sextactic points on a grid line, in sextactic order. Throws
// FewerPoints if the line does not carry d of them.
std::vector<SextacticPoint> points_on_line(const FermatCurve& C, const HomPoly& line);

// The coordinate scaling (by zeta) that permutes the given points, if any.
std::optional<Automorphism> orbit_scaling(const FieldPtr& K, const std::vector<ProjPoint>& pts);

ConcurrencyReport tangent_concurrency(const FermatCurve& C, const LabeledLine& grid_line);
ConcurrencyReport conic_common_points(const FermatCurve& C, const LabeledLine& grid_line);

struct PencilCertificate {
    HomPoly ell;
    int rank;                   // of the coefficient matrix of O1, O2, z * ell
    FieldElement residual_disc; // of O1 restricted to V(ell)
    nlohmann::json to_json() const;
};

// Degenerate member z * ell of the pencil of O_{j,k1}, O_{j,k2} (cluster z).
// Throws CertificationFailure when the rank or distinctness check fails.
PencilCertificate pencil_degenerate(const FermatCurve& C, int j, int k1, int k2);

} // namespace fermat
