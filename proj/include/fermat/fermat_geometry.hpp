#pragma once

#include "fermat/polyring.hpp"

#include <random>
#include <string>
#include <vector>

namespace fermat {

// Which B-line family a sextactic point sits on: cluster z lies on x^d = y^d,
// cluster y on z^d = x^d, cluster x on y^d = z^d.
enum class Cluster { z, y, x };

std::string cluster_name(Cluster c);
Cluster cluster_from_name(const std::string& s);

struct SextacticPoint {
    Cluster cluster;
    int j;  // 0 <= j < d
    int k;  // odd, 0 < k < 2d
    ProjPoint point;
};

class FermatCurve {
public:
    explicit FermatCurve(FieldPtr field);
    explicit FermatCurve(int d) : FermatCurve(TowerField::get(d)) {}

    int degree() const noexcept { return d_; }
    int genus() const noexcept { return (d_ - 1) * (d_ - 2) / 2; }
    const FieldPtr& field() const noexcept { return field_; }
    const HomPoly& poly() const noexcept { return poly_; }
    const HomPoly& hessian() const noexcept { return hessian_; }

    bool contains(const ProjPoint& p) const;
    HomPoly tangent_line(const ProjPoint& p) const;
    std::vector<ProjPoint> inflection_points() const;

    // Determinant of the power matrix with rows (v^(5d-9), v^(4d-9), v^(3d-9)).
    HomPoly two_hessian() const;
    HomPoly two_hessian_factored() const;

    // Sextactic points need t = 2^(1/d), so only the radicand-2 field has them.
    SextacticPoint sextactic_point(Cluster c, int j, int k) const;
    std::vector<SextacticPoint> sextactic_points() const;
    long sextactic_count_formula() const;

    // Cayley covariants built from the Hessian matrix of F and the Hessian H.
    HomPoly omega() const;
    HomPoly psi() const;

    HomPoly osculating_conic_cayley(const ProjPoint& p) const;
    HomPoly osculating_conic_closed(const ProjPoint& p) const;
    HomPoly hyperosculating_conic(const SextacticPoint& s) const;

private:
    FieldPtr field_;
    int d_;
    HomPoly poly_;
    HomPoly hessian_;

    void require_osculating(const ProjPoint& p) const;
};

// The scalar c with two_hessian() = c * two_hessian_factored(); 0 if the
// two are not proportional.
int two_hessian_sign(const FermatCurve& C);

// Points (zeta^i a : b : u^k t) of F_d, with k odd, moved by a random
// coordinate permutation. They live over Q(u, c^(1/d)) with c = a^d + b^d,
// which is why each sample carries its own field.
struct CurvePointSample {
    FieldPtr field;
    ProjPoint point;
    long a;
    long b;
};

std::vector<CurvePointSample> random_curve_points(int d, int count, std::mt19937_64& rng);

// Coefficient-level comparison of two conics up to scale; empty when
// proportional, otherwise one line per monomial whose minor fails.
std::vector<std::string> conic_diff(const HomPoly& a, const HomPoly& b);

} // namespace fermat
