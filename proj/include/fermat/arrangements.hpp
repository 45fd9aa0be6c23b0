#pragma once

#include "fermat/fermat_geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fermat {

// One line of a named family, e.g. B_z with index j: x - zeta^j y.
struct LabeledLine {
    std::string family;  // "A", "B", "M", "N" or "xyz"
    char sub;            // 'x', 'y', 'z'; for the triangle the vanishing variable
    int index;           // j for B, k for A/M/N, 0 for the triangle
    HomPoly line;        // canonical
    std::string label() const;
};

class LineArrangement {
public:
    LineArrangement(std::string label, std::vector<LabeledLine> lines);

    const std::string& label() const noexcept { return label_; }
    const std::vector<LabeledLine>& lines() const noexcept { return lines_; }
    std::size_t size() const noexcept { return lines_.size(); }
    HomPoly product() const;

private:
    std::string label_;
    std::vector<LabeledLine> lines_;
};

// Family lines. Subscript letter names the variable missing from the
// defining binary form (B_z = V(x^d - y^d), M_x = V(z^d + 2y^d), ...).
std::vector<LabeledLine> family_lines(const FieldPtr& K, char family, char sub);
std::vector<LabeledLine> triangle_lines(const FieldPtr& K);

// Labels: concatenations of "A", "B", "M", "N" (optionally followed by a
// subscript x, y or z), "xyz" for the coordinate triangle; '+' separators
// are allowed. A leading or embedded "F" requests the Fermat curve as an
// extra member and is reported through `with_fermat`.
LineArrangement build_arrangement(const std::string& label, int d, bool* with_fermat = nullptr);

// The 9d lines of B, M and N in a fixed order: B_x, B_y, B_z, M_x, ..., N_z.
std::vector<LabeledLine> grid_lines(const FieldPtr& K);

struct CensusEntry {
    ProjPoint point;
    int multiplicity;           // members through the point, the curve included
    bool ordinary;
    bool on_curve;              // the Fermat curve passes through the point
    std::vector<int> line_ids;  // indices into the arrangement
};

struct Census {
    std::vector<CensusEntry> entries;  // sorted by point
    // Sum of int_mult(F, L, p) over the listed points, per line; equals d when
    // the curve's intersections are complete. Empty without the curve.
    std::vector<int> curve_line_mult;
    // Multiplicity -> number of points.
    std::map<int, int> histogram() const;
};

Census census(const LineArrangement& arr, const FermatCurve* curve = nullptr);

// Sum of (m - 1)^2; throws NonOrdinary on a non-ordinary entry.
long tjurina_total(const Census& c);

struct FreenessVerdict {
    long degree_hat;
    long tau;
    long discriminant;  // 4 tau - 3 (degree_hat - 1)^2
    std::optional<std::pair<long, long>> exponents;
    bool free;
    std::string sign() const;
};

FreenessVerdict freeness_test(long degree_hat, long tau);

// a P_x + b P_y + c P_z == 0
bool verify_syzygy(const std::array<HomPoly, 3>& triple, const HomPoly& P);

struct CollinearLine {
    HomPoly line;
    std::vector<int> points;  // indices into the sextactic list
    bool mixed;               // points from more than one cluster
};

struct CollinearResult {
    std::vector<CollinearLine> lines;
    std::size_t triples_tested = 0;
    std::size_t exact_checks = 0;
};

constexpr int kCollinearMaxDegree = 8;

// Every line through at least three sextactic points, by exhaustive triple
// tests: a ball-arithmetic determinant filter rules out most triples, the
// rest are decided exactly. `progress` gets (done, total) per outer index.
CollinearResult collinear_sextactic(const FermatCurve& C, int jobs = 1, long precision_bits = 128,
                                    const std::function<void(std::size_t, std::size_t)>& progress = {});

} // namespace fermat
