#include "fermat/arrangements.hpp"

#include "fermat/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace fermat {

namespace {

// Variables (a, b) of the binary form attached to a subscript: B_z lives in
// x, y; B_x in y, z; B_y in z, x.
std::pair<int, int> sub_pair(char sub) {
    switch (sub) {
    case 'z': return {0, 1};
    case 'x': return {1, 2};
    case 'y': return {2, 0};
    }
    throw std::invalid_argument(std::string("unknown subscript '") + sub + "'");
}

HomPoly two_term(const FieldPtr& K, int a, int b, const FieldElement& c) {
    std::array<FieldElement, 3> v{K->zero(), K->zero(), K->zero()};
    v[a] = K->one();
    v[b] = -c;
    return canonical_line(HomPoly::linear(v[0], v[1], v[2]));
}

ProjPoint line_key(const HomPoly& l) { return ProjPoint(line_coeffs(l)); }

} // namespace

std::string LabeledLine::label() const {
    if (family == "xyz") return std::string("V(") + sub + ")";
    return family + "_" + sub + "[" + std::to_string(index) + "]";
}

LineArrangement::LineArrangement(std::string label, std::vector<LabeledLine> lines)
    : label_(std::move(label)), lines_(std::move(lines)) {
    std::set<ProjPoint> seen;
    for (auto& l : lines_) {
        if (l.line.deg() != 1) throw DegreeMismatch("arrangement member " + l.label() + " is not a line");
        l.line = canonical_line(l.line);
        if (!seen.insert(line_key(l.line)).second)
            throw std::invalid_argument("duplicate line " + l.label() + " in arrangement " + label_);
    }
}

HomPoly LineArrangement::product() const {
    if (lines_.empty()) throw ZeroInput("empty arrangement");
    HomPoly p = lines_[0].line;
    for (std::size_t i = 1; i < lines_.size(); ++i) p *= lines_[i].line;
    return p;
}

std::vector<LabeledLine> family_lines(const FieldPtr& K, char family, char sub) {
    const int d = K->degree();
    auto [a, b] = sub_pair(sub);
    std::vector<LabeledLine> out;
    const std::string fam(1, family);
    switch (family) {
    case 'B':
        for (int j = 0; j < d; ++j) out.push_back({fam, sub, j, two_term(K, a, b, K->zeta_pow(j))});
        break;
    case 'A':
        for (int k = 1; k < 2 * d; k += 2) out.push_back({fam, sub, k, two_term(K, a, b, K->u_pow(k))});
        break;
    case 'N':
        for (int k = 1; k < 2 * d; k += 2) out.push_back({fam, sub, k, two_term(K, a, b, K->u_pow(-k) * K->t())});
        break;
    case 'M':
        // M uses the reversed pair: M_x = V(z^d + 2y^d) has lines z - u^-k t y.
        for (int k = 1; k < 2 * d; k += 2) out.push_back({fam, sub, k, two_term(K, b, a, K->u_pow(-k) * K->t())});
        break;
    default:
        throw std::invalid_argument(std::string("unknown line family '") + family + "'");
    }
    return out;
}

std::vector<LabeledLine> triangle_lines(const FieldPtr& K) {
    std::vector<LabeledLine> out;
    const char names[3] = {'x', 'y', 'z'};
    for (int i = 0; i < 3; ++i) out.push_back({"xyz", names[i], 0, HomPoly::variable(K, i)});
    return out;
}

LineArrangement build_arrangement(const std::string& label, int d, bool* with_fermat) {
    if (d < 3) throw std::invalid_argument("arrangements need d >= 3");
    auto K = TowerField::get(d);
    std::string s;
    for (char ch : label)
        if (ch != '+' && ch != ' ' && ch != '_' && ch != ',') s += ch;
    for (const std::string alias : {"triangle", "V(xyz)"}) {
        for (auto pos = s.find(alias); pos != std::string::npos; pos = s.find(alias)) s.replace(pos, alias.size(), "xyz");
    }
    if (s.empty()) throw std::invalid_argument("empty arrangement label");

    std::vector<LabeledLine> lines;
    bool fermat_member = false;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s.compare(i, 3, "xyz") == 0) {
            for (auto& l : triangle_lines(K)) lines.push_back(l);
            i += 3;
        } else if (s[i] == 'F') {
            fermat_member = true;
            ++i;
        } else if (std::string("ABMN").find(s[i]) != std::string::npos) {
            char fam = s[i++];
            bool has_sub = i < s.size() && std::string("xyz").find(s[i]) != std::string::npos && s.compare(i, 3, "xyz") != 0;
            if (has_sub) {
                for (auto& l : family_lines(K, fam, s[i])) lines.push_back(l);
                ++i;
            } else {
                for (char sub : {'x', 'y', 'z'})
                    for (auto& l : family_lines(K, fam, sub)) lines.push_back(l);
            }
        } else {
            throw std::invalid_argument("cannot parse arrangement label '" + label + "'");
        }
    }
    if (with_fermat) *with_fermat = fermat_member;
    else if (fermat_member) throw std::invalid_argument("label '" + label + "' includes the curve; pass with_fermat");
    if (lines.empty()) throw std::invalid_argument("arrangement '" + label + "' has no lines");
    return LineArrangement(label, std::move(lines));
}

std::vector<LabeledLine> grid_lines(const FieldPtr& K) {
    std::vector<LabeledLine> out;
    for (char fam : {'B', 'M', 'N'})
        for (char sub : {'x', 'y', 'z'})
            for (auto& l : family_lines(K, fam, sub)) out.push_back(l);
    return out;
}

std::map<int, int> Census::histogram() const {
    std::map<int, int> h;
    for (const auto& e : entries) ++h[e.multiplicity];
    return h;
}

Census census(const LineArrangement& arr, const FermatCurve* curve) {
    const auto& L = arr.lines();
    const int n = static_cast<int>(L.size());
    std::map<ProjPoint, std::set<int>> pts;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto& members = pts[meet(L[i].line, L[j].line)];
            members.insert(i);
            members.insert(j);
        }

    // Every pair of lines meets in exactly one listed point.
    long pairs = 0;
    for (const auto& [p, members] : pts) {
        long m = static_cast<long>(members.size());
        pairs += m * (m - 1) / 2;
        for (int i = 0; i < n; ++i) {
            bool on = L[i].line.evaluate(p).is_zero();
            if (on != (members.count(i) > 0))
                throw CertificationFailure("membership mismatch for " + L[i].label() + " at " + p.to_string());
        }
    }
    if (pairs != static_cast<long>(n) * (n - 1) / 2)
        throw CertificationFailure("pair count " + std::to_string(pairs) + " differs from C(" + std::to_string(n) + ", 2)");

    Census out;
    std::map<ProjPoint, bool> curve_points;
    if (curve) {
        // Candidates: special points of the curve and the pairwise meets on it.
        std::vector<ProjPoint> cand = curve->inflection_points();
        if (curve->field()->radicand() == 2)
            for (const auto& s : curve->sextactic_points()) cand.push_back(s.point);
        for (const auto& [p, members] : pts) cand.push_back(p);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

        out.curve_line_mult.assign(static_cast<std::size_t>(n), 0);
        for (const auto& p : cand) {
            if (!curve->contains(p)) continue;
            std::set<int> through;
            for (int i = 0; i < n; ++i)
                if (L[i].line.evaluate(p).is_zero()) through.insert(i);
            if (through.empty()) continue;
            for (int i : through) out.curve_line_mult[static_cast<std::size_t>(i)] += int_mult(curve->poly(), L[i].line, p);
            pts[p].insert(through.begin(), through.end());
            curve_points[p] = true;
        }
        for (int i = 0; i < n; ++i)
            if (out.curve_line_mult[static_cast<std::size_t>(i)] != curve->degree())
                throw CertificationFailure("curve meets " + L[i].label() + " with total multiplicity " +
                                           std::to_string(out.curve_line_mult[static_cast<std::size_t>(i)]) +
                                           " at listed points, expected " + std::to_string(curve->degree()));
    }

    for (const auto& [p, members] : pts) {
        CensusEntry e{p, static_cast<int>(members.size()), true, false, std::vector<int>(members.begin(), members.end())};
        if (curve_points.count(p)) {
            e.on_curve = true;
            e.multiplicity += 1;
            HomPoly T = curve->tangent_line(p);
            for (int i : members)
                if (proportional(T, L[i].line)) e.ordinary = false;
        }
        out.entries.push_back(std::move(e));
    }
    return out;
}

long tjurina_total(const Census& c) {
    long tau = 0;
    for (const auto& e : c.entries) {
        if (!e.ordinary) throw NonOrdinary("non-ordinary point " + e.point.to_string());
        tau += static_cast<long>(e.multiplicity - 1) * (e.multiplicity - 1);
    }
    return tau;
}

std::string FreenessVerdict::sign() const {
    return discriminant < 0 ? "negative" : discriminant == 0 ? "zero" : "positive";
}

FreenessVerdict freeness_test(long degree_hat, long tau) {
    if (degree_hat < 2 || tau < 0) throw std::invalid_argument("freeness test needs degree >= 2 and tau >= 0");
    FreenessVerdict v{degree_hat, tau, 0, std::nullopt, false};
    const long D = degree_hat - 1;
    v.discriminant = 4 * tau - 3 * D * D;
    if (v.discriminant < 0) return v;
    long s = static_cast<long>(std::sqrt(static_cast<double>(v.discriminant)));
    while (s * s > v.discriminant) --s;
    while ((s + 1) * (s + 1) <= v.discriminant) ++s;
    if (s * s != v.discriminant || (D - s) % 2 != 0) return v;
    long r = (D - s) / 2;
    if (r < 0 || 2 * r > D || r * r - D * r + D * D != tau) return v;
    v.exponents = std::make_pair(r, D - r);
    v.free = true;
    return v;
}

bool verify_syzygy(const std::array<HomPoly, 3>& triple, const HomPoly& P) {
    std::optional<HomPoly> sum;
    for (int i = 0; i < 3; ++i) {
        if (triple[i].is_zero()) continue;
        HomPoly term = triple[i] * P.partial(i);
        sum = sum ? *sum + term : term;
    }
    return !sum || sum->is_zero();
}

CollinearResult collinear_sextactic(const FermatCurve& C, int jobs, long precision_bits,
                                    const std::function<void(std::size_t, std::size_t)>& progress) {
    if (C.degree() > kCollinearMaxDegree)
        throw std::invalid_argument("collinearity search is capped at d <= " + std::to_string(kCollinearMaxDegree));
    const auto sp = C.sextactic_points();
    const std::size_t n = sp.size();
    std::vector<std::array<ComplexBall, 3>> balls;
    balls.reserve(n);
    for (const auto& s : sp)
        balls.push_back({s.point[0].embed(precision_bits), s.point[1].embed(precision_bits), s.point[2].embed(precision_bits)});

    std::atomic<std::size_t> next{0}, done{0}, triples{0}, exact{0};
    std::mutex mu;
    std::vector<std::array<int, 3>> hits;

    auto worker = [&] {
        std::vector<std::array<int, 3>> local;
        std::size_t local_triples = 0, local_exact = 0;
        for (std::size_t i = next++; i < n; i = next++) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const auto& a = balls[i];
                const auto& b = balls[j];
                std::array<ComplexBall, 3> cr{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
                std::optional<std::array<FieldElement, 3>> exact_cross;
                for (std::size_t k = j + 1; k < n; ++k) {
                    ++local_triples;
                    const auto& c = balls[k];
                    ComplexBall det = cr[0] * c[0] + cr[1] * c[1] + cr[2] * c[2];
                    if (det.certainly_nonzero()) continue;
                    ++local_exact;
                    if (!exact_cross) exact_cross = cross(sp[i].point.coords(), sp[j].point.coords());
                    const auto& q = sp[k].point;
                    FieldElement e = (*exact_cross)[0] * q[0] + (*exact_cross)[1] * q[1] + (*exact_cross)[2] * q[2];
                    if (e.is_zero()) local.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
                }
            }
            std::size_t finished = ++done;
            if (progress) {
                std::lock_guard<std::mutex> lock(mu);
                progress(finished, n);
            }
        }
        triples += local_triples;
        exact += local_exact;
        std::lock_guard<std::mutex> lock(mu);
        hits.insert(hits.end(), local.begin(), local.end());
    };

    const int threads = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::map<ProjPoint, std::set<int>> groups;
    for (const auto& h : hits) {
        auto& g = groups[line_key(join(sp[static_cast<std::size_t>(h[0])].point, sp[static_cast<std::size_t>(h[1])].point))];
        g.insert(h.begin(), h.end());
    }

    CollinearResult out;
    out.triples_tested = triples;
    out.exact_checks = exact;
    for (const auto& [key, members] : groups) {
        CollinearLine cl{HomPoly::linear(key[0], key[1], key[2]), std::vector<int>(members.begin(), members.end()), false};
        for (int m : members)
            if (sp[static_cast<std::size_t>(m)].cluster != sp[static_cast<std::size_t>(*members.begin())].cluster) cl.mixed = true;
        out.lines.push_back(std::move(cl));
    }
    return out;
}

} // namespace fermat
