#include "fermat/cli.hpp"

#include "CLI11.hpp"
#include "fermat/errors.hpp"
#include "fermat/symmetry_verify.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace fermat::cli {

using nlohmann::json;

void Report::fail(const std::string& check, json expected, json actual) {
    failures.push_back({{"check", check}, {"expected", std::move(expected)}, {"actual", std::move(actual)}});
}

json Report::to_json() const {
    json j = {{"schema", 1}, {"command", command}, {"degree", degree}, {"payload", payload},
              {"status", ok() ? "ok" : "failed"}, {"failures", failures}};
    if (seed) j["seed"] = *seed;
    return j;
}

namespace {

// Runs fn(i) for i < n on up to `jobs` threads; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& fn) {
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(1, jobs) && static_cast<std::size_t>(t) < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    std::vector<T> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

std::string sextactic_label(const SextacticPoint& s) {
    return "s_" + cluster_name(s.cluster) + "[j=" + std::to_string(s.j) + ",k=" + std::to_string(s.k) + "]";
}

json approx(const ProjPoint& p, long precision) {
    json a = json::array();
    for (int i = 0; i < 3; ++i) a.push_back(p[i].embed(precision).to_string(15));
    return a;
}

json point_json(const std::string& label, const ProjPoint& p, long precision) {
    return {{"label", label}, {"point", p.to_string()}, {"approx", approx(p, precision)}};
}

void require_degree(int d) {
    if (d < 3) throw std::invalid_argument("degree must be at least 3");
}

void cmd_points(const Options& opt, Report& r) {
    FermatCurve C(opt.degree);
    const int d = C.degree();
    json pts = json::array();
    if (opt.kind == "inflection" || opt.kind == "all") {
        auto infl = C.inflection_points();
        for (std::size_t i = 0; i < infl.size(); ++i) {
            pts.push_back(point_json("flex[" + std::to_string(i) + "]", infl[i], opt.precision));
            if (!C.contains(infl[i]) || !C.hessian().evaluate(infl[i]).is_zero())
                r.fail("inflection point on F and H", true, infl[i].to_string());
        }
        if (static_cast<int>(infl.size()) != 3 * d) r.fail("inflection count", 3 * d, infl.size());
        r.payload["inflection_count"] = infl.size();
    }
    if (opt.kind == "sextactic" || opt.kind == "all") {
        auto sp = C.sextactic_points();
        for (const auto& s : sp) {
            pts.push_back(point_json(sextactic_label(s), s.point, opt.precision));
            if (!C.contains(s.point)) r.fail("sextactic point on F", true, sextactic_label(s));
        }
        if (static_cast<long>(sp.size()) != 3L * d * d) r.fail("sextactic count", 3 * d * d, sp.size());
        if (C.sextactic_count_formula() != 3L * d * d) r.fail("sextactic count formula", 3 * d * d, C.sextactic_count_formula());
        r.payload["sextactic_count"] = sp.size();
        r.payload["sextactic_count_formula"] = C.sextactic_count_formula();
    }
    if (opt.kind != "inflection" && opt.kind != "sextactic" && opt.kind != "all")
        throw std::invalid_argument("--kind must be inflection, sextactic or all");
    r.payload["precision_bits"] = opt.precision;
    r.payload["points"] = pts;
}

void cmd_tangents(const Options& opt, Report& r) {
    FermatCurve C(opt.degree);
    const int d = C.degree();
    json rows = json::array();
    auto add = [&](const std::string& label, const ProjPoint& p, int expected) {
        HomPoly T = canonical_line(C.tangent_line(p));
        int m = int_mult(C.poly(), T, p);
        rows.push_back({{"label", label}, {"point", p.to_string()}, {"tangent", T.to_string()}, {"contact", m}});
        if (m != expected) r.fail("contact of tangent at " + label, expected, m);
    };
    if (opt.kind == "inflection" || opt.kind == "all") {
        auto infl = C.inflection_points();
        for (std::size_t i = 0; i < infl.size(); ++i) add("flex[" + std::to_string(i) + "]", infl[i], d);
    }
    if (opt.kind == "sextactic" || opt.kind == "all")
        for (const auto& s : C.sextactic_points()) add(sextactic_label(s), s.point, 2);
    r.payload["tangents"] = rows;
}

void cmd_conic(const Options& opt, Report& r) {
    FermatCurve C(opt.degree);
    const int d = C.degree();
    std::mt19937_64 rng(opt.seed);
    r.seed = opt.seed;
    json rows = json::array();
    if (opt.kind == "sextactic" || opt.kind == "all") {
        auto sp = C.sextactic_points();
        // Contact orders at every point up to d = 5, at 20 sampled points beyond.
        std::vector<std::size_t> idx(sp.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        if (d > 5 && idx.size() > 20) {
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(20);
            std::sort(idx.begin(), idx.end());
        }
        auto results = parallel_map<json>(idx.size(), opt.jobs, [&](std::size_t n) {
            const auto& s = sp[idx[n]];
            HomPoly O = C.hyperosculating_conic(s);
            HomPoly closed = C.osculating_conic_closed(s.point);
            int m = int_mult(C.poly(), O, s.point);
            return json{{"label", sextactic_label(s)}, {"conic", O.to_string()}, {"contact", m},
                        {"closed_form_diff", conic_diff(O, closed)}};
        });
        for (const auto& row : results) {
            if (row["contact"] != 6) r.fail("contact at " + row["label"].get<std::string>(), 6, row["contact"]);
            if (!row["closed_form_diff"].empty())
                r.fail("closed form at " + row["label"].get<std::string>(), json::array(), row["closed_form_diff"]);
            rows.push_back(row);
        }
        r.payload["sextactic_checked"] = idx.size();
    }
    if (opt.kind == "random" || opt.kind == "all") {
        json rnd = json::array();
        for (const auto& sample : random_curve_points(d, 20, rng)) {
            FermatCurve Cs(sample.field);
            auto diff = conic_diff(Cs.osculating_conic_cayley(sample.point), Cs.osculating_conic_closed(sample.point));
            rnd.push_back({{"radicand", sample.field->radicand()}, {"point", sample.point.to_string()}, {"diff", diff}});
            if (!diff.empty()) r.fail("Cayley vs closed form at " + sample.point.to_string(), json::array(), diff);
        }
        r.payload["random_points"] = rnd;
    }
    r.payload["conics"] = rows;
}

void cmd_hessian2(const Options& opt, Report& r) {
    FermatCurve C(opt.degree);
    HomPoly H2 = C.two_hessian();
    HomPoly fact = C.two_hessian_factored();
    int sign = two_hessian_sign(C);
    r.payload["equal_exactly"] = H2 == fact;
    r.payload["sign"] = sign;
    r.payload["equal_up_to_reported_sign"] = sign != 0;
    r.payload["factored"] = "(xyz)^(3d-9) (x^d-y^d)(y^d-z^d)(z^d-x^d)";
    if (sign == 0) r.fail("2-Hessian proportional to factored form", true, false);
    int vanish = 0;
    for (const auto& s : C.sextactic_points()) vanish += H2.evaluate(s.point).is_zero();
    r.payload["vanishes_at_sextactic_points"] = vanish;
    if (vanish != 3 * C.degree() * C.degree()) r.fail("2-Hessian at sextactic points", 3 * C.degree() * C.degree(), vanish);
}

json census_json(const LineArrangement& arr, const Census& c) {
    json rows = json::array();
    for (const auto& e : c.entries) {
        json lines = json::array();
        for (int i : e.line_ids) lines.push_back(arr.lines()[static_cast<std::size_t>(i)].label());
        rows.push_back({{"point", e.point.to_string()}, {"multiplicity", e.multiplicity}, {"ordinary", e.ordinary},
                        {"on_curve", e.on_curve}, {"lines", lines}});
    }
    json hist = json::object();
    for (auto [m, n] : c.histogram()) hist[std::to_string(m)] = n;
    return {{"entries", rows}, {"histogram", hist}};
}

struct CensusRun {
    LineArrangement arr;
    bool with_fermat;
    Census census;
    long degree_hat;
};

CensusRun run_census(const std::string& label, int d, bool force_fermat) {
    bool with_f = false;
    auto arr = build_arrangement(label, d, &with_f);
    with_f = with_f || force_fermat;
    FermatCurve C(d);
    Census c = census(arr, with_f ? &C : nullptr);
    long deg = static_cast<long>(arr.size()) + (with_f ? d : 0);
    return {std::move(arr), with_f, std::move(c), deg};
}

void cmd_census(const Options& opt, Report& r) {
    auto run = run_census(opt.arrangement, opt.degree, opt.with_fermat);
    FermatCurve C(opt.degree);
    r.payload = census_json(run.arr, run.census);
    r.payload["arrangement"] = run.arr.label();
    r.payload["with_fermat"] = run.with_fermat;
    r.payload["lines"] = run.arr.size();
    r.payload["degree_hat"] = run.degree_hat;
    long pairs = 0;
    for (const auto& e : run.census.entries) {
        long m = static_cast<long>(e.line_ids.size());
        pairs += m * (m - 1) / 2;
    }
    long n = static_cast<long>(run.arr.size());
    r.payload["line_pairs"] = pairs;
    if (pairs != n * (n - 1) / 2) r.fail("pair conservation", n * (n - 1) / 2, pairs);
    if (!run.with_fermat) {
        int on_f = 0;
        for (const auto& e : run.census.entries) on_f += C.contains(e.point);
        r.payload["points_on_fermat"] = on_f;
    } else {
        r.payload["curve_line_multiplicities"] = run.census.curve_line_mult;
    }
    try {
        r.payload["tau"] = tjurina_total(run.census);
    } catch (const NonOrdinary& e) {
        r.payload["tau"] = nullptr;
        r.payload["tau_note"] = e.what();
    }
}

json verdict_json(const FreenessVerdict& v) {
    json j = {{"degree_hat", v.degree_hat}, {"tau", v.tau}, {"discriminant", v.discriminant},
              {"discriminant_sign", v.sign()}, {"free", v.free},
              {"criterion", "integer r <= (D-1)/2 with r^2 - (D-1) r + (D-1)^2 = tau"}};
    j["exponents"] = v.exponents ? json::array({v.exponents->first, v.exponents->second}) : json(nullptr);
    return j;
}

void cmd_freeness(const Options& opt, Report& r) {
    auto run = run_census(opt.arrangement, opt.degree, opt.with_fermat);
    long tau = tjurina_total(run.census);
    r.payload = verdict_json(freeness_test(run.degree_hat, tau));
    r.payload["arrangement"] = run.arr.label();
    r.payload["with_fermat"] = run.with_fermat;
}

void cmd_collinear(const Options& opt, Report& r) {
    FermatCurve C(opt.degree);
    const int d = C.degree();
    auto res = collinear_sextactic(C, opt.jobs, opt.precision);
    auto sp = C.sextactic_points();
    json rows = json::array();
    int mixed = 0;
    std::set<ProjPoint> found;
    for (const auto& l : res.lines) {
        json pts = json::array();
        for (int i : l.points) pts.push_back(sextactic_label(sp[static_cast<std::size_t>(i)]));
        rows.push_back({{"line", l.line.to_string()}, {"points", pts}, {"mixed", l.mixed}});
        mixed += l.mixed;
        found.insert(ProjPoint(line_coeffs(l.line)));
    }
    r.payload["lines"] = rows;
    r.payload["line_count"] = res.lines.size();
    r.payload["mixed"] = mixed;
    r.payload["intra_cluster"] = static_cast<int>(res.lines.size()) - mixed;
    r.payload["triples_tested"] = res.triples_tested;
    r.payload["exact_checks"] = res.exact_checks;
    r.payload["precision_bits"] = opt.precision;
    if (d == 3) {
        if (res.lines.size() != 81) r.fail("line count", 81, res.lines.size());
        if (mixed != 54) r.fail("mixed line count", 54, mixed);
        for (const auto& l : res.lines)
            if (l.points.size() != 3) r.fail("points per line", 3, l.points.size());
    } else {
        std::set<ProjPoint> grid;
        for (const auto& l : grid_lines(C.field())) grid.insert(ProjPoint(line_coeffs(l.line)));
        if (found != grid) r.fail("lines equal the grid B u M u N", grid.size(), found.size());
        for (const auto& l : res.lines)
            if (static_cast<int>(l.points.size()) != d) r.fail("points per line", d, l.points.size());
    }
}

void verify_main(const Options& opt, Report& r) {
    FermatCurve C(opt.degree);
    const int d = C.degree();
    auto grid = grid_lines(C.field());
    std::vector<std::size_t> idx;
    if (opt.line_index) {
        if (*opt.line_index < 0 || *opt.line_index >= static_cast<int>(grid.size()))
            throw std::invalid_argument("--line-index must be in [0, " + std::to_string(grid.size()) + ")");
        idx.push_back(static_cast<std::size_t>(*opt.line_index));
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) idx.push_back(i);
    }
    auto reports = parallel_map<std::pair<ConcurrencyReport, ConcurrencyReport>>(idx.size(), opt.jobs, [&](std::size_t n) {
        const auto& l = grid[idx[n]];
        return std::make_pair(tangent_concurrency(C, l), conic_common_points(C, l));
    });
    json lines = json::array();
    for (std::size_t n = 0; n < idx.size(); ++n) {
        const auto& [t, c] = reports[n];
        const auto& l = grid[idx[n]];
        int expected = (d == 3 && l.family == "B") ? 1 : 2;
        lines.push_back({{"index", idx[n]}, {"line", l.label()}, {"tangents", t.to_json()}, {"conics", c.to_json()}});
        for (const auto& f : t.failures) r.fail("tangent concurrency on " + l.label(), "certified", f);
        for (const auto& f : c.failures) r.fail("conic common points on " + l.label(), "certified", f);
        if (t.count != 1) r.fail("tangent common points on " + l.label(), 1, t.count);
        if (c.count != expected) r.fail("conic common points on " + l.label(), expected, c.count);
    }
    r.payload["theorem"] = "main";
    r.payload["line_reports"] = lines;
}

void verify_invariant(const Options& opt, Report& r) {
    if (opt.osc_degree != 1 && opt.osc_degree != 2) throw std::invalid_argument("--osc-degree must be 1 or 2");
    FermatCurve C(opt.degree);
    auto K = C.field();
    OsculatingCache cache(C);
    auto infl = C.inflection_points();
    std::set<ProjPoint> flexes(infl.begin(), infl.end());
    std::vector<ProjPoint> pts;
    if (opt.osc_degree == 1) pts = infl;
    for (const auto& s : C.sextactic_points()) pts.push_back(s.point);
    int automorphisms = 0;
    long checks = 0;
    for (const auto& g : group_elements(K)) {
        if (!fixed_line(g)) continue;
        ++automorphisms;
        for (const auto& p : pts) {
            ++checks;
            if (!verify_invariant_intersection(C, g, p, opt.osc_degree, &cache))
                r.fail("invariant intersection", true, json{{"automorphism", g.to_string()}, {"point", p.to_string()}});
        }
    }
    r.payload["theorem"] = "invariant-intersection";
    r.payload["osc_degree"] = opt.osc_degree;
    r.payload["automorphisms_with_fixed_line"] = automorphisms;
    r.payload["points"] = pts.size();
    r.payload["checks"] = checks;
    r.payload["inflection_points_included"] = opt.osc_degree == 1;
}

HomPoly mono(const FieldPtr& K, const mpq_class& c, int a, int b, int e) {
    return HomPoly::monomial(K->rational(c), {a, b, e});
}

void verify_syzygies(const Options& opt, Report& r) {
    const int d = opt.degree;
    auto K = TowerField::get(d);
    HomPoly X = HomPoly::variable(K, 0).pow(d), Y = HomPoly::variable(K, 1).pow(d), Z = HomPoly::variable(K, 2).pow(d);
    HomPoly P = (X - Y) * (Z + Y * 2) * (Z + X * 2);
    HomPoly PF = P * HomPoly::fermat(K, d);
    const int e = d - 1;
    mpz_class big;
    mpz_ui_pow_ui(big.get_mpz_t(), 4, static_cast<unsigned long>(d + 1));
    std::array<HomPoly, 3> g1{mono(K, 2, d + 1, 0, 0) + mono(K, -4, 1, d, 0) + mono(K, 2, 1, 0, d),
                              mono(K, -4, d, 1, 0) + mono(K, 2, 0, d + 1, 0) + mono(K, 2, 0, 1, d),
                              mono(K, -big, d, 0, 1) + mono(K, -big, 0, d, 1) + mono(K, -1, 0, 0, d + 1)};
    std::array<HomPoly, 3> g2{mono(K, 2, e, e, 0), mono(K, -1, 0, e, e), mono(K, -1, e, 0, e)};
    std::array<HomPoly, 3> h1{mono(K, 2, 2 * d + 1, 0, 0) + mono(K, -6, 1, 2 * d, 0) + mono(K, 6, d + 1, 0, d) +
                                  mono(K, -6, 1, d, d) + mono(K, 3, 1, 0, 2 * d),
                              mono(K, -6, 2 * d, 1, 0) + mono(K, 2, 0, 2 * d + 1, 0) + mono(K, -6, d, 1, d) +
                                  mono(K, 6, 0, d + 1, d) + mono(K, 3, 0, 1, 2 * d),
                              mono(K, -6, 2 * d, 0, 1) + mono(K, -6, 0, 2 * d, 1) + mono(K, -6, d, 0, d + 1) +
                                  mono(K, -6, 0, d, d + 1) + mono(K, -1, 0, 0, 2 * d + 1)};
    std::array<HomPoly, 3> h2{mono(K, -1, 0, e, e), mono(K, -1, e, 0, e), mono(K, 2, e, e, 0)};
    HomPoly zero(K, 3 * d - 1);
    json verbatim = json::array();
    auto record = [&](const std::string& name, const std::array<HomPoly, 3>& t, const HomPoly& Q) {
        verbatim.push_back({{"triple", name}, {"holds", verify_syzygy(t, Q)}});
    };
    record("P: (2x^(d+1)-4xy^d+2xz^d, -4x^dy+2y^(d+1)+2yz^d, -4^(d+1)x^dz-4^(d+1)y^dz-z^(d+1))", g1, P);
    record("P: (2x^(d-1)y^(d-1), -y^(d-1)z^(d-1), -x^(d-1)z^(d-1))", g2, P);
    record("P*F: degree 2d+1 triple", h1, PF);
    record("P*F: (-y^(d-1)z^(d-1), -x^(d-1)z^(d-1), 2x^(d-1)y^(d-1))", h2, PF);
    r.payload["verbatim"] = verbatim;
    bool koszul = verify_syzygy({P.partial(1), -P.partial(0), zero}, P) && verify_syzygy({zero, zero, zero}, P);
    r.payload["koszul"] = koszul;
    if (!koszul) r.fail("Koszul syzygies", true, false);
    r.payload["theorem"] = "syzygy";
}

void verify_pencil(const Options& opt, Report& r) {
    FermatCurve C(opt.degree);
    const int d = C.degree();
    json rows = json::array();
    for (int j = 0; j < d; ++j)
        for (int k1 = 1; k1 < 2 * d; k1 += 2)
            for (int k2 = k1 + 2; k2 < 2 * d; k2 += 2) {
                try {
                    auto c = pencil_degenerate(C, j, k1, k2);
                    json row = c.to_json();
                    row["j"] = j;
                    row["k1"] = k1;
                    row["k2"] = k2;
                    rows.push_back(row);
                } catch (const CertificationFailure& e) {
                    r.fail("pencil j=" + std::to_string(j) + " k=(" + std::to_string(k1) + "," + std::to_string(k2) + ")",
                           "certified", e.what());
                }
            }
    r.payload["theorem"] = "pencil";
    r.payload["pencils"] = rows;
}

void cmd_verify(const Options& opt, Report& r) {
    if (opt.theorem == "main") verify_main(opt, r);
    else if (opt.theorem == "invariant-intersection") verify_invariant(opt, r);
    else if (opt.theorem == "syzygy") verify_syzygies(opt, r);
    else if (opt.theorem == "pencil") verify_pencil(opt, r);
    else throw std::invalid_argument("--theorem must be main, invariant-intersection, syzygy or pencil");
}

} // namespace

Report run_command(const std::string& command, const Options& opt) {
    if (command == "all") return run_all(opt.d_min, opt.d_max, opt);
    require_degree(opt.degree);
    Report r;
    r.command = command;
    r.degree = opt.degree;
    if (opt.seed_given) r.seed = opt.seed;
    try {
        if (command == "points") cmd_points(opt, r);
        else if (command == "tangents") cmd_tangents(opt, r);
        else if (command == "conic") cmd_conic(opt, r);
        else if (command == "hessian2") cmd_hessian2(opt, r);
        else if (command == "census") cmd_census(opt, r);
        else if (command == "freeness") cmd_freeness(opt, r);
        else if (command == "collinear") cmd_collinear(opt, r);
        else if (command == "verify") cmd_verify(opt, r);
        else throw std::invalid_argument("unknown command " + command);
    } catch (const Error& e) {
        r.fail("exception", "none", e.what());
    }
    return r;
}

Report run_all(int d_min, int d_max, const Options& opt) {
    if (d_min < 3 || d_max < d_min || d_max > kCollinearMaxDegree)
        throw std::invalid_argument("need 3 <= d-min <= d-max <= " + std::to_string(kCollinearMaxDegree));
    Report all;
    all.command = "all";
    all.degree = d_max;
    all.seed = opt.seed;
    json per = json::array();
    for (int d = d_min; d <= d_max; ++d) {
        Options o = opt;
        o.degree = d;
        std::vector<std::pair<std::string, Options>> steps;
        auto add = [&](const std::string& cmd, std::function<void(Options&)> tweak) {
            Options s = o;
            tweak(s);
            steps.emplace_back(cmd, s);
        };
        add("points", [](Options&) {});
        add("tangents", [](Options& s) { s.kind = "inflection"; });
        if (d <= 6) add("hessian2", [](Options&) {});
        add("conic", [](Options& s) { s.kind = "sextactic"; });
        for (const char* a : {"B", "M", "N", "BzMxNy"}) add("census", [a](Options& s) { s.arrangement = a; });
        for (const char* a : {"B", "xyzB", "BzMxNy", "xyzBzMxNy", "FBzMxNy", "FB", "M", "xyzM", "FM"})
            add("freeness", [a](Options& s) { s.arrangement = a; });
        if (d <= 6) add("verify", [](Options& s) { s.theorem = "syzygy"; });
        add("collinear", [](Options&) {});
        add("verify", [](Options& s) { s.theorem = "main"; });
        if (d <= 6) {
            add("verify", [](Options& s) { s.theorem = "invariant-intersection"; s.osc_degree = 1; });
            add("verify", [](Options& s) { s.theorem = "invariant-intersection"; s.osc_degree = 2; });
        }
        json reports = json::array();
        for (const auto& [cmd, s] : steps) {
            Report r = run_command(cmd, s);
            json brief = {{"command", cmd}, {"status", r.ok() ? "ok" : "failed"}};
            if (cmd == "census" || cmd == "freeness") brief["arrangement"] = s.arrangement;
            if (cmd == "verify") brief["theorem"] = s.theorem;
            if (cmd == "freeness") brief["verdict"] = r.payload;
            if (cmd == "census") brief["histogram"] = r.payload.value("histogram", json::object());
            if (cmd == "collinear") {
                brief["line_count"] = r.payload.value("line_count", 0);
                brief["mixed"] = r.payload.value("mixed", 0);
            }
            if (cmd == "verify" && s.theorem == "syzygy") brief["verbatim"] = r.payload["verbatim"];
            for (const auto& f : r.failures) {
                json g = f;
                g["degree"] = d;
                g["command"] = cmd;
                all.failures.push_back(g);
            }
            reports.push_back(brief);
        }
        per.push_back({{"degree", d}, {"reports", reports}});
    }
    all.payload["d_min"] = d_min;
    all.payload["d_max"] = d_max;
    all.payload["degrees"] = per;
    return all;
}

std::string format_table(const Report& r) {
    std::ostringstream os;
    os << "command  " << r.command << "\n"
       << "degree   " << r.degree << "\n"
       << "status   " << (r.ok() ? "ok" : "failed") << "\n";
    for (const auto& [key, value] : r.payload.items()) {
        bool flat = value.is_array() && std::none_of(value.begin(), value.end(), [](const json& v) { return v.is_structured(); });
        if (flat && value.size() <= 8) {
            os << key << "  " << value.dump() << "\n";
        } else if (value.is_array()) {
            os << key << "  (" << value.size() << ")\n";
            for (const auto& row : value) {
                os << "  ";
                if (row.is_object()) {
                    bool first = true;
                    for (const auto& [k, v] : row.items()) {
                        if (v.is_structured()) continue;
                        os << (first ? "" : " | ") << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
                        first = false;
                    }
                } else {
                    os << (row.is_string() ? row.get<std::string>() : row.dump());
                }
                os << "\n";
            }
        } else if (value.is_object()) {
            os << key << "  " << value.dump() << "\n";
        } else {
            os << key << "  " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
    }
    for (const auto& f : r.failures) os << "FAILED  " << f.dump() << "\n";
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Osculating geometry of Fermat curves over Q(zeta_2d, 2^(1/d))", "fermat"};
    app.require_subcommand(1);
    Options opt;
    std::int64_t seed = 1;
    const std::vector<std::pair<std::string, std::string>> names = {
        {"points", "list inflection, sextactic or random curve points"},
        {"tangents", "tangent lines and their contact orders"},
        {"conic", "osculating conics, Cayley and closed form"},
        {"hessian2", "2-Hessian determinant against its factored form"},
        {"census", "singular points of a line arrangement"},
        {"freeness", "Tjurina count and freeness verdict"},
        {"collinear", "lines through three or more sextactic points"},
        {"verify", "concurrency, invariant intersection, syzygy or pencil checks"},
        {"all", "every check for a range of degrees"}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : names) {
        auto* sub = app.add_subcommand(name, help);
        subs.push_back(sub);
        sub->add_option("--degree,-d", opt.degree, "curve degree d >= 3");
        sub->add_option("--kind", opt.kind, "point kind: inflection, sextactic, random or all");
        sub->add_option("--arrangement", opt.arrangement, "arrangement label, e.g. B, M, BzMxNy, xyzB, FBzMxNy");
        sub->add_option("--theorem", opt.theorem, "main, invariant-intersection, syzygy or pencil");
        sub->add_option("--line-index", opt.line_index, "grid line index in B_x..N_z order");
        sub->add_option("--osc-degree", opt.osc_degree, "osculating degree 1 or 2");
        sub->add_flag("--with-fermat", opt.with_fermat, "add the curve to the arrangement");
        sub->add_option("--out,-o", opt.out, "write the report to this path");
        sub->add_option("--jobs,-j", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--precision", opt.precision, "embedding precision in bits")->check(CLI::Range(32L, 4096L));
        sub->add_option("--format", opt.format, "json or table")->check(CLI::IsMember({"json", "table"}));
        if (name == "all") {
            sub->add_option("--d-min", opt.d_min, "smallest degree");
            sub->add_option("--d-max", opt.d_max, "largest degree");
        }
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }
    std::string command;
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) {
            command = names[i].first;
            if (subs[i]->count("--seed")) opt.seed_given = true;
            if (command == "all" && subs[i]->count("--degree") && !subs[i]->count("--d-min")) opt.d_min = opt.d_max = opt.degree;
        }
    opt.seed = static_cast<std::uint64_t>(seed);

    Report report;
    try {
        report = run_command(command, opt);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        report.command = command;
        report.degree = opt.degree;
        report.fail("exception", "none", e.what());
    }

    std::string text = opt.format == "table" ? format_table(report) : report.to_json().dump(2) + "\n";
    if (opt.out.empty()) {
        out << text;
    } else {
        std::ofstream f(opt.out);
        if (!f) {
            err << "cannot write " << opt.out << "\n";
            return kExitUsage;
        }
        f << text;
    }
    return report.ok() ? kExitOk : kExitFailed;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace fermat::cli
