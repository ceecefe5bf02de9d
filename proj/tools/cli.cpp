#include "cli.hpp"
#include "scene.hpp"

#include <smtlab/bounds.hpp>
#include <smtlab/error.hpp>
#include <smtlab/heights.hpp>
#include <smtlab/hilbert.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace smtlab::cli
{

namespace
{

namespace fs = std::filesystem;

struct Settings {
    std::string scene;
    std::string out_dir = ".";
    std::string convention;
    std::string eps;
    std::string grid;
    int budget_degree = GroebnerBudget{}.max_degree;
    std::uint64_t budget_subsets = FamilyOptions{}.max_pairs;
    double tolerance = QuadratureOptions{}.tolerance;
};

struct Context {
    Settings settings;
    std::optional<Scene> scene;
    empty_convention convention = empty_convention::skip_empty;
    Rational eps = make_rational(1, 2);
    GroebnerBudget budget;
    FamilyOptions family;
    QuadratureOptions quadrature;

    json settings_json() const
    {
        return {{"convention", to_string(convention)},
                {"eps", to_string(eps)},
                {"budget_degree", budget.max_degree},
                {"budget_subsets", family.max_pairs},
                {"tolerance", quadrature.tolerance},
                {"winding_tolerance", quadrature.winding_tolerance}};
    }
};

std::string str(const Rational &q)
{
    return to_string(q);
}

json surd_json(const Surd &s)
{
    return {{"exact", s.to_string()}, {"value", s.to_double()}};
}

std::string fmt(double x)
{
    std::ostringstream o;
    o << std::setprecision(6) << x;
    return o.str();
}

void write_file(const fs::path &p, const std::string &text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        throw input_error("cannot write " + p.string());
    }
    f << text;
}

struct Csv {
    std::string body;

    explicit Csv(const std::vector<std::string> &header)
    {
        row(header);
    }
    void row(const std::vector<std::string> &cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            body += (i ? "," : "") + cells[i];
        }
        body += '\n';
    }
};

std::string num(double x)
{
    std::ostringstream o;
    o << std::setprecision(17) << x;
    return o.str();
}

void emit(const Context &ctx, const std::string &command, json report, const std::vector<std::pair<std::string, Csv>> &csvs)
{
    const fs::path dir(ctx.settings.out_dir);
    fs::create_directories(dir);
    report["command"] = command;
    report["settings"] = ctx.settings_json();
    if (ctx.scene) {
        report["scene"] = ctx.scene->path;
    }
    write_file(dir / (command + ".json"), report.dump(2) + "\n");
    for (const auto &[name, csv] : csvs) {
        write_file(dir / name, csv.body);
    }
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream stamp;
    stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    const json meta{{"command", command}, {"timestamp", stamp.str()}, {"version", "0.1.0"}};
    write_file(dir / "metadata.json", meta.dump(2) + "\n");
}

const Scene &need_scene(const Context &ctx)
{
    if (!ctx.scene) {
        throw input_error("--scene is required");
    }
    return *ctx.scene;
}

HypersurfaceFamily scene_family(const Scene &s, const Variety &V)
{
    return HypersurfaceFamily(V, s.family);
}

json selection_json(const Selection &s)
{
    json j{{"subset", mask_to_string(s.subset)},
           {"size", popcount(s.subset)},
           {"delta", str(s.delta.value)},
           {"delta_witness", mask_to_string(s.delta.witness)},
           {"bound", surd_json(s.bound)},
           {"min_size", s.min_size.get_str()},
           {"full_family", s.full_family}};
    if (s.removed) {
        j["removed"] = mask_to_string(*s.removed);
    }
    return j;
}

json variety_json(const Variety &V)
{
    json gens = json::array();
    for (const auto &g : V.ideal().generators()) {
        gens.push_back(g.to_string());
    }
    return {{"ambient", V.ambient_dim()}, {"dim", V.dim()}, {"degree", V.degree().get_str()}, {"ideal", gens}};
}

int cmd_analyze(const Context &ctx, std::ostream &out)
{
    const Scene &s = need_scene(ctx);
    const Variety V = s.make_variety(ctx.budget);
    const FamilyGeometry G(V, scene_family(s, V), ctx.family);
    const int k = G.k();
    const int q = static_cast<int>(G.q());
    json rep;
    rep["variety"] = variety_json(V);
    json fam{{"q", q}, {"members", json::array()}, {"degrees", G.family().degrees()}};
    for (const auto &p : G.family().polys()) {
        fam["members"].push_back(p.to_string());
    }
    rep["family"] = fam;
    const auto level = G.position_level();
    rep["position_level"] = level ? json(*level) : json(nullptr);
    json sub = json::array();
    for (int N = k; N <= std::max(k, q); ++N) {
        const PositionCheck pc = G.subgeneral_position(N);
        json e{{"N", N}, {"holds", pc.holds}, {"vacuous", pc.vacuous}};
        if (pc.witness) {
            e["witness"] = mask_to_string(*pc.witness);
        }
        sub.push_back(e);
    }
    rep["subgeneral"] = sub;
    auto bezout_json = [](const BezoutCheck &b) {
        json j{{"holds", b.holds}, {"pairs_checked", b.pairs_checked}};
        if (b.witness) {
            j["witness"] = {mask_to_string(b.witness->first), mask_to_string(b.witness->second)};
        }
        return j;
    };
    const BezoutCheck wb = G.weak_bezout();
    const BezoutCheck bz = G.bezout();
    rep["weak_bezout"] = bezout_json(wb);
    rep["bezout"] = bezout_json(bz);
    const DistributiveConstant dc = G.distributive_constant(ctx.convention);
    rep["delta"] = {{"value", str(dc.value)}, {"witness", mask_to_string(dc.witness)}};

    json notes = json::array();
    std::optional<int> N = s.N;
    if (!N && level) {
        N = std::max(*level, k + 1);
    }
    if (N) {
        rep["selection_N"] = *N;
        if (*N <= k) {
            notes.push_back("subfamily selection needs N > k");
        } else {
            for (const bool strong : {false, true}) {
                const char *key = strong ? "bezout_selection" : "weak_bezout_selection";
                try {
                    const Selection sel = strong ? G.select_bezout(*N, ctx.convention)
                                                 : G.select_weak_bezout(*N, ctx.convention);
                    rep[key] = selection_json(sel);
                } catch (const precondition_error &e) {
                    notes.push_back(std::string(key) + ": " + e.what());
                }
            }
        }
    } else {
        notes.push_back("the family has a common point on V; no subgeneral level");
    }
    rep["notes"] = notes;

    out << "variety: dim " << k << ", degree " << V.degree().get_str() << ", q = " << q << "\n";
    out << "position level: " << (level ? std::to_string(*level) : "none") << "\n";
    for (const auto &e : sub) {
        out << "  " << e["N"].get<int>() << "-subgeneral: " << (e["holds"].get<bool>() ? "yes" : "no")
            << (e["vacuous"].get<bool>() ? " (vacuous)" : "") << "\n";
    }
    out << "weak Bezout: " << (wb.holds ? "yes" : "no") << ", Bezout: " << (bz.holds ? "yes" : "no") << "\n";
    out << "Delta (" << to_string(ctx.convention) << ") = " << str(dc.value) << " at " << mask_to_string(dc.witness)
        << "\n";
    for (const char *key : {"weak_bezout_selection", "bezout_selection"}) {
        if (rep.contains(key)) {
            out << key << ": " << rep[key]["subset"].get<std::string>() << " with Delta "
                << rep[key]["delta"].get<std::string>() << "\n";
        }
    }
    for (const auto &n : notes) {
        out << "note: " << n.get<std::string>() << "\n";
    }
    emit(ctx, "analyze", rep, {});
    return exit_pass;
}

struct BoundsArgs {
    int k = 0;
    int N = 0;
    std::string d = "1";
    std::string v = "1";
    std::optional<int> q;
    std::optional<int> table;
};

struct BoundsRow {
    ComparisonRow r;
    std::string L;
    std::string M0;
    std::vector<std::string> uncertified;
};

// Same fields as comparison_row; with `lenient` a level whose floor cannot
// be certified is left empty and named in `uncertified`.
BoundsRow bounds_row(int k, int N, const Integer &d, const Integer &v, const Rational &eps, std::optional<int> q,
                     bool lenient)
{
    BoundsRow row;
    if (!lenient) {
        row.r = comparison_row(k, N, d, v, eps, q);
        row.L = row.r.L.get_str();
        row.M0 = row.r.M0 ? row.r.M0->get_str() : "";
        return row;
    }
    ComparisonRow &r = row.r;
    r.k = k;
    r.N = N;
    r.bound_D = defect_bound(defect_theorem::D, k, N);
    r.bound_F = defect_bound(defect_theorem::F, k, N);
    r.bound_new = defect_bound(defect_theorem::new_1_1, k, N);
    r.bound_HL = defect_bound(defect_theorem::heier_levin, k, N);
    r.tau = tau(N, k);
    const LevelParams p{d, k, v, r.tau, eps};
    r.u = u_level(p);
    try {
        r.L = L_level(p);
        row.L = r.L.get_str();
    } catch (const precision_error &) {
        row.uncertified.push_back("L");
    }
    if (q) {
        try {
            r.M0 = M0_theoremD(v, k, d, N, *q, eps);
            row.M0 = r.M0->get_str();
        } catch (const precision_error &) {
            row.uncertified.push_back("M0");
        }
    }
    return row;
}

json row_json(const BoundsRow &b, bool with_q)
{
    const ComparisonRow &r = b.r;
    auto level = [](const std::string &x) { return x.empty() ? json(nullptr) : json(x); };
    json j{{"k", r.k},
           {"N", r.N},
           {"tau", surd_json(r.tau)},
           {"u", r.u.get_str()},
           {"L", level(b.L)},
           {"defect", {{"D", surd_json(r.bound_D)},
                       {"F", surd_json(r.bound_F)},
                       {"1.1new", surd_json(r.bound_new)},
                       {"HL", surd_json(r.bound_HL)}}}};
    j["M0"] = with_q ? level(b.M0) : json(nullptr);
    if (!b.uncertified.empty()) {
        j["uncertified"] = b.uncertified;
    }
    return j;
}

int cmd_bounds(const Context &ctx, const BoundsArgs &a, std::ostream &out)
{
    const Integer d(parse_rational(a.d).get_num());
    const Integer v(parse_rational(a.v).get_num());
    if (d < 1 || v < 1) {
        throw input_error("d and v must be positive integers");
    }
    std::vector<std::pair<int, int>> pairs;
    if (a.table) {
        for (int N = 2; N <= *a.table; ++N) {
            for (int k = 1; k < N; ++k) {
                pairs.emplace_back(k, N);
            }
        }
    } else {
        if (a.k < 1 || a.N <= a.k) {
            throw input_error("bounds needs 1 <= k < N");
        }
        pairs.emplace_back(a.k, a.N);
    }
    Csv csv({"k", "N", "tau", "u", "L", "D", "F", "1.1new", "HL", "M0"});
    json rows = json::array();
    std::size_t uncertified = 0;
    for (const auto &[k, N] : pairs) {
        const BoundsRow b = bounds_row(k, N, d, v, ctx.eps, a.q, a.table.has_value());
        const ComparisonRow &r = b.r;
        rows.push_back(row_json(b, a.q.has_value()));
        uncertified += b.uncertified.empty() ? 0 : 1;
        csv.row({std::to_string(k), std::to_string(N), r.tau.to_string(), r.u.get_str(), b.L, r.bound_D.to_string(),
                 r.bound_F.to_string(), r.bound_new.to_string(), r.bound_HL.to_string(), b.M0});
        if (!a.table) {
            out << "k = " << k << ", N = " << N << ", d = " << d.get_str() << ", v = " << v.get_str()
                << ", eps = " << str(ctx.eps) << "\n";
            out << "tau = " << r.tau.to_string() << ", u = " << r.u.get_str() << ", L = " << r.L.get_str() << "\n";
            out << "defects: D:" << r.bound_D.to_string() << " F:" << r.bound_F.to_string()
                << " 1.1new:" << r.bound_new.to_string() << " HL:" << r.bound_HL.to_string() << "\n";
            if (r.M0) {
                out << "M0 = " << r.M0->get_str() << "\n";
            }
        }
    }
    if (a.table) {
        out << rows.size() << " rows written to bounds.csv";
        if (uncertified) {
            out << ", " << uncertified << " with uncertified levels";
        }
        out << "\n";
    }
    json rep{{"d", d.get_str()}, {"v", v.get_str()}, {"rows", rows}};
    if (a.q) {
        rep["q"] = *a.q;
    }
    rep["uncertified_rows"] = uncertified;
    emit(ctx, "bounds", rep, {{"bounds.csv", std::move(csv)}});
    return uncertified ? exit_flagged : exit_pass;
}

struct HilbertArgs {
    std::string u;
    std::string c;
    std::string indices;
};

int cmd_hilbert(const Context &ctx, const HilbertArgs &a, std::ostream &out)
{
    const Scene &s = need_scene(ctx);
    const json &block = s.hilbert;
    const Variety V = s.make_variety(ctx.budget);
    const EmbeddedImage E = embed_family(V, scene_family(s, V), ctx.budget);

    std::vector<int> us;
    if (!a.u.empty()) {
        us = parse_int_list(a.u, "--u");
    } else if (block.contains("u")) {
        us = int_list(block["u"], "/hilbert/u");
    } else {
        throw input_error("hilbert needs u values (--u or /hilbert/u)");
    }
    WeightVector c;
    if (!a.c.empty()) {
        c = WeightVector::parse(a.c);
    } else if (block.contains("c")) {
        if (block["c"].is_string()) {
            c = WeightVector::parse(block["c"].get<std::string>());
        } else if (block["c"].is_array()) {
            std::vector<Rational> v;
            for (const auto &x : block["c"]) {
                v.push_back(rational_of(x, "/hilbert/c"));
            }
            c = WeightVector(v);
        } else {
            throw schema_error("/hilbert/c: expected a string or an array");
        }
    } else {
        throw input_error("hilbert needs a weight vector (--c or /hilbert/c)");
    }
    if (c.size() != E.family.size()) {
        throw input_error("weight vector needs " + std::to_string(E.family.size()) + " entries");
    }
    std::optional<std::vector<int>> indices;
    if (!a.indices.empty()) {
        indices = parse_int_list(a.indices, "--indices");
    } else if (block.contains("indices")) {
        indices = int_list(block["indices"], "/hilbert/indices");
    }
    EfOptions ef;
    if (block.contains("estimate_u")) {
        ef.estimate_u = int_list(block["estimate_u"], "/hilbert/estimate_u");
    }

    json rep;
    json gens = json::array();
    for (const auto &g : E.ideal.generators()) {
        gens.push_back(g.to_string("y"));
    }
    rep["embedding"] = {{"ideal", gens}, {"k", E.k}, {"delta", E.delta.get_str()}, {"d", E.d},
                        {"bound", E.bound.get_str()}};
    json cj = json::array();
    for (const auto &x : c.values()) {
        cj.push_back(str(x));
    }
    rep["c"] = cj;

    bool flagged = false;
    Csv csv({"u", "S", "H", "lhs", "rhs", "e", "margin", "approximate"});
    json levels = json::array();
    std::vector<int> above;
    for (int u : us) {
        json e{{"u", u}, {"S", str(hilbert_weight(E.ideal, u, c))}, {"H", hilbert_function(E.ideal, u).get_str()}};
        if (u > E.delta) {
            above.push_back(u);
            const EfReport r = verify_ef_inequality(E.ideal, u, c, ef);
            e["ef"] = {{"lhs", str(r.lhs)},     {"rhs", str(r.rhs)},           {"e", str(r.e)},
                       {"margin", str(r.margin)}, {"approximate", r.approximate}, {"passed", r.passed}};
            if (!r.approximate && !r.passed) {
                flagged = true;
            }
            csv.row({std::to_string(u), str(r.S), r.H.get_str(), str(r.lhs), str(r.rhs), str(r.e), str(r.margin),
                     r.approximate ? "1" : "0"});
        } else {
            e["ef"] = nullptr;
            csv.row({std::to_string(u), e["S"].get<std::string>(), e["H"].get<std::string>(), "", "", "", "", ""});
        }
        levels.push_back(e);
    }
    rep["levels"] = levels;
    std::sort(above.begin(), above.end());
    above.erase(std::unique(above.begin(), above.end()), above.end());
    if (!above.empty()) {
        const ChowEstimate est = chow_weight_estimate(E.ideal, c, above);
        json samples = json::array();
        for (const auto &x : est.samples) {
            samples.push_back({{"u", x.u}, {"value", str(x.value)}, {"approx", to_double(x.value)}});
        }
        rep["chow_estimate"] = {{"estimate", str(est.estimate)}, {"exact", est.exact}, {"samples", samples}};
    }
    if (indices) {
        const ChowBoundReport r = verify_chow_lower_bound(E, c, *indices, ef);
        rep["chow_lower_bound"] = {{"indices", r.indices},         {"Delta", str(r.delta_constant)},
                                   {"deg_Y", r.deg_Y.get_str()},   {"e", str(r.e)},
                                   {"lower", str(r.lower)},        {"margin", str(r.margin)},
                                   {"approximate", r.approximate}, {"passed", r.passed}};
        if (!r.approximate && !r.passed) {
            flagged = true;
        }
    }
    rep["flagged"] = flagged;

    out << "Y: dim " << E.k << ", degree " << E.delta.get_str() << " <= " << E.bound.get_str() << ", "
        << gens.size() << " generators\n";
    for (const auto &e : levels) {
        out << "u = " << e["u"].get<int>() << ": S = " << e["S"].get<std::string>()
            << ", H = " << e["H"].get<std::string>();
        if (!e["ef"].is_null()) {
            out << ", margin = " << e["ef"]["margin"].get<std::string>()
                << (e["ef"]["approximate"].get<bool>() ? " (approximate)" : "");
        }
        out << "\n";
    }
    if (rep.contains("chow_lower_bound")) {
        out << "chow lower bound margin: " << rep["chow_lower_bound"]["margin"].get<std::string>()
            << (rep["chow_lower_bound"]["approximate"].get<bool>() ? " (approximate)" : "") << "\n";
    }
    emit(ctx, "hilbert", rep, {{"hilbert.csv", std::move(csv)}});
    return flagged ? exit_flagged : exit_pass;
}

int cmd_curve(const Context &ctx, std::ostream &out)
{
    const Scene &s = need_scene(ctx);
    const json &block = s.curve;
    if (block.is_null()) {
        throw input_error("scene has no curve block");
    }
    std::vector<ExpPoly> comps;
    for (std::size_t i = 0; i < block["components"].size(); ++i) {
        const auto &x = block["components"][i];
        if (!x.is_string()) {
            throw schema_error(s.path + ": /curve/components/" + std::to_string(i) + ": expected a string");
        }
        comps.push_back(parse_exppoly(x.get<std::string>()));
    }
    const Domain domain = block.contains("domain") ? parse_domain(block["domain"], "/curve/domain") : Domain::plane();
    const Variety V = s.make_variety(ctx.budget);
    const CurveSpec curve(comps, domain, V);
    std::string grid_text = ctx.settings.grid;
    if (grid_text.empty()) {
        if (!block.contains("grid") || !block["grid"].is_string()) {
            throw input_error("curve needs a grid (--grid or /curve/grid)");
        }
        grid_text = block["grid"].get<std::string>();
    }
    const std::vector<double> grid = parse_grid(grid_text);
    const HypersurfaceFamily F = scene_family(s, V);

    json rep;
    json notes = json::array();
    bool flagged = false;
    std::vector<std::pair<std::string, Csv>> csvs;

    const RadialSeries T = characteristic_T(curve, grid, ctx.quadrature);
    Csv tcsv({"r", "T", "tolerance"});
    for (std::size_t i = 0; i < T.r.size(); ++i) {
        tcsv.row({num(T.r[i]), num(T.values[i]), num(T.achieved_tolerance[i])});
    }
    std::size_t tail = T.r.size() / 2;
    rep["characteristic"] = {{"points", T.r.size()}, {"tail_slope", log_slope(T.r, T.values, tail)}};
    csvs.emplace_back("characteristic.csv", std::move(tcsv));

    const bool run_fmt = !block.contains("fmt") || block["fmt"].get<bool>();
    json fmts = json::array();
    if (run_fmt) {
        for (std::size_t j = 0; j < F.size(); ++j) {
            json e{{"member", j + 1}, {"form", F.polys()[j].to_string()}};
            try {
                const FmtReport r = verify_fmt(curve, F.polys()[j], grid, ctx.quadrature);
                e["passed"] = r.passed;
                e["residual_range"] = r.residual_range;
                e["residual_max_abs"] = r.residual_max_abs;
                e["max_tolerance"] = r.max_tolerance;
                Csv c({"r", "T", "m", "N", "residual"});
                for (std::size_t i = 0; i < r.r.size(); ++i) {
                    c.row({num(r.r[i]), num(r.T[i]), num(r.m[i]), num(r.N[i]), num(r.residual[i])});
                }
                csvs.emplace_back("fmt_" + std::to_string(j + 1) + ".csv", std::move(c));
                flagged = flagged || !r.passed;
            } catch (const degeneracy_error &err) {
                e["passed"] = false;
                e["degenerate"] = err.what();
                flagged = true;
            }
            fmts.push_back(e);
        }
    }
    rep["fmt"] = fmts;

    std::optional<smt_mode> mode;
    if (block.contains("smt_mode")) {
        mode = parse_smt_mode(block["smt_mode"].get<std::string>());
    } else if (domain.kind == domain_kind::plane) {
        mode = smt_mode::delta_plane;
    } else if (domain.kind == domain_kind::annulus) {
        mode = smt_mode::delta_annulus;
    } else {
        notes.push_back("no hypersurface SMT diagnostic on discs");
    }
    if (mode) {
        SmtOptions so;
        so.mode = *mode;
        so.eps = ctx.eps;
        so.N = s.N;
        so.convention = ctx.convention;
        so.quadrature = ctx.quadrature;
        const SmtReport r = verify_smt_hypersurfaces(V, F, curve, grid, so);
        json sj{{"mode", to_string(r.mode)},
                {"vacuous", r.vacuous},
                {"passed", r.passed},
                {"delta", str(r.delta)},
                {"defect", surd_json(r.defect)},
                {"coefficient", surd_json(r.coefficient)},
                {"L", r.L.get_str()},
                {"truncation_insensitive", r.truncation_insensitive},
                {"zero_counts_certified", r.zero_counts_certified},
                {"notes", r.notes}};
        if (r.selection) {
            sj["selection"] = selection_json(*r.selection);
        }
        rep["smt"] = sj;
        if (!r.vacuous) {
            Csv c({"r", "T", "counting_sum", "slack", "allowance"});
            for (std::size_t i = 0; i < r.r.size(); ++i) {
                c.row({num(r.r[i]), num(r.T[i]), num(r.counting_sum[i]), num(r.slack[i]), num(r.allowance[i])});
            }
            csvs.emplace_back("smt.csv", std::move(c));
        }
        flagged = flagged || !r.passed || !r.zero_counts_certified;
    }

    if (block.contains("forms")) {
        std::vector<LinearForm> forms;
        const json &fj = block["forms"];
        if (!fj.is_array()) {
            throw schema_error(s.path + ": /curve/forms: expected an array of coefficient arrays");
        }
        for (std::size_t i = 0; i < fj.size(); ++i) {
            LinearForm f;
            if (!fj[i].is_array()) {
                throw schema_error(s.path + ": /curve/forms/" + std::to_string(i) + ": expected an array");
            }
            for (const auto &x : fj[i]) {
                f.push_back(rational_of(x, "/curve/forms/" + std::to_string(i)));
            }
            forms.push_back(f);
        }
        const SmtGeneralReport g = verify_smt_general(curve, forms, grid, ctx.quadrature);
        rep["smt_general"] = {{"flagged", g.flagged},
                              {"independent_subsets", g.independent_subsets},
                              {"unit_constant", g.unit_constant},
                              {"notes", g.notes}};
        Csv c({"r", "lhs", "rhs", "gap", "T0", "N0_W"});
        for (std::size_t i = 0; i < g.r.size(); ++i) {
            c.row({num(g.r[i]), num(g.lhs[i]), num(g.rhs[i]), num(g.gap[i]), num(g.T0[i]), num(g.N0_W[i])});
        }
        csvs.emplace_back("smt_general.csv", std::move(c));
        flagged = flagged || g.flagged;
    }
    rep["notes"] = notes;
    rep["flagged"] = flagged;

    out << "curve on " << to_string(domain.kind) << ", " << grid.size() << " radii, T tail slope "
        << fmt(rep["characteristic"]["tail_slope"].get<double>()) << "\n";
    for (const auto &e : fmts) {
        out << "FMT member " << e["member"].get<std::size_t>() << ": "
            << (e["passed"].get<bool>() ? "pass" : "FAIL") << "\n";
    }
    if (rep.contains("smt")) {
        out << "SMT (" << rep["smt"]["mode"].get<std::string>()
            << "): " << (rep["smt"]["vacuous"].get<bool>() ? "vacuous" : rep["smt"]["passed"].get<bool>() ? "pass" : "FAIL")
            << ", coefficient " << rep["smt"]["coefficient"]["exact"].get<std::string>() << "\n";
    }
    if (rep.contains("smt_general")) {
        out << "general SMT: " << (rep["smt_general"]["flagged"].get<bool>() ? "flagged" : "ok") << "\n";
    }
    emit(ctx, "curve", rep, csvs);
    return flagged ? exit_flagged : exit_pass;
}

struct PointsArgs {
    std::string places;
    std::string mode;
    std::optional<long> height_bound;
    std::optional<std::size_t> sample;
    std::string points_file;
    std::optional<std::uint64_t> seed;
};

int cmd_points(const Context &ctx, const PointsArgs &a, std::ostream &out)
{
    const Scene &s = need_scene(ctx);
    const json &block = s.points;
    auto str_opt = [&](const std::string &flag, const char *key, const std::string &fallback) {
        if (!flag.empty()) {
            return flag;
        }
        if (block.contains(key)) {
            if (!block[key].is_string()) {
                throw schema_error(s.path + ": /points/" + key + ": expected a string");
            }
            return block[key].get<std::string>();
        }
        return fallback;
    };
    auto int_opt = [&](const char *key) -> std::optional<long> {
        if (!block.contains(key)) {
            return std::nullopt;
        }
        if (!block[key].is_number_integer()) {
            throw schema_error(s.path + ": /points/" + key + ": expected an integer");
        }
        return block[key].get<long>();
    };
    const std::vector<Place> S = parse_places(str_opt(a.places, "places", "inf"));
    SchmidtOptions opt;
    opt.mode = parse_schmidt_mode(str_opt(a.mode, "mode", "a"));
    opt.eps = ctx.eps;
    opt.family = ctx.family;
    if (const auto l = int_opt("l")) {
        opt.l = static_cast<int>(*l);
    } else if (s.N) {
        opt.l = s.N;
    }
    const Variety V = s.make_variety(ctx.budget);
    std::vector<IntegerForm> family;
    for (const auto &p : s.family) {
        family.emplace_back(p);
    }

    std::vector<RationalPoint> points;
    if (!a.points_file.empty()) {
        std::ifstream in(a.points_file);
        if (!in) {
            throw input_error("cannot read points file " + a.points_file);
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') {
                points.push_back(RationalPoint::parse(line));
            }
        }
    } else if (block.contains("list")) {
        for (const auto &x : block["list"]) {
            if (!x.is_string()) {
                throw schema_error(s.path + ": /points/list: expected point strings");
            }
            points.push_back(RationalPoint::parse(x.get<std::string>()));
        }
    }
    const auto sample = a.sample ? std::optional<long>(static_cast<long>(*a.sample)) : int_opt("sample");
    if (sample && *sample > 0) {
        if (!V.is_projective_space()) {
            throw input_error("random sampling is only available on projective space; list the points instead");
        }
        const long B = a.height_bound ? *a.height_bound : int_opt("height_bound").value_or(100);
        const std::uint64_t seed = a.seed ? *a.seed : static_cast<std::uint64_t>(int_opt("seed").value_or(1));
        auto extra = sample_points(V.nvars(), family, B, static_cast<std::size_t>(*sample), seed);
        points.insert(points.end(), extra.begin(), extra.end());
    }
    if (points.empty()) {
        throw input_error("no points given (--points, /points/list or a sample size)");
    }

    const SchmidtReport r = check_theorem_1_5(V, family, S, points, opt);
    Csv csv({"x", "h", "lhs", "rhs", "slack", "exceptional", "identity", "relations"});
    json flagged_points = json::array();
    bool identity_ok = true;
    for (const auto &p : r.points) {
        std::string rel;
        for (const auto &x : p.relations) {
            rel += (rel.empty() ? "" : ";") + x;
        }
        csv.row({p.x.to_string(), num(p.h), num(p.lhs), num(p.rhs), num(p.slack), p.exceptional_candidate ? "1" : "0",
                 p.identity_holds ? "1" : "0", rel});
        identity_ok = identity_ok && p.identity_holds;
        if (p.exceptional_candidate) {
            flagged_points.push_back({{"x", p.x.to_string()}, {"slack", p.slack}, {"relations", p.relations}});
        }
    }
    json places = json::array();
    for (const auto &v : S) {
        places.push_back(v.to_string());
    }
    const json rep{{"mode", to_string(r.mode)},
                   {"l", r.l},
                   {"n", r.n},
                   {"coefficient", surd_json(r.coefficient)},
                   {"places", places},
                   {"points", r.points.size()},
                   {"flagged", r.flagged},
                   {"height_zero", r.skipped_height_zero},
                   {"identity_holds", identity_ok},
                   {"flagged_points", flagged_points}};
    out << r.points.size() << " points, mode " << to_string(r.mode) << ", l = " << r.l << ", coefficient "
        << r.coefficient.to_string() << "\n";
    out << r.flagged << " exceptional-set candidates, " << r.skipped_height_zero << " points of height 0\n";
    out << "all-places identity: " << (identity_ok ? "exact" : "VIOLATED") << "\n";
    emit(ctx, "points", rep, {{"points.csv", std::move(csv)}});
    return (r.flagged > 0 || !identity_ok) ? exit_flagged : exit_pass;
}

void add_common(CLI::App *cmd, Settings &s, bool scene_required)
{
    auto *opt = cmd->add_option("--scene", s.scene, "Scene file (JSON)");
    if (scene_required) {
        opt->required();
    }
    cmd->add_option("--out-dir", s.out_dir, "Directory for report files")->capture_default_str();
    cmd->add_option("--convention", s.convention, "skip-empty or literal");
    cmd->add_option("--eps", s.eps, "Epsilon (rational)");
    cmd->add_option("--grid", s.grid, "Radii as a:b:steps,log");
    cmd->add_option("--budget-degree", s.budget_degree, "Gröbner degree limit")->capture_default_str();
    cmd->add_option("--budget-subsets", s.budget_subsets, "Subset-pair limit of the Bézout checks")
        ->capture_default_str();
    cmd->add_option("--tolerance", s.tolerance, "Quadrature tolerance")->capture_default_str();
}

Context make_context(const Settings &s)
{
    Context ctx;
    ctx.settings = s;
    if (!s.scene.empty()) {
        ctx.scene = load_scene(s.scene);
        if (ctx.scene->convention) {
            ctx.convention = *ctx.scene->convention;
        }
        if (ctx.scene->eps) {
            ctx.eps = *ctx.scene->eps;
        }
    }
    if (!s.convention.empty()) {
        ctx.convention = parse_convention(s.convention);
    }
    if (!s.eps.empty()) {
        ctx.eps = parse_rational(s.eps);
    }
    if (sgn(ctx.eps) <= 0) {
        throw input_error("eps must be positive");
    }
    if (s.budget_degree < 1 || !(s.tolerance > 0)) {
        throw input_error("budgets and tolerances must be positive");
    }
    ctx.budget.max_degree = s.budget_degree;
    ctx.family.budget = ctx.budget;
    ctx.family.max_pairs = s.budget_subsets;
    ctx.quadrature.tolerance = s.tolerance;
    return ctx;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Nevanlinna theory and Diophantine approximation laboratory", "smtlab"};
    app.require_subcommand(1);
    Settings settings;
    BoundsArgs bargs;
    HilbertArgs hargs;
    PointsArgs pargs;

    auto *analyze = app.add_subcommand("analyze", "Family geometry: position, Bézout properties, Delta, selections");
    add_common(analyze, settings, true);

    auto *bounds = app.add_subcommand("bounds", "Truncation levels and defect bounds");
    add_common(bounds, settings, false);
    bounds->add_option("--k", bargs.k, "Dimension of V");
    bounds->add_option("--N", bargs.N, "Subgeneral level");
    bounds->add_option("--d", bargs.d, "Common degree")->capture_default_str();
    bounds->add_option("--v", bargs.v, "Degree of V")->capture_default_str();
    bounds->add_option("--q", bargs.q, "Family size (enables M0)");
    bounds->add_option("--table", bargs.table, "All pairs 1 <= k < N <= TABLE");

    auto *hilbert = app.add_subcommand("hilbert", "Hilbert weights, Chow-weight estimates and margins");
    add_common(hilbert, settings, true);
    hilbert->add_option("--u", hargs.u, "Comma-separated degrees");
    hilbert->add_option("--c", hargs.c, "Comma-separated weights");
    hilbert->add_option("--indices", hargs.indices, "1-based hyperplane indices for the lower bound");

    auto *curve = app.add_subcommand("curve", "Nevanlinna functions, FMT and SMT diagnostics");
    add_common(curve, settings, true);

    auto *points = app.add_subcommand("points", "Pointwise Schmidt-type inequality report");
    add_common(points, settings, true);
    points->add_option("--S", pargs.places, "Places, e.g. inf,2,3");
    points->add_option("--mode", pargs.mode, "a (weak Bézout) or b (Bézout)");
    points->add_option("--height-bound", pargs.height_bound, "Coordinate bound for sampling");
    points->add_option("--sample", pargs.sample, "Number of random points");
    points->add_option("--points", pargs.points_file, "File with one point per line");
    points->add_option("--seed", pargs.seed, "Sampling seed");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::ParseError &e) {
        err << "error [usage]: " << e.what() << "\n";
        return exit_error;
    }

    try {
        const Context ctx = make_context(settings);
        if (analyze->parsed()) {
            return cmd_analyze(ctx, out);
        }
        if (bounds->parsed()) {
            return cmd_bounds(ctx, bargs, out);
        }
        if (hilbert->parsed()) {
            return cmd_hilbert(ctx, hargs, out);
        }
        if (curve->parsed()) {
            return cmd_curve(ctx, out);
        }
        return cmd_points(ctx, pargs, out);
    } catch (const error &e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what();
        if (!settings.scene.empty()) {
            err << " (scene " << settings.scene << ")";
        }
        err << "\n";
        try {
            const fs::path dir(settings.out_dir);
            fs::create_directories(dir);
            const json j{{"code", to_string(e.code())}, {"message", e.what()}, {"scene", settings.scene}};
            write_file(dir / "error.json", j.dump(2) + "\n");
        } catch (const std::exception &) {
        }
        return exit_error;
    } catch (const std::exception &e) {
        err << "error [internal]: " << e.what() << "\n";
        return exit_error;
    }
}

} // namespace smtlab::cli
