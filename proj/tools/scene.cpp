#include "scene.hpp"

#include <smtlab/error.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace smtlab::cli
{

namespace
{

[[noreturn]] void fail(const std::string &path, const std::string &where, const std::string &what)
{
    throw schema_error(path + ": " + (where.empty() ? "/" : where) + ": " + what);
}

void check_keys(const std::string &path, const json &j, const std::string &where, const std::set<std::string> &allowed)
{
    for (const auto &[key, value] : j.items()) {
        if (!allowed.contains(key)) {
            fail(path, where + "/" + key, "unknown key");
        }
    }
}

std::vector<Poly> poly_list(const std::string &path, const json &j, const std::string &where, std::size_t nvars,
                            bool allow_empty)
{
    if (!j.is_array()) {
        fail(path, where, "expected an array of polynomial strings");
    }
    if (j.empty() && !allow_empty) {
        fail(path, where, "must not be empty");
    }
    std::vector<Poly> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + "/" + std::to_string(i);
        if (!j[i].is_string()) {
            fail(path, at, "expected a polynomial string");
        }
        try {
            out.push_back(parse_poly(j[i].get<std::string>(), nvars));
        } catch (const error &e) {
            fail(path, at, e.what());
        }
    }
    return out;
}

} // namespace

Variety Scene::make_variety(const GroebnerBudget &budget) const
{
    return Variety(Ideal(ambient + 1, variety), smooth, budget);
}

Rational rational_of(const json &j, const std::string &where)
{
    if (j.is_number_integer()) {
        return make_rational(j.get<long>());
    }
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const error &e) {
            throw schema_error(where + ": " + e.what());
        }
    }
    throw schema_error(where + ": expected an integer or a rational string");
}

std::vector<int> int_list(const json &j, const std::string &where)
{
    if (j.is_string()) {
        return parse_int_list(j.get<std::string>(), where);
    }
    if (!j.is_array()) {
        throw schema_error(where + ": expected an array of integers");
    }
    std::vector<int> out;
    for (const auto &x : j) {
        if (!x.is_number_integer()) {
            throw schema_error(where + ": expected an array of integers");
        }
        out.push_back(x.get<int>());
    }
    return out;
}

std::vector<int> parse_int_list(const std::string &text, const std::string &where)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw schema_error(where + ": bad integer '" + item + "'");
        }
    }
    if (out.empty()) {
        throw schema_error(where + ": empty list");
    }
    return out;
}

std::vector<double> parse_grid(const std::string &text)
{
    const auto comma = text.find(',');
    const std::string range = text.substr(0, comma);
    const std::string kind = comma == std::string::npos ? "log" : text.substr(comma + 1);
    double a = 0, b = 0;
    long steps = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(range);
    if (!(in >> a >> c1 >> b >> c2 >> steps) || c1 != ':' || c2 != ':' || !in.eof()) {
        throw input_error("bad grid '" + text + "' (expected a:b:steps,log)");
    }
    if (!(a > 0) || !(b > a) || steps < 2) {
        throw input_error("grid needs 0 < a < b and at least two steps");
    }
    if (kind == "log") {
        return log_grid(a, b, static_cast<std::size_t>(steps));
    }
    if (kind == "lin") {
        std::vector<double> g;
        for (long i = 0; i < steps; ++i) {
            g.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
        }
        return g;
    }
    throw input_error("grid kind must be log or lin");
}

Domain parse_domain(const json &j, const std::string &where)
{
    std::string kind;
    double R = 0;
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else if (j.is_object()) {
        for (const auto &[key, value] : j.items()) {
            if (key != "kind" && key != "R") {
                throw schema_error(where + "/" + key + ": unknown key");
            }
        }
        if (!j.contains("kind") || !j["kind"].is_string()) {
            throw schema_error(where + "/kind: expected a string");
        }
        kind = j["kind"].get<std::string>();
        if (j.contains("R")) {
            if (j["R"].is_number()) {
                R = j["R"].get<double>();
            } else if (j["R"].is_string() && j["R"].get<std::string>() == "inf") {
                R = std::numeric_limits<double>::infinity();
            } else {
                throw schema_error(where + "/R: expected a number or \"inf\"");
            }
        }
    } else {
        throw schema_error(where + ": expected a domain kind or object");
    }
    const domain_kind k = parse_domain_kind(kind);
    if (k == domain_kind::plane) {
        return Domain::plane();
    }
    if (!(R > 1) && k == domain_kind::annulus) {
        throw schema_error(where + "/R: annulus needs R > 1");
    }
    if (!(R > 0)) {
        throw schema_error(where + "/R: disc needs R > 0");
    }
    return k == domain_kind::disc ? Domain::disc(R) : Domain::annulus(R);
}

Scene load_scene(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot read scene " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        fail(path, "", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        fail(path, "", "scene must be a JSON object");
    }
    check_keys(path, j, "",
               {"version", "ambient", "variety", "smooth", "family", "N", "convention", "eps", "hilbert", "curve",
                "points", "description"});
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != scene_version) {
        fail(path, "/version", "expected version " + std::to_string(scene_version));
    }
    if (!j.contains("ambient") || !j["ambient"].is_number_integer() || j["ambient"].get<long>() < 1) {
        fail(path, "/ambient", "expected a positive integer");
    }
    Scene s;
    s.path = path;
    s.ambient = j["ambient"].get<std::size_t>();
    const std::size_t nvars = s.ambient + 1;
    if (j.contains("variety")) {
        s.variety = poly_list(path, j["variety"], "/variety", nvars, true);
    }
    if (j.contains("smooth")) {
        if (!j["smooth"].is_boolean()) {
            fail(path, "/smooth", "expected a boolean");
        }
        s.smooth = j["smooth"].get<bool>();
    }
    if (!j.contains("family")) {
        fail(path, "/family", "missing");
    }
    s.family = poly_list(path, j["family"], "/family", nvars, false);
    if (j.contains("N")) {
        if (!j["N"].is_number_integer()) {
            fail(path, "/N", "expected an integer");
        }
        s.N = j["N"].get<int>();
    }
    if (j.contains("convention")) {
        if (!j["convention"].is_string()) {
            fail(path, "/convention", "expected a string");
        }
        try {
            s.convention = parse_convention(j["convention"].get<std::string>());
        } catch (const error &e) {
            fail(path, "/convention", e.what());
        }
    }
    if (j.contains("eps")) {
        try {
            s.eps = rational_of(j["eps"], "/eps");
        } catch (const error &e) {
            fail(path, "/eps", e.what());
        }
    }
    for (const char *block : {"hilbert", "curve", "points"}) {
        if (j.contains(block)) {
            if (!j[block].is_object()) {
                fail(path, std::string("/") + block, "expected an object");
            }
            (block == std::string("hilbert") ? s.hilbert : block == std::string("curve") ? s.curve : s.points) =
                j[block];
        }
    }
    if (!s.hilbert.is_null()) {
        check_keys(path, s.hilbert, "/hilbert", {"u", "c", "indices", "estimate_u"});
    }
    if (!s.curve.is_null()) {
        check_keys(path, s.curve, "/curve", {"components", "domain", "grid", "smt_mode", "forms", "fmt"});
        if (!s.curve.contains("components") || !s.curve["components"].is_array()) {
            fail(path, "/curve/components", "expected an array of expressions");
        }
    }
    if (!s.points.is_null()) {
        check_keys(path, s.points, "/points", {"places", "mode", "l", "list", "sample", "height_bound", "seed"});
    }
    return s;
}

} // namespace smtlab::cli
