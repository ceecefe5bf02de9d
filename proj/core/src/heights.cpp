#include <smtlab/error.hpp>
#include <smtlab/heights.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace smtlab
{

namespace
{

bool is_prime(const Integer &n)
{
    return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

Integer pollard_brent(const Integer &n, unsigned long c)
{
    if (mpz_even_p(n.get_mpz_t())) {
        return 2;
    }
    Integer x = 2, y = 2, d = 1;
    auto step = [&](Integer &v) {
        v = v * v + c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (d == 1) {
        step(x);
        step(y);
        step(y);
        Integer diff = x - y;
        mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    return d;
}

void factor_into(Integer n, std::map<Integer, long> &out)
{
    if (n == 1) {
        return;
    }
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    for (unsigned long c = 1;; ++c) {
        const Integer d = pollard_brent(n, c);
        if (d != n) {
            factor_into(d, out);
            factor_into(n / d, out);
            return;
        }
    }
}

long ord(const Integer &n, const Integer &p)
{
    if (n == 0) {
        throw input_error("ord of zero");
    }
    Integer rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long ord(const Rational &q, const Integer &p)
{
    return ord(q.get_num(), p) - ord(q.get_den(), p);
}

Rational abs_of(const Rational &q)
{
    return sgn(q) < 0 ? Rational(-q) : q;
}

void add_primes(const Rational &q, std::set<Integer> &out)
{
    if (sgn(q) == 0) {
        return;
    }
    for (const auto &[p, e] : factor(q.get_num())) {
        out.insert(p);
    }
    for (const auto &[p, e] : factor(q.get_den())) {
        out.insert(p);
    }
}

// log ||y||_v for a scalar y != 0.
LogValue log_norm_scalar(const Rational &y, const Place &v)
{
    if (v.archimedean()) {
        return LogValue::log_abs(y);
    }
    return LogValue::log_prime(v.p, Rational(-ord(y, v.p)));
}

std::vector<Rational> coefficients(const Poly &Q)
{
    std::vector<Rational> out;
    for (const auto &[m, c] : Q.terms()) {
        out.push_back(c);
    }
    return out;
}

} // namespace

std::map<Integer, long> factor(const Integer &n)
{
    if (n == 0) {
        throw input_error("cannot factor zero");
    }
    Integer m = n;
    mpz_abs(m.get_mpz_t(), m.get_mpz_t());
    std::map<Integer, long> out;
    for (unsigned long p = 2; p < 10000 && m > 1; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            long e = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            }
            out[Integer(p)] = e;
        }
    }
    factor_into(m, out);
    return out;
}

LogValue LogValue::log_abs(const Rational &x)
{
    if (sgn(x) == 0) {
        throw input_error("log of zero");
    }
    LogValue out;
    for (const auto &[p, e] : factor(x.get_num())) {
        out.m_e[p] += e;
    }
    for (const auto &[p, e] : factor(x.get_den())) {
        out.m_e[p] -= e;
    }
    std::erase_if(out.m_e, [](const auto &kv) { return sgn(kv.second) == 0; });
    return out;
}

LogValue LogValue::log_prime(const Integer &p, const Rational &e)
{
    LogValue out;
    if (sgn(e) != 0) {
        out.m_e[p] = e;
    }
    return out;
}

double LogValue::value() const
{
    double s = 0;
    for (const auto &[p, e] : m_e) {
        s += to_double(e) * std::log(p.get_d());
    }
    return s;
}

std::string LogValue::to_string() const
{
    if (m_e.empty()) {
        return "0";
    }
    std::string s;
    for (const auto &[p, e] : m_e) {
        if (!s.empty()) {
            s += " + ";
        }
        s += "(" + smtlab::to_string(e) + ")*log(" + p.get_str() + ")";
    }
    return s;
}

LogValue &LogValue::operator+=(const LogValue &o)
{
    for (const auto &[p, e] : o.m_e) {
        Rational &t = m_e[p];
        t += e;
        t.canonicalize();
        if (sgn(t) == 0) {
            m_e.erase(p);
        }
    }
    return *this;
}

LogValue &LogValue::operator-=(const LogValue &o)
{
    return *this += o * Rational(-1);
}

LogValue &LogValue::operator*=(const Rational &c)
{
    if (sgn(c) == 0) {
        m_e.clear();
        return *this;
    }
    for (auto &[p, e] : m_e) {
        e *= c;
        e.canonicalize();
    }
    return *this;
}

Place Place::prime(const Integer &p)
{
    if (!is_prime(p)) {
        throw input_error(p.get_str() + " is not prime");
    }
    return {p};
}

std::string Place::to_string() const
{
    return archimedean() ? "inf" : p.get_str();
}

std::vector<Place> parse_places(const std::string &text)
{
    std::vector<Place> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::erase_if(item, [](char ch) { return ch == ' ' || ch == '\t'; });
        Place v;
        if (item == "inf" || item == "infinity" || item == "oo") {
            v = Place::infinity();
        } else {
            Integer p;
            if (item.empty() || p.set_str(item, 10) != 0) {
                throw input_error("bad place '" + item + "'");
            }
            v = Place::prime(p);
        }
        if (std::find(out.begin(), out.end(), v) != out.end()) {
            throw input_error("repeated place " + v.to_string());
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw input_error("empty place set");
    }
    return out;
}

RationalPoint::RationalPoint(const std::vector<Rational> &coordinates)
{
    if (coordinates.empty() || std::all_of(coordinates.begin(), coordinates.end(),
                                           [](const Rational &x) { return sgn(x) == 0; })) {
        throw input_error("zero vector is not a projective point");
    }
    Integer den = 1;
    for (const auto &c : coordinates) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    Integer g = 0;
    for (const auto &c : coordinates) {
        m_x.push_back(c.get_num() * (den / c.get_den()));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m_x.back().get_mpz_t());
    }
    const auto lead = std::find_if(m_x.begin(), m_x.end(), [](const Integer &x) { return x != 0; });
    if (*lead < 0) {
        g = -g;
    }
    for (auto &x : m_x) {
        x /= g;
    }
}

RationalPoint RationalPoint::parse(const std::string &text)
{
    std::string t;
    for (char ch : text) {
        if (ch != '(' && ch != ')' && ch != '[' && ch != ']' && ch != ' ') {
            t += ch == ':' ? ',' : ch;
        }
    }
    std::vector<Rational> c;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        c.push_back(parse_rational(item));
    }
    return RationalPoint(c);
}

std::vector<Rational> RationalPoint::as_rationals() const
{
    return {m_x.begin(), m_x.end()};
}

std::string RationalPoint::to_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < m_x.size(); ++i) {
        s += (i ? ":" : "") + m_x[i].get_str();
    }
    return s + ")";
}

IntegerForm::IntegerForm(const Poly &Q)
{
    const auto d = Q.homogeneous_degree();
    if (!d || *d < 1) {
        throw input_error("form must be homogeneous of positive degree: " + Q.to_string());
    }
    m_poly = Q.primitive_part();
    m_degree = *d;
}

LogValue IntegerForm::coefficient_height() const
{
    Rational top = 0;
    for (const auto &[m, c] : m_poly.terms()) {
        top = std::max(top, abs_of(c));
    }
    return LogValue::log_abs(top);
}

LogValue log_norm(const std::vector<Rational> &x, const Place &v)
{
    std::optional<long> min_ord;
    Rational top = 0;
    for (const auto &c : x) {
        if (sgn(c) == 0) {
            continue;
        }
        if (v.archimedean()) {
            top = std::max(top, abs_of(c));
        } else {
            const long o = ord(c, v.p);
            min_ord = min_ord ? std::min(*min_ord, o) : o;
        }
    }
    if (v.archimedean()) {
        if (sgn(top) == 0) {
            throw input_error("zero vector has no norm");
        }
        return LogValue::log_abs(top);
    }
    if (!min_ord) {
        throw input_error("zero vector has no norm");
    }
    return LogValue::log_prime(v.p, Rational(-*min_ord));
}

LogValue height_exact(const std::vector<Rational> &x)
{
    std::set<Integer> primes;
    for (const auto &c : x) {
        add_primes(c, primes);
    }
    LogValue h = log_norm(x, Place::infinity());
    for (const auto &p : primes) {
        h += log_norm(x, Place{p});
    }
    return h;
}

LogValue height_exact(const RationalPoint &x)
{
    const LogValue all = height_exact(x.as_rationals());
    const LogValue arch = log_norm(x.as_rationals(), Place::infinity());
    if (!(all == arch)) {
        throw consistency_error("height over all places differs from the archimedean height of " + x.to_string());
    }
    return arch;
}

double height(const RationalPoint &x)
{
    return height_exact(x).value();
}

LogValue weil_function_exact(const Poly &Q, const Place &v, const std::vector<Rational> &x)
{
    const auto d = Q.homogeneous_degree();
    if (!d) {
        throw input_error("form must be homogeneous");
    }
    const Rational value = Q.evaluate_exact(x);
    if (sgn(value) == 0) {
        throw degeneracy_error("pole: point lies on the divisor " + Q.to_string() + " = 0");
    }
    return log_norm(x, v) * Rational(*d) + log_norm(coefficients(Q), v) - log_norm_scalar(value, v);
}

double weil_function(const IntegerForm &Q, const Place &v, const RationalPoint &x)
{
    return weil_function_exact(Q.poly(), v, x.as_rationals()).value();
}

LogValue product_formula_check(const Rational &x)
{
    if (sgn(x) == 0) {
        throw input_error("product formula needs x != 0");
    }
    std::set<Integer> primes;
    add_primes(x, primes);
    LogValue s = log_norm_scalar(x, Place::infinity());
    for (const auto &p : primes) {
        s += log_norm_scalar(x, Place{p});
    }
    return s;
}

std::vector<Integer> support_primes(const std::vector<IntegerForm> &family, const RationalPoint &x)
{
    std::set<Integer> primes;
    const auto xr = x.as_rationals();
    for (const auto &c : xr) {
        add_primes(c, primes);
    }
    for (const auto &Q : family) {
        for (const auto &c : coefficients(Q.poly())) {
            add_primes(c, primes);
        }
        add_primes(Q.poly().evaluate_exact(xr), primes);
    }
    return {primes.begin(), primes.end()};
}

ArithmeticBounds arithmetic_bound_coefficients(int l, int n, const Rational &eps)
{
    if (n < 1 || l <= n) {
        throw input_error("need l > n >= 1");
    }
    if (sgn(eps) < 0) {
        throw input_error("eps must be non-negative");
    }
    ArithmeticBounds b;
    b.tau1 = tau(l, n, true);
    b.bound_a = defect_bound(defect_theorem::F, n, l) + Surd(eps);
    b.bound_b = selection_defect(n, l, b.tau1) + Surd(eps);
    return b;
}

std::string to_string(schmidt_mode m)
{
    return m == schmidt_mode::weak_bezout ? "a" : "b";
}

schmidt_mode parse_schmidt_mode(const std::string &s)
{
    if (s == "a" || s == "weak-bezout") {
        return schmidt_mode::weak_bezout;
    }
    if (s == "b" || s == "bezout") {
        return schmidt_mode::bezout;
    }
    throw input_error("unknown mode '" + s + "' (expected a or b)");
}

namespace
{

std::vector<std::string> simple_relations(const RationalPoint &x)
{
    std::vector<std::string> out;
    const auto &c = x.coordinates();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) {
            out.push_back("x" + std::to_string(i) + " = 0");
        }
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            if (c[i] != 0 && c[i] == c[j]) {
                out.push_back("x" + std::to_string(i) + " = x" + std::to_string(j));
            } else if (c[i] != 0 && c[i] == -c[j]) {
                out.push_back("x" + std::to_string(i) + " = -x" + std::to_string(j));
            }
        }
    }
    return out;
}

} // namespace

SchmidtReport check_theorem_1_5(const Variety &V, const std::vector<IntegerForm> &family,
                                const std::vector<Place> &S, const std::vector<RationalPoint> &points,
                                const SchmidtOptions &opt)
{
    if (family.empty()) {
        throw input_error("empty family");
    }
    if (S.empty()) {
        throw input_error("empty place set");
    }
    std::vector<Poly> polys;
    for (const auto &Q : family) {
        if (Q.poly().nvars() != V.nvars()) {
            throw input_error("form " + Q.poly().to_string() + " lives in the wrong projective space");
        }
        polys.push_back(Q.poly());
    }
    const FamilyGeometry G(V, HypersurfaceFamily(V, polys), opt.family);
    const int n = V.dim();
    int l = 0;
    if (opt.l) {
        l = *opt.l;
        if (l <= n) {
            throw input_error("subgeneral level must exceed dim V");
        }
        if (!G.subgeneral_position(l).holds) {
            throw precondition_error("family is not in " + std::to_string(l) + "-subgeneral position");
        }
    } else {
        const auto level = G.position_level();
        if (!level) {
            throw precondition_error("family has a common point on V");
        }
        l = std::max(*level, n + 1);
    }
    if (opt.mode == schmidt_mode::weak_bezout ? !G.weak_bezout().holds : !G.bezout().holds) {
        throw precondition_error(opt.mode == schmidt_mode::weak_bezout ? "family lacks the weak Bezout property"
                                                                       : "family lacks the Bezout property");
    }
    const ArithmeticBounds b = arithmetic_bound_coefficients(l, n, opt.eps);

    SchmidtReport rep;
    rep.mode = opt.mode;
    rep.l = l;
    rep.n = n;
    rep.coefficient = opt.mode == schmidt_mode::weak_bezout ? b.bound_a : b.bound_b;
    rep.places = S;
    const double coef = rep.coefficient.to_double();
    const Rational q(static_cast<long>(family.size()));
    LogValue coeff_heights;
    for (const auto &Q : family) {
        coeff_heights += Q.coefficient_height() * Rational(1, Q.degree());
    }

    for (const auto &x : points) {
        if (x.size() != V.nvars()) {
            throw input_error("point " + x.to_string() + " has the wrong number of coordinates");
        }
        const auto xr = x.as_rationals();
        for (const auto &g : V.ideal().generators()) {
            if (sgn(g.evaluate_exact(xr)) != 0) {
                throw input_error("point " + x.to_string() + " is not on V");
            }
        }
        for (const auto &Q : family) {
            if (sgn(Q.poly().evaluate_exact(xr)) == 0) {
                throw input_error("point " + x.to_string() + " lies on " + Q.poly().to_string() + " = 0");
            }
        }
        PointReport pr{x, 0, 0, 0, 0, false, false, {}};
        const LogValue h = height_exact(x);
        LogValue lhs;
        for (const auto &v : S) {
            for (const auto &Q : family) {
                lhs += weil_function_exact(Q.poly(), v, xr) * Rational(1, Q.degree());
            }
        }
        LogValue all;
        std::vector<Place> every{Place::infinity()};
        for (const auto &p : support_primes(family, x)) {
            every.push_back(Place{p});
        }
        for (const auto &v : every) {
            for (const auto &Q : family) {
                all += weil_function_exact(Q.poly(), v, xr) * Rational(1, Q.degree());
            }
        }
        pr.identity_holds = all == h * q + coeff_heights;
        pr.h = h.value();
        pr.lhs = lhs.value();
        pr.rhs = coef * pr.h;
        pr.slack = pr.rhs - pr.lhs;
        if (h.is_zero()) {
            ++rep.skipped_height_zero;
        } else if (pr.slack < -1e-12 * std::max(1.0, std::abs(pr.rhs))) {
            pr.exceptional_candidate = true;
            pr.relations = simple_relations(x);
            ++rep.flagged;
        }
        rep.points.push_back(std::move(pr));
    }
    return rep;
}

std::vector<RationalPoint> sample_points(std::size_t nvars, const std::vector<IntegerForm> &family, long B,
                                         std::size_t count, std::uint64_t seed)
{
    if (B < 1 || nvars < 2) {
        throw input_error("sampling needs B >= 1 and at least two coordinates");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coord(-B, B);
    std::vector<RationalPoint> out;
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > 100 * count + 1000) {
            throw resource_error("could not sample enough points off the divisors");
        }
        std::vector<Rational> c;
        for (std::size_t i = 0; i < nvars; ++i) {
            c.push_back(make_rational(coord(rng)));
        }
        if (std::all_of(c.begin(), c.end(), [](const Rational &v) { return sgn(v) == 0; })) {
            continue;
        }
        const RationalPoint x(c);
        const auto xr = x.as_rationals();
        if (std::any_of(family.begin(), family.end(),
                        [&](const IntegerForm &Q) { return sgn(Q.poly().evaluate_exact(xr)) == 0; })) {
            continue;
        }
        out.push_back(x);
    }
    return out;
}

} // namespace smtlab
