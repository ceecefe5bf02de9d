#include <smtlab/error.hpp>
#include <smtlab/poly.hpp>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace smtlab
{

Monomial::Monomial(std::vector<int> exponents) : m_exp(std::move(exponents))
{
    for (int e : m_exp) {
        if (e < 0) {
            throw input_error("negative exponent in monomial");
        }
        m_degree += e;
    }
}

Monomial Monomial::variable(std::size_t nvars, std::size_t index, int power)
{
    Monomial m(nvars);
    m.m_exp.at(index) = power;
    m.m_degree = power;
    return m;
}

bool Monomial::divides(const Monomial &other) const noexcept
{
    if (m_degree > other.m_degree) {
        return false;
    }
    for (std::size_t i = 0; i < m_exp.size(); ++i) {
        if (m_exp[i] > other.m_exp[i]) {
            return false;
        }
    }
    return true;
}

bool Monomial::coprime_with(const Monomial &other) const noexcept
{
    for (std::size_t i = 0; i < m_exp.size(); ++i) {
        if (m_exp[i] > 0 && other.m_exp[i] > 0) {
            return false;
        }
    }
    return true;
}

Monomial Monomial::operator*(const Monomial &other) const
{
    Monomial r(*this);
    for (std::size_t i = 0; i < m_exp.size(); ++i) {
        r.m_exp[i] += other.m_exp[i];
    }
    r.m_degree += other.m_degree;
    return r;
}

Monomial Monomial::operator/(const Monomial &divisor) const
{
    Monomial r(*this);
    for (std::size_t i = 0; i < m_exp.size(); ++i) {
        r.m_exp[i] -= divisor.m_exp[i];
    }
    r.m_degree -= divisor.m_degree;
    return r;
}

Monomial Monomial::lcm(const Monomial &other) const
{
    Monomial r(*this);
    r.m_degree = 0;
    for (std::size_t i = 0; i < m_exp.size(); ++i) {
        r.m_exp[i] = std::max(m_exp[i], other.m_exp[i]);
        r.m_degree += r.m_exp[i];
    }
    return r;
}

Monomial Monomial::gcd(const Monomial &other) const
{
    Monomial r(*this);
    r.m_degree = 0;
    for (std::size_t i = 0; i < m_exp.size(); ++i) {
        r.m_exp[i] = std::min(m_exp[i], other.m_exp[i]);
        r.m_degree += r.m_exp[i];
    }
    return r;
}

long Monomial::weighted_degree(std::span<const int> grading) const noexcept
{
    long d = 0;
    for (std::size_t i = 0; i < m_exp.size(); ++i) {
        d += static_cast<long>(m_exp[i]) * grading[i];
    }
    return d;
}

std::string Monomial::to_string(const std::string &prefix) const
{
    std::string out;
    for (std::size_t i = 0; i < m_exp.size(); ++i) {
        if (m_exp[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += '*';
        }
        out += prefix + std::to_string(i);
        if (m_exp[i] > 1) {
            out += '^' + std::to_string(m_exp[i]);
        }
    }
    return out.empty() ? "1" : out;
}

namespace
{

void monomials_rec(std::vector<int> &cur, std::size_t pos, int remaining, std::vector<Monomial> &out)
{
    if (pos + 1 == cur.size()) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        cur[pos] = 0;
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[pos] = e;
        monomials_rec(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

} // namespace

std::vector<Monomial> monomials_of_degree(std::size_t nvars, int u)
{
    std::vector<Monomial> out;
    if (nvars == 0) {
        if (u == 0) {
            out.emplace_back(std::vector<int>{});
        }
        return out;
    }
    if (u < 0) {
        return out;
    }
    std::vector<int> cur(nvars, 0);
    monomials_rec(cur, 0, u, out);
    return out;
}

Poly Poly::constant(std::size_t nvars, const Rational &c)
{
    Poly p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t index)
{
    Poly p(nvars);
    p.add_term(Monomial::variable(nvars, index), 1);
    return p;
}

Poly Poly::term(const Monomial &m, const Rational &c)
{
    Poly p(m.nvars());
    p.add_term(m, c);
    return p;
}

int Poly::total_degree() const
{
    int d = -1;
    for (const auto &[m, c] : m_terms) {
        d = std::max(d, m.degree());
    }
    return d;
}

bool Poly::is_homogeneous() const
{
    return homogeneous_degree().has_value();
}

bool Poly::is_homogeneous(std::span<const int> grading) const
{
    if (m_terms.empty()) {
        return false;
    }
    const long d = m_terms.begin()->first.weighted_degree(grading);
    return std::all_of(m_terms.begin(), m_terms.end(),
                       [&](const auto &t) { return t.first.weighted_degree(grading) == d; });
}

std::optional<int> Poly::homogeneous_degree() const
{
    if (m_terms.empty()) {
        return std::nullopt;
    }
    const int d = m_terms.begin()->first.degree();
    for (const auto &[m, c] : m_terms) {
        if (m.degree() != d) {
            return std::nullopt;
        }
    }
    return d;
}

Rational Poly::coefficient(const Monomial &m) const
{
    auto it = m_terms.find(m);
    return it == m_terms.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial &m, const Rational &c)
{
    if (m.nvars() != m_nvars) {
        throw input_error("monomial arity does not match polynomial ring");
    }
    if (c == 0) {
        return;
    }
    auto [it, inserted] = m_terms.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            m_terms.erase(it);
        }
    }
}

Poly &Poly::operator+=(const Poly &other)
{
    if (other.m_nvars != m_nvars) {
        throw input_error("polynomial rings differ in +");
    }
    for (const auto &[m, c] : other.m_terms) {
        add_term(m, c);
    }
    return *this;
}

Poly &Poly::operator-=(const Poly &other)
{
    if (other.m_nvars != m_nvars) {
        throw input_error("polynomial rings differ in -");
    }
    for (const auto &[m, c] : other.m_terms) {
        add_term(m, -c);
    }
    return *this;
}

Poly &Poly::operator*=(const Rational &c)
{
    if (c == 0) {
        m_terms.clear();
        return *this;
    }
    for (auto &[m, coef] : m_terms) {
        coef *= c;
    }
    return *this;
}

Poly operator*(const Poly &a, const Poly &b)
{
    if (a.m_nvars != b.m_nvars) {
        throw input_error("polynomial rings differ in *");
    }
    Poly r(a.m_nvars);
    for (const auto &[ma, ca] : a.m_terms) {
        for (const auto &[mb, cb] : b.m_terms) {
            r.add_term(ma * mb, ca * cb);
        }
    }
    return r;
}

Poly Poly::operator-() const
{
    Poly r(*this);
    for (auto &[m, c] : r.m_terms) {
        c = -c;
    }
    return r;
}

Poly Poly::pow(unsigned n) const
{
    Poly result = Poly::constant(m_nvars, 1);
    Poly base = *this;
    while (n > 0) {
        if (n & 1U) {
            result = result * base;
        }
        n >>= 1U;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

Poly Poly::primitive_part() const
{
    if (m_terms.empty()) {
        return *this;
    }
    Integer den_lcm = 1;
    for (const auto &[m, c] : m_terms) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    Integer content = 0;
    for (const auto &[m, c] : m_terms) {
        Integer v = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
    }
    Poly r(*this);
    Rational scale(den_lcm, content);
    scale.canonicalize();
    r *= scale;
    return r;
}

Poly Poly::remap(std::size_t new_nvars, std::span<const std::size_t> map) const
{
    if (map.size() != m_nvars) {
        throw input_error("variable map arity mismatch");
    }
    Poly r(new_nvars);
    for (const auto &[m, c] : m_terms) {
        std::vector<int> e(new_nvars, 0);
        for (std::size_t i = 0; i < m_nvars; ++i) {
            e.at(map[i]) += m[i];
        }
        r.add_term(Monomial(std::move(e)), c);
    }
    return r;
}

Rational Poly::evaluate_exact(std::span<const Rational> point) const
{
    if (point.size() != m_nvars) {
        throw input_error("evaluation point arity mismatch");
    }
    Rational acc = 0;
    for (const auto &[m, c] : m_terms) {
        Rational t = c;
        for (std::size_t i = 0; i < m_nvars; ++i) {
            if (m[i] > 0) {
                t *= smtlab::pow(point[i], static_cast<unsigned long>(m[i]));
            }
        }
        acc += t;
    }
    return acc;
}

std::string Poly::to_string(const std::string &prefix) const
{
    if (m_terms.empty()) {
        return "0";
    }
    std::string out;
    // Highest total degree first, then descending lex, for readability.
    std::vector<const term_map::value_type *> order;
    order.reserve(m_terms.size());
    for (const auto &t : m_terms) {
        order.push_back(&t);
    }
    std::sort(order.begin(), order.end(), [](const auto *a, const auto *b) {
        if (a->first.degree() != b->first.degree()) {
            return a->first.degree() > b->first.degree();
        }
        return b->first < a->first;
    });
    bool first = true;
    for (const auto *t : order) {
        Rational c = t->second;
        const bool neg = c < 0;
        if (neg) {
            c = -c;
        }
        if (first) {
            out += neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        const bool unit_monomial = t->first.degree() == 0;
        if (c != 1 || unit_monomial) {
            out += c.get_str();
            if (!unit_monomial) {
                out += '*';
            }
        }
        if (!unit_monomial) {
            out += t->first.to_string(prefix);
        }
    }
    return out;
}

namespace
{

class poly_parser
{
public:
    poly_parser(const std::string &text, std::size_t nvars, const std::string &prefix)
        : m_text(text), m_nvars(nvars), m_prefix(prefix)
    {
    }

    Poly parse()
    {
        Poly p = expr();
        skip_ws();
        if (m_pos != m_text.size()) {
            fail("unexpected character");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const
    {
        throw input_error("polynomial parse error at position " + std::to_string(m_pos) + " in '" + m_text
                          + "': " + msg);
    }

    void skip_ws()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) {
            ++m_pos;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (m_pos < m_text.size() && m_text[m_pos] == c) {
            ++m_pos;
            return true;
        }
        return false;
    }

    Poly expr()
    {
        Poly acc(m_nvars);
        bool negate = false;
        if (accept('-')) {
            negate = true;
        } else {
            accept('+');
        }
        Poly t = term();
        acc += negate ? -t : t;
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                break;
            }
        }
        return acc;
    }

    Poly term()
    {
        Poly acc = factor();
        while (true) {
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                Poly d = factor();
                if (d.is_zero() || d.total_degree() != 0) {
                    fail("division only by nonzero constants");
                }
                acc *= 1 / d.terms().begin()->second;
            } else {
                break;
            }
        }
        return acc;
    }

    Poly factor()
    {
        if (accept('-')) {
            return -factor();
        }
        if (accept('+')) {
            return factor();
        }
        Poly base = primary();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = m_pos;
            while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
                ++m_pos;
            }
            if (start == m_pos || m_pos - start > 4) {
                fail("expected small non-negative integer exponent");
            }
            base = base.pow(static_cast<unsigned>(std::stoul(m_text.substr(start, m_pos - start))));
        }
        return base;
    }

    Poly primary()
    {
        skip_ws();
        if (m_pos >= m_text.size()) {
            fail("unexpected end of input");
        }
        if (accept('(')) {
            Poly p = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return p;
        }
        const char c = m_text[m_pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::size_t start = m_pos;
            while (m_pos < m_text.size()
                   && (std::isdigit(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '.')) {
                ++m_pos;
            }
            return Poly::constant(m_nvars, parse_rational(m_text.substr(start, m_pos - start)));
        }
        if (m_text.compare(m_pos, m_prefix.size(), m_prefix) == 0) {
            m_pos += m_prefix.size();
            const std::size_t start = m_pos;
            while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
                ++m_pos;
            }
            if (start == m_pos) {
                fail("variable needs an index");
            }
            const auto idx = std::stoul(m_text.substr(start, m_pos - start));
            if (idx >= m_nvars) {
                fail("variable " + m_prefix + std::to_string(idx) + " outside ring with " + std::to_string(m_nvars)
                     + " variables");
            }
            return Poly::variable(m_nvars, idx);
        }
        fail("unexpected character");
    }

    const std::string &m_text;
    std::size_t m_nvars;
    const std::string &m_prefix;
    std::size_t m_pos = 0;
};

} // namespace

Poly parse_poly(const std::string &text, std::size_t nvars, const std::string &prefix)
{
    return poly_parser(text, nvars, prefix).parse();
}

std::size_t max_variable_index(const std::string &text, const std::string &prefix)
{
    std::size_t best = 0;
    std::size_t pos = 0;
    while ((pos = text.find(prefix, pos)) != std::string::npos) {
        pos += prefix.size();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (pos > start) {
            best = std::max<std::size_t>(best, std::stoul(text.substr(start, pos - start)));
        }
    }
    return best;
}

} // namespace smtlab
