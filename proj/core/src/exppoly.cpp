#include <smtlab/error.hpp>
#include <smtlab/exppoly.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace smtlab
{

GaussRational GaussRational::inverse() const
{
    const Rational n = norm();
    if (n == 0) {
        throw input_error("division by zero");
    }
    return {re / n, -im / n};
}

std::string GaussRational::to_string() const
{
    if (im == 0) {
        return smtlab::to_string(re);
    }
    auto imag = [](const Rational &v) {
        if (v == 1) {
            return std::string("i");
        }
        if (v == -1) {
            return std::string("-i");
        }
        return smtlab::to_string(v) + "*i";
    };
    if (re == 0) {
        return imag(im);
    }
    std::string s = "(" + smtlab::to_string(re);
    if (im > 0) {
        s += "+" + imag(im);
    } else {
        s += "-" + imag(-im);
    }
    return s + ")";
}

double ScaledValue::log_abs() const
{
    const double a = std::abs(mantissa);
    if (a == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(a) + log_scale;
}

Complex ScaledValue::value() const
{
    return mantissa * std::exp(log_scale);
}

ExpPoly::ExpPoly(const GaussRational &c)
{
    add_term(0, 0, c);
}

ExpPoly::ExpPoly(long c) : ExpPoly(GaussRational(c)) {}

ExpPoly ExpPoly::z_power(int k, const GaussRational &c)
{
    ExpPoly p;
    p.add_term(0, k, c);
    return p;
}

ExpPoly ExpPoly::exponential(const GaussRational &lambda, const GaussRational &c)
{
    ExpPoly p;
    p.add_term(lambda, 0, c);
    return p;
}

void ExpPoly::add_term(const GaussRational &lambda, int power, const GaussRational &c)
{
    if (c.is_zero()) {
        return;
    }
    m_numeric.reset();
    auto &lp = m_terms[lambda];
    auto [it, inserted] = lp.emplace(power, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            lp.erase(it);
        }
    }
    if (lp.empty()) {
        m_terms.erase(lambda);
    }
}

bool ExpPoly::is_constant() const
{
    if (m_terms.empty()) {
        return true;
    }
    if (m_terms.size() != 1 || !m_terms.begin()->first.is_zero()) {
        return false;
    }
    const auto &lp = m_terms.begin()->second;
    return lp.size() == 1 && lp.begin()->first == 0;
}

bool ExpPoly::has_negative_powers() const
{
    return pole_order() > 0;
}

int ExpPoly::pole_order() const
{
    int k = 0;
    for (const auto &[lambda, lp] : m_terms) {
        k = std::max(k, -lp.begin()->first);
    }
    return k;
}

bool ExpPoly::is_polynomial() const
{
    if (m_terms.empty()) {
        return true;
    }
    return m_terms.size() == 1 && m_terms.begin()->first.is_zero() && !has_negative_powers();
}

int ExpPoly::polynomial_degree() const
{
    if (!is_polynomial()) {
        throw input_error("not a polynomial in z: " + to_string());
    }
    if (m_terms.empty()) {
        return -1;
    }
    return m_terms.begin()->second.rbegin()->first;
}

ExpPoly &ExpPoly::operator+=(const ExpPoly &o)
{
    for (const auto &[lambda, lp] : o.m_terms) {
        for (const auto &[k, c] : lp) {
            add_term(lambda, k, c);
        }
    }
    return *this;
}

ExpPoly &ExpPoly::operator-=(const ExpPoly &o)
{
    for (const auto &[lambda, lp] : o.m_terms) {
        for (const auto &[k, c] : lp) {
            add_term(lambda, k, -c);
        }
    }
    return *this;
}

ExpPoly ExpPoly::operator-() const
{
    ExpPoly r;
    r -= *this;
    return r;
}

ExpPoly operator*(const ExpPoly &a, const ExpPoly &b)
{
    ExpPoly r;
    for (const auto &[la, pa] : a.m_terms) {
        for (const auto &[lb, pb] : b.m_terms) {
            const GaussRational lambda = la + lb;
            for (const auto &[ka, ca] : pa) {
                for (const auto &[kb, cb] : pb) {
                    r.add_term(lambda, ka + kb, ca * cb);
                }
            }
        }
    }
    return r;
}

ExpPoly ExpPoly::pow(unsigned n) const
{
    ExpPoly result(1);
    ExpPoly base = *this;
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

ExpPoly ExpPoly::shift(int k) const
{
    ExpPoly r;
    for (const auto &[lambda, lp] : m_terms) {
        for (const auto &[p, c] : lp) {
            r.add_term(lambda, p + k, c);
        }
    }
    return r;
}

ExpPoly ExpPoly::derivative() const
{
    ExpPoly r;
    for (const auto &[lambda, lp] : m_terms) {
        for (const auto &[k, c] : lp) {
            if (k != 0) {
                r.add_term(lambda, k - 1, c * GaussRational(k));
            }
            r.add_term(lambda, k, c * lambda);
        }
    }
    return r;
}

ExpPoly ExpPoly::derivative(unsigned order) const
{
    ExpPoly r = *this;
    for (unsigned i = 0; i < order; ++i) {
        r = r.derivative();
    }
    return r;
}

const std::vector<ExpPoly::numeric_term> &ExpPoly::numeric() const
{
    if (!m_numeric) {
        auto terms = std::make_shared<std::vector<numeric_term>>();
        for (const auto &[lambda, lp] : m_terms) {
            numeric_term t;
            t.lambda = lambda.to_complex();
            t.low = lp.begin()->first;
            t.coeffs.assign(static_cast<std::size_t>(lp.rbegin()->first - t.low + 1), Complex(0));
            for (const auto &[k, c] : lp) {
                t.coeffs[static_cast<std::size_t>(k - t.low)] = c.to_complex();
            }
            terms->push_back(std::move(t));
        }
        m_numeric = std::move(terms);
    }
    return *m_numeric;
}

ScaledValue ExpPoly::evaluate_scaled(Complex z) const
{
    if (m_terms.empty()) {
        return {};
    }
    const auto &terms = numeric();
    double scale = -std::numeric_limits<double>::infinity();
    for (const auto &t : terms) {
        scale = std::max(scale, (t.lambda * z).real());
    }
    const double az = std::abs(z);
    Complex acc = 0;
    double mag = 0;
    for (const auto &t : terms) {
        Complex p = 0;
        double pa = 0;
        for (auto it = t.coeffs.rbegin(); it != t.coeffs.rend(); ++it) {
            p = p * z + *it;
            pa = pa * az + std::abs(*it);
        }
        if (t.low != 0) {
            p *= std::pow(z, t.low);
            pa *= std::pow(az, t.low);
        }
        const Complex e = std::exp(t.lambda * z - scale);
        acc += p * e;
        mag += pa * std::abs(e);
    }
    return {acc, scale, mag};
}

Complex ExpPoly::evaluate(Complex z) const
{
    return evaluate_scaled(z).value();
}

std::string ExpPoly::to_string() const
{
    if (m_terms.empty()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[lambda, lp] : m_terms) {
        for (auto it = lp.rbegin(); it != lp.rend(); ++it) {
            const auto &[k, c] = *it;
            std::vector<std::string> factors;
            if (k == 1) {
                factors.emplace_back("z");
            } else if (k != 0) {
                factors.push_back("z^" + std::to_string(k));
            }
            if (!lambda.is_zero()) {
                factors.push_back(lambda == GaussRational(1) ? "exp(z)" : "exp(" + lambda.to_string() + "*z)");
            }
            std::string body;
            for (std::size_t i = 0; i < factors.size(); ++i) {
                body += (i ? "*" : "") + factors[i];
            }
            std::string term;
            if (factors.empty()) {
                term = c.to_string();
            } else if (c == GaussRational(1)) {
                term = body;
            } else if (c == GaussRational(-1)) {
                term = "-" + body;
            } else {
                term = c.to_string() + "*" + body;
            }
            if (first) {
                out = term;
            } else if (term[0] == '-') {
                out += " - " + term.substr(1);
            } else {
                out += " + " + term;
            }
            first = false;
        }
    }
    return out;
}

std::vector<std::pair<std::pair<GaussRational, int>, GaussRational>> ExpPoly::monomials() const
{
    std::vector<std::pair<std::pair<GaussRational, int>, GaussRational>> out;
    for (const auto &[lambda, lp] : m_terms) {
        for (const auto &[k, c] : lp) {
            out.push_back({{lambda, k}, c});
        }
    }
    return out;
}

namespace
{

class exppoly_parser
{
public:
    explicit exppoly_parser(const std::string &text) : m_text(text) {}

    ExpPoly parse()
    {
        ExpPoly p = expr();
        skip_ws();
        if (m_pos != m_text.size()) {
            fail("unexpected trailing input");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string &what) const
    {
        throw input_error("expression parse error at position " + std::to_string(m_pos) + " in '" + m_text
                          + "': " + what);
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

    bool accept_word(const std::string &w)
    {
        skip_ws();
        if (m_text.compare(m_pos, w.size(), w) != 0) {
            return false;
        }
        const std::size_t end = m_pos + w.size();
        if (end < m_text.size() && std::isalnum(static_cast<unsigned char>(m_text[end]))) {
            return false;
        }
        m_pos = end;
        return true;
    }

    // Single term c*z^k without exponentials.
    static bool monomial_view(const ExpPoly &p, GaussRational &c, int &k)
    {
        if (p.terms().size() != 1 || !p.terms().begin()->first.is_zero()) {
            return false;
        }
        const auto &lp = p.terms().begin()->second;
        if (lp.size() != 1) {
            return false;
        }
        k = lp.begin()->first;
        c = lp.begin()->second;
        return true;
    }

    ExpPoly invert(const ExpPoly &p)
    {
        GaussRational c;
        int k = 0;
        if (!monomial_view(p, c, k)) {
            fail("only monomials c*z^k can be inverted");
        }
        return ExpPoly::z_power(-k, c.inverse());
    }

    ExpPoly expr()
    {
        ExpPoly acc = term();
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    ExpPoly term()
    {
        ExpPoly acc = factor();
        while (true) {
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                acc = acc * invert(factor());
            } else {
                return acc;
            }
        }
    }

    ExpPoly factor()
    {
        if (accept('-')) {
            return -factor();
        }
        if (accept('+')) {
            return factor();
        }
        ExpPoly base = primary();
        if (accept('^')) {
            const bool negative = accept('-');
            skip_ws();
            const std::size_t start = m_pos;
            while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
                ++m_pos;
            }
            if (start == m_pos || m_pos - start > 4) {
                fail("expected small integer exponent");
            }
            const auto e = static_cast<unsigned>(std::stoul(m_text.substr(start, m_pos - start)));
            base = base.pow(e);
            if (negative) {
                base = invert(base);
            }
        }
        return base;
    }

    ExpPoly primary()
    {
        skip_ws();
        if (m_pos >= m_text.size()) {
            fail("unexpected end of input");
        }
        if (accept('(')) {
            ExpPoly p = expr();
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
            return ExpPoly(GaussRational(parse_rational(m_text.substr(start, m_pos - start))));
        }
        if (accept_word("exp")) {
            if (!accept('(')) {
                fail("expected '(' after exp");
            }
            ExpPoly arg = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            if (arg.is_zero()) {
                return ExpPoly(1);
            }
            GaussRational lambda;
            int k = 0;
            if (!monomial_view(arg, lambda, k) || k != 1) {
                fail("exp() argument must be a Gaussian-rational multiple of z");
            }
            return ExpPoly::exponential(lambda);
        }
        if (accept_word("z")) {
            return ExpPoly::z_power(1);
        }
        if (accept_word("i")) {
            return ExpPoly(GaussRational(0, 1));
        }
        fail("unexpected character");
    }

    const std::string &m_text;
    std::size_t m_pos = 0;
};

} // namespace

ExpPoly parse_exppoly(const std::string &text)
{
    return exppoly_parser(text).parse();
}

ExpPoly compose(const Poly &D, const std::vector<ExpPoly> &components)
{
    if (D.nvars() != components.size()) {
        throw input_error("compose: polynomial has " + std::to_string(D.nvars()) + " variables but "
                          + std::to_string(components.size()) + " components were given");
    }
    std::vector<std::vector<ExpPoly>> powers(components.size());
    auto power = [&](std::size_t i, int e) -> const ExpPoly & {
        auto &cache = powers[i];
        if (cache.empty()) {
            cache.emplace_back(1);
        }
        while (static_cast<int>(cache.size()) <= e) {
            cache.push_back(cache.back() * components[i]);
        }
        return cache[static_cast<std::size_t>(e)];
    };
    ExpPoly result;
    for (const auto &[m, c] : D.terms()) {
        ExpPoly t(GaussRational{c});
        for (std::size_t i = 0; i < components.size(); ++i) {
            if (m[i] > 0) {
                t = t * power(i, m[i]);
            }
        }
        result += t;
    }
    return result;
}

double log_norm(const std::vector<ExpPoly> &components, Complex z)
{
    std::vector<double> logs;
    logs.reserve(components.size());
    double top = -std::numeric_limits<double>::infinity();
    for (const auto &f : components) {
        logs.push_back(f.log_abs(z));
        top = std::max(top, logs.back());
    }
    if (!std::isfinite(top)) {
        return top;
    }
    double s = 0;
    for (double l : logs) {
        s += std::exp(2 * (l - top));
    }
    return top + 0.5 * std::log(s);
}

} // namespace smtlab
