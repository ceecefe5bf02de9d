#include <smtlab/error.hpp>
#include <smtlab/surd.hpp>

#include <cmath>

namespace smtlab
{

namespace
{

// Splits n > 0 as s^2 * f with f square-free; trial division is enough for
// the radicands that arise from the bound formulas.
void square_split(const Integer &n, Integer &s, Integer &f)
{
    s = 1;
    f = 1;
    Integer m = n;
    for (Integer p = 2; p * p <= m; ++p) {
        if (p > 1000000) {
            throw resource_error("radicand too large to normalize: " + n.get_str());
        }
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) {
            s *= p;
        }
        if (e % 2 == 1) {
            f *= p;
        }
    }
    f *= m;
}

} // namespace

Surd::Surd(const Rational &a, const Rational &b, const Rational &radicand) : m_a(a)
{
    m_a.canonicalize();
    if (radicand < 0) {
        throw input_error("negative radicand");
    }
    if (b == 0 || radicand == 0) {
        return;
    }
    // sqrt(p/q) = sqrt(p*q)/q, then pull square factors out.
    Integer pq = radicand.get_num() * radicand.get_den();
    Integer s;
    Integer f;
    square_split(pq, s, f);
    Rational bc = b;
    bc.canonicalize();
    m_b = bc * Rational(s) / Rational(radicand.get_den());
    m_r = f;
    normalize();
}

Surd Surd::sqrt(const Rational &x)
{
    return Surd(0, 1, x);
}

void Surd::normalize()
{
    if (m_b == 0) {
        m_r = 1;
    } else if (m_r == 1) {
        m_a += m_b;
        m_b = 0;
    }
}

void Surd::join_radicand(const Surd &o)
{
    if (o.m_b == 0) {
        return;
    }
    if (m_b == 0) {
        m_r = o.m_r;
        return;
    }
    if (m_r != o.m_r) {
        throw precondition_error("surd arithmetic across radicands " + m_r.get_str() + " and " + o.m_r.get_str());
    }
}

int Surd::sign() const
{
    const int sa = sgn(m_a);
    const int sb = sgn(m_b);
    if (sb == 0) {
        return sa;
    }
    if (sa == 0 || sa == sb) {
        return sb;
    }
    // Opposite signs: compare a^2 with b^2 r.
    const Rational lhs = m_a * m_a;
    const Rational rhs = m_b * m_b * Rational(m_r);
    if (lhs == rhs) {
        return 0;
    }
    return lhs > rhs ? sa : sb;
}

Integer Surd::floor() const
{
    if (m_b == 0) {
        return floor_of(m_a);
    }
    auto est = enclose(128).certified_floor();
    Integer n = est ? *est : Integer(static_cast<long>(to_double()));
    while ((*this - Surd(Rational(n))).sign() < 0) {
        --n;
    }
    while ((*this - Surd(Rational(n + 1))).sign() >= 0) {
        ++n;
    }
    return n;
}

Integer Surd::ceil() const
{
    return -(-*this).floor();
}

Surd Surd::inverse() const
{
    if (sign() == 0) {
        throw input_error("division by zero surd");
    }
    const Rational norm = m_a * m_a - m_b * m_b * Rational(m_r);
    Surd r;
    r.m_a = m_a / norm;
    r.m_b = -m_b / norm;
    r.m_r = m_r;
    r.normalize();
    return r;
}

Surd &Surd::operator+=(const Surd &o)
{
    join_radicand(o);
    m_a += o.m_a;
    m_b += o.m_b;
    normalize();
    return *this;
}

Surd &Surd::operator-=(const Surd &o)
{
    return *this += -o;
}

Surd &Surd::operator*=(const Surd &o)
{
    join_radicand(o);
    const Rational a = m_a * o.m_a + m_b * o.m_b * Rational(m_r);
    const Rational b = m_a * o.m_b + m_b * o.m_a;
    m_a = a;
    m_b = b;
    normalize();
    return *this;
}

Surd Surd::operator-() const
{
    Surd r = *this;
    r.m_a = -r.m_a;
    r.m_b = -r.m_b;
    return r;
}

Surd Surd::pow(unsigned long n) const
{
    Surd r(1);
    for (unsigned long i = 0; i < n; ++i) {
        r *= *this;
    }
    return r;
}

Interval Surd::enclose(mpfr_prec_t prec) const
{
    Interval v(m_a, prec);
    if (m_b != 0) {
        v += Interval(m_b, prec) * Interval(Rational(m_r), prec).sqrt();
    }
    return v;
}

double Surd::to_double() const
{
    return smtlab::to_double(m_a) + smtlab::to_double(m_b) * std::sqrt(m_r.get_d());
}

std::string Surd::to_string() const
{
    if (m_b == 0) {
        return smtlab::to_string(m_a);
    }
    std::string s = m_a == 0 ? "" : smtlab::to_string(m_a) + (m_b > 0 ? " + " : " - ");
    Rational b = (m_a != 0 && m_b < 0) ? Rational(-m_b) : m_b;
    return s + (b == 1 ? "" : smtlab::to_string(b) + "*") + "sqrt(" + m_r.get_str() + ")";
}

} // namespace smtlab
