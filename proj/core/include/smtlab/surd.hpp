#ifndef SMTLAB_SURD_HPP
#define SMTLAB_SURD_HPP

#include <smtlab/interval.hpp>
#include <smtlab/rational.hpp>

#include <compare>
#include <string>

namespace smtlab
{

// Exact a + b*sqrt(r) with rational a, b and a square-free positive integer
// radicand r. Values with b == 0 are plain rationals (radicand stored as 1).
// Mixing two different non-trivial radicands is a precondition error.
class Surd
{
public:
    Surd() = default;
    Surd(const Rational &a) : m_a(a) { m_a.canonicalize(); } // NOLINT(google-explicit-constructor)
    Surd(long a) : m_a(a) {}            // NOLINT(google-explicit-constructor)
    Surd(const Rational &a, const Rational &b, const Rational &radicand);

    static Surd sqrt(const Rational &x);

    const Rational &rational_part() const noexcept
    {
        return m_a;
    }
    const Rational &surd_coefficient() const noexcept
    {
        return m_b;
    }
    const Integer &radicand() const noexcept
    {
        return m_r;
    }
    bool is_rational() const noexcept
    {
        return m_b == 0;
    }

    int sign() const;
    Integer floor() const;
    Integer ceil() const;
    Surd inverse() const;

    Surd &operator+=(const Surd &o);
    Surd &operator-=(const Surd &o);
    Surd &operator*=(const Surd &o);
    Surd &operator/=(const Surd &o)
    {
        return *this *= o.inverse();
    }
    friend Surd operator+(Surd a, const Surd &b)
    {
        return a += b;
    }
    friend Surd operator-(Surd a, const Surd &b)
    {
        return a -= b;
    }
    friend Surd operator*(Surd a, const Surd &b)
    {
        return a *= b;
    }
    friend Surd operator/(Surd a, const Surd &b)
    {
        return a /= b;
    }
    Surd operator-() const;
    Surd pow(unsigned long n) const;

    friend bool operator==(const Surd &x, const Surd &y)
    {
        return (x - y).sign() == 0;
    }
    friend std::strong_ordering operator<=>(const Surd &x, const Surd &y)
    {
        int s = (x - y).sign();
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    Interval enclose(mpfr_prec_t prec) const;
    double to_double() const;
    // "a", or "a + b*sqrt(r)".
    std::string to_string() const;

private:
    void normalize();
    void join_radicand(const Surd &o);

    Rational m_a = 0;
    Rational m_b = 0;
    Integer m_r = 1;
};

} // namespace smtlab

#endif
