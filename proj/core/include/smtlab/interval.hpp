#ifndef SMTLAB_INTERVAL_HPP
#define SMTLAB_INTERVAL_HPP

#include <smtlab/rational.hpp>

#include <mpfr.h>

#include <optional>
#include <string>

namespace smtlab
{

// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds the
// lower endpoint down and the upper endpoint up, so the true value of an
// expression built from exact inputs always lies inside.
class Interval
{
public:
    explicit Interval(mpfr_prec_t prec = 256);
    Interval(const Rational &q, mpfr_prec_t prec);
    Interval(const Interval &other);
    Interval(Interval &&other) noexcept;
    Interval &operator=(Interval other) noexcept;
    ~Interval();

    // Enclosure of Euler's number, optionally widened by `widen` on each side.
    static Interval e(mpfr_prec_t prec, const Rational &widen = 0);

    mpfr_prec_t precision() const noexcept
    {
        return m_prec;
    }
    mpfr_srcptr lo() const noexcept
    {
        return m_lo;
    }
    mpfr_srcptr hi() const noexcept
    {
        return m_hi;
    }

    bool contains(const Rational &q) const;
    bool contains_zero() const;
    bool positive() const;

    Interval &operator+=(const Interval &o);
    Interval &operator-=(const Interval &o);
    Interval &operator*=(const Interval &o);
    Interval &operator/=(const Interval &o);
    friend Interval operator+(Interval a, const Interval &b)
    {
        return a += b;
    }
    friend Interval operator-(Interval a, const Interval &b)
    {
        return a -= b;
    }
    friend Interval operator*(Interval a, const Interval &b)
    {
        return a *= b;
    }
    friend Interval operator/(Interval a, const Interval &b)
    {
        return a /= b;
    }

    Interval sqrt() const;
    Interval pow(unsigned long n) const;

    // floor(x) for every x in the interval, when that is one integer.
    std::optional<Integer> certified_floor() const;

    double lo_double() const;
    double hi_double() const;
    double width() const;
    std::string to_string(int digits = 20) const;

private:
    void swap(Interval &o) noexcept;

    mpfr_prec_t m_prec;
    mpfr_t m_lo;
    mpfr_t m_hi;
};

} // namespace smtlab

#endif
