#include <smtlab/error.hpp>
#include <smtlab/interval.hpp>

#include <algorithm>
#include <utility>

namespace smtlab
{

Interval::Interval(mpfr_prec_t prec) : m_prec(prec)
{
    mpfr_init2(m_lo, prec);
    mpfr_init2(m_hi, prec);
    mpfr_set_zero(m_lo, 1);
    mpfr_set_zero(m_hi, 1);
}

Interval::Interval(const Rational &q, mpfr_prec_t prec) : Interval(prec)
{
    mpfr_set_q(m_lo, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(m_hi, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const Interval &other) : Interval(other.m_prec)
{
    mpfr_set(m_lo, other.m_lo, MPFR_RNDD);
    mpfr_set(m_hi, other.m_hi, MPFR_RNDU);
}

Interval::Interval(Interval &&other) noexcept : Interval(other.m_prec)
{
    swap(other);
}

Interval &Interval::operator=(Interval other) noexcept
{
    swap(other);
    return *this;
}

Interval::~Interval()
{
    mpfr_clear(m_lo);
    mpfr_clear(m_hi);
}

void Interval::swap(Interval &o) noexcept
{
    std::swap(m_prec, o.m_prec);
    mpfr_swap(m_lo, o.m_lo);
    mpfr_swap(m_hi, o.m_hi);
}

Interval Interval::e(mpfr_prec_t prec, const Rational &widen)
{
    Interval r(prec);
    mpfr_t one;
    mpfr_init2(one, prec);
    mpfr_set_ui(one, 1, MPFR_RNDN);
    mpfr_exp(r.m_lo, one, MPFR_RNDD);
    mpfr_exp(r.m_hi, one, MPFR_RNDU);
    mpfr_clear(one);
    if (widen != 0) {
        Interval w(widen, prec);
        mpfr_sub(r.m_lo, r.m_lo, w.m_hi, MPFR_RNDD);
        mpfr_add(r.m_hi, r.m_hi, w.m_hi, MPFR_RNDU);
    }
    return r;
}

bool Interval::contains(const Rational &q) const
{
    return mpfr_cmp_q(m_lo, q.get_mpq_t()) <= 0 && mpfr_cmp_q(m_hi, q.get_mpq_t()) >= 0;
}

bool Interval::contains_zero() const
{
    return mpfr_sgn(m_lo) <= 0 && mpfr_sgn(m_hi) >= 0;
}

bool Interval::positive() const
{
    return mpfr_sgn(m_lo) > 0;
}

Interval &Interval::operator+=(const Interval &o)
{
    mpfr_add(m_lo, m_lo, o.m_lo, MPFR_RNDD);
    mpfr_add(m_hi, m_hi, o.m_hi, MPFR_RNDU);
    return *this;
}

Interval &Interval::operator-=(const Interval &o)
{
    Interval r(m_prec);
    mpfr_sub(r.m_lo, m_lo, o.m_hi, MPFR_RNDD);
    mpfr_sub(r.m_hi, m_hi, o.m_lo, MPFR_RNDU);
    swap(r);
    return *this;
}

Interval &Interval::operator*=(const Interval &o)
{
    mpfr_t t;
    mpfr_init2(t, m_prec);
    Interval r(m_prec);
    mpfr_set_inf(r.m_lo, 1);
    mpfr_set_inf(r.m_hi, -1);
    mpfr_srcptr a[2] = {m_lo, m_hi};
    mpfr_srcptr b[2] = {o.m_lo, o.m_hi};
    for (auto x : a) {
        for (auto y : b) {
            mpfr_mul(t, x, y, MPFR_RNDD);
            mpfr_min(r.m_lo, r.m_lo, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            mpfr_max(r.m_hi, r.m_hi, t, MPFR_RNDU);
        }
    }
    mpfr_clear(t);
    swap(r);
    return *this;
}

Interval &Interval::operator/=(const Interval &o)
{
    if (o.contains_zero()) {
        throw precision_error("interval division by an interval containing zero");
    }
    Interval inv(m_prec);
    mpfr_ui_div(inv.m_lo, 1, o.m_hi, MPFR_RNDD);
    mpfr_ui_div(inv.m_hi, 1, o.m_lo, MPFR_RNDU);
    return *this *= inv;
}

Interval Interval::sqrt() const
{
    if (mpfr_sgn(m_lo) < 0) {
        throw precision_error("square root of an interval reaching below zero");
    }
    Interval r(m_prec);
    mpfr_sqrt(r.m_lo, m_lo, MPFR_RNDD);
    mpfr_sqrt(r.m_hi, m_hi, MPFR_RNDU);
    return r;
}

Interval Interval::pow(unsigned long n) const
{
    Interval r(Rational(1), m_prec);
    for (unsigned long i = 0; i < n; ++i) {
        r *= *this;
    }
    return r;
}

std::optional<Integer> Interval::certified_floor() const
{
    Integer a;
    Integer b;
    mpfr_get_z(a.get_mpz_t(), m_lo, MPFR_RNDD);
    mpfr_get_z(b.get_mpz_t(), m_hi, MPFR_RNDD);
    if (a != b) {
        return std::nullopt;
    }
    return a;
}

double Interval::lo_double() const
{
    return mpfr_get_d(m_lo, MPFR_RNDD);
}

double Interval::hi_double() const
{
    return mpfr_get_d(m_hi, MPFR_RNDU);
}

double Interval::width() const
{
    mpfr_t w;
    mpfr_init2(w, m_prec);
    mpfr_sub(w, m_hi, m_lo, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

std::string Interval::to_string(int digits) const
{
    auto fmt = [&](mpfr_srcptr x, mpfr_rnd_t rnd) {
        char *buf = nullptr;
        std::string spec = "%." + std::to_string(digits) + "R" + (rnd == MPFR_RNDD ? "D" : "U") + "g";
        mpfr_asprintf(&buf, spec.c_str(), x);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    };
    return "[" + fmt(m_lo, MPFR_RNDD) + ", " + fmt(m_hi, MPFR_RNDU) + "]";
}

} // namespace smtlab
