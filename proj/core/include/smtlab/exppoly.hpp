#ifndef SMTLAB_EXPPOLY_HPP
#define SMTLAB_EXPPOLY_HPP

#include <smtlab/poly.hpp>
#include <smtlab/rational.hpp>

#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace smtlab
{

using Complex = std::complex<double>;

// Gaussian rational a + b i.
struct GaussRational {
    Rational re;
    Rational im;

    GaussRational() = default;
    GaussRational(const Rational &r) : re(r) {} // NOLINT(google-explicit-constructor)
    GaussRational(long r) : re(r) {}            // NOLINT(google-explicit-constructor)
    GaussRational(const Rational &r, const Rational &i) : re(r), im(i) {}

    bool is_zero() const
    {
        return re == 0 && im == 0;
    }
    bool is_real() const
    {
        return im == 0;
    }
    GaussRational conj() const
    {
        return {re, -im};
    }
    Rational norm() const
    {
        return re * re + im * im;
    }
    Complex to_complex() const
    {
        return {re.get_d(), im.get_d()};
    }
    GaussRational inverse() const;
    std::string to_string() const;

    GaussRational &operator+=(const GaussRational &o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRational &operator-=(const GaussRational &o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend GaussRational operator+(GaussRational a, const GaussRational &b)
    {
        return a += b;
    }
    friend GaussRational operator-(GaussRational a, const GaussRational &b)
    {
        return a -= b;
    }
    GaussRational operator-() const
    {
        return {-re, -im};
    }
    friend GaussRational operator*(const GaussRational &a, const GaussRational &b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRational operator/(const GaussRational &a, const GaussRational &b)
    {
        return a * b.inverse();
    }
    friend bool operator==(const GaussRational &a, const GaussRational &b)
    {
        return a.re == b.re && a.im == b.im;
    }
    // Real part first, then imaginary part. Only used for canonical ordering.
    friend bool operator<(const GaussRational &a, const GaussRational &b)
    {
        if (a.re != b.re) {
            return a.re < b.re;
        }
        return a.im < b.im;
    }
};

// Value represented as mantissa * exp(log_scale), so that factors like
// e^{80} never overflow.
struct ScaledValue {
    Complex mantissa;
    double log_scale = 0;
    // Sum of the absolute values of the terms, on the same scale; bounds the
    // rounding error of the mantissa up to a small multiple of machine epsilon.
    double magnitude = 0;

    double log_abs() const;
    Complex value() const;
};

// Exponential polynomial sum_j p_j(z) e^{lambda_j z}; each p_j is a Laurent
// polynomial over the Gaussian rationals. Stored canonically: distinct
// exponents, no zero coefficients.
class ExpPoly
{
public:
    using laurent = std::map<int, GaussRational>;
    using term_map = std::map<GaussRational, laurent>;

    ExpPoly() = default;
    ExpPoly(const GaussRational &c); // NOLINT(google-explicit-constructor)
    ExpPoly(long c);                 // NOLINT(google-explicit-constructor)

    static ExpPoly z_power(int k, const GaussRational &c = 1);
    static ExpPoly exponential(const GaussRational &lambda, const GaussRational &c = 1);

    const term_map &terms() const noexcept
    {
        return m_terms;
    }
    bool is_zero() const noexcept
    {
        return m_terms.empty();
    }
    bool is_constant() const;
    // Some coefficient on a negative power of z.
    bool has_negative_powers() const;
    // Largest k with z^{-k} present (0 when none).
    int pole_order() const;
    // Degree in z when the expression is an ordinary polynomial.
    int polynomial_degree() const;
    bool is_polynomial() const;

    void add_term(const GaussRational &lambda, int power, const GaussRational &c);

    ExpPoly &operator+=(const ExpPoly &o);
    ExpPoly &operator-=(const ExpPoly &o);
    friend ExpPoly operator+(ExpPoly a, const ExpPoly &b)
    {
        return a += b;
    }
    friend ExpPoly operator-(ExpPoly a, const ExpPoly &b)
    {
        return a -= b;
    }
    ExpPoly operator-() const;
    friend ExpPoly operator*(const ExpPoly &a, const ExpPoly &b);
    ExpPoly &operator*=(const ExpPoly &o)
    {
        return *this = *this * o;
    }
    ExpPoly pow(unsigned n) const;
    // Multiplies by z^k.
    ExpPoly shift(int k) const;

    ExpPoly derivative() const;
    ExpPoly derivative(unsigned order) const;

    friend bool operator==(const ExpPoly &a, const ExpPoly &b)
    {
        return a.m_terms == b.m_terms;
    }

    Complex evaluate(Complex z) const;
    ScaledValue evaluate_scaled(Complex z) const;
    double log_abs(Complex z) const
    {
        return evaluate_scaled(z).log_abs();
    }

    std::string to_string() const;

    // Flattened (exponent, power) -> coefficient view for linear algebra.
    std::vector<std::pair<std::pair<GaussRational, int>, GaussRational>> monomials() const;

private:
    struct numeric_term {
        Complex lambda;
        int low = 0;
        std::vector<Complex> coeffs;
    };
    const std::vector<numeric_term> &numeric() const;

    term_map m_terms;
    mutable std::shared_ptr<const std::vector<numeric_term>> m_numeric;
};

// Grammar: sums and products of rationals, `i`, `z`, integer powers
// (negative powers only on monomials c*z^k), and exp(lambda*z) with lambda a
// Gaussian rational.
ExpPoly parse_exppoly(const std::string &text);

// Substitutes the components into D.
ExpPoly compose(const Poly &D, const std::vector<ExpPoly> &components);

// log ||(f_0, ..., f_n)(z)|| for the Euclidean norm, overflow-safe.
double log_norm(const std::vector<ExpPoly> &components, Complex z);

} // namespace smtlab

#endif
