#ifndef SMTLAB_POLY_HPP
#define SMTLAB_POLY_HPP

#include <smtlab/rational.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smtlab
{

// Exponent vector over x0..x_{n}.
class Monomial
{
public:
    Monomial() = default;
    explicit Monomial(std::size_t nvars) : m_exp(nvars, 0) {}
    explicit Monomial(std::vector<int> exponents);

    static Monomial variable(std::size_t nvars, std::size_t index, int power = 1);

    std::size_t nvars() const noexcept
    {
        return m_exp.size();
    }
    int operator[](std::size_t i) const noexcept
    {
        return m_exp[i];
    }
    int degree() const noexcept
    {
        return m_degree;
    }
    const std::vector<int> &exponents() const noexcept
    {
        return m_exp;
    }

    bool divides(const Monomial &other) const noexcept;
    bool coprime_with(const Monomial &other) const noexcept;

    Monomial operator*(const Monomial &other) const;
    // Requires divisor.divides(*this).
    Monomial operator/(const Monomial &divisor) const;
    Monomial lcm(const Monomial &other) const;
    Monomial gcd(const Monomial &other) const;

    // Degree under a positive grading (one weight per variable).
    long weighted_degree(std::span<const int> grading) const noexcept;

    friend bool operator==(const Monomial &a, const Monomial &b) noexcept
    {
        return a.m_exp == b.m_exp;
    }
    // Storage order only (lexicographic on exponents); term orders live in
    // TermOrder.
    friend bool operator<(const Monomial &a, const Monomial &b) noexcept
    {
        return a.m_exp < b.m_exp;
    }

    std::string to_string(const std::string &prefix = "x") const;

private:
    std::vector<int> m_exp;
    int m_degree = 0;
};

// All monomials of total degree u in nvars variables, in descending lex order.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, int u);

// Multivariate polynomial with exact rational coefficients. Zero coefficients
// are never stored.
class Poly
{
public:
    using term_map = std::map<Monomial, Rational>;

    Poly() = default;
    explicit Poly(std::size_t nvars) : m_nvars(nvars) {}

    static Poly constant(std::size_t nvars, const Rational &c);
    static Poly variable(std::size_t nvars, std::size_t index);
    static Poly term(const Monomial &m, const Rational &c);

    std::size_t nvars() const noexcept
    {
        return m_nvars;
    }
    const term_map &terms() const noexcept
    {
        return m_terms;
    }
    bool is_zero() const noexcept
    {
        return m_terms.empty();
    }
    std::size_t size() const noexcept
    {
        return m_terms.size();
    }

    int total_degree() const;
    bool is_homogeneous() const;
    bool is_homogeneous(std::span<const int> grading) const;
    // Degree when homogeneous, nullopt otherwise (and for the zero polynomial).
    std::optional<int> homogeneous_degree() const;

    Rational coefficient(const Monomial &m) const;
    void add_term(const Monomial &m, const Rational &c);

    Poly &operator+=(const Poly &other);
    Poly &operator-=(const Poly &other);
    Poly &operator*=(const Rational &c);
    friend Poly operator+(Poly a, const Poly &b)
    {
        return a += b;
    }
    friend Poly operator-(Poly a, const Poly &b)
    {
        return a -= b;
    }
    friend Poly operator*(Poly a, const Rational &c)
    {
        return a *= c;
    }
    friend Poly operator*(const Poly &a, const Poly &b);
    Poly operator-() const;
    Poly pow(unsigned n) const;

    friend bool operator==(const Poly &a, const Poly &b)
    {
        return a.m_nvars == b.m_nvars && a.m_terms == b.m_terms;
    }

    // Clears denominators and removes the integer content; leading sign kept.
    Poly primitive_part() const;
    // Rewrites the polynomial into a ring with more variables: variable i is
    // sent to variable map[i].
    Poly remap(std::size_t new_nvars, std::span<const std::size_t> map) const;

    template <typename T>
    T evaluate(std::span<const T> point) const
    {
        T acc{};
        for (const auto &[m, c] : m_terms) {
            T t = static_cast<T>(c.get_d());
            for (std::size_t i = 0; i < m_nvars; ++i) {
                for (int e = 0; e < m[i]; ++e) {
                    t *= point[i];
                }
            }
            acc += t;
        }
        return acc;
    }

    Rational evaluate_exact(std::span<const Rational> point) const;

    std::string to_string(const std::string &prefix = "x") const;

private:
    std::size_t m_nvars = 0;
    term_map m_terms;
};

// Parses the plain-text grammar: sums of terms like `3/2*x0^2*x1 - x2^3`.
// Variables are `x0`..`x{nvars-1}`; parentheses and non-negative integer
// powers of parenthesized sub-expressions are accepted.
Poly parse_poly(const std::string &text, std::size_t nvars, const std::string &prefix = "x");

// Infers the number of variables from the largest index mentioned.
std::size_t max_variable_index(const std::string &text, const std::string &prefix = "x");

} // namespace smtlab

#endif
