#ifndef SMTLAB_HEIGHTS_HPP
#define SMTLAB_HEIGHTS_HPP

#include <smtlab/bounds.hpp>
#include <smtlab/family.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace smtlab
{

// Prime factorization of |n| for n != 0 (trial division, then Pollard rho).
std::map<Integer, long> factor(const Integer &n);

// Exact value sum_p e_p log p with rational exponents.
class LogValue
{
public:
    LogValue() = default;

    // log|x| for x != 0.
    static LogValue log_abs(const Rational &x);
    static LogValue log_prime(const Integer &p, const Rational &e = 1);

    bool is_zero() const noexcept
    {
        return m_e.empty();
    }
    const std::map<Integer, Rational> &exponents() const noexcept
    {
        return m_e;
    }
    double value() const;
    std::string to_string() const;

    LogValue &operator+=(const LogValue &o);
    LogValue &operator-=(const LogValue &o);
    LogValue &operator*=(const Rational &c);
    friend LogValue operator+(LogValue a, const LogValue &b)
    {
        return a += b;
    }
    friend LogValue operator-(LogValue a, const LogValue &b)
    {
        return a -= b;
    }
    friend LogValue operator*(LogValue a, const Rational &c)
    {
        return a *= c;
    }
    friend bool operator==(const LogValue &a, const LogValue &b)
    {
        return a.m_e == b.m_e;
    }

private:
    std::map<Integer, Rational> m_e;
};

// The archimedean place (p = 0) or a prime p.
struct Place {
    Integer p = 0;

    static Place infinity()
    {
        return {};
    }
    static Place prime(const Integer &p);

    bool archimedean() const
    {
        return p == 0;
    }
    std::string to_string() const;
    friend bool operator==(const Place &a, const Place &b)
    {
        return a.p == b.p;
    }
};

// "inf,2,3" style lists.
std::vector<Place> parse_places(const std::string &text);

// Primitive integer coordinates with the first nonzero entry positive.
class RationalPoint
{
public:
    explicit RationalPoint(const std::vector<Rational> &coordinates);
    static RationalPoint parse(const std::string &text);

    std::size_t size() const noexcept
    {
        return m_x.size();
    }
    const std::vector<Integer> &coordinates() const noexcept
    {
        return m_x;
    }
    std::vector<Rational> as_rationals() const;
    std::string to_string() const;

    friend bool operator==(const RationalPoint &a, const RationalPoint &b)
    {
        return a.m_x == b.m_x;
    }

private:
    std::vector<Integer> m_x;
};

// Homogeneous form with integer coefficients of content 1.
class IntegerForm
{
public:
    explicit IntegerForm(const Poly &Q);

    const Poly &poly() const noexcept
    {
        return m_poly;
    }
    int degree() const noexcept
    {
        return m_degree;
    }
    // log ||Q||_v summed over all places: log of the largest coefficient.
    LogValue coefficient_height() const;

private:
    Poly m_poly;
    int m_degree = 0;
};

// log ||x||_v with ||x||_v the maximum of ||x_i||_v.
LogValue log_norm(const std::vector<Rational> &x, const Place &v);
// Sum over all places, for an arbitrary (not necessarily primitive)
// representative; equals log max|x_i| on primitive coordinates.
LogValue height_exact(const std::vector<Rational> &x);
LogValue height_exact(const RationalPoint &x);
double height(const RationalPoint &x);

// log(||x||_v^d ||Q||_v / ||Q(x)||_v); Q(x) = 0 is a pole and raises a
// degeneracy error.
LogValue weil_function_exact(const Poly &Q, const Place &v, const std::vector<Rational> &x);
double weil_function(const IntegerForm &Q, const Place &v, const RationalPoint &x);

// Sum of log ||x||_v over every place; exactly zero for x != 0.
LogValue product_formula_check(const Rational &x);

// Primes where some term of the Weil function sum can be nonzero.
std::vector<Integer> support_primes(const std::vector<IntegerForm> &family, const RationalPoint &x);

struct ArithmeticBounds {
    Surd bound_a;
    Surd bound_b;
    Surd tau1;
};

ArithmeticBounds arithmetic_bound_coefficients(int l, int n, const Rational &eps);

enum class schmidt_mode { weak_bezout, bezout };

std::string to_string(schmidt_mode m);
schmidt_mode parse_schmidt_mode(const std::string &s);

struct PointReport {
    RationalPoint x;
    double h = 0;
    double lhs = 0;
    double rhs = 0;
    double slack = 0; // rhs - lhs
    bool exceptional_candidate = false;
    // Sum over all places equals q h(x) + sum_j h(Q_j)/d_j exactly.
    bool identity_holds = false;
    // Simple relations found on a flagged point (a zero coordinate, two
    // coordinates equal up to sign).
    std::vector<std::string> relations;
};

struct SchmidtReport {
    schmidt_mode mode{};
    int l = 0;
    int n = 0;
    Surd coefficient; // bound plus eps
    std::vector<Place> places;
    std::vector<PointReport> points;
    std::size_t flagged = 0;
    std::size_t skipped_height_zero = 0;
};

struct SchmidtOptions {
    schmidt_mode mode = schmidt_mode::weak_bezout;
    Rational eps = make_rational(1, 2);
    // Subgeneral level; the smallest valid level when absent.
    std::optional<int> l;
    FamilyOptions family{};
};

// Pointwise check of sum_{v in S} sum_j lambda_{Q_j,v}(x)/deg Q_j against the
// coefficient of the selected mode times h(x). Points must lie on V and off
// every divisor.
SchmidtReport check_theorem_1_5(const Variety &V, const std::vector<IntegerForm> &family,
                                const std::vector<Place> &S, const std::vector<RationalPoint> &points,
                                const SchmidtOptions &opt = {});

// Random primitive points of P^N with coordinates in [-B, B] off every divisor.
std::vector<RationalPoint> sample_points(std::size_t nvars, const std::vector<IntegerForm> &family, long B,
                                         std::size_t count, std::uint64_t seed = 1);

} // namespace smtlab

#endif
