#ifndef SMTLAB_GROEBNER_HPP
#define SMTLAB_GROEBNER_HPP

#include <smtlab/poly.hpp>

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace smtlab
{

class TermOrder
{
public:
    enum class kind { grevlex, lex, weight, elimination };

    static TermOrder grevlex();
    static TermOrder lex();
    // Weight order with grevlex tie-break. Weights must be non-negative.
    static TermOrder weight(const std::vector<Rational> &w);
    // Block order: monomials are first compared by grevlex restricted to the
    // eliminated variables, then by grevlex on the rest.
    static TermOrder elimination(std::vector<bool> eliminated);

    kind type() const noexcept
    {
        return m_kind;
    }

    // Positive when a > b.
    int compare(const Monomial &a, const Monomial &b) const;
    bool greater(const Monomial &a, const Monomial &b) const
    {
        return compare(a, b) > 0;
    }

    std::string describe() const;

    friend bool operator==(const TermOrder &a, const TermOrder &b)
    {
        return a.describe() == b.describe();
    }

private:
    kind m_kind = kind::grevlex;
    std::vector<long long> m_weight;
    std::vector<bool> m_eliminated;
};

struct GroebnerBudget {
    std::size_t max_basis = 5000;
    int max_degree = 40;
};

struct GroebnerBasis {
    TermOrder order;
    // Reduced, monic, sorted by descending leading monomial.
    std::vector<Poly> polys;
    std::vector<Monomial> leading;
    std::size_t nvars = 0;
};

// Homogeneous ideal (with respect to a positive grading, standard by
// default). Gröbner bases are cached per term order; copies share the cache.
class Ideal
{
public:
    Ideal() = default;
    Ideal(std::size_t nvars, std::vector<Poly> generators);
    Ideal(std::size_t nvars, std::vector<Poly> generators, std::vector<int> grading);

    static Ideal zero(std::size_t nvars)
    {
        return Ideal(nvars, {});
    }

    std::size_t nvars() const noexcept
    {
        return m_nvars;
    }
    const std::vector<Poly> &generators() const noexcept
    {
        return m_gens;
    }
    const std::vector<int> &grading() const noexcept
    {
        return m_grading;
    }
    bool standard_grading() const noexcept;

    // Ideal generated by this one and extra generators.
    Ideal with(const std::vector<Poly> &extra) const;

    const GroebnerBasis &basis(const TermOrder &order, const GroebnerBudget &budget = {}) const;

    bool contains(const Poly &p) const;

private:
    struct cache {
        std::mutex mutex;
        std::vector<std::unique_ptr<GroebnerBasis>> entries;
    };

    std::size_t m_nvars = 0;
    std::vector<Poly> m_gens;
    std::vector<int> m_grading;
    std::shared_ptr<cache> m_cache = std::make_shared<cache>();
};

// Reduced Gröbner basis by Buchberger's algorithm (normal selection
// strategy, product and chain criteria, full inter-reduction).
GroebnerBasis groebner_basis(const Ideal &ideal, const TermOrder &order, const GroebnerBudget &budget = {});

Poly normal_form(const Poly &p, const GroebnerBasis &gb);

// Degree-u monomials outside the initial ideal.
std::vector<Monomial> standard_monomials(const GroebnerBasis &gb, int u);

// dim of the degree-u slice of the quotient ring; u must be positive.
Integer hilbert_function(const Ideal &ideal, int u);

// Numerator P(t) of the Hilbert series P(t)/(1-t)^n of the monomial ideal
// generated by `generators` in n variables, coefficients from t^0 upward.
std::vector<Integer> hilbert_series_numerator(const std::vector<Monomial> &generators, std::size_t nvars);

struct DimensionDegree {
    // Projective dimension; -1 for the empty set.
    int dim = -1;
    std::optional<Integer> degree;
    // Hilbert polynomial coefficients in the binomial basis C(u - i + dim, dim)
    // weights h_i, i.e. HP(u) = sum_i h_i C(u - i + dim, dim).
    std::vector<Integer> h_vector;
    // Hilbert function agrees with the polynomial for u >= regularity_start.
    int regularity_start = 1;
};

DimensionDegree dimension_and_degree(const Ideal &ideal, const GroebnerBudget &budget = {});

// Value of the Hilbert polynomial at u.
Integer hilbert_polynomial_value(const DimensionDegree &dd, long u);

// Elimination ideal I ∩ k[keep], expressed in the kept variables
// renumbered in the order given.
Ideal eliminate(const Ideal &ideal, const std::vector<std::size_t> &keep, const GroebnerBudget &budget = {});

} // namespace smtlab

#endif
