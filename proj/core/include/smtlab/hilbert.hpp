#ifndef SMTLAB_HILBERT_HPP
#define SMTLAB_HILBERT_HPP

#include <smtlab/exppoly.hpp>
#include <smtlab/family.hpp>

#include <optional>
#include <string>
#include <vector>

namespace smtlab
{

// Non-negative weights, one per variable of the ambient ring.
class WeightVector
{
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<Rational> c);

    // Rationalizes with denominator 2^20; entries must be finite and >= 0.
    static WeightVector from_doubles(const std::vector<double> &c);
    static WeightVector parse(const std::string &text);

    std::size_t size() const noexcept
    {
        return m_c.size();
    }
    const Rational &operator[](std::size_t i) const noexcept
    {
        return m_c[i];
    }
    const std::vector<Rational> &values() const noexcept
    {
        return m_c;
    }
    Rational sum() const;
    Rational max() const;
    bool is_zero() const;

private:
    std::vector<Rational> m_c;
};

// Y = Phi(V) in P^{q-1} for Phi = [D_1 : ... : D_q] with degrees normalized.
struct EmbeddedImage {
    Variety source;
    HypersurfaceFamily family;
    int d = 1;
    Ideal ideal;
    int k = 0;
    Integer delta;
    Integer bound; // d^k deg V

    Variety image() const;
};

EmbeddedImage embed_family(const Variety &V, const HypersurfaceFamily &F, const GroebnerBudget &budget = {});

// Maximum of sum a.c over monomial bases of the degree-u quotient, attained by
// the standard monomials of a weight order with tie-break grevlex.
Rational hilbert_weight(const Ideal &I, int u, const WeightVector &c);

// A degree-u quotient basis attaining the maximum.
std::vector<Monomial> hilbert_weight_basis(const Ideal &I, int u, const WeightVector &c);

struct ChowSample {
    int u = 0;
    Rational S;
    Integer H;
    Rational value; // (k+1) delta S / (u H)
};

struct ChowEstimate {
    Rational estimate;
    std::vector<ChowSample> samples;
    // True when the ideal is zero and the value is exactly sum c.
    bool exact = false;
    int k = 0;
    Integer delta;
};

ChowEstimate chow_weight_estimate(const Ideal &I, const WeightVector &c, const std::vector<int> &u_list);

struct EfOptions {
    // Sample levels of the asymptotic estimate when e is not exact; values
    // not above the degree are skipped.
    std::vector<int> estimate_u = {8, 12, 16};
};

struct EfReport {
    int u = 0;
    Rational S;
    Integer H;
    Rational lhs;
    Rational rhs;
    Rational e;
    Rational margin;
    bool approximate = false;
    // Only meaningful when the weight value is exact.
    bool passed = false;
};

EfReport verify_ef_inequality(const Ideal &I, int u, const WeightVector &c, const EfOptions &opt = {});

struct ChowBoundReport {
    std::vector<int> indices; // 1-based
    Rational delta_constant;  // Delta of the hyperplane family on Y
    Integer deg_Y;
    Rational e;
    Rational lower;
    Rational margin;
    bool approximate = false;
    bool passed = false;
};

// Hypotheses: (1) the last listed weight is the minimum of those listed, (2)
// Y meets the first l-1 hyperplanes, (3) Y lies in none of them. Delta is the
// distributive constant of the coordinate hyperplanes y_{i_j} on Y.
ChowBoundReport verify_chow_lower_bound(const Variety &Y, const WeightVector &c, const std::vector<int> &indices,
                                        const EfOptions &opt = {});
ChowBoundReport verify_chow_lower_bound(const EmbeddedImage &Y, const WeightVector &c,
                                        const std::vector<int> &indices, const EfOptions &opt = {});

class CurveSpec;

struct CurveWeights {
    std::vector<double> c;
    std::vector<std::string> diagnostics;
};

// c_j = log(||f(z)||^d / |D_j(f(z))|) with D_j raised to the common degree d.
// Negative entries are clamped to 0 and reported.
CurveWeights weights_from_curve_point(const CurveSpec &curve, const HypersurfaceFamily &F, Complex z);

} // namespace smtlab

#endif
