#ifndef SMTLAB_NEVANLINNA_HPP
#define SMTLAB_NEVANLINNA_HPP

#include <smtlab/bounds.hpp>
#include <smtlab/exppoly.hpp>
#include <smtlab/family.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smtlab
{

enum class domain_kind { plane, disc, annulus };

std::string to_string(domain_kind k);
domain_kind parse_domain_kind(const std::string &s);

// plane: C; disc: |z| < R; annulus: 1/R < |z| < R (R may be infinite).
struct Domain {
    domain_kind kind = domain_kind::plane;
    double R = 0;
    std::optional<double> r0;

    static Domain plane()
    {
        return {domain_kind::plane, 0, std::nullopt};
    }
    static Domain disc(double R)
    {
        return {domain_kind::disc, R, std::nullopt};
    }
    static Domain annulus(double R0)
    {
        return {domain_kind::annulus, R0, std::nullopt};
    }

    // Base radius of the counting and characteristic functions: 1 on the
    // plane and on annuli, R/2 on discs unless overridden.
    double base_radius() const;
    // Largest admissible radius (infinity when unbounded).
    double outer() const;
    bool admits(double r) const;
};

class CurveSpec
{
public:
    // Validates the components and, when a target is given, checks every
    // generator of its ideal vanishes identically on the curve.
    CurveSpec(std::vector<ExpPoly> components, Domain domain, std::optional<Variety> target = std::nullopt);

    const std::vector<ExpPoly> &components() const noexcept
    {
        return m_components;
    }
    const Domain &domain() const noexcept
    {
        return m_domain;
    }
    const std::optional<Variety> &target() const noexcept
    {
        return m_target;
    }
    // Projective dimension of the ambient space.
    std::size_t n() const noexcept
    {
        return m_components.size() - 1;
    }
    bool lies_in(const Variety &V) const;
    ExpPoly pullback(const Poly &D) const;

private:
    std::vector<ExpPoly> m_components;
    Domain m_domain;
    std::optional<Variety> m_target;
};

struct Zero {
    Complex location;
    int multiplicity = 1;
    // Half-width of the certified box around the location.
    double radius = 0;
    // False when the derivative test could not separate a cluster.
    bool resolved = true;
};

struct DivisorSample {
    std::vector<Zero> zeros;
    int count = 0;
    // Raw argument-principle integrals of the boundary circles.
    std::vector<double> windings;
    double max_winding_error = 0;
    double inner = 0; // 0 for discs
    double outer = 0;
    int perturbations = 0;
    bool certified = true;
};

struct Region {
    double inner = 0; // 0 for a closed disc |z| <= outer
    double outer = 0;

    static Region disc(double t)
    {
        return {0, t};
    }
    static Region band(double a, double b)
    {
        return {a, b};
    }
};

struct QuadratureOptions {
    double tolerance = 1e-6;
    // Winding integrals use a much tighter target; only integrality matters.
    double winding_tolerance = 1e-10;
    unsigned max_refinements = 18;
    double theta_offset = 0.1234;
};

// Zeros of phi in a disc |z| <= t or a band a < |z| < b, certified by
// contour integrals of phi'/phi. Negative powers are cleared first.
DivisorSample count_zeros(const ExpPoly &phi, const Region &region, const QuadratureOptions &opt = {});

// Truncation level: nullopt means no truncation.
using Truncation = std::optional<long>;

// Counting functions of the divisor of D(f). Zeros are located once up to the
// largest radius of interest and integrated in closed form.
class PulledBackDivisor
{
public:
    PulledBackDivisor(const CurveSpec &curve, const Poly &D, double max_radius, const QuadratureOptions &opt = {});

    const DivisorSample &sample() const noexcept
    {
        return m_sample;
    }
    const ExpPoly &function() const noexcept
    {
        return m_phi;
    }
    // Plane and discs: N^[M](r) = int_{r0}^r n^[M](t)/t dt. Annuli: the
    // two-sided N_0^[M](r).
    double counting(double r, Truncation M = std::nullopt) const;
    // Unit circle or base circles within this distance of a zero.
    bool zero_near_circle(double r, double tol) const;
    int max_multiplicity() const;

private:
    Domain m_domain;
    ExpPoly m_phi;
    DivisorSample m_sample;
};

double counting_N(const CurveSpec &curve, const Poly &D, Truncation M, double r, const QuadratureOptions &opt = {});

struct RadialSeries {
    std::vector<double> r;
    std::vector<double> values;
    std::vector<double> achieved_tolerance;
};

// Circle mean (1/2pi) int log||f(re^{it})|| dt by the periodic trapezoidal rule.
struct CircleMean {
    double value = 0;
    double error = 0;
};
CircleMean mean_log_norm(const CurveSpec &curve, double r, const QuadratureOptions &opt = {});

struct RadiusValue {
    double value = 0;
    double error = 0;
    // Radius actually used after any perturbation off zeros of D(f).
    double r = 0;
};

RadiusValue characteristic_T(const CurveSpec &curve, double r, const QuadratureOptions &opt = {});
RadialSeries characteristic_T(const CurveSpec &curve, const std::vector<double> &grid, const QuadratureOptions &opt = {});

// Proximity function of f with respect to D. Zeros of D(f) close to a circle
// are divided out of the integrand and their exact means added back.
RadiusValue proximity_m(const CurveSpec &curve, const Poly &D, double r, const QuadratureOptions &opt = {});

struct FmtReport {
    std::vector<double> r;
    std::vector<double> T;
    std::vector<double> m;
    std::vector<double> N;
    std::vector<double> residual;
    double max_tolerance = 0;
    double residual_range = 0;
    double residual_max_abs = 0;
    bool passed = false;
};

// residual(r) = d T(r) - m(r) - N(r). Plane and discs pass when the range over
// the grid is below 1e-2 plus twice the quadrature tolerance; annuli need every
// residual below the same bound.
FmtReport verify_fmt(const CurveSpec &curve, const Poly &D, const std::vector<double> &grid,
                     const QuadratureOptions &opt = {});

struct WronskianResult {
    ExpPoly W;
    bool degenerate = false;
    // Coefficients a_j with sum a_j f_j = 0 when degenerate.
    std::vector<GaussRational> dependence;
    std::string report;
};

WronskianResult wronskian(const std::vector<ExpPoly> &components);
WronskianResult wronskian(const CurveSpec &curve);

using LinearForm = std::vector<Rational>;

struct SmtGeneralReport {
    std::vector<double> r;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> gap;
    std::vector<double> T0;
    std::vector<double> N0_W;
    // Unit-circle terms of Jensen's formula: 2(n+1) times the mean of
    // log||f|| minus twice the mean of log|W|, both on |z| = 1.
    double unit_constant = 0;
    std::size_t independent_subsets = 0;
    bool flagged = false;
    std::vector<std::string> notes;
};

// Both circle integrals of the maximum over linearly independent subsets,
// plus the Wronskian counting function, against (n+1) T_0 and the exact
// unit-circle constant.
SmtGeneralReport verify_smt_general(const CurveSpec &curve, const std::vector<LinearForm> &forms,
                                    const std::vector<double> &grid, const QuadratureOptions &opt = {});

enum class smt_mode { delta_annulus, delta_plane, new_plane, new_annulus };

std::string to_string(smt_mode m);
smt_mode parse_smt_mode(const std::string &s);

struct SmtOptions {
    smt_mode mode = smt_mode::delta_plane;
    Rational eps = make_rational(1, 2);
    // Subgeneral level for the new_* modes.
    std::optional<int> N;
    empty_convention convention = empty_convention::skip_empty;
    QuadratureOptions quadrature{};
};

struct SmtReport {
    smt_mode mode{};
    bool vacuous = false;
    bool passed = false;
    Rational delta;
    Surd defect;
    Surd coefficient;
    Integer L;
    std::vector<double> r;
    std::vector<double> T;
    std::vector<double> counting_sum;
    std::vector<double> slack;
    std::vector<double> allowance;
    bool truncation_insensitive = true;
    bool zero_counts_certified = true;
    std::optional<Selection> selection;
    std::vector<std::string> notes;
};

SmtReport verify_smt_hypersurfaces(const Variety &V, const HypersurfaceFamily &F, const CurveSpec &curve,
                                   const std::vector<double> &grid, const SmtOptions &opt = {});

struct RatioCheck {
    double min_ratio = 0;
    double max_ratio = 0;
    double beta_bound = 0;
    std::size_t samples = 0;
    bool holds = false;
};

// Samples max_i |D_i(f)| / ||f||^d on random circle points (degrees
// normalized to the lcm) and checks it stays in (0, beta].
RatioCheck check_max_ratio(const Variety &V, const HypersurfaceFamily &F, const CurveSpec &curve,
                           std::size_t samples = 200, std::uint64_t seed = 7);

// Log-spaced radii from a to b inclusive.
std::vector<double> log_grid(double a, double b, std::size_t points);

// Least-squares slope of values against log r.
double log_slope(const std::vector<double> &r, const std::vector<double> &values, std::size_t from = 0);

} // namespace smtlab

#endif
