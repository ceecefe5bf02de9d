#include <smtlab/error.hpp>
#include <smtlab/nevanlinna.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

namespace smtlab
{

namespace
{

constexpr double two_pi = 2 * std::numbers::pi;
const Complex two_pi_i{0, two_pi};

} // namespace

std::string to_string(domain_kind k)
{
    switch (k) {
        case domain_kind::plane:
            return "plane";
        case domain_kind::disc:
            return "disc";
        case domain_kind::annulus:
            return "annulus";
    }
    return "?";
}

domain_kind parse_domain_kind(const std::string &s)
{
    if (s == "plane") {
        return domain_kind::plane;
    }
    if (s == "disc") {
        return domain_kind::disc;
    }
    if (s == "annulus") {
        return domain_kind::annulus;
    }
    throw input_error("unknown domain type '" + s + "'");
}

double Domain::base_radius() const
{
    if (r0) {
        return *r0;
    }
    return kind == domain_kind::disc ? R / 2 : 1.0;
}

double Domain::outer() const
{
    if (kind == domain_kind::plane || !std::isfinite(R)) {
        return std::numeric_limits<double>::infinity();
    }
    return R;
}

bool Domain::admits(double r) const
{
    if (!(r > 0) || !std::isfinite(r)) {
        return false;
    }
    switch (kind) {
        case domain_kind::plane:
            return true;
        case domain_kind::disc:
            return r < R;
        case domain_kind::annulus:
            return r >= 1 && r < outer();
    }
    return false;
}

CurveSpec::CurveSpec(std::vector<ExpPoly> components, Domain domain, std::optional<Variety> target)
    : m_components(std::move(components)), m_domain(domain), m_target(std::move(target))
{
    if (m_components.size() < 2) {
        throw input_error("a curve needs at least two components");
    }
    if (std::all_of(m_components.begin(), m_components.end(), [](const ExpPoly &f) { return f.is_zero(); })) {
        throw input_error("all components vanish identically");
    }
    if (m_domain.kind == domain_kind::disc && !(m_domain.R > 0)) {
        throw input_error("disc radius must be positive");
    }
    if (m_domain.kind == domain_kind::annulus && !(m_domain.R > 1)) {
        throw input_error("annulus A(R0) needs R0 > 1");
    }
    if (m_domain.kind != domain_kind::annulus) {
        for (const auto &f : m_components) {
            if (f.has_negative_powers()) {
                throw input_error("negative powers of z are only allowed on annuli: " + f.to_string());
            }
        }
    }
    if (m_domain.r0 && !m_domain.admits(*m_domain.r0) && m_domain.kind != domain_kind::plane) {
        throw input_error("base radius outside the domain");
    }
    if (m_target) {
        if (m_target->nvars() != m_components.size()) {
            throw input_error("curve has " + std::to_string(m_components.size()) + " components but V lives in P^"
                              + std::to_string(m_target->ambient_dim()));
        }
        if (!lies_in(*m_target)) {
            throw input_error("curve not in V");
        }
    }
}

bool CurveSpec::lies_in(const Variety &V) const
{
    if (V.nvars() != m_components.size()) {
        return false;
    }
    for (const auto &g : V.ideal().generators()) {
        if (!compose(g, m_components).is_zero()) {
            return false;
        }
    }
    return true;
}

ExpPoly CurveSpec::pullback(const Poly &D) const
{
    return compose(D, m_components);
}

// ---------------------------------------------------------------------------
// Zero location by the argument principle.

namespace
{

struct contour_value {
    Complex value;
    double error = 0;
    bool finite = true;
};

class log_derivative
{
public:
    explicit log_derivative(const ExpPoly &f) : m_f(f), m_df(f.derivative()) {}

    Complex operator()(Complex z) const
    {
        const ScaledValue a = m_f.evaluate_scaled(z);
        const ScaledValue b = m_df.evaluate_scaled(z);
        const double fa = std::abs(a.mantissa);
        if (fa == 0) {
            m_noise = std::numeric_limits<double>::infinity();
            return {std::numeric_limits<double>::quiet_NaN(), 0};
        }
        const double rel = std::exp(b.log_scale - a.log_scale);
        const Complex g = b.mantissa / a.mantissa * rel;
        constexpr double u = 8 * std::numeric_limits<double>::epsilon();
        m_noise = std::max(m_noise, u * (b.magnitude * rel + std::abs(g) * a.magnitude) / fa);
        return g;
    }

    // Largest rounding-error estimate since the last call.
    double take_noise() const
    {
        return std::exchange(m_noise, 0.0);
    }

private:
    const ExpPoly &m_f;
    ExpPoly m_df;
    mutable double m_noise = 0;
};

// One Kronrod panel with its embedded Gauss estimate.
template <typename F>
std::pair<Complex, double> kronrod_panel(F &f, double a, double b)
{
    using K = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto &kx = K::abscissa();
    const auto &kw = K::weights();
    const auto &gw = G::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Complex f0 = f(c);
    Complex k = kw[0] * f0;
    Complex g = gw[0] * f0;
    for (std::size_t i = 1; i < kx.size(); ++i) {
        const Complex s = f(c - h * kx[i]) + f(c + h * kx[i]);
        k += kw[i] * s;
        if (i % 2 == 0) {
            g += gw[i / 2] * s;
        }
    }
    return {k * h, std::abs(k - g) * h};
}

// Adaptive Gauss-Kronrod with an absolute error target. Panels stop refining
// once the Kronrod error is at the rounding level of the integrand; a panel
// whose rounding error alone is large means the contour runs through a zero.
template <typename F>
contour_value integrate(F &&f, const log_derivative &g, double a, double b, double tol, unsigned depth = 48)
{
    g.take_noise();
    const auto [v, err] = kronrod_panel(f, a, b);
    const double noise = g.take_noise() * (b - a) * 4;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || !std::isfinite(err) || !std::isfinite(noise)) {
        return {0, std::numeric_limits<double>::infinity(), false};
    }
    if (err <= std::max(tol, noise) || depth == 0) {
        return {v, err + noise, err + noise < 0.05};
    }
    const double mid = 0.5 * (a + b);
    contour_value l = integrate(f, g, a, mid, 0.5 * tol, depth - 1);
    if (!l.finite) {
        return l;
    }
    contour_value r = integrate(f, g, mid, b, 0.5 * tol, depth - 1);
    return {l.value + r.value, l.error + r.error, r.finite};
}

// (1/2 pi i) int over the segment a -> b of f'/f.
contour_value segment_winding(const log_derivative &g, Complex a, Complex b, double tol)
{
    const Complex dz = b - a;
    auto f = [&](double t) { return g(a + t * dz) * dz; };
    contour_value c = integrate(f, g, 0.0, 1.0, tol);
    c.value /= two_pi_i;
    c.error /= two_pi;
    return c;
}

contour_value circle_winding(const log_derivative &g, double r, double tol)
{
    auto f = [&](double t) {
        const Complex e = std::polar(1.0, t);
        return g(r * e) * Complex(0, r) * e;
    };
    // Splitting the circle keeps each Kronrod panel well resolved.
    contour_value total{0, 0, true};
    constexpr int arcs = 8;
    for (int i = 0; i < arcs; ++i) {
        contour_value c = integrate(f, g, two_pi * i / arcs, two_pi * (i + 1) / arcs, tol);
        total.value += c.value;
        total.error += c.error;
        total.finite = total.finite && c.finite;
    }
    total.value /= two_pi_i;
    total.error /= two_pi;
    return total;
}

std::optional<int> as_count(const contour_value &c)
{
    if (!c.finite) {
        return std::nullopt;
    }
    const double k = std::round(c.value.real());
    if (std::abs(c.value.real() - k) + c.error < 0.25 && std::abs(c.value.imag()) + c.error < 0.25 && k >= 0) {
        return static_cast<int>(k);
    }
    return std::nullopt;
}

struct rect {
    Complex lo;
    Complex hi;

    Complex center() const
    {
        return 0.5 * (lo + hi);
    }
    double width() const
    {
        return hi.real() - lo.real();
    }
    double height() const
    {
        return hi.imag() - lo.imag();
    }
    bool contains(Complex z, double slack) const
    {
        return z.real() >= lo.real() - slack && z.real() <= hi.real() + slack && z.imag() >= lo.imag() - slack
               && z.imag() <= hi.imag() + slack;
    }
};

class zero_locator
{
public:
    zero_locator(const ExpPoly &f, double tol) : m_tol(tol), m_g(f)
    {
        m_derivs.push_back(f);
    }

    std::optional<int> count(const rect &R, double *err = nullptr) const
    {
        const Complex a = R.lo;
        const Complex b(R.hi.real(), R.lo.imag());
        const Complex c = R.hi;
        const Complex d(R.lo.real(), R.hi.imag());
        contour_value total{0, 0, true};
        for (auto [p, q] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, d}, std::pair{d, a}}) {
            contour_value s = segment_winding(m_g, p, q, m_tol);
            total.value += s.value;
            total.error += s.error;
            total.finite = total.finite && s.finite;
        }
        if (err) {
            *err = total.error;
        }
        return as_count(total);
    }

    void locate(const rect &R, int count, std::vector<Zero> &out)
    {
        if (count <= 0) {
            return;
        }
        const double size = std::max(R.width(), R.height());
        const double scale = 1 + std::abs(R.center());
        // A cluster is declared a single zero of multiplicity m only once it
        // fits in a box of relative size 1e-4.
        const bool tiny = size < 1e-4 * scale;
        if ((count == 1 || tiny) && try_single(R, count, out)) {
            return;
        }
        if (tiny) {
            out.push_back({R.center(), count, 0.5 * size, false});
            return;
        }
        static constexpr double offsets[] = {0.0173, -0.0291, 0.0413, -0.0067, 0.0337, -0.0449};
        const bool split_x = R.width() >= R.height();
        for (double off : offsets) {
            const double s = 0.5 + off;
            rect A = R;
            rect B = R;
            if (split_x) {
                const double x = R.lo.real() + s * R.width();
                A.hi = {x, R.hi.imag()};
                B.lo = {x, R.lo.imag()};
            } else {
                const double y = R.lo.imag() + s * R.height();
                A.hi = {R.hi.real(), y};
                B.lo = {R.lo.real(), y};
            }
            auto ca = count_of(A);
            auto cb = count_of(B);
            if (ca && cb && *ca + *cb == count) {
                locate(A, *ca, out);
                locate(B, *cb, out);
                return;
            }
        }
        // Rounding noise near a cluster or a high-order zero defeats the
        // contour counts; the count stays certified, the location does not.
        if (!try_single(R, count, out)) {
            out.push_back({R.center(), count, 0.5 * size, false});
        }
    }

private:
    std::optional<int> count_of(const rect &R) const
    {
        return count(R);
    }

    const ExpPoly &deriv(std::size_t k)
    {
        while (m_derivs.size() <= k) {
            m_derivs.push_back(m_derivs.back().derivative());
        }
        return m_derivs[k];
    }

    static Complex ratio(const ScaledValue &a, const ScaledValue &b)
    {
        return a.mantissa / b.mantissa * std::exp(a.log_scale - b.log_scale);
    }

    bool try_single(const rect &R, int m, std::vector<Zero> &out)
    {
        const ExpPoly &h = deriv(static_cast<std::size_t>(m - 1));
        const ExpPoly &dh = deriv(static_cast<std::size_t>(m));
        Complex z = R.center();
        double last = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 100 && last > 1e-15 * (1 + std::abs(z)); ++it) {
            const ScaledValue hv = h.evaluate_scaled(z);
            const ScaledValue dv = dh.evaluate_scaled(z);
            if (hv.mantissa == Complex(0)) {
                last = 0;
                break;
            }
            if (dv.mantissa == Complex(0)) {
                return false;
            }
            const Complex step = ratio(hv, dv);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                return false;
            }
            z -= step;
            last = std::abs(step);
        }
        const double size = std::max(R.width(), R.height());
        if (last > 1e-10 * (1 + std::abs(z)) || !R.contains(z, 1e-12 * (1 + std::abs(z)))) {
            return false;
        }
        // Taylor dominance: order m must dominate every lower order on the box.
        // Lower orders that vanish to rounding level only make the zero a
        // numerical multiple one, reported as unresolved.
        const double rho = std::max(0.5 * size, 1e-12);
        const double top = deriv(static_cast<std::size_t>(m)).log_abs(z) + m * std::log(rho) - std::lgamma(m + 1.0);
        bool resolved = true;
        for (int j = 0; j < m; ++j) {
            const ScaledValue v = deriv(static_cast<std::size_t>(j)).evaluate_scaled(z);
            const double lrho = j * std::log(rho) - std::lgamma(j + 1.0);
            if (v.log_abs() + lrho <= top + std::log(1e-3)) {
                continue;
            }
            const double noise = std::log(64 * std::numeric_limits<double>::epsilon() * v.magnitude) + v.log_scale;
            if (std::abs(v.mantissa) <= 64 * std::numeric_limits<double>::epsilon() * v.magnitude
                && noise + lrho <= top + std::log(0.5)) {
                resolved = false;
                continue;
            }
            return false;
        }
        resolved = resolved && (m == 1 || size < 1e-4 * (1 + std::abs(z)));
        out.push_back({z, m, 0.5 * size, resolved});
        return true;
    }

    double m_tol;
    log_derivative m_g;
    std::vector<ExpPoly> m_derivs;
};

struct circle_count {
    int count = 0;
    double radius = 0;
    double winding = 0;
    double error = 0;
    int perturbations = 0;
};

circle_count certified_circle(const ExpPoly &f, double t, double tol)
{
    log_derivative g(f);
    static constexpr double deltas[] = {0, 3e-7, -6e-7, 1e-6};
    for (int i = 0; i < 4; ++i) {
        const double r = t + deltas[i] * std::max(1.0, t);
        contour_value c = circle_winding(g, r, tol);
        if (auto k = as_count(c)) {
            return {*k, r, c.value.real(), c.error, i};
        }
    }
    throw geometry_error("zero of " + f.to_string() + " on or near the circle |z| = " + std::to_string(t)
                         + " after 3 perturbations");
}

std::vector<Zero> locate_in_square(const ExpPoly &f, double t, double tol)
{
    zero_locator loc(f, tol);
    static constexpr double pads[] = {1.7e-3, 3.1e-3, 5.3e-3, 8.9e-3};
    for (double pad : pads) {
        const double h = t * (1 + pad) + pad;
        rect R{{-h, -h}, {h, h}};
        if (auto c = loc.count(R)) {
            std::vector<Zero> out;
            loc.locate(R, *c, out);
            return out;
        }
    }
    throw quadrature_error("argument principle failed on the enclosing square of radius " + std::to_string(t));
}

} // namespace

DivisorSample count_zeros(const ExpPoly &phi, const Region &region, const QuadratureOptions &opt)
{
    if (phi.is_zero()) {
        throw degeneracy_error("cannot count zeros of the zero function");
    }
    if (!(region.outer > region.inner) || region.inner < 0) {
        throw input_error("empty region");
    }
    if (region.inner == 0 && phi.has_negative_powers()) {
        throw input_error("disc regions need a function without negative powers of z");
    }
    const ExpPoly psi = phi.shift(phi.pole_order());
    DivisorSample s;
    const circle_count outer = certified_circle(psi, region.outer, opt.winding_tolerance);
    s.outer = outer.radius;
    s.windings.push_back(outer.winding);
    s.max_winding_error = outer.error;
    s.perturbations = outer.perturbations;
    int inner_count = 0;
    if (region.inner > 0) {
        const circle_count inner = certified_circle(psi, region.inner, opt.winding_tolerance);
        s.inner = inner.radius;
        s.windings.push_back(inner.winding);
        s.max_winding_error = std::max(s.max_winding_error, inner.error);
        s.perturbations += inner.perturbations;
        inner_count = inner.count;
    }
    s.count = outer.count - inner_count;
    if (outer.count > 0) {
        int located = 0;
        for (const Zero &z : locate_in_square(psi, s.outer, opt.winding_tolerance)) {
            const double a = std::abs(z.location);
            const bool inside = region.inner > 0 ? (a > s.inner && a < s.outer) : a <= s.outer;
            if (inside) {
                s.zeros.push_back(z);
                located += z.multiplicity;
                s.certified = s.certified && z.resolved;
            }
        }
        if (located != s.count) {
            throw consistency_error("located " + std::to_string(located) + " zeros but the winding numbers give "
                                    + std::to_string(s.count));
        }
    }
    std::sort(s.zeros.begin(), s.zeros.end(), [](const Zero &a, const Zero &b) {
        return std::abs(a.location) < std::abs(b.location);
    });
    return s;
}

// ---------------------------------------------------------------------------
// Counting functions.

namespace
{

Region divisor_region(const Domain &dom, double max_radius)
{
    switch (dom.kind) {
        case domain_kind::plane:
            return Region::disc(std::max(max_radius, dom.base_radius()) * 1.1 + 0.5);
        case domain_kind::disc: {
            const double want = std::max(max_radius, dom.base_radius());
            return Region::disc(std::min(want * 1.1 + 0.5, 0.5 * (want + dom.R)));
        }
        case domain_kind::annulus: {
            double out = max_radius * 1.1;
            if (std::isfinite(dom.R)) {
                out = std::min(out, 0.5 * (max_radius + dom.R));
            }
            return Region::band(1 / out, out);
        }
    }
    return {};
}

long weight(int multiplicity, Truncation M)
{
    return M ? std::min<long>(*M, multiplicity) : multiplicity;
}

} // namespace

PulledBackDivisor::PulledBackDivisor(const CurveSpec &curve, const Poly &D, double max_radius,
                                     const QuadratureOptions &opt)
    : m_domain(curve.domain()), m_phi(curve.pullback(D))
{
    if (m_phi.is_zero()) {
        throw degeneracy_error("the curve lies in the hypersurface " + D.to_string() + " (D(f) vanishes identically)");
    }
    if (!m_domain.admits(max_radius)) {
        throw input_error("radius " + std::to_string(max_radius) + " outside the domain");
    }
    m_sample = count_zeros(m_phi, divisor_region(m_domain, max_radius), opt);
}

double PulledBackDivisor::counting(double r, Truncation M) const
{
    if (r > m_sample.outer) {
        throw input_error("radius beyond the located divisor");
    }
    double total = 0;
    if (m_domain.kind == domain_kind::annulus) {
        for (const Zero &z : m_sample.zeros) {
            const double a = std::abs(z.location);
            if (a >= 1 && a <= r) {
                total += static_cast<double>(weight(z.multiplicity, M)) * std::log(r / a);
            } else if (a < 1 && a >= 1 / r) {
                total += static_cast<double>(weight(z.multiplicity, M)) * std::log(r * a);
            }
        }
        return total;
    }
    const double r0 = m_domain.base_radius();
    for (const Zero &z : m_sample.zeros) {
        const double a = std::abs(z.location);
        if (a <= r) {
            total += static_cast<double>(weight(z.multiplicity, M)) * std::log(r / std::max(a, r0));
        }
    }
    return total;
}

bool PulledBackDivisor::zero_near_circle(double r, double tol) const
{
    return std::any_of(m_sample.zeros.begin(), m_sample.zeros.end(),
                       [&](const Zero &z) { return std::abs(std::abs(z.location) - r) < tol; });
}

int PulledBackDivisor::max_multiplicity() const
{
    int m = 0;
    for (const Zero &z : m_sample.zeros) {
        m = std::max(m, z.multiplicity);
    }
    return m;
}

double counting_N(const CurveSpec &curve, const Poly &D, Truncation M, double r, const QuadratureOptions &opt)
{
    return PulledBackDivisor(curve, D, r, opt).counting(r, M);
}

// ---------------------------------------------------------------------------
// Circle means.

namespace
{

// Periodic trapezoidal rule with doubling; stops when two successive levels
// agree to tol (relative to max(1, |I|)).
template <typename F>
CircleMean trapezoid_mean(F &&f, double offset, const QuadratureOptions &opt)
{
    std::size_t n = 64;
    double sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
        sum += f(offset + two_pi * static_cast<double>(j) / static_cast<double>(n));
    }
    double prev = sum / static_cast<double>(n);
    for (unsigned level = 0; level < opt.max_refinements; ++level) {
        for (std::size_t j = 0; j < n; ++j) {
            sum += f(offset + two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n));
        }
        n *= 2;
        const double cur = sum / static_cast<double>(n);
        const double diff = std::abs(cur - prev);
        if (diff <= opt.tolerance * 0.1 * std::max(1.0, std::abs(cur)) && level >= 1) {
            return {cur, diff};
        }
        prev = cur;
    }
    throw quadrature_error("circle mean did not converge; achieved " + std::to_string(std::abs(prev)) + " after "
                           + std::to_string(n) + " nodes");
}

// Mean of log|phi| on |z| = r. Zeros close to the circle are divided out and
// their exact means log max(r, |a|) added back.
CircleMean mean_log_abs(const ExpPoly &phi, const std::vector<Zero> &zeros, double r, const QuadratureOptions &opt)
{
    std::vector<const Zero *> near;
    for (const Zero &z : zeros) {
        if (std::abs(std::abs(z.location) - r) < std::max(0.05 * r, 1e-3)) {
            near.push_back(&z);
        }
    }
    auto f = [&](double t) {
        const Complex z = std::polar(r, t);
        double v = phi.log_abs(z);
        for (const Zero *a : near) {
            v -= a->multiplicity * std::log(std::abs(z - a->location));
        }
        return v;
    };
    CircleMean m = trapezoid_mean(f, opt.theta_offset, opt);
    for (const Zero *a : near) {
        m.value += a->multiplicity * std::log(std::max(r, std::abs(a->location)));
    }
    return m;
}

CircleMean combine_annulus(const std::function<CircleMean(double)> &mean, double r)
{
    const CircleMean a = mean(r);
    const CircleMean b = mean(1 / r);
    const CircleMean c = mean(1.0);
    return {a.value + b.value - 2 * c.value, a.error + b.error + 2 * c.error};
}

CircleMean combine_plane(const std::function<CircleMean(double)> &mean, double r, double r0)
{
    const CircleMean a = mean(r);
    const CircleMean b = mean(r0);
    return {a.value - b.value, a.error + b.error};
}

void check_radius(const CurveSpec &curve, double r)
{
    if (!curve.domain().admits(r)) {
        throw input_error("radius " + std::to_string(r) + " outside the " + to_string(curve.domain().kind) + " domain");
    }
}

} // namespace

CircleMean mean_log_norm(const CurveSpec &curve, double r, const QuadratureOptions &opt)
{
    auto f = [&](double t) { return log_norm(curve.components(), std::polar(r, t)); };
    return trapezoid_mean(f, opt.theta_offset, opt);
}

RadiusValue characteristic_T(const CurveSpec &curve, double r, const QuadratureOptions &opt)
{
    check_radius(curve, r);
    auto mean = [&](double rho) { return mean_log_norm(curve, rho, opt); };
    const CircleMean v = curve.domain().kind == domain_kind::annulus
                             ? combine_annulus(mean, r)
                             : combine_plane(mean, r, curve.domain().base_radius());
    return {v.value, v.error, r};
}

RadialSeries characteristic_T(const CurveSpec &curve, const std::vector<double> &grid, const QuadratureOptions &opt)
{
    RadialSeries s;
    for (double r : grid) {
        const RadiusValue v = characteristic_T(curve, r, opt);
        s.r.push_back(r);
        s.values.push_back(v.value);
        s.achieved_tolerance.push_back(v.error);
    }
    return s;
}

namespace
{

int degree_of(const Poly &D)
{
    auto d = D.homogeneous_degree();
    if (!d || *d < 1) {
        throw input_error("hypersurfaces need a homogeneous polynomial of positive degree: " + D.to_string());
    }
    return *d;
}

RadiusValue proximity_with(const CurveSpec &curve, const PulledBackDivisor &div, int d, double r,
                           const QuadratureOptions &opt)
{
    check_radius(curve, r);
    auto mean = [&](double rho) {
        const CircleMean a = mean_log_norm(curve, rho, opt);
        const CircleMean b = mean_log_abs(div.function(), div.sample().zeros, rho, opt);
        return CircleMean{d * a.value - b.value, d * a.error + b.error};
    };
    const CircleMean v = curve.domain().kind == domain_kind::annulus
                             ? combine_annulus(mean, r)
                             : combine_plane(mean, r, curve.domain().base_radius());
    return {v.value, v.error, r};
}

double divisor_radius(const CurveSpec &curve, double r)
{
    return std::max(r, curve.domain().base_radius());
}

} // namespace

RadiusValue proximity_m(const CurveSpec &curve, const Poly &D, double r, const QuadratureOptions &opt)
{
    const int d = degree_of(D);
    check_radius(curve, r);
    PulledBackDivisor div(curve, D, divisor_radius(curve, r), opt);
    return proximity_with(curve, div, d, r, opt);
}

FmtReport verify_fmt(const CurveSpec &curve, const Poly &D, const std::vector<double> &grid,
                     const QuadratureOptions &opt)
{
    if (grid.empty()) {
        throw input_error("empty radius grid");
    }
    const int d = degree_of(D);
    for (double r : grid) {
        check_radius(curve, r);
    }
    PulledBackDivisor div(curve, D, divisor_radius(curve, *std::max_element(grid.begin(), grid.end())), opt);
    FmtReport rep;
    for (double r : grid) {
        const RadiusValue T = characteristic_T(curve, r, opt);
        const RadiusValue m = proximity_with(curve, div, d, r, opt);
        const double N = div.counting(r);
        rep.r.push_back(r);
        rep.T.push_back(T.value);
        rep.m.push_back(m.value);
        rep.N.push_back(N);
        rep.residual.push_back(d * T.value - m.value - N);
        rep.max_tolerance = std::max(rep.max_tolerance, d * T.error + m.error);
    }
    const auto [lo, hi] = std::minmax_element(rep.residual.begin(), rep.residual.end());
    rep.residual_range = *hi - *lo;
    rep.residual_max_abs = std::max(std::abs(*lo), std::abs(*hi));
    const double bound = 1e-2 + 2 * rep.max_tolerance;
    rep.passed = curve.domain().kind == domain_kind::annulus ? rep.residual_max_abs < bound
                                                              : rep.residual_range < bound;
    return rep;
}

// ---------------------------------------------------------------------------
// Wronskians.

namespace
{

ExpPoly determinant(const std::vector<std::vector<ExpPoly>> &M)
{
    const std::size_t n = M.size();
    // Laplace expansion along rows, memoized on the set of used columns.
    std::vector<std::optional<ExpPoly>> memo(std::size_t{1} << n);
    std::function<ExpPoly(std::size_t, unsigned)> rec = [&](std::size_t row, unsigned used) -> ExpPoly {
        if (row == n) {
            return ExpPoly(1);
        }
        if (memo[used]) {
            return *memo[used];
        }
        ExpPoly acc;
        int sign = 1;
        for (std::size_t c = 0; c < n; ++c) {
            if (used & (1U << c)) {
                continue;
            }
            if (!M[row][c].is_zero()) {
                ExpPoly t = M[row][c] * rec(row + 1, used | (1U << c));
                if (sign > 0) {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            sign = -sign;
        }
        memo[used] = acc;
        return acc;
    };
    return rec(0, 0);
}

// Nonzero vector in the kernel of the columns (each column an ExpPoly).
std::vector<GaussRational> dependence_of(const std::vector<ExpPoly> &cols)
{
    std::map<std::pair<GaussRational, int>, std::size_t> index;
    for (const auto &f : cols) {
        for (const auto &[key, c] : f.monomials()) {
            index.emplace(key, index.size());
        }
    }
    const std::size_t m = index.size();
    const std::size_t n = cols.size();
    std::vector<std::vector<GaussRational>> A(m, std::vector<GaussRational>(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (const auto &[key, c] : cols[j].monomials()) {
            A[index[key]][j] = c;
        }
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t j = 0; j < n && row < m; ++j) {
        std::size_t p = row;
        while (p < m && A[p][j].is_zero()) {
            ++p;
        }
        if (p == m) {
            continue;
        }
        std::swap(A[p], A[row]);
        const GaussRational inv = A[row][j].inverse();
        for (auto &x : A[row]) {
            x = x * inv;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i != row && !A[i][j].is_zero()) {
                const GaussRational f = A[i][j];
                for (std::size_t c = 0; c < n; ++c) {
                    A[i][c] -= f * A[row][c];
                }
            }
        }
        pivot_col.push_back(j);
        ++row;
    }
    for (std::size_t free = 0; free < n; ++free) {
        if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) {
            continue;
        }
        std::vector<GaussRational> v(n);
        v[free] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) {
            v[pivot_col[r]] = -A[r][free];
        }
        return v;
    }
    return {};
}

} // namespace

WronskianResult wronskian(const std::vector<ExpPoly> &components)
{
    const std::size_t n = components.size();
    if (n == 0 || n > 16) {
        throw input_error("wronskian needs between 1 and 16 components");
    }
    std::vector<std::vector<ExpPoly>> M(n, std::vector<ExpPoly>(n));
    for (std::size_t j = 0; j < n; ++j) {
        M[0][j] = components[j];
        for (std::size_t i = 1; i < n; ++i) {
            M[i][j] = M[i - 1][j].derivative();
        }
    }
    WronskianResult res;
    res.W = determinant(M);
    if (res.W.is_zero()) {
        res.degenerate = true;
        res.dependence = dependence_of(components);
        std::ostringstream os;
        os << "linearly degenerate:";
        bool first = true;
        for (std::size_t j = 0; j < res.dependence.size(); ++j) {
            if (res.dependence[j].is_zero()) {
                continue;
            }
            os << (first ? " " : " + ") << res.dependence[j].to_string() << "*f" << j;
            first = false;
        }
        os << " = 0";
        res.report = os.str();
    }
    return res;
}

WronskianResult wronskian(const CurveSpec &curve)
{
    return wronskian(curve.components());
}

// ---------------------------------------------------------------------------
// Second main theorem diagnostics.

namespace
{

std::size_t rational_rank(std::vector<LinearForm> rows)
{
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0) {
            ++p;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[p], rows[rank]);
        for (std::size_t i = rank + 1; i < rows.size(); ++i) {
            if (rows[i][c] != 0) {
                const Rational f = rows[i][c] / rows[rank][c];
                for (std::size_t k = c; k < cols; ++k) {
                    rows[i][k] -= f * rows[rank][k];
                }
            }
        }
        ++rank;
    }
    return rank;
}

Poly form_to_poly(const LinearForm &L)
{
    Poly p(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) {
        p.add_term(Monomial::variable(L.size(), i), L[i]);
    }
    return p;
}

} // namespace

SmtGeneralReport verify_smt_general(const CurveSpec &curve, const std::vector<LinearForm> &forms,
                                    const std::vector<double> &grid, const QuadratureOptions &opt)
{
    if (curve.domain().kind != domain_kind::annulus) {
        throw input_error("the general second main theorem check runs on annuli");
    }
    if (forms.empty() || forms.size() > 20) {
        throw input_error("need between 1 and 20 linear forms");
    }
    const std::size_t n1 = curve.components().size();
    std::vector<ExpPoly> values;
    for (const auto &L : forms) {
        if (L.size() != n1) {
            throw input_error("linear form of the wrong length");
        }
        ExpPoly v = compose(form_to_poly(L), curve.components());
        if (v.is_zero()) {
            throw degeneracy_error("curve lies in the hyperplane " + form_to_poly(L).to_string());
        }
        values.push_back(std::move(v));
    }
    const WronskianResult W = wronskian(curve);
    if (W.degenerate) {
        throw degeneracy_error("curve is linearly degenerate: " + W.report);
    }
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t mask = 1; mask < (1U << forms.size()); ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (size > n1) {
            continue;
        }
        std::vector<LinearForm> rows;
        for (std::size_t i = 0; i < forms.size(); ++i) {
            if (mask & (1U << i)) {
                rows.push_back(forms[i]);
            }
        }
        if (rational_rank(rows) == size) {
            subsets.push_back(mask);
        }
    }
    SmtGeneralReport rep;
    rep.independent_subsets = subsets.size();
    rep.notes.push_back("S_f(r) is not modeled; the gap is reported without assertion");
    const double rmax = *std::max_element(grid.begin(), grid.end());
    for (double r : grid) {
        check_radius(curve, r);
    }
    const DivisorSample wz = count_zeros(W.W, divisor_region(curve.domain(), rmax), opt);
    auto max_mean = [&](double rho) {
        auto f = [&](double t) {
            const Complex z = std::polar(rho, t);
            const double ln = log_norm(curve.components(), z);
            std::vector<double> v(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) {
                v[i] = ln - values[i].log_abs(z);
            }
            double best = 0;
            for (std::uint32_t mask : subsets) {
                double s = 0;
                for (std::size_t i = 0; i < values.size(); ++i) {
                    if (mask & (1U << i)) {
                        s += v[i];
                    }
                }
                best = std::max(best, s);
            }
            return best;
        };
        return trapezoid_mean(f, opt.theta_offset, opt);
    };
    rep.unit_constant = 2 * static_cast<double>(n1) * mean_log_norm(curve, 1.0, opt).value
                        - 2 * mean_log_abs(W.W, wz.zeros, 1.0, opt).value;
    for (double r : grid) {
        const RadiusValue T0 = characteristic_T(curve, r, opt);
        const double inner = max_mean(r).value + max_mean(1 / r).value;
        double NW = 0;
        for (const Zero &z : wz.zeros) {
            const double a = std::abs(z.location);
            if (a >= 1 && a <= r) {
                NW += z.multiplicity * std::log(r / a);
            } else if (a < 1 && a >= 1 / r) {
                NW += z.multiplicity * std::log(r * a);
            }
        }
        rep.r.push_back(r);
        rep.T0.push_back(T0.value);
        rep.N0_W.push_back(NW);
        rep.lhs.push_back(inner);
        rep.rhs.push_back(static_cast<double>(n1) * T0.value - NW + rep.unit_constant);
        rep.gap.push_back(rep.rhs.back() - inner);
        const double allowance = 0.5 + std::max(0.0, std::log(std::max(T0.value, 1e-300)));
        if (rep.gap.back() < -allowance) {
            rep.flagged = true;
        }
    }
    return rep;
}

std::string to_string(smt_mode m)
{
    switch (m) {
        case smt_mode::delta_annulus:
            return "1.1-annulus";
        case smt_mode::delta_plane:
            return "1.2-plane";
        case smt_mode::new_plane:
            return "1.1new";
        case smt_mode::new_annulus:
            return "1.2new";
    }
    return "?";
}

smt_mode parse_smt_mode(const std::string &s)
{
    for (auto m : {smt_mode::delta_annulus, smt_mode::delta_plane, smt_mode::new_plane, smt_mode::new_annulus}) {
        if (to_string(m) == s) {
            return m;
        }
    }
    throw input_error("unknown SMT mode '" + s + "' (expected 1.1-annulus, 1.2-plane, 1.1new or 1.2new)");
}

SmtReport verify_smt_hypersurfaces(const Variety &V, const HypersurfaceFamily &F, const CurveSpec &curve,
                                   const std::vector<double> &grid, const SmtOptions &opt)
{
    if (grid.empty()) {
        throw input_error("empty radius grid");
    }
    const bool annulus_mode = opt.mode == smt_mode::delta_annulus || opt.mode == smt_mode::new_annulus;
    if (annulus_mode != (curve.domain().kind == domain_kind::annulus)) {
        throw input_error("mode " + to_string(opt.mode) + " does not match the " + to_string(curve.domain().kind)
                          + " domain");
    }
    if (curve.domain().kind == domain_kind::disc) {
        throw input_error("the hypersurface checks run on the plane or on annuli");
    }
    if (!curve.lies_in(V)) {
        throw input_error("curve not in V");
    }
    if (opt.eps <= 0) {
        throw input_error("epsilon must be positive");
    }
    for (double r : grid) {
        check_radius(curve, r);
    }
    const auto &polys = F.polys();
    for (const auto &D : polys) {
        if (curve.pullback(D).is_zero()) {
            throw degeneracy_error("curve lies in the hypersurface " + D.to_string());
        }
    }
    FamilyGeometry g(V, F);
    const int k = V.dim();
    const int q = static_cast<int>(g.q());
    SmtReport rep;
    rep.mode = opt.mode;
    rep.delta = g.distributive_constant(opt.convention).value;
    LevelParams lp{F.lcm_degree(), k, V.degree(), Surd(rep.delta), opt.eps};
    if (opt.mode == smt_mode::delta_annulus || opt.mode == smt_mode::delta_plane) {
        rep.defect = Surd(rep.delta * (k + 1));
    } else {
        if (!opt.N || *opt.N <= k) {
            throw input_error("mode " + to_string(opt.mode) + " needs a subgeneral level N > k");
        }
        const int N = *opt.N;
        if (!g.subgeneral_position(N).holds) {
            throw precondition_error("family is not in " + std::to_string(N) + "-subgeneral position");
        }
        if (!g.bezout().holds) {
            throw precondition_error("family does not satisfy the Bezout property");
        }
        rep.selection = g.select_bezout(N);
        rep.defect = defect_bound(defect_theorem::new_1_1, k, N);
        lp.tau = tau(N, k);
    }
    rep.coefficient = Surd(q) - rep.defect - Surd(opt.eps);
    rep.notes.push_back("S_f(r) absorbed: slack must exceed -(1 + 0.1 eps T(r)) on the tail half of the grid");
    rep.notes.push_back("algebraic nondegeneracy of the curve is assumed, not checked");
    if (rep.coefficient.sign() <= 0) {
        rep.vacuous = true;
        rep.passed = true;
        rep.notes.push_back("vacuous: q - defect - eps <= 0");
        return rep;
    }
    rep.L = L_level(lp);
    Truncation M;
    const Integer level = rep.L - 1;
    if (level.fits_slong_p()) {
        M = level.get_si();
    }
    const double rmax = divisor_radius(curve, *std::max_element(grid.begin(), grid.end()));
    std::vector<PulledBackDivisor> divisors;
    for (const auto &D : polys) {
        divisors.emplace_back(curve, D, rmax, opt.quadrature);
        const auto &s = divisors.back().sample();
        rep.zero_counts_certified = rep.zero_counts_certified && s.certified;
        if (M && divisors.back().max_multiplicity() > *M) {
            rep.truncation_insensitive = false;
        }
    }
    const double coef = rep.coefficient.to_double();
    const double eps = to_double(opt.eps);
    rep.passed = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid[i];
        const RadiusValue T = characteristic_T(curve, r, opt.quadrature);
        double sum = 0;
        for (std::size_t j = 0; j < polys.size(); ++j) {
            sum += divisors[j].counting(r, M) / static_cast<double>(F.degrees()[j]);
        }
        rep.r.push_back(r);
        rep.T.push_back(T.value);
        rep.counting_sum.push_back(sum);
        rep.slack.push_back(sum - coef * T.value);
        rep.allowance.push_back(1 + 0.1 * eps * T.value);
        if (i >= grid.size() / 2 && rep.slack.back() < -rep.allowance.back()) {
            rep.passed = false;
        }
    }
    return rep;
}

RatioCheck check_max_ratio(const Variety &V, const HypersurfaceFamily &F, const CurveSpec &curve,
                           std::size_t samples, std::uint64_t seed)
{
    FamilyGeometry g(V, F);
    if (!g.empty_intersection(g.full_mask())) {
        throw precondition_error("the hypersurfaces have a common zero on V");
    }
    if (!curve.lies_in(V)) {
        throw input_error("curve not in V");
    }
    std::vector<ExpPoly> pulled;
    RatioCheck rc;
    const int d = F.lcm_degree();
    for (std::size_t i = 0; i < F.polys().size(); ++i) {
        const Poly D = F.normalized(i);
        pulled.push_back(curve.pullback(D));
        double l1 = 0;
        for (const auto &[m, c] : D.terms()) {
            l1 += std::abs(c.get_d());
        }
        rc.beta_bound = std::max(rc.beta_bound, l1);
    }
    std::mt19937_64 rng(seed);
    double lo = 0.1;
    double hi = 10;
    const Domain &dom = curve.domain();
    if (dom.kind == domain_kind::disc) {
        lo = dom.R * 1e-3;
        hi = dom.R * 0.999;
    } else if (dom.kind == domain_kind::annulus && std::isfinite(dom.R)) {
        lo = std::max(lo, 1 / dom.R * 1.001);
        hi = std::min(hi, dom.R * 0.999);
    }
    std::uniform_real_distribution<double> logr(std::log(lo), std::log(hi));
    std::uniform_real_distribution<double> theta(0, two_pi);
    rc.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        const Complex z = std::polar(std::exp(logr(rng)), theta(rng));
        const double ln = log_norm(curve.components(), z);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto &p : pulled) {
            best = std::max(best, p.log_abs(z) - d * ln);
        }
        const double ratio = std::exp(best);
        rc.min_ratio = std::min(rc.min_ratio, ratio);
        rc.max_ratio = std::max(rc.max_ratio, ratio);
    }
    rc.samples = samples;
    rc.holds = rc.min_ratio > 0 && rc.max_ratio <= rc.beta_bound * (1 + 1e-12);
    return rc;
}

std::vector<double> log_grid(double a, double b, std::size_t points)
{
    if (!(a > 0) || !(b > a) || points < 2) {
        throw input_error("log grid needs 0 < a < b and at least two points");
    }
    std::vector<double> g;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        g.push_back(std::exp(std::log(a) + t * (std::log(b) - std::log(a))));
    }
    g.front() = a;
    g.back() = b;
    return g;
}

double log_slope(const std::vector<double> &r, const std::vector<double> &values, std::size_t from)
{
    if (r.size() != values.size() || r.size() < from + 2) {
        throw input_error("slope fit needs at least two points");
    }
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double sxy = 0;
    const auto n = static_cast<double>(r.size() - from);
    for (std::size_t i = from; i < r.size(); ++i) {
        const double x = std::log(r[i]);
        sx += x;
        sy += values[i];
        sxx += x * x;
        sxy += x * values[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace smtlab
