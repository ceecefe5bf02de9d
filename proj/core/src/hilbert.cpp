#include <smtlab/error.hpp>
#include <smtlab/hilbert.hpp>
#include <smtlab/nevanlinna.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace smtlab
{

WeightVector::WeightVector(std::vector<Rational> c) : m_c(std::move(c))
{
    for (auto &x : m_c) {
        x.canonicalize();
        if (sgn(x) < 0) {
            throw input_error("weights must be non-negative");
        }
    }
}

WeightVector WeightVector::from_doubles(const std::vector<double> &c)
{
    const double scale = 1 << 20;
    std::vector<Rational> out;
    out.reserve(c.size());
    for (double x : c) {
        if (!std::isfinite(x) || x < 0) {
            throw input_error("weights must be finite and non-negative");
        }
        out.push_back(make_rational(std::lround(x * scale), 1L << 20));
    }
    return WeightVector(std::move(out));
}

WeightVector WeightVector::parse(const std::string &text)
{
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) {
            throw input_error("empty weight entry in '" + text + "'");
        }
        out.push_back(parse_rational(item.substr(b, e - b + 1)));
    }
    if (out.empty()) {
        throw input_error("empty weight vector");
    }
    return WeightVector(std::move(out));
}

Rational WeightVector::sum() const
{
    Rational s = 0;
    for (const auto &x : m_c) {
        s += x;
    }
    return s;
}

Rational WeightVector::max() const
{
    Rational m = 0;
    for (const auto &x : m_c) {
        if (x > m) {
            m = x;
        }
    }
    return m;
}

bool WeightVector::is_zero() const
{
    return std::all_of(m_c.begin(), m_c.end(), [](const Rational &x) { return sgn(x) == 0; });
}

Variety EmbeddedImage::image() const
{
    return Variety(ideal);
}

EmbeddedImage embed_family(const Variety &V, const HypersurfaceFamily &F, const GroebnerBudget &budget)
{
    const std::size_t nx = V.nvars();
    const std::size_t q = F.size();
    if (q == 0) {
        throw input_error("empty family");
    }
    std::vector<Poly> normalized;
    normalized.reserve(q);
    for (std::size_t j = 0; j < q; ++j) {
        normalized.push_back(F.normalized(j));
    }
    if (dimension_and_degree(V.ideal().with(normalized), budget).dim >= 0) {
        throw input_error("base locus nonempty");
    }

    const int d = F.lcm_degree();
    const std::size_t nt = nx + q;
    std::vector<std::size_t> xmap(nx);
    std::iota(xmap.begin(), xmap.end(), 0);
    std::vector<Poly> gens;
    for (const auto &g : V.ideal().generators()) {
        gens.push_back(g.remap(nt, xmap));
    }
    for (std::size_t j = 0; j < q; ++j) {
        gens.push_back(Poly::variable(nt, nx + j) - normalized[j].remap(nt, xmap));
    }
    std::vector<int> grading(nt, 1);
    std::fill(grading.begin() + static_cast<long>(nx), grading.end(), d);
    const Ideal graph(nt, std::move(gens), std::move(grading));

    std::vector<std::size_t> keep(q);
    std::iota(keep.begin(), keep.end(), nx);
    Ideal IY = eliminate(graph, keep, budget);

    const DimensionDegree dd = dimension_and_degree(IY, budget);
    const int k = V.dim();
    Integer bound = V.degree();
    for (int i = 0; i < k; ++i) {
        bound *= d;
    }
    if (dd.dim != k || !dd.degree) {
        throw consistency_error("image dimension " + std::to_string(dd.dim) + " differs from dim V = " +
                                std::to_string(k));
    }
    if (*dd.degree > bound) {
        throw consistency_error("deg Y = " + dd.degree->get_str() + " exceeds d^k deg V = " + bound.get_str());
    }
    return EmbeddedImage{V, F, d, std::move(IY), k, *dd.degree, bound};
}

namespace
{

void check_weights(const Ideal &I, const WeightVector &c)
{
    if (c.size() != I.nvars()) {
        throw input_error("weight vector has " + std::to_string(c.size()) + " entries, expected " +
                          std::to_string(I.nvars()));
    }
}

Rational weight_of(const Monomial &m, const WeightVector &c)
{
    Rational s = 0;
    for (std::size_t i = 0; i < m.nvars(); ++i) {
        if (m[i] != 0) {
            s += c[i] * m[i];
        }
    }
    return s;
}

TermOrder complementary_order(const WeightVector &c)
{
    const Rational top = c.max();
    std::vector<Rational> w;
    w.reserve(c.size());
    for (const auto &x : c.values()) {
        w.push_back(top - x);
    }
    return TermOrder::weight(w);
}

struct ideal_data {
    int k = 0;
    Integer delta;
    bool zero = false;
};

ideal_data describe(const Ideal &I)
{
    const DimensionDegree dd = dimension_and_degree(I);
    if (dd.dim < 0 || !dd.degree) {
        throw input_error("ideal defines the empty set");
    }
    return {dd.dim, *dd.degree, I.generators().empty()};
}

ChowSample sample_at(const Ideal &I, const WeightVector &c, int u, const ideal_data &info)
{
    ChowSample s;
    s.u = u;
    s.S = hilbert_weight(I, u, c);
    s.H = hilbert_function(I, u);
    s.value = Rational(Integer(info.k + 1) * info.delta) * s.S / (Rational(s.H) * u);
    s.value.canonicalize();
    return s;
}

Rational weight_value(const Ideal &I, const WeightVector &c, const ideal_data &info, const EfOptions &opt,
                      int fallback_u, bool &approximate)
{
    if (info.zero) {
        approximate = false;
        return c.sum();
    }
    approximate = true;
    std::vector<int> us;
    for (int u : opt.estimate_u) {
        if (u > info.delta && (us.empty() || u > us.back())) {
            us.push_back(u);
        }
    }
    if (us.empty()) {
        us.push_back(fallback_u);
    }
    return chow_weight_estimate(I, c, us).estimate;
}

} // namespace

std::vector<Monomial> hilbert_weight_basis(const Ideal &I, int u, const WeightVector &c)
{
    if (u < 1) {
        throw input_error("u must be positive");
    }
    check_weights(I, c);
    return standard_monomials(I.basis(complementary_order(c)), u);
}

Rational hilbert_weight(const Ideal &I, int u, const WeightVector &c)
{
    if (u < 1) {
        throw input_error("u must be positive");
    }
    check_weights(I, c);
    if (c.is_zero()) {
        return 0;
    }
    Rational s = 0;
    for (const auto &m : hilbert_weight_basis(I, u, c)) {
        s += weight_of(m, c);
    }
    s.canonicalize();
    return s;
}

ChowEstimate chow_weight_estimate(const Ideal &I, const WeightVector &c, const std::vector<int> &u_list)
{
    check_weights(I, c);
    if (u_list.empty()) {
        throw input_error("empty u list");
    }
    const ideal_data info = describe(I);
    for (std::size_t i = 0; i < u_list.size(); ++i) {
        if (u_list[i] <= info.delta) {
            throw input_error("u = " + std::to_string(u_list[i]) + " must exceed deg = " + info.delta.get_str());
        }
        if (i > 0 && u_list[i] <= u_list[i - 1]) {
            throw input_error("u list must be increasing");
        }
    }
    ChowEstimate out;
    out.k = info.k;
    out.delta = info.delta;
    out.exact = info.zero;
    for (int u : u_list) {
        out.samples.push_back(sample_at(I, c, u, info));
    }
    out.estimate = out.samples.back().value;
    if (out.exact && out.estimate != c.sum()) {
        throw consistency_error("zero-ideal weight " + out.estimate.get_str() + " differs from sum c");
    }
    return out;
}

EfReport verify_ef_inequality(const Ideal &I, int u, const WeightVector &c, const EfOptions &opt)
{
    check_weights(I, c);
    const ideal_data info = describe(I);
    if (u <= info.delta) {
        throw input_error("u = " + std::to_string(u) + " must exceed deg = " + info.delta.get_str());
    }
    EfReport r;
    const ChowSample s = sample_at(I, c, u, info);
    r.u = u;
    r.S = s.S;
    r.H = s.H;
    r.lhs = r.S / (Rational(r.H) * u);
    r.e = weight_value(I, c, info, opt, u, r.approximate);
    const Rational kd = Rational(Integer(info.k + 1) * info.delta);
    r.rhs = r.e / kd - Rational(Integer(2 * info.k + 1) * info.delta) * c.max() / u;
    r.margin = r.lhs - r.rhs;
    r.lhs.canonicalize();
    r.rhs.canonicalize();
    r.margin.canonicalize();
    r.passed = !r.approximate && sgn(r.margin) >= 0;
    return r;
}

namespace
{

Poly coordinate(std::size_t nvars, int index)
{
    return Poly::variable(nvars, static_cast<std::size_t>(index - 1));
}

void check_indices(std::size_t nvars, const WeightVector &c, const std::vector<int> &indices)
{
    if (c.size() != nvars) {
        throw input_error("weight vector has " + std::to_string(c.size()) + " entries, expected " +
                          std::to_string(nvars));
    }
    if (indices.empty()) {
        throw input_error("empty index tuple");
    }
    std::vector<int> seen;
    for (int i : indices) {
        if (i < 1 || static_cast<std::size_t>(i) > nvars) {
            throw input_error("index " + std::to_string(i) + " out of range");
        }
        if (std::find(seen.begin(), seen.end(), i) != seen.end()) {
            throw input_error("repeated index " + std::to_string(i));
        }
        seen.push_back(i);
    }
    const Rational &last = c[static_cast<std::size_t>(indices.back() - 1)];
    for (int i : indices) {
        if (c[static_cast<std::size_t>(i - 1)] < last) {
            throw precondition_error("hypothesis (1): c_" + std::to_string(indices.back()) +
                                     " is not the minimum of the listed weights");
        }
    }
}

ChowBoundReport finish_report(const Variety &Y, const WeightVector &c, const std::vector<int> &indices,
                              const Rational &Delta, const EfOptions &opt)
{
    ChowBoundReport r;
    r.indices = indices;
    r.delta_constant = Delta;
    r.deg_Y = Y.degree();
    const ideal_data info{Y.dim(), Y.degree(), Y.ideal().generators().empty()};
    r.e = weight_value(Y.ideal(), c, info, opt, static_cast<int>(Y.degree().get_si()) + 1, r.approximate);
    Rational sum = 0;
    for (int i : indices) {
        sum += c[static_cast<std::size_t>(i - 1)];
    }
    r.lower = Rational(Y.degree()) / Delta * sum;
    r.margin = r.e - r.lower;
    r.lower.canonicalize();
    r.margin.canonicalize();
    r.passed = !r.approximate && sgn(r.margin) >= 0;
    return r;
}

} // namespace

ChowBoundReport verify_chow_lower_bound(const Variety &Y, const WeightVector &c, const std::vector<int> &indices,
                                        const EfOptions &opt)
{
    const std::size_t nv = Y.nvars();
    check_indices(nv, c, indices);
    std::vector<Poly> head;
    for (std::size_t j = 0; j + 1 < indices.size(); ++j) {
        head.push_back(coordinate(nv, indices[j]));
    }
    if (!head.empty() && dimension_and_degree(Y.ideal().with(head)).dim < 0) {
        throw precondition_error("hypothesis (2): Y does not meet the first l-1 hyperplanes");
    }
    std::vector<Poly> planes;
    for (int i : indices) {
        planes.push_back(coordinate(nv, i));
        if (Y.ideal().contains(planes.back())) {
            throw precondition_error("hypothesis (3): Y lies in the hyperplane y" + std::to_string(i - 1) + " = 0");
        }
    }
    const FamilyGeometry G(Y, HypersurfaceFamily(Y, planes));
    return finish_report(Y, c, indices, G.distributive_constant().value, opt);
}

ChowBoundReport verify_chow_lower_bound(const EmbeddedImage &E, const WeightVector &c,
                                        const std::vector<int> &indices, const EfOptions &opt)
{
    const Variety Y = E.image();
    check_indices(Y.nvars(), c, indices);
    const Variety &V = E.source;
    std::vector<Poly> pulled;
    for (int i : indices) {
        pulled.push_back(E.family.normalized(static_cast<std::size_t>(i - 1)));
    }
    const std::vector<Poly> head(pulled.begin(), pulled.end() - 1);
    if (!head.empty() && dimension_and_degree(V.ideal().with(head)).dim < 0) {
        throw precondition_error("hypothesis (2): Y does not meet the first l-1 hyperplanes");
    }
    for (std::size_t j = 0; j < pulled.size(); ++j) {
        if (V.ideal().contains(pulled[j])) {
            throw precondition_error("hypothesis (3): Y lies in the hyperplane y" + std::to_string(indices[j] - 1) +
                                     " = 0");
        }
    }
    const FamilyGeometry GV(V, HypersurfaceFamily(V, pulled));
    const ChowBoundReport r = verify_chow_lower_bound(Y, c, indices, opt);
    if (GV.distributive_constant().value != r.delta_constant) {
        throw consistency_error("distributive constants on V and Y disagree");
    }
    return r;
}

CurveWeights weights_from_curve_point(const CurveSpec &curve, const HypersurfaceFamily &F, Complex z)
{
    const auto &f = curve.components();
    if (!F.polys().empty() && F.polys().front().nvars() != f.size()) {
        throw input_error("family and curve live in different projective spaces");
    }
    const double lnorm = log_norm(f, z);
    std::vector<Complex> g;
    g.reserve(f.size());
    for (const auto &fi : f) {
        const ScaledValue s = fi.evaluate_scaled(z);
        g.push_back(s.mantissa * std::exp(s.log_scale - lnorm));
    }
    CurveWeights out;
    const int d = F.lcm_degree();
    for (std::size_t j = 0; j < F.size(); ++j) {
        const double a = std::abs(F.polys()[j].evaluate<Complex>(std::span<const Complex>(g)));
        if (!(a > 0) || !std::isfinite(std::log(a))) {
            throw input_error("point on hypersurface pullback");
        }
        double cj = -static_cast<double>(d / F.degrees()[j]) * std::log(a);
        if (cj < 0) {
            std::ostringstream msg;
            msg << "c_" << j + 1 << " = " << cj << " clamped to 0";
            out.diagnostics.push_back(msg.str());
            cj = 0;
        }
        out.c.push_back(cj);
    }
    return out;
}

} // namespace smtlab
