#include <smtlab/error.hpp>
#include <smtlab/groebner.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace smtlab
{

// ---------------------------------------------------------------- orders

TermOrder TermOrder::grevlex()
{
    return TermOrder{};
}

TermOrder TermOrder::lex()
{
    TermOrder o;
    o.m_kind = kind::lex;
    return o;
}

TermOrder TermOrder::weight(const std::vector<Rational> &w)
{
    TermOrder o;
    o.m_kind = kind::weight;
    Integer den = 1;
    for (const auto &x : w) {
        if (x < 0) {
            throw input_error("weight orders need non-negative weights");
        }
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    }
    const Integer limit = Integer(1) << 40;
    for (const auto &x : w) {
        Integer scaled = x.get_num() * (den / x.get_den());
        if (scaled > limit) {
            throw resource_error("weight vector entries too large after clearing denominators");
        }
        o.m_weight.push_back(scaled.get_si());
    }
    return o;
}

TermOrder TermOrder::elimination(std::vector<bool> eliminated)
{
    TermOrder o;
    o.m_kind = kind::elimination;
    o.m_eliminated = std::move(eliminated);
    return o;
}

namespace
{

// grevlex restricted to variables with mask[i] == want (all when mask empty).
int grevlex_compare(const Monomial &a, const Monomial &b, const std::vector<bool> *mask, bool want)
{
    const std::size_t n = a.nvars();
    long da = 0;
    long db = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask == nullptr || (*mask)[i] == want) {
            da += a[i];
            db += b[i];
        }
    }
    if (da != db) {
        return da > db ? 1 : -1;
    }
    for (std::size_t i = n; i-- > 0;) {
        if (mask != nullptr && (*mask)[i] != want) {
            continue;
        }
        if (a[i] != b[i]) {
            return a[i] < b[i] ? 1 : -1;
        }
    }
    return 0;
}

} // namespace

int TermOrder::compare(const Monomial &a, const Monomial &b) const
{
    switch (m_kind) {
        case kind::grevlex:
            return grevlex_compare(a, b, nullptr, true);
        case kind::lex:
            for (std::size_t i = 0; i < a.nvars(); ++i) {
                if (a[i] != b[i]) {
                    return a[i] > b[i] ? 1 : -1;
                }
            }
            return 0;
        case kind::weight: {
            if (m_weight.size() != a.nvars()) {
                throw input_error("weight vector length does not match ring");
            }
            long long wa = 0;
            long long wb = 0;
            for (std::size_t i = 0; i < a.nvars(); ++i) {
                wa += m_weight[i] * a[i];
                wb += m_weight[i] * b[i];
            }
            if (wa != wb) {
                return wa > wb ? 1 : -1;
            }
            return grevlex_compare(a, b, nullptr, true);
        }
        case kind::elimination: {
            if (m_eliminated.size() != a.nvars()) {
                throw input_error("elimination mask length does not match ring");
            }
            if (int c = grevlex_compare(a, b, &m_eliminated, true); c != 0) {
                return c;
            }
            return grevlex_compare(a, b, &m_eliminated, false);
        }
    }
    return 0;
}

std::string TermOrder::describe() const
{
    switch (m_kind) {
        case kind::grevlex:
            return "grevlex";
        case kind::lex:
            return "lex";
        case kind::weight: {
            std::string s = "weight(";
            for (std::size_t i = 0; i < m_weight.size(); ++i) {
                s += (i ? "," : "") + std::to_string(m_weight[i]);
            }
            return s + ")";
        }
        case kind::elimination: {
            std::string s = "elim(";
            for (bool b : m_eliminated) {
                s += b ? '1' : '0';
            }
            return s + ")";
        }
    }
    return "?";
}

// ---------------------------------------------------------------- ideal

Ideal::Ideal(std::size_t nvars, std::vector<Poly> generators) : Ideal(nvars, std::move(generators), {}) {}

Ideal::Ideal(std::size_t nvars, std::vector<Poly> generators, std::vector<int> grading)
    : m_nvars(nvars), m_grading(std::move(grading))
{
    if (m_grading.empty()) {
        m_grading.assign(nvars, 1);
    }
    if (m_grading.size() != nvars) {
        throw input_error("grading length does not match number of variables");
    }
    for (int g : m_grading) {
        if (g <= 0) {
            throw input_error("grading weights must be positive");
        }
    }
    for (auto &p : generators) {
        if (p.nvars() != nvars) {
            throw input_error("generator ring has " + std::to_string(p.nvars()) + " variables, ideal ring has "
                              + std::to_string(nvars));
        }
        if (p.is_zero()) {
            continue;
        }
        if (!p.is_homogeneous(m_grading)) {
            throw input_error("non-homogeneous generator: " + p.to_string());
        }
        m_gens.push_back(std::move(p));
    }
}

bool Ideal::standard_grading() const noexcept
{
    return std::all_of(m_grading.begin(), m_grading.end(), [](int g) { return g == 1; });
}

Ideal Ideal::with(const std::vector<Poly> &extra) const
{
    auto gens = m_gens;
    gens.insert(gens.end(), extra.begin(), extra.end());
    return Ideal(m_nvars, std::move(gens), m_grading);
}

const GroebnerBasis &Ideal::basis(const TermOrder &order, const GroebnerBudget &budget) const
{
    std::lock_guard<std::mutex> lock(m_cache->mutex);
    for (const auto &e : m_cache->entries) {
        if (e->order == order) {
            return *e;
        }
    }
    m_cache->entries.push_back(std::make_unique<GroebnerBasis>(groebner_basis(*this, order, budget)));
    return *m_cache->entries.back();
}

bool Ideal::contains(const Poly &p) const
{
    if (p.is_zero()) {
        return true;
    }
    return normal_form(p, basis(TermOrder::grevlex())).is_zero();
}

// ---------------------------------------------------------------- buchberger

namespace
{

struct desc_cmp {
    const TermOrder *order;
    bool operator()(const Monomial &a, const Monomial &b) const
    {
        return order->compare(a, b) > 0;
    }
};

using work_poly = std::map<Monomial, Rational, desc_cmp>;
using term_vec = std::vector<std::pair<Monomial, Rational>>;

struct element {
    term_vec terms; // descending, monic

    const Monomial &lm() const
    {
        return terms.front().first;
    }
};

term_vec sorted_terms(const Poly &p, const TermOrder &order)
{
    term_vec v(p.terms().begin(), p.terms().end());
    std::sort(v.begin(), v.end(), [&](const auto &a, const auto &b) { return order.compare(a.first, b.first) > 0; });
    return v;
}

void make_monic(term_vec &v)
{
    if (v.empty()) {
        return;
    }
    const Rational inv = 1 / v.front().second;
    for (auto &t : v) {
        t.second *= inv;
    }
}

// Reduces p by the elements (skipping index `skip`). With full == false only
// the leading term is reduced.
term_vec reduce(work_poly p, const std::vector<element> &basis, bool full, std::size_t skip = SIZE_MAX)
{
    term_vec out;
    while (!p.empty()) {
        auto it = p.begin();
        const element *div = nullptr;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (i != skip && basis[i].lm().divides(it->first)) {
                div = &basis[i];
                break;
            }
        }
        if (div == nullptr) {
            if (!full) {
                out.assign(p.begin(), p.end());
                return out;
            }
            out.emplace_back(it->first, it->second);
            p.erase(it);
            continue;
        }
        const Monomial q = it->first / div->lm();
        const Rational coef = it->second;
        for (const auto &[m, c] : div->terms) {
            Monomial key = m * q;
            auto f = p.find(key);
            if (f == p.end()) {
                p.emplace(std::move(key), -coef * c);
            } else {
                f->second -= coef * c;
                if (f->second == 0) {
                    p.erase(f);
                }
            }
        }
    }
    return out;
}

work_poly to_work(const term_vec &v, const TermOrder &order)
{
    work_poly p(desc_cmp{&order});
    for (const auto &t : v) {
        p.emplace(t.first, t.second);
    }
    return p;
}

work_poly s_polynomial(const element &a, const element &b, const TermOrder &order)
{
    const Monomial l = a.lm().lcm(b.lm());
    const Monomial qa = l / a.lm();
    const Monomial qb = l / b.lm();
    work_poly p(desc_cmp{&order});
    auto add = [&](const Monomial &m, const Rational &c) {
        auto [it, inserted] = p.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                p.erase(it);
            }
        }
    };
    for (const auto &[m, c] : a.terms) {
        add(m * qa, c);
    }
    for (const auto &[m, c] : b.terms) {
        add(m * qb, -c);
    }
    return p;
}

Poly to_poly(const term_vec &v, std::size_t nvars)
{
    Poly p(nvars);
    for (const auto &[m, c] : v) {
        p.add_term(m, c);
    }
    return p;
}

} // namespace

GroebnerBasis groebner_basis(const Ideal &ideal, const TermOrder &order, const GroebnerBudget &budget)
{
    const std::size_t n = ideal.nvars();
    std::vector<element> basis;
    for (const auto &g : ideal.generators()) {
        if (g.total_degree() > budget.max_degree) {
            throw resource_error("generator degree " + std::to_string(g.total_degree()) + " exceeds budget "
                                 + std::to_string(budget.max_degree));
        }
        // Drop generators already reducible to zero; this keeps duplicated
        // input from inflating the pair set.
        term_vec r = reduce(to_work(sorted_terms(g, order), order), basis, false);
        if (r.empty()) {
            continue;
        }
        make_monic(r);
        basis.push_back(element{std::move(r)});
        if (basis.size() > budget.max_basis) {
            throw resource_error("Groebner basis size exceeds budget of " + std::to_string(budget.max_basis));
        }
    }

    std::set<std::pair<std::size_t, std::size_t>> pending;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            pending.emplace(i, j);
        }
    }

    while (!pending.empty()) {
        // Normal strategy: smallest lcm first.
        auto best = pending.begin();
        Monomial best_lcm = basis[best->first].lm().lcm(basis[best->second].lm());
        for (auto it = std::next(pending.begin()); it != pending.end(); ++it) {
            Monomial l = basis[it->first].lm().lcm(basis[it->second].lm());
            if (order.compare(l, best_lcm) < 0) {
                best = it;
                best_lcm = std::move(l);
            }
        }
        const auto [i, j] = *best;
        pending.erase(best);

        const element &a = basis[i];
        const element &b = basis[j];
        if (a.lm().coprime_with(b.lm())) {
            continue;
        }
        bool chain = false;
        for (std::size_t k = 0; k < basis.size() && !chain; ++k) {
            if (k == i || k == j || !basis[k].lm().divides(best_lcm)) {
                continue;
            }
            auto key = [](std::size_t x, std::size_t y) { return std::make_pair(std::min(x, y), std::max(x, y)); };
            if (pending.count(key(i, k)) == 0 && pending.count(key(j, k)) == 0) {
                chain = true;
            }
        }
        if (chain) {
            continue;
        }
        if (best_lcm.degree() > budget.max_degree) {
            throw resource_error("S-polynomial degree " + std::to_string(best_lcm.degree()) + " exceeds budget "
                                 + std::to_string(budget.max_degree));
        }
        term_vec h = reduce(s_polynomial(a, b, order), basis, false);
        if (h.empty()) {
            continue;
        }
        make_monic(h);
        basis.push_back(element{std::move(h)});
        if (basis.size() > budget.max_basis) {
            throw resource_error("Groebner basis size exceeds budget of " + std::to_string(budget.max_basis));
        }
        const std::size_t nj = basis.size() - 1;
        for (std::size_t k = 0; k < nj; ++k) {
            pending.emplace(k, nj);
        }
    }

    // Minimalize.
    std::vector<bool> keep(basis.size(), true);
    for (std::size_t a = 0; a < basis.size(); ++a) {
        for (std::size_t b = 0; b < basis.size() && keep[a]; ++b) {
            if (a == b || !keep[b]) {
                continue;
            }
            if (basis[b].lm().divides(basis[a].lm()) && (basis[b].lm() != basis[a].lm() || b < a)) {
                keep[a] = false;
            }
        }
    }
    std::vector<element> minimal;
    for (std::size_t a = 0; a < basis.size(); ++a) {
        if (keep[a]) {
            minimal.push_back(std::move(basis[a]));
        }
    }
    // Inter-reduce tails.
    for (std::size_t a = 0; a < minimal.size(); ++a) {
        term_vec r = reduce(to_work(minimal[a].terms, order), minimal, true, a);
        make_monic(r);
        minimal[a].terms = std::move(r);
    }
    std::sort(minimal.begin(), minimal.end(),
              [&](const element &x, const element &y) { return order.compare(x.lm(), y.lm()) > 0; });

    GroebnerBasis gb;
    gb.order = order;
    gb.nvars = n;
    for (const auto &e : minimal) {
        gb.leading.push_back(e.lm());
        gb.polys.push_back(to_poly(e.terms, n));
    }
    return gb;
}

Poly normal_form(const Poly &p, const GroebnerBasis &gb)
{
    std::vector<element> basis;
    basis.reserve(gb.polys.size());
    for (const auto &g : gb.polys) {
        basis.push_back(element{sorted_terms(g, gb.order)});
    }
    return to_poly(reduce(to_work(sorted_terms(p, gb.order), gb.order), basis, true), gb.nvars);
}

std::vector<Monomial> standard_monomials(const GroebnerBasis &gb, int u)
{
    std::vector<Monomial> out;
    for (auto &m : monomials_of_degree(gb.nvars, u)) {
        const bool divisible = std::any_of(gb.leading.begin(), gb.leading.end(),
                                           [&](const Monomial &l) { return l.divides(m); });
        if (!divisible) {
            out.push_back(std::move(m));
        }
    }
    return out;
}

Integer hilbert_function(const Ideal &ideal, int u)
{
    if (u <= 0) {
        throw input_error("Hilbert function degree must be positive, got " + std::to_string(u));
    }
    if (!ideal.standard_grading()) {
        throw input_error("Hilbert function requires the standard grading");
    }
    return static_cast<unsigned long>(standard_monomials(ideal.basis(TermOrder::grevlex()), u).size());
}

// ---------------------------------------------------------------- hilbert series

namespace
{

using upoly = std::vector<Integer>;

void trim(upoly &p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

upoly add_shifted(upoly a, const upoly &b, std::size_t shift)
{
    if (a.size() < b.size() + shift) {
        a.resize(b.size() + shift, 0);
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i + shift] += b[i];
    }
    trim(a);
    return a;
}

std::vector<Monomial> minimalize(std::vector<Monomial> gens)
{
    std::sort(gens.begin(), gens.end(), [](const Monomial &a, const Monomial &b) {
        if (a.degree() != b.degree()) {
            return a.degree() < b.degree();
        }
        return a < b;
    });
    std::vector<Monomial> out;
    for (auto &g : gens) {
        if (std::none_of(out.begin(), out.end(), [&](const Monomial &o) { return o.divides(g); })) {
            out.push_back(std::move(g));
        }
    }
    return out;
}

int support_size(const Monomial &m)
{
    int s = 0;
    for (int e : m.exponents()) {
        s += e > 0 ? 1 : 0;
    }
    return s;
}

upoly series_numerator(std::vector<Monomial> gens, std::size_t nvars)
{
    gens = minimalize(std::move(gens));
    if (gens.empty()) {
        return upoly{1};
    }
    if (gens.front().degree() == 0) {
        return upoly{};
    }
    if (std::all_of(gens.begin(), gens.end(), [](const Monomial &m) { return support_size(m) == 1; })) {
        upoly r{1};
        for (const auto &m : gens) {
            upoly factor(static_cast<std::size_t>(m.degree()) + 1, 0);
            factor[0] = 1;
            factor.back() = -1;
            upoly prod(r.size() + factor.size() - 1, 0);
            for (std::size_t i = 0; i < r.size(); ++i) {
                for (std::size_t j = 0; j < factor.size(); ++j) {
                    prod[i + j] += r[i] * factor[j];
                }
            }
            r = std::move(prod);
        }
        trim(r);
        return r;
    }
    // Pivot on the variable occurring in the most non-pure generators:
    // N(I) = N(I + <x>) + t N(I : x).
    std::vector<int> count(nvars, 0);
    for (const auto &m : gens) {
        if (support_size(m) > 1) {
            for (std::size_t i = 0; i < nvars; ++i) {
                count[i] += m[i] > 0 ? 1 : 0;
            }
        }
    }
    const std::size_t pivot = static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());
    const Monomial x = Monomial::variable(nvars, pivot);

    std::vector<Monomial> sum_gens;
    std::vector<Monomial> colon_gens;
    for (const auto &m : gens) {
        if (m[pivot] == 0) {
            sum_gens.push_back(m);
        }
        colon_gens.push_back(m[pivot] > 0 ? m / x : m);
    }
    sum_gens.push_back(x);
    return add_shifted(series_numerator(std::move(sum_gens), nvars), series_numerator(std::move(colon_gens), nvars),
                       1);
}

} // namespace

std::vector<Integer> hilbert_series_numerator(const std::vector<Monomial> &generators, std::size_t nvars)
{
    return series_numerator(generators, nvars);
}

Integer hilbert_polynomial_value(const DimensionDegree &dd, long u)
{
    if (dd.dim < 0) {
        return 0;
    }
    // C(x + dim, dim) as a polynomial in x, valid for negative x as well.
    auto poly_binom = [&](long x) {
        Integer num = 1;
        for (int j = 1; j <= dd.dim; ++j) {
            num *= Integer(x + j);
        }
        return Integer(num / factorial(static_cast<unsigned long>(dd.dim)));
    };
    Integer total = 0;
    for (std::size_t i = 0; i < dd.h_vector.size(); ++i) {
        total += dd.h_vector[i] * poly_binom(u - static_cast<long>(i));
    }
    return total;
}

DimensionDegree dimension_and_degree(const Ideal &ideal, const GroebnerBudget &budget)
{
    if (!ideal.standard_grading()) {
        throw input_error("dimension_and_degree requires the standard grading");
    }
    const auto &gb = ideal.basis(TermOrder::grevlex(), budget);
    const std::size_t n = ideal.nvars();
    upoly p = series_numerator(gb.leading, n);

    DimensionDegree dd;
    if (p.empty()) {
        dd.dim = -1;
        return dd;
    }
    // Strip factors of (1 - t).
    int stripped = 0;
    while (static_cast<std::size_t>(stripped) < n) {
        Integer at_one = std::accumulate(p.begin(), p.end(), Integer(0));
        if (at_one != 0) {
            break;
        }
        // Synthetic division by (1 - t): q_i = sum_{j<=i} p_j.
        upoly q(p.size() - 1, 0);
        Integer run = 0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            run += p[i];
            q[i] = run;
        }
        trim(q);
        p = std::move(q);
        ++stripped;
    }
    dd.dim = static_cast<int>(n) - stripped - 1;
    const int hdeg = static_cast<int>(p.size()) - 1;

    auto count = [&](int u) { return Integer(static_cast<unsigned long>(standard_monomials(gb, u).size())); };

    if (dd.dim < 0) {
        // Quotient vanishes beyond the numerator degree.
        for (int u = hdeg + 1; u <= hdeg + 2; ++u) {
            if (count(u) != 0) {
                throw consistency_error("Hilbert function does not vanish past the series numerator degree");
            }
        }
        return dd;
    }
    dd.h_vector = p;
    dd.degree = std::accumulate(p.begin(), p.end(), Integer(0));
    if (*dd.degree <= 0) {
        throw consistency_error("non-positive degree from Hilbert series");
    }
    dd.regularity_start = std::max(1, hdeg - dd.dim);

    // Independent route: interpolate sampled values past the regularity
    // index via forward differences and verify on two further degrees.
    const int u0 = dd.regularity_start;
    const int samples = dd.dim + 2;
    std::vector<Integer> diffs;
    for (int j = 0; j < samples; ++j) {
        diffs.push_back(count(u0 + j));
    }
    std::vector<Integer> leading_diffs; // Δ^j s_0
    {
        std::vector<Integer> row = diffs;
        for (int j = 0; j < samples; ++j) {
            leading_diffs.push_back(row.front());
            for (std::size_t t = 0; t + 1 < row.size(); ++t) {
                row[t] = row[t + 1] - row[t];
            }
            row.pop_back();
        }
    }
    if (leading_diffs[static_cast<std::size_t>(dd.dim)] != *dd.degree || leading_diffs.back() != 0) {
        throw consistency_error("interpolated Hilbert polynomial disagrees with the Hilbert series");
    }
    for (int extra = samples; extra < samples + 2; ++extra) {
        Integer predicted = 0;
        for (int j = 0; j < samples; ++j) {
            predicted += binomial(extra, j) * leading_diffs[static_cast<std::size_t>(j)];
        }
        if (predicted != count(u0 + extra) || predicted != hilbert_polynomial_value(dd, u0 + extra)) {
            throw consistency_error("Hilbert polynomial fails verification at degree " + std::to_string(u0 + extra));
        }
    }
    return dd;
}

// ---------------------------------------------------------------- elimination

Ideal eliminate(const Ideal &ideal, const std::vector<std::size_t> &keep, const GroebnerBudget &budget)
{
    const std::size_t n = ideal.nvars();
    if (keep.empty()) {
        throw input_error("eliminate needs at least one kept variable");
    }
    std::vector<bool> kept(n, false);
    for (auto v : keep) {
        if (v >= n) {
            throw input_error("kept variable index out of range");
        }
        if (kept[v]) {
            throw input_error("kept variable listed twice");
        }
        kept[v] = true;
    }
    std::vector<std::size_t> map(n, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        map[keep[i]] = i;
    }
    std::vector<int> grading;
    for (auto v : keep) {
        grading.push_back(ideal.grading()[v]);
    }
    if (std::adjacent_find(grading.begin(), grading.end(), std::not_equal_to<>()) == grading.end()) {
        grading.assign(grading.size(), 1);
    }

    std::vector<bool> eliminated(n);
    for (std::size_t i = 0; i < n; ++i) {
        eliminated[i] = !kept[i];
    }
    const bool nothing = std::none_of(eliminated.begin(), eliminated.end(), [](bool b) { return b; });
    const auto &gb = ideal.basis(nothing ? TermOrder::grevlex() : TermOrder::elimination(eliminated), budget);

    std::vector<Poly> gens;
    for (const auto &g : gb.polys) {
        bool only_kept = true;
        for (const auto &[m, c] : g.terms()) {
            for (std::size_t i = 0; i < n && only_kept; ++i) {
                if (m[i] > 0 && !kept[i]) {
                    only_kept = false;
                }
            }
        }
        if (!only_kept) {
            continue;
        }
        // Map into the kept ring (variables outside `keep` do not occur).
        Poly r(keep.size());
        for (const auto &[m, c] : g.terms()) {
            std::vector<int> e(keep.size(), 0);
            for (std::size_t i = 0; i < n; ++i) {
                if (kept[i]) {
                    e[map[i]] = m[i];
                }
            }
            r.add_term(Monomial(std::move(e)), c);
        }
        gens.push_back(std::move(r));
    }
    return Ideal(keep.size(), std::move(gens), grading);
}

} // namespace smtlab
