#include <smtlab/bounds.hpp>
#include <smtlab/error.hpp>
#include <smtlab/family.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

namespace smtlab
{

Variety::Variety(Ideal ideal, bool declared_smooth, const GroebnerBudget &budget)
    : m_ideal(std::move(ideal)), m_smooth(declared_smooth)
{
    if (m_ideal.nvars() < 2) {
        throw input_error("a projective variety needs at least two homogeneous coordinates");
    }
    auto dd = dimension_and_degree(m_ideal, budget);
    if (dd.dim < 1) {
        throw input_error("variety must have dimension at least 1, got " + std::to_string(dd.dim));
    }
    m_dim = dd.dim;
    m_degree = *dd.degree;
}

Variety Variety::projective_space(std::size_t n)
{
    return Variety(Ideal::zero(n + 1), true);
}

HypersurfaceFamily::HypersurfaceFamily(const Variety &V, std::vector<Poly> defining) : m_polys(std::move(defining))
{
    if (m_polys.empty()) {
        throw input_error("hypersurface family is empty");
    }
    for (std::size_t i = 0; i < m_polys.size(); ++i) {
        const auto &p = m_polys[i];
        if (p.nvars() != V.nvars()) {
            throw input_error("hypersurface " + std::to_string(i + 1) + " lives in the wrong ring");
        }
        auto deg = p.homogeneous_degree();
        if (p.is_zero() || !deg) {
            throw input_error("hypersurface " + std::to_string(i + 1) + " is zero or not homogeneous");
        }
        if (*deg == 0) {
            throw input_error("hypersurface " + std::to_string(i + 1) + " is a nonzero constant");
        }
        if (V.ideal().contains(p)) {
            throw input_error("hypersurface " + std::to_string(i + 1) + " contains the variety");
        }
        m_degrees.push_back(*deg);
        m_lcm = std::lcm(m_lcm, *deg);
    }
}

Poly HypersurfaceFamily::normalized(std::size_t i) const
{
    return m_polys.at(i).pow(static_cast<unsigned>(m_lcm / m_degrees.at(i)));
}

std::vector<int> mask_indices(Mask m)
{
    std::vector<int> out;
    for (int i = 0; m != 0; ++i, m >>= 1) {
        if (m & 1u) {
            out.push_back(i);
        }
    }
    return out;
}

std::string mask_to_string(Mask m)
{
    std::string s = "{";
    bool first = true;
    for (int i : mask_indices(m)) {
        s += (first ? "" : ",") + std::to_string(i + 1);
        first = false;
    }
    return s + "}";
}

bool lex_less(Mask a, Mask b) noexcept
{
    // Walk both sorted index lists from the smallest index.
    while (a != 0 && b != 0) {
        const int ia = __builtin_ctz(a);
        const int ib = __builtin_ctz(b);
        if (ia != ib) {
            return ia < ib;
        }
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

const char *to_string(empty_convention c) noexcept
{
    return c == empty_convention::skip_empty ? "skip-empty" : "literal";
}

empty_convention parse_convention(const std::string &s)
{
    if (s == "skip-empty") {
        return empty_convention::skip_empty;
    }
    if (s == "literal") {
        return empty_convention::literal;
    }
    throw input_error("unknown convention '" + s + "' (expected skip-empty or literal)");
}

// ---------------------------------------------------------------- table

FamilyGeometry::FamilyGeometry(Variety V, HypersurfaceFamily F, FamilyOptions options)
    : m_variety(std::move(V)), m_family(std::move(F)), m_options(options)
{
    if (q() > m_options.max_q || q() > 20) {
        throw resource_error("subset enumeration supports at most " + std::to_string(std::min<std::size_t>(
                                                                         m_options.max_q, 20))
                             + " hypersurfaces, got " + std::to_string(q()));
    }
    fill_table();
}

int FamilyGeometry::compute_codim(Mask gamma) const
{
    std::vector<Poly> gens;
    for (int i : mask_indices(gamma)) {
        gens.push_back(m_family.polys()[static_cast<std::size_t>(i)]);
    }
    auto dd = dimension_and_degree(m_variety.ideal().with(gens), m_options.budget);
    return k() - dd.dim;
}

void FamilyGeometry::fill_table()
{
    const std::size_t n = q();
    m_codim.assign(std::size_t{1} << n, -1);
    m_codim[0] = 0;
    const int empty = k() + 1;

    unsigned threads = m_options.threads != 0 ? m_options.threads : std::max(1u, std::thread::hardware_concurrency());

    for (int level = 1; level <= static_cast<int>(n); ++level) {
        std::vector<Mask> todo;
        for (Mask m = 1; m <= full_mask(); ++m) {
            if (popcount(m) != level) {
                continue;
            }
            bool sub_empty = false;
            for (Mask rest = m; rest != 0 && !sub_empty; rest &= rest - 1) {
                const Mask sub = m & ~(rest & -rest);
                if (sub != 0 && m_codim[sub] == empty) {
                    sub_empty = true;
                }
            }
            if (sub_empty) {
                m_codim[m] = static_cast<std::int8_t>(empty);
            } else {
                todo.push_back(m);
            }
            if (m == full_mask()) {
                break;
            }
        }
        m_gb_calls += todo.size();
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&]() {
            for (std::size_t i = next++; i < todo.size(); i = next++) {
                try {
                    m_codim[todo[i]] = static_cast<std::int8_t>(compute_codim(todo[i]));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        };
        const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, todo.size()));
        if (used <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < used; ++t) {
                pool.emplace_back(worker);
            }
            for (auto &t : pool) {
                t.join();
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
}

int FamilyGeometry::codim(Mask gamma) const
{
    if (gamma == 0) {
        throw input_error("codimension needs a nonempty index subset");
    }
    if ((gamma & ~full_mask()) != 0) {
        throw input_error("index subset refers to hypersurfaces outside the family");
    }
    return m_codim[gamma];
}

// ---------------------------------------------------------------- position

PositionCheck FamilyGeometry::subgeneral_position(int N) const
{
    PositionCheck r;
    if (N < k()) {
        throw input_error("subgeneral position needs N >= k");
    }
    if (static_cast<std::size_t>(N) >= q()) {
        r.holds = true;
        r.vacuous = true;
        return r;
    }
    r.holds = true;
    for (Mask m = 1; m <= full_mask(); ++m) {
        if (popcount(m) == N + 1 && !empty_intersection(m)) {
            if (!r.witness || lex_less(m, *r.witness)) {
                r.witness = m;
            }
            r.holds = false;
        }
        if (m == full_mask()) {
            break;
        }
    }
    return r;
}

std::optional<int> FamilyGeometry::position_level() const
{
    for (int N = k(); static_cast<std::size_t>(N) < q(); ++N) {
        if (subgeneral_position(N).holds) {
            return N;
        }
    }
    return std::nullopt;
}

BezoutCheck FamilyGeometry::weak_bezout() const
{
    std::vector<Mask> divisors;
    for (Mask m = 1; m <= full_mask(); ++m) {
        if (codim(m) == 1) {
            divisors.push_back(m);
        }
        if (m == full_mask()) {
            break;
        }
    }
    const std::uint64_t total = static_cast<std::uint64_t>(divisors.size()) * (divisors.size() + 1) / 2;
    if (total > m_options.max_pairs) {
        throw resource_error("weak Bézout check needs " + std::to_string(total) + " subset pairs, budget is "
                             + std::to_string(m_options.max_pairs));
    }
    BezoutCheck r;
    for (std::size_t a = 0; a < divisors.size(); ++a) {
        for (std::size_t b = a; b < divisors.size(); ++b) {
            ++r.pairs_checked;
            if (codim(divisors[a] | divisors[b]) > 2 && r.holds) {
                r.holds = false;
                r.witness = std::make_pair(divisors[a], divisors[b]);
            }
        }
    }
    return r;
}

BezoutCheck FamilyGeometry::bezout() const
{
    const std::uint64_t subsets = full_mask();
    const std::uint64_t total = subsets * (subsets - 1) / 2;
    if (total > m_options.max_pairs) {
        throw resource_error("Bézout check needs " + std::to_string(total) + " subset pairs, budget is "
                             + std::to_string(m_options.max_pairs));
    }
    BezoutCheck r;
    for (Mask a = 1; a <= full_mask(); ++a) {
        for (Mask b = a + 1; b <= full_mask(); ++b) {
            ++r.pairs_checked;
            if ((a & b) == a || (a & b) == b) {
                continue; // nested pairs hold by monotonicity
            }
            if (codim(a | b) > codim(a) + codim(b) && r.holds) {
                r.holds = false;
                r.witness = std::make_pair(a, b);
            }
            if (b == full_mask()) {
                break;
            }
        }
        if (a == full_mask()) {
            break;
        }
    }
    return r;
}

// ---------------------------------------------------------------- Δ

bool FamilyGeometry::ratio_candidate(Mask gamma, empty_convention c) const
{
    return c == empty_convention::literal || !empty_intersection(gamma);
}

const std::vector<FamilyGeometry::best_entry> &FamilyGeometry::best_table(empty_convention c) const
{
    auto &slot = m_best[c == empty_convention::literal ? 1 : 0];
    if (slot) {
        return *slot;
    }
    auto table = std::make_unique<std::vector<best_entry>>(std::size_t{1} << q());
    auto &best = *table;
    auto better = [](const best_entry &x, const best_entry &y) {
        // x strictly preferred to y.
        if (y.witness == 0) {
            return x.witness != 0;
        }
        if (x.witness == 0) {
            return false;
        }
        const long lhs = static_cast<long>(x.num) * y.den;
        const long rhs = static_cast<long>(y.num) * x.den;
        if (lhs != rhs) {
            return lhs > rhs;
        }
        if (x.num != y.num) {
            return x.num < y.num;
        }
        return lex_less(x.witness, y.witness);
    };
    for (Mask m = 1; m <= full_mask(); ++m) {
        best_entry e;
        if (ratio_candidate(m, c)) {
            const int cm = codim(m);
            if (cm == 0) {
                throw precondition_error("intersection " + mask_to_string(m)
                                         + " has codimension 0 on V (is the variety reducible?)");
            }
            e = best_entry{popcount(m), cm, m};
        }
        for (Mask rest = m; rest != 0; rest &= rest - 1) {
            const Mask sub = m & ~(rest & -rest);
            if (sub != 0 && better(best[sub], e)) {
                e = best[sub];
            }
        }
        best[m] = e;
        if (m == full_mask()) {
            break;
        }
    }
    slot = std::move(table);
    return *slot;
}

DistributiveConstant FamilyGeometry::distributive_constant(empty_convention c) const
{
    return distributive_constant(full_mask(), c);
}

DistributiveConstant FamilyGeometry::distributive_constant(Mask sub, empty_convention c) const
{
    if (sub == 0 || (sub & ~full_mask()) != 0) {
        throw input_error("distributive constant needs a nonempty subfamily of the family");
    }
    const auto &e = best_table(c)[sub];
    if (e.witness == 0) {
        throw precondition_error("every intersection in subfamily " + mask_to_string(sub) + " is empty");
    }
    return DistributiveConstant{make_rational(e.num, e.den), e.witness};
}

// ---------------------------------------------------------------- selections

long weak_bezout_min_size(long q, long N, long k)
{
    return q - (N - k + 3) / 2;
}

Integer bezout_min_size(long q, long N, long k)
{
    const Surd t = tau(static_cast<int>(N), static_cast<int>(k));
    const Surd ratio = Surd(Rational(N - k)) * t / (t - Surd(1));
    return Integer(q) - ratio.ceil() + 1;
}

namespace
{

// Calls fn on every size-r subset of {0..n-1} in lexicographic order of
// sorted tuples until fn returns true.
template <typename Fn>
bool for_each_combination(int n, int r, Fn &&fn)
{
    if (r < 0 || r > n) {
        return false;
    }
    std::vector<int> idx(static_cast<std::size_t>(r));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        Mask m = 0;
        for (int i : idx) {
            m |= Mask{1} << i;
        }
        if (fn(m)) {
            return true;
        }
        int i = r - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) {
            --i;
        }
        if (i < 0) {
            return false;
        }
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

std::string describe(const FamilyGeometry &g, Mask m, empty_convention c)
{
    std::ostringstream os;
    os << "subset " << mask_to_string(m) << " (size " << popcount(m) << ")";
    if (m != 0) {
        auto d = g.distributive_constant(m, c);
        os << " with distributive constant " << to_string(d.value) << " attained at " << mask_to_string(d.witness)
           << " (codim " << g.codim(d.witness) << ")";
    }
    return os.str();
}

} // namespace

Selection FamilyGeometry::select_weak_bezout(int N, empty_convention c) const
{
    if (N <= k()) {
        throw input_error("subfamily selection needs N > k");
    }
    if (!subgeneral_position(N).holds) {
        throw precondition_error("family is not in " + std::to_string(N) + "-subgeneral position");
    }
    if (auto wb = weak_bezout(); !wb.holds) {
        throw precondition_error("weak Bézout property fails at " + mask_to_string(wb.witness->first) + ", "
                                 + mask_to_string(wb.witness->second));
    }
    Selection s;
    s.bound = Surd(make_rational(N - k() + 2, 2));
    s.min_size = weak_bezout_min_size(static_cast<long>(q()), N, k());
    const Rational bound(N - k() + 2, 2);
    const int lowest = std::max<long>(1, s.min_size.get_si());
    for (int size = static_cast<int>(q()); size >= lowest; --size) {
        const bool found = for_each_combination(static_cast<int>(q()), size, [&](Mask m) {
            auto d = distributive_constant(m, c);
            if (d.value <= bound) {
                s.subset = m;
                s.delta = d;
                return true;
            }
            return false;
        });
        if (found) {
            s.full_family = s.subset == full_mask();
            return s;
        }
    }
    // Report the best candidate at the guaranteed size.
    Mask best = 0;
    Rational best_value = -1;
    for_each_combination(static_cast<int>(q()), lowest, [&](Mask m) {
        auto d = distributive_constant(m, c);
        if (best == 0 || d.value < best_value) {
            best = m;
            best_value = d.value;
        }
        return false;
    });
    throw lemma_violation_error("no subfamily of size >= " + std::to_string(lowest)
                                    + " has distributive constant <= " + to_string(bound),
                                describe(*this, best, c));
}

Selection FamilyGeometry::select_bezout(int N, empty_convention c) const
{
    if (N <= k()) {
        throw input_error("subfamily selection needs N > k");
    }
    if (!subgeneral_position(N).holds) {
        throw precondition_error("family is not in " + std::to_string(N) + "-subgeneral position");
    }
    if (auto b = bezout(); !b.holds) {
        throw precondition_error("Bézout property fails at " + mask_to_string(b.witness->first) + ", "
                                 + mask_to_string(b.witness->second));
    }
    Selection s;
    const Surd t = tau(N, k());
    s.bound = t;
    s.min_size = bezout_min_size(static_cast<long>(q()), N, k());
    const auto whole = distributive_constant(c);
    if (Surd(whole.value) <= t) {
        s.subset = full_mask();
        s.delta = whole;
        s.full_family = true;
        return s;
    }
    // Gamma_1: largest subset with ratio above tau, lexicographically first.
    Mask gamma1 = 0;
    for (Mask m = 1; m <= full_mask(); ++m) {
        if (ratio_candidate(m, c) && Surd(make_rational(popcount(m), codim(m))) > t) {
            if (gamma1 == 0 || popcount(m) > popcount(gamma1)
                || (popcount(m) == popcount(gamma1) && lex_less(m, gamma1))) {
                gamma1 = m;
            }
        }
        if (m == full_mask()) {
            break;
        }
    }
    s.removed = gamma1;
    s.subset = full_mask() & ~gamma1;
    const Integer cap = (Surd(Rational(N - k())) * t / (t - Surd(1))).ceil() - 1;
    if (Integer(popcount(gamma1)) > cap) {
        throw lemma_violation_error("removed subset exceeds the size cap " + cap.get_str(),
                                    describe(*this, gamma1, c));
    }
    if (s.subset != 0) {
        s.delta = distributive_constant(s.subset, c);
        if (Surd(s.delta.value) > t) {
            throw lemma_violation_error("selected subfamily has distributive constant above tau = " + t.to_string(),
                                        describe(*this, s.subset, c));
        }
    }
    if (Integer(popcount(s.subset)) < s.min_size) {
        throw lemma_violation_error("selected subfamily is smaller than guaranteed", describe(*this, s.subset, c));
    }
    return s;
}

} // namespace smtlab
