#ifndef SMTLAB_FAMILY_HPP
#define SMTLAB_FAMILY_HPP

#include <smtlab/groebner.hpp>
#include <smtlab/surd.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace smtlab
{

// Projective variety V in P^n given by a homogeneous ideal in n+1 variables.
class Variety
{
public:
    explicit Variety(Ideal ideal, bool declared_smooth = false, const GroebnerBudget &budget = {});

    static Variety projective_space(std::size_t n);

    std::size_t ambient_dim() const noexcept
    {
        return m_ideal.nvars() - 1;
    }
    std::size_t nvars() const noexcept
    {
        return m_ideal.nvars();
    }
    const Ideal &ideal() const noexcept
    {
        return m_ideal;
    }
    int dim() const noexcept
    {
        return m_dim;
    }
    const Integer &degree() const noexcept
    {
        return m_degree;
    }
    bool declared_smooth() const noexcept
    {
        return m_smooth;
    }
    bool is_projective_space() const noexcept
    {
        return m_ideal.generators().empty();
    }

private:
    Ideal m_ideal;
    int m_dim = 0;
    Integer m_degree = 1;
    bool m_smooth = false;
};

class HypersurfaceFamily
{
public:
    HypersurfaceFamily(const Variety &V, std::vector<Poly> defining);

    std::size_t size() const noexcept
    {
        return m_polys.size();
    }
    const std::vector<Poly> &polys() const noexcept
    {
        return m_polys;
    }
    const std::vector<int> &degrees() const noexcept
    {
        return m_degrees;
    }
    int lcm_degree() const noexcept
    {
        return m_lcm;
    }
    // D_i^{d/d_i}.
    Poly normalized(std::size_t i) const;

private:
    std::vector<Poly> m_polys;
    std::vector<int> m_degrees;
    int m_lcm = 1;
};

using Mask = std::uint32_t;

inline int popcount(Mask m) noexcept
{
    return __builtin_popcount(m);
}

// 1-based sorted indices, e.g. "{1,2,3}".
std::string mask_to_string(Mask m);
std::vector<int> mask_indices(Mask m);
// Lexicographic order on sorted index tuples.
bool lex_less(Mask a, Mask b) noexcept;

enum class empty_convention { skip_empty, literal };

const char *to_string(empty_convention c) noexcept;
empty_convention parse_convention(const std::string &s);

struct FamilyOptions {
    std::size_t max_q = 20;
    // Upper limit on subset pairs enumerated by the Bézout checks.
    std::uint64_t max_pairs = 100'000'000;
    GroebnerBudget budget;
    unsigned threads = 0; // 0: hardware concurrency
};

struct PositionCheck {
    bool holds = false;
    bool vacuous = false;
    std::optional<Mask> witness; // an (N+1)-subset with nonempty intersection
};

struct BezoutCheck {
    bool holds = true;
    std::optional<std::pair<Mask, Mask>> witness;
    std::uint64_t pairs_checked = 0;
};

struct DistributiveConstant {
    Rational value;
    Mask witness = 0;
};

struct Selection {
    Mask subset = 0;
    DistributiveConstant delta;           // of the selected subfamily
    Surd bound;                           // guaranteed upper bound on delta
    Integer min_size;                     // guaranteed lower bound on the subset size
    std::optional<Mask> removed;          // Gamma_1 of the Bézout construction
    bool full_family = false;
};

// Codimension oracle c(Gamma) = k - dim(V ∩ Q_Gamma), with the empty set at
// k+1, over all subsets of a family of at most 20 members. The table is
// filled eagerly one cardinality level at a time; supersets of an empty
// intersection are resolved without a Gröbner computation.
class FamilyGeometry
{
public:
    FamilyGeometry(Variety V, HypersurfaceFamily F, FamilyOptions options = {});

    const Variety &variety() const noexcept
    {
        return m_variety;
    }
    const HypersurfaceFamily &family() const noexcept
    {
        return m_family;
    }
    std::size_t q() const noexcept
    {
        return m_family.size();
    }
    int k() const noexcept
    {
        return m_variety.dim();
    }
    Mask full_mask() const noexcept
    {
        return static_cast<Mask>((std::uint64_t{1} << q()) - 1);
    }

    int codim(Mask gamma) const;
    bool empty_intersection(Mask gamma) const
    {
        return codim(gamma) == k() + 1;
    }
    std::size_t groebner_calls() const noexcept
    {
        return m_gb_calls;
    }

    PositionCheck subgeneral_position(int N) const;
    // Smallest N >= k with N-subgeneral position; nullopt when the whole
    // family has a common point on V.
    std::optional<int> position_level() const;

    BezoutCheck weak_bezout() const;
    BezoutCheck bezout() const;

    // Over nonempty subsets of `sub` (default: the whole family).
    DistributiveConstant distributive_constant(empty_convention c = empty_convention::skip_empty) const;
    DistributiveConstant distributive_constant(Mask sub, empty_convention c = empty_convention::skip_empty) const;

    Selection select_weak_bezout(int N, empty_convention c = empty_convention::skip_empty) const;
    Selection select_bezout(int N, empty_convention c = empty_convention::skip_empty) const;

private:
    struct best_entry {
        int num = 0; // #Gamma
        int den = 1; // c(Gamma)
        Mask witness = 0;
    };

    void fill_table();
    int compute_codim(Mask gamma) const;
    const std::vector<best_entry> &best_table(empty_convention c) const;
    bool ratio_candidate(Mask gamma, empty_convention c) const;

    Variety m_variety;
    HypersurfaceFamily m_family;
    FamilyOptions m_options;
    std::vector<std::int8_t> m_codim;
    mutable std::size_t m_gb_calls = 0;
    mutable std::unique_ptr<std::vector<best_entry>> m_best[2];
};

// q - floor((N-k+3)/2), guaranteed size of the weak-Bézout selection.
long weak_bezout_min_size(long q, long N, long k);
// q - ceil((N-k)tau/(tau-1)) + 1.
Integer bezout_min_size(long q, long N, long k);

} // namespace smtlab

#endif
