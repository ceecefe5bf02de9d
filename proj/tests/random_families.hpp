#ifndef SMTLAB_TESTS_RANDOM_FAMILIES_HPP
#define SMTLAB_TESTS_RANDOM_FAMILIES_HPP

#include <smtlab/error.hpp>
#include <smtlab/family.hpp>

#include <optional>
#include <random>
#include <string>

namespace testing_support
{

using namespace smtlab;

enum class base { p2, p3, conic, twisted_cubic };

inline const char *base_name(base b)
{
    switch (b) {
        case base::p2:
            return "P2";
        case base::p3:
            return "P3";
        case base::conic:
            return "conic";
        case base::twisted_cubic:
            return "twisted cubic";
    }
    return "?";
}

inline Variety make_base(base b)
{
    switch (b) {
        case base::p2:
            return Variety::projective_space(2);
        case base::p3:
            return Variety::projective_space(3);
        case base::conic:
            return Variety(Ideal(3, {parse_poly("x0*x2 - x1^2", 3)}));
        case base::twisted_cubic:
            return Variety(Ideal(4, {parse_poly("x0*x2 - x1^2", 4), parse_poly("x0*x3 - x1*x2", 4),
                                     parse_poly("x1*x3 - x2^2", 4)}));
    }
    throw input_error("unknown base");
}

inline Poly random_linear(std::mt19937_64 &rng, std::size_t n, int spread = 2)
{
    std::uniform_int_distribution<int> c(-spread, spread);
    while (true) {
        Poly p(n);
        for (std::size_t i = 0; i < n; ++i) {
            p.add_term(Monomial::variable(n, i), c(rng));
        }
        if (!p.is_zero()) {
            return p;
        }
    }
}

struct RandomInstance {
    base where;
    std::optional<FamilyGeometry> geometry;
    int N = 0;
    std::string description;
};

// Random family on the given base in N-subgeneral position for some N > k.
// A few members are reducible with a shared linear component so that the
// distributive constant can exceed the selection bounds. Returns nullopt when
// the draw is not in any subgeneral position or contains V.
inline std::optional<RandomInstance> random_instance(std::mt19937_64 &rng, base b, int max_q = 8)
{
    Variety V = make_base(b);
    const std::size_t n = V.nvars();
    std::uniform_int_distribution<int> qdist(3, max_q);
    const int q = qdist(rng);
    std::vector<Poly> polys;
    std::string desc;
    const Poly shared = random_linear(rng, n, 1);
    const int sharing = static_cast<int>(rng() % 4); // 0..3 members through one component
    for (int i = 0; i < q; ++i) {
        Poly p(n);
        if (i < sharing) {
            p = shared * random_linear(rng, n);
        } else if (rng() % 3 == 0) {
            p = random_linear(rng, n) * random_linear(rng, n) + random_linear(rng, n) * random_linear(rng, n);
        } else {
            p = random_linear(rng, n);
        }
        if (p.is_zero() || V.ideal().contains(p)) {
            return std::nullopt;
        }
        desc += (i ? "; " : "") + p.to_string();
        polys.push_back(std::move(p));
    }
    FamilyGeometry g(V, HypersurfaceFamily(V, polys), FamilyOptions{});
    auto level = g.position_level();
    if (!level) {
        return std::nullopt;
    }
    int N = std::max(*level, g.k() + 1) + static_cast<int>(rng() % 2);
    RandomInstance inst{b, std::nullopt, N, desc};
    inst.geometry.emplace(std::move(g));
    return inst;
}

} // namespace testing_support

#endif
