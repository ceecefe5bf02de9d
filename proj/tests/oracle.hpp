#ifndef SMTLAB_TESTS_ORACLE_HPP
#define SMTLAB_TESTS_ORACLE_HPP

// Independent reference computations used to validate the library.

#include <smtlab/poly.hpp>

#include <map>
#include <vector>

namespace oracle
{

using smtlab::Monomial;
using smtlab::Poly;
using smtlab::Rational;

// Rank of a dense rational matrix by plain Gaussian elimination.
inline std::size_t rank(std::vector<std::vector<Rational>> m)
{
    std::size_t r = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) {
            ++p;
        }
        if (p == m.size()) {
            continue;
        }
        std::swap(m[p], m[r]);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i != r && m[i][c] != 0) {
                Rational f = m[i][c] / m[r][c];
                for (std::size_t j = c; j < cols; ++j) {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        ++r;
    }
    return r;
}

inline std::vector<Monomial> all_monomials(std::size_t n, int u)
{
    std::vector<Monomial> out;
    std::vector<int> e(n, 0);
    auto rec = [&](auto &self, std::size_t i, int left) -> void {
        if (i + 1 == n) {
            e[i] = left;
            out.emplace_back(e);
            return;
        }
        for (int a = left; a >= 0; --a) {
            e[i] = a;
            self(self, i + 1, left - a);
        }
    };
    if (n > 0) {
        rec(rec, 0, u);
    }
    return out;
}

// dim of the degree-u slice of S/I computed from the span of generator
// multiples in degree u (standard grading).
inline std::size_t quotient_dimension(const std::vector<Poly> &gens, std::size_t n, int u)
{
    auto basis = all_monomials(n, u);
    std::map<Monomial, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        index[basis[i]] = i;
    }
    std::vector<std::vector<Rational>> rows;
    for (const auto &g : gens) {
        int dg = g.total_degree();
        if (dg > u) {
            continue;
        }
        for (const auto &m : all_monomials(n, u - dg)) {
            std::vector<Rational> row(basis.size(), 0);
            for (const auto &[t, c] : g.terms()) {
                row[index.at(t * m)] += c;
            }
            rows.push_back(std::move(row));
        }
    }
    return basis.size() - rank(std::move(rows));
}

} // namespace oracle

#endif
