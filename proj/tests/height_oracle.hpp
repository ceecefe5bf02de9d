#ifndef SMTLAB_TESTS_HEIGHT_ORACLE_HPP
#define SMTLAB_TESTS_HEIGHT_ORACLE_HPP

#include <smtlab/heights.hpp>

#include <algorithm>
#include <cmath>

namespace height_oracle
{

using namespace smtlab;

// lambda from the definition in long double: archimedean norms directly,
// p-adic norms through valuations counted by repeated division.
inline long double reference_weil(const Poly &Q, const Place &v, const RationalPoint &x)
{
    const auto xr = x.as_rationals();
    const Rational value = Q.evaluate_exact(xr);
    const int d = *Q.homogeneous_degree();
    if (v.archimedean()) {
        long double xm = 0, qm = 0;
        for (const auto &c : x.coordinates()) {
            xm = std::max(xm, std::fabs(static_cast<long double>(c.get_d())));
        }
        for (const auto &[m, c] : Q.terms()) {
            qm = std::max(qm, std::fabs(static_cast<long double>(c.get_d())));
        }
        return d * std::log(xm) + std::log(qm) - std::log(std::fabs(static_cast<long double>(value.get_d())));
    }
    auto val = [&](Integer z) {
        long e = 0;
        if (z < 0) {
            z = -z;
        }
        while (z != 0 && z % v.p == 0) {
            z /= v.p;
            ++e;
        }
        return e;
    };
    long xo = 1L << 40, qo = 1L << 40;
    for (const auto &c : x.coordinates()) {
        if (c != 0) {
            xo = std::min(xo, val(c));
        }
    }
    for (const auto &[m, c] : Q.terms()) {
        qo = std::min(qo, val(c.get_num()) - val(c.get_den()));
    }
    const long vo = val(value.get_num()) - val(value.get_den());
    return (static_cast<long double>(-d * xo - qo + vo)) * std::log(static_cast<long double>(v.p.get_d()));
}

// log max |x_i| of a primitive integer representative.
inline long double reference_height(const RationalPoint &x)
{
    long double m = 0;
    for (const auto &c : x.coordinates()) {
        m = std::max(m, std::fabs(static_cast<long double>(c.get_d())));
    }
    return std::log(m);
}

} // namespace height_oracle

#endif
