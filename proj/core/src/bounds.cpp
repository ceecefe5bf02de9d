#include <smtlab/bounds.hpp>
#include <smtlab/error.hpp>
#include <smtlab/interval.hpp>

#include <functional>

namespace smtlab
{

namespace
{

void check_level(const LevelParams &p)
{
    if (p.eps <= 0) {
        throw input_error("epsilon must be positive");
    }
    if (p.d <= 0 || p.v <= 0 || p.k <= 0) {
        throw input_error("d, k and v must be positive integers");
    }
    if (p.tau.sign() <= 0) {
        throw input_error("tau must be positive");
    }
}

Integer certified(const std::function<Interval(mpfr_prec_t, const Rational &)> &value, const Rational &widen,
                  const char *what)
{
    for (mpfr_prec_t prec = 128; prec <= 16384; prec *= 2) {
        if (auto f = value(prec, widen).certified_floor()) {
            return *f;
        }
    }
    throw precision_error(std::string(what) + ": floor not certified at maximum precision");
}

Integer certified_checked(const std::function<Interval(mpfr_prec_t, const Rational &)> &value, const char *what)
{
    Integer tight = certified(value, 0, what);
    Integer wide = certified(value, default_e_widening(), what);
    if (tight != wide) {
        throw precision_error(std::string(what) + ": floor changes when e is widened by 1e-30");
    }
    return tight;
}

Interval L_value(const LevelParams &p, mpfr_prec_t prec, const Rational &widen)
{
    const auto k = static_cast<unsigned long>(p.k);
    Interval x(Rational(pow(p.d, k * k + k) * pow(p.v, k + 1)), prec);
    const Interval tau = p.tau.enclose(prec);
    x *= tau.pow(k);
    x *= Interval::e(prec, widen).pow(k);
    x *= Interval(Rational(2 * p.k + 5), prec).pow(k);
    Interval inner = tau * Interval(Rational(p.k + 1) / p.eps, prec) + Interval(Rational(1), prec);
    x *= inner.pow(k);
    return x;
}

Interval M0_value(const Integer &degV, int k, const Integer &d, int N, int q, const Rational &eps, mpfr_prec_t prec,
                  const Rational &widen)
{
    const auto uk = static_cast<unsigned long>(k);
    const Integer pp = N - k + 1;
    const Integer l = Integer(k + 1) * factorial(static_cast<unsigned long>(q));
    Rational exact = Rational(pow(degV, uk + 1) * pow(d, uk * uk + uk) * pow(pp, uk) * pow(Integer(2 * k + 4), uk)
                              * pow(l, uk))
                     / pow(eps, uk);
    return Interval(exact, prec) * Interval::e(prec, widen).pow(uk);
}

} // namespace

Integer u_level(const LevelParams &p)
{
    check_level(p);
    const auto k = static_cast<unsigned long>(p.k);
    const Rational coef = Rational((2 * p.k + 1) * (p.k + 1)) * Rational(pow(p.d, k) * p.v) / p.eps;
    Surd x = p.tau * (p.tau * Surd(Rational(p.k + 1)) + Surd(p.eps)) * Surd(coef);
    return x.ceil();
}

Integer L_level(const LevelParams &p)
{
    check_level(p);
    return certified_checked([&](mpfr_prec_t prec, const Rational &w) { return L_value(p, prec, w); }, "L level");
}

Integer L_level(const LevelParams &p, const Rational &e_widening)
{
    check_level(p);
    return certified([&](mpfr_prec_t prec, const Rational &w) { return L_value(p, prec, w); }, e_widening,
                     "L level");
}

namespace
{

void check_M0(int k, int N, int q, const Rational &eps)
{
    if (eps <= 0) {
        throw input_error("epsilon must be positive");
    }
    if (k < 1 || N <= k) {
        throw input_error("M0 requires N > k >= 1");
    }
    if (q < 1 || q > 170) {
        throw input_error("M0 requires 1 <= q <= 170");
    }
}

} // namespace

Integer M0_theoremD(const Integer &degV, int k, const Integer &d, int N, int q, const Rational &eps)
{
    check_M0(k, N, q, eps);
    return certified_checked(
        [&](mpfr_prec_t prec, const Rational &w) { return M0_value(degV, k, d, N, q, eps, prec, w); }, "M0");
}

Integer M0_theoremD(const Integer &degV, int k, const Integer &d, int N, int q, const Rational &eps,
                    const Rational &e_widening)
{
    check_M0(k, N, q, eps);
    return certified([&](mpfr_prec_t prec, const Rational &w) { return M0_value(degV, k, d, N, q, eps, prec, w); },
                     e_widening, "M0");
}

tau_branch tau_regime(int N, int k, bool inclusive)
{
    if (k < 1 || N <= k) {
        throw input_error("tau requires N > k >= 1, got N=" + std::to_string(N) + " k=" + std::to_string(k));
    }
    const bool first = inclusive ? 4 * N <= 5 * k + 1 : 4 * N < 5 * k + 1;
    return first ? tau_branch::sqrt : tau_branch::linear;
}

Surd tau(int N, int k, bool inclusive)
{
    if (tau_regime(N, k, inclusive) == tau_branch::sqrt) {
        return Surd(1, 1, make_rational(N - k, k + 1));
    }
    return Surd(1 + make_rational(2 * (N - k), k + 1));
}

std::string to_string(defect_theorem t)
{
    switch (t) {
        case defect_theorem::D:
            return "D";
        case defect_theorem::F:
            return "F";
        case defect_theorem::new_1_1:
            return "1.1new";
        case defect_theorem::heier_levin:
            return "HL";
    }
    return "?";
}

defect_theorem parse_defect_theorem(const std::string &s)
{
    if (s == "D") {
        return defect_theorem::D;
    }
    if (s == "F") {
        return defect_theorem::F;
    }
    if (s == "1.1new" || s == "1.1") {
        return defect_theorem::new_1_1;
    }
    if (s == "HL" || s == "HeierLevin") {
        return defect_theorem::heier_levin;
    }
    throw input_error("unknown theorem '" + s + "' (expected D, F, 1.1new or HL)");
}

Surd selection_defect(int k, int N, const Surd &t)
{
    if (t <= Surd(1)) {
        throw input_error("tau must exceed 1");
    }
    Surd ratio = Surd(Rational(N - k)) * t / (t - Surd(1));
    return Surd(Rational(ratio.ceil() - 1)) + t * Surd(Rational(k + 1));
}

Surd defect_bound(defect_theorem t, int k, int N)
{
    if (k < 1 || N <= k) {
        throw input_error("defect bounds require N > k >= 1");
    }
    switch (t) {
        case defect_theorem::D:
            return Surd(Rational((N - k + 1) * (k + 1)));
        case defect_theorem::F: {
            const Rational tau0(N - k + 2, 2);
            return Surd(Rational(floor_of(make_rational(N - k + 3, 2))) + tau0 * (k + 1));
        }
        case defect_theorem::new_1_1:
            return selection_defect(k, N, tau(N, k));
        case defect_theorem::heier_levin:
            return Surd(Rational(3, 2) * (2 * N - k + 1));
    }
    return {};
}

const char *to_string(RemarkCheck::regime r)
{
    switch (r) {
        case RemarkCheck::regime::first:
            return "first";
        case RemarkCheck::regime::second:
            return "second";
        case RemarkCheck::regime::none:
            return "boundary";
    }
    return "?";
}

RemarkCheck remark_inequalities(int k, int N)
{
    RemarkCheck r;
    r.defect = defect_bound(defect_theorem::new_1_1, k, N);
    if (k + 1 < N && 4 * N < 5 * k + 1) {
        r.kind = RemarkCheck::regime::first;
        Surd mid = Surd(0, 2, Rational((N - k) * (k + 1))) + Surd(Rational(N + 1));
        r.middle = mid;
        r.upper = Rational(3, 2) * (2 * N - k + 1);
        r.holds1 = r.defect <= mid;
        r.holds2 = mid < Surd(*r.upper);
    } else if (4 * N >= 5 * k + 1) {
        r.kind = RemarkCheck::regime::second;
        r.upper = Rational(3 * N - 2 * k + k / 2 + 1);
        r.holds1 = r.defect <= Surd(*r.upper);
    }
    return r;
}

std::string to_string(error_theorem t)
{
    switch (t) {
        case error_theorem::new_1_3:
            return "1.3new";
        case error_theorem::new_1_4:
            return "1.4new";
        case error_theorem::G:
            return "G";
    }
    return "?";
}

error_theorem parse_error_theorem(const std::string &s)
{
    if (s == "1.3new" || s == "1.3") {
        return error_theorem::new_1_3;
    }
    if (s == "1.4new" || s == "1.4") {
        return error_theorem::new_1_4;
    }
    if (s == "G") {
        return error_theorem::G;
    }
    throw input_error("unknown error-coefficient theorem '" + s + "' (expected 1.3new, 1.4new or G)");
}

Surd error_coefficient(error_theorem t, const LevelParams &p, const ErrorInputs &in)
{
    check_level(p);
    const Integer u = u_level(p);
    const Integer L = L_level(p);
    const Surd k1(Rational(p.k + 1));
    if (t == error_theorem::new_1_4) {
        if (!in.rho) {
            throw input_error("1.4new needs the Kähler parameter rho");
        }
        if (*in.rho < 0) {
            throw input_error("rho must be non-negative");
        }
        const Surd delta = in.delta.value_or(p.tau);
        return Surd(*in.rho * Rational(L - 1) / Rational(u * p.d)) * (delta * k1 + Surd(p.eps));
    }
    if (!in.cf) {
        throw input_error(to_string(t) + " needs the growth index c_f");
    }
    if (!in.eps2 || *in.eps2 <= 0) {
        throw input_error(to_string(t) + " needs a positive epsilon' for the growth index");
    }
    if (*in.cf < 0) {
        throw input_error("growth index c_f must be non-negative");
    }
    const Rational scale = (*in.cf + *in.eps2) * Rational(L - 1) / Rational(2 * p.d * u);
    return (p.tau * k1 + Surd(p.eps)) * Surd(scale);
}

ComparisonRow comparison_row(int k, int N, const Integer &d, const Integer &v, const Rational &eps,
                             std::optional<int> q)
{
    ComparisonRow row;
    row.k = k;
    row.N = N;
    row.bound_D = defect_bound(defect_theorem::D, k, N);
    row.bound_F = defect_bound(defect_theorem::F, k, N);
    row.bound_new = defect_bound(defect_theorem::new_1_1, k, N);
    row.bound_HL = defect_bound(defect_theorem::heier_levin, k, N);
    row.tau = tau(N, k);
    LevelParams p{d, k, v, row.tau, eps};
    row.u = u_level(p);
    row.L = L_level(p);
    if (q) {
        row.M0 = M0_theoremD(v, k, d, N, *q, eps);
    }
    return row;
}

} // namespace smtlab
