#ifndef SMTLAB_BOUNDS_HPP
#define SMTLAB_BOUNDS_HPP

#include <smtlab/rational.hpp>
#include <smtlab/surd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace smtlab
{

// Inputs of the level formulas u(d,k,v,tau,eps) and L(d,k,v,tau,eps).
struct LevelParams {
    Integer d = 1;
    int k = 1;
    Integer v = 1;
    Surd tau = 1;
    Rational eps = 1;
};

// Widening applied to the enclosure of e when re-checking certified floors.
inline const Rational &default_e_widening()
{
    static const Rational w = Rational(1, 1) / pow(Integer(10), 30);
    return w;
}

Integer u_level(const LevelParams &p);

// Certified floor. Without an explicit widening the value is computed from a
// tight enclosure of e and then recomputed with e widened by 1e-30; any
// disagreement is a precision error.
Integer L_level(const LevelParams &p);
Integer L_level(const LevelParams &p, const Rational &e_widening);

// Truncation level M0 with p = N-k+1 and l = (k+1) q!.
Integer M0_theoremD(const Integer &degV, int k, const Integer &d, int N, int q, const Rational &eps);
Integer M0_theoremD(const Integer &degV, int k, const Integer &d, int N, int q, const Rational &eps,
                    const Rational &e_widening);

enum class tau_branch { sqrt, linear };

// Branch used for (N, k); `inclusive` selects N <= (5k+1)/4 for the square
// root branch instead of N < (5k+1)/4. Both give the same value at equality.
tau_branch tau_regime(int N, int k, bool inclusive = false);
Surd tau(int N, int k, bool inclusive = false);

enum class defect_theorem { D, F, new_1_1, heier_levin };

std::string to_string(defect_theorem t);
defect_theorem parse_defect_theorem(const std::string &s);

// Total defect of each theorem as a function of (k, N).
Surd defect_bound(defect_theorem t, int k, int N);

// ceil((N-k) tau/(tau-1)) - 1 + tau (k+1) for an arbitrary tau > 1.
Surd selection_defect(int k, int N, const Surd &t);

struct RemarkCheck {
    enum class regime { first, second, none };
    regime kind = regime::none;
    Surd defect;                   // ceil((N-k)tau/(tau-1)) - 1 + tau(k+1)
    std::optional<Surd> middle;    // 2 sqrt((N-k)(k+1)) + N + 1, first regime
    std::optional<Rational> upper; // 3/2 (2N-k+1) or 3N-2k+floor(k/2)+1
    std::optional<bool> holds1;
    std::optional<bool> holds2;
};

const char *to_string(RemarkCheck::regime r);

RemarkCheck remark_inequalities(int k, int N);

enum class error_theorem { new_1_3, new_1_4, G };

std::string to_string(error_theorem t);
error_theorem parse_error_theorem(const std::string &s);

struct ErrorInputs {
    std::optional<Rational> cf;    // growth index
    std::optional<Rational> eps2;  // epsilon'
    std::optional<Rational> rho;   // Kähler curvature parameter
    std::optional<Surd> delta;     // distributive constant in the 1.4new numerator, defaults to tau
};

// 1.3new and G: (tau(k+1)+eps)(c_f+eps')(L-1)/(2 d u), with tau read as the
// distributive constant for G. 1.4new: rho (L-1)(Delta(k+1)+eps)/(u d).
Surd error_coefficient(error_theorem t, const LevelParams &p, const ErrorInputs &in);

struct ComparisonRow {
    int k = 0;
    int N = 0;
    Surd bound_D;
    Surd bound_F;
    Surd bound_new;
    Surd bound_HL;
    Surd tau;
    Integer L;
    Integer u;
    std::optional<Integer> M0;
};

ComparisonRow comparison_row(int k, int N, const Integer &d, const Integer &v, const Rational &eps,
                             std::optional<int> q);

} // namespace smtlab

#endif
