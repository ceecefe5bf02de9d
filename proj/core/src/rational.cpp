#include <smtlab/error.hpp>
#include <smtlab/rational.hpp>

#include <cctype>
#include <string>

namespace smtlab
{

const char *to_string(error_code c) noexcept
{
    switch (c) {
        case error_code::input:
            return "input";
        case error_code::resource_limit:
            return "resource_limit";
        case error_code::precision:
            return "precision";
        case error_code::lemma_violation:
            return "lemma_violation";
        case error_code::precondition:
            return "precondition";
        case error_code::geometry:
            return "geometry";
        case error_code::quadrature:
            return "quadrature";
        case error_code::degeneracy:
            return "degeneracy";
        case error_code::consistency:
            return "consistency";
        case error_code::schema:
            return "schema";
    }
    return "unknown";
}

namespace
{

bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(c);
        }
    }
    if (s.empty()) {
        throw input_error("empty rational literal");
    }
    bool negative = false;
    std::string_view body(s);
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw input_error("malformed rational literal '" + s + "'");
        }
        Integer d(std::string(den), 10);
        if (d == 0) {
            throw input_error("zero denominator in '" + s + "'");
        }
        result = Rational(Integer(std::string(num), 10), d);
        result.canonicalize();
    } else {
        long exponent = 0;
        if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
            auto exp_str = std::string(body.substr(e + 1));
            std::string_view digits(exp_str);
            bool exp_neg = false;
            if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
                exp_neg = digits.front() == '-';
                digits.remove_prefix(1);
            }
            if (!all_digits(digits) || digits.size() > 6) {
                throw input_error("malformed exponent in '" + s + "'");
            }
            exponent = std::stol(std::string(digits));
            if (exp_neg) {
                exponent = -exponent;
            }
            body = body.substr(0, e);
        }
        std::string mantissa;
        long frac_digits = 0;
        if (auto dot = body.find('.'); dot != std::string_view::npos) {
            auto ip = body.substr(0, dot);
            auto fp = body.substr(dot + 1);
            if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty())) {
                throw input_error("malformed decimal literal '" + s + "'");
            }
            mantissa = std::string(ip) + std::string(fp);
            frac_digits = static_cast<long>(fp.size());
        } else {
            if (!all_digits(body)) {
                throw input_error("malformed number '" + s + "'");
            }
            mantissa = std::string(body);
        }
        if (mantissa.empty()) {
            mantissa = "0";
        }
        Integer m(mantissa, 10);
        long shift = exponent - frac_digits;
        Integer ten = 10;
        if (shift >= 0) {
            result = Rational(m * pow(ten, static_cast<unsigned long>(shift)));
        } else {
            result = Rational(m, pow(ten, static_cast<unsigned long>(-shift)));
            result.canonicalize();
        }
    }
    return negative ? Rational(-result) : result;
}

std::string to_string(const Integer &z)
{
    return z.get_str();
}

std::string to_string(const Rational &q)
{
    return q.get_str();
}

Integer floor_of(const Rational &q)
{
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil_of(const Rational &q)
{
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer pow(const Integer &base, unsigned long exponent)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

Rational pow(const Rational &base, unsigned long exponent)
{
    Rational r(pow(Integer(base.get_num()), exponent), pow(Integer(base.get_den()), exponent));
    r.canonicalize();
    return r;
}

Integer factorial(unsigned long n)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Integer binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

double to_double(const Rational &q)
{
    return q.get_d();
}

} // namespace smtlab
