#pragma once

// Dual numeric backend. Every algorithm in rotkit is a template over a
// Scalar: either IEEE double or an exact GMP rational. A computation never
// mixes the two; conversions are explicit.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

#include "rotkit/errors.hpp"

namespace rotkit {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

/// Reduced fraction p/q with q > 0, used for rotation numbers and
/// Stern-Brocot nodes.
struct Fraction {
    std::int64_t p = 0;
    std::int64_t q = 1;

    friend bool operator==(const Fraction&, const Fraction&) = default;
};

inline Fraction make_fraction(std::int64_t p, std::int64_t q) {
    if (q == 0) {
        throw DomainError(DomainError::Kind::argument, "denominator != 0");
    }
    if (q < 0) {
        p = -p;
        q = -q;
    }
    const std::int64_t g = std::gcd(p, q);
    return g > 1 ? Fraction{p / g, q / g} : Fraction{p, q};
}

inline Fraction mediant(const Fraction& l, const Fraction& h) {
    return Fraction{l.p + h.p, l.q + h.q};
}

/// Exact comparison l < h of two fractions with positive denominators.
inline bool fraction_less(const Fraction& l, const Fraction& h) {
    return static_cast<__int128>(l.p) * h.q < static_cast<__int128>(h.p) * l.q;
}

namespace num {

inline Rational ratio(std::int64_t n, std::int64_t d) {
    return Rational(Integer(n), Integer(d));
}

template <Scalar T>
T from_ratio(std::int64_t n, std::int64_t d) {
    if constexpr (is_exact_v<T>) {
        return ratio(n, d);
    } else {
        return static_cast<double>(n) / static_cast<double>(d);
    }
}

template <Scalar T>
T from_fraction(const Fraction& f) {
    return from_ratio<T>(f.p, f.q);
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// Exact value of a double (every finite double is a dyadic rational).
inline Rational to_rational(double x) { return Rational(x); }
inline const Rational& to_rational(const Rational& x) { return x; }

inline Integer floor_int(const Rational& x) {
    const Integer& n = boost::multiprecision::numerator(x);
    const Integer& d = boost::multiprecision::denominator(x);
    Integer q = n / d;
    if (n < 0 && q * d != n) {
        --q;
    }
    return q;
}

inline std::int64_t floor_i64(double x) {
    return static_cast<std::int64_t>(std::floor(x));
}
inline std::int64_t floor_i64(const Rational& x) {
    return floor_int(x).convert_to<std::int64_t>();
}

inline std::int64_t ceil_i64(double x) {
    return static_cast<std::int64_t>(std::ceil(x));
}
inline std::int64_t ceil_i64(const Rational& x) {
    return -floor_i64(Rational(-x));
}

/// Split x into integer part and fractional part in [0, 1).
template <Scalar T>
struct Split {
    std::int64_t whole;
    T frac;
};

inline Split<double> split(double x) {
    const double fl = std::floor(x);
    double fr = x - fl;
    if (fr >= 1.0) {
        // x is a tiny negative number and x - floor(x) rounded up to 1.
        fr = std::nextafter(1.0, 0.0);
    }
    return {static_cast<std::int64_t>(fl), fr};
}

inline Split<Rational> split(const Rational& x) {
    const Integer fl = floor_int(x);
    return {fl.convert_to<std::int64_t>(), Rational(x - Rational(fl))};
}

template <Scalar T>
T frac(const T& x) {
    return split(x).frac;
}

/// base^exp by repeated squaring; exact for rationals.
template <Scalar T>
T ipow(T base, std::uint64_t exp) {
    if constexpr (!is_exact_v<T>) {
        return std::pow(base, static_cast<double>(exp));
    } else {
        T result(1);
        while (exp > 0) {
            if (exp & 1U) {
                result *= base;
            }
            exp >>= 1U;
            if (exp > 0) {
                base *= base;
            }
        }
        return result;
    }
}

template <Scalar T>
T abs(const T& x) {
    return x < T(0) ? T(-x) : x;
}

/// 17 significant digits for doubles, "p/q" (or "p") for rationals.
inline std::string format(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format(const Rational& x) {
    const Integer& d = boost::multiprecision::denominator(x);
    if (d == 1) {
        return boost::multiprecision::numerator(x).str();
    }
    return boost::multiprecision::numerator(x).str() + "/" + d.str();
}

inline std::string format(const Fraction& f) {
    return std::to_string(f.p) + "/" + std::to_string(f.q);
}

/// Parses "p/q", an integer, or a decimal with optional exponent
/// ("0.43557", "-1.5e-3") as an exact rational.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw DomainError(DomainError::Kind::argument,
                          "numeric literal '" + std::string(text) + "'");
    };
    if (text.empty()) {
        return fail();
    }
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_rational(text.substr(0, slash));
        const Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) {
            return fail();
        }
        return num / den;
    }
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    std::int64_t scale = 0;
    bool seen_point = false;
    bool seen_digit = false;
    for (; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_point) {
                --scale;
            }
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else if (ch == 'e' || ch == 'E') {
            break;
        } else {
            return fail();
        }
    }
    if (!seen_digit) {
        return fail();
    }
    if (i < text.size()) {
        const std::string exp_text(text.substr(i + 1));
        if (exp_text.empty()) {
            return fail();
        }
        std::size_t used = 0;
        long long e = 0;
        try {
            e = std::stoll(exp_text, &used);
        } catch (const std::exception&) {
            return fail();
        }
        if (used != exp_text.size() || e > 4096 || e < -4096) {
            return fail();
        }
        scale += e;
    }
    // GMP reads a leading 0 as an octal prefix.
    const std::size_t nz = std::min(digits.find_first_not_of('0'), digits.size() - 1);
    Rational value{Integer(digits.substr(nz))};
    if (scale > 0) {
        value *= Rational(boost::multiprecision::pow(Integer(10), static_cast<unsigned>(scale)));
    } else if (scale < 0) {
        value /= Rational(boost::multiprecision::pow(Integer(10), static_cast<unsigned>(-scale)));
    }
    return negative ? Rational(-value) : value;
}

inline double parse_double(std::string_view text) {
    if (text.find('/') != std::string_view::npos) {
        return to_double(parse_rational(text));
    }
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw DomainError(DomainError::Kind::argument, "numeric literal '" + s + "'");
    }
    return v;
}

template <Scalar T>
T parse(std::string_view text) {
    if constexpr (is_exact_v<T>) {
        return parse_rational(text);
    } else {
        return parse_double(text);
    }
}

} // namespace num
} // namespace rotkit
