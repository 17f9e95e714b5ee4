#pragma once

// The boundary function a(lambda, mu, b, c, rho), its plateaus at rational
// rho, and the inverse problem a -> rho solved by a Stern-Brocot search over
// plateau membership.

#include <cmath>
#include <cstdint>
#include <variant>

#include "rotkit/errors.hpp"
#include "rotkit/params.hpp"
#include "rotkit/scalar.hpp"
#include "rotkit/series.hpp"

namespace rotkit {

/// (1-lambda)(b + (mu b - c) s) / (1 + (mu - 1) s)
template <Scalar T>
T a_of_sigma(const QuadParams<T>& q, const T& s) {
    const T& l = q.lambda();
    const T& m = q.mu();
    return (T(1) - l) * (q.b() + (m * q.b() - q.c()) * s) / (T(1) + (m - T(1)) * s);
}

/// (1-lambda)(1 + mu s) / (1 + (mu - 1) s)
template <Scalar T>
T delta_of_sigma(const T& lambda, const T& mu, const T& s) {
    return (T(1) - lambda) * (T(1) + mu * s) / (T(1) + (mu - T(1)) * s);
}

namespace detail {

template <Scalar T>
void require_rho_in_range(const T& lambda, const T& mu, const RhoValue<T>& rho) {
    const bool ok = rho.is_exact() ? below_r(lambda, mu, rho.fraction()) : below_r(lambda, mu, rho.point());
    if (!ok) {
        throw DomainError(DomainError::Kind::argument, "0 < rho < r_{lambda,mu}");
    }
}

} // namespace detail

/// Parameter value a at which the rotation number is rho. For rational rho
/// this is the right end of the plateau. Exact in rational mode when rho is
/// exact.
template <Scalar T>
T a_of_rho(const QuadParams<T>& q, const RhoValue<T>& rho, double tol = 1e-12) {
    detail::require_rho_in_range(q.lambda(), q.mu(), rho);
    return a_of_sigma(q, sigma(q.lambda(), q.mu(), rho, tol).value);
}

/// Left limit a(lambda, mu, b, c, (p/q)^-), the left end of the plateau.
template <Scalar T>
T a_of_rho_left(const QuadParams<T>& q, const Fraction& rho) {
    detail::require_rho_in_range(q.lambda(), q.mu(), RhoValue<T>::exact(rho));
    return a_of_sigma(q, sigma_left_limit(q.lambda(), q.mu(), rho));
}

/// Normalized boundary function for b = 1, c = 0.
template <Scalar T>
T delta_of_rho(const T& lambda, const T& mu, const RhoValue<T>& rho, double tol = 1e-12) {
    detail::require_rho_in_range(lambda, mu, rho);
    return delta_of_sigma(lambda, mu, sigma(lambda, mu, rho, tol).value);
}

/// Closed interval [a_lo, a_hi] of parameters a with rotation number p/q.
template <Scalar T>
struct Plateau {
    Fraction rho;
    T a_lo;
    T a_hi;
};

template <Scalar T>
Plateau<T> plateau(const QuadParams<T>& q, std::int64_t p, std::int64_t qq) {
    const Fraction f = RhoValue<T>::exact(p, qq).fraction();
    if (!below_r(q.lambda(), q.mu(), f)) {
        throw DomainError(DomainError::Kind::argument, "p/q < r_{lambda,mu}");
    }
    return {f, a_of_sigma(q, sigma_left_limit(q.lambda(), q.mu(), f)),
            a_of_sigma(q, sigma_rational(q.lambda(), q.mu(), f))};
}

template <Scalar T>
struct PlateauMembership {
    Plateau<T> plateau;
};

/// The rotation number lies strictly between lo and hi.
struct Enclosure {
    Fraction lo;
    Fraction hi;

    double width() const {
        return static_cast<double>(hi.p) / static_cast<double>(hi.q) -
               static_cast<double>(lo.p) / static_cast<double>(lo.q);
    }
};

template <Scalar T>
struct RhoSolveResult {
    RhoValue<T> rho;
    std::variant<PlateauMembership<T>, Enclosure> certificate;
    /// a equals the right end of the plateau exactly (rational mode) or after
    /// an exact recheck (float mode).
    bool right_endpoint = false;

    bool is_exact() const { return rho.is_exact(); }
    const Plateau<T>& plateau() const { return std::get<PlateauMembership<T>>(certificate).plateau; }
    const Enclosure& enclosure() const { return std::get<Enclosure>(certificate); }
};

struct SolveConfig {
    std::int64_t max_q = 1000;
    /// In float mode, comparisons of a against a plateau end closer than this
    /// are redone in exact arithmetic on the exact values of the doubles.
    double exact_recheck_band = 1e-12;
    /// Exact rechecks are skipped above this denominator (cost grows with q).
    std::int64_t exact_recheck_max_q = 2048;
};

namespace detail {

enum class PlateauEnd { lo, hi };

// Three-way comparison of a against a plateau end.
template <Scalar T>
int compare_to_end(const Params<T>& p, const Fraction& f, PlateauEnd end, const T& value,
                   const SolveConfig& cfg) {
    const T& a = p.a();
    if constexpr (!is_exact_v<T>) {
        if (std::abs(a - value) < cfg.exact_recheck_band && f.q <= cfg.exact_recheck_max_q) {
            const QuadParams<Rational> q = validate_quad<Rational>(
                num::to_rational(p.lambda()), num::to_rational(p.mu()), num::to_rational(p.b()),
                num::to_rational(p.c()));
            const Rational s = end == PlateauEnd::lo ? sigma_left_limit(q.lambda(), q.mu(), f)
                                                     : sigma_rational(q.lambda(), q.mu(), f);
            const Rational exact_end = a_of_sigma(q, s);
            const Rational ar = num::to_rational(a);
            return ar < exact_end ? -1 : (ar > exact_end ? 1 : 0);
        }
    }
    return a < value ? -1 : (a > value ? 1 : 0);
}

} // namespace detail

/// Rotation number of f_p by Stern-Brocot search. Keeps a bracket lo < hi
/// of fractions with rho in (lo, hi); at each mediant m the plateau of m is
/// compared with a. Fractions at or above r_{lambda,mu} have no plateau and
/// send the search left. When the next mediant would exceed max_q the
/// bracket is returned as an enclosure.
template <Scalar T>
RhoSolveResult<T> rho_of_a(const Params<T>& p, const SolveConfig& cfg = {}) {
    if (cfg.max_q < 2) {
        throw DomainError(DomainError::Kind::argument, "max_q >= 2");
    }
    const QuadParams<T>& q = p.quad();
    Fraction lo{0, 1};
    Fraction hi{1, 1};
    for (;;) {
        const Fraction m = mediant(lo, hi);
        if (m.q > cfg.max_q) {
            const T lo_v = num::from_fraction<T>(lo);
            const T hi_v = num::from_fraction<T>(hi);
            return {RhoValue<T>::approx(T((lo_v + hi_v) / T(2)), T((hi_v - lo_v) / T(2))),
                    Enclosure{lo, hi}, false};
        }
        if (!below_r(q.lambda(), q.mu(), m)) {
            hi = m;
            continue;
        }
        Plateau<T> pl = plateau(q, m.p, m.q);
        if (detail::compare_to_end(p, m, detail::PlateauEnd::lo, pl.a_lo, cfg) < 0) {
            hi = m;
            continue;
        }
        const int vs_hi = detail::compare_to_end(p, m, detail::PlateauEnd::hi, pl.a_hi, cfg);
        if (vs_hi > 0) {
            lo = m;
            continue;
        }
        return {RhoValue<T>::exact(m), PlateauMembership<T>{std::move(pl)}, vs_hi == 0};
    }
}

template <Scalar T>
RhoSolveResult<T> rho_of_a(const Params<T>& p, std::int64_t max_q) {
    SolveConfig cfg;
    cfg.max_q = max_q;
    return rho_of_a(p, cfg);
}

} // namespace rotkit
