#pragma once

// The semi-conjugacy phi between the rotation by rho and f_p on its limit
// set, limit-set classification, periodic cycles, Cantor-set samples and
// residual checks of phi(y + rho) = F(phi(y)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rotkit/boundary.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/pam.hpp"
#include "rotkit/params.hpp"
#include "rotkit/scalar.hpp"
#include "rotkit/series.hpp"

namespace rotkit {

namespace detail {

template <Scalar T>
T phi_offset(const Params<T>& p) {
    return p.a() / (T(1) - p.lambda());
}

// Negative for every valid p; this is inequality (1-l)(c - mu b) < (1-mu) a.
template <Scalar T>
T phi_coefficient(const Params<T>& p) {
    const T& l = p.lambda();
    const T& m = p.mu();
    return ((T(1) - l) * (p.c() - m * p.b()) + p.a() * (m - T(1))) / l;
}

} // namespace detail

/// phi(y) at an exact rotation number and an exact argument:
/// floor(y) + a/(1-lambda) + coefficient * Phi_rho(lambda, mu, -{y}).
template <Scalar T>
T phi_at(const Params<T>& p, const Fraction& rho, const Rational& y) {
    const auto s = num::split(y);
    const T series = phi_series_exact(p.lambda(), p.mu(), rho, Rational(-s.frac));
    return T(s.whole) + detail::phi_offset(p) + detail::phi_coefficient(p) * series;
}

/// Left limit phi(y^-) at an exact rotation number.
template <Scalar T>
T phi_left_limit_at(const Params<T>& p, const Fraction& rho, const Rational& y) {
    // Points just left of y have floor ceil(y) - 1 and fractional part -> s.
    const std::int64_t whole = num::ceil_i64(y) - 1;
    const Rational s = y - Rational(whole);
    const T series = phi_series_exact(p.lambda(), p.mu(), rho, Rational(-s), PhiBound::inclusive);
    return T(whole) + detail::phi_offset(p) + detail::phi_coefficient(p) * series;
}

/// phi(y) with its truncation bound. Exact rotation numbers use the closed
/// form on the exact value of y, so jump points sit exactly at multiples of
/// 1/q.
template <Scalar T>
SeriesResult<T> phi_eval_with_bound(const Params<T>& p, const RhoValue<T>& rho, const T& y, double tol) {
    if (rho.is_exact()) {
        return {phi_at(p, rho.fraction(), num::to_rational(y)), 0.0, rho.fraction().q};
    }
    const auto s = num::split(y);
    const T k = detail::phi_coefficient(p);
    const double scale = std::max(1.0, std::abs(num::to_double(k)));
    SeriesResult<T> r = phi_series(p.lambda(), p.mu(), rho, T(-s.frac), tol / scale);
    return {T(T(s.whole) + detail::phi_offset(p) + k * r.value), r.tail_bound * scale, r.terms_used};
}

template <Scalar T>
T phi_eval(const Params<T>& p, const RhoValue<T>& rho, const T& y, double tol = 1e-12) {
    return phi_eval_with_bound(p, rho, y, tol).value;
}

/// phi(y^-).
template <Scalar T>
T phi_left_limit(const Params<T>& p, const RhoValue<T>& rho, const T& y, double tol = 1e-12) {
    if (rho.is_exact()) {
        return phi_left_limit_at(p, rho.fraction(), num::to_rational(y));
    }
    const std::int64_t whole = num::ceil_i64(y) - 1;
    const T s = y - T(whole);
    const T k = detail::phi_coefficient(p);
    const double scale = std::max(1.0, std::abs(num::to_double(k)));
    const SeriesResult<T> r = phi_series(p.lambda(), p.mu(), rho, T(-s), tol / scale, PhiBound::inclusive);
    return T(whole) + detail::phi_offset(p) + k * r.value;
}

/// Classification of the limit set.
///   rational_cycle:         rho = p/q and a_lo <= a < a_hi, limit set is a q-cycle
///   plateau_right_endpoint: rho = p/q and a = a_hi, limit set empty
///   irrational_candidate:   no plateau with denominator <= max_q contains a
template <Scalar T>
struct LimitClass {
    enum class Kind { irrational_candidate, rational_cycle, plateau_right_endpoint };

    Kind kind;
    Fraction rho{};                     // valid unless irrational_candidate
    std::optional<Plateau<T>> plateau;  // for the rational kinds
    std::optional<Enclosure> enclosure; // for irrational_candidate
    /// For irrational_candidate: the enclosure is narrower than the
    /// requested tolerance. Irrationality itself is never decided.
    bool resolved = true;
};

template <Scalar T>
LimitClass<T> classify(const Params<T>& p, const SolveConfig& cfg, double tol) {
    using Kind = typename LimitClass<T>::Kind;
    RhoSolveResult<T> res = rho_of_a(p, cfg);
    if (res.is_exact()) {
        const Kind kind = res.right_endpoint ? Kind::plateau_right_endpoint : Kind::rational_cycle;
        return {kind, res.rho.fraction(), res.plateau(), std::nullopt, true};
    }
    const Enclosure e = res.enclosure();
    return {Kind::irrational_candidate, Fraction{}, std::nullopt, e, e.width() < tol};
}

template <Scalar T>
LimitClass<T> classify(const Params<T>& p, std::int64_t max_q = 1000, double tol = 1e-10) {
    SolveConfig cfg;
    cfg.max_q = max_q;
    return classify(p, cfg, tol);
}

template <Scalar T>
struct Cycle {
    std::vector<T> points;   // phi(m/q), m = 0..q-1 (increasing)
    std::int64_t period = 0; // q
    std::int64_t winding = 0; // p
};

/// The attracting q-cycle {phi(m/q)} for a in [a_lo, a_hi) of the plateau
/// of p/q. Each point is checked by iterating F q times: the orbit must
/// return to the start displaced by exactly p (rational mode) or within tol.
template <Scalar T>
Cycle<T> limit_cycle(const Params<T>& p, const Fraction& rho, double tol = 1e-9) {
    const Plateau<T> pl = plateau(p.quad(), rho.p, rho.q);
    if (!(pl.a_lo <= p.a() && p.a() < pl.a_hi)) {
        throw DomainError(DomainError::Kind::argument, "a_lo <= a < a_hi for rho = " + num::format(rho));
    }
    Cycle<T> cyc{{}, rho.q, rho.p};
    cyc.points.reserve(static_cast<std::size_t>(rho.q));
    for (std::int64_t m = 0; m < rho.q; ++m) {
        cyc.points.push_back(phi_at(p, rho, num::ratio(m, rho.q)));
    }

    auto close = [&](const T& x, const T& y) {
        if constexpr (is_exact_v<T>) {
            return x == y;
        } else {
            return std::abs(x - y) <= tol;
        }
    };
    for (std::int64_t m = 0; m < rho.q; ++m) {
        const T& x = cyc.points[static_cast<std::size_t>(m)];
        if (!(x >= T(0) && x < T(1))) {
            throw ValidationError("cycle point phi(" + std::to_string(m) + "/" + std::to_string(rho.q) +
                                  ") = " + num::format(x) + " outside [0,1)");
        }
        const T& image = cyc.points[static_cast<std::size_t>((m + rho.p) % rho.q)];
        if (!close(eval(p, x), image)) {
            throw ValidationError("f(phi(m/q)) != phi((m+p)/q) at m = " + std::to_string(m));
        }
        T y = x;
        for (std::int64_t k = 0; k < rho.q; ++k) {
            y = lift_eval(p, y);
        }
        if (!close(y, T(x + T(rho.p)))) {
            throw ValidationError("F^q(x) - x != p at m = " + std::to_string(m));
        }
    }
    return cyc;
}

template <Scalar T>
struct GapStats {
    T min_gap{};
    T max_gap{};
    T mean_gap{};
    std::int64_t flat_gaps = 0; // consecutive values within 10 * tol
};

template <Scalar T>
struct CantorSample {
    std::vector<T> inputs;  // k/n, k = 0..n-1
    std::vector<T> values;  // phi(inputs)
    T left_end{};           // phi(0)
    T right_end{};          // phi(1^-)
    GapStats<T> gaps;
};

/// phi on the grid {k/n}. Values are non-decreasing; for irrational rho
/// they are strictly increasing and accumulate on a Cantor set.
template <Scalar T>
CantorSample<T> cantor_sample(const Params<T>& p, const RhoValue<T>& rho, std::int64_t n, double tol = 1e-12) {
    if (n < 2) {
        throw DomainError(DomainError::Kind::argument, "n >= 2");
    }
    CantorSample<T> out;
    out.inputs.reserve(static_cast<std::size_t>(n));
    out.values.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        out.inputs.push_back(num::from_ratio<T>(k, n));
        if (rho.is_exact()) {
            out.values.push_back(phi_at(p, rho.fraction(), num::ratio(k, n)));
        } else {
            out.values.push_back(phi_eval(p, rho, out.inputs.back(), tol));
        }
    }
    out.left_end = out.values.front();
    out.right_end = phi_left_limit(p, rho, T(1), tol);

    T sum(0);
    for (std::size_t i = 1; i < out.values.size(); ++i) {
        const T gap = out.values[i] - out.values[i - 1];
        if (i == 1 || gap < out.gaps.min_gap) out.gaps.min_gap = gap;
        if (i == 1 || gap > out.gaps.max_gap) out.gaps.max_gap = gap;
        if (num::to_double(gap) <= 10.0 * tol) ++out.gaps.flat_gaps;
        sum += gap;
    }
    out.gaps.mean_gap = sum / T(static_cast<std::int64_t>(out.values.size() - 1));
    return out;
}

/// Points f^k(x) for burn_in <= k < burn_in + samples, sorted, with values
/// closer than `resolution` merged. resolution = 0 keeps every distinct value.
template <Scalar T>
std::vector<T> omega_limit(const Params<T>& p, T x, std::int64_t burn_in, std::int64_t samples,
                           const T& resolution) {
    if (burn_in < 1 || samples < 1) {
        throw DomainError(DomainError::Kind::argument, "burn_in >= 1 and samples >= 1");
    }
    for (std::int64_t k = 0; k < burn_in; ++k) {
        x = eval(p, x);
    }
    std::vector<T> pts;
    pts.reserve(static_cast<std::size_t>(samples));
    for (std::int64_t k = 0; k < samples; ++k) {
        pts.push_back(x);
        x = eval(p, x);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<T> out;
    for (const T& v : pts) {
        if (out.empty() || v - out.back() > resolution) {
            out.push_back(v);
        }
    }
    return out;
}

template <Scalar T>
std::vector<T> omega_limit(const Params<T>& p, const T& x, std::int64_t burn_in, std::int64_t samples) {
    if constexpr (is_exact_v<T>) {
        return omega_limit(p, x, burn_in, samples, T(0));
    } else {
        return omega_limit(p, x, burn_in, samples, 1e-9);
    }
}

template <Scalar T>
struct ResidualReport {
    T max_residual{};
    /// Grid points where phi({y}) < eta disagrees with {y} < 1 - rho.
    std::int64_t branch_mismatches = 0;
    /// Grid points where phi(y) lies within its error bound of eta, so the
    /// branch of F was taken from {y} < 1 - rho instead of from phi(y).
    std::int64_t ambiguous_points = 0;
    std::int64_t points = 0;
};

/// max over y = k/grid_n of |phi(y + rho) - F(phi(y))|, together with the
/// branch criterion phi({y}) < eta <=> {y} < 1 - rho.
///
/// F jumps at eta, and for irrational rho phi(y) approaches eta as y
/// increases to 1 - rho, so a float phi(y) can fall on the wrong side of eta
/// by less than its own error. Such points are evaluated on the branch the
/// criterion prescribes and counted in ambiguous_points. Exact rotation
/// numbers never hit this case.
template <Scalar T>
ResidualReport<T> conjugacy_residual(const Params<T>& p, const RhoValue<T>& rho, std::int64_t grid_n,
                                     double tol = 1e-12) {
    if (grid_n < 1) {
        throw DomainError(DomainError::Kind::argument, "grid_n >= 1");
    }
    ResidualReport<T> rep;
    const T rho_point = rho.point();
    for (std::int64_t k = 0; k < grid_n; ++k) {
        T at_y, at_shift;
        double err = 0.0;
        bool left_of_turn = false;
        if (rho.is_exact()) {
            const Rational y = num::ratio(k, grid_n);
            const Rational r = num::from_fraction<Rational>(rho.fraction());
            at_y = phi_at(p, rho.fraction(), y);
            at_shift = phi_at(p, rho.fraction(), Rational(y + r));
            left_of_turn = y < Rational(1) - r;
            if constexpr (!is_exact_v<T>) {
                err = 64.0 * std::numeric_limits<double>::epsilon();
            }
        } else {
            const T y = num::from_ratio<T>(k, grid_n);
            const SeriesResult<T> s = phi_eval_with_bound(p, rho, y, tol);
            at_y = s.value;
            at_shift = phi_eval(p, rho, T(y + rho_point), tol);
            left_of_turn = y < T(1) - rho_point;
            err = s.tail_bound;
            if constexpr (!is_exact_v<T>) {
                // Round-off of the summed terms.
                err += 4.0 * static_cast<double>(s.terms_used) * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(at_y));
            }
        }
        const T fr = num::frac(at_y);
        const bool phi_left = fr < p.eta();
        const bool ambiguous = err > 0.0 && std::abs(num::to_double(T(fr - p.eta()))) <= err;
        T image;
        if (ambiguous) {
            ++rep.ambiguous_points;
            image = lift_eval_on_branch(p, at_y, left_of_turn ? MapBranch::left : MapBranch::right);
        } else {
            image = lift_eval(p, at_y);
            if (phi_left != left_of_turn) {
                ++rep.branch_mismatches;
            }
        }
        const T res = num::abs(T(at_shift - image));
        if (k == 0 || res > rep.max_residual) {
            rep.max_residual = res;
        }
        ++rep.points;
    }
    return rep;
}

} // namespace rotkit
