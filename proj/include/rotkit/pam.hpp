#pragma once

// Evaluation of the circle map f_p, its lift F, the strictly increasing
// completion of F, and orbit iteration.

#include <cstdint>
#include <vector>

#include "rotkit/errors.hpp"
#include "rotkit/params.hpp"
#include "rotkit/scalar.hpp"

namespace rotkit {

enum class MapBranch { left, right };

/// Left iff x < eta; the tie x == eta goes right.
template <Scalar T>
MapBranch branch(const Params<T>& p, const T& x) {
    return x < p.eta() ? MapBranch::left : MapBranch::right;
}

namespace detail {

template <Scalar T>
T eval_branch(const Params<T>& p, MapBranch br, const T& x) {
    if (br == MapBranch::left) {
        return p.lambda() * x + p.a();
    }
    return p.lambda() * p.mu() * (x - p.eta()) + p.c();
}

// f maps [0,1) into [0,1), but a double result can round up to 1 when the
// exact value sits just below 1. Keep it in range.
inline double clamp_unit(double y) {
    return y < 1.0 ? y : std::nextafter(1.0, 0.0);
}
inline const Rational& clamp_unit(const Rational& y) { return y; }

} // namespace detail

/// f_p(x) for x in [0, 1).
template <Scalar T>
T eval(const Params<T>& p, const T& x) {
    if (!(x >= T(0) && x < T(1))) {
        throw DomainError(DomainError::Kind::argument, "0 <= x < 1");
    }
    return detail::clamp_unit(detail::eval_branch(p, branch(p, x), x));
}

/// Left limit f_p(x^-) for x in (0, 1]. At x = eta this is b.
template <Scalar T>
T eval_left_limit(const Params<T>& p, const T& x) {
    if (!(x > T(0) && x <= T(1))) {
        throw DomainError(DomainError::Kind::argument, "0 < x <= 1");
    }
    const MapBranch br = x <= p.eta() ? MapBranch::left : MapBranch::right;
    return detail::eval_branch(p, br, x);
}

/// Lift F with F(x + 1) = F(x) + 1 and {F(x)} = f({x}); the right branch
/// carries one extra unit so that F(x) - x lies in (0, 1).
template <Scalar T>
T lift_eval(const Params<T>& p, const T& x) {
    auto [whole, fr] = num::split(x);
    const MapBranch br = branch(p, fr);
    T y = detail::clamp_unit(detail::eval_branch(p, br, fr));
    y += T(whole);
    if (br == MapBranch::right) {
        y += T(1);
    }
    return y;
}

/// Lift evaluated on a prescribed branch, for points whose position
/// relative to eta is below numerical resolution.
template <Scalar T>
T lift_eval_on_branch(const Params<T>& p, const T& x, MapBranch br) {
    auto [whole, fr] = num::split(x);
    T y = detail::eval_branch(p, br, fr) + T(whole);
    if (br == MapBranch::right) {
        y += T(1);
    }
    return y;
}

/// F(b^-) on the base period, the left end of the bridging segment.
template <Scalar T>
T lift_at_b_minus(const Params<T>& p) {
    // b > eta, so the left limit at b is on the right branch.
    return p.lambda() * p.mu() * (p.b() - p.eta()) + p.c() + T(1);
}

/// Strictly increasing completion of F: equal to F on
/// X = {x : c <= {x} < b}, and affine on each gap [b + k, c + k + 1]
/// joining (b + k, F(b^-) + k) to (c + k + 1, F(c) + k + 1).
template <Scalar T>
T lift_monotone_eval(const Params<T>& p, const T& x) {
    auto [whole, fr] = num::split(x);
    if (fr >= p.c() && fr < p.b()) {
        return lift_eval(p, x);
    }
    // k indexes the gap containing x: fr >= b means x in [b + whole, ...),
    // fr < c means x in (..., c + whole).
    const std::int64_t k = fr >= p.b() ? whole : whole - 1;
    const T x0 = p.b() + T(k);
    const T x1 = p.c() + T(k + 1);
    const T y0 = lift_at_b_minus(p) + T(k);
    const T y1 = p.lambda() * p.c() + p.a() + T(k + 1);
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
}

template <Scalar T>
struct EnterResult {
    std::int64_t steps;
    T value;
};

/// Iterates F until the orbit enters X = {x : c <= {x} < b}. Returns the
/// number of steps and the lift value reached.
template <Scalar T>
EnterResult<T> enter_X(const Params<T>& p, T x, std::int64_t cap = 1'000'000) {
    for (std::int64_t n = 0; n <= cap; ++n) {
        const T fr = num::frac(x);
        if (fr >= p.c() && fr < p.b()) {
            return {n, std::move(x)};
        }
        x = lift_eval(p, x);
    }
    throw IterationLimit("orbit did not enter [c, b) within " + std::to_string(cap) + " steps");
}

template <Scalar T>
struct OrbitSample {
    T start;
    std::vector<T> values;              // F^k(start), k = 0..n
    std::vector<std::int64_t> wraps;    // floor(F^k(start))
};

/// Lift iterates of F from x0.
template <Scalar T>
OrbitSample<T> orbit(const Params<T>& p, const T& x0, std::int64_t n) {
    if (n < 0) {
        throw DomainError(DomainError::Kind::argument, "n >= 0");
    }
    OrbitSample<T> out{x0, {}, {}};
    out.values.reserve(static_cast<std::size_t>(n) + 1);
    out.wraps.reserve(static_cast<std::size_t>(n) + 1);
    T x = x0;
    for (std::int64_t k = 0;; ++k) {
        out.wraps.push_back(num::split(x).whole);
        out.values.push_back(x);
        if (k == n) {
            break;
        }
        x = lift_eval(p, x);
    }
    return out;
}

/// Constant-memory orbit of a lift. The state is kept as an integer count
/// plus a fractional position so that float precision does not degrade as
/// the lift value grows.
template <Scalar T>
class OrbitStream {
public:
    enum class Lift { plain, monotone };

    OrbitStream(const Params<T>& p, const T& x0, Lift lift = Lift::plain)
        : params_(&p), lift_(lift) {
        auto [whole, fr] = num::split(x0);
        whole_ = whole;
        frac_ = fr;
    }

    void step() {
        const T y = lift_ == Lift::plain ? lift_eval(*params_, frac_)
                                         : lift_monotone_eval(*params_, frac_);
        auto [whole, fr] = num::split(y);
        whole_ += whole;
        frac_ = fr;
        ++steps_;
    }

    void advance(std::int64_t n) {
        for (std::int64_t i = 0; i < n; ++i) {
            step();
        }
    }

    std::int64_t steps() const noexcept { return steps_; }
    std::int64_t wraps() const noexcept { return whole_; }
    const T& frac() const noexcept { return frac_; }
    T value() const { return T(whole_) + frac_; }

private:
    const Params<T>* params_;
    Lift lift_;
    std::int64_t whole_ = 0;
    T frac_{};
    std::int64_t steps_ = 0;
};

/// Brute-force rotation number estimate (Fbar^n(x0) - x0) / n using the
/// strictly increasing lift. The error is below 1/n.
template <Scalar T>
double rotation_estimate(const Params<T>& p, const T& x0, std::int64_t n) {
    if (n <= 0) {
        throw DomainError(DomainError::Kind::argument, "n > 0");
    }
    OrbitStream<T> s(p, x0, OrbitStream<T>::Lift::monotone);
    s.advance(n);
    auto [w0, f0] = num::split(x0);
    const double disp = static_cast<double>(s.wraps() - w0) + num::to_double(T(s.frac() - f0));
    return disp / static_cast<double>(n);
}

} // namespace rotkit
