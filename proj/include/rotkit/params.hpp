#pragma once

// Parameter domain of the two-branch piecewise affine maps
//
//     f(x) = lambda * x + a                      for 0 <= x < eta
//     f(x) = lambda * mu * (x - eta) + c         for eta <= x < 1
//
// with eta = (b - a) / lambda. QuadParams holds (lambda, mu, b, c); Params
// adds the free coordinate a, which ranges over the open interval
// (b - b*lambda, d_bound).

#include <string>

#include "rotkit/errors.hpp"
#include "rotkit/scalar.hpp"

namespace rotkit {

template <Scalar T>
class QuadParams;
template <Scalar T>
class Params;

template <Scalar T>
QuadParams<T> validate_quad(T lambda, T mu, T b, T c);
template <Scalar T>
Params<T> validate_params(T lambda, T mu, T a, T b, T c);

template <Scalar T>
class QuadParams {
public:
    const T& lambda() const noexcept { return lambda_; }
    const T& mu() const noexcept { return mu_; }
    const T& b() const noexcept { return b_; }
    const T& c() const noexcept { return c_; }

    /// True when lambda * mu < 1, i.e. the regime where r_{lambda,mu} = 1.
    bool contracting_product() const { return lambda_ * mu_ < T(1); }

private:
    QuadParams(T lambda, T mu, T b, T c)
        : lambda_(std::move(lambda)), mu_(std::move(mu)), b_(std::move(b)), c_(std::move(c)) {}

    T lambda_, mu_, b_, c_;

    friend QuadParams validate_quad<T>(T, T, T, T);
};

/// Checks membership in the four-parameter domain:
/// 0 < lambda < 1, mu > 0, 0 <= c < b <= 1, and
/// (lambda*mu <= 1 or mu*(1-b) <= 1-c). Reports the first violated condition.
template <Scalar T>
QuadParams<T> validate_quad(T lambda, T mu, T b, T c) {
    using K = DomainError::Kind;
    if (!(lambda > T(0))) throw DomainError(K::quad, "0 < lambda");
    if (!(lambda < T(1))) throw DomainError(K::quad, "lambda < 1");
    if (!(mu > T(0))) throw DomainError(K::quad, "mu > 0");
    if (!(c >= T(0))) throw DomainError(K::quad, "0 <= c");
    if (!(c < b)) throw DomainError(K::quad, "c < b");
    if (!(b <= T(1))) throw DomainError(K::quad, "b <= 1");
    if (!(lambda * mu <= T(1) || mu * (T(1) - b) <= T(1) - c)) {
        throw DomainError(K::quad, "lambda*mu <= 1 or mu*(1-b) <= 1-c");
    }
    return QuadParams<T>(std::move(lambda), std::move(mu), std::move(b), std::move(c));
}

/// Upper end of the admissible a-interval:
/// b - c*lambda when lambda*mu < 1, else (1-lambda)(mu*b - c)/(mu - 1).
template <Scalar T>
T d_bound(const QuadParams<T>& q) {
    const T& l = q.lambda();
    const T& m = q.mu();
    if (q.contracting_product()) {
        return q.b() - q.c() * l;
    }
    return (T(1) - l) * (m * q.b() - q.c()) / (m - T(1));
}

/// Affine coordinate a -> (a - c(1-lambda)) / (b - c) that carries the
/// a-interval of q onto the a-interval of the normalized family b=1, c=0.
template <Scalar T>
T delta_coord(const QuadParams<T>& q, const T& a) {
    return (a - q.c() * (T(1) - q.lambda())) / (q.b() - q.c());
}

/// Inverse of delta_coord.
template <Scalar T>
T delta_coord_inverse(const QuadParams<T>& q, const T& delta) {
    return delta * (q.b() - q.c()) + q.c() * (T(1) - q.lambda());
}

template <Scalar T>
class Params {
public:
    const QuadParams<T>& quad() const noexcept { return quad_; }
    const T& lambda() const noexcept { return quad_.lambda(); }
    const T& mu() const noexcept { return quad_.mu(); }
    const T& a() const noexcept { return a_; }
    const T& b() const noexcept { return quad_.b(); }
    const T& c() const noexcept { return quad_.c(); }
    /// Break point (b - a) / lambda, computed once so branch selection is
    /// deterministic in float mode.
    const T& eta() const noexcept { return eta_; }
    const T& d_bound() const noexcept { return d_bound_; }

private:
    Params(QuadParams<T> quad, T a, T eta, T d)
        : quad_(std::move(quad)), a_(std::move(a)), eta_(std::move(eta)), d_bound_(std::move(d)) {}

    QuadParams<T> quad_;
    T a_, eta_, d_bound_;

    friend Params validate_params<T>(T, T, T, T, T);
};

/// Validates (lambda, mu, a, b, c) through the interval form
/// b - b*lambda < a < d_bound. When a is too large the message names the
/// first of a < b - c*lambda and (1-lambda)(c - mu*b) < (1-mu)*a that fails.
template <Scalar T>
Params<T> validate_params(T lambda, T mu, T a, T b, T c) {
    using K = DomainError::Kind;
    QuadParams<T> quad = validate_quad(std::move(lambda), std::move(mu), std::move(b), std::move(c));
    const T& l = quad.lambda();
    const T& bb = quad.b();
    const T& cc = quad.c();
    T d = d_bound(quad);
    if (!(bb - bb * l < a)) {
        throw DomainError(K::a_interval, "b - b*lambda < a");
    }
    if (!(a < d)) {
        if (!(a < bb - cc * l)) {
            throw DomainError(K::a_interval, "a < b - c*lambda");
        }
        throw DomainError(K::a_interval, "(1-lambda)(c - mu*b) < (1-mu)*a");
    }
    T eta = (bb - a) / l;
    if (!(cc < eta && eta < bb)) {
        // Only reachable through float round-off at the interval ends.
        throw DomainError(K::a_interval, "c < eta < b");
    }
    return Params<T>(std::move(quad), std::move(a), std::move(eta), std::move(d));
}

/// Checks inequalities (2) and (3) exactly as written, without going
/// through d_bound. Used to cross-check validate_params.
template <Scalar T>
bool satisfies_raw_inequalities(const QuadParams<T>& q, const T& a) {
    const T& l = q.lambda();
    const T& m = q.mu();
    const bool two = q.b() - q.b() * l < a && a < q.b() - q.c() * l;
    const bool three = (T(1) - l) * (q.c() - m * q.b()) < (T(1) - m) * a;
    return two && three;
}

/// Projection onto the normalized family: (lambda, mu, delta_coord(a), 1, 0).
template <Scalar T>
Params<T> theta(const Params<T>& p) {
    return validate_params<T>(p.lambda(), p.mu(), delta_coord(p.quad(), p.a()), T(1), T(0));
}

template <Scalar T>
Params<T> with_a(const Params<T>& p, T a) {
    return validate_params<T>(p.lambda(), p.mu(), std::move(a), p.b(), p.c());
}

} // namespace rotkit
