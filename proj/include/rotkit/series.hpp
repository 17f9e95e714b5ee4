#pragma once

// Lacunary series attached to the rotation number:
//
//   sigma(rho)   = sum_{k>=1} (floor((k+1)rho) - floor(k rho)) lambda^k mu^floor(k rho)
//   Psi_rho      = sum_{k>=1} sum_{1<=h<=k rho} lambda^k mu^h = lambda mu sigma / (1 - lambda)
//   Phi_rho(y)   = sum_{k>=0} sum_{0<=l<k rho + y} lambda^k mu^l
//
// At rational rho = p/q the floor sequences are periodic and each series has
// a finite closed form, exact in rational mode. At a point value of rho the
// series are truncated with a certified geometric tail bound.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>

#include "rotkit/errors.hpp"
#include "rotkit/scalar.hpp"

namespace rotkit {

template <Scalar T>
struct ApproxRho {
    T value;
    T radius;
};

/// Rotation number, either an exact reduced fraction p/q with 0 < p < q or a
/// point value with an enclosure radius.
template <Scalar T>
class RhoValue {
public:
    static RhoValue exact(std::int64_t p, std::int64_t q) {
        if (!(q > 1 && p > 0 && p < q) || std::gcd(p, q) != 1) {
            throw DomainError(DomainError::Kind::argument,
                              "coprime 0 < p < q for rho = " + std::to_string(p) + "/" + std::to_string(q));
        }
        return RhoValue(Fraction{p, q});
    }
    static RhoValue exact(const Fraction& f) { return exact(f.p, f.q); }
    static RhoValue approx(T value, T radius = T(0)) {
        if (radius < T(0)) {
            throw DomainError(DomainError::Kind::argument, "radius >= 0");
        }
        return RhoValue(ApproxRho<T>{std::move(value), std::move(radius)});
    }

    bool is_exact() const noexcept { return std::holds_alternative<Fraction>(v_); }
    const Fraction& fraction() const { return std::get<Fraction>(v_); }
    const ApproxRho<T>& approx_value() const { return std::get<ApproxRho<T>>(v_); }

    /// Point value in the active scalar type.
    T point() const {
        return is_exact() ? num::from_fraction<T>(fraction()) : approx_value().value;
    }
    T radius() const { return is_exact() ? T(0) : approx_value().radius; }

private:
    explicit RhoValue(std::variant<Fraction, ApproxRho<T>> v) : v_(std::move(v)) {}
    std::variant<Fraction, ApproxRho<T>> v_;
};

template <Scalar T>
struct SeriesResult {
    T value;
    double tail_bound = 0.0;     // 0 for closed forms
    std::int64_t terms_used = 0;
};

struct SeriesConfig {
    std::int64_t max_terms = 10'000'000;
    /// Ratios at or above 1 - 2^-20 are refused.
    double ratio_margin = 0x1p-20;
};

/// r_{lambda,mu}: 1 if lambda*mu < 1, else -log(lambda)/log(mu). In (0, 1].
template <Scalar T>
double r_bound(const T& lambda, const T& mu) {
    if (lambda * mu < T(1)) {
        return 1.0;
    }
    return -std::log(num::to_double(lambda)) / std::log(num::to_double(mu));
}

/// Exact test p/q < r_{lambda,mu}. For lambda*mu >= 1 the condition
/// p/q < -log(lambda)/log(mu) is equivalent to lambda^q mu^p < 1, which is
/// decided exactly in rational mode and through logarithms in float mode.
template <Scalar T>
bool below_r(const T& lambda, const T& mu, const Fraction& f) {
    if (f.p <= 0) {
        return false;
    }
    if (lambda * mu < T(1)) {
        return f.p < f.q;
    }
    if constexpr (is_exact_v<T>) {
        return num::ipow(lambda, static_cast<std::uint64_t>(f.q)) *
                   num::ipow(mu, static_cast<std::uint64_t>(f.p)) < T(1);
    } else {
        return static_cast<double>(f.q) * std::log(lambda) + static_cast<double>(f.p) * std::log(mu) < 0.0;
    }
}

/// Point test 0 < rho < r_{lambda,mu}.
template <Scalar T>
bool below_r(const T& lambda, const T& mu, const T& rho) {
    if (!(rho > T(0))) {
        return false;
    }
    if (lambda * mu < T(1)) {
        return rho < T(1);
    }
    return num::to_double(rho) * std::log(num::to_double(mu)) + std::log(num::to_double(lambda)) < 0.0;
}

namespace detail {

// Geometric ratio bounding the k-th term of sigma and Phi: lambda*mu^rho for
// mu > 1, lambda otherwise.
inline double term_ratio(double lambda, double mu, double rho) {
    return mu > 1.0 ? lambda * std::pow(mu, rho) : lambda;
}

inline void check_ratio(double ratio, const SeriesConfig& cfg) {
    if (!(ratio < 1.0 - cfg.ratio_margin)) {
        throw ConvergenceError("series ratio " + num::format(ratio) +
                               " too close to 1 for a certified truncation");
    }
}

// sum_{k>=K} (alpha k + beta) r^k
inline double linear_geometric_tail(double alpha, double beta, double r, std::int64_t K, double rK) {
    const double one_minus = 1.0 - r;
    return alpha * (static_cast<double>(K) * rK / one_minus + rK * r / (one_minus * one_minus)) +
           beta * rK / one_minus;
}

// lambda^i mu^j. In double the two factors can overflow and underflow
// separately (mu > 1, large exponents) while the product is moderate.
template <Scalar T>
T power_product(const T& lambda, std::int64_t i, const T& mu, std::int64_t j) {
    const T direct = num::ipow(lambda, static_cast<std::uint64_t>(i)) * num::ipow(mu, static_cast<std::uint64_t>(j));
    if constexpr (!is_exact_v<T>) {
        if (!std::isfinite(direct) || direct == 0.0) {
            return std::exp(static_cast<double>(i) * std::log(lambda) + static_cast<double>(j) * std::log(mu));
        }
    }
    return direct;
}

// lambda^i sum_{l<n} mu^l, with every term formed as a product.
template <Scalar T>
T scaled_power_sum(const T& lambda, std::int64_t i, const T& mu, std::int64_t n) {
    T sum(0);
    if constexpr (is_exact_v<T>) {
        T term = num::ipow(lambda, static_cast<std::uint64_t>(i));
        for (std::int64_t l = 0; l < n; ++l) {
            sum += term;
            term *= mu;
        }
    } else {
        for (std::int64_t l = 0; l < n; ++l) {
            sum += power_product(lambda, i, mu, l);
        }
    }
    return sum;
}

// Running lambda^k sum_{l<n} mu^l and lambda^k mu^n. Only the weighted
// values are stored, so both stay bounded while k and n grow together.
template <Scalar T>
struct WeightedPowerSum {
    const T& lambda;
    const T& mu;
    std::int64_t n;
    T sum;   // lambda^k sum_{l<n} mu^l
    T top;   // lambda^k mu^n

    WeightedPowerSum(const T& l, const T& m, std::int64_t k, std::int64_t n0)
        : lambda(l), mu(m), n(n0), sum(scaled_power_sum(l, k, m, n0)), top(power_product(l, k, m, n0)) {}

    void raise_to(std::int64_t target) {
        while (n < target) {
            sum += top;
            top *= mu;
            ++n;
        }
    }
    void next_k() {
        sum *= lambda;
        top *= lambda;
    }
};

} // namespace detail

namespace detail {

// Partial sums of sum_k (floor((k+1) rho) - floor(k rho)) lambda^k mu^floor(k rho)
// until the geometric tail ratio^(K+1) / (1 - ratio) drops below tol.
template <Scalar T, class FloorAt>
SeriesResult<T> sigma_sum(const T& lambda, const T& mu, double ratio, FloorAt floor_at, double tol,
                          const SeriesConfig& cfg) {
    if (!(tol > 0.0)) {
        throw DomainError(DomainError::Kind::argument, "tol > 0");
    }
    check_ratio(ratio, cfg);
    SeriesResult<T> out{T(0), 0.0, 0};
    std::int64_t floor_k = floor_at(1);
    T weight = power_product(lambda, 1, mu, floor_k);   // lambda^k mu^floor_k
    double ratio_k = ratio;
    for (std::int64_t k = 1;; ++k) {
        const std::int64_t floor_next = floor_at(k + 1);
        if (floor_next > floor_k) {
            out.value += T(floor_next - floor_k) * weight;
        }
        out.terms_used = k;
        ratio_k *= ratio;
        const double tail = ratio_k / (1.0 - ratio);
        if (tail <= tol) {
            out.tail_bound = tail;
            return out;
        }
        if (k >= cfg.max_terms) {
            throw ConvergenceError("sigma_series exceeded " + std::to_string(cfg.max_terms) + " terms");
        }
        for (std::int64_t j = floor_k; j < floor_next; ++j) {
            weight *= mu;
        }
        floor_k = floor_next;
        weight *= lambda;
    }
}

} // namespace detail

/// Truncated sigma at a point value of rho, 0 < rho < r_{lambda,mu}. The
/// floors use the given point value. Terms are bounded by ratio^k with
/// ratio = lambda * max(1, mu)^rho, so the tail after K terms is at most
/// ratio^(K+1) / (1 - ratio).
template <Scalar T>
SeriesResult<T> sigma_series(const T& lambda, const T& mu, const T& rho, double tol,
                             const SeriesConfig& cfg = {}) {
    if (!below_r(lambda, mu, rho)) {
        throw DomainError(DomainError::Kind::argument, "0 < rho < r_{lambda,mu}");
    }
    const double ratio = detail::term_ratio(num::to_double(lambda), num::to_double(mu), num::to_double(rho));
    return detail::sigma_sum<T>(
        lambda, mu, ratio, [&](std::int64_t k) { return num::floor_i64(T(rho * T(k))); }, tol, cfg);
}

/// The same truncated series at rho = p/q with integer floors. A double p/q
/// is not p/q: floor(k * double(7/10)) is 62 at k = 90, so the point-value
/// overload drifts from the closed form once such k fall inside the
/// truncation.
template <Scalar T>
SeriesResult<T> sigma_series(const T& lambda, const T& mu, const Fraction& rho, double tol,
                             const SeriesConfig& cfg = {}) {
    if (!(rho.p > 0 && rho.q > 0) || !below_r(lambda, mu, rho)) {
        throw DomainError(DomainError::Kind::argument, "0 < rho < r_{lambda,mu}");
    }
    const double rd = static_cast<double>(rho.p) / static_cast<double>(rho.q);
    const double ratio = detail::term_ratio(num::to_double(lambda), num::to_double(mu), rd);
    return detail::sigma_sum<T>(
        lambda, mu, ratio, [&](std::int64_t k) { return k * rho.p / rho.q; }, tol, cfg);
}

/// Closed form of sigma at rho = p/q:
/// (1 / (1 - lambda^q mu^p)) sum_{k=1}^{q} (floor((k+1)p/q) - floor(kp/q)) lambda^k mu^floor(kp/q).
template <Scalar T>
T sigma_rational(const T& lambda, const T& mu, const Fraction& rho) {
    const RhoValue<T> checked = RhoValue<T>::exact(rho);
    (void)checked;
    if (!below_r(lambda, mu, rho)) {
        throw DomainError(DomainError::Kind::argument, "p/q < r_{lambda,mu}");
    }
    const auto [p, q] = rho;
    T sum(0);
    T weight = lambda;   // lambda^k mu^floor(kp/q)
    std::int64_t floor_k = p / q;
    for (std::int64_t k = 1; k <= q; ++k) {
        const std::int64_t floor_next = ((k + 1) * p) / q;
        if (floor_next > floor_k) {
            sum += T(floor_next - floor_k) * weight;
            for (std::int64_t j = floor_k; j < floor_next; ++j) {
                weight *= mu;
            }
        }
        floor_k = floor_next;
        weight *= lambda;
    }
    return sum / (T(1) - detail::power_product(lambda, q, mu, p));
}

/// sigma((p/q)^-) = sigma(p/q) - lambda^(q-1) mu^(p-1) (1 - lambda) / (1 - lambda^q mu^p).
template <Scalar T>
T sigma_left_limit(const T& lambda, const T& mu, const Fraction& rho) {
    const T s = sigma_rational(lambda, mu, rho);
    const auto [p, q] = rho;
    const T denom = T(1) - detail::power_product(lambda, q, mu, p);
    return s - detail::power_product(lambda, q - 1, mu, p - 1) * (T(1) - lambda) / denom;
}

/// sigma at an exact or point rotation number. Approximate values must carry
/// radius 0: the floors are discontinuous in rho, so an interval cannot be
/// pushed through them.
template <Scalar T>
SeriesResult<T> sigma(const T& lambda, const T& mu, const RhoValue<T>& rho, double tol,
                      const SeriesConfig& cfg = {}) {
    if (rho.is_exact()) {
        return {sigma_rational(lambda, mu, rho.fraction()), 0.0, rho.fraction().q};
    }
    if (rho.radius() != T(0)) {
        throw DomainError(DomainError::Kind::argument, "rho given as a point value (radius 0)");
    }
    return sigma_series(lambda, mu, rho.point(), tol, cfg);
}

/// Hecke-Mahler series Psi_rho(lambda, mu) = lambda mu sigma / (1 - lambda).
template <Scalar T>
SeriesResult<T> psi(const T& lambda, const T& mu, const RhoValue<T>& rho, double tol,
                    const SeriesConfig& cfg = {}) {
    const T factor = lambda * mu / (T(1) - lambda);
    // The tail of sigma is scaled by the same factor.
    const double fd = num::to_double(factor);
    SeriesResult<T> s = sigma(lambda, mu, rho, tol / std::max(1.0, fd), cfg);
    return {T(factor * s.value), s.tail_bound * fd, s.terms_used};
}

/// Which limit of the inner index set 0 <= l < k rho + y to use. `inclusive`
/// counts 0 <= l <= k rho + y, which is Phi(y^+); it is needed for left
/// limits of phi.
enum class PhiBound { strict, inclusive };

namespace detail {

// Number of integers l >= 0 with l < t (strict) or l <= t (inclusive).
template <Scalar T>
std::int64_t inner_count(const T& t, PhiBound bound) {
    if (bound == PhiBound::strict) {
        return t > T(0) ? num::ceil_i64(t) : 0;
    }
    return t >= T(0) ? num::floor_i64(t) + 1 : 0;
}

} // namespace detail

/// Phi_rho(lambda, mu, y) at an exact rho = p/q with exact y. For k past the
/// first nonempty inner sum, the counts satisfy n_{k+q} = n_k + p, which
/// folds the double sum into q terms:
///
///   sum_i lambda^(k0+i) [ g(n_i) / (1 - lambda^q)
///                         + mu^n_i g(p) lambda^q / ((1 - lambda^q)(1 - lambda^q mu^p)) ]
///
/// with g(n) = sum_{l<n} mu^l. No subtraction of nearly equal terms occurs,
/// so the float evaluation stays accurate for mu near 1.
template <Scalar T>
T phi_series_exact(const T& lambda, const T& mu, const Fraction& rho, const Rational& y,
                   PhiBound bound = PhiBound::strict) {
    const RhoValue<T> checked = RhoValue<T>::exact(rho);
    (void)checked;
    const auto [p, q] = rho;
    const T lq = num::ipow(lambda, static_cast<std::uint64_t>(q));
    const T lqmp = detail::power_product(lambda, q, mu, p);
    if (!(lqmp < T(1))) {
        throw DomainError(DomainError::Kind::argument, "lambda * mu^rho < 1");
    }
    const Rational rho_r = num::ratio(p, q);

    // First k with a nonempty inner sum.
    std::int64_t k0 = 0;
    const Rational start = -y / rho_r;   // t_k > 0  <=>  k > -y/rho
    if (bound == PhiBound::strict) {
        k0 = y > 0 ? 0 : num::floor_i64(start) + 1;
    } else {
        k0 = y >= 0 ? 0 : num::ceil_i64(start);
    }

    const T carry = detail::scaled_power_sum(lambda, q, mu, p) / ((T(1) - lq) * (T(1) - lqmp));
    const T inv = T(1) / (T(1) - lq);

    const auto count_at = [&](std::int64_t k) {
        return detail::inner_count(Rational(rho_r * Rational(Integer(k)) + y), bound);
    };
    detail::WeightedPowerSum<T> g(lambda, mu, k0, count_at(k0));
    T total(0);
    for (std::int64_t i = 0; i < q; ++i) {
        if (i > 0) {
            g.next_k();
            g.raise_to(count_at(k0 + i));
        }
        total += g.sum * inv + g.top * carry;
    }
    return total;
}

/// Truncated Phi_rho(lambda, mu, y) at a point value of rho with
/// lambda * max(1, mu)^rho < 1. The k-th term is at most
/// (k rho + y + 1) max(1, mu)^y ratio^k, whose tail has a closed form.
template <Scalar T>
SeriesResult<T> phi_series(const T& lambda, const T& mu, const T& rho, const T& y, double tol,
                           PhiBound bound = PhiBound::strict, const SeriesConfig& cfg = {}) {
    if (!(rho > T(0) && rho < T(1))) {
        throw DomainError(DomainError::Kind::argument, "0 < rho < 1");
    }
    if (!(tol > 0.0)) {
        throw DomainError(DomainError::Kind::argument, "tol > 0");
    }
    const double l = num::to_double(lambda);
    const double m = num::to_double(mu);
    const double r = num::to_double(rho);
    const double yd = num::to_double(y);
    const double ratio = detail::term_ratio(l, m, r);
    if (!(ratio < 1.0)) {
        throw DomainError(DomainError::Kind::argument, "lambda * mu^rho < 1");
    }
    detail::check_ratio(ratio, cfg);
    const double prefactor = m > 1.0 ? std::pow(m, yd) : 1.0;
    const double beta = std::max(0.0, yd + 1.0);

    SeriesResult<T> out{T(0), 0.0, 0};
    detail::WeightedPowerSum<T> g(lambda, mu, 0, 0);
    double ratio_k = 1.0;
    for (std::int64_t k = 0;; ++k) {
        const T t = rho * T(k) + y;
        const std::int64_t n = detail::inner_count(t, bound);
        if (n > 0) {
            g.raise_to(n);
            out.value += g.sum;
        }
        out.terms_used = k + 1;
        ratio_k *= ratio;
        const double tail = prefactor * detail::linear_geometric_tail(r, beta, ratio, k + 1, ratio_k);
        if (tail <= tol) {
            out.tail_bound = tail;
            return out;
        }
        if (k >= cfg.max_terms) {
            throw ConvergenceError("phi_series exceeded " + std::to_string(cfg.max_terms) + " terms");
        }
        g.next_k();
    }
}

/// Phi at an exact or point rotation number.
template <Scalar T>
SeriesResult<T> phi_series(const T& lambda, const T& mu, const RhoValue<T>& rho, const T& y, double tol,
                           PhiBound bound = PhiBound::strict, const SeriesConfig& cfg = {}) {
    if (rho.is_exact()) {
        return {phi_series_exact(lambda, mu, rho.fraction(), num::to_rational(y), bound), 0.0,
                rho.fraction().q};
    }
    if (rho.radius() != T(0)) {
        throw DomainError(DomainError::Kind::argument, "rho given as a point value (radius 0)");
    }
    return phi_series(lambda, mu, rho.point(), y, tol, bound, cfg);
}

} // namespace rotkit
