// Finds the parameter a at which f has rotation number sqrt(2) - 1 for
// (lambda, mu, b, c) = (0.8, 0.9, 0.9, 0.1), then samples the
// semi-conjugacy phi whose image is the Cantor-like limit set.

#include <cmath>
#include <cstdio>

#include "rotkit/rotkit.hpp"

int main() {
    using namespace rotkit;
    const auto quad = validate_quad<double>(0.8, 0.9, 0.9, 0.1);
    const auto rho = RhoValue<double>::approx(std::sqrt(2.0) - 1.0);

    const double a = a_of_rho(quad, rho, 1e-12);
    std::printf("a = %.12f\n", a);

    const auto p = validate_params<double>(0.8, 0.9, a, 0.9, 0.1);
    const auto sample = cantor_sample(p, rho, 1024);
    std::printf("phi(0+) = %.9f, phi(1-) = %.9f\n", sample.left_end, sample.right_end);
    std::printf("gaps: min %.3e, max %.3e, flat %lld\n", sample.gaps.min_gap, sample.gaps.max_gap,
                static_cast<long long>(sample.gaps.flat_gaps));
}
