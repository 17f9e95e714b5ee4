// Exact arithmetic end to end: locate the plateau of rotation number 1/2
// for (lambda, mu, b, c) = (1/2, 1, 1, 0), solve rho(a) at a = 3/4 and list
// the attracting 2-cycle.

#include <iostream>

#include "rotkit/rotkit.hpp"

int main() {
    using namespace rotkit;
    using R = Rational;
    const auto p = validate_params<R>(R(1, 2), R(1), R(3, 4), R(1), R(0));

    const auto pl = plateau(p.quad(), 1, 2);
    std::cout << "plateau of 1/2: [" << num::format(pl.a_lo) << ", " << num::format(pl.a_hi) << "]\n";

    const auto cls = classify(p);
    if (cls.kind != LimitClass<R>::Kind::rational_cycle) {
        std::cout << "no cycle\n";
        return 1;
    }
    std::cout << "rho = " << num::format(cls.rho) << "\n";
    for (const R& x : limit_cycle(p, cls.rho).points) {
        std::cout << "  " << num::format(x) << " -> " << num::format(eval(p, x)) << "\n";
    }

    const auto rep = conjugacy_residual(p, RhoValue<R>::exact(cls.rho), 64);
    std::cout << "residual on 64 points: " << num::format(rep.max_residual) << "\n";
}
