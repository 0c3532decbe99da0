#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <cmath>
#include <functional>
#include <vector>

#include "weyl/axis_measure.hpp"

namespace oracles {

// Dense-trapezoid evaluation of nu = -int density(s)/dist ds over [a, b].
inline double rod_potential_trapezoid(const std::function<double(double)>& density, double a,
                                      double b, double r, double z, int n = 2'000'000) {
    double sum = 0.0;
    const double h = (b - a) / n;
    for (int k = 0; k <= n; ++k) {
        const double s = a + k * h;
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        sum += w * density(s) / std::hypot(r, z - s);
    }
    return -sum * h;
}

// Central finite differences of a scalar field of (r, z).
struct FdJet {
    double f, fr, fz, frr, frz, fzz;
};

inline FdJet fd_jet(const std::function<double(double, double)>& f, double r, double z,
                    double h = 1e-5) {
    FdJet j;
    j.f = f(r, z);
    j.fr = (f(r + h, z) - f(r - h, z)) / (2 * h);
    j.fz = (f(r, z + h) - f(r, z - h)) / (2 * h);
    j.frr = (f(r + h, z) - 2 * j.f + f(r - h, z)) / (h * h);
    j.fzz = (f(r, z + h) - 2 * j.f + f(r, z - h)) / (h * h);
    j.frz = (f(r + h, z + h) - f(r + h, z - h) - f(r - h, z + h) + f(r - h, z - h)) / (4 * h * h);
    return j;
}

// Uniform-rod potential in closed form (unit of the classical two-center
// expression), used as an independent cross-check of the quadrature route.
inline double uniform_rod_closed(double kappa, double a, double b, double r, double z) {
    const double R1 = std::hypot(r, z - a);
    const double R2 = std::hypot(r, z - b);
    const double L = b - a;
    return kappa * std::log((R1 + R2 - L) / (R1 + R2 + L));
}

// Same two-center form for lambda of the uniform rod.
inline double uniform_rod_lambda_closed(double kappa, double a, double b, double r, double z) {
    const double R1 = std::hypot(r, z - a);
    const double R2 = std::hypot(r, z - b);
    const double L = b - a;
    return 2.0 * kappa * kappa *
           std::log(((R1 + R2) * (R1 + R2) - L * L) / (4.0 * R1 * R2));
}

}  // namespace oracles
