#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "weyl/constraints.hpp"
#include "weyl/masses.hpp"

using namespace weyl;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

WeylSolution flat_solution() { return WeylSolution(HarmonicField::flat()); }
WeylSolution curzon(double m) {
    return WeylSolution(HarmonicField::from_measure(AxisMeasure::curzon(m)));
}
WeylSolution schwarzschild(double m) {
    return WeylSolution(HarmonicField::from_measure(AxisMeasure::schwarzschild_rod(m)));
}
ProfileCurve coord_sphere(int n, double m, double a) {
    const double re = std::sqrt(a * a - 2.0 * m * a);
    return ProfileCurve::from_functions(
        n, [re](double t) { return re * std::sin(t); },
        [m, a](double t) { return (a - m) * std::cos(t); });
}

// Independent oracle: second fundamental form from the ambient metric by
// finite-difference Christoffel symbols, using only the closed Curzon
// expressions for the metric functions.
struct FdA {
    double A_tt, A_pp;
};
FdA fd_second_form(double m, double R, double theta) {
    auto psi = [m](double r, double z) {
        const double R2 = r * r + z * z;
        const double lam = -m * m * r * r / (2.0 * R2 * R2);
        const double nu = -m / std::sqrt(R2);
        return lam - nu;
    };
    auto Bf = [m](double r, double z) {
        return r * std::exp(m / std::hypot(r, z));
    };
    // metric diag(e^{2psi}, e^{2psi}, B^2) in (r, z, phi)
    auto gcomp = [&](int k, double r, double z) {
        if (k == 2) return Bf(r, z) * Bf(r, z);
        return std::exp(2.0 * psi(r, z));
    };
    const double h = 1e-5;
    auto dg = [&](int k, int dir, double r, double z) {  // dir: 0 = d/dr, 1 = d/dz
        if (dir == 0) return (gcomp(k, r + h, z) - gcomp(k, r - h, z)) / (2 * h);
        return (gcomp(k, r, z + h) - gcomp(k, r, z - h)) / (2 * h);
    };
    const double r = R * std::sin(theta), z = R * std::cos(theta);
    // Christoffels of a diagonal metric, derivatives only along (r, z)
    auto Gamma = [&](int k, int i, int j) {
        const double gkk = gcomp(k, r, z);
        double v = 0.0;
        auto d = [&](int comp, int dir) { return dir <= 1 ? dg(comp, dir, r, z) : 0.0; };
        // indices 0=r, 1=z, 2=phi; partials along phi vanish
        if (k == i) v += d(k, j);
        if (k == j) v += d(k, i);
        if (i == j) v -= d(i, k);
        return 0.5 / gkk * v;
    };
    const double rp = R * std::cos(theta), zpp_ = -R * std::cos(theta);
    const double zp = -R * std::sin(theta), rpp = -R * std::sin(theta);
    const double sp = std::hypot(rp, zp);
    // g-unit normal e^{-psi} (-z', r')/s'
    const double ep = std::exp(psi(r, z));
    const double Nr = -zp / sp / ep, Nz = rp / sp / ep;
    // V = sigma'' + Gamma(sigma', sigma')
    const double Vr = rpp + Gamma(0, 0, 0) * rp * rp + 2 * Gamma(0, 0, 1) * rp * zp +
                      Gamma(0, 1, 1) * zp * zp;
    const double Vz = zpp_ + Gamma(1, 0, 0) * rp * rp + 2 * Gamma(1, 0, 1) * rp * zp +
                      Gamma(1, 1, 1) * zp * zp;
    FdA out;
    out.A_tt = -(ep * ep) * (Nr * Vr + Nz * Vz);
    // A_pp = -<N, Gamma^k_{phi phi} e_k>
    const double Gr = Gamma(0, 2, 2), Gz = Gamma(1, 2, 2);
    out.A_pp = -(ep * ep) * (Nr * Gr + Nz * Gz);
    return out;
}
}  // namespace

TEST_CASE("surface jet values") {
    SUBCASE("flat unit sphere") {
        auto jet = surface_jet(flat_solution(), ProfileCurve::sphere(65, 1.0));
        for (int i : {0, 16, 32, 48, 64}) {
            CHECK(jet.A_tt[i] == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(jet.H[i] == doctest::Approx(2.0).epsilon(1e-9));
            CHECK(jet.K[i] == doctest::Approx(1.0).epsilon(1e-8));
        }
        const int mid = 32;
        CHECK(jet.A_pp[mid] ==
              doctest::Approx(std::pow(std::sin(jet.theta[mid]), 2)).epsilon(1e-10));
    }
    SUBCASE("flat sphere radius a") {
        const double a = 2.0;
        auto jet = surface_jet(flat_solution(), ProfileCurve::sphere(65, a));
        CHECK(jet.K[20] == doctest::Approx(1.0 / (a * a)).epsilon(1e-9));
        CHECK(jet.H[20] == doctest::Approx(2.0 / a).epsilon(1e-10));
    }
    SUBCASE("curzon sphere against the FD-Christoffel oracle") {
        auto jet = surface_jet(curzon(1.0), ProfileCurve::sphere(65, 3.0));
        for (int i : {10, 25, 32, 50}) {
            const auto fd = fd_second_form(1.0, 3.0, jet.theta[i]);
            CHECK(jet.A_tt[i] == doctest::Approx(fd.A_tt).epsilon(1e-5));
            CHECK(jet.A_pp[i] == doctest::Approx(fd.A_pp).epsilon(1e-5));
        }
    }
    SUBCASE("trace identity") {
        auto jet = surface_jet(schwarzschild(1.0), coord_sphere(65, 1.0, 4.0));
        for (int i = 0; i < jet.n; ++i)
            CHECK(std::fabs(jet.trace_A(i) - jet.H[i]) < 1e-10);
    }
    SUBCASE("gauss-bonnet on the unit sphere jet") {
        auto jet = surface_jet(flat_solution(), ProfileCurve::sphere(65, 1.0));
        auto g = grid_for(65);
        std::vector<double> kd(65);
        for (int i = 0; i < 65; ++i) kd[i] = jet.K[i] * jet.alpha[i] * jet.beta[i];
        const double total = 2.0 * kPi * g->integrate(kd);
        CHECK(total == doctest::Approx(4.0 * kPi).epsilon(1e-8));
    }
}

TEST_CASE("hamiltonian identity") {
    SUBCASE("flat sphere vanishes") {
        auto rep = hamiltonian_residual(surface_jet(flat_solution(), ProfileCurve::sphere(65, 1.0)));
        CHECK(rep.sup_residual < 1e-10);
    }
    SUBCASE("schwarzschild pair converges under refinement") {
        auto sol = schwarzschild(1.0);
        auto pair = verify_with_refinement(sol, coord_sphere(65, 1.0, 4.0),
                                           coord_sphere(129, 1.0, 4.0));
        CHECK(pair.hamiltonian.sup_residual < 1e-6);
        CHECK(pair.hamiltonian.refinement_slope > 2.0);
    }
    SUBCASE("corrupted field is detected") {
        JetOptions bad;
        bad.corrupt_nu_in_H = 1.1;
        auto rep = hamiltonian_residual(surface_jet(curzon(1.0), ProfileCurve::sphere(65, 3.0), bad));
        CHECK(rep.sup_residual > 1e-2);
    }
}

TEST_CASE("momentum identity") {
    SUBCASE("flat codazzi on a sphere") {
        auto rep = momentum_residual(surface_jet(flat_solution(), ProfileCurve::sphere(65, 1.0)));
        CHECK(rep.sup_residual < 1e-10);
    }
    SUBCASE("flat codazzi on a deformed curve") {
        // the arclength element of this curve has complex branch points close
        // to the real axis, so N = 65 leaves ~1e-6 truncation; N = 129
        // resolves it
        auto mk = [](int n) {
            return ProfileCurve::from_functions(
                n, [](double t) { return std::sin(t) * (1.0 + 0.15 * std::cos(2.0 * t)); },
                [](double t) { return std::cos(t) + 0.1 * std::cos(2.0 * t); });
        };
        auto rep65 = momentum_residual(surface_jet(flat_solution(), mk(65)));
        auto rep129 = momentum_residual(surface_jet(flat_solution(), mk(129)));
        CHECK(rep65.sup_residual < 1e-4);
        CHECK(rep129.sup_residual < 1e-9);
        CHECK(rep129.sup_residual < rep65.sup_residual / 100.0);
    }
    SUBCASE("curzon sphere R=2") {
        auto rep = momentum_residual(surface_jet(curzon(1.0), ProfileCurve::sphere(65, 2.0)));
        CHECK(rep.sup_residual < 1e-5);
    }
    SUBCASE("biased normal derivative is detected on an asymmetric curve") {
        JetOptions bias;
        bias.corrupt_normal_u_bias = 0.01;
        auto c = ProfileCurve::from_functions(
            65, [](double t) { return 1.5 * std::sin(t); },
            [](double t) { return 1.5 * std::cos(t) + 0.6; });
        auto rep = momentum_residual(surface_jet(curzon(1.0), c, bias));
        CHECK(rep.sup_residual > 1e-3);
    }
}

TEST_CASE("conformal trace identity") {
    SUBCASE("flat is exact") {
        std::vector<std::pair<double, double>> pts{{1.0, 0.0}, {2.0, 1.0}};
        auto rep = conformal_scalar_residual(flat_solution(), pts);
        CHECK(rep.sup_residual == 0.0);
    }
    SUBCASE("curzon at spread points") {
        std::vector<std::pair<double, double>> pts;
        // deterministic pseudo-random points in [0.5, 3]^2
        unsigned s = 12345;
        auto next = [&s] {
            s = 1664525u * s + 1013904223u;
            return 0.5 + 2.5 * (s % 10000) / 10000.0;
        };
        for (int k = 0; k < 10; ++k) {
            const double r = next(), z = next();
            pts.push_back({r, z});
        }
        auto rep = conformal_scalar_residual(curzon(1.0), pts);
        CHECK(rep.sup_residual < 1e-7);
    }
    SUBCASE("non-harmonic injection is detected") {
        std::vector<std::pair<double, double>> pts{{1.0, 0.5}, {1.5, 1.0}, {2.0, 0.2}};
        auto rep = conformal_scalar_residual(
            [](double r, double z) {
                PotentialJet j;
                const double R2 = r * r + z * z, R = std::sqrt(R2), R3 = R2 * R, R5 = R3 * R2;
                j.nu = -1.0 / R + 0.05 * r * r;
                j.nu_r = r / R3 + 0.1 * r;
                j.nu_z = z / R3;
                j.nu_rr = 1.0 / R3 - 3 * r * r / R5 + 0.1;
                j.nu_rz = -3 * r * z / R5;
                j.nu_zz = 1.0 / R3 - 3 * z * z / R5;
                return j;
            },
            [](double, double) { return 0.0; }, pts);
        CHECK(rep.sup_residual > 1e-2);
    }
}

TEST_CASE("refinement order across solutions") {
    // order >= 2 for measure-backed pairs (spectral on analytic data plus
    // resolution-coupled quadrature)
    auto sol = curzon(1.0);
    auto pair = verify_with_refinement(sol, ProfileCurve::sphere(65, 3.0),
                                       ProfileCurve::sphere(129, 3.0));
    CHECK(pair.hamiltonian.refinement_slope > 2.0);
    CHECK(pair.momentum.refinement_slope > 2.0);
    CHECK(pair.hamiltonian.sup_residual / std::pow(2.0, pair.hamiltonian.refinement_slope) <
          pair.hamiltonian.sup_residual / 4.0);
}
