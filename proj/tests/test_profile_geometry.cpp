#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "oracles.hpp"
#include "weyl/errors.hpp"
#include "weyl/profile_curve.hpp"
#include "weyl/weyl_solution.hpp"

using weyl::AxisMeasure;
using weyl::HarmonicField;
using weyl::ProfileCurve;
using weyl::WeylSolution;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

WeylSolution flat_solution() { return WeylSolution(HarmonicField::flat()); }

// Weyl image of the Schwarzschild coordinate sphere of area radius a.
ProfileCurve schwarzschild_sphere_curve(int n, double m, double a) {
    const double re = std::sqrt(a * a - 2.0 * m * a);
    return ProfileCurve::from_functions(
        n, [re](double t) { return re * std::sin(t); },
        [m, a](double t) { return (a - m) * std::cos(t); });
}
}  // namespace

TEST_CASE("curve validation") {
    SUBCASE("sphere is valid") { CHECK_NOTHROW(ProfileCurve::sphere(65, 1.0)); }
    SUBCASE("too few nodes") {
        CHECK_THROWS_AS(ProfileCurve::sphere(21, 1.0), weyl::InvalidCurve);
    }
    SUBCASE("reversed orientation is rejected, not fixed") {
        CHECK_THROWS_AS(ProfileCurve::from_functions(
                            65, [](double t) { return std::sin(t); },
                            [](double t) { return -std::cos(t); }),
                        weyl::InvalidCurve);
    }
    SUBCASE("nonzero pole radius is rejected") {
        CHECK_THROWS_AS(ProfileCurve::from_functions(
                            65, [](double t) { return 0.2 + std::sin(t); },
                            [](double t) { return std::cos(t); }),
                        weyl::InvalidCurve);
    }
    SUBCASE("self-intersecting curve is rejected") {
        // a limaçon-like generator that loops over itself
        CHECK_THROWS_AS(ProfileCurve::from_functions(
                            129, [](double t) { return std::sin(t) * (1.0 + 1.8 * std::cos(2.0 * t)); },
                            [](double t) { return std::cos(t); }),
                        weyl::InvalidCurve);
    }
    SUBCASE("spectral derivatives match finite differences on a smooth curve") {
        auto c = ProfileCurve::from_functions(
            65, [](double t) { return std::sin(t) * (1.0 + 0.1 * std::cos(2.0 * t)); },
            [](double t) { return std::cos(t) + 0.05 * std::cos(2.0 * t); });
        const auto& th = c.theta();
        const int i = 30;
        auto rf = [&](double t) { return std::sin(t) * (1.0 + 0.1 * std::cos(2.0 * t)); };
        const double h = 1e-5;
        const double fd1 = (rf(th[i] + h) - rf(th[i] - h)) / (2 * h);
        const double fd2 = (rf(th[i] + h) - 2 * rf(th[i]) + rf(th[i] - h)) / (h * h);
        CHECK(c.r_d(1)[i] == doctest::Approx(fd1).epsilon(1e-8));
        CHECK(c.r_d(2)[i] == doctest::Approx(fd2).epsilon(1e-5));
    }
}

TEST_CASE("euclidean mean curvature") {
    SUBCASE("unit sphere") {
        auto c = ProfileCurve::sphere(65, 1.0);
        for (int i : {0, 10, 32, 55, 64})
            CHECK(euclid_mean_curvature(c, i) == doctest::Approx(2.0).epsilon(1e-11));
    }
    SUBCASE("sphere radius 3") {
        auto c = ProfileCurve::sphere(65, 3.0);
        CHECK(euclid_mean_curvature(c, 20) == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
    }
    SUBCASE("oblate profile against a 3d finite-difference oracle") {
        // surface (theta, phi) -> (r cos phi, r sin phi, z), r = sin, z = .5 cos
        auto c = ProfileCurve::from_functions(
            65, [](double t) { return std::sin(t); },
            [](double t) { return 0.5 * std::cos(t); });
        // mean curvature from the first/second fundamental forms by FD
        auto X = [&](double t, double p, int k) {
            const double r = std::sin(t), z = 0.5 * std::cos(t);
            const double v[3] = {r * std::cos(p), r * std::sin(p), z};
            return v[k];
        };
        const double t0 = kPi / 2.0, p0 = 0.3, h = 1e-4;
        double Xt[3], Xp[3], Xtt[3], Xpp[3], Xtp[3], N[3];
        for (int k = 0; k < 3; ++k) {
            Xt[k] = (X(t0 + h, p0, k) - X(t0 - h, p0, k)) / (2 * h);
            Xp[k] = (X(t0, p0 + h, k) - X(t0, p0 - h, k)) / (2 * h);
            Xtt[k] = (X(t0 + h, p0, k) - 2 * X(t0, p0, k) + X(t0 - h, p0, k)) / (h * h);
            Xpp[k] = (X(t0, p0 + h, k) - 2 * X(t0, p0, k) + X(t0, p0 - h, k)) / (h * h);
            Xtp[k] = (X(t0 + h, p0 + h, k) - X(t0 + h, p0 - h, k) - X(t0 - h, p0 + h, k) +
                      X(t0 - h, p0 - h, k)) /
                     (4 * h * h);
        }
        N[0] = Xt[1] * Xp[2] - Xt[2] * Xp[1];
        N[1] = Xt[2] * Xp[0] - Xt[0] * Xp[2];
        N[2] = Xt[0] * Xp[1] - Xt[1] * Xp[0];
        const double nn = std::sqrt(N[0] * N[0] + N[1] * N[1] + N[2] * N[2]);
        for (int k = 0; k < 3; ++k) N[k] /= nn;
        double E = 0, F = 0, G = 0, L = 0, M = 0, Nq = 0;
        for (int k = 0; k < 3; ++k) {
            E += Xt[k] * Xt[k];
            F += Xt[k] * Xp[k];
            G += Xp[k] * Xp[k];
            L += Xtt[k] * N[k];
            M += Xtp[k] * N[k];
            Nq += Xpp[k] * N[k];
        }
        // <X_uv, N> is minus the <grad_X N, Y> form used here, and the cross
        // product above points outward
        const double H_fd = -(E * Nq - 2 * F * M + G * L) / (E * G - F * F);
        const int mid = 32;  // theta = pi/2 node
        CHECK(c.theta()[mid] == doctest::Approx(kPi / 2.0));
        CHECK(euclid_mean_curvature(c, mid) == doctest::Approx(H_fd).epsilon(1e-6));
    }
}

TEST_CASE("induced boundary data") {
    SUBCASE("flat unit sphere gives (1, sin, 2) to 1e-10") {
        auto c = ProfileCurve::sphere(65, 1.0);
        auto sol = flat_solution();
        auto bd = induced_boundary_data(sol, c);
        for (int i = 0; i < bd.n; ++i) {
            CHECK(std::fabs(bd.alpha[i] - 1.0) < 1e-10);
            CHECK(std::fabs(bd.beta[i] - std::sin(bd.theta[i])) < 1e-10);
            CHECK(std::fabs(bd.H[i] - 2.0) < 1e-10);
        }
        bd.validate();
    }
    SUBCASE("flat sphere radius a scales") {
        const double a = 2.5;
        auto c = ProfileCurve::sphere(65, a);
        auto sol = flat_solution();
        auto bd = induced_boundary_data(sol, c);
        CHECK(bd.alpha[17] == doctest::Approx(a).epsilon(1e-12));
        CHECK(bd.H[17] == doctest::Approx(2.0 / a).epsilon(1e-12));
    }
    SUBCASE("schwarzschild coordinate sphere against the standard-slice oracle") {
        const double m = 1.0, a = 4.0;
        WeylSolution rod(HarmonicField::from_measure(AxisMeasure::schwarzschild_rod(m)));
        auto c = schwarzschild_sphere_curve(65, m, a);
        auto bd = induced_boundary_data(rod, c);
        const double H_oracle = (2.0 / a) * std::sqrt(1.0 - 2.0 * m / a);
        for (int i = 0; i < bd.n; ++i) {
            CHECK(std::fabs(bd.alpha[i] - a) < 1e-6);
            CHECK(std::fabs(bd.beta[i] - a * std::sin(bd.theta[i])) < 1e-8);
            CHECK(std::fabs(bd.H[i] - H_oracle) < 1e-6);
        }
    }
    SUBCASE("scaling covariance in flat space") {
        const double s = 1.7;
        auto c = ProfileCurve::from_functions(
            65, [](double t) { return std::sin(t) * (1.0 + 0.1 * std::cos(2.0 * t)); },
            [](double t) { return std::cos(t); });
        auto cs = c.scaled(s);
        auto sol = flat_solution();
        auto bd = induced_boundary_data(sol, c);
        auto bds = induced_boundary_data(sol, cs);
        for (int i : {5, 20, 40, 60}) {
            CHECK(bds.alpha[i] == doctest::Approx(s * bd.alpha[i]).epsilon(1e-11));
            CHECK(bds.beta[i] == doctest::Approx(s * bd.beta[i]).epsilon(1e-11));
            CHECK(bds.H[i] == doctest::Approx(bd.H[i] / s).epsilon(1e-10));
        }
    }
    SUBCASE("pole compatibility under refinement") {
        auto sol = WeylSolution(HarmonicField::from_measure(AxisMeasure::curzon(0.5)));
        for (int n : {65, 129}) {
            auto c = ProfileCurve::from_functions(
                n, [](double t) { return 2.0 * std::sin(t) * (1.0 + 0.08 * std::cos(2.0 * t)); },
                [](double t) { return 2.2 * std::cos(t); });
            auto bd = induced_boundary_data(sol, c);
            auto g = weyl::grid_for(n);
            auto bp = g->derivative(bd.beta);
            CHECK(std::fabs(std::fabs(bp[0]) - bd.alpha[0]) < 1e-8);
            CHECK(std::fabs(std::fabs(bp[n - 1]) - bd.alpha[n - 1]) < 1e-8);
        }
    }
}

TEST_CASE("normalize_z") {
    SUBCASE("shifted unit sphere in flat space") {
        auto c = ProfileCurve::from_functions(
            65, [](double t) { return std::sin(t); },
            [](double t) { return std::cos(t) + 5.0; });
        auto sol = flat_solution();
        auto cn = normalize_z(c, sol);
        for (int i : {0, 16, 32, 48, 64})
            CHECK(cn.z()[i] == doctest::Approx(std::cos(cn.theta()[i])).epsilon(1e-11));
    }
    SUBCASE("idempotence") {
        auto c = ProfileCurve::sphere(65, 1.0);
        auto sol = flat_solution();
        auto cn = normalize_z(c, sol);
        CHECK(std::fabs(cn.z()[0] - c.z()[0]) < 1e-12);
    }
    SUBCASE("pear-shaped curve against a trapezoid oracle") {
        auto fr = [](double t) { return std::sin(t); };
        auto fz = [](double t) { return std::cos(t) + 0.2 * std::cos(2.0 * t); };
        auto c = ProfileCurve::from_functions(65, fr, fz);
        auto sol = flat_solution();
        auto cn = normalize_z(c, sol);
        // flat alpha beta = s'(t) r(t); dense trapezoid for the shift
        const int nq = 400000;
        double num = 0.0, den = 0.0;
        const double h = kPi / nq;
        for (int k = 0; k <= nq; ++k) {
            const double t = k * h;
            const double w = (k == 0 || k == nq) ? 0.5 : 1.0;
            const double hh = 1e-6;
            const double rp = (fr(t + hh) - fr(t - hh)) / (2 * hh);
            const double zp = (fz(t + hh) - fz(t - hh)) / (2 * hh);
            const double ab = std::hypot(rp, zp) * fr(t);
            num += w * fz(t) * ab;
            den += w * ab;
        }
        const double shift = -num / den;
        CHECK(cn.z()[32] - c.z()[32] == doctest::Approx(shift).epsilon(1e-8));
    }
    SUBCASE("degenerate area is refused") {
        // beta == 0 cannot arise from a valid curve; exercise the error path
        // through a curve squeezed to numerical zero radius is not possible,
        // so check the induced-area positivity directly instead.
        auto c = ProfileCurve::sphere(65, 1.0);
        auto sol = flat_solution();
        auto bd = induced_boundary_data(sol, c);
        double area = 0.0;
        auto g = weyl::grid_for(65);
        std::vector<double> ab(65);
        for (int i = 0; i < 65; ++i) ab[i] = bd.alpha[i] * bd.beta[i];
        area = g->integrate(ab);
        CHECK(area > 0.0);
    }
}

TEST_CASE("curve csv round trip") {
    auto c = ProfileCurve::from_functions(
        65, [](double t) { return 1.3 * std::sin(t); },
        [](double t) { return 1.1 * std::cos(t) + 0.1 * std::cos(2.0 * t); });
    c.save_csv("/tmp/weyl_test_curve.csv");
    auto c2 = ProfileCurve::load_csv("/tmp/weyl_test_curve.csv");
    for (int i = 0; i < 65; ++i) {
        CHECK(c2.r()[i] == doctest::Approx(c.r()[i]).epsilon(1e-15));
        CHECK(c2.z()[i] == doctest::Approx(c.z()[i]).epsilon(1e-15));
    }
}
