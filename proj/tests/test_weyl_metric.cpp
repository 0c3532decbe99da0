#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weyl/errors.hpp"
#include "weyl/weyl_solution.hpp"

using weyl::AxisMeasure;
using weyl::HarmonicField;
using weyl::WeylSolution;
using Path = weyl::WeylSolution::LambdaPath;

namespace {
WeylSolution make_curzon(double m) {
    return WeylSolution(HarmonicField::from_measure(AxisMeasure::curzon(m)));
}
WeylSolution make_rod(double m) {
    return WeylSolution(HarmonicField::from_measure(AxisMeasure::schwarzschild_rod(m)));
}
double curzon_lambda(double m, double r, double z) {
    const double R2 = r * r + z * z;
    return -m * m * r * r / (2.0 * R2 * R2);
}
}  // namespace

TEST_CASE("lambda evaluation") {
    SUBCASE("flat solution has lambda = 0") {
        WeylSolution flat(HarmonicField::flat());
        CHECK(flat.lambda(1.3, 0.4) == 0.0);
        CHECK(flat.lambda_quadrature(2.0, -1.0).value == 0.0);
    }
    SUBCASE("curzon closed form") {
        auto cz = make_curzon(1.0);
        CHECK(cz.lambda(1.0, 0.0) == doctest::Approx(-0.5).epsilon(1e-13));
        // quadrature route agrees with the closed form
        for (auto [r, z] : {std::pair{0.5, 0.7}, {1.5, -0.9}, {0.2, 2.5}}) {
            const double want = curzon_lambda(1.0, r, z);
            CHECK(cz.lambda_closed(r, z) == doctest::Approx(want).epsilon(1e-13));
            CHECK(cz.lambda_quadrature(r, z, Path::horizontal, 1e-12).value ==
                  doctest::Approx(want).epsilon(1e-8));
        }
    }
    SUBCASE("schwarzschild rod path independence") {
        auto rod = make_rod(1.0);
        const double lh = rod.lambda_quadrature(1.0, 1.0, Path::horizontal, 1e-11).value;
        const double lv = rod.lambda_quadrature(1.0, 1.0, Path::vertical, 1e-11).value;
        CHECK(std::fabs(lh - lv) < 1e-9);
        // Against the classical two-center closed form the absolute offset is
        // the anchor's monopole-truncation bias, within the recorded budget.
        const double closed = oracles::uniform_rod_lambda_closed(0.5, -1.0, 1.0, 1.0, 1.0);
        const auto lval = rod.lambda_quadrature(1.0, 1.0, Path::horizontal, 1e-11);
        CHECK(std::fabs(lval.value - closed) < lval.tail_budget);
        CHECK(std::fabs(lval.value - closed) < 1e-8);
        // a far anchor drives the bias down
        weyl::WeylConfig far;
        far.r_anchor_factor = 400.0;
        WeylSolution rodfar(HarmonicField::from_measure(AxisMeasure::schwarzschild_rod(1.0)), far);
        CHECK(std::fabs(rodfar.lambda_quadrature(1.0, 1.0, Path::horizontal, 1e-12).value -
                        closed) < 1e-11);
    }
    SUBCASE("closedness of the lambda form at random points") {
        auto rod = make_rod(0.8);
        // d/dz lambda_r - d/dr lambda_z = 0 by harmonicity; finite differences
        const double h = 1e-5;
        for (auto [r, z] : {std::pair{0.7, 0.4}, {1.6, -1.2}, {0.4, 1.9}}) {
            auto lr = [&](double rr, double zz) {
                auto j = rod.nu_jet(rr, zz);
                return rr * (j.nu_r * j.nu_r - j.nu_z * j.nu_z);
            };
            auto lz = [&](double rr, double zz) {
                auto j = rod.nu_jet(rr, zz);
                return 2.0 * rr * j.nu_r * j.nu_z;
            };
            const double curl = (lr(r, z + h) - lr(r, z - h)) / (2 * h) -
                                (lz(r + h, z) - lz(r - h, z)) / (2 * h);
            CHECK(std::fabs(curl) < 1e-8);
        }
    }
    SUBCASE("reflection symmetry for symmetric measures") {
        auto rod = make_rod(1.0);
        const double lp = rod.lambda_quadrature(0.9, 0.8, Path::horizontal, 1e-11).value;
        const double lm = rod.lambda_quadrature(0.9, -0.8, Path::horizontal, 1e-11).value;
        CHECK(lp == doctest::Approx(lm).epsilon(1e-9));
    }
}

TEST_CASE("cone angle defect") {
    SUBCASE("schwarzschild rod axis is regular") {
        auto rod = make_rod(1.0);
        CHECK(std::fabs(rod.cone_angle_defect(2.0)) < 1e-8);
        CHECK(std::fabs(rod.cone_angle_defect(-1.4)) < 1e-8);
    }
    SUBCASE("empty measure") {
        WeylSolution flat(HarmonicField::flat());
        CHECK(flat.cone_angle_defect(0.7) == 0.0);
    }
    SUBCASE("single rod of any density keeps a regular axis beyond its ends") {
        // The two-center closed form gives lambda = 0 on the axis outside the
        // rod for every uniform density, so no strut appears there.
        WeylSolution rod(HarmonicField::from_measure(AxisMeasure::uniform_rod(-1.0, 1.0, 0.8)));
        CHECK(std::fabs(oracles::uniform_rod_lambda_closed(0.8, -1.0, 1.0, 1e-14, 1.05)) < 1e-12);
        CHECK(std::fabs(rod.cone_angle_defect(1.05)) < 2e-6);
    }
    SUBCASE("strut between two point masses") {
        // Cone singularity on the bounded axis segment between two particles;
        // the pair term gives lambda = -4 m1 m2 / d^2 there.
        AxisMeasure two({weyl::MeasureComponent{weyl::PointMass{-1.0, 0.5}},
                         weyl::MeasureComponent{weyl::PointMass{1.0, 0.5}}});
        WeylSolution sol(HarmonicField::from_measure(two));
        const double strut = sol.cone_angle_defect(0.0);
        CHECK(std::fabs(strut) > 1e-3);
        CHECK(strut == doctest::Approx(-4.0 * 0.5 * 0.5 / 4.0).epsilon(1e-10));
        // strut value from quadrature agrees with the closed pair term
        const double qh = sol.lambda_quadrature(0.0, 0.0, Path::horizontal, 1e-12).value;
        CHECK(qh == doctest::Approx(strut).epsilon(1e-8));
        // axis beyond both masses is regular
        CHECK(std::fabs(sol.cone_angle_defect(1.8)) < 1e-10);
    }
}

TEST_CASE("metric components") {
    SUBCASE("flat cylindrical") {
        WeylSolution flat(HarmonicField::flat());
        auto mc = flat.metric_components(2.0, 0.0);
        CHECK(mc.g_rr == doctest::Approx(1.0));
        CHECK(mc.g_phiphi == doctest::Approx(4.0));
        CHECK(mc.u == doctest::Approx(1.0));
        CHECK(mc.f == doctest::Approx(2.0));
    }
    SUBCASE("curzon display") {
        auto cz = make_curzon(1.0);
        auto mc = cz.metric_components(1.0, 0.0);
        CHECK(mc.u == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
        CHECK(mc.g_rr == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
        CHECK(mc.g_phiphi == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
        CHECK(mc.f == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    }
    SUBCASE("schwarzschild rod against dense oracles") {
        auto rod = make_rod(1.0);
        const double r = 1.5, z = 0.5;
        const double nu = oracles::rod_potential_trapezoid([](double) { return 0.5; }, -1.0, 1.0,
                                                           r, z);
        const double lam = oracles::uniform_rod_lambda_closed(0.5, -1.0, 1.0, r, z);
        auto mc = rod.metric_components(r, z);
        CHECK(mc.u == doctest::Approx(std::exp(nu)).epsilon(1e-10));
        CHECK(mc.g_rr == doctest::Approx(std::exp(2.0 * (lam - nu))).epsilon(1e-8));
        CHECK(mc.f == doctest::Approx(r * std::exp(-nu)).epsilon(1e-10));
    }
    SUBCASE("positivity of u and f off support") {
        auto rod = make_rod(1.0);
        for (auto [r, z] : {std::pair{0.01, 0.0}, {3.0, -2.0}, {0.5, 1.01}}) {
            auto mc = rod.metric_components(r, z);
            CHECK(mc.u > 0.0);
            CHECK(mc.f > 0.0);
        }
    }
}

TEST_CASE("adm mass") {
    CHECK(make_curzon(0.7).adm_mass() == doctest::Approx(0.7));
    CHECK(WeylSolution(HarmonicField::flat()).adm_mass() == 0.0);
    WeylSolution rod(HarmonicField::from_measure(AxisMeasure::uniform_rod(-2.0, 2.0, 0.5)));
    CHECK(rod.adm_mass() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("lambda tail budget is recorded") {
    auto cz = make_curzon(1.0);
    auto lv = cz.lambda_quadrature(1.0, 0.0);
    CHECK(lv.tail_budget == doctest::Approx(4.0 / (cz.anchor_radius() * cz.anchor_radius())));
    CHECK(lv.evals > 0);
}
