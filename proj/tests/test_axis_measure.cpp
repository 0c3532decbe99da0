#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weyl/axis_measure.hpp"
#include "weyl/errors.hpp"

using weyl::AxisMeasure;
using weyl::PotentialJet;

TEST_CASE("total mass") {
    CHECK(AxisMeasure::schwarzschild_rod(1.0).total_mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(AxisMeasure().total_mass() == 0.0);
    CHECK(AxisMeasure::uniform_rod(-2.0, 2.0, 0.3).total_mass() ==
          doctest::Approx(1.2).epsilon(1e-14));

    // cubic density against an independent trapezoid quadrature
    weyl::Rod rod;
    rod.z_lo = -1.0;
    rod.z_hi = 2.0;
    rod.density = {0.1, -0.2, 0.05, 0.01};
    AxisMeasure m({weyl::MeasureComponent{rod}});
    double sum = 0.0;
    const int nq = 1'000'000;
    const double h = 3.0 / nq;
    for (int k = 0; k <= nq; ++k) {
        const double w = (k == 0 || k == nq) ? 0.5 : 1.0;
        sum += w * rod.density_at(-1.0 + k * h);
    }
    CHECK(m.total_mass() == doctest::Approx(sum * h).epsilon(1e-10));
}

TEST_CASE("potential closed forms and quadrature") {
    SUBCASE("curzon point value") {
        auto m = AxisMeasure::curzon(1.0);
        CHECK(m.potential(0.3, 0.4) == doctest::Approx(-2.0).epsilon(1e-14));
    }
    SUBCASE("empty measure") {
        AxisMeasure m;
        const PotentialJet j = m.jet(1.0, 1.0);
        CHECK(j.nu == 0.0);
        CHECK(j.nu_r == 0.0);
        CHECK(j.nu_zz == 0.0);
    }
    SUBCASE("uniform rod against dense trapezoid") {
        auto m = AxisMeasure::schwarzschild_rod(1.0);
        const double got = m.potential(1.0, 0.0);
        const double want = oracles::rod_potential_trapezoid([](double) { return 0.5; }, -1.0,
                                                             1.0, 1.0, 0.0);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
        // and against the two-center closed form
        CHECK(got == doctest::Approx(oracles::uniform_rod_closed(0.5, -1.0, 1.0, 1.0, 0.0))
                         .epsilon(1e-12));
    }
    SUBCASE("cubic density rod against trapezoid") {
        weyl::Rod rod;
        rod.z_lo = -0.5;
        rod.z_hi = 1.5;
        rod.density = {0.4, 0.1, -0.05, 0.02};
        AxisMeasure m({weyl::MeasureComponent{rod}});
        const double got = m.potential(0.7, 0.3);
        const double want = oracles::rod_potential_trapezoid(
            [&](double s) { return rod.density_at(s); }, -0.5, 1.5, 0.7, 0.3);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
    SUBCASE("evaluation on the support is refused") {
        auto m = AxisMeasure::schwarzschild_rod(1.0);
        CHECK_THROWS_AS(m.potential(0.0, 0.5), weyl::PointOnSupport);
        auto p = AxisMeasure::curzon(2.0);
        CHECK_THROWS_AS(p.potential(0.0, 0.0), weyl::PointOnSupport);
    }
}

TEST_CASE("potential derivatives") {
    SUBCASE("curzon gradient on axis") {
        auto m = AxisMeasure::curzon(1.0);
        const PotentialJet j = m.jet(0.0, 1.0);
        CHECK(j.nu_z == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(j.nu_r == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("rod jet against finite differences") {
        auto m = AxisMeasure::schwarzschild_rod(1.0);
        auto f = [&](double r, double z) { return m.potential(r, z); };
        const auto fd = oracles::fd_jet(f, 0.5, 0.7);
        const PotentialJet j = m.jet(0.5, 0.7);
        CHECK(j.nu_r == doctest::Approx(fd.fr).epsilon(1e-8));
        CHECK(j.nu_z == doctest::Approx(fd.fz).epsilon(1e-8));
        CHECK(j.nu_rr == doctest::Approx(fd.frr).epsilon(1e-5));
        CHECK(j.nu_rz == doctest::Approx(fd.frz).epsilon(1e-5));
        CHECK(j.nu_zz == doctest::Approx(fd.fzz).epsilon(1e-5));
    }
    SUBCASE("near-support subtraction scheme") {
        weyl::Rod rod;
        rod.z_lo = -1.0;
        rod.z_hi = 1.0;
        rod.density = {0.5, 0.2, 0.0, 0.0};
        AxisMeasure m({weyl::MeasureComponent{rod}});
        // distance 5e-4 of a rod of length 2 triggers the subtracted scheme
        const double r = 5e-4;
        const double got = m.potential(r, 0.3);
        const double want = oracles::rod_potential_trapezoid(
            [&](double s) { return rod.density_at(s); }, -1.0, 1.0, r, 0.3, 8'000'000);
        CHECK(got == doctest::Approx(want).epsilon(1e-7));
    }
}

TEST_CASE("harmonicity, superposition, symmetry, decay") {
    weyl::Rod rod;
    rod.z_lo = -1.2;
    rod.z_hi = 0.8;
    rod.density = {0.3, 0.0, 0.1, 0.0};
    AxisMeasure mixed({weyl::MeasureComponent{weyl::PointMass{1.5, 0.4}},
                       weyl::MeasureComponent{rod}});

    SUBCASE("axisymmetric harmonicity") {
        for (auto [r, z] : {std::pair{0.4, 0.9}, {1.3, -0.2}, {2.0, 2.0}, {0.05, 1.1}}) {
            const PotentialJet j = mixed.jet(r, z);
            const double lap = j.nu_rr + j.nu_r / r + j.nu_zz;
            const double scale = std::fabs(j.nu_rr) + std::fabs(j.nu_zz) + 1e-30;
            CHECK(std::fabs(lap) / scale < 1e-9);
        }
    }
    SUBCASE("superposition is exact") {
        AxisMeasure a({weyl::MeasureComponent{weyl::PointMass{1.5, 0.4}}});
        AxisMeasure b({weyl::MeasureComponent{rod}});
        const PotentialJet js = mixed.jet(0.9, 0.1);
        const PotentialJet ja = a.jet(0.9, 0.1);
        const PotentialJet jb = b.jet(0.9, 0.1);
        CHECK(js.nu == doctest::Approx(ja.nu + jb.nu).epsilon(1e-14));
        CHECK(js.nu_rz == doctest::Approx(ja.nu_rz + jb.nu_rz).epsilon(1e-12));
    }
    SUBCASE("even symmetry for symmetric measures") {
        auto m = AxisMeasure::schwarzschild_rod(0.7);
        CHECK(m.potential(0.8, 0.6) == doctest::Approx(m.potential(0.8, -0.6)).epsilon(1e-12));
    }
    SUBCASE("far-field decay to -mass/R") {
        const double mass = mixed.total_mass();
        const double R = 1e3 * (mixed.support_radius() + 1.0);
        const double nu = mixed.potential(R / std::sqrt(2.0), R / std::sqrt(2.0));
        CHECK(std::fabs(nu * R + mass) / std::fabs(mass) < 1e-3);
    }
}

TEST_CASE("json round trip") {
    const std::string text = R"({"components":[
        {"kind":"point","z0":0.5,"mass":1.25},
        {"kind":"rod","z_lo":-1.0,"z_hi":1.0,"density":[0.5]}]})";
    AxisMeasure m = AxisMeasure::from_json_text(text);
    CHECK(m.total_mass() == doctest::Approx(2.25).epsilon(1e-14));
    AxisMeasure m2 = AxisMeasure::from_json_text(m.to_json_text());
    CHECK(m2.potential(1.0, 2.0) == doctest::Approx(m.potential(1.0, 2.0)).epsilon(1e-15));
}
