#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "weyl/masses.hpp"

using namespace weyl;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

BoundaryData round_sphere_data(int n, double a, double H) {
    BoundaryData bd;
    bd.n = n;
    bd.theta = grid_for(n)->theta();
    bd.alpha.assign(n, a);
    bd.beta.resize(n);
    bd.H.assign(n, H);
    for (int i = 0; i < n; ++i) bd.beta[i] = a * std::sin(bd.theta[i]);
    return bd;
}

ProfileCurve coord_sphere(int n, double m, double a) {
    const double re = std::sqrt(a * a - 2.0 * m * a);
    return ProfileCurve::from_functions(
        n, [re](double t) { return re * std::sin(t); },
        [m, a](double t) { return (a - m) * std::cos(t); });
}
}  // namespace

TEST_CASE("hawking mass") {
    SUBCASE("round unit sphere in flat space") {
        auto bd = round_sphere_data(65, 1.0, 2.0);
        CHECK(boundary_area(bd) == doctest::Approx(4.0 * kPi).epsilon(1e-13));
        CHECK(std::fabs(hawking_mass(bd)) < 1e-13);
    }
    SUBCASE("horizon relation: H = 0, area 16 pi m^2 gives m") {
        const double m = 0.7;
        auto bd = round_sphere_data(65, 2.0 * m, 0.0);
        CHECK(hawking_mass(bd) == doctest::Approx(m).epsilon(1e-13));
    }
    SUBCASE("schwarzschild coordinate spheres carry Hawking mass m") {
        const double m = 1.0;
        WeylSolution rod(HarmonicField::from_measure(AxisMeasure::schwarzschild_rod(m)));
        for (double a : {3.0, 4.0, 6.0, 10.0}) {
            auto bd = induced_boundary_data(rod, coord_sphere(65, m, a));
            CHECK(hawking_mass(bd) == doctest::Approx(m).epsilon(1e-6));
        }
    }
}

TEST_CASE("mass report") {
    SUBCASE("flat plus unit sphere") {
        WeylSolution flat(HarmonicField::flat());
        auto rep = mass_report(flat, ProfileCurve::sphere(65, 1.0));
        CHECK(rep.adm == 0.0);
        CHECK(std::fabs(rep.hawking) < 1e-12);
        CHECK(rep.boundary_area == doctest::Approx(4.0 * kPi).epsilon(1e-12));
        CHECK(rep.horizon_equiv_mass == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("curzon sphere") {
        WeylSolution cz(HarmonicField::from_measure(AxisMeasure::curzon(1.0)));
        auto rep = mass_report(cz, ProfileCurve::sphere(65, 5.0));
        CHECK(rep.adm == doctest::Approx(1.0));
        CHECK(rep.hawking > 0.0);
        CHECK(rep.hawking < 1.0);
    }
    SUBCASE("schwarzschild coordinate sphere a = 4") {
        WeylSolution rod(HarmonicField::from_measure(AxisMeasure::schwarzschild_rod(1.0)));
        auto rep = mass_report(rod, coord_sphere(65, 1.0, 4.0));
        CHECK(rep.adm == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(rep.hawking == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(rep.boundary_area == doctest::Approx(4.0 * kPi * 16.0).epsilon(1e-8));
    }
    SUBCASE("scale covariance in flat space") {
        WeylSolution flat(HarmonicField::flat());
        const double s = 2.3;
        auto r1 = mass_report(flat, ProfileCurve::sphere(65, 1.0));
        auto r2 = mass_report(flat, ProfileCurve::sphere(65, s));
        CHECK(r2.boundary_area == doctest::Approx(s * s * r1.boundary_area).epsilon(1e-12));
        CHECK(std::fabs(r2.hawking) < 1e-12);
    }
    SUBCASE("json carries the units note") {
        WeylSolution flat(HarmonicField::flat());
        auto rep = mass_report(flat, ProfileCurve::sphere(65, 1.0));
        CHECK(rep.to_json_text().find("G=c=1") != std::string::npos);
    }
}
