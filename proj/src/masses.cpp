#include "weyl/masses.hpp"

#include <cmath>

#include <json.hpp>

namespace weyl {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

double boundary_area(const BoundaryData& data) {
    auto g = grid_for(data.n);
    std::vector<double> ab(data.n);
    for (int i = 0; i < data.n; ++i) ab[i] = data.alpha[i] * data.beta[i];
    return 2.0 * kPi * g->integrate(ab);
}

double hawking_mass(const BoundaryData& data) {
    auto g = grid_for(data.n);
    std::vector<double> ab(data.n), h2(data.n);
    for (int i = 0; i < data.n; ++i) {
        ab[i] = data.alpha[i] * data.beta[i];
        h2[i] = data.H[i] * data.H[i] * ab[i];
    }
    const double area = 2.0 * kPi * g->integrate(ab);
    const double int_h2 = 2.0 * kPi * g->integrate(h2);
    return std::sqrt(area / (16.0 * kPi)) * (1.0 - int_h2 / (16.0 * kPi));
}

MassReport mass_report(const WeylSolution& solution, const ProfileCurve& curve) {
    MassReport rep;
    BoundaryData bd = induced_boundary_data(solution, curve);
    rep.adm = solution.adm_mass();
    rep.hawking = hawking_mass(bd);
    rep.boundary_area = boundary_area(bd);
    rep.horizon_equiv_mass = std::sqrt(rep.boundary_area / (16.0 * kPi));
    return rep;
}

std::string MassReport::to_json_text() const {
    nlohmann::json doc;
    doc["adm"] = adm;
    doc["hawking"] = hawking;
    doc["boundary_area"] = boundary_area;
    doc["horizon_equiv_mass"] = horizon_equiv_mass;
    doc["units"] = "G=c=1";
    return doc.dump(2);
}

}  // namespace weyl
