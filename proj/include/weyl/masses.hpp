#pragma once

#include <string>

#include "weyl/profile_curve.hpp"
#include "weyl/weyl_solution.hpp"

namespace weyl {

// Mass functionals; geometric units G = c = 1 throughout.
struct MassReport {
    double adm = 0.0;
    double hawking = 0.0;
    double boundary_area = 0.0;        // includes the 2 pi azimuthal factor
    double horizon_equiv_mass = 0.0;   // sqrt(area / 16 pi)

    std::string to_json_text() const;
};

// area = 2 pi * integral alpha beta dtheta
double boundary_area(const BoundaryData& data);

// m_H = sqrt(area/16 pi) (1 - (1/16 pi) integral H^2 dv)
double hawking_mass(const BoundaryData& data);

MassReport mass_report(const WeylSolution& solution, const ProfileCurve& curve);

}  // namespace weyl
