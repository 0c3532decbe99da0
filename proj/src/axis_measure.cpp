#include "weyl/axis_measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "weyl/errors.hpp"
#include "weyl/quadrature.hpp"

namespace weyl {

namespace {

// Jet of -mass/|x - (0,s)| at (r, z) for a unit point source at axis height s.
inline void add_point_jet(PotentialJet& j, double r, double z, double s, double mass) {
    const double dz = z - s;
    const double d2 = r * r + dz * dz;
    const double d = std::sqrt(d2);
    const double d3 = d2 * d;
    const double d5 = d3 * d2;
    j.nu += -mass / d;
    j.nu_r += mass * r / d3;
    j.nu_z += mass * dz / d3;
    j.nu_rr += mass * (1.0 / d3 - 3.0 * r * r / d5);
    j.nu_rz += mass * (-3.0 * r * dz / d5);
    j.nu_zz += mass * (1.0 / d3 - 3.0 * dz * dz / d5);
}

// Closed-form jet of the unit-density rod on [a, b] (value and gradient; the
// r-r second derivative follows from Euclidean harmonicity).
PotentialJet uniform_rod_jet(double r, double z, double a, double b) {
    PotentialJet j;
    const double ta = a - z, tb = b - z;
    const double da = std::sqrt(r * r + ta * ta);
    const double db = std::sqrt(r * r + tb * tb);
    if (r > 0.0) {
        j.nu = -(std::asinh(tb / r) - std::asinh(ta / r));
        j.nu_r = -tb / (r * db) + ta / (r * da);
        j.nu_z = 1.0 / db - 1.0 / da;
        j.nu_zz = tb / (db * db * db) - ta / (da * da * da);
        j.nu_rz = r * (1.0 / (da * da * da) - 1.0 / (db * db * db));
        // nu_rr + nu_r/r + nu_zz = 0 off the rod
        j.nu_rr = -j.nu_zz - j.nu_r / r;
    } else {
        // On-axis evaluation, z outside [a, b].
        j.nu = (z > b) ? -std::log((z - a) / (z - b)) : -std::log((b - z) / (a - z));
        j.nu_z = 1.0 / db - 1.0 / da;
        j.nu_zz = tb / (db * db * db) - ta / (da * da * da);
        j.nu_r = 0.0;
        j.nu_rz = 0.0;
        j.nu_rr = -0.5 * j.nu_zz;
    }
    return j;
}

// sign convention check: for z > b, uniform_rod_jet.nu < 0 (attractive).

PotentialJet rod_jet(const Rod& rod, double r, double z, double rtol) {
    const double a = rod.z_lo, b = rod.z_hi;
    const double sc = std::clamp(z, a, b);
    const double dist = std::sqrt(r * r + (z - sc) * (z - sc));

    auto kernel = [&](double s) -> std::array<double, 6> {
        const double dz = z - s;
        const double d2 = r * r + dz * dz;
        const double d = std::sqrt(d2);
        const double d3 = d2 * d;
        const double d5 = d3 * d2;
        const double k = rod.density_at(s);
        return {-k / d,
                k * r / d3,
                k * dz / d3,
                k * (1.0 / d3 - 3.0 * r * r / d5),
                k * (-3.0 * r * dz / d5),
                k * (1.0 / d3 - 3.0 * dz * dz / d5)};
    };

    PotentialJet j;
    const bool near = dist < 1e-3 * rod.length();
    if (!near) {
        QuadResult<6> q;
        // Split at the nearest axis point so the adaptive rule localizes
        // around the peak of the kernel.
        if (sc > a && sc < b) {
            auto q1 = integrate_gk<6>(kernel, a, sc, 0.0, rtol);
            auto q2 = integrate_gk<6>(kernel, sc, b, 0.0, rtol);
            for (int m = 0; m < 6; ++m) q.value[m] = q1.value[m] + q2.value[m];
        } else {
            q = integrate_gk<6>(kernel, a, b, 0.0, rtol);
        }
        j.nu = q.value[0];
        j.nu_r = q.value[1];
        j.nu_z = q.value[2];
        j.nu_rr = q.value[3];
        j.nu_rz = q.value[4];
        j.nu_zz = q.value[5];
        return j;
    }

    // Close to the rod: subtract the uniform rod with the local density, whose
    // potential and gradient are closed form; the remainder kernel vanishes
    // linearly at the nearest point.
    const double k0 = rod.density_at(sc);
    PotentialJet u = uniform_rod_jet(r, z, a, b);
    auto rem = [&](double s) -> std::array<double, 3> {
        const double dz = z - s;
        const double d2 = r * r + dz * dz;
        const double d = std::sqrt(d2);
        const double d3 = d2 * d;
        const double k = rod.density_at(s) - k0;
        return {-k / d, k * r / d3, k * dz / d3};
    };
    auto qv = integrate_gk<3>(rem, a, sc, 0.0, rtol);
    auto qw = integrate_gk<3>(rem, sc, b, 0.0, rtol);
    j.nu = k0 * u.nu + qv.value[0] + qw.value[0];
    j.nu_r = k0 * u.nu_r + qv.value[1] + qw.value[1];
    j.nu_z = k0 * u.nu_z + qv.value[2] + qw.value[2];

    // Second derivatives by direct deep-splitting quadrature.
    auto hess = [&](double s) -> std::array<double, 3> {
        const double dz = z - s;
        const double d2 = r * r + dz * dz;
        const double d = std::sqrt(d2);
        const double d3 = d2 * d;
        const double d5 = d3 * d2;
        const double k = rod.density_at(s);
        return {k * (1.0 / d3 - 3.0 * r * r / d5), k * (-3.0 * r * dz / d5),
                k * (1.0 / d3 - 3.0 * dz * dz / d5)};
    };
    auto h1 = integrate_gk<3>(hess, a, sc, 0.0, rtol, 56);
    auto h2 = integrate_gk<3>(hess, sc, b, 0.0, rtol, 56);
    j.nu_rr = h1.value[0] + h2.value[0];
    j.nu_rz = h1.value[1] + h2.value[1];
    j.nu_zz = h1.value[2] + h2.value[2];
    return j;
}

}  // namespace

AxisMeasure::AxisMeasure(std::vector<MeasureComponent> components, double gk_rtol)
    : comps_(std::move(components)), gk_rtol_(gk_rtol) {
    for (const auto& c : comps_) {
        if (const Rod* rod = std::get_if<Rod>(&c)) {
            if (!(rod->z_lo < rod->z_hi))
                throw std::invalid_argument("AxisMeasure: rod needs z_lo < z_hi");
            if (!std::isfinite(rod->density_at(rod->z_lo)) ||
                !std::isfinite(rod->density_at(rod->z_hi)))
                throw std::invalid_argument("AxisMeasure: rod density not finite");
        }
    }
    compute_support();
}

void AxisMeasure::compute_support() {
    if (comps_.empty()) return;
    z_min_ = 1e300;
    z_max_ = -1e300;
    for (const auto& c : comps_) {
        if (const PointMass* p = std::get_if<PointMass>(&c)) {
            z_min_ = std::min(z_min_, p->z0);
            z_max_ = std::max(z_max_, p->z0);
        } else {
            const Rod& rod = std::get<Rod>(c);
            z_min_ = std::min(z_min_, rod.z_lo);
            z_max_ = std::max(z_max_, rod.z_hi);
        }
    }
}

AxisMeasure AxisMeasure::point(double z0, double mass) {
    return AxisMeasure({PointMass{z0, mass}});
}

AxisMeasure AxisMeasure::uniform_rod(double z_lo, double z_hi, double kappa) {
    Rod r;
    r.z_lo = z_lo;
    r.z_hi = z_hi;
    r.density = {kappa, 0.0, 0.0, 0.0};
    return AxisMeasure({MeasureComponent{r}});
}

AxisMeasure AxisMeasure::schwarzschild_rod(double m) { return uniform_rod(-m, m, 0.5); }

AxisMeasure AxisMeasure::curzon(double m) { return point(0.0, m); }

double AxisMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& c : comps_) {
        if (const PointMass* p = std::get_if<PointMass>(&c)) {
            m += p->mass;
        } else {
            const Rod& rod = std::get<Rod>(c);
            // exact integral of the cubic density
            for (int k = 0; k < 4; ++k)
                m += rod.density[k] *
                     (std::pow(rod.z_hi, k + 1) - std::pow(rod.z_lo, k + 1)) / (k + 1);
        }
    }
    return m;
}

double AxisMeasure::center_of_mass() const {
    if (comps_.empty()) return 0.0;
    const double m = total_mass();
    if (std::fabs(m) < 1e-14) return 0.5 * (z_min_ + z_max_);
    double zm = 0.0;
    for (const auto& c : comps_) {
        if (const PointMass* p = std::get_if<PointMass>(&c)) {
            zm += p->mass * p->z0;
        } else {
            const Rod& rod = std::get<Rod>(c);
            for (int k = 0; k < 4; ++k)
                zm += rod.density[k] *
                      (std::pow(rod.z_hi, k + 2) - std::pow(rod.z_lo, k + 2)) / (k + 2);
        }
    }
    return zm / m;
}

double AxisMeasure::support_radius() const {
    if (comps_.empty()) return 0.0;
    return std::max(std::fabs(z_min_), std::fabs(z_max_));
}

double AxisMeasure::distance_to_support(double r, double z) const {
    if (comps_.empty()) return 1e300;
    double d = 1e300;
    for (const auto& c : comps_) {
        if (const PointMass* p = std::get_if<PointMass>(&c)) {
            d = std::min(d, std::hypot(r, z - p->z0));
        } else {
            const Rod& rod = std::get<Rod>(c);
            const double sc = std::clamp(z, rod.z_lo, rod.z_hi);
            d = std::min(d, std::hypot(r, z - sc));
        }
    }
    return d;
}

double AxisMeasure::epsilon_support() const {
    // Deterministic failure zone; floored so a pure point measure still
    // refuses evaluation on top of itself.
    return std::max(1e-12 * support_diameter(), 1e-15);
}

PotentialJet AxisMeasure::jet(double r, double z) const { return jet(r, z, gk_rtol_); }

PotentialJet AxisMeasure::jet(double r, double z, double rtol) const {
    PotentialJet j;
    if (comps_.empty()) return j;
    if (distance_to_support(r, z) <= epsilon_support()) {
        std::ostringstream os;
        os << "potential evaluation on measure support at (r=" << r << ", z=" << z << ")";
        throw PointOnSupport(os.str());
    }
    const double ra = std::fabs(r);
    for (const auto& c : comps_) {
        if (const PointMass* p = std::get_if<PointMass>(&c)) {
            add_point_jet(j, ra, z, p->z0, p->mass);
        } else {
            j += rod_jet(std::get<Rod>(c), ra, z, rtol);
        }
    }
    return j;
}

AxisMeasure AxisMeasure::from_json_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    std::vector<MeasureComponent> comps;
    for (const auto& item : doc.at("components")) {
        const std::string kind = item.at("kind").get<std::string>();
        if (kind == "point") {
            comps.push_back(PointMass{item.at("z0").get<double>(), item.at("mass").get<double>()});
        } else if (kind == "rod") {
            Rod rod;
            rod.z_lo = item.at("z_lo").get<double>();
            rod.z_hi = item.at("z_hi").get<double>();
            auto dens = item.at("density").get<std::vector<double>>();
            if (dens.empty() || dens.size() > 4)
                throw std::invalid_argument("rod density: 1..4 coefficients (degree <= 3)");
            for (std::size_t k = 0; k < dens.size(); ++k) rod.density[k] = dens[k];
            comps.push_back(rod);
        } else {
            throw std::invalid_argument("unknown measure component kind: " + kind);
        }
    }
    double rtol = doc.value("gk_rtol", 1e-12);
    return AxisMeasure(std::move(comps), rtol);
}

AxisMeasure AxisMeasure::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open measure file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string AxisMeasure::to_json_text() const {
    nlohmann::json doc;
    doc["components"] = nlohmann::json::array();
    for (const auto& c : comps_) {
        nlohmann::json item;
        if (const PointMass* p = std::get_if<PointMass>(&c)) {
            item["kind"] = "point";
            item["z0"] = p->z0;
            item["mass"] = p->mass;
        } else {
            const Rod& rod = std::get<Rod>(c);
            item["kind"] = "rod";
            item["z_lo"] = rod.z_lo;
            item["z_hi"] = rod.z_hi;
            item["density"] = std::vector<double>(rod.density.begin(), rod.density.end());
        }
        doc["components"].push_back(item);
    }
    return doc.dump(2);
}

}  // namespace weyl
