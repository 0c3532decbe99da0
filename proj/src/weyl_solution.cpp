#include "weyl/weyl_solution.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "weyl/errors.hpp"
#include "weyl/quadrature.hpp"

namespace weyl {

WeylConfig WeylConfig::from_json_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    WeylConfig c;
    c.r_anchor_factor = doc.value("r_anchor_factor", c.r_anchor_factor);
    c.quad_tol = doc.value("quad_tol", c.quad_tol);
    return c;
}

LambdaJet lambda_jet_from_nu(const PotentialJet& j, double r) {
    LambdaJet l;
    l.lr = r * (j.nu_r * j.nu_r - j.nu_z * j.nu_z);
    l.lz = 2.0 * r * j.nu_r * j.nu_z;
    l.lrr = (j.nu_r * j.nu_r - j.nu_z * j.nu_z) +
            2.0 * r * (j.nu_r * j.nu_rr - j.nu_z * j.nu_rz);
    l.lrz = 2.0 * r * (j.nu_r * j.nu_rz - j.nu_z * j.nu_zz);
    l.lzr = 2.0 * j.nu_r * j.nu_z + 2.0 * r * (j.nu_rr * j.nu_z + j.nu_r * j.nu_rz);
    l.lzz = 2.0 * r * (j.nu_rz * j.nu_z + j.nu_r * j.nu_zz);
    return l;
}

WeylSolution::WeylSolution(HarmonicField field, WeylConfig config)
    : field_(std::move(field)), cfg_(config) {
    r_anchor_ = cfg_.r_anchor_factor * (field_.support_radius() + 1.0);
}

double WeylSolution::monopole_lambda(double r, double z) const {
    const double m = field_.decay_mass();
    const double zc = field_.center();
    const double rho2 = r * r + (z - zc) * (z - zc);
    return -m * m * r * r / (2.0 * rho2 * rho2);
}

WeylSolution::LambdaValue WeylSolution::lambda_quadrature(double r, double z, LambdaPath path,
                                                          double tol) const {
    if (tol < 0.0) tol = cfg_.quad_tol;
    LambdaValue out;
    const double m = field_.decay_mass();
    out.tail_budget = 4.0 * m * m / (r_anchor_ * r_anchor_);
    if (field_.empty()) return out;
    if (field_.distance_to_support(r, z) < 1e300 &&
        field_.is_measure_backed() &&
        field_.distance_to_support(r, z) <= 2.0 * field_.measure().epsilon_support()) {
        std::ostringstream os;
        os << "lambda path cannot reach (r=" << r << ", z=" << z << ") with required clearance";
        throw PathBlocked(os.str());
    }
    const double ra = std::fabs(r);
    std::size_t evals = 0;

    auto dlam_r = [&](double rr, double zz) {
        PotentialJet j = field_.jet(rr, zz);
        return rr * (j.nu_r * j.nu_r - j.nu_z * j.nu_z);
    };
    auto dlam_z = [&](double rr, double zz) {
        PotentialJet j = field_.jet(rr, zz);
        return 2.0 * rr * j.nu_r * j.nu_z;
    };

    double acc = monopole_lambda(r_anchor_, z);
    if (path == LambdaPath::horizontal) {
        // anchor (R_A, z) -> (r, z)
        std::size_t n = 0;
        acc += integrate_simpson([&](double rr) { return dlam_r(rr, z); }, r_anchor_, ra, tol, 52,
                                 &n);
        evals += n;
    } else {
        // Same anchor, rectangular detour high above the support and back
        // down near the axis; tests closedness of the lambda form.
        const double rk = std::max(ra, 0.35 * (field_.support_radius() + 1.0));
        const double zd = field_.center() + 0.6 * r_anchor_;
        std::size_t n1 = 0, n2 = 0, n3 = 0, n4 = 0;
        acc += integrate_simpson([&](double zz) { return dlam_z(r_anchor_, zz); }, z, zd, tol, 52,
                                 &n1);
        acc += integrate_simpson([&](double rr) { return dlam_r(rr, zd); }, r_anchor_, rk, tol,
                                 52, &n2);
        acc += integrate_simpson([&](double zz) { return dlam_z(rk, zz); }, zd, z, tol, 52, &n3);
        acc += integrate_simpson([&](double rr) { return dlam_r(rr, z); }, rk, ra, tol, 52, &n4);
        evals += n1 + n2 + n3 + n4;
    }
    out.value = acc;
    out.evals = evals;
    return out;
}

double WeylSolution::lambda_closed(double r, double z) const {
    if (!has_closed_lambda())
        throw std::logic_error("lambda_closed: field has rod components, use quadrature");
    const auto src = field_.point_sources();
    const double ra = std::fabs(r);
    double lam = 0.0;
    const std::size_t n = src.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double Ai = z - src[i].z;
        const double Ri2 = ra * ra + Ai * Ai;
        if (Ri2 < 1e-28) throw PointOnSupport("lambda evaluation on a source");
        lam += -src[i].strength * src[i].strength * ra * ra / (2.0 * Ri2 * Ri2);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double Aj = z - src[j].z;
            const double Rj2 = ra * ra + Aj * Aj;
            const double d = src[j].z - src[i].z;
            const double cc = 2.0 * src[i].strength * src[j].strength;
            const double RiRj = std::sqrt(Ri2 * Rj2);
            if (std::fabs(d) < 1e-9 * (std::sqrt(Ri2) + std::fabs(d))) {
                // coincident-source limit of the pair term
                lam += -cc * ra * ra / (2.0 * Ri2 * Ri2);
            } else {
                lam += (cc / (d * d)) * ((ra * ra + Ai * Aj) / RiRj - 1.0);
            }
        }
    }
    return lam;
}

double WeylSolution::lambda(double r, double z, double tol) const {
    if (has_closed_lambda()) return lambda_closed(r, z);
    return lambda_quadrature(r, z, LambdaPath::horizontal, tol).value;
}

double WeylSolution::cone_angle_defect(double axis_z) const {
    if (field_.distance_to_support(0.0, axis_z) <= 0.0)
        throw PointOnSupport("cone angle requested on the support");
    return lambda(0.0, axis_z);
}

WeylSolution::MetricComponents WeylSolution::metric_components(double r, double z) const {
    PotentialJet j = field_.jet(r, z);
    const double lam = lambda(r, z);
    MetricComponents mc;
    mc.u = std::exp(j.nu);
    mc.g_rr = std::exp(2.0 * (lam - j.nu));
    mc.g_phiphi = r * r * std::exp(-2.0 * j.nu);
    mc.f = r / mc.u;
    return mc;
}

}  // namespace weyl
