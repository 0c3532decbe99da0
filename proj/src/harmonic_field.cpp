#include "weyl/harmonic_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "weyl/errors.hpp"
#include "weyl/profile_curve.hpp"

namespace weyl {

HarmonicField HarmonicField::from_measure(AxisMeasure m) {
    HarmonicField f;
    f.measure_backed_ = true;
    f.measure_ = std::move(m);
    return f;
}

HarmonicField HarmonicField::from_sources(std::vector<SourceTerm> sources) {
    HarmonicField f;
    f.measure_backed_ = false;
    f.sources_ = std::move(sources);
    return f;
}

double HarmonicField::decay_mass() const {
    if (measure_backed_) return measure_.total_mass();
    double s = 0.0;
    for (const auto& src : sources_) s += src.strength;
    return -s;
}

bool HarmonicField::empty() const {
    return measure_backed_ ? measure_.empty() : sources_.empty();
}

double HarmonicField::support_z_min() const {
    if (measure_backed_) return measure_.support_z_min();
    double m = 1e300;
    for (const auto& s : sources_) m = std::min(m, s.z);
    return sources_.empty() ? 0.0 : m;
}

double HarmonicField::support_z_max() const {
    if (measure_backed_) return measure_.support_z_max();
    double m = -1e300;
    for (const auto& s : sources_) m = std::max(m, s.z);
    return sources_.empty() ? 0.0 : m;
}

double HarmonicField::support_radius() const {
    if (empty()) return 0.0;
    return std::max(std::fabs(support_z_min()), std::fabs(support_z_max()));
}

double HarmonicField::center() const {
    if (empty()) return 0.0;
    if (measure_backed_) return measure_.center_of_mass();
    double m = 0.0, zm = 0.0;
    for (const auto& s : sources_) {
        m += s.strength;
        zm += s.strength * s.z;
    }
    if (std::fabs(m) < 1e-14) return 0.5 * (support_z_min() + support_z_max());
    return zm / m;
}

double HarmonicField::distance_to_support(double r, double z) const {
    if (empty()) return 1e300;
    if (measure_backed_) return measure_.distance_to_support(r, z);
    double d = 1e300;
    for (const auto& s : sources_) d = std::min(d, std::hypot(r, z - s.z));
    return d;
}

PotentialJet HarmonicField::jet(double r, double z) const {
    return jet(r, z, measure_backed_ ? measure_.gk_rtol() : 1e-12);
}

PotentialJet HarmonicField::jet(double r, double z, double gk_rtol) const {
    if (measure_backed_) return measure_.jet(r, z, gk_rtol);
    PotentialJet j;
    if (sources_.empty()) return j;
    const double ra = std::fabs(r);
    for (const auto& s : sources_) {
        const double dz = z - s.z;
        const double d2 = ra * ra + dz * dz;
        if (d2 < 1e-28) {
            std::ostringstream os;
            os << "field evaluation on a source at z=" << s.z;
            throw PointOnSupport(os.str());
        }
        const double d = std::sqrt(d2);
        const double d3 = d2 * d;
        const double d5 = d3 * d2;
        const double c = s.strength;
        j.nu += c / d;
        j.nu_r += -c * ra / d3;
        j.nu_z += -c * dz / d3;
        j.nu_rr += -c * (1.0 / d3 - 3.0 * ra * ra / d5);
        j.nu_rz += c * 3.0 * ra * dz / d5;
        j.nu_zz += -c * (1.0 / d3 - 3.0 * dz * dz / d5);
    }
    return j;
}

bool HarmonicField::has_closed_lambda() const {
    if (!measure_backed_) return true;
    for (const auto& c : measure_.components())
        if (!std::holds_alternative<PointMass>(c)) return false;
    return true;
}

std::vector<SourceTerm> HarmonicField::point_sources() const {
    std::vector<SourceTerm> out;
    if (!measure_backed_) return sources_;
    for (const auto& c : measure_.components()) {
        const PointMass& p = std::get<PointMass>(c);
        out.push_back({p.z0, -p.mass});  // -m/d == c/d with c = -m
    }
    return out;
}

HarmonicField HarmonicField::from_json_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "measure") return from_measure(AxisMeasure::from_json_text(doc.at("measure").dump()));
    if (kind == "sources") {
        std::vector<SourceTerm> src;
        for (const auto& item : doc.at("sources"))
            src.push_back({item.at("z").get<double>(), item.at("c").get<double>()});
        return from_sources(std::move(src));
    }
    throw std::invalid_argument("unknown field kind: " + kind);
}

HarmonicField HarmonicField::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open field file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string HarmonicField::to_json_text() const {
    nlohmann::json doc;
    if (measure_backed_) {
        doc["kind"] = "measure";
        doc["measure"] = nlohmann::json::parse(measure_.to_json_text());
    } else {
        doc["kind"] = "sources";
        doc["sources"] = nlohmann::json::array();
        for (const auto& s : sources_)
            doc["sources"].push_back({{"z", s.z}, {"c", s.strength}});
    }
    return doc.dump(2);
}

FitConfig FitConfig::from_json_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    FitConfig c;
    c.n_sources = doc.value("n_sources", c.n_sources);
    c.margin_frac = doc.value("margin_frac", c.margin_frac);
    c.svd_cutoff = doc.value("svd_cutoff", c.svd_cutoff);
    c.max_condition = doc.value("max_condition", c.max_condition);
    c.residual_tol = doc.value("residual_tol", c.residual_tol);
    return c;
}

DirichletFit solve_exterior_dirichlet(const ProfileCurve& curve,
                                      const std::function<double(double)>& boundary_values,
                                      const FitConfig& config) {
    const int ns = config.n_sources;
    if (ns < 1) throw std::invalid_argument("solve_exterior_dirichlet: n_sources >= 1");

    // Axis sources on the chord between the poles, kept clear of the surface
    // by the margin.
    const double z_top = curve.z_north(), z_bot = curve.z_south();
    const double chord = z_top - z_bot;
    if (chord <= 0.0) throw InvalidCurve("exterior Dirichlet fit: degenerate axis chord");
    const double margin = config.margin_frac * chord;
    std::vector<double> zsrc(ns);
    if (ns == 1) {
        zsrc[0] = 0.5 * (z_top + z_bot);
    } else {
        const double lo = z_bot + margin, hi = z_top - margin;
        for (int j = 0; j < ns; ++j) zsrc[j] = lo + (hi - lo) * j / (ns - 1);
    }

    // Oversampled collocation: 2 n_src Chebyshev-Lobatto theta nodes.
    const int nc = 2 * ns < 5 ? 5 : 2 * ns;
    auto cgrid = grid_for(nc);
    Eigen::MatrixXd A(nc, ns);
    Eigen::VectorXd b(nc);
    for (int i = 0; i < nc; ++i) {
        const double th = cgrid->theta()[i];
        const double ri = curve.r_at(th), zi = curve.z_at(th);
        for (int j = 0; j < ns; ++j) A(i, j) = 1.0 / std::hypot(ri, zi - zsrc[j]);
        b(i) = boundary_values(th);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const double cond = (smin > 0.0) ? smax / smin : 1e300;

    // Truncated-SVD solve with the configured relative cutoff.
    Eigen::VectorXd utb = svd.matrixU().transpose() * b;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(ns);
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > config.svd_cutoff * smax) y(k) = utb(k) / sv(k);
    Eigen::VectorXd c = svd.matrixV() * y;

    std::vector<SourceTerm> sources(ns);
    for (int j = 0; j < ns; ++j) sources[j] = {zsrc[j], c(j)};
    HarmonicField field = HarmonicField::from_sources(sources);

    // Residuals on a finer check grid.
    const int nchk = 4 * ns < 9 ? 9 : 4 * ns;
    auto kgrid = grid_for(nchk);
    double sup = 0.0, ssq = 0.0;
    for (int i = 0; i < nchk; ++i) {
        const double th = kgrid->theta()[i];
        const double ri = curve.r_at(th), zi = curve.z_at(th);
        double v = 0.0;
        for (int j = 0; j < ns; ++j) v += c(j) / std::hypot(ri, zi - zsrc[j]);
        const double res = std::fabs(v - boundary_values(th));
        sup = std::max(sup, res);
        ssq += res * res;
    }

    DirichletFit fit;
    fit.field = std::move(field);
    fit.boundary_residual_sup = sup;
    fit.boundary_residual_l2 = std::sqrt(ssq / nchk);
    fit.condition_estimate = cond;
    if (cond > config.max_condition && sup > config.residual_tol) {
        std::ostringstream os;
        os << "exterior Dirichlet fit ill-conditioned: cond=" << cond << " residual=" << sup;
        throw IllConditioned(os.str());
    }
    return fit;
}

}  // namespace weyl
