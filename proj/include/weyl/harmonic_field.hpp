#pragma once

#include <functional>
#include <string>
#include <vector>

#include "weyl/axis_measure.hpp"

namespace weyl {

class ProfileCurve;

// One fundamental solution on the axis: contributes strength / |x - (0, z)|.
struct SourceTerm {
    double z = 0.0;
    double strength = 0.0;
};

// Axisymmetric Euclidean-harmonic function, either generated by an axis
// measure or by a finite expansion in axis point sources.  Harmonicity off
// the support is exact in both representations.  Immutable; evaluation pure.
class HarmonicField {
public:
    HarmonicField() = default;  // the flat field nu = 0

    static HarmonicField from_measure(AxisMeasure m);
    static HarmonicField from_sources(std::vector<SourceTerm> sources);
    static HarmonicField flat() { return HarmonicField(); }

    bool is_measure_backed() const { return measure_backed_; }
    bool is_source_expansion() const { return !measure_backed_; }
    const AxisMeasure& measure() const { return measure_; }
    const std::vector<SourceTerm>& sources() const { return sources_; }

    // Monopole coefficient: nu ~ -decay_mass / R at infinity.
    double decay_mass() const;

    bool empty() const;
    double support_z_min() const;
    double support_z_max() const;
    double support_radius() const;
    double center() const;
    double distance_to_support(double r, double z) const;

    // Value, gradient and Hessian of nu; closed form except for rod-backed
    // measures which use adaptive quadrature.  Throws PointOnSupport.
    PotentialJet jet(double r, double z) const;
    PotentialJet jet(double r, double z, double gk_rtol) const;

    // True when lambda of the generated Weyl solution has a closed form
    // (source expansions and pure point-mass measures).
    bool has_closed_lambda() const;
    std::vector<SourceTerm> point_sources() const;  // valid iff has_closed_lambda()

    static HarmonicField from_json_text(const std::string& text);
    static HarmonicField load_json(const std::string& path);
    std::string to_json_text() const;

private:
    bool measure_backed_ = false;
    AxisMeasure measure_;
    std::vector<SourceTerm> sources_;
};

struct FitConfig {
    int n_sources = 40;
    double margin_frac = 0.15;
    double svd_cutoff = 1e-12;
    double max_condition = 1e16;
    double residual_tol = 1e-6;  // gate for the IllConditioned error

    static FitConfig from_json_text(const std::string& text);
};

struct DirichletFit {
    HarmonicField field;
    double boundary_residual_sup = 0.0;
    double boundary_residual_l2 = 0.0;  // root-mean-square over the check grid
    double condition_estimate = 0.0;
};

// Fit an axisymmetric harmonic function on the exterior of the surface of
// revolution generated by `curve`, matching boundary_values(theta) on it in
// least squares (method of fundamental solutions with axis sources, truncated
// SVD).  Residuals are reported, never hidden; IllConditioned is raised only
// when the system is both beyond the condition cap and failing to fit.
DirichletFit solve_exterior_dirichlet(const ProfileCurve& curve,
                                      const std::function<double(double)>& boundary_values,
                                      const FitConfig& config = FitConfig());

}  // namespace weyl
