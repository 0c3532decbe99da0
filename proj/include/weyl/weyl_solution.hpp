#pragma once

#include <cstddef>

#include "weyl/harmonic_field.hpp"

namespace weyl {

struct WeylConfig {
    double r_anchor_factor = 50.0;  // anchor radius = factor * (support radius + 1)
    double quad_tol = 1e-10;        // adaptive Simpson tolerance per path leg

    static WeylConfig from_json_text(const std::string& text);
};

// Gradient and Hessian of lambda expressed through the nu jet via
// d(lambda) = r(nu_r^2 - nu_z^2) dr + 2 r nu_r nu_z dz.  The mixed second
// derivatives agree exactly when nu is harmonic; both one-sided forms are
// provided for chain-rule use.
struct LambdaJet {
    double lr, lz;          // gradient
    double lrr, lrz;        // d/dr, d/dz of lambda_r
    double lzr, lzz;        // d/dr, d/dz of lambda_z
};
LambdaJet lambda_jet_from_nu(const PotentialJet& j, double r);

// Full static vacuum solution generated by an axisymmetric harmonic nu:
// g = u^{-2} [ e^{2 lambda} (dr^2 + dz^2) + r^2 dphi^2 ],  u = e^nu,
// with lambda recovered by path quadrature of its exact differential,
// anchored at a far radius where the monopole asymptotic is applied.
class WeylSolution {
public:
    explicit WeylSolution(HarmonicField field, WeylConfig config = WeylConfig());

    const HarmonicField& field() const { return field_; }
    const WeylConfig& config() const { return cfg_; }
    double anchor_radius() const { return r_anchor_; }

    double adm_mass() const { return field_.decay_mass(); }

    enum class LambdaPath { horizontal, vertical };

    struct LambdaValue {
        double value = 0.0;
        double tail_budget = 0.0;  // 4 m^2 / R_anchor^2, conservative
        std::size_t evals = 0;
    };

    // lambda(r, z) by quadrature along a support-avoiding polyline from the
    // anchor.  tol < 0 selects the configured default.
    LambdaValue lambda_quadrature(double r, double z, LambdaPath path = LambdaPath::horizontal,
                                  double tol = -1.0) const;

    // Closed form for point-source fields (self terms plus pairwise cross
    // terms); throws when the field has no closed lambda.
    double lambda_closed(double r, double z) const;
    bool has_closed_lambda() const { return field_.has_closed_lambda(); }

    // Preferred route: closed form when available, else quadrature.
    double lambda(double r, double z, double tol = -1.0) const;

    // lambda on the axis at (0, axis_z); zero means the axis is regular
    // there, nonzero is a cone-angle defect (strut).
    double cone_angle_defect(double axis_z) const;

    struct MetricComponents {
        double g_rr;    // = g_zz
        double g_phiphi;
        double u;
        double f;       // dual potential r/u
    };
    MetricComponents metric_components(double r, double z) const;

    PotentialJet nu_jet(double r, double z) const { return field_.jet(r, z); }
    PotentialJet nu_jet(double r, double z, double gk_rtol) const {
        return field_.jet(r, z, gk_rtol);
    }

private:
    HarmonicField field_;
    WeylConfig cfg_;
    double r_anchor_;

    double monopole_lambda(double r, double z) const;
};

}  // namespace weyl
