#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace weyl {

// Value and derivatives of the potential nu at a point (r, z), cylindrical
// coordinates about the symmetry axis r = 0.
struct PotentialJet {
    double nu = 0.0;
    double nu_r = 0.0, nu_z = 0.0;
    double nu_rr = 0.0, nu_rz = 0.0, nu_zz = 0.0;

    PotentialJet& operator+=(const PotentialJet& o) {
        nu += o.nu;
        nu_r += o.nu_r;
        nu_z += o.nu_z;
        nu_rr += o.nu_rr;
        nu_rz += o.nu_rz;
        nu_zz += o.nu_zz;
        return *this;
    }
    PotentialJet& operator*=(double s) {
        nu *= s;
        nu_r *= s;
        nu_z *= s;
        nu_rr *= s;
        nu_rz *= s;
        nu_zz *= s;
        return *this;
    }
};

struct PointMass {
    double z0 = 0.0;
    double mass = 0.0;
};

// Rod on [z_lo, z_hi] with polynomial line density of degree <= 3,
// density(s) = sum_k coeff[k] s^k (coefficients in ascending degree).
struct Rod {
    double z_lo = 0.0, z_hi = 0.0;
    std::array<double, 4> density{};

    double density_at(double s) const {
        return ((density[3] * s + density[2]) * s + density[1]) * s + density[0];
    }
    double length() const { return z_hi - z_lo; }
};

using MeasureComponent = std::variant<PointMass, Rod>;

// Compactly supported signed measure on the symmetry axis.  Immutable after
// construction; evaluation is pure and safe to call concurrently.
class AxisMeasure {
public:
    AxisMeasure() = default;
    explicit AxisMeasure(std::vector<MeasureComponent> components, double gk_rtol = 1e-12);

    static AxisMeasure point(double z0, double mass);
    static AxisMeasure uniform_rod(double z_lo, double z_hi, double kappa);
    // Rod of density 1/2 on [-m, m]; its exterior is the Schwarzschild
    // solution of mass m in Weyl coordinates.
    static AxisMeasure schwarzschild_rod(double m);
    // Point mass m at the origin (Curzon solution).
    static AxisMeasure curzon(double m);

    static AxisMeasure from_json_text(const std::string& text);
    static AxisMeasure load_json(const std::string& path);
    std::string to_json_text() const;

    const std::vector<MeasureComponent>& components() const { return comps_; }
    bool empty() const { return comps_.empty(); }

    double total_mass() const;
    double center_of_mass() const;  // support midpoint when total mass ~ 0

    // Support geometry.  The support lives on the axis r = 0.
    bool has_support() const { return !comps_.empty(); }
    double support_z_min() const { return z_min_; }
    double support_z_max() const { return z_max_; }
    double support_radius() const;  // max |z| over the support, 0 if empty
    double support_diameter() const { return comps_.empty() ? 0.0 : z_max_ - z_min_; }
    double distance_to_support(double r, double z) const;
    double epsilon_support() const;

    // Potential jet at (r, z).  Point-mass terms are closed form; rods use
    // adaptive Gauss-Kronrod at relative tolerance gk_rtol (per component),
    // with a singularity-subtracted scheme close to a rod.
    // Throws PointOnSupport within epsilon_support of the support.
    PotentialJet jet(double r, double z) const;
    PotentialJet jet(double r, double z, double gk_rtol) const;
    double potential(double r, double z) const { return jet(r, z).nu; }

    double gk_rtol() const { return gk_rtol_; }

private:
    std::vector<MeasureComponent> comps_;
    double gk_rtol_ = 1e-12;
    double z_min_ = 0.0, z_max_ = 0.0;

    void compute_support();
};

}  // namespace weyl
