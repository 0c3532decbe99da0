#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "weyl/chebyshev.hpp"

namespace weyl {

class WeylSolution;

// Shared collocation grids, cached per node count.
std::shared_ptr<const ChebGrid> grid_for(int n);

// Generator sigma(theta) = (r(theta), z(theta)) of a boundary surface of
// revolution in the closed half-plane r >= 0, sampled on the
// Chebyshev-Lobatto grid.  theta = 0 is the north pole (z maximal on the
// axis) and the Euclidean normal there is +d/dz, pointing into the exterior.
//
// Validation enforces: r = 0 exactly at the poles and r > 0 inside, the
// curve meets the axis orthogonally (z' = 0 at the poles), r'(0) > 0 and
// r'(pi) < 0, north-pole-up orientation, and simplicity of the polyline.
class ProfileCurve {
public:
    ProfileCurve(int n, std::vector<double> r, std::vector<double> z, bool validate = true);

    static ProfileCurve from_functions(int n, const std::function<double(double)>& fr,
                                       const std::function<double(double)>& fz,
                                       bool validate = true);
    static ProfileCurve sphere(int n, double radius, double z_center = 0.0);

    static ProfileCurve load_csv(const std::string& path);
    void save_csv(const std::string& path) const;

    int size() const { return n_; }
    const ChebGrid& grid() const { return *grid_; }
    const std::vector<double>& theta() const { return grid_->theta(); }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& z() const { return z_; }
    // spectral theta-derivatives of order 1..3
    const std::vector<double>& r_d(int order) const;
    const std::vector<double>& z_d(int order) const;

    double diameter() const;
    double z_north() const { return z_.front(); }
    double z_south() const { return z_.back(); }

    ProfileCurve shifted_z(double dz) const;
    ProfileCurve scaled(double s) const;

    // interpolated position at arbitrary theta
    double r_at(double theta) const;
    double z_at(double theta) const;

    // Euclidean geometry at node i, normal pointing into the exterior.
    struct EuclidNode {
        double sp;        // arclength speed sqrt(r'^2 + z'^2)
        double spp;       // d(sp)/dtheta
        double nr, nz;    // unit normal components
        double kappa;     // geodesic curvature <grad_T N, T>
    };
    EuclidNode euclid_node(int i) const;

private:
    int n_ = 0;
    std::shared_ptr<const ChebGrid> grid_;
    std::vector<double> r_, z_;
    mutable std::vector<double> rd_[3], zd_[3];

    void check_valid() const;
    void ensure_derivatives() const;
};

// Bartnik boundary data (alpha, beta, H) on the collocation grid:
// gamma = alpha^2 dtheta^2 + beta^2 dphi^2, H the mean curvature with
// respect to the normal pointing into the exterior.
struct BoundaryData {
    int n = 0;
    std::vector<double> theta, alpha, beta, H;

    static BoundaryData load_csv(const std::string& path);
    void save_csv(const std::string& path) const;
    // pole compatibility |beta'| = alpha at the poles, alpha > 0, beta >= 0
    void validate(double tol = 1e-6) const;
};

struct InducedDataOptions {
    double lambda_tol = -1.0;  // <0: solution default
    bool parallel = true;
};

// Euclidean mean curvature of the surface of revolution at theta (node
// index); pole values are the limit 2*kappa_E.
double euclid_mean_curvature(const ProfileCurve& curve, int node);
std::vector<double> euclid_mean_curvature(const ProfileCurve& curve);

// Bartnik data induced by the Weyl solution on the curve.
BoundaryData induced_boundary_data(const WeylSolution& solution, const ProfileCurve& curve,
                                   const InducedDataOptions& opts = InducedDataOptions());

// Shift the curve along z so that integral z dv_gamma = 0 with the area
// element of the induced metric.
ProfileCurve normalize_z(const ProfileCurve& curve, const WeylSolution& solution);

}  // namespace weyl
