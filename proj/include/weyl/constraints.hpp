#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "weyl/profile_curve.hpp"
#include "weyl/weyl_solution.hpp"

namespace weyl {

// Geometry of the boundary surface of revolution inside the ambient Weyl
// metric, sampled on the collocation grid.  Pointwise values come from the
// closed-form ambient Christoffel symbols (never 3D differencing); the
// constraint identities are then checked with an independent discrete
// calculus, i.e. all theta-derivatives entering them are spectral
// derivatives of these sampled arrays.  The residuals therefore measure the
// discretization of the theta-derivatives and the quadrature noise carried
// by the samples, and they catch inconsistencies anywhere in the pipeline
// (a wrong lambda value shifts alpha and breaks the identities).
struct SurfaceJet {
    int n = 0;
    std::vector<double> theta;
    std::vector<double> alpha, beta;   // induced metric
    std::vector<double> A_tt, A_pp;    // second fundamental form components
    std::vector<double> H;             // mean curvature (trace of A)
    std::vector<double> u, Nu;         // potential and its normal derivative
    std::vector<double> lapl_u;        // surface Laplacian of u (spectral)
    std::vector<double> K;             // Gauss curvature of (alpha, beta)
    std::vector<double> app_over_b2;   // A_pp / beta^2 via the pole-stable route

    double s_gamma(int i) const { return 2.0 * K[i]; }  // scalar curvature
    // |A|^2 with the umbilic limit at the poles
    double A_norm2(int i) const;
    double trace_A(int i) const;  // A_tt/alpha^2 + A_pp/beta^2 (pole-safe)
};

struct JetOptions {
    // Verification couples every tolerance to the grid so refinement
    // tightens the whole discretization: lambda paths at 1e-8 (65/n)^6, rod
    // quadrature at 1e-10 (65/n)^6 (floored near machine), and the lambda
    // anchor radius grows linearly with n.  Nonnegative values override.
    double lambda_tol = -1.0;
    double gk_rtol = -1.0;
    bool parallel = true;
    // Negative-control hooks: scale nu inside the H computation only, and
    // bias the slope nuN entering the normal derivative of u.
    double corrupt_nu_in_H = 1.0;
    double corrupt_normal_u_bias = 0.0;
};

double verification_lambda_tol(int n);
double verification_gk_rtol(int n);

SurfaceJet surface_jet(const WeylSolution& solution, const ProfileCurve& curve,
                       const JetOptions& opts = JetOptions());

struct ResidualReport {
    double sup_residual = 0.0;
    double l2_residual = 0.0;  // root mean square
    int grid_size = 0;
    double refinement_slope = 0.0;  // log-log order across two grids, 0 if unset
    std::vector<double> theta;      // nodes the residual was evaluated at
    std::vector<double> residuals;

    std::string to_json_text() const;
};

// 2 u^{-1}(Lap_Sigma u + H N(u)) - (|A|^2 - H^2 + s_gamma).
// Both identities are reported on the band pi/16 <= theta <= 15 pi/16: their
// pole limits are degenerate 0/0 forms whose discrete evaluation amplifies
// rounding like n^4, while the identities hold there trivially by parity.
ResidualReport hamiltonian_residual(const SurfaceJet& jet);

// theta-component of div(uA) - u dH - dN(u); the phi-component vanishes by
// axisymmetry.
ResidualReport momentum_residual(const SurfaceJet& jet);

// Trace of the conformal identity: s_{u^2 g} - 2 |d nu|^2_{u^2 g} at sample
// points, via the closed-form curvature of e^{2 lambda}(dr^2+dz^2)+r^2 dphi^2.
ResidualReport conformal_scalar_residual(const WeylSolution& solution,
                                         const std::vector<std::pair<double, double>>& points);

// Control overload: arbitrary jet supplier (e.g. a deliberately non-harmonic
// nu); lambda supplier feeds the conformal prefactor.
ResidualReport conformal_scalar_residual(
    const std::function<PotentialJet(double, double)>& jets,
    const std::function<double(double, double)>& lambda_of,
    const std::vector<std::pair<double, double>>& points);

struct ConstraintPair {
    ResidualReport hamiltonian;
    ResidualReport momentum;
};

ConstraintPair constraint_residuals(const WeylSolution& solution, const ProfileCurve& curve,
                                    const JetOptions& opts = JetOptions());

// Runs the identities on two resolutions of the same shape and fills the
// refinement slopes on the coarse reports.
ConstraintPair verify_with_refinement(const WeylSolution& solution, const ProfileCurve& coarse,
                                      const ProfileCurve& fine,
                                      const JetOptions& opts = JetOptions());

}  // namespace weyl
