#pragma once

#include <string>
#include <vector>

#include "weyl/embedding.hpp"
#include "weyl/profile_curve.hpp"
#include "weyl/weyl_solution.hpp"

namespace weyl {

struct BartnikTarget {
    BoundaryData data;
    enum class Provenance { synthetic, forward_generated, external } provenance =
        Provenance::synthetic;
    bool min_H_nonpositive() const;
};

struct SolverConfig {
    double tol_resid = 1e-8;   // sup norm of the weighted residual
    double tol_step = 1e-12;
    int max_iter = 200;
    int n_curve_modes = 24;    // cosine modes, split evenly between r and z'
    int n_sources = 24;
    double weight_alpha = 1.0;
    double weight_beta = 1.0;
    double weight_H = -1.0;    // <0: auto, mean of the target alpha
    double margin_frac = 0.15;
    double fd_step = 1e-6;
    double degenerate_u = 1e-4;   // min u on the boundary
    double degenerate_H = 1e-4;   // min H of the solved configuration
    double morse_mu0 = 1e-4;      // nondegeneracy threshold for K critical points
    bool timings_in_csv = false;  // scan CSV stays byte-reproducible by default

    static SolverConfig from_json_text(const std::string& text);
    static SolverConfig load_json(const std::string& path);
};

// Unknowns of the inverse problem: cosine coefficients p, q with
//   r(theta)  = sin(theta) exp(sum p_k cos k theta)
//   z'(theta) = -sin(theta) exp(sum q_k cos k theta)
// (poles and embeddedness built in, z-translation removed by the centroid
// gauge) plus source strengths at axis positions held fixed between
// relocations.
struct UnknownVector {
    std::vector<double> p, q;
    std::vector<double> source_z;
    std::vector<double> strengths;
    int grid_n = 65;

    static UnknownVector flat_sphere(int n_p, int n_q, int n_sources, double radius, int grid_n);

    std::vector<double> pack() const;  // p, q, strengths (positions are not unknowns)
    void unpack(const std::vector<double>& x);

    ProfileCurve decode_curve() const;        // before gauge normalization
    HarmonicField decode_field() const;
    // gauge-normalized curve + solution; relocates sources into the curve
    // when they would escape it (up to 3 retries, then SourceCollision)
    std::pair<ProfileCurve, WeylSolution> decode(bool relocate = false);
};

BoundaryData bartnik_forward(UnknownVector& unknowns);

enum class SolveStatus { converged, residual_floor, degenerate_geometry, iteration_cap };

struct SolveReport {
    bool converged = false;
    SolveStatus status = SolveStatus::iteration_cap;
    double resid_sup = 0.0, resid_l2 = 0.0;
    double resid_sup_alpha = 0.0, resid_sup_beta = 0.0, resid_sup_H = 0.0;
    std::vector<double> history;  // accepted weighted sup residuals
    double jac_sigma_min = 0.0, jac_sigma_max = 0.0;
    double min_u_boundary = 0.0;
    double min_H = 0.0;
    int iterations = 0;
    double seconds = 0.0;
    double cert_hamiltonian = -1.0, cert_momentum = -1.0;  // converged solves only
    UnknownVector unknowns;  // final state, reusable as a warm start

    std::string status_name() const;
    std::string to_json_text() const;
};

// Levenberg-Marquardt on the stacked residual
// [w_a (alpha - alpha*); w_b (beta - beta*); w_H (H - H*)].
// Non-convergence is data: a report is always returned.
SolveReport solve_bartnik_inverse(const BartnikTarget& target, const UnknownVector& initial,
                                  const SolverConfig& config);

// Warm-started continuation over multiplicative H factors (descending from
// the largest); reports are returned in the input order of `lambdas`.
std::vector<SolveReport> h_scaling_scan(const MetricProfile& gamma,
                                        const std::vector<double>& H_base,
                                        const std::vector<double>& lambdas,
                                        const SolverConfig& config);

// Small-H probe on Morse boundary metrics; refuses non-Morse K (e.g. round).
std::vector<SolveReport> small_h_probe(const MetricProfile& gamma,
                                       const std::vector<double>& h_grid,
                                       const SolverConfig& config);

// Gauss curvature of the profile metric and its axisymmetric Morse check.
std::vector<double> profile_gauss_curvature(const MetricProfile& gamma);
void require_morse(const MetricProfile& gamma, double mu0);  // throws NotMorse

void write_scan_csv(const std::string& path, const std::vector<double>& grid,
                    const std::vector<SolveReport>& reports, bool timings);

// Schwarzschild-matched initial guess for round-ish targets.
UnknownVector schwarzschild_seed(const MetricProfile& gamma, const std::vector<double>& H,
                                 const SolverConfig& config);

}  // namespace weyl
