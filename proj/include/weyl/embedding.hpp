#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weyl/profile_curve.hpp"
#include "weyl/weyl_solution.hpp"

namespace weyl {

// Axisymmetric metric alpha^2 dtheta^2 + beta^2 dphi^2 on the collocation
// grid, the input of the embedding problem.
struct MetricProfile {
    int n = 0;
    std::vector<double> theta, alpha, beta;

    static MetricProfile load_csv(const std::string& path);  // theta,alpha,beta
    void save_csv(const std::string& path) const;
    void validate(double tol = 1e-6) const;  // pole conditions, alpha > 0
};

struct ChiZero {
    double theta = 0.0;
    int order = 0;            // vanishing order of chi (even, 2k)
    bool nondegenerate = false;  // order == 2
    bool order_undetectable = false;
};

struct FlatInterval {
    double theta_lo = 0.0, theta_hi = 0.0;
};

// chi = alpha - |beta'| (or e^lambda alpha - |beta'| in the generalized
// check).  Orders are read off the smooth square q = (e^lambda alpha)^2 -
// (beta')^2 whose zeros match chi's with the same order.
struct ChiClassification {
    std::vector<double> chi;          // nodal values
    std::vector<ChiZero> zeros;       // interior zeros outside flat intervals
    std::vector<FlatInterval> flats;
    double scale = 0.0;               // max |chi|
    bool admissible = true;
};

struct ChiOptions {
    // |q^(j)| counts as zero below n^2 * 1e-9 * scale(q); orders are probed
    // up to 2*k_max.
    double zero_rel_tol = 1e-9;
    int k_max = 4;
    // Flat intervals carry chi = 0 to near machine precision, far below the
    // zero-detection threshold of a high-order isolated zero; <0 selects
    // 1e-8 * scale(chi).
    double flat_tol = -1.0;
    int flat_min_nodes = 5;
};

// Throws Inadmissible (with the worst theta) when chi < -tol somewhere.
// When `solution` is given the generalized chi uses e^lambda along the
// candidate curve (which must then be supplied too).
ChiClassification classify_chi(const MetricProfile& profile,
                               const WeylSolution* solution = nullptr,
                               const ProfileCurve* candidate = nullptr,
                               const ChiOptions& opts = ChiOptions());

enum class Multiplicity { unique, finite, continuum };

struct EmbeddingSolutionSet {
    std::vector<ProfileCurve> representatives;
    std::vector<double> round_trip_residual;  // sup over (alpha, beta) per representative
    Multiplicity multiplicity = Multiplicity::unique;
    int count = 1;  // representative count for the finite case
    ChiClassification classification;

    std::string manifest_json() const;
};

// Induced (alpha, beta) of a curve: exact flat formulas, or the Weyl metric
// coefficients when a solution is given.
MetricProfile dirichlet_map(const ProfileCurve& curve, const WeylSolution* solution = nullptr);

// Isometric embedding into flat space: r = beta, |z'| = sqrt(alpha^2 -
// beta'^2), the sign fixed negative from theta = 0 and flipped at a zero of
// chi exactly when its half-order is odd.  Flat intervals force z' = 0 there
// and release the sign afterwards (continuum; the two extreme representatives
// are emitted).  Zeros of equal order at matching heights yield locally
// reflected representatives.
EmbeddingSolutionSet embed_profile(const MetricProfile& profile,
                                   const ChiOptions& opts = ChiOptions());

struct GeneralEmbedOptions {
    int march_steps = 4000;
    double pairing_tol_rel = 1e-8;  // z-level matching, relative to diameter
    ChiOptions chi;
};

// Generalized embedding with a fixed ambient potential: marches the
// differential-algebraic system r = beta u(r,z),
// e^{2 lambda} (r'^2 + z'^2) = u^2 alpha^2.
EmbeddingSolutionSet embed_profile_general(const MetricProfile& profile,
                                           const WeylSolution& solution,
                                           const GeneralEmbedOptions& opts = GeneralEmbedOptions());

}  // namespace weyl
