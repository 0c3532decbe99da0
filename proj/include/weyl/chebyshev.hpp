#pragma once

#include <vector>

namespace weyl {

// Chebyshev-Gauss-Lobatto collocation on theta in [0, pi].
//
// Nodes are the images of the standard CGL points x_j = cos(j pi/(n-1))
// under theta = (pi/2)(1 - x), so theta_0 = 0 and theta_{n-1} = pi and the
// grid clusters at both poles.  All spectral operations go through the
// Chebyshev coefficient space (O(n^2) cosine transforms; n stays small here).
class ChebGrid {
public:
    explicit ChebGrid(int n);

    int size() const { return n_; }
    const std::vector<double>& theta() const { return theta_; }

    // Chebyshev coefficients of the interpolant through nodal values.
    std::vector<double> coeffs(const std::vector<double>& values) const;
    std::vector<double> values_from_coeffs(const std::vector<double>& coeffs) const;

    // Nodal values of d^order/dtheta^order of the interpolant.  Trailing
    // coefficients below filter_rel * max|a_k| are zeroed first; without this
    // the k-fold derivative of rounding noise grows like n^(2k).  The default cut sits just above the transform rounding floor.
    std::vector<double> derivative(const std::vector<double>& values, int order = 1,
                                   double filter_rel = 3e-15) const;

    // F(theta_j) = integral_0^theta_j f, from the coefficient antiderivative.
    std::vector<double> antiderivative(const std::vector<double>& values) const;

    // integral_0^pi f dtheta (Clenshaw-Curtis weights).
    double integrate(const std::vector<double>& values) const;
    const std::vector<double>& quad_weights() const { return qw_; }

    // Barycentric evaluation of the interpolant at arbitrary theta.
    double interpolate(const std::vector<double>& values, double theta) const;

    // Interior local minima refinement helper: evaluates the interpolant's
    // derivative at arbitrary theta.
    double interpolate_derivative(const std::vector<double>& values, double theta) const;

private:
    int n_;
    std::vector<double> theta_;  // ascending, theta_0 = 0
    std::vector<double> x_;      // x_j = cos(j pi/(n-1)), descending
    std::vector<double> bw_;     // barycentric weights
    std::vector<double> qw_;     // Clenshaw-Curtis weights for d(theta)
    std::vector<double> ct_;     // cos(pi i j/(n-1)) table, row-major

    std::vector<double> deriv_coeffs_x(const std::vector<double>& a) const;
};

}  // namespace weyl
