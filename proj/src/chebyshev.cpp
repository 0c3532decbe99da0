#include "weyl/chebyshev.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace weyl {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

ChebGrid::ChebGrid(int n) : n_(n) {
    if (n < 5) throw std::invalid_argument("ChebGrid: need at least 5 nodes");
    theta_.resize(n);
    x_.resize(n);
    bw_.resize(n);
    ct_.resize(static_cast<std::size_t>(n) * n);
    const int m = n - 1;
    for (int j = 0; j <= m; ++j) {
        x_[j] = std::cos(kPi * j / m);
        theta_[j] = 0.5 * kPi * (1.0 - x_[j]);
        bw_[j] = (j % 2 == 0 ? 1.0 : -1.0);
    }
    theta_[0] = 0.0;
    theta_[m] = kPi;
    bw_[0] *= 0.5;
    bw_[m] *= 0.5;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            ct_[static_cast<std::size_t>(i) * n_ + j] = std::cos(kPi * i * j / m);

    // Clenshaw-Curtis weights: integral_{-1}^{1} T_k = 2/(1-k^2) for even k.
    // Assembled through the coefficient transform below, scaled by pi/2 for
    // the x -> theta map.
    qw_.assign(n, 0.0);
    for (int j = 0; j <= m; ++j) {
        double w = 0.0;
        for (int k = 0; k <= m; k += 2) {
            double ck = (k == 0 || k == m) ? 1.0 : 2.0;
            double cj = (j == 0 || j == m) ? 0.5 : 1.0;
            double tk = 2.0 / (1.0 - static_cast<double>(k) * k);
            if (k == 0) tk = 2.0;
            w += (2.0 / m) * cj * ck * 0.5 * ct_[static_cast<std::size_t>(k) * n_ + j] * tk;
        }
        qw_[j] = 0.5 * kPi * w;
    }
}

std::vector<double> ChebGrid::coeffs(const std::vector<double>& v) const {
    if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("ChebGrid: size mismatch");
    const int m = n_ - 1;
    std::vector<double> a(n_, 0.0);
    for (int k = 0; k <= m; ++k) {
        double s = 0.5 * (v[0] + (k % 2 == 0 ? v[m] : -v[m]));
        for (int j = 1; j < m; ++j) s += v[j] * ct_[static_cast<std::size_t>(k) * n_ + j];
        a[k] = 2.0 * s / m;
    }
    a[0] *= 0.5;
    a[m] *= 0.5;
    return a;
}

std::vector<double> ChebGrid::values_from_coeffs(const std::vector<double>& a) const {
    const int m = n_ - 1;
    std::vector<double> v(n_, 0.0);
    for (int j = 0; j <= m; ++j) {
        double s = 0.0;
        for (int k = 0; k <= m; ++k) s += a[k] * ct_[static_cast<std::size_t>(k) * n_ + j];
        v[j] = s;
    }
    return v;
}

std::vector<double> ChebGrid::deriv_coeffs_x(const std::vector<double>& a) const {
    const int m = n_ - 1;
    std::vector<double> b(n_, 0.0);
    // b_{k} = b_{k+2} + 2(k+1) a_{k+1}, downward recurrence.
    for (int k = m - 1; k >= 0; --k) {
        double up = (k + 2 <= m) ? b[k + 2] : 0.0;
        b[k] = up + 2.0 * (k + 1) * a[k + 1];
    }
    b[0] *= 0.5;
    return b;
}

std::vector<double> ChebGrid::derivative(const std::vector<double>& v, int order,
                                         double filter_rel) const {
    std::vector<double> a = coeffs(v);
    double amax = 0.0;
    for (double c : a) amax = std::max(amax, std::fabs(c));
    const double cut = filter_rel * amax;
    for (double& c : a)
        if (std::fabs(c) < cut) c = 0.0;
    for (int d = 0; d < order; ++d) {
        a = deriv_coeffs_x(a);
        for (double& c : a) c *= -2.0 / kPi;  // theta = (pi/2)(1-x)
    }
    return values_from_coeffs(a);
}

std::vector<double> ChebGrid::antiderivative(const std::vector<double>& v) const {
    const int m = n_ - 1;
    std::vector<double> a = coeffs(v);
    // Antiderivative in x: A_k = (a_{k-1} - a_{k+1})/(2k), k >= 1.
    std::vector<double> A(n_ + 1, 0.0);
    for (int k = 1; k <= m; ++k) {
        double lo = (k == 1) ? 2.0 * a[0] : a[k - 1];
        double hi = (k + 1 <= m) ? a[k + 1] : 0.0;
        A[k] = (lo - hi) / (2.0 * k);
    }
    A[n_] = a[m] / (2.0 * n_);
    // Evaluate G(x_j) = sum A_k T_k(x_j); result is integral in x up to the
    // free constant; theta antiderivative is -(pi/2)(G(x) - G(1)).
    std::vector<double> out(n_, 0.0);
    double g1 = 0.0;
    for (int k = 1; k <= n_; ++k) g1 += A[k];
    for (int j = 0; j <= m; ++j) {
        // Clenshaw for sum_{k=1}^{n} A_k T_k(x_j)
        double b1 = 0.0, b2 = 0.0;
        const double xj = x_[j];
        for (int k = n_; k >= 1; --k) {
            double b0 = 2.0 * xj * b1 - b2 + A[k];
            b2 = b1;
            b1 = b0;
        }
        double g = xj * b1 - b2;  // = sum A_k T_k with the k=0 term absent
        out[j] = -0.5 * kPi * (g - g1);
    }
    out[0] = 0.0;
    return out;
}

double ChebGrid::integrate(const std::vector<double>& v) const {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += qw_[j] * v[j];
    return s;
}

double ChebGrid::interpolate(const std::vector<double>& v, double theta) const {
    const double x = 1.0 - 2.0 * theta / kPi;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n_; ++j) {
        double d = x - x_[j];
        if (std::fabs(d) < 1e-15) return v[j];
        double w = bw_[j] / d;
        num += w * v[j];
        den += w;
    }
    return num / den;
}

double ChebGrid::interpolate_derivative(const std::vector<double>& v, double theta) const {
    return interpolate(derivative(v), theta);
}

}  // namespace weyl
