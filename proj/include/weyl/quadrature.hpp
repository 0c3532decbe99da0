#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace weyl {

// Adaptive Gauss-Kronrod 15(7) for integrands returning a small fixed block
// of components (value plus derivatives share one subdivision tree).
// Error control is on the max-norm across components, abs+rel combined.
template <std::size_t M>
struct QuadResult {
    std::array<double, M> value{};
    double err = 0.0;
    std::size_t evals = 0;
};

namespace detail {

// QUADPACK dqk15 constants.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t M, class F>
void gk15(const F& f, double a, double b, std::array<double, M>& kr, double& err,
          std::size_t& evals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<double, M> resk{}, resg{};
    std::array<double, M> fc = f(c);
    ++evals;
    for (std::size_t m = 0; m < M; ++m) {
        resk[m] = kWgk[7] * fc[m];
        resg[m] = kWg[3] * fc[m];
    }
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        std::array<double, M> f1 = f(c - dx), f2 = f(c + dx);
        evals += 2;
        for (std::size_t m = 0; m < M; ++m) {
            resk[m] += kWgk[j] * (f1[m] + f2[m]);
            if (j % 2 == 1) resg[m] += kWg[j / 2] * (f1[m] + f2[m]);
        }
    }
    err = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        kr[m] = resk[m] * h;
        err = std::max(err, std::fabs((resk[m] - resg[m]) * h));
    }
}

template <std::size_t M, class F>
void gk_adapt(const F& f, double a, double b, double atol, double rtol, int depth,
              QuadResult<M>& out) {
    std::array<double, M> kr{};
    double err = 0.0;
    gk15<M>(f, a, b, kr, err, out.evals);
    double scale = 0.0;
    for (std::size_t m = 0; m < M; ++m) scale = std::max(scale, std::fabs(kr[m]));
    if (depth <= 0 || err <= atol + rtol * scale) {
        for (std::size_t m = 0; m < M; ++m) out.value[m] += kr[m];
        out.err += err;
        return;
    }
    const double c = 0.5 * (a + b);
    gk_adapt<M>(f, a, c, 0.5 * atol, rtol, depth - 1, out);
    gk_adapt<M>(f, c, b, 0.5 * atol, rtol, depth - 1, out);
}

}  // namespace detail

template <std::size_t M, class F>
QuadResult<M> integrate_gk(const F& f, double a, double b, double atol = 1e-14,
                           double rtol = 1e-12, int max_depth = 48) {
    QuadResult<M> out;
    if (a == b) return out;
    detail::gk_adapt<M>(f, a, b, atol, rtol, max_depth, out);
    return out;
}

// Adaptive Simpson for scalar line integrals along quadrature paths.
namespace detail {
inline double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                          double fb, double c, double fc, double whole, double tol, int depth,
                          std::size_t& evals) {
    const double m1 = 0.5 * (a + c), m2 = 0.5 * (c + b);
    const double f1 = f(m1), f2 = f(m2);
    evals += 2;
    const double left = (c - a) / 6.0 * (fa + 4.0 * f1 + fc);
    const double right = (b - c) / 6.0 * (fc + 4.0 * f2 + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, c, fc, m1, f1, left, 0.5 * tol, depth - 1, evals) +
           simpson_rec(f, c, fc, b, fb, m2, f2, right, 0.5 * tol, depth - 1, evals);
}
}  // namespace detail

inline double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                                double tol = 1e-12, int max_depth = 52,
                                std::size_t* evals = nullptr) {
    if (a == b) return 0.0;
    std::size_t n = 0;
    const double fa = f(a), fb = f(b), c = 0.5 * (a + b), fc = f(c);
    n += 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    double r = detail::simpson_rec(f, a, fa, b, fb, c, fc, whole, tol, max_depth, n);
    if (evals) *evals = n;
    return r;
}

}  // namespace weyl
