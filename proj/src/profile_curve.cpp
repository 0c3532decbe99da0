#include "weyl/profile_curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "weyl/errors.hpp"
#include "weyl/parallel.hpp"
#include "weyl/weyl_solution.hpp"

namespace weyl {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

std::shared_ptr<const ChebGrid> grid_for(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const ChebGrid>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto g = std::make_shared<const ChebGrid>(n);
    cache[n] = g;
    return g;
}

ProfileCurve::ProfileCurve(int n, std::vector<double> r, std::vector<double> z, bool validate)
    : n_(n), grid_(grid_for(n)), r_(std::move(r)), z_(std::move(z)) {
    if (static_cast<int>(r_.size()) != n_ || static_cast<int>(z_.size()) != n_)
        throw InvalidCurve("profile curve: node count mismatch");
    if (n_ < 33) throw InvalidCurve("profile curve: need at least 33 nodes");
    // snap pole radii that are zero up to rounding
    const double scale = diameter();
    for (int j : {0, n_ - 1}) {
        if (std::fabs(r_[j]) > 1e-9 * std::max(scale, 1e-30))
            throw InvalidCurve("profile curve: r must vanish at the poles");
        r_[j] = 0.0;
    }
    if (validate) check_valid();
}

ProfileCurve ProfileCurve::from_functions(int n, const std::function<double(double)>& fr,
                                          const std::function<double(double)>& fz,
                                          bool validate) {
    auto g = grid_for(n);
    std::vector<double> r(n), z(n);
    for (int j = 0; j < n; ++j) {
        r[j] = fr(g->theta()[j]);
        z[j] = fz(g->theta()[j]);
    }
    return ProfileCurve(n, std::move(r), std::move(z), validate);
}

ProfileCurve ProfileCurve::sphere(int n, double radius, double z_center) {
    return from_functions(
        n, [radius](double t) { return radius * std::sin(t); },
        [radius, z_center](double t) { return z_center + radius * std::cos(t); });
}

double ProfileCurve::diameter() const {
    double rmax = 0.0, zmin = 1e300, zmax = -1e300;
    for (int j = 0; j < n_; ++j) {
        rmax = std::max(rmax, std::fabs(r_[j]));
        zmin = std::min(zmin, z_[j]);
        zmax = std::max(zmax, z_[j]);
    }
    return std::max(2.0 * rmax, zmax - zmin);
}

void ProfileCurve::ensure_derivatives() const {
    if (!rd_[0].empty()) return;
    for (int k = 0; k < 3; ++k) {
        rd_[k] = grid_->derivative(r_, k + 1);
        zd_[k] = grid_->derivative(z_, k + 1);
    }
}

const std::vector<double>& ProfileCurve::r_d(int order) const {
    ensure_derivatives();
    return rd_[order - 1];
}

const std::vector<double>& ProfileCurve::z_d(int order) const {
    ensure_derivatives();
    return zd_[order - 1];
}

ProfileCurve ProfileCurve::shifted_z(double dz) const {
    std::vector<double> z2(z_);
    for (double& v : z2) v += dz;
    return ProfileCurve(n_, r_, std::move(z2), false);
}

ProfileCurve ProfileCurve::scaled(double s) const {
    if (s <= 0.0) throw InvalidCurve("profile curve: scale must be positive");
    std::vector<double> r2(r_), z2(z_);
    for (double& v : r2) v *= s;
    for (double& v : z2) v *= s;
    return ProfileCurve(n_, std::move(r2), std::move(z2), false);
}

double ProfileCurve::r_at(double theta) const { return grid_->interpolate(r_, theta); }
double ProfileCurve::z_at(double theta) const { return grid_->interpolate(z_, theta); }

ProfileCurve::EuclidNode ProfileCurve::euclid_node(int i) const {
    ensure_derivatives();
    EuclidNode e;
    const double rp = rd_[0][i], zp = zd_[0][i];
    const double rpp = rd_[1][i], zpp = zd_[1][i];
    e.sp = std::hypot(rp, zp);
    e.spp = (rp * rpp + zp * zpp) / e.sp;
    e.nr = -zp / e.sp;
    e.nz = rp / e.sp;
    e.kappa = (zp * rpp - rp * zpp) / (e.sp * e.sp * e.sp);
    return e;
}

void ProfileCurve::check_valid() const {
    ensure_derivatives();
    const double scale = std::max(diameter(), 1e-30);
    for (int j = 1; j + 1 < n_; ++j)
        if (!(r_[j] > 0.0)) throw InvalidCurve("profile curve: r must be positive on (0, pi)");
    // orthogonal axis meeting
    if (std::fabs(zd_[0][0]) > 1e-6 * scale || std::fabs(zd_[0][n_ - 1]) > 1e-6 * scale)
        throw InvalidCurve("profile curve: z' must vanish at the poles");
    if (!(rd_[0][0] > 0.0) || !(rd_[0][n_ - 1] < 0.0))
        throw InvalidCurve("profile curve: r' must be positive at theta=0 and negative at theta=pi");
    // orientation: north pole on top, normal at theta=0 into the exterior
    if (!(z_[0] > z_[n_ - 1]))
        throw InvalidCurve("profile curve: reversed orientation (north pole must have larger z)");
    std::vector<double> rzp(n_);
    for (int j = 0; j < n_; ++j) rzp[j] = r_[j] * zd_[0][j];
    if (!(grid_->integrate(rzp) < 0.0))
        throw InvalidCurve("profile curve: reversed orientation (signed area)");

    // simplicity of the refined polyline
    const int m = 4 * n_;
    std::vector<double> pr(m + 1), pz(m + 1);
    for (int k = 0; k <= m; ++k) {
        const double th = kPi * k / m;
        pr[k] = r_at(th);
        pz[k] = z_at(th);
    }
    const double tol = 1e-10 * scale;
    auto seg_intersect = [&](int i, int j) {
        const double ax = pr[i], ay = pz[i], bx = pr[i + 1], by = pz[i + 1];
        const double cx = pr[j], cy = pz[j], dx = pr[j + 1], dy = pz[j + 1];
        const double d1 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        const double d2 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax);
        const double d3 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx);
        const double d4 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx);
        return (d1 * d2 < -tol * tol) && (d3 * d4 < -tol * tol);
    };
    for (int i = 0; i < m; ++i) {
        for (int j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;  // pole endpoints may share the axis
            if (std::min(pr[i], pr[i + 1]) > std::max(pr[j], pr[j + 1]) + tol ||
                std::min(pr[j], pr[j + 1]) > std::max(pr[i], pr[i + 1]) + tol)
                continue;
            if (seg_intersect(i, j))
                throw InvalidCurve("profile curve: self-intersecting polyline");
        }
    }
}

ProfileCurve ProfileCurve::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open curve file: " + path);
    std::string line;
    std::getline(in, line);
    if (line.find("theta") == std::string::npos || line.find("r") == std::string::npos)
        throw std::runtime_error("curve CSV must start with header theta,r,z");
    std::vector<double> th, r, z;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a, b, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
            throw std::runtime_error("malformed curve CSV row: " + line);
        th.push_back(a);
        r.push_back(b);
        z.push_back(c);
    }
    const int n = static_cast<int>(th.size());
    auto g = grid_for(n);
    for (int j = 0; j < n; ++j)
        if (std::fabs(th[j] - g->theta()[j]) > 1e-8)
            throw std::runtime_error("curve CSV must be sampled on the Chebyshev-Lobatto grid");
    return ProfileCurve(n, std::move(r), std::move(z));
}

void ProfileCurve::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write curve file: " + path);
    out << "theta,r,z\n";
    char buf[128];
    for (int j = 0; j < n_; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid_->theta()[j], r_[j], z_[j]);
        out << buf;
    }
}

BoundaryData BoundaryData::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open boundary data file: " + path);
    std::string line;
    std::getline(in, line);
    if (line.find("alpha") == std::string::npos)
        throw std::runtime_error("boundary data CSV must start with header theta,alpha,beta,H");
    BoundaryData bd;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a, b, c, d;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4)
            throw std::runtime_error("malformed boundary data row: " + line);
        bd.theta.push_back(a);
        bd.alpha.push_back(b);
        bd.beta.push_back(c);
        bd.H.push_back(d);
    }
    bd.n = static_cast<int>(bd.theta.size());
    return bd;
}

void BoundaryData::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write boundary data file: " + path);
    out << "theta,alpha,beta,H\n";
    char buf[160];
    for (int j = 0; j < n; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", theta[j], alpha[j], beta[j],
                      H[j]);
        out << buf;
    }
}

void BoundaryData::validate(double tol) const {
    if (n < 5) throw std::runtime_error("boundary data: too few nodes");
    for (int j = 0; j < n; ++j) {
        if (!(alpha[j] > 0.0)) throw std::runtime_error("boundary data: alpha must be positive");
        if (beta[j] < -tol) throw std::runtime_error("boundary data: beta must be non-negative");
    }
    if (std::fabs(beta[0]) > tol || std::fabs(beta[n - 1]) > tol)
        throw std::runtime_error("boundary data: beta must vanish at the poles");
    auto g = grid_for(n);
    auto bp = g->derivative(beta);
    if (std::fabs(std::fabs(bp[0]) - alpha[0]) > tol * std::max(1.0, alpha[0]) ||
        std::fabs(std::fabs(bp[n - 1]) - alpha[n - 1]) > tol * std::max(1.0, alpha[n - 1]))
        throw std::runtime_error("boundary data: pole compatibility |beta'| = alpha fails");
}

double euclid_mean_curvature(const ProfileCurve& curve, int node) {
    const auto e = curve.euclid_node(node);
    if (node == 0 || node == curve.size() - 1) return 2.0 * e.kappa;
    return e.nr / curve.r()[node] + e.kappa;
}

std::vector<double> euclid_mean_curvature(const ProfileCurve& curve) {
    const int n = curve.size();
    std::vector<double> h(n);
    double rmax = 0.0;
    for (double v : curve.r()) rmax = std::max(rmax, v);
    for (int i = 0; i < n; ++i) h[i] = euclid_mean_curvature(curve, i);

    // Near the axis the N_E(r)/r ratio amplifies collocation rounding by 1/r;
    // H_Eucl is smooth and even across each pole, so nodes with small r are
    // replaced by Lagrange extrapolation in (theta - pole)^2 anchored at the
    // exact pole limit and four clean nodes.
    const auto& th = curve.theta();
    auto patch = [&](int pole_idx, double pole_theta, int dir) {
        int i1 = pole_idx + dir;
        while (i1 > 0 && i1 < n - 1 && curve.r()[i1] < 0.05 * rmax) i1 += dir;
        if (i1 + 4 * dir <= 0 || i1 + 4 * dir >= n - 1) return;
        auto w = [&](double t) {
            const double d = t - pole_theta;
            return d * d;
        };
        double ws[5] = {0.0, w(th[i1]), w(th[i1 + dir]), w(th[i1 + 2 * dir]),
                        w(th[i1 + 3 * dir])};
        double fs[5] = {h[pole_idx], h[i1], h[i1 + dir], h[i1 + 2 * dir], h[i1 + 3 * dir]};
        for (int i = pole_idx + dir; i != i1; i += dir) {
            const double wi = w(th[i]);
            double acc = 0.0;
            for (int a = 0; a < 5; ++a) {
                double la = 1.0;
                for (int b = 0; b < 5; ++b)
                    if (b != a) la *= (wi - ws[b]) / (ws[a] - ws[b]);
                acc += la * fs[a];
            }
            h[i] = acc;
        }
    };
    patch(0, 0.0, +1);
    patch(n - 1, kPi, -1);
    return h;
}

BoundaryData induced_boundary_data(const WeylSolution& solution, const ProfileCurve& curve,
                                   const InducedDataOptions& opts) {
    const int n = curve.size();
    BoundaryData bd;
    bd.n = n;
    bd.theta = curve.theta();
    bd.alpha.assign(n, 0.0);
    bd.beta.assign(n, 0.0);
    bd.H.assign(n, 0.0);
    const auto& r = curve.r();
    const auto& z = curve.z();
    const std::vector<double> hE = euclid_mean_curvature(curve);

    parallel_for(
        n,
        [&](int i) {
            PotentialJet j = solution.nu_jet(r[i], z[i]);
            const double lam = solution.lambda(r[i], z[i], opts.lambda_tol);
            const auto lj = lambda_jet_from_nu(j, r[i]);
            const auto e = curve.euclid_node(i);
            const double nuN = e.nr * j.nu_r + e.nz * j.nu_z;
            const double lamN = e.nr * lj.lr + e.nz * lj.lz;
            bd.alpha[i] = std::exp(lam - j.nu) * e.sp;
            bd.beta[i] = r[i] * std::exp(-j.nu);
            bd.H[i] = std::exp(j.nu - lam) * (hE[i] + lamN - 2.0 * nuN);
        },
        opts.parallel);
    return bd;
}

ProfileCurve normalize_z(const ProfileCurve& curve, const WeylSolution& solution) {
    const auto& g = curve.grid();
    auto moment = [&](double c) {
        ProfileCurve shifted = curve.shifted_z(c);
        InducedDataOptions opts;
        BoundaryData bd = induced_boundary_data(solution, shifted, opts);
        std::vector<double> num(curve.size()), den(curve.size());
        for (int i = 0; i < curve.size(); ++i) {
            den[i] = bd.alpha[i] * bd.beta[i];
            num[i] = shifted.z()[i] * den[i];
        }
        const double area = g.integrate(den);
        if (!(area > 0.0)) throw DegenerateArea("normalize_z: non-positive boundary area");
        return std::pair<double, double>(g.integrate(num), area);
    };

    // Newton-secant on c -> integral (z+c) dv; the area term dominates the
    // derivative so this converges in a few steps.
    double c = 0.0;
    for (int it = 0; it < 60; ++it) {
        auto [num, area] = moment(c);
        const double step = -num / area;
        c += step;
        if (std::fabs(step) <= 1e-13 * std::max(1.0, curve.diameter())) break;
    }
    return curve.shifted_z(c);
}

}  // namespace weyl
