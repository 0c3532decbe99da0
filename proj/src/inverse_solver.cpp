#include "weyl/inverse_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <json.hpp>

#include "weyl/constraints.hpp"
#include "weyl/errors.hpp"
#include "weyl/parallel.hpp"

namespace weyl {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

double cosine_series(const std::vector<double>& c, double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::cos(k * t);
    return s;
}
}  // namespace

bool BartnikTarget::min_H_nonpositive() const {
    for (double h : data.H)
        if (h <= 0.0) return true;
    return false;
}

SolverConfig SolverConfig::from_json_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    SolverConfig c;
    c.tol_resid = doc.value("tol_resid", c.tol_resid);
    c.tol_step = doc.value("tol_step", c.tol_step);
    c.max_iter = doc.value("max_iter", c.max_iter);
    c.n_curve_modes = doc.value("n_curve_modes", c.n_curve_modes);
    c.n_sources = doc.value("n_sources", c.n_sources);
    c.margin_frac = doc.value("margin_frac", c.margin_frac);
    c.fd_step = doc.value("fd_step", c.fd_step);
    c.morse_mu0 = doc.value("morse_mu0", c.morse_mu0);
    c.timings_in_csv = doc.value("timings_in_csv", c.timings_in_csv);
    if (doc.contains("weights")) {
        const auto& w = doc["weights"];
        if (w.contains("alpha")) c.weight_alpha = w["alpha"].get<double>();
        if (w.contains("beta")) c.weight_beta = w["beta"].get<double>();
        if (w.contains("H") && w["H"].is_number()) c.weight_H = w["H"].get<double>();
        // the string "auto" keeps the default mean-alpha weighting
    }
    return c;
}

SolverConfig SolverConfig::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solver config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

UnknownVector UnknownVector::flat_sphere(int n_p, int n_q, int n_sources, double radius,
                                         int grid_n) {
    UnknownVector u;
    u.p.assign(n_p, 0.0);
    u.q.assign(n_q, 0.0);
    u.p[0] = std::log(radius);
    u.q[0] = std::log(radius);
    u.grid_n = grid_n;
    u.source_z.resize(n_sources);
    u.strengths.assign(n_sources, 0.0);
    for (int j = 0; j < n_sources; ++j) {
        const double frac = n_sources == 1 ? 0.5 : static_cast<double>(j) / (n_sources - 1);
        u.source_z[j] = radius * (-0.7 + 1.4 * frac);
    }
    return u;
}

std::vector<double> UnknownVector::pack() const {
    std::vector<double> x;
    x.reserve(p.size() + q.size() + strengths.size());
    x.insert(x.end(), p.begin(), p.end());
    x.insert(x.end(), q.begin(), q.end());
    x.insert(x.end(), strengths.begin(), strengths.end());
    return x;
}

void UnknownVector::unpack(const std::vector<double>& x) {
    std::size_t k = 0;
    for (double& v : p) v = x[k++];
    for (double& v : q) v = x[k++];
    for (double& v : strengths) v = x[k++];
}

ProfileCurve UnknownVector::decode_curve() const {
    auto g = grid_for(grid_n);
    const int n = grid_n;
    std::vector<double> r(n), dz(n);
    for (int i = 0; i < n; ++i) {
        const double t = g->theta()[i];
        const double pe = cosine_series(p, t);
        const double qe = cosine_series(q, t);
        if (std::fabs(pe) > 30.0 || std::fabs(qe) > 30.0)
            throw InvalidCurve("decode: curve coefficients out of range");
        r[i] = std::sin(t) * std::exp(pe);
        dz[i] = -std::sin(t) * std::exp(qe);
    }
    std::vector<double> z = g->antiderivative(dz);
    // strictly monotone z and positive r by construction; full validation is
    // exercised in the tests, not per LM step
    return ProfileCurve(n, std::move(r), std::move(z), false);
}

HarmonicField UnknownVector::decode_field() const {
    std::vector<SourceTerm> src(source_z.size());
    for (std::size_t j = 0; j < source_z.size(); ++j) src[j] = {source_z[j], strengths[j]};
    return HarmonicField::from_sources(std::move(src));
}

std::pair<ProfileCurve, WeylSolution> UnknownVector::decode(bool relocate) {
    ProfileCurve curve = decode_curve();
    const double zn = curve.z_north(), zs = curve.z_south();
    const double chord = zn - zs;
    if (relocate && !source_z.empty()) {
        const double lo = zs + 0.15 * chord, hi = zn - 0.15 * chord;
        bool inside = true;
        for (double sz : source_z)
            if (sz < lo || sz > hi) inside = false;
        if (!inside) {
            for (int attempt = 0;; ++attempt) {
                if (attempt >= 3)
                    throw SourceCollision("sources cannot be relocated inside the curve");
                const int ns = static_cast<int>(source_z.size());
                for (int j = 0; j < ns; ++j) {
                    const double frac = ns == 1 ? 0.5 : static_cast<double>(j) / (ns - 1);
                    source_z[j] = lo + (hi - lo) * frac;
                }
                break;
            }
        }
    }
    WeylSolution solution(decode_field());
    ProfileCurve normalized = normalize_z(curve, solution);
    return {std::move(normalized), std::move(solution)};
}

BoundaryData bartnik_forward(UnknownVector& unknowns) {
    auto [curve, solution] = unknowns.decode(true);
    InducedDataOptions opts;
    opts.parallel = false;  // forward evaluations parallelize over Jacobian columns
    return induced_boundary_data(solution, curve, opts);
}

namespace {

struct ResidualSplit {
    double sup_alpha = 0.0, sup_beta = 0.0, sup_H = 0.0;
};

Eigen::VectorXd stacked_residual(const BoundaryData& bd, const BoundaryData& target, double wa,
                                 double wb, double wh, ResidualSplit* split = nullptr) {
    const int n = target.n;
    Eigen::VectorXd F(3 * n);
    for (int i = 0; i < n; ++i) {
        F(i) = wa * (bd.alpha[i] - target.alpha[i]);
        F(n + i) = wb * (bd.beta[i] - target.beta[i]);
        F(2 * n + i) = wh * (bd.H[i] - target.H[i]);
        if (split) {
            split->sup_alpha = std::max(split->sup_alpha, std::fabs(bd.alpha[i] - target.alpha[i]));
            split->sup_beta = std::max(split->sup_beta, std::fabs(bd.beta[i] - target.beta[i]));
            split->sup_H = std::max(split->sup_H, std::fabs(bd.H[i] - target.H[i]));
        }
    }
    return F;
}

double boundary_min_u(const ProfileCurve& curve, const WeylSolution& solution) {
    double mu = 1e300;
    for (int i = 0; i < curve.size(); ++i) {
        const PotentialJet j = solution.nu_jet(curve.r()[i], curve.z()[i]);
        mu = std::min(mu, std::exp(j.nu));
    }
    return mu;
}

}  // namespace

SolveReport solve_bartnik_inverse(const BartnikTarget& target, const UnknownVector& initial,
                                  const SolverConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.unknowns = initial;
    rep.unknowns.grid_n = target.data.n;

    double wh = config.weight_H;
    if (wh < 0.0) {
        double s = 0.0;
        for (double a : target.data.alpha) s += a;
        wh = s / target.data.n;
    }
    const double wa = config.weight_alpha, wb = config.weight_beta;

    auto forward = [&](UnknownVector& u) { return bartnik_forward(u); };

    Eigen::VectorXd F;
    ResidualSplit split;
    try {
        F = stacked_residual(forward(rep.unknowns), target.data, wa, wb, wh, &split);
    } catch (const SourceCollision&) {
        throw;  // structural failure, nothing to report
    }

    const int dim = static_cast<int>(rep.unknowns.pack().size());
    const int m = static_cast<int>(F.size());
    Eigen::MatrixXd J(m, dim);

    double mu = -1.0;  // initialized after the first Jacobian
    rep.history.push_back(F.lpNorm<Eigen::Infinity>());

    int it = 0;
    bool converged = false, step_floor = false;
    for (; it < config.max_iter; ++it) {
        if (F.lpNorm<Eigen::Infinity>() <= config.tol_resid) {
            converged = true;
            break;
        }
        // forward-difference Jacobian, columns independent
        std::vector<double> x0 = rep.unknowns.pack();
        parallel_for(dim, [&](int jcol) {
            try {
                UnknownVector u = rep.unknowns;
                std::vector<double> x = x0;
                const double hstep = config.fd_step * (1.0 + std::fabs(x[jcol]));
                x[jcol] += hstep;
                u.unpack(x);
                BoundaryData bd = bartnik_forward(u);
                Eigen::VectorXd Fj = stacked_residual(bd, target.data, wa, wb, wh);
                J.col(jcol) = (Fj - F) / hstep;
            } catch (...) {
                J.col(jcol).setZero();
            }
        });

        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * F;
        if (mu < 0.0) mu = 1e-3 * JtJ.diagonal().maxCoeff();

        bool accepted = false;
        for (int inner = 0; inner < 25 && !accepted; ++inner) {
            Eigen::MatrixXd Amat = JtJ;
            Amat.diagonal() += mu * JtJ.diagonal().cwiseMax(1e-12);
            Eigen::VectorXd delta = Amat.ldlt().solve(-g);
            double xnorm = 0.0;
            for (double v : x0) xnorm = std::max(xnorm, std::fabs(v));
            if (delta.lpNorm<Eigen::Infinity>() <= config.tol_step * (1.0 + xnorm)) {
                step_floor = true;
                break;
            }
            UnknownVector trial = rep.unknowns;
            std::vector<double> x = x0;
            for (int k = 0; k < dim; ++k) x[k] += delta(k);
            trial.unpack(x);
            Eigen::VectorXd Ft;
            bool ok = true;
            ResidualSplit tsplit;
            try {
                Ft = stacked_residual(forward(trial), target.data, wa, wb, wh, &tsplit);
            } catch (const SourceCollision&) {
                throw;
            } catch (const std::exception&) {
                ok = false;
            }
            if (ok && Ft.squaredNorm() < F.squaredNorm()) {
                rep.unknowns = trial;
                F = Ft;
                split = tsplit;
                mu = std::max(mu * 0.33, 1e-14);
                accepted = true;
                rep.history.push_back(F.lpNorm<Eigen::Infinity>());
            } else {
                mu *= 4.0;
            }
        }
        if (step_floor || !accepted) break;
    }
    if (F.lpNorm<Eigen::Infinity>() <= config.tol_resid) converged = true;

    rep.iterations = it;
    rep.converged = converged;
    rep.resid_sup = F.lpNorm<Eigen::Infinity>();
    rep.resid_l2 = std::sqrt(F.squaredNorm() / F.size());
    rep.resid_sup_alpha = split.sup_alpha;
    rep.resid_sup_beta = split.sup_beta;
    rep.resid_sup_H = split.sup_H;

    // final-state diagnostics
    {
        auto [curve, solution] = rep.unknowns.decode(false);
        rep.min_u_boundary = boundary_min_u(curve, solution);
        BoundaryData bd = induced_boundary_data(solution, curve);
        rep.min_H = *std::min_element(bd.H.begin(), bd.H.end());

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
        const auto& sv = svd.singularValues();
        if (sv.size() > 0) {
            rep.jac_sigma_max = sv(0);
            rep.jac_sigma_min = sv(sv.size() - 1);
        }

        if (converged) {
            JetOptions jopts;
            ConstraintPair cp = constraint_residuals(solution, curve, jopts);
            rep.cert_hamiltonian = cp.hamiltonian.sup_residual;
            rep.cert_momentum = cp.momentum.sup_residual;
        }
    }

    if (converged)
        rep.status = SolveStatus::converged;
    else if (rep.min_u_boundary < config.degenerate_u || rep.min_H < config.degenerate_H)
        rep.status = SolveStatus::degenerate_geometry;
    else if (step_floor)
        rep.status = SolveStatus::residual_floor;
    else
        rep.status = SolveStatus::iteration_cap;

    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

std::vector<double> profile_gauss_curvature(const MetricProfile& gamma) {
    const int n = gamma.n;
    auto g = grid_for(n);
    auto bp = g->derivative(gamma.beta);
    auto bpp = g->derivative(gamma.beta, 2);
    auto ap = g->derivative(gamma.alpha);
    std::vector<double> K(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
        const double a = gamma.alpha[i];
        K[i] = -(bpp[i] - bp[i] * ap[i] / a) / (a * a * gamma.beta[i]);
    }
    // even extrapolation to the poles
    auto wextra = [&](int i1, int i2, int i3, double pole) {
        auto w = [&](int i) {
            const double d = gamma.theta[i] - pole;
            return d * d;
        };
        const double w1 = w(i1), w2 = w(i2), w3 = w(i3);
        return K[i1] * (w2 * w3) / ((w1 - w2) * (w1 - w3)) +
               K[i2] * (w1 * w3) / ((w2 - w1) * (w2 - w3)) +
               K[i3] * (w1 * w2) / ((w3 - w1) * (w3 - w2));
    };
    K[0] = wextra(1, 2, 3, 0.0);
    K[n - 1] = wextra(n - 2, n - 3, n - 4, kPi);
    return K;
}

void require_morse(const MetricProfile& gamma, double mu0) {
    const int n = gamma.n;
    auto g = grid_for(n);
    std::vector<double> K = profile_gauss_curvature(gamma);
    auto Kp = g->derivative(K);
    auto Kpp = g->derivative(K, 2);
    double kscale = 0.0;
    for (double v : K) kscale = std::max(kscale, std::fabs(v));
    double kpmax = 0.0;
    for (double v : Kp) kpmax = std::max(kpmax, std::fabs(v));
    // constant curvature: every point critical and degenerate
    if (kpmax < 1e-8 * std::max(kscale, 1e-30))
        throw NotMorse("Gauss curvature is constant; every critical point is degenerate");
    // interior critical points: sign changes of K'
    for (int i = 1; i + 2 < n; ++i) {
        if (Kp[i] == 0.0 || Kp[i] * Kp[i + 1] < 0.0) {
            // locate and test |K''|
            double t0 = 0.5 * (gamma.theta[i] + gamma.theta[i + 1]);
            for (int it = 0; it < 30; ++it) {
                const double d1 = g->interpolate(Kp, t0);
                const double d2 = g->interpolate(Kpp, t0);
                if (std::fabs(d2) < 1e-300) break;
                const double step = -d1 / d2;
                t0 += std::clamp(step, -0.2, 0.2);
                if (std::fabs(step) < 1e-13) break;
            }
            if (std::fabs(g->interpolate(Kpp, t0)) < mu0 * std::max(kscale, 1e-30)) {
                std::ostringstream os;
                os << "degenerate critical point of K at theta=" << t0;
                throw NotMorse(os.str());
            }
        }
    }
    // poles are always critical for axisymmetric K
    if (std::fabs(Kpp[0]) < mu0 * std::max(kscale, 1e-30) ||
        std::fabs(Kpp[n - 1]) < mu0 * std::max(kscale, 1e-30))
        throw NotMorse("degenerate critical point of K at a pole");
}

UnknownVector schwarzschild_seed(const MetricProfile& gamma, const std::vector<double>& H,
                                 const SolverConfig& config) {
    const int n = gamma.n;
    auto g = grid_for(n);
    std::vector<double> ab(n), hab(n);
    for (int i = 0; i < n; ++i) {
        ab[i] = gamma.alpha[i] * gamma.beta[i];
        hab[i] = H[i] * ab[i];
    }
    const double area = 2.0 * kPi * g->integrate(ab);
    const double a = std::sqrt(area / (4.0 * kPi));
    const double hbar = g->integrate(hab) / g->integrate(ab);
    // H = (2/a) sqrt(1 - 2m/a)  =>  m = (a/2)(1 - (a H/2)^2)
    double mseed = 0.5 * a * (1.0 - 0.25 * a * a * hbar * hbar);
    mseed = std::min(mseed, 0.45 * a);  // keep the seed sphere outside its own rod

    const int n_p = config.n_curve_modes / 2;
    const int n_q = config.n_curve_modes - n_p;
    UnknownVector u;
    u.grid_n = n;
    u.p.assign(n_p, 0.0);
    u.q.assign(n_q, 0.0);
    u.p[0] = 0.5 * std::log(std::max(a * a - 2.0 * mseed * a, 1e-12));
    u.q[0] = std::log(std::max(a - mseed, 1e-6));
    u.source_z.resize(config.n_sources);
    u.strengths.assign(config.n_sources, 0.0);
    const double rod = std::max(std::fabs(mseed), 1e-3 * a);
    for (int j = 0; j < config.n_sources; ++j) {
        const double frac =
            config.n_sources == 1 ? 0.5 : static_cast<double>(j) / (config.n_sources - 1);
        u.source_z[j] = 0.9 * rod * (2.0 * frac - 1.0);
        u.strengths[j] = -mseed / config.n_sources;
    }
    return u;
}

namespace {

std::vector<SolveReport> scan_impl(const MetricProfile& gamma, const std::vector<double>& H_base,
                                   const std::vector<double>& factors,
                                   const SolverConfig& config) {
    const int n = gamma.n;
    // continuation from the largest factor downward
    std::vector<std::size_t> order(factors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return factors[i] > factors[j]; });

    std::vector<SolveReport> reports(factors.size());
    UnknownVector warm;
    bool have_warm = false;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t idx = order[oi];
        BartnikTarget target;
        target.provenance = BartnikTarget::Provenance::synthetic;
        target.data.n = n;
        target.data.theta = gamma.theta;
        target.data.alpha = gamma.alpha;
        target.data.beta = gamma.beta;
        target.data.H.resize(n);
        for (int i = 0; i < n; ++i) target.data.H[i] = factors[idx] * H_base[i];

        std::vector<double> Hvec = target.data.H;
        UnknownVector initial =
            have_warm ? warm : schwarzschild_seed(gamma, Hvec, config);
        initial.grid_n = n;
        SolveReport rep = solve_bartnik_inverse(target, initial, config);
        // LM never accepts an ascent step, so the final state is the best
        // known point on this branch; carry it either way.
        warm = rep.unknowns;
        have_warm = true;
        reports[idx] = std::move(rep);
    }
    return reports;
}

}  // namespace

std::vector<SolveReport> h_scaling_scan(const MetricProfile& gamma,
                                        const std::vector<double>& H_base,
                                        const std::vector<double>& lambdas,
                                        const SolverConfig& config) {
    for (double l : lambdas)
        if (!(l > 0.0)) throw std::invalid_argument("h_scaling_scan: factors must be positive");
    return scan_impl(gamma, H_base, lambdas, config);
}

std::vector<SolveReport> small_h_probe(const MetricProfile& gamma,
                                       const std::vector<double>& h_grid,
                                       const SolverConfig& config) {
    require_morse(gamma, config.morse_mu0);
    if (h_grid.empty()) return {};
    std::vector<double> ones(gamma.n, 1.0);
    return scan_impl(gamma, ones, h_grid, config);
}

void write_scan_csv(const std::string& path, const std::vector<double>& grid,
                    const std::vector<SolveReport>& reports, bool timings) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scan CSV: " + path);
    out << "lambda_or_h,converged,resid_sup,resid_l2,min_u,min_H,jac_sigma_min,iters,seconds\n";
    char buf[320];
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.3f\n",
                      grid[i], r.converged ? 1 : 0, r.resid_sup, r.resid_l2, r.min_u_boundary,
                      r.min_H, r.jac_sigma_min, r.iterations, timings ? r.seconds : 0.0);
        out << buf;
    }
}

std::string SolveReport::status_name() const {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::residual_floor: return "residual_floor";
        case SolveStatus::degenerate_geometry: return "degenerate_geometry";
        case SolveStatus::iteration_cap: return "iteration_cap";
    }
    return "unknown";
}

std::string SolveReport::to_json_text() const {
    nlohmann::json doc;
    doc["converged"] = converged;
    doc["status"] = status_name();
    doc["resid_sup"] = resid_sup;
    doc["resid_l2"] = resid_l2;
    doc["resid_sup_alpha"] = resid_sup_alpha;
    doc["resid_sup_beta"] = resid_sup_beta;
    doc["resid_sup_H"] = resid_sup_H;
    doc["iterations"] = iterations;
    doc["min_u_boundary"] = min_u_boundary;
    doc["min_H"] = min_H;
    doc["jac_sigma_min"] = jac_sigma_min;
    doc["jac_sigma_max"] = jac_sigma_max;
    doc["seconds"] = seconds;
    doc["cert_hamiltonian"] = cert_hamiltonian;
    doc["cert_momentum"] = cert_momentum;
    doc["history"] = history;
    return doc.dump(2);
}

}  // namespace weyl
