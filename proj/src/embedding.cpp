#include "weyl/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "weyl/errors.hpp"

namespace weyl {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kPairingTolRel = 1e-8;
}  // namespace

MetricProfile MetricProfile::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    std::string line;
    std::getline(in, line);
    const bool has_h = line.find(",H") != std::string::npos;
    if (line.find("alpha") == std::string::npos)
        throw std::runtime_error("profile CSV must start with header theta,alpha,beta[,H]");
    MetricProfile mp;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double a, b, c, d;
        const int want = has_h ? 4 : 3;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) < want)
            throw std::runtime_error("malformed profile row: " + line);
        mp.theta.push_back(a);
        mp.alpha.push_back(b);
        mp.beta.push_back(c);
    }
    mp.n = static_cast<int>(mp.theta.size());
    return mp;
}

void MetricProfile::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write profile file: " + path);
    out << "theta,alpha,beta\n";
    char buf[128];
    for (int j = 0; j < n; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", theta[j], alpha[j], beta[j]);
        out << buf;
    }
}

void MetricProfile::validate(double tol) const {
    if (n < 33) throw std::runtime_error("metric profile: need at least 33 nodes");
    for (int j = 0; j < n; ++j)
        if (!(alpha[j] > 0.0)) throw std::runtime_error("metric profile: alpha must be positive");
    if (std::fabs(beta[0]) > tol || std::fabs(beta[n - 1]) > tol)
        throw std::runtime_error("metric profile: beta must vanish at the poles");
    auto g = grid_for(n);
    auto bp = g->derivative(beta);
    for (int j : {0, n - 1})
        if (std::fabs(std::fabs(bp[j]) - alpha[j]) > tol * std::max(1.0, alpha[j]))
            throw std::runtime_error("metric profile: pole compatibility |beta'| = alpha fails");
}

ChiClassification classify_chi(const MetricProfile& profile, const WeylSolution* solution,
                               const ProfileCurve* candidate, const ChiOptions& opts) {
    const int n = profile.n;
    auto g = grid_for(n);
    auto bp = g->derivative(profile.beta);

    // Effective alpha: e^lambda alpha along the candidate in the generalized
    // check, plain alpha otherwise.
    std::vector<double> ea(profile.alpha);
    if (solution && candidate) {
        for (int i = 0; i < n; ++i)
            ea[i] *= std::exp(solution->lambda(candidate->r()[i], candidate->z()[i]));
    }

    ChiClassification cls;
    cls.chi.resize(n);
    // q = (e^lambda alpha)^2 - beta'^2 is smooth where chi = e^l a - |b'| has
    // a kink; zeros and their orders coincide.
    std::vector<double> q(n);
    for (int i = 0; i < n; ++i) {
        cls.chi[i] = ea[i] - std::fabs(bp[i]);
        q[i] = ea[i] * ea[i] - bp[i] * bp[i];
        cls.scale = std::max(cls.scale, std::fabs(cls.chi[i]));
    }
    double qscale = 0.0;
    for (double v : q) qscale = std::max(qscale, std::fabs(v));

    const double thr_chi = n * static_cast<double>(n) * opts.zero_rel_tol *
                           std::max(cls.scale, 1e-30);
    const double thr_q = n * static_cast<double>(n) * opts.zero_rel_tol * std::max(qscale, 1e-30);
    const double flat_tol =
        opts.flat_tol > 0.0 ? opts.flat_tol : 1e-8 * std::max(cls.scale, 1e-30);

    // admissibility gate
    int worst = 0;
    for (int i = 0; i < n; ++i)
        if (cls.chi[i] < cls.chi[worst]) worst = i;
    if (cls.chi[worst] < -thr_chi) {
        cls.admissible = false;
        std::ostringstream os;
        os << "inadmissible: alpha >= |beta'| violated at theta=" << profile.theta[worst]
           << " (chi=" << cls.chi[worst] << ")";
        throw Inadmissible(os.str(), profile.theta[worst]);
    }

    // flat intervals: runs of small |chi| long enough in theta, away from the
    // pole clusters (chi vanishes at the poles for every admissible profile)
    std::vector<bool> in_flat(n, false);
    {
        int i = 1;
        while (i + 1 < n) {
            if (std::fabs(cls.chi[i]) < flat_tol) {
                int j = i;
                while (j + 1 < n && std::fabs(cls.chi[j + 1]) < flat_tol) ++j;
                const bool touches_pole = (i <= 2) || (j >= n - 3);
                const double width = profile.theta[j] - profile.theta[i];
                if (!touches_pole && j - i + 1 >= opts.flat_min_nodes &&
                    width >= 5.0 * kPi / n) {
                    cls.flats.push_back({profile.theta[i], profile.theta[j]});
                    for (int k = i; k <= j; ++k) in_flat[k] = true;
                }
                i = j + 1;
            } else {
                ++i;
            }
        }
    }

    // interior zeros: local minima of chi under the zero threshold
    auto q2 = g->derivative(q, 2);
    for (int i = 2; i + 2 < n; ++i) {
        if (in_flat[i]) continue;
        if (!(cls.chi[i] <= cls.chi[i - 1] && cls.chi[i] <= cls.chi[i + 1])) continue;
        if (cls.chi[i] > thr_chi) continue;
        // location by parabolic minimization of q on the interpolant
        double t0 = profile.theta[i];
        double dt = 0.5 * (profile.theta[i + 1] - profile.theta[i - 1]);
        for (int it = 0; it < 60; ++it) {
            const double qm = g->interpolate(q, t0 - dt);
            const double qc = g->interpolate(q, t0);
            const double qp = g->interpolate(q, t0 + dt);
            const double denom = qm - 2.0 * qc + qp;
            if (std::fabs(denom) > 0.0) {
                double step = 0.5 * dt * (qm - qp) / denom;
                t0 += std::clamp(step, -dt, dt);
            }
            dt *= 0.6;
            if (dt < 1e-9) break;
        }
        ChiZero zero;
        zero.theta = t0;
        zero.order = 0;
        // Nondegenerate minima have q'' of the scale of q itself; above the
        // threshold the order is 2.  Higher even orders cannot be read from
        // odd derivatives at a numerically located minimum, so they are
        // classified by the symmetric growth ratio q(2d)/q(d) = 2^(2k).
        if (std::fabs(g->interpolate(q2, t0)) > thr_q) {
            zero.order = 2;
        } else {
            const double d = 6.0 * kPi / n;
            const double qd1 =
                0.5 * (g->interpolate(q, t0 + d) + g->interpolate(q, t0 - d));
            const double qd2 =
                0.5 * (g->interpolate(q, t0 + 2.0 * d) + g->interpolate(q, t0 - 2.0 * d));
            if (qd1 > thr_q * 1e-4 && qd2 > qd1) {
                const double khat = 0.5 * std::log2(qd2 / qd1);
                const int k = static_cast<int>(std::lround(khat));
                if (std::fabs(khat - k) < 0.25 && k >= 1 && k <= opts.k_max) {
                    zero.order = 2 * k;
                } else {
                    zero.order_undetectable = true;
                    zero.order = 2 * std::clamp(k, 1, opts.k_max);
                }
            } else {
                zero.order_undetectable = true;
                zero.order = 4;
            }
        }
        zero.nondegenerate = (!zero.order_undetectable && zero.order == 2);
        // merge zeros resolved twice from adjacent nodes
        bool dup = false;
        for (const auto& zz : cls.zeros)
            if (std::fabs(zz.theta - zero.theta) < 8.0 * kPi / n) dup = true;
        if (!dup) cls.zeros.push_back(zero);
    }
    return cls;
}

MetricProfile dirichlet_map(const ProfileCurve& curve, const WeylSolution* solution) {
    const int n = curve.size();
    MetricProfile mp;
    mp.n = n;
    mp.theta = curve.theta();
    mp.alpha.resize(n);
    mp.beta.resize(n);
    const auto& rp = curve.r_d(1);
    const auto& zp = curve.z_d(1);
    for (int i = 0; i < n; ++i) {
        const double sp = std::hypot(rp[i], zp[i]);
        if (!solution || solution->field().empty()) {
            mp.alpha[i] = sp;
            mp.beta[i] = curve.r()[i];
        } else {
            const PotentialJet j = solution->nu_jet(curve.r()[i], curve.z()[i]);
            const double lam = solution->lambda(curve.r()[i], curve.z()[i]);
            mp.alpha[i] = std::exp(lam - j.nu) * sp;
            mp.beta[i] = curve.r()[i] * std::exp(-j.nu);
        }
    }
    return mp;
}

namespace {

// Gauge: shift z so the flat-area-element moment of the profile vanishes.
void normalize_profile_gauge(const MetricProfile& mp, const ChebGrid& g, std::vector<double>& z) {
    std::vector<double> ab(mp.n), zab(mp.n);
    for (int i = 0; i < mp.n; ++i) {
        ab[i] = mp.alpha[i] * mp.beta[i];
        zab[i] = z[i] * ab[i];
    }
    const double area = g.integrate(ab);
    if (!(area > 0.0)) throw DegenerateArea("embedding gauge: non-positive area element");
    const double c = -g.integrate(zab) / area;
    for (double& v : z) v += c;
}

struct Candidate {
    std::vector<double> z;
};

double curve_sup_distance(const ProfileCurve& a, const ProfileCurve& b) {
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        d = std::max(d, std::fabs(a.r()[i] - b.r()[i]));
        d = std::max(d, std::fabs(a.z()[i] - b.z()[i]));
    }
    return d;
}

}  // namespace

EmbeddingSolutionSet embed_profile(const MetricProfile& profile, const ChiOptions& opts) {
    const int n = profile.n;
    auto g = grid_for(n);
    EmbeddingSolutionSet out;
    out.classification = classify_chi(profile, nullptr, nullptr, opts);
    const auto& cls = out.classification;

    auto bp = g->derivative(profile.beta);
    std::vector<double> absdz(n);
    for (int i = 0; i < n; ++i) {
        const double q = profile.alpha[i] * profile.alpha[i] - bp[i] * bp[i];
        absdz[i] = std::sqrt(std::max(q, 0.0));
    }
    // Inside a flat interval z' vanishes identically; zeroing the sqrt there
    // removes the noise drift.  Only machine-level chi nodes are zeroed: the
    // detection tolerance is looser than the junction tails of a smooth flat.
    const double strict_flat = 3e-12 * std::max(cls.scale, 1e-30);
    for (int i = 0; i < n; ++i)
        if (!cls.flats.empty() && std::fabs(cls.chi[i]) < strict_flat) absdz[i] = 0.0;

    // Sign pattern: start negative, flip at odd half-order zeros; each flat
    // interval releases the sign, giving the two extreme representatives.
    struct Event {
        double theta;
        bool forced_flip;  // zero with odd k
        bool free;         // flat interval
    };
    std::vector<Event> events;
    for (const auto& zz : cls.zeros) events.push_back({zz.theta, (zz.order / 2) % 2 == 1, false});
    for (const auto& f : cls.flats) events.push_back({f.theta_hi, false, true});
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.theta < b.theta; });

    const int n_free = static_cast<int>(cls.flats.size());
    const int n_branches = std::min(1 << n_free, 4);  // extremes only

    std::vector<Candidate> candidates;
    for (int branch = 0; branch < n_branches; ++branch) {
        std::vector<double> dz(n);
        for (int i = 0; i < n; ++i) {
            double s = -1.0;
            int free_idx = 0;
            for (const auto& ev : events) {
                if (ev.theta >= profile.theta[i]) break;
                if (ev.forced_flip) s = -s;
                if (ev.free) {
                    if ((branch >> free_idx) & 1) s = -s;
                    ++free_idx;
                }
            }
            dz[i] = s * absdz[i];
        }
        Candidate c;
        c.z = g->antiderivative(dz);
        normalize_profile_gauge(profile, *g, c.z);
        // canonical orientation: north pole up
        if (c.z.front() < c.z.back()) {
            for (double& v : c.z) v = -v;
            normalize_profile_gauge(profile, *g, c.z);
        }
        candidates.push_back(std::move(c));
    }

    // Locally reflected representatives for equal-order zero pairs at
    // matching heights.
    const std::size_t base_count = candidates.size();
    for (std::size_t ci = 0; ci < base_count; ++ci) {
        const auto& base = candidates[ci].z;
        double diam = 0.0;
        for (double v : base) diam = std::max(diam, std::fabs(v));
        diam = std::max(2.0 * diam, 1e-30);
        for (std::size_t a = 0; a < cls.zeros.size(); ++a) {
            for (std::size_t b = a + 1; b < cls.zeros.size(); ++b) {
                if (cls.zeros[a].order != cls.zeros[b].order) continue;
                const double za = g->interpolate(base, cls.zeros[a].theta);
                const double zb = g->interpolate(base, cls.zeros[b].theta);
                if (std::fabs(za - zb) > kPairingTolRel * diam) continue;
                Candidate refl;
                refl.z = base;
                for (int i = 0; i < n; ++i) {
                    if (profile.theta[i] > cls.zeros[a].theta &&
                        profile.theta[i] < cls.zeros[b].theta)
                        refl.z[i] = 2.0 * za - refl.z[i];
                }
                normalize_profile_gauge(profile, *g, refl.z);
                candidates.push_back(std::move(refl));
            }
        }
    }

    // Deduplicate and materialize.
    std::vector<double> r(profile.beta);
    r.front() = 0.0;
    r.back() = 0.0;
    for (auto& cand : candidates) {
        bool dup = false;
        for (std::size_t k = 0; k < out.representatives.size(); ++k) {
            double d = 0.0;
            for (int i = 0; i < n; ++i)
                d = std::max(d, std::fabs(cand.z[i] - out.representatives[k].z()[i]));
            if (d < 1e-9 * std::max(1.0, cls.scale)) dup = true;
        }
        if (dup) continue;
        try {
            ProfileCurve curve(n, r, cand.z);
            MetricProfile back = dirichlet_map(curve);
            double resid = 0.0;
            for (int i = 0; i < n; ++i) {
                resid = std::max(resid, std::fabs(back.alpha[i] - profile.alpha[i]));
                resid = std::max(resid, std::fabs(back.beta[i] - profile.beta[i]));
            }
            out.representatives.push_back(std::move(curve));
            out.round_trip_residual.push_back(resid);
        } catch (const InvalidCurve&) {
            // a sign assignment that fails embeddedness is not a representative
        }
    }

    if (out.representatives.empty())
        throw Inadmissible("embedding produced no valid representative", 0.0);

    out.count = static_cast<int>(out.representatives.size());
    if (!cls.flats.empty())
        out.multiplicity = Multiplicity::continuum;
    else if (out.count > 1)
        out.multiplicity = Multiplicity::finite;
    else
        out.multiplicity = Multiplicity::unique;
    return out;
}

namespace {

// One right-hand-side evaluation of the general marching system at (theta, z):
// solves r = beta u(r, z), then picks the quadratic root for z' nearest the
// prediction.  The branch structure genuinely folds where the admissibility
// discriminant touches zero, so continuity tracking replaces a fixed sign.
struct MarchEval {
    double r = 0.0;
    double disc = 0.0;
    double zprime = 0.0;
};

MarchEval march_rhs(const WeylSolution& sol, double beta_t, double betap_t, double alpha_t,
                    double z, double r_guess, double zp_pred, bool have_pred, double init_branch,
                    double theta) {
    MarchEval ev;
    if (beta_t <= 1e-14) {
        ev.r = 0.0;
    } else {
        double r = std::max(r_guess, 1e-8);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            const PotentialJet j = sol.nu_jet(r, z);
            const double f = r * std::exp(-j.nu) - beta_t;
            const double fp = std::exp(-j.nu) * (1.0 - r * j.nu_r);
            if (std::fabs(fp) < 1e-14) break;
            const double step = -f / fp;
            r += std::clamp(step, -0.5 * r, 2.0 * r);
            if (r <= 0.0) r = 0.5 * beta_t;
            if (std::fabs(step) < 1e-14 * (1.0 + r)) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            const PotentialJet j = sol.nu_jet(r, z);
            if (std::fabs(r * std::exp(-j.nu) - beta_t) > 1e-9 * (1.0 + beta_t))
                throw RootFindFailure("general embedding: r = beta u has no stable root", theta);
        }
        ev.r = r;
    }
    const PotentialJet j = sol.nu_jet(std::max(ev.r, 0.0), z);
    const double u = std::exp(j.nu);
    const double lam = sol.lambda(ev.r, z);
    const double denom = 1.0 - ev.r * j.nu_r;
    if (std::fabs(denom) < 1e-12)
        throw RootFindFailure("general embedding: degenerate radial equation", theta);
    const double a = betap_t * u / denom;
    const double b = ev.r * j.nu_z / denom;
    const double Q2 = u * u * alpha_t * alpha_t * std::exp(-2.0 * lam);
    ev.disc = Q2 * (1.0 + b * b) - a * a;
    const double root = std::sqrt(std::max(ev.disc, 0.0));
    const double zp_plus = (-a * b + root) / (1.0 + b * b);
    const double zp_minus = (-a * b - root) / (1.0 + b * b);
    if (have_pred) {
        ev.zprime =
            (std::fabs(zp_plus - zp_pred) <= std::fabs(zp_minus - zp_pred)) ? zp_plus : zp_minus;
    } else {
        ev.zprime = init_branch > 0.0 ? zp_plus : zp_minus;
    }
    return ev;
}

}  // namespace

EmbeddingSolutionSet embed_profile_general(const MetricProfile& profile,
                                           const WeylSolution& solution,
                                           const GeneralEmbedOptions& opts) {
    if (solution.field().empty()) return embed_profile(profile, opts.chi);

    const int n = profile.n;
    auto g = grid_for(n);
    auto bp = g->derivative(profile.beta);

    const int M = opts.march_steps;
    const double h = kPi / M;

    auto alpha_at = [&](double t) { return g->interpolate(profile.alpha, t); };
    auto beta_at = [&](double t) { return std::max(g->interpolate(profile.beta, t), 0.0); };
    auto betap_at = [&](double t) { return g->interpolate(bp, t); };

    // March with fixed z(0); returns dense samples of z and the flat-gauge
    // moment of the result.
    struct MarchResult {
        std::vector<double> z, dz;  // at k h, k = 0..M
        bool ok = true;

        double interp(double t, double h) const {
            const int M = static_cast<int>(z.size()) - 1;
            const int k = std::min(static_cast<int>(t / h), M - 1);
            const double s = (t - k * h) / h;
            const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
            const double h10 = s * (1 - s) * (1 - s);
            const double h01 = s * s * (3 - 2 * s);
            const double h11 = s * s * (s - 1);
            return h00 * z[k] + h * h10 * dz[k] + h01 * z[k + 1] + h * h11 * dz[k + 1];
        }
    };
    auto march = [&](double z0, double init_branch) {
        MarchResult res;
        res.z.resize(M + 1);
        res.dz.assign(M + 1, 0.0);
        res.z[0] = z0;
        if (std::getenv("WEYL_EMBED_DEBUG"))
            std::fprintf(stderr, "march enter z0=%.6f branch=%.0f M=%d\n", z0, init_branch, M);
        double r_prev = 1e-6;
        for (int k = 0; k < M; ++k) {
            const double t = k * h;
            const bool have_pred = k >= 1;
            const double zp_pred =
                k >= 2 ? 2.0 * res.dz[k - 1] - res.dz[k - 2] : (k >= 1 ? res.dz[k - 1] : 0.0);
            auto rhs = [&](double tt, double zz, double pred, bool hp) {
                return march_rhs(solution, beta_at(tt), betap_at(tt), alpha_at(tt), zz, r_prev,
                                 pred, hp, init_branch, tt);
            };
            MarchEval e1 = rhs(t, res.z[k], zp_pred, have_pred);
            res.dz[k] = e1.zprime;
            r_prev = std::max(e1.r, 1e-8);
            MarchEval e2 = rhs(t + 0.5 * h, res.z[k] + 0.5 * h * e1.zprime, e1.zprime, true);
            MarchEval e3 = rhs(t + 0.5 * h, res.z[k] + 0.5 * h * e2.zprime, e2.zprime, true);
            MarchEval e4 = rhs(t + h, res.z[k] + h * e3.zprime, e3.zprime, true);
            res.z[k + 1] =
                res.z[k] + (h / 6.0) * (e1.zprime + 2.0 * e2.zprime + 2.0 * e3.zprime + e4.zprime);
            if (!std::isfinite(res.z[k + 1]) && std::getenv("WEYL_EMBED_DEBUG")) {
                std::fprintf(stderr,
                             "NaN at k=%d t=%.4f z=%.6f zp1=%.3e zp2=%.3e zp3=%.3e zp4=%.3e "
                             "disc1=%.3e r1=%.3e\n",
                             k, t, res.z[k], e1.zprime, e2.zprime, e3.zprime, e4.zprime, e1.disc,
                             e1.r);
                break;
            }
        }
        res.dz[M] = march_rhs(solution, beta_at(kPi), betap_at(kPi), alpha_at(kPi), res.z[M],
                              r_prev, res.dz[M - 1], true, init_branch, kPi)
                        .zprime;
        return res;
    };

    auto moment_of = [&](const MarchResult& res) {
        // flat gauge moment with the profile's own area element
        std::vector<double> ab(n), zab(n);
        for (int i = 0; i < n; ++i) {
            ab[i] = profile.alpha[i] * profile.beta[i];
            zab[i] = res.interp(profile.theta[i], h) * ab[i];
        }
        return g->integrate(zab) / g->integrate(ab);
    };

    // Initial z(0) from the flat embedding, then secant on the gauge moment;
    // the absolute height is a genuine unknown once the ambient potential is
    // fixed.  Both initial branch choices are tried and the best-closing one
    // kept.
    EmbeddingSolutionSet flat = embed_profile(profile, opts.chi);
    const double z0_flat = flat.representatives.front().z().front();
    MarchResult cur;
    double best_close = 1e300;
    double diam = 0.0;
    for (int i = 0; i < n; ++i) diam = std::max(diam, profile.beta[i] / 0.4);
    // The north-pole height is the shooting unknown; it must stay above the
    // field support (sources interior to the surface).
    const double span = flat.representatives.front().z().front() -
                        flat.representatives.front().z().back();
    const double z_lo =
        std::max(solution.field().support_z_max() + 0.02 * diam, z0_flat - 0.75 * span);
    const double z_hi = std::max(z0_flat, z_lo) + 0.75 * span;
    for (double branch : {-1.0, 1.0}) {
        try {
            auto moment_at = [&](double zz0, MarchResult* keep) {
                try {
                    MarchResult t = march(zz0, branch);
                    const double m = moment_of(t);
                    if (keep) *keep = std::move(t);
                    return m;
                } catch (const RootFindFailure&) {
                    return std::nan("");  // marching from this height fails
                }
            };
            // Bracket the gauge moment between the last two finite samples;
            // heights whose march does not traverse the domain read as NaN
            // (the crash region adjoins the low end, where the pole falls
            // onto the support).
            const int ns = 24;
            double za = 0.0, ma = 0.0, zb = 0.0, mb = 0.0;
            bool have_last = false, bracket = false;
            for (int k = 0; k <= ns && !bracket; ++k) {
                const double zz = z_lo + (z_hi - z_lo) * k / ns;
                const double mm = moment_at(zz, nullptr);
                if (!std::isfinite(mm)) continue;
                if (have_last && ma * mm <= 0.0) {
                    zb = zz;
                    mb = mm;
                    bracket = true;
                    break;
                }
                za = zz;
                ma = mm;
                have_last = true;
            }
            if (!bracket) continue;
            (void)mb;
            MarchResult trial;
            double mmid = 0.0;
            for (int it = 0; it < 70; ++it) {
                const double zm = 0.5 * (za + zb);
                mmid = moment_at(zm, &trial);
                if (!std::isfinite(mmid)) {
                    za = zm;  // crashes sit below the surviving band
                    continue;
                }
                if (ma * mmid <= 0.0) {
                    zb = zm;
                } else {
                    za = zm;
                    ma = mmid;
                }
                if (zb - za < 1e-13 * (1.0 + std::fabs(zm)) || std::fabs(mmid) < 1e-13) break;
            }
            // a collapsed bracket on a branch-jump discontinuity is not a root
            if (!(std::fabs(mmid) < 1e-7 * (1.0 + diam))) continue;
            // closure quality: z' must return to zero at the south pole
            const double close = std::fabs(trial.dz.back()) + std::fabs(mmid);
            if (std::getenv("WEYL_EMBED_DEBUG"))
                std::fprintf(stderr, "branch %.0f: m=%.3e dzback=%.3e\n", branch, mmid,
                             trial.dz.back());
            if (!trial.z.empty() && std::isfinite(close) && close < best_close) {
                best_close = close;
                cur = std::move(trial);
            }
        } catch (const RootFindFailure& e) {
            if (std::getenv("WEYL_EMBED_DEBUG"))
                std::fprintf(stderr, "branch %.0f failed: %s (theta=%.4f)\n", branch, e.what(),
                             e.theta);
        }
    }
    if (cur.z.empty())
        throw RootFindFailure("general embedding: no marching branch closes", 0.0);

    // Materialize on the collocation grid: z by dense interpolation, r by the
    // algebraic equation at each node.
    std::vector<double> zn(n), rn(n);
    double r_guess = 1e-6;
    for (int i = 0; i < n; ++i) {
        const double t = profile.theta[i];
        zn[i] = cur.interp(t, h);
        MarchEval ev = march_rhs(solution, beta_at(t), betap_at(t), alpha_at(t), zn[i], r_guess,
                                 cur.dz[std::min(static_cast<int>(t / h), M - 1)], true, -1.0, t);
        rn[i] = ev.r;
        r_guess = std::max(ev.r, 1e-8);
    }
    rn.front() = 0.0;
    rn.back() = 0.0;

    EmbeddingSolutionSet out;
    ProfileCurve curve(n, rn, zn);
    out.classification = classify_chi(profile, &solution, &curve, opts.chi);
    MetricProfile back = dirichlet_map(curve, &solution);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
        resid = std::max(resid, std::fabs(back.alpha[i] - profile.alpha[i]));
        resid = std::max(resid, std::fabs(back.beta[i] - profile.beta[i]));
    }
    out.representatives.push_back(std::move(curve));
    out.round_trip_residual.push_back(resid);
    out.multiplicity = out.classification.flats.empty() ? Multiplicity::unique
                                                        : Multiplicity::continuum;
    out.count = 1;
    return out;
}

std::string EmbeddingSolutionSet::manifest_json() const {
    nlohmann::json doc;
    switch (multiplicity) {
        case Multiplicity::unique: doc["multiplicity"] = "unique"; break;
        case Multiplicity::finite: doc["multiplicity"] = "finite"; break;
        case Multiplicity::continuum: doc["multiplicity"] = "continuum"; break;
    }
    doc["count"] = count;
    doc["zeros"] = nlohmann::json::array();
    for (const auto& z : classification.zeros) {
        doc["zeros"].push_back({{"theta", z.theta},
                                {"order", z.order},
                                {"nondegenerate", z.nondegenerate},
                                {"order_undetectable", z.order_undetectable}});
    }
    doc["flats"] = nlohmann::json::array();
    for (const auto& f : classification.flats)
        doc["flats"].push_back({{"theta_lo", f.theta_lo}, {"theta_hi", f.theta_hi}});
    doc["residuals"] = round_trip_residual;
    return doc.dump(2);
}

}  // namespace weyl
