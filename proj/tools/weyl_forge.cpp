// weyl-forge: command-line front end for the Weyl static-vacuum laboratory.
//
// Subcommands: solution | boundary-data | embed | verify | invert | scan |
// masses.  Exit codes: 0 success, 1 usage error, 2 numerical failure.  Every
// run emits a JSON manifest next to its primary output; data outputs are
// plain CSV/JSON and byte-reproducible for identical configs and inputs
// (the manifest's timestamp and wall-time fields are the only exceptions).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "weyl/constraints.hpp"
#include "weyl/embedding.hpp"
#include "weyl/errors.hpp"
#include "weyl/inverse_solver.hpp"
#include "weyl/masses.hpp"
#include "weyl/parallel.hpp"

namespace {

constexpr const char* kVersion = "weyl-forge 0.1.0";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// FNV-1a 64-bit, hex string
std::string fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ManifestWriter {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, hash
    std::string config_hash = fnv1a("");
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void add_input(const std::string& path) { inputs.push_back({path, fnv1a(read_file(path))}); }
    void add_config_text(const std::string& text) { config_hash = fnv1a(text); }

    void write(const std::string& path) const {
        nlohmann::json doc;
        doc["command"] = command;
        doc["tool_version"] = kVersion;
        doc["config_hash"] = config_hash;
        doc["inputs"] = nlohmann::json::array();
        for (const auto& [p, h] : inputs) doc["inputs"].push_back({{"path", p}, {"hash", h}});
        doc["outputs"] = outputs;
        doc["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        doc["timestamp_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
        std::ofstream out(path);
        out << doc.dump(2) << "\n";
    }
};

weyl::HarmonicField load_field_arg(const std::string& measure_path,
                                   const std::string& field_path, ManifestWriter& mw) {
    if (!measure_path.empty()) {
        mw.add_input(measure_path);
        return weyl::HarmonicField::from_measure(weyl::AxisMeasure::load_json(measure_path));
    }
    if (!field_path.empty()) {
        mw.add_input(field_path);
        return weyl::HarmonicField::load_json(field_path);
    }
    return weyl::HarmonicField::flat();
}

std::vector<double> parse_grid_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

bool nearly(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

int selftest_boundary_data() {
    auto curve = weyl::ProfileCurve::sphere(65, 1.0);
    weyl::WeylSolution flat(weyl::HarmonicField::flat());
    auto bd = weyl::induced_boundary_data(flat, curve);
    for (int i = 0; i < bd.n; ++i) {
        if (!nearly(bd.alpha[i], 1.0, 1e-10) ||
            !nearly(bd.beta[i], std::sin(bd.theta[i]), 1e-10) || !nearly(bd.H[i], 2.0, 1e-9))
            return 2;
    }
    std::puts("selftest boundary-data: flat unit sphere gives (1, sin theta, 2)");
    return 0;
}

int selftest_solution() {
    weyl::WeylSolution cz(weyl::HarmonicField::from_measure(weyl::AxisMeasure::curzon(1.0)));
    if (!nearly(cz.adm_mass(), 1.0, 1e-14)) return 2;
    if (!nearly(cz.lambda(1.0, 0.0), -0.5, 1e-12)) return 2;
    std::puts("selftest solution: Curzon mass and lambda closed form");
    return 0;
}

int selftest_embed() {
    auto g = weyl::grid_for(65);
    weyl::MetricProfile mp;
    mp.n = 65;
    mp.theta = g->theta();
    mp.alpha.assign(65, 1.0);
    mp.beta.resize(65);
    for (int i = 0; i < 65; ++i) mp.beta[i] = std::sin(mp.theta[i]);
    auto set = weyl::embed_profile(mp);
    if (set.representatives.size() != 1 || set.round_trip_residual[0] > 1e-10) return 2;
    std::puts("selftest embed: round sphere recovered");
    return 0;
}

int selftest_verify() {
    auto curve = weyl::ProfileCurve::sphere(65, 1.0);
    weyl::WeylSolution flat(weyl::HarmonicField::flat());
    auto cp = weyl::constraint_residuals(flat, curve);
    if (cp.hamiltonian.sup_residual > 1e-10 || cp.momentum.sup_residual > 1e-10) return 2;
    std::puts("selftest verify: flat constraints vanish");
    return 0;
}

int selftest_invert() {
    weyl::UnknownVector u = weyl::UnknownVector::flat_sphere(4, 4, 4, 1.0, 65);
    auto bd = weyl::bartnik_forward(u);
    for (int i = 0; i < bd.n; ++i)
        if (!nearly(bd.alpha[i], 1.0, 1e-9) || !nearly(bd.H[i], 2.0, 1e-8)) return 2;
    std::puts("selftest invert: forward map of the flat sphere");
    return 0;
}

int selftest_scan() {
    auto g = weyl::grid_for(65);
    weyl::MetricProfile mp;
    mp.n = 65;
    mp.theta = g->theta();
    mp.alpha.assign(65, 1.0);
    mp.beta.resize(65);
    for (int i = 0; i < 65; ++i) mp.beta[i] = std::sin(mp.theta[i]);
    weyl::SolverConfig cfg;
    auto reports = weyl::small_h_probe(mp, {}, cfg);  // round refuses via NotMorse
    (void)reports;
    return 2;  // must have thrown
}

int selftest_masses() {
    auto g = weyl::grid_for(65);
    weyl::BoundaryData bd;
    bd.n = 65;
    bd.theta = g->theta();
    bd.alpha.assign(65, 1.0);
    bd.beta.resize(65);
    bd.H.assign(65, 2.0);
    for (int i = 0; i < 65; ++i) bd.beta[i] = std::sin(bd.theta[i]);
    if (!nearly(weyl::hawking_mass(bd), 0.0, 1e-12)) return 2;
    if (!nearly(std::sqrt(weyl::boundary_area(bd) / (16.0 * M_PI)), 0.5, 1e-12)) return 2;
    std::puts("selftest masses: round sphere Hawking mass vanishes");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for axisymmetric static vacuum metrics"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // ---- solution ----
    auto* cmd_solution = app.add_subcommand("solution", "build a Weyl solution from a measure");
    std::string sol_measure, sol_field, sol_out = "solution.json";
    bool sol_selftest = false;
    cmd_solution->add_option("--measure", sol_measure, "measure JSON");
    cmd_solution->add_option("--field", sol_field, "field JSON");
    cmd_solution->add_option("--out", sol_out, "output solution JSON");
    cmd_solution->add_flag("--selftest", sol_selftest);

    // ---- boundary-data ----
    auto* cmd_bd = app.add_subcommand("boundary-data", "induced Bartnik data on a curve");
    std::string bd_measure, bd_field, bd_curve, bd_out = "bd.csv";
    bool bd_selftest = false;
    cmd_bd->add_option("--measure", bd_measure, "measure JSON");
    cmd_bd->add_option("--field", bd_field, "field JSON");
    cmd_bd->add_option("--curve", bd_curve, "curve CSV (theta,r,z)");
    cmd_bd->add_option("--out", bd_out, "output CSV (theta,alpha,beta,H)");
    cmd_bd->add_flag("--selftest", bd_selftest);

    // ---- embed ----
    auto* cmd_embed = app.add_subcommand("embed", "reconstruct profile curves from (alpha, beta)");
    std::string em_profile, em_field, em_outdir = ".";
    bool em_general = false, em_emit_all = false, em_selftest = false;
    cmd_embed->add_option("--profile", em_profile, "profile CSV (theta,alpha,beta)");
    cmd_embed->add_flag("--general", em_general, "embed into a fixed ambient solution");
    cmd_embed->add_option("--field", em_field, "field JSON for --general");
    cmd_embed->add_flag("--emit-all", em_emit_all, "write every representative");
    cmd_embed->add_option("--out-dir", em_outdir, "output directory");
    cmd_embed->add_flag("--selftest", em_selftest);

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "constraint residual table for a pair");
    std::string vf_measure, vf_field, vf_curve, vf_out;
    int vf_fine = 0;
    bool vf_selftest = false;
    cmd_verify->add_option("--measure", vf_measure, "measure JSON");
    cmd_verify->add_option("--field", vf_field, "field JSON");
    cmd_verify->add_option("--curve", vf_curve, "curve CSV");
    cmd_verify->add_option("--fine", vf_fine, "refined node count for the slope (default 2n-1)");
    cmd_verify->add_option("--out", vf_out, "optional JSON report path");
    cmd_verify->add_flag("--selftest", vf_selftest);

    // ---- invert ----
    auto* cmd_invert = app.add_subcommand("invert", "solve the inverse Bartnik problem");
    std::string iv_target, iv_config, iv_out = "invert_report.json";
    double iv_radius = 0.0;
    bool iv_selftest = false;
    cmd_invert->add_option("--target", iv_target, "target boundary data CSV");
    cmd_invert->add_option("--config", iv_config, "solver config JSON");
    cmd_invert->add_option("--initial-radius", iv_radius,
                           "radius of the flat-sphere initial guess (default: auto seed)");
    cmd_invert->add_option("--out", iv_out, "output report JSON");
    cmd_invert->add_flag("--selftest", iv_selftest);

    // ---- scan ----
    auto* cmd_scan = app.add_subcommand("scan", "H-scaling or small-H parameter scans");
    std::string sc_mode = "h-scaling", sc_profile, sc_hbase, sc_grid, sc_config,
                sc_out = "scan.csv";
    int sc_jobs = 0;
    bool sc_timings = false, sc_selftest = false;
    cmd_scan->add_option("--mode", sc_mode, "h-scaling | small-h");
    cmd_scan->add_option("--profile", sc_profile, "gamma profile CSV (theta,alpha,beta)");
    cmd_scan->add_option("--h-base", sc_hbase, "boundary data CSV supplying the base H");
    cmd_scan->add_option("--grid", sc_grid, "comma-separated factors or h values");
    cmd_scan->add_option("--config", sc_config, "solver config JSON");
    cmd_scan->add_option("--out", sc_out, "output scan CSV");
    cmd_scan->add_option("--jobs", sc_jobs, "worker threads (default: logical cores)");
    cmd_scan->add_flag("--timings", sc_timings,
                       "write wall times into the CSV (breaks byte reproducibility)");
    cmd_scan->add_flag("--selftest", sc_selftest);

    // ---- masses ----
    auto* cmd_masses = app.add_subcommand("masses", "ADM/Hawking mass report for a pair");
    std::string ms_measure, ms_field, ms_curve, ms_out = "masses.json";
    bool ms_selftest = false;
    cmd_masses->add_option("--measure", ms_measure, "measure JSON");
    cmd_masses->add_option("--field", ms_field, "field JSON");
    cmd_masses->add_option("--curve", ms_curve, "curve CSV");
    cmd_masses->add_option("--out", ms_out, "output JSON");
    cmd_masses->add_flag("--selftest", ms_selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_solution->parsed()) {
            if (sol_selftest) return selftest_solution();
            ManifestWriter mw;
            mw.command = "solution";
            weyl::HarmonicField field = load_field_arg(sol_measure, sol_field, mw);
            weyl::WeylSolution sol(field);
            nlohmann::json doc;
            doc["field"] = nlohmann::json::parse(field.to_json_text());
            doc["adm_mass"] = sol.adm_mass();
            doc["anchor_radius"] = sol.anchor_radius();
            doc["units"] = "G=c=1";
            std::ofstream out(sol_out);
            out << doc.dump(2) << "\n";
            mw.outputs.push_back(sol_out);
            mw.write(sol_out + ".manifest.json");
            return 0;
        }
        if (cmd_bd->parsed()) {
            if (bd_selftest) return selftest_boundary_data();
            ManifestWriter mw;
            mw.command = "boundary-data";
            weyl::HarmonicField field = load_field_arg(bd_measure, bd_field, mw);
            mw.add_input(bd_curve);
            auto curve = weyl::ProfileCurve::load_csv(bd_curve);
            weyl::WeylSolution sol(field);
            auto bd = weyl::induced_boundary_data(sol, curve);
            bd.save_csv(bd_out);
            auto mass = weyl::mass_report(sol, curve);
            std::printf("adm=%.12g hawking=%.12g area=%.12g\n", mass.adm, mass.hawking,
                        mass.boundary_area);
            mw.outputs.push_back(bd_out);
            mw.write(bd_out + ".manifest.json");
            return 0;
        }
        if (cmd_embed->parsed()) {
            if (em_selftest) return selftest_embed();
            ManifestWriter mw;
            mw.command = "embed";
            mw.add_input(em_profile);
            auto profile = weyl::MetricProfile::load_csv(em_profile);
            weyl::EmbeddingSolutionSet set;
            if (em_general) {
                weyl::HarmonicField field = load_field_arg("", em_field, mw);
                weyl::WeylSolution sol(field);
                set = weyl::embed_profile_general(profile, sol);
            } else {
                set = weyl::embed_profile(profile);
            }
            const std::size_t n_emit = em_emit_all ? set.representatives.size()
                                                   : std::min<std::size_t>(
                                                         1, set.representatives.size());
            for (std::size_t k = 0; k < n_emit; ++k) {
                const std::string path =
                    em_outdir + "/representative_" + std::to_string(k) + ".csv";
                set.representatives[k].save_csv(path);
                mw.outputs.push_back(path);
            }
            const std::string mpath = em_outdir + "/embed_manifest.json";
            std::ofstream out(mpath);
            out << set.manifest_json() << "\n";
            mw.outputs.push_back(mpath);
            mw.write(em_outdir + "/run.manifest.json");
            return 0;
        }
        if (cmd_verify->parsed()) {
            if (vf_selftest) return selftest_verify();
            ManifestWriter mw;
            mw.command = "verify";
            weyl::HarmonicField field = load_field_arg(vf_measure, vf_field, mw);
            mw.add_input(vf_curve);
            auto curve = weyl::ProfileCurve::load_csv(vf_curve);
            weyl::WeylSolution sol(field);
            const int nf = vf_fine > 0 ? vf_fine : 2 * curve.size() - 1;
            weyl::ProfileCurve fine(
                nf,
                [&] {
                    std::vector<double> rr(nf);
                    auto gg = weyl::grid_for(nf);
                    for (int i = 0; i < nf; ++i) rr[i] = curve.r_at(gg->theta()[i]);
                    rr[0] = rr[nf - 1] = 0.0;
                    return rr;
                }(),
                [&] {
                    std::vector<double> zz(nf);
                    auto gg = weyl::grid_for(nf);
                    for (int i = 0; i < nf; ++i) zz[i] = curve.z_at(gg->theta()[i]);
                    return zz;
                }());
            auto pair = weyl::verify_with_refinement(sol, curve, fine);
            std::vector<std::pair<double, double>> pts;
            for (int k = 0; k < 8; ++k) {
                const double t = (k + 0.5) * M_PI / 8.0;
                pts.push_back({1.5 * curve.r_at(t) + 0.5, curve.z_at(t)});
            }
            auto conf = weyl::conformal_scalar_residual(sol, pts);
            std::printf("identity                sup            l2             slope\n");
            std::printf("hamiltonian     %14.6e %14.6e %8.2f\n", pair.hamiltonian.sup_residual,
                        pair.hamiltonian.l2_residual, pair.hamiltonian.refinement_slope);
            std::printf("momentum        %14.6e %14.6e %8.2f\n", pair.momentum.sup_residual,
                        pair.momentum.l2_residual, pair.momentum.refinement_slope);
            std::printf("conformal-trace %14.6e %14.6e     -\n", conf.sup_residual,
                        conf.l2_residual);
            auto mass = weyl::mass_report(sol, curve);
            std::printf("adm=%.12g hawking=%.12g area=%.12g horizon_equiv=%.12g\n", mass.adm,
                        mass.hawking, mass.boundary_area, mass.horizon_equiv_mass);
            if (!vf_out.empty()) {
                nlohmann::json doc;
                doc["hamiltonian"] = nlohmann::json::parse(pair.hamiltonian.to_json_text());
                doc["momentum"] = nlohmann::json::parse(pair.momentum.to_json_text());
                doc["conformal_trace"] = nlohmann::json::parse(conf.to_json_text());
                doc["masses"] = nlohmann::json::parse(mass.to_json_text());
                std::ofstream out(vf_out);
                out << doc.dump(2) << "\n";
                mw.outputs.push_back(vf_out);
            }
            mw.write((vf_out.empty() ? std::string("verify") : vf_out) + ".manifest.json");
            return 0;
        }
        if (cmd_invert->parsed()) {
            if (iv_selftest) return selftest_invert();
            ManifestWriter mw;
            mw.command = "invert";
            mw.add_input(iv_target);
            weyl::SolverConfig cfg;
            if (!iv_config.empty()) {
                const std::string text = read_file(iv_config);
                mw.add_config_text(text);
                cfg = weyl::SolverConfig::from_json_text(text);
            }
            weyl::BartnikTarget target;
            target.data = weyl::BoundaryData::load_csv(iv_target);
            target.provenance = weyl::BartnikTarget::Provenance::external;
            if (target.min_H_nonpositive())
                std::fprintf(stderr, "warning: target has min H <= 0\n");
            weyl::UnknownVector init;
            if (iv_radius > 0.0) {
                init = weyl::UnknownVector::flat_sphere(cfg.n_curve_modes / 2,
                                                        cfg.n_curve_modes - cfg.n_curve_modes / 2,
                                                        cfg.n_sources, iv_radius, target.data.n);
            } else {
                weyl::MetricProfile gamma;
                gamma.n = target.data.n;
                gamma.theta = target.data.theta;
                gamma.alpha = target.data.alpha;
                gamma.beta = target.data.beta;
                init = weyl::schwarzschild_seed(gamma, target.data.H, cfg);
            }
            auto rep = weyl::solve_bartnik_inverse(target, init, cfg);
            std::ofstream out(iv_out);
            out << rep.to_json_text() << "\n";
            std::printf("status=%s resid_sup=%.3e iters=%d\n", rep.status_name().c_str(),
                        rep.resid_sup, rep.iterations);
            mw.outputs.push_back(iv_out);
            mw.write(iv_out + ".manifest.json");
            return rep.converged ? 0 : 2;
        }
        if (cmd_scan->parsed()) {
            if (sc_selftest) {
                try {
                    selftest_scan();
                } catch (const weyl::NotMorse&) {
                    std::puts("selftest scan: round metric refused with NotMorse");
                    return 0;
                }
                return 2;
            }
#ifdef _OPENMP
            if (sc_jobs > 0) omp_set_num_threads(sc_jobs);
#endif
            ManifestWriter mw;
            mw.command = "scan";
            mw.add_input(sc_profile);
            auto gamma = weyl::MetricProfile::load_csv(sc_profile);
            weyl::SolverConfig cfg;
            if (!sc_config.empty()) {
                const std::string text = read_file(sc_config);
                mw.add_config_text(text);
                cfg = weyl::SolverConfig::from_json_text(text);
            }
            cfg.timings_in_csv = sc_timings;
            std::vector<double> grid = parse_grid_list(sc_grid);
            std::vector<weyl::SolveReport> reports;
            if (sc_mode == "h-scaling") {
                std::vector<double> hbase(gamma.n, 2.0);
                if (!sc_hbase.empty()) {
                    mw.add_input(sc_hbase);
                    auto bd = weyl::BoundaryData::load_csv(sc_hbase);
                    hbase = bd.H;
                }
                reports = weyl::h_scaling_scan(gamma, hbase, grid, cfg);
            } else if (sc_mode == "small-h") {
                reports = weyl::small_h_probe(gamma, grid, cfg);
            } else {
                std::fprintf(stderr, "unknown scan mode: %s\n", sc_mode.c_str());
                return 1;
            }
            weyl::write_scan_csv(sc_out, grid, reports, cfg.timings_in_csv);
            mw.outputs.push_back(sc_out);
            mw.write(sc_out + ".manifest.json");
            return 0;
        }
        if (cmd_masses->parsed()) {
            if (ms_selftest) return selftest_masses();
            ManifestWriter mw;
            mw.command = "masses";
            weyl::HarmonicField field = load_field_arg(ms_measure, ms_field, mw);
            mw.add_input(ms_curve);
            auto curve = weyl::ProfileCurve::load_csv(ms_curve);
            weyl::WeylSolution sol(field);
            auto rep = weyl::mass_report(sol, curve);
            std::ofstream out(ms_out);
            out << rep.to_json_text() << "\n";
            std::printf("%s\n", rep.to_json_text().c_str());
            mw.outputs.push_back(ms_out);
            mw.write(ms_out + ".manifest.json");
            return 0;
        }
    } catch (const weyl::Inadmissible& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
