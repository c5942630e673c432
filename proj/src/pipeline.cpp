#include "bathyflow/pipeline.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "bathyflow/reports.hpp"

namespace bathyflow {

namespace fs = std::filesystem;
using nlohmann::json;

void logmsg(int level, const std::string& msg) {
    static const int threshold = [] {
        const char* env = std::getenv("BATHYFLOW_LOG");
        if (!env) return 2;
        const std::string v(env);
        if (v == "debug") return 0;
        if (v == "info") return 1;
        if (v == "warn") return 2;
        if (v == "error") return 3;
        if (v == "off") return 4;
        return 2;
    }();
    static const char* names[] = {"debug", "info", "warn", "error"};
    if (level >= threshold && level < 4)
        std::cerr << "bathyflow [" << names[level] << "] " << msg << "\n";
}

namespace {

struct SolveOutput {
    ExpansionState state;
    ValidationReport report;
};

SolveOutput run_solve(const RunConfig& cfg, double mu_override = -1.0,
                      bool force_uncertified = false) {
    RunConfig c = cfg;
    if (mu_override >= 0.0) c.channel.mu = mu_override;
    auto grid = c.make_grid();
    BathymetrySpec bathy = c.make_bathymetry(grid);
    HierarchyOptions opts = c.run;
    if (force_uncertified) opts.allow_uncertified = true;
    SolveOutput out;
    out.report = validate(c.channel, c.wave());
    out.state = run_hierarchy(c.channel, c.wave(), bathy, grid, opts);
    return out;
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

}  // namespace

int cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    try {
        SolveOutput res = run_solve(cfg);
        write_json(out_dir + "/convergence.json", convergence_report(res.state, res.report));
        if (cfg.layer_csv) write_layer_csv(res.state, out_dir + "/layers.csv");
        logmsg(1, "solve: " + std::to_string(res.state.max_order() + 1) + " layers, L_measured=" +
                      format_double(res.state.L_measured));
        return kOk;
    } catch (const ValidationError& e) {
        write_json(out_dir + "/convergence.json",
                   {{"error", "validation"}, {"validation", validation_json(e.report)}});
        logmsg(3, std::string("solve: ") + e.what());
        return kValidation;
    } catch (const DivergenceError& e) {
        write_json(out_dir + "/convergence.json", {{"error", "divergence"}, {"eps", e.eps}});
        logmsg(3, std::string("solve: ") + e.what());
        return kDivergence;
    }
}

int cmd_verify(const RunConfig& cfg, const std::string& out_dir) {
    const std::string layer_path = out_dir + "/layers.csv";
    if (!fs::exists(layer_path)) {
        logmsg(3, "verify: missing artifact " + layer_path + " (run solve first)");
        return kConfigError;
    }

    json props = json::array();
    bool all_ok = true;
    auto push = [&](const std::string& name, bool ok, double value, double threshold,
                    bool gating = true) {
        props.push_back({{"name", name},
                         {"passed", ok},
                         {"value", value},
                         {"threshold", threshold},
                         {"gating", gating}});
        if (gating) all_ok = all_ok && ok;
        logmsg(ok ? 1 : 3, "verify: " + name + (ok ? " ok (" : " FAILED (") +
                               format_double(value) + ")");
    };

    try {
        // artifact-level symmetry: catches tampered dumps
        LoadedLayers loaded = read_layer_csv(layer_path);
        SymmetryReport loaded_sym = loaded_symmetry_check(loaded);
        push("artifact odd symmetry", loaded_sym.odd_violation <= 1e-12,
             loaded_sym.odd_violation, 1e-12);
        push("artifact conjugate symmetry", loaded_sym.conjugate_violation <= 1e-12,
             loaded_sym.conjugate_violation, 1e-12);

        SolveOutput res = run_solve(cfg);
        const ExpansionState& st = res.state;

        SymmetryReport sym = symmetry_check(st);
        push("enforced odd symmetry", sym.odd_violation <= 1e-12, sym.odd_violation, 1e-12);
        push("enforced conjugate symmetry", sym.conjugate_violation <= 1e-12,
             sym.conjugate_violation, 1e-12);

        const double nflip = independent_nflip_check(st, cfg.run);
        push("independent n-flip resolve", nflip <= 1e-10, nflip, 1e-10);

        const double bnd = boundary_check(st, 1000, 20240811u);
        push("wall impenetrability", bnd <= 1e-10, bnd, 1e-10);

        // spatial decay of every layer coefficient
        double worst_rate = std::numeric_limits<double>::infinity();
        for (int j = 1; j <= st.max_order(); ++j)
            for (const auto& [key, c] : st.layers[j].coeffs)
                if (c.has_decay() && c.decay().amplitude > 0)
                    worst_rate = std::min(worst_rate, c.decay().rate);
        const bool any_layers = worst_rate < std::numeric_limits<double>::infinity();
        push("layer decay rate", !any_layers || worst_rate >= cfg.channel.nu / 2.0 - 0.05,
             any_layers ? worst_rate : 0.0, cfg.channel.nu / 2.0 - 0.05);

        const double res_here = pde_residual(st, 200, 20240812u);
        push("pde residual magnitude",
             res_here <= std::max(1e-9, 10.0 * std::pow(st.L_measured, st.max_order()) *
                                            st.eps[0] * cfg.channel.mu * cfg.channel.Mcal),
             res_here, 0.0, false);

        // bound certificates per solved mode (diagnostic)
        {
            const double sigma = st.wave.sigma;
            const double alpha = st.channel.Fcal / (2.0 * sigma);
            const FamilyBounds fb = family_bounds(st.channel.F, alpha);
            double worst_margin = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= st.max_order(); ++j)
                for (const auto& [key, R] : st.layers[j].rhs) {
                    const auto [m, n] = key;
                    if (m <= 0 || n != st.wave.kappa) continue;
                    const auto& B = st.layers[j].coeffs.at(key);
                    OdeSolution pseudo;
                    pseudo.B = B;
                    const auto coeffs =
                        classify(alpha, st.channel.F + double(m) * m, cfg.run.tol_case);
                    double M = R.has_decay() ? R.decay().amplitude : R.sup_abs();
                    auto cert = bound_certificate(pseudo, coeffs, M, st.channel.nu, 1.0, fb);
                    worst_margin = std::min(worst_margin,
                                            std::min(cert.margin_B, cert.margin_dB));
                }
            push("ode bound certificate margin",
                 worst_margin >= 1.0 || worst_margin == std::numeric_limits<double>::infinity(),
                 worst_margin, 1.0, false);
        }

        // residual scaling in mu
        if (cfg.mu_sweep.size() >= 2) {
            std::vector<double> lm, lr;
            for (double mu : cfg.mu_sweep) {
                SolveOutput sw = run_solve(cfg, mu, true);
                const double r = pde_residual(sw.state, 200, 20240813u, cfg.run.J_max);
                lm.push_back(std::log(mu));
                lr.push_back(std::log(std::max(r, 1e-300)));
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < lm.size(); ++i) {
                sx += lm[i];
                sy += lr[i];
                sxx += lm[i] * lm[i];
                sxy += lm[i] * lr[i];
            }
            const double nn = double(lm.size());
            const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
            const double expect = double(cfg.run.J_max + 1);
            push("residual scaling exponent", std::abs(slope - expect) <= 0.3, slope, expect);
        }

        json rep = {{"properties", props}, {"all_passed", all_ok}};
        write_json(out_dir + "/verify.json", rep);
        return all_ok ? kOk : kVerifyFailed;
    } catch (const ValidationError& e) {
        logmsg(3, std::string("verify: ") + e.what());
        return kValidation;
    } catch (const DivergenceError& e) {
        logmsg(3, std::string("verify: ") + e.what());
        return kDivergence;
    }
}

int cmd_nf(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const WaveParams wave = cfg.wave();
    try {
        auto [chain, nf] = normal_form_chain(wave, cfg.nf);

        // deterministic disc sample
        std::vector<Vec2> pts;
        unsigned s = 12345u;
        auto rnd = [&s] {
            s = s * 1664525u + 1013904223u;
            return double(s) / 4294967296.0;
        };
        for (int i = 0; i < 100; ++i) {
            const double r = nf.radius * (0.1 + 0.85 * rnd());
            const double ph = 2.0 * M_PI * rnd();
            pts.push_back(pq_to_action_angle(r * std::cos(ph), r * std::sin(ph), chain.omega0()));
        }
        SymplecticReport sym = symplectic_check(chain, pts);

        json factors = json::array();
        for (const auto& f : sym.factors)
            factors.push_back({{"name", f.name}, {"det_error", f.det_error}});
        json eq = json::array();
        for (const auto& e : equilibria(wave))
            eq.push_back({{"p", e.p},
                          {"q", e.q},
                          {"type", e.type == EquilibriumType::Elliptic ? "elliptic" : "hyperbolic"},
                          {"eig_re", e.eigenvalue.real()},
                          {"eig_im", e.eigenvalue.imag()}});
        json rep = {{"lambda", nf.lambda},
                    {"omega", nf.omega},
                    {"quadratic_coeff", nf.quadratic_coeff},
                    {"alpha", nf.alpha},
                    {"radius", nf.radius},
                    {"angle_residue", nf.angle_residue},
                    {"degree", nf.degree},
                    {"map_degree", nf.map_degree},
                    {"equilibria", eq},
                    {"chain",
                     {{"factors", factors},
                      {"composed_det_error", sym.composed_det_error},
                      {"round_trip_error", sym.round_trip_error}}}};
        write_json(out_dir + "/normal_form.json", rep);

        std::ostringstream trace;
        trace << "I,phi,p,q,I_back,phi_back\n";
        for (const auto& pt : pts) {
            const Vec2 pq = chain.to_galilean(pt);
            const Vec2 back = chain.from_galilean(pq);
            trace << format_double(pt[0]) << ',' << format_double(pt[1]) << ','
                  << format_double(pq[0]) << ',' << format_double(pq[1]) << ','
                  << format_double(back[0]) << ',' << format_double(back[1]) << '\n';
        }
        write_text(out_dir + "/chain_trace.csv", trace.str());
        return kOk;
    } catch (const std::invalid_argument& e) {
        logmsg(3, std::string("nf: ") + e.what());
        return kValidation;
    }
}

int cmd_trace(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    try {
        SolveOutput res = run_solve(cfg);
        auto [chain, nf] = normal_form_chain(cfg.wave(), cfg.nf);
        auto st = std::make_shared<ExpansionState>(std::move(res.state));
        HamiltonianModel model = assemble_model(std::move(chain), std::move(nf), st);

        ProbeOptions popts;
        popts.h = cfg.trace.h;
        const double I0 = std::min(cfg.trace.I0, 0.9 * model.action_max());
        ProbeResult probe = stability_probe(model, I0, cfg.trace.T, popts);
        write_trajectory_csv(probe.trajectory, out_dir + "/probe_actions.csv");
        write_section_csv(probe.trajectory, out_dir + "/probe_section.csv");

        json frozen = json::array();
        int idx = 0;
        for (const auto& start : cfg.trace.frozen_starts) {
            Trajectory tr = integrate_frozen(st->wave, start, 0.0, cfg.trace.frozen_T,
                                             cfg.trace.frozen_h);
            double drift = 0.0;
            for (double e : tr.conserved) drift = std::max(drift, std::abs(e - tr.conserved[0]));
            frozen.push_back({{"start", {start[0], start[1]}}, {"energy_drift", drift}});
            write_trajectory_csv(tr, out_dir + "/frozen_" + std::to_string(idx++) + ".csv");
        }

        json rep = {{"I0", I0},
                    {"T", cfg.trace.T},
                    {"t_start", probe.t_start},
                    {"excursion", probe.excursion},
                    {"excursion_over_mu", probe.excursion / st->channel.mu},
                    {"frozen", frozen}};
        write_json(out_dir + "/trace.json", rep);
        return kOk;
    } catch (const ValidationError& e) {
        logmsg(3, std::string("trace: ") + e.what());
        return kValidation;
    } catch (const DivergenceError& e) {
        logmsg(3, std::string("trace: ") + e.what());
        return kDivergence;
    } catch (const std::invalid_argument& e) {
        logmsg(3, std::string("trace: ") + e.what());
        return kValidation;
    }
}

int cmd_report(const std::string& out_dir) {
    bool found = false;
    for (const char* name : {"convergence.json", "verify.json", "normal_form.json", "trace.json"}) {
        const std::string path = out_dir + "/" + std::string(name);
        if (!fs::exists(path)) continue;
        found = true;
        std::ifstream f(path);
        json j = json::parse(f);
        std::cout << "== " << name << " ==\n" << j.dump(2) << "\n";
    }
    if (!found) {
        logmsg(3, "report: no artifacts in " + out_dir);
        return kConfigError;
    }
    return kOk;
}

}  // namespace bathyflow
