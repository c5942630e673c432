#include "bathyflow/config.hpp"

#include <fstream>

#include <json.hpp>

namespace bathyflow {

using nlohmann::json;

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::vector<BathymetryTableRow> read_table_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read bathymetry table " + path);
    std::vector<BathymetryTableRow> rows;
    std::string line;
    std::getline(f, line);  // header: l,x,re,im
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        BathymetryTableRow r;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &r.l, &r.x, &r.re, &r.im) != 4)
            throw std::runtime_error("malformed bathymetry row: " + line);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

WaveParams RunConfig::wave() const {
    return WaveParams::with_dispersion(channel, kappa, m_tilde, amplitude);
}

std::shared_ptr<const Grid> RunConfig::make_grid() const {
    if (x_max > 0.0) return Grid::make(grid_n, x_max);
    return Grid::default_for_decay(channel.nu, grid_n);
}

BathymetrySpec RunConfig::make_bathymetry(std::shared_ptr<const Grid> grid) const {
    if (bathymetry_kind == "flat") return BathymetrySpec{};
    if (bathymetry_kind == "modes") return build_bathymetry(grid, modes);
    if (bathymetry_kind == "table")
        return build_bathymetry_from_table(grid, read_table_csv(table_path));
    throw std::invalid_argument("unknown bathymetry kind: " + bathymetry_kind);
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config " + path);
    json j = json::parse(f);

    RunConfig c;
    if (j.contains("channel")) {
        const auto& ch = j["channel"];
        maybe(ch, "F", c.channel.F);
        maybe(ch, "Fcal", c.channel.Fcal);
        maybe(ch, "d", c.channel.depth);
        maybe(ch, "mu", c.channel.mu);
        maybe(ch, "nu", c.channel.nu);
        maybe(ch, "Mcal", c.channel.Mcal);
        maybe(ch, "rho", c.channel.rho);
    }
    if (j.contains("wave")) {
        const auto& w = j["wave"];
        maybe(w, "kappa", c.kappa);
        maybe(w, "m_tilde", c.m_tilde);
        maybe(w, "A", c.amplitude);
    }
    if (j.contains("bathymetry")) {
        const auto& b = j["bathymetry"];
        maybe(b, "kind", c.bathymetry_kind);
        maybe(b, "path", c.table_path);
        if (b.contains("modes"))
            for (const auto& m : b["modes"]) {
                BathymetryMode mode;
                mode.l = m.at("l").get<int>();
                mode.amplitude = Complex(m.at("a").get<double>(),
                                         m.value("a_imag", 0.0));
                mode.nu = m.value("nu", c.channel.nu);
                c.modes.push_back(mode);
            }
    }
    if (j.contains("run")) {
        const auto& r = j["run"];
        maybe(r, "J_max", c.run.J_max);
        maybe(r, "M_max", c.run.M_max);
        maybe(r, "stop_eps", c.run.stop_eps);
        maybe(r, "tol_case", c.run.tol_case);
        maybe(r, "tol_tail", c.run.tol_tail);
        maybe(r, "allow_uncertified", c.run.allow_uncertified);
        maybe(r, "jobs", c.run.jobs);
        maybe(r, "grid_n", c.grid_n);
        maybe(r, "x_max", c.x_max);
        if (r.contains("mu_sweep")) c.mu_sweep = r["mu_sweep"].get<std::vector<double>>();
    }
    if (j.contains("nf")) {
        const auto& n = j["nf"];
        maybe(n, "degree", c.nf.degree);
        maybe(n, "map_degree", c.nf.map_degree);
        maybe(n, "radius_tolerance", c.nf.radius_tolerance);
    }
    if (j.contains("trace")) {
        const auto& t = j["trace"];
        maybe(t, "I0", c.trace.I0);
        maybe(t, "T", c.trace.T);
        maybe(t, "h", c.trace.h);
        maybe(t, "frozen_T", c.trace.frozen_T);
        maybe(t, "frozen_h", c.trace.frozen_h);
        if (t.contains("frozen_starts"))
            for (const auto& s : t["frozen_starts"])
                c.trace.frozen_starts.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    }
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        maybe(o, "dir", c.out_dir);
        maybe(o, "layer_csv", c.layer_csv);
    }
    return c;
}

}  // namespace bathyflow
