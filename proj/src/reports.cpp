#include "bathyflow/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bathyflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_layer_csv(const ExpansionState& st, const std::string& path) {
    std::ostringstream out;
    out << "j,m,n,x,re_b,im_b,re_db,im_db\n";
    for (int j = 0; j <= st.max_order(); ++j)
        for (const auto& [key, c] : st.layers[j].coeffs) {
            const auto [m, n] = key;
            for (std::size_t k = 0; k < c.values().size(); ++k) {
                out << j << ',' << m << ',' << n << ',' << format_double((*st.grid)[k]) << ','
                    << format_double(c.values()[k].real()) << ','
                    << format_double(c.values()[k].imag()) << ','
                    << format_double(c.deriv_values()[k].real()) << ','
                    << format_double(c.deriv_values()[k].imag()) << '\n';
            }
        }
    write_text(path, out.str());
}

LoadedLayers read_layer_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    LoadedLayers out;
    std::string line;
    std::getline(f, line);  // header
    std::map<std::tuple<int, int, int>, std::size_t> counts;
    bool first_block_done = false;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        int j, m, n;
        double x, rb, ib, rd, id;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf,%lf,%lf,%lf", &j, &m, &n, &x, &rb,
                        &ib, &rd, &id) != 8)
            throw std::runtime_error("malformed layer csv row: " + line);
        auto& mode = out.modes[{j, m, n}];
        mode.first.emplace_back(rb, ib);
        mode.second.emplace_back(rd, id);
        out.max_order = std::max(out.max_order, j);
        if (!first_block_done) {
            if (!out.x.empty() && x < out.x.back())
                first_block_done = true;
            else
                out.x.push_back(x);
        }
    }
    return out;
}

SymmetryReport loaded_symmetry_check(const LoadedLayers& layers) {
    SymmetryReport rep;
    for (const auto& [key, mode] : layers.modes) {
        const auto [j, m, n] = key;
        auto odd = layers.modes.find({j, -m, n});
        auto cnj = layers.modes.find({j, -m, -n});
        if (odd == layers.modes.end() || cnj == layers.modes.end()) {
            rep.odd_violation = std::numeric_limits<double>::infinity();
            continue;
        }
        for (std::size_t k = 0; k < mode.first.size(); ++k) {
            rep.odd_violation = std::max(rep.odd_violation,
                                         std::abs(mode.first[k] + odd->second.first[k]));
            rep.conjugate_violation =
                std::max(rep.conjugate_violation,
                         std::abs(mode.first[k] - std::conj(cnj->second.first[k])));
        }
    }
    return rep;
}

nlohmann::json validation_json(const ValidationReport& rep) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"detail", c.detail},
                          {"value", c.value}});
    return {{"checks", checks},
            {"threshold", rep.threshold},
            {"hard_ok", rep.hard_ok},
            {"certified", rep.certified}};
}

nlohmann::json convergence_report(const ExpansionState& st, const ValidationReport& rep) {
    nlohmann::json ratios = nlohmann::json::array();
    for (std::size_t j = 1; j < st.eps.size(); ++j)
        if (st.eps[j - 1] > 0) ratios.push_back(st.eps[j] / st.eps[j - 1]);
    return {{"eps", st.eps},
            {"ratios", ratios},
            {"L_measured", st.L_measured},
            {"L_certificate", st.L_certificate},
            {"stopped_early", st.stopped_early},
            {"max_order", st.max_order()},
            {"grid", {{"n", st.grid->size()}, {"x_max", st.grid->x_max()}}},
            {"validation", validation_json(rep)}};
}

void write_trajectory_csv(const Trajectory& tr, const std::string& path) {
    std::ostringstream out;
    out << "t,a,b" << (tr.conserved.empty() ? "" : ",conserved") << "\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        out << format_double(tr.times[i]) << ',' << format_double(tr.states[i][0]) << ','
            << format_double(tr.states[i][1]);
        if (!tr.conserved.empty()) out << ',' << format_double(tr.conserved[i]);
        out << '\n';
    }
    write_text(path, out.str());
}

void write_section_csv(const Trajectory& tr, const std::string& path) {
    std::ostringstream out;
    out << "t,action\n";
    for (std::size_t i = 1; i < tr.times.size(); ++i) {
        const double a0 = std::remainder(tr.states[i - 1][1], 2.0 * M_PI);
        const double a1 = std::remainder(tr.states[i][1], 2.0 * M_PI);
        if (a0 == 0.0 || (a0 < 0) == (a1 < 0) || std::abs(a1 - a0) > M_PI) continue;
        const double w = -a0 / (a1 - a0);
        out << format_double(tr.times[i - 1] + w * (tr.times[i] - tr.times[i - 1])) << ','
            << format_double(tr.states[i - 1][0] + w * (tr.states[i][0] - tr.states[i - 1][0]))
            << '\n';
    }
    write_text(path, out.str());
}

}  // namespace bathyflow
