#pragma once

#include <string>

#include "bathyflow/dynamics.hpp"
#include "bathyflow/hierarchy.hpp"

#include <json.hpp>

namespace bathyflow {

/// Doubles are printed with 17 significant digits everywhere so reruns can be
/// compared bit for bit.
std::string format_double(double v);

void write_text(const std::string& path, const std::string& content);
void write_json(const std::string& path, const nlohmann::json& j);

void write_layer_csv(const ExpansionState& st, const std::string& path);

/// Layers as read back from disk; used by verification so tampered artifacts
/// are caught rather than silently recomputed.
struct LoadedLayers {
    // (j, m, n) -> samples (b, b')
    std::map<std::tuple<int, int, int>, std::pair<std::vector<Complex>, std::vector<Complex>>>
        modes;
    std::vector<double> x;
    int max_order = -1;
};
LoadedLayers read_layer_csv(const std::string& path);

/// sup violations of the two layer symmetries on loaded data.
SymmetryReport loaded_symmetry_check(const LoadedLayers& layers);

nlohmann::json convergence_report(const ExpansionState& st, const ValidationReport& rep);
nlohmann::json validation_json(const ValidationReport& rep);

void write_trajectory_csv(const Trajectory& tr, const std::string& path);
/// Section dump at phi == 0 (mod 2pi): crossing times and actions.
void write_section_csv(const Trajectory& tr, const std::string& path);

}  // namespace bathyflow
