#pragma once

#include <optional>
#include <string>

#include "bathyflow/bathymetry.hpp"
#include "bathyflow/hierarchy.hpp"
#include "bathyflow/normal_form.hpp"

namespace bathyflow {

struct TraceConfig {
    double I0 = 0.02;
    double T = 100.0;
    double h = 0.0;  // 0: pick from the NF frequency
    std::vector<Vec2> frozen_starts;
    double frozen_T = 50.0;
    double frozen_h = 1e-2;
};

struct RunConfig {
    ChannelParams channel;
    int kappa = 1;
    int m_tilde = 1;
    double amplitude = 2.0;

    std::string bathymetry_kind = "modes";  // modes | table | flat
    std::vector<BathymetryMode> modes;
    std::string table_path;

    HierarchyOptions run;
    std::size_t grid_n = 2048;
    double x_max = 0.0;  // 0: max(10, 30/nu)
    std::vector<double> mu_sweep;

    NormalFormOptions nf;
    TraceConfig trace;

    std::string out_dir = "out";
    bool layer_csv = true;

    WaveParams wave() const;
    std::shared_ptr<const Grid> make_grid() const;
    BathymetrySpec make_bathymetry(std::shared_ptr<const Grid> grid) const;
};

RunConfig load_config(const std::string& path);

}  // namespace bathyflow
