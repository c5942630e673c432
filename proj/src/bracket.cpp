#include "bathyflow/bracket.hpp"

#include <set>
#include <stdexcept>

namespace bathyflow {

namespace {

std::shared_ptr<const Grid> common_grid(const CoeffSeq& f, const CoeffSeq& g) {
    std::shared_ptr<const Grid> grid;
    for (const auto* seq : {&f, &g})
        for (const auto& [l, c] : *seq) {
            if (!c.has_derivative())
                throw std::invalid_argument("bracket: missing derivative data for mode " +
                                            std::to_string(l));
            if (!grid) grid = c.grid_ptr();
            if (c.grid().size() != grid->size())
                throw std::invalid_argument("bracket: sequences on different grids");
        }
    return grid;
}

}  // namespace

SampledCoefficient bracket_mode(const CoeffSeq& f, const CoeffSeq& g, int m) {
    auto grid = common_grid(f, g);
    if (!grid) throw std::invalid_argument("bracket: empty sequences");
    std::vector<Complex> acc(grid->size(), Complex(0.0, 0.0));

    // paired accumulation keeps [f,f] an exact zero
    std::set<int> ls;
    for (const auto& [l, c] : f)
        if (l != 0 && g.count(m - l)) ls.insert(l);
    for (const auto& [l, c] : g)
        if (l != 0 && f.count(m - l)) ls.insert(l);

    const std::vector<Complex> zero(grid->size(), Complex(0.0, 0.0));
    for (int l : ls) {
        auto fi = f.find(l), gm = g.find(m - l);
        auto gi = g.find(l), fm = f.find(m - l);
        const auto& fv = fi != f.end() ? fi->second.values() : zero;
        const auto& gd = gm != g.end() ? gm->second.deriv_values() : zero;
        const auto& gv = gi != g.end() ? gi->second.values() : zero;
        const auto& fd = fm != f.end() ? fm->second.deriv_values() : zero;
        const double w = double(l);
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc[k] += w * (fv[k] * gd[k] - gv[k] * fd[k]);
    }

    auto env = fit_decay(*grid, acc);
    if (!env) env = DecayEnvelope{0.0, 1.0};
    return SampledCoefficient(grid, std::move(acc), {}, env);
}

CoeffSeq bracket(const CoeffSeq& f, const CoeffSeq& g) {
    std::set<int> targets;
    for (const auto& [lf, cf] : f)
        for (const auto& [lg, cg] : g) {
            targets.insert(lf + lg);
        }
    CoeffSeq out;
    for (int m : targets) out.emplace(m, bracket_mode(f, g, m));
    return out;
}

}  // namespace bathyflow
