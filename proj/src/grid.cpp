#include "pball/grid.hpp"

#include <algorithm>
#include <array>

namespace pball {

void fill_derivatives(RadialField& f) {
    const std::size_t m = f.size();
    if (m < 5) throw std::invalid_argument("fill_derivatives: need at least 5 nodes");
    const double h = f.grid.log_spacing();
    const auto& u = f.values;
    std::vector<double> uz(m), uzz(m), uzzz(m);

    for (std::size_t i = 1; i + 1 < m; ++i) {
        uz[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
        uzz[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    }
    for (std::size_t i = 2; i + 2 < m; ++i)
        uzzz[i] = (u[i + 2] - 2.0 * u[i + 1] + 2.0 * u[i - 1] - u[i - 2]) / (2.0 * h * h * h);

    // one-sided fallback at the edges
    uz[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    uz[m - 1] = (3.0 * u[m - 1] - 4.0 * u[m - 2] + u[m - 3]) / (2.0 * h);
    uzz[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (h * h);
    uzz[m - 1] = (2.0 * u[m - 1] - 5.0 * u[m - 2] + 4.0 * u[m - 3] - u[m - 4]) / (h * h);
    uzzz[0] = uzzz[1] = uzzz[2];
    uzzz[m - 1] = uzzz[m - 2] = uzzz[m - 3];

    f.d1.emplace(m);
    f.d2.emplace(m);
    f.d3.emplace(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = f.grid.node(i);
        (*f.d1)[i] = uz[i] / r;
        (*f.d2)[i] = (uzz[i] - uz[i]) / (r * r);
        (*f.d3)[i] = (uzzz[i] - 3.0 * uzz[i] + 2.0 * uz[i]) / (r * r * r);
    }
}

double interpolate(const RadialField& f, double r, bool zero_outside) {
    const auto& nodes = f.grid.nodes();
    if (r < nodes.front() || r > nodes.back()) {
        if (zero_outside) return 0.0;
        r = std::clamp(r, nodes.front(), nodes.back());
    }
    const double z = std::log(r);
    const double z0 = std::log(nodes.front());
    const double h = f.grid.log_spacing();
    const std::size_t m = f.size();

    // pick a 4-node window centered at the bracketing interval
    auto k = static_cast<std::ptrdiff_t>((z - z0) / h);
    k = std::clamp<std::ptrdiff_t>(k - 1, 0, static_cast<std::ptrdiff_t>(m) - 4);

    std::array<double, 4> zi, ui;
    for (int j = 0; j < 4; ++j) {
        zi[j] = std::log(nodes[static_cast<std::size_t>(k + j)]);
        ui[j] = f.values[static_cast<std::size_t>(k + j)];
    }
    double out = 0.0;
    for (int j = 0; j < 4; ++j) {
        double w = 1.0;
        for (int l = 0; l < 4; ++l)
            if (l != j) w *= (z - zi[l]) / (zi[j] - zi[l]);
        out += w * ui[j];
    }
    return out;
}

} // namespace pball
