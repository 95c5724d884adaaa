#ifndef PBALL_GRID_HPP
#define PBALL_GRID_HPP

// Radial meshes on the annulus [inner, outer] and fields sampled on them.
//
// The mesh is uniform in z = log r, which clusters nodes toward the hole and
// resolves every intermediate scale (in particular the bubble scale mu) with
// the same relative spacing. All finite-difference stencils downstream exploit
// the exact uniformity in z.

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pball {

class RadialGrid {
  public:
    /// Log-uniform grid with M+1 nodes, r_0 = inner, r_M = outer.
    RadialGrid(double inner, double outer, std::size_t num_intervals)
        : inner_(inner), outer_(outer) {
        if (!(inner > 0.0) || !(outer > inner))
            throw std::invalid_argument("RadialGrid: need 0 < inner < outer");
        if (num_intervals < 8) throw std::invalid_argument("RadialGrid: too few intervals");
        const std::size_t m = num_intervals;
        const double z0 = std::log(inner);
        const double z1 = std::log(outer);
        hz_ = (z1 - z0) / static_cast<double>(m);
        nodes_.resize(m + 1);
        for (std::size_t i = 1; i < m; ++i)
            nodes_[i] = std::exp(z0 + hz_ * static_cast<double>(i));
        nodes_.front() = inner;
        nodes_.back() = outer;
    }

    double inner() const { return inner_; }
    double outer() const { return outer_; }
    double log_spacing() const { return hz_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t intervals() const { return nodes_.size() - 1; }
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

    std::size_t count_below(double radius) const {
        std::size_t c = 0;
        for (double r : nodes_)
            if (r < radius) ++c;
        return c;
    }

    /// Geometrically rescaled copy (nodes multiplied by `factor`); a
    /// log-uniform grid stays log-uniform with the same spacing.
    RadialGrid scaled(double factor) const {
        if (factor <= 0.0) throw std::invalid_argument("RadialGrid::scaled: factor > 0");
        RadialGrid g(*this);
        g.inner_ *= factor;
        g.outer_ *= factor;
        for (double& r : g.nodes_) r *= factor;
        return g;
    }

    bool same_nodes(const RadialGrid& other) const {
        return nodes_ == other.nodes_;
    }

  private:
    double inner_, outer_, hz_ = 0.0;
    std::vector<double> nodes_;
};

/// Scalar radial field sampled on a RadialGrid, optionally carrying its
/// Laplacian companion and radial derivative stacks up to third order.
struct RadialField {
    RadialGrid grid;
    std::vector<double> values;
    std::optional<std::vector<double>> lap; // Delta u at the nodes
    std::optional<std::vector<double>> d1, d2, d3;

    explicit RadialField(RadialGrid g) : grid(std::move(g)), values(grid.size(), 0.0) {}
    RadialField(RadialGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("RadialField: values/grid size mismatch");
    }

    std::size_t size() const { return values.size(); }

    template <class F>
    static RadialField sample(RadialGrid g, F&& f) {
        RadialField out(std::move(g));
        for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = f(out.grid.node(i));
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::fabs(v));
        return m;
    }
};

/// Fill d1..d3 with radial derivatives via uniform stencils in z = log r:
///   d/dr   = e^-z d/dz,
///   d2/dr2 = e^-2z (d2/dz2 - d/dz),
///   d3/dr3 = e^-3z (d3/dz3 - 3 d2/dz2 + 2 d/dz).
/// Interior nodes use central differences; the outermost two nodes on each
/// side reuse the nearest interior stencil values.
void fill_derivatives(RadialField& f);

/// Interpolate `f` at radius r (cubic Lagrange in z = log r; clamps to the
/// grid range). Returns 0 outside [inner, outer] when `zero_outside` is set.
double interpolate(const RadialField& f, double r, bool zero_outside = false);

} // namespace pball

#endif // PBALL_GRID_HPP
