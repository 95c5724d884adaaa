#ifndef PBALL_NORMS_HPP
#define PBALL_NORMS_HPP

// Weighted sup norms used to size remainders in expanded variables:
//
//   ||eta||_**   = sup (1 + |y - xi'|^2)^4 |eta(y)|
//   ||eta||_*    = sup sum_{i=0..3} (1 + |y - xi'|^2)^((2+i)/2) |D^i eta(y)|
//
// Fields here are radial samples, so each grid node stands for a whole
// sphere; the weight is taken at the far side of the sphere (its shell
// supremum), which is exact for a centered weight (offset 0). The discrete
// sup over nodes is a lower bound of the continuum one.

#include <cmath>
#include <stdexcept>

#include "pball/grid.hpp"

namespace pball {

enum class WeightedNorm { Star, StarStar };

inline double weighted_norm(const RadialField& f, double center_offset, WeightedNorm which) {
    if (center_offset < 0.0) throw std::invalid_argument("weighted_norm: offset must be >= 0");
    if (which == WeightedNorm::Star && (!f.d1 || !f.d2 || !f.d3))
        throw std::invalid_argument("weighted_norm: star norm needs derivative stacks up to order 3");

    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double rr = f.grid.node(i) + center_offset;
        const double w = 1.0 + rr * rr;
        double val;
        if (which == WeightedNorm::StarStar) {
            val = w * w * w * w * std::fabs(f.values[i]);
        } else {
            val = w * std::fabs(f.values[i]);
            val += std::pow(w, 1.5) * std::fabs((*f.d1)[i]);
            val += w * w * std::fabs((*f.d2)[i]);
            val += std::pow(w, 2.5) * std::fabs((*f.d3)[i]);
        }
        sup = std::max(sup, val);
    }
    return sup;
}

} // namespace pball

#endif // PBALL_NORMS_HPP
