#include "pball/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pball {

void BandedMatrix::factor() {
    pivots_.assign(n_, 0);
    const std::size_t width = kl_ + ku_; // widest reach after pivot swaps
    for (std::size_t j = 0; j < n_; ++j) {
        // pivot search within the kl rows below the diagonal
        const std::size_t last_row = std::min(n_ - 1, j + kl_);
        std::size_t p = j;
        double best = std::fabs(raw(j, j));
        for (std::size_t i = j + 1; i <= last_row; ++i) {
            const double v = std::fabs(raw(i, j));
            if (v > best) { best = v; p = i; }
        }
        pivots_[j] = p;
        if (best == 0.0) throw std::runtime_error("BandedMatrix::factor: singular pivot");

        const std::size_t last_col = std::min(n_ - 1, j + width);
        if (p != j)
            for (std::size_t k = j; k <= last_col; ++k) std::swap(raw(j, k), raw(p, k));

        const double inv = 1.0 / raw(j, j);
        for (std::size_t i = j + 1; i <= last_row; ++i) {
            const double l = raw(i, j) * inv;
            raw(i, j) = l;
            if (l == 0.0) continue;
            for (std::size_t k = j + 1; k <= last_col; ++k) raw(i, k) -= l * raw(j, k);
        }
    }
    factored_ = true;
}

void BandedMatrix::solve(std::vector<double>& b) const {
    if (!factored_) throw std::runtime_error("BandedMatrix::solve: factor() not called");
    if (b.size() != n_) throw std::invalid_argument("BandedMatrix::solve: size mismatch");

    for (std::size_t j = 0; j < n_; ++j) {
        if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
        const std::size_t last_row = std::min(n_ - 1, j + kl_);
        for (std::size_t i = j + 1; i <= last_row; ++i) b[i] -= raw(i, j) * b[j];
    }
    const std::size_t width = kl_ + ku_;
    for (std::size_t jj = n_; jj-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, jj + width);
        double s = b[jj];
        for (std::size_t k = jj + 1; k <= last_col; ++k) s -= raw(jj, k) * b[k];
        b[jj] = s / raw(jj, jj);
    }
}

} // namespace pball
