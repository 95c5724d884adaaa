#ifndef PBALL_LINALG_HPP
#define PBALL_LINALG_HPP

// Banded LU with partial pivoting, sized for the 1-D finite-difference
// systems in this project (tridiagonal Laplace solves, bandwidth-2 coupled
// Newton systems). Band storage follows the usual convention: column j holds
// matrix rows j-ku .. j+kl, plus kl rows of pivoting fill on top.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pball {

class BandedMatrix {
  public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
        : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(n * ld_, 0.0) {}

    std::size_t size() const { return n_; }

    double& at(std::size_t i, std::size_t j) {
        check_band(i, j);
        return ab_[j * ld_ + (kl_ + ku_ + i - j)];
    }
    double get(std::size_t i, std::size_t j) const {
        if (!in_band(i, j)) return 0.0;
        return ab_[j * ld_ + (kl_ + ku_ + i - j)];
    }

    /// In-place LU factorization with partial pivoting.
    /// Throws std::runtime_error on an exactly singular pivot.
    void factor();

    /// Solve A x = b using the stored factors; b is overwritten with x.
    void solve(std::vector<double>& b) const;

    bool in_band(std::size_t i, std::size_t j) const {
        return (i <= j + kl_) && (j <= i + kl_ + ku_); // kl_ fill rows above appear after pivoting
    }

  private:
    void check_band(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_ || !in_band(i, j))
            throw std::out_of_range("BandedMatrix: entry outside band");
    }

    double& raw(std::size_t i, std::size_t j) { return ab_[j * ld_ + (kl_ + ku_ + i - j)]; }
    double raw(std::size_t i, std::size_t j) const { return ab_[j * ld_ + (kl_ + ku_ + i - j)]; }

    std::size_t n_, kl_, ku_, ld_;
    std::vector<double> ab_;
    std::vector<std::size_t> pivots_;
    bool factored_ = false;
};

} // namespace pball

#endif // PBALL_LINALG_HPP
