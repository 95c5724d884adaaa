#ifndef PBALL_CORE_HPP
#define PBALL_CORE_HPP

// Dimension-dependent constants for the critical bi-Laplacian problem
//   Delta^2 u = u^((N+4)/(N-4))   on a ball pierced by a small hole,
// with the hinged (u = Delta u = 0) boundary conditions.
//
// Everything here is a closed form of the spatial dimension N >= 5:
// the critical exponent p, the blow-up exponent sigma, the bubble
// normalization alpha_N, and measure/normalization constants.

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pball {

/// Exact rational number (reduced, positive denominator).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// pow() that detours through log space once the exponent is large enough
/// that intermediate powers of tiny bases could leave the double range.
inline double stable_pow(double base, double expo) {
    if (base <= 0.0) {
        if (base == 0.0) return expo == 0.0 ? 1.0 : 0.0;
        throw std::invalid_argument("stable_pow: negative base");
    }
    if (std::fabs(expo) > 50.0) return std::exp(expo * std::log(base));
    return std::pow(base, expo);
}

/// Spatial dimension N >= 5 and the constants derived from it.
class Dimension {
  public:
    explicit Dimension(int n) : n_(n) {
        if (n < 5) throw std::invalid_argument("Dimension: N >= 5 required");
    }

    int n() const { return n_; }

    /// Critical exponent p = (N+4)/(N-4).
    double p() const { return static_cast<double>(n_ + 4) / static_cast<double>(n_ - 4); }
    Rational p_rational() const { return Rational(n_ + 4, n_ - 4); }

    /// Blow-up exponent sigma = (N-2)/(2(N-3)); the hole radius eps and the
    /// concentration weight mu are related by mu = d * eps^sigma.
    Rational sigma() const { return Rational(n_ - 2, 2 * (n_ - 3)); }

    /// Energy exponent kappa = (N-2)(N-4)/(2(N-3)) = sigma*(N-4).
    Rational kappa() const {
        return Rational(static_cast<long long>(n_ - 2) * (n_ - 4), 2 * (n_ - 3));
    }

    /// Bubble normalization alpha_N = (N(N-4)(N-2)(N+2))^((N-4)/8).
    double alpha() const {
        const double base = static_cast<double>(n_) * (n_ - 4) * (n_ - 2) * (n_ + 2);
        return stable_pow(base, (n_ - 4) / 8.0);
    }

    /// meas(S^(N-1)) = 2 pi^(N/2) / Gamma(N/2).
    double sphere_measure() const {
        const double half = 0.5 * n_;
        return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
    }

    /// Distributional normalization of the bi-Laplacian fundamental solution:
    /// Delta^2 |x|^(4-N) = 2(N-2)(N-4) meas(S^(N-1)) delta_0.
    /// The quadrature module re-measures this constant independently; see
    /// EnergyConstants::kN for the value used downstream.
    double biharmonic_normalization() const {
        return 2.0 * (n_ - 2) * (n_ - 4) * sphere_measure();
    }

    /// Normalization of the Laplace fundamental solution:
    /// -Delta |x|^(2-N) / ((N-2) meas(S^(N-1))) = delta_0.
    double harmonic_normalization() const { return (n_ - 2) * sphere_measure(); }

  private:
    int n_;
};

} // namespace pball

#endif // PBALL_CORE_HPP
