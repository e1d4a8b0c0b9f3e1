#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "dimer/polylog.hpp"

namespace dimer {

// The finite system: an m x n torus with edge weights a, b, c by direction.
// b < a keeps the Fourier factors a + b z away from zero.
struct TorusParams {
    std::int64_t m = 1;
    std::int64_t n = 1;
    double a = 1.0;
    double b = 0.5;
    double c = 0.5;

    void validate() const {
        if (m < 1 || n < 1) throw std::invalid_argument("TorusParams: need m, n >= 1");
        if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
            throw std::invalid_argument("TorusParams: weights must be positive");
        if (!(b < a)) throw std::invalid_argument("TorusParams: requires b < a");
    }
};

// Boundary-condition index (sigma, tau); eps is the sign in
// Z = (1/2)(-Z00 + Z01 + Z10 + Z11).
struct Sector {
    int sigma = 0;
    int tau = 0;

    int eps() const { return (sigma == 0 && tau == 0) ? -1 : +1; }

    static std::array<Sector, 4> all() {
        return {Sector{0, 0}, Sector{0, 1}, Sector{1, 0}, Sector{1, 1}};
    }
};

// One Fourier mode of the sector product: z_k = -e^{i theta_k} with
// theta_k = 2 pi k / m, k in Z_m + sigma/2, and
//   r_k = (a-b)^n |a+b z_k|^{-n},   phi_k = arg (a+b z_k)^{-n}.
// r may underflow for large n; log_r is always meaningful.
struct FourierFactor {
    double k = 0.0;
    cplx z;
    double theta = 0.0;
    double r = 0.0;
    double log_r = 0.0;
    double phi = 0.0;
};

inline FourierFactor fourier_factor(const TorusParams& t, const Sector& s, double k) {
    FourierFactor f;
    f.k = k;
    f.theta = 2.0 * detail::kPi * k / static_cast<double>(t.m);
    f.z = -std::polar(1.0, f.theta);
    (void)s;
    const cplx den = t.a + t.b * f.z;
    f.log_r = static_cast<double>(t.n) * (std::log(t.a - t.b) - std::log(std::abs(den)));
    f.r = std::exp(f.log_r);
    // arg of den^{-n}, accumulated without mod-2pi wrap: -n * arg(den)
    f.phi = -static_cast<double>(t.n) * std::arg(den);
    return f;
}

}  // namespace dimer
