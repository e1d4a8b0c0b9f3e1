#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "dimer/quadrature.hpp"

// Test-side oracles, independent of the library evaluation paths they check.

namespace oracles {

// Riemann zeta by Euler-Maclaurin summation.  The truncated tail converges
// for s > -2J+1, but in doubles the leading partial sum cancels against the
// N^(1-s)/(s-1) term and eats ~|s| log10(N) digits, so keep s > -2 here and
// reach deeper negatives through em_zeta_fe below.
inline double em_zeta(double s, int N = 24, int J = 12) {
    static const double bern[] = {1.0 / 6,        -1.0 / 30,      1.0 / 42,
                                  -1.0 / 30,      5.0 / 66,       -691.0 / 2730,
                                  7.0 / 6,        -3617.0 / 510,  43867.0 / 798,
                                  -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730};
    double tot = 0.0;
    for (int k = 1; k < N; ++k) tot += std::pow(static_cast<double>(k), -s);
    tot += std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0);
    tot += 0.5 * std::pow(static_cast<double>(N), -s);
    double fact2j = 1.0;  // (2j)!
    for (int j = 1; j <= J; ++j) {
        fact2j *= (2.0 * j - 1.0) * (2.0 * j);
        double poch = 1.0;  // s (s+1) ... (s + 2j - 2)
        for (int i = 0; i <= 2 * j - 2; ++i) poch *= s + i;
        tot += bern[j - 1] / fact2j * poch * std::pow(static_cast<double>(N), -s - 2.0 * j + 1.0);
    }
    return tot;
}

// zeta(s) for s < 0 via the functional equation on top of em_zeta.
inline double em_zeta_fe(double s) {
    constexpr double pi = 3.14159265358979323846;
    return std::pow(2.0, s) * std::pow(pi, s - 1.0) * std::sin(0.5 * pi * s) *
           std::tgamma(1.0 - s) * em_zeta(1.0 - s);
}

// Accelerated alternating sum  sum_{n>=1} (-1)^(n-1) a(n)  by iterated
// averaging of partial sums (Euler transform).  Also evaluates the analytic
// continuation of eta-type series with slowly growing terms.
inline double alternating_sum(const std::function<double(int)>& a, int terms = 56) {
    std::vector<double> s(static_cast<std::size_t>(terms));
    double run = 0.0;
    for (int n = 1; n <= terms; ++n) {
        run += (n % 2 ? 1.0 : -1.0) * a(n);
        s[static_cast<std::size_t>(n - 1)] = run;
    }
    for (int len = terms; len > 1; --len)
        for (int i = 0; i + 1 < len; ++i) s[static_cast<std::size_t>(i)] =
            0.5 * (s[static_cast<std::size_t>(i)] + s[static_cast<std::size_t>(i + 1)]);
    return s[0];
}

// Plain defining series for Li_nu, |z| < 1.
inline std::complex<double> li_series(double nu, std::complex<double> z, int terms = 4000) {
    std::complex<double> tot{0.0, 0.0}, zp{1.0, 0.0};
    for (int n = 1; n <= terms; ++n) {
        zp *= z;
        const std::complex<double> t = zp * std::pow(static_cast<double>(n), -nu);
        tot += t;
        if (n > 40 && std::abs(t) < 1e-19 * (1.0 + std::abs(tot))) break;
    }
    return tot;
}

// Appell's integral for Li_nu(-x), x > 0, nu > 0:
//   Li_nu(-x) = -(x / Gamma(nu)) int_0^inf s^(nu-1) / (e^s + x) ds,
// with s = t^2 to remove the endpoint singularity at nu = 1/2.
inline double appell_li_negative(double nu, double x, double gamma_nu) {
    const double tmax = std::sqrt(std::log(x > 1.0 ? x : 1.0) + 60.0);
    auto f = [&](double t) {
        return 2.0 * std::pow(t, 2.0 * nu - 1.0) / (std::exp(t * t) + x);
    };
    std::vector<double> pts{0.0};
    if (x > 1.0) pts.push_back(std::sqrt(std::log(x)));  // Fermi edge
    pts.push_back(tmax);
    const dimer::QuadResult q = dimer::integrate_segmented(f, pts, 1e-13, 60000);
    return -(x / gamma_nu) * q.value;
}

// x d/dx of a function of x, by central differences in log x with one
// Richardson step.
inline double log_derivative(const std::function<double(double)>& f, double x, double h = 1e-3) {
    auto d = [&](double hh) {
        return (f(x * std::exp(hh)) - f(x * std::exp(-hh))) / (2.0 * hh);
    };
    const double d1 = d(h), d2 = d(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace oracles
