#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

// Polylogarithms Li_nu and the Riemann zeta function on the regimes the
// Kasteleyn product and the resonance integrals touch:
//   - integer orders nu <= 1 (exact rational forms, Li_1 = -log(1-z)),
//   - half-integer orders nu in {3/2, 1/2, -1/2} on the principal branch,
//     including both one-sided limits on the cut [1, inf).
//
// Half-integer evaluation switches between three regimes:
//   defining series        |z| <= 1/2
//   Lindeloef expansion    |log z| <= 5.8   (converges for |log z| < 2*pi)
//   asymptotic series      otherwise, truncated at the smallest term
// The asymptotic series is truncation-limited: absolute accuracy is about
// 4e-6 at |log z| = 12 and ~1e-9 by 20; inside the gap (5.8, 12) it
// degrades to ~1e-4 at worst.  None of the downstream closed forms
// evaluate inside that band.

namespace dimer {

using cplx = std::complex<double>;

enum class BranchSide { above_cut, below_cut };

// Supported half-integer orders, stored as 2*nu.
enum class HalfOrder : int { three_halves = 3, one_half = 1, minus_half = -1 };

inline double half_order_value(HalfOrder h) { return 0.5 * static_cast<int>(h); }

namespace detail {

inline constexpr double kPi = 3.14159265358979323846;
inline const double kSqrtPi = std::sqrt(kPi);

// sin(pi*s/2) with exact zeros at even integers (needed so the functional
// equation lands exactly on the trivial zeros).
inline double sin_pi_half(double s) {
    double r = std::fmod(s, 4.0);
    if (r < 0.0) r += 4.0;
    if (r <= 1.0) return std::sin(0.5 * kPi * r);
    if (r <= 3.0) return std::sin(0.5 * kPi * (2.0 - r));
    return -std::sin(0.5 * kPi * (4.0 - r));
}

// Dirichlet eta via the Cohen-Rodriguez Villegas-Zagier Chebyshev
// acceleration; ~1.5 digits per term, analytic in s.
inline double eta_accelerated(double s) {
    constexpr int N = 54;
    double d = std::pow(3.0 + std::sqrt(8.0), N);
    d = (d + 1.0 / d) / 2.0;
    double b = -1.0, c = -d, tot = 0.0;
    for (int k = 0; k < N; ++k) {
        c = b - c;
        tot += c * std::pow(k + 1.0, -s);
        b *= (k + N) * (k - N) / ((k + 0.5) * (k + 1.0));
    }
    return tot / d;
}

}  // namespace detail

// gamma(h/2) for odd h, from gamma(1/2) = sqrt(pi) and the recurrence.
inline double gamma_half(int h) {
    if (h % 2 == 0) throw std::domain_error("gamma_half: argument must be odd");
    double g = detail::kSqrtPi;
    int t = 1;
    while (t < h) {
        g *= 0.5 * t;
        t += 2;
    }
    while (t > h) {
        t -= 2;
        g /= 0.5 * t;
    }
    return g;
}

// Riemann zeta.  Eta series for s >= 0, functional equation for s < 0.
// >= 12 significant digits on [-40, 40] \ {1}; usable well beyond.
inline double zeta(double s) {
    if (s == 1.0) throw std::domain_error("zeta: pole at s = 1");
    if (s >= 0.0) {
        const double eta = detail::eta_accelerated(s);
        const double den = -std::expm1((1.0 - s) * std::log(2.0));  // 1 - 2^(1-s)
        return eta / den;
    }
    const double sp = detail::sin_pi_half(s);
    if (sp == 0.0) return 0.0;  // trivial zeros
    return std::pow(2.0, s) * std::pow(detail::kPi, s - 1.0) * sp *
           std::tgamma(1.0 - s) * zeta(1.0 - s);
}

// (sign, log|zeta(s)|); stays finite for arbitrarily negative s where the
// functional-equation gamma factor would overflow a double.
inline std::pair<int, double> zeta_signed_log(double s) {
    if (s >= -30.0) {
        const double v = zeta(s);
        if (v == 0.0) return {0, -std::numeric_limits<double>::infinity()};
        return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
    }
    const double sp = detail::sin_pi_half(s);
    if (sp == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    const double lg = s * std::log(2.0) + (s - 1.0) * std::log(detail::kPi) +
                      std::log(std::fabs(sp)) + std::lgamma(1.0 - s) +
                      std::log(zeta(1.0 - s));
    return {sp > 0.0 ? 1 : -1, lg};
}

namespace detail {

// log(1+z) for complex z, stable near z = 0.
inline cplx log1p_c(cplx z) {
    const double re = 0.5 * std::log1p(2.0 * z.real() + std::norm(z));
    const double im = std::atan2(z.imag(), 1.0 + z.real());
    return {re, im};
}

inline constexpr int kMaxNegOrder = 20;

// Eulerian triangle rows A(n, k); Li_{-n}(z) = sum_k A(n,k) z^{n-k} / (1-z)^{n+1}.
inline const std::vector<std::vector<std::uint64_t>>& eulerian_triangle() {
    static const auto tri = [] {
        std::vector<std::vector<std::uint64_t>> t(kMaxNegOrder + 1);
        t[1] = {1};
        for (int n = 2; n <= kMaxNegOrder; ++n) {
            t[n].assign(static_cast<std::size_t>(n), 0);
            for (int k = 0; k < n; ++k) {
                const std::uint64_t left = (k < n - 1) ? t[n - 1][static_cast<std::size_t>(k)] : 0;
                const std::uint64_t diag = (k > 0) ? t[n - 1][static_cast<std::size_t>(k - 1)] : 0;
                t[n][static_cast<std::size_t>(k)] =
                    static_cast<std::uint64_t>(k + 1) * left +
                    static_cast<std::uint64_t>(n - k) * diag;
            }
        }
        return t;
    }();
    return tri;
}

inline cplx ipow(cplx z, int n) {
    cplx r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

}  // namespace detail

// Li_nu for integer nu <= 1.  Exact rational function for nu <= 0; the
// principal -log(1-z) for nu = 1 (off the cut).
inline cplx li_int(int nu, cplx z) {
    if (nu > 1) throw std::domain_error("li_int: order must be <= 1");
    if (nu == 1) {
        if (z.imag() == 0.0 && z.real() >= 1.0)
            throw std::domain_error("li_int: Li_1 on the cut requires a branch side");
        return -detail::log1p_c(-z);
    }
    if (z == cplx(1.0, 0.0)) throw std::domain_error("li_int: pole at z = 1");
    if (nu == 0) return z / (1.0 - z);
    const int n = -nu;
    if (n > detail::kMaxNegOrder)
        throw std::domain_error("li_int: order below supported range");
    const auto& row = detail::eulerian_triangle()[static_cast<std::size_t>(n)];
    cplx num{static_cast<double>(row[0]), 0.0};
    for (int k = 1; k < n; ++k)
        num = num * z + cplx(static_cast<double>(row[static_cast<std::size_t>(k)]), 0.0);
    num *= z;
    return num / detail::ipow(1.0 - z, n + 1);
}

// Li_1 on the cut [1, inf), one-sided limit selected by `side`.
inline cplx li_int(int nu, double x, BranchSide side) {
    if (nu == 1 && x >= 1.0) {
        if (x == 1.0) throw std::domain_error("li_int: pole at z = 1");
        return {-std::log(x - 1.0), side == BranchSide::above_cut ? detail::kPi : -detail::kPi};
    }
    return li_int(nu, cplx(x, 0.0));
}

namespace detail {

// zeta(nu - n) table entries for the Lindeloef series; large n stored in
// signed-log form to dodge the gamma overflow in the functional equation.
struct ZetaEntry {
    bool direct;
    double value;    // when direct
    int sign;        // otherwise
    double log_abs;
};

inline const std::vector<ZetaEntry>& zeta_table(HalfOrder h) {
    static const auto build = [](double nu) {
        std::vector<ZetaEntry> t;
        t.reserve(768);
        for (int n = 0; n < 768; ++n) {
            const double s = nu - n;
            ZetaEntry e{};
            if (s >= -30.0) {
                e.direct = true;
                e.value = zeta(s);
            } else {
                e.direct = false;
                auto [sg, lg] = zeta_signed_log(s);
                e.sign = sg;
                e.log_abs = lg;
            }
            t.push_back(e);
        }
        return t;
    };
    static const std::vector<ZetaEntry> t32 = build(1.5);
    static const std::vector<ZetaEntry> t12 = build(0.5);
    static const std::vector<ZetaEntry> tm12 = build(-0.5);
    switch (h) {
        case HalfOrder::three_halves: return t32;
        case HalfOrder::one_half: return t12;
        default: return tm12;
    }
}

// Defining series, |z| <= 1/2 (also used for tiny correction arguments).
inline cplx li_series(double nu, cplx z) {
    cplx tot{0.0, 0.0}, zp{1.0, 0.0};
    for (int n = 1; n < 500; ++n) {
        zp *= z;
        const cplx t = zp * std::pow(static_cast<double>(n), -nu);
        tot += t;
        if (std::abs(t) < 1e-18 * std::abs(tot) + 1e-300) break;
    }
    return tot;
}

// Lindeloef expansion around z = 1:
//   Li_nu(z) = Gamma(1-nu) (-log z)^(nu-1) + sum_n zeta(nu-n) (log z)^n / n!
// For w = log z real positive (z on the cut) the principal power of -w
// produces the below-cut limit; the caller conjugates for the other side.
inline cplx li_lindelof(HalfOrder h, cplx w) {
    const double nu = half_order_value(h);
    const double g1 = gamma_half(2 - static_cast<int>(h));  // Gamma(1 - nu)
    cplx t0;
    if (w.imag() == 0.0 && w.real() > 0.0) {
        t0 = g1 * std::pow(w.real(), nu - 1.0) *
             std::polar(1.0, kPi * (nu - 1.0));
    } else {
        t0 = g1 * std::pow(-w, cplx(nu - 1.0, 0.0));
    }
    const auto& zt = zeta_table(h);
    const double alw = std::abs(w);
    const double argw = std::atan2(w.imag(), w.real());
    cplx tot = t0;
    cplx term{1.0, 0.0};  // w^n / n!
    for (int n = 0; n < static_cast<int>(zt.size()); ++n) {
        if (n > 0) term *= w / static_cast<double>(n);
        cplx t;
        const auto& e = zt[static_cast<std::size_t>(n)];
        if (e.direct) {
            t = e.value * term;
        } else if (e.sign == 0) {
            continue;
        } else {
            const double lt = e.log_abs + n * std::log(alw) - std::lgamma(n + 1.0);
            t = static_cast<double>(e.sign) * std::exp(lt) * std::polar(1.0, n * argw);
        }
        tot += t;
        if (n > 8 && std::abs(t) < 1e-17 * (1.0 + std::abs(tot))) break;
    }
    return tot;
}

// Shared tail of the two large-argument expansions: the even-k series in
// powers of u^(nu-2k), truncated at the smallest term.
template <class Coef>
inline cplx asym_tail(HalfOrder h, cplx u, Coef&& coef) {
    const double nu = half_order_value(h);
    cplx tot{0.0, 0.0};
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 64; ++k) {
        const double g = gamma_half(static_cast<int>(h) + 2 - 4 * k);  // Gamma(nu+1-2k)
        const cplx t = (coef(k) / g) * std::pow(u, cplx(nu - 2.0 * k, 0.0));
        const double at = std::abs(t);
        if (at > prev) break;  // divergent from here on
        tot += t;
        prev = at;
    }
    return tot;
}

// cos(pi*nu) at a half-integer order: exactly zero.  The remainder
// correction term -cos(pi nu) Li_nu(+-1/x) of the large-argument expansions
// is carried through this constant so it stays exact instead of leaving
// ~1e-16 dust from cos(1.5*pi).
inline constexpr double cos_pi_half_order(HalfOrder) { return 0.0; }

// Li_nu(-x) for large x > 0 (Sommerfeld), u = log x real or the principal
// log(-z) for complex z.
inline cplx li_asym_negative(HalfOrder h, cplx u) {
    const double nu = half_order_value(h);
    const double cpn = cos_pi_half_order(h);
    cplx corr{0.0, 0.0};
    if (cpn != 0.0) corr = -cpn * li_series(nu, -std::exp(-u));
    auto coef = [](int k) {
        const double z2k = (k == 0) ? -0.5 : zeta(2.0 * k);
        return 2.0 * (std::pow(2.0, 1.0 - 2.0 * k) - 1.0) * z2k;
    };
    return corr + asym_tail(h, u, coef);
}

// Li_nu(x) for large x > 1 on the cut (Clunie), below-cut limit.
inline cplx li_asym_positive(HalfOrder h, double logx) {
    const double nu = half_order_value(h);
    cplx tot = cplx(0.0, -kPi) * std::pow(logx, nu - 1.0) / gamma_half(static_cast<int>(h));
    const double cpn = cos_pi_half_order(h);
    if (cpn != 0.0) tot -= cpn * li_series(nu, std::exp(cplx(-logx, 0.0)));
    auto coef = [](int k) { return (k == 0) ? -1.0 : 2.0 * zeta(2.0 * k); };
    tot += asym_tail(h, cplx(logx, 0.0), coef);
    return tot;
}

}  // namespace detail

// Li_nu(z) for nu in {3/2, 1/2, -1/2} on the principal branch.  For z on the
// cut [1, inf), `side` selects the limit from above or below; elsewhere it is
// ignored.  Values at z = 1 are the on-axis limits (zeta(3/2), +inf, +inf).
inline cplx li_half(HalfOrder nu, cplx z, BranchSide side = BranchSide::below_cut) {
    if (z == cplx(0.0, 0.0)) return {0.0, 0.0};
    if (z == cplx(1.0, 0.0)) {
        if (nu == HalfOrder::three_halves) return {zeta(1.5), 0.0};
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    const double az = std::abs(z);
    if (az <= 0.5) return detail::li_series(half_order_value(nu), z);

    const bool pos_axis = (z.imag() == 0.0 && z.real() > 0.0);
    const cplx w = pos_axis ? cplx(std::log(z.real()), 0.0) : std::log(z);
    if (std::abs(w) <= 5.8) {
        cplx v = detail::li_lindelof(nu, w);
        if (pos_axis && z.real() > 1.0 && side == BranchSide::above_cut) v = std::conj(v);
        return v;
    }
    if (z.imag() == 0.0) {
        if (z.real() < 0.0)
            return detail::li_asym_negative(nu, cplx(std::log(-z.real()), 0.0));
        cplx v = detail::li_asym_positive(nu, std::log(z.real()));
        if (side == BranchSide::above_cut) v = std::conj(v);
        return v;
    }
    return detail::li_asym_negative(nu, std::log(-z));
}

}  // namespace dimer
