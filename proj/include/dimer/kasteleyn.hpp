#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dimer/bell.hpp"
#include "dimer/polylog.hpp"
#include "dimer/signed_log.hpp"
#include "dimer/torus.hpp"

// Exact finite-size computation of the four sector partition functions
//   Z_st = (a^m - (-1)^sigma b^m)^n * prod_k [1 - (-1)^tau (c/(a+b z_k))^n],
// their signed combination Z, log-derivative cumulants, and moment assembly.
//
// Everything is accumulated in log space: the prefactor as
// n*(m*log a + log1p(-(-1)^sigma (b/a)^m)) and each factor via complex
// log1p, so m up to ~1e4 and n*m*log a far beyond the double range are fine.
// Conjugate mode pairs (k, -k) are combined so imaginary parts cancel
// exactly; only the real modes at z = -1 and z = +1 can go negative and
// their signs are counted directly.

namespace dimer {

struct NearSingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Li argument v_k = (-1)^tau (c/(a+b z_k))^n at the mode with 2k = tk.
inline cplx sector_v(const TorusParams& t, int tau, std::int64_t tk) {
    const double theta = kPi * static_cast<double>(tk) / static_cast<double>(t.m);
    const cplx z = -std::polar(1.0, theta);
    // Re(a + b z) >= a - b > 0, so the principal log is smooth here
    const cplx w = static_cast<double>(t.n) * (std::log(cplx(t.c, 0.0)) - std::log(t.a + t.b * z));
    cplx v = std::exp(w);
    if (tau) v = -v;
    return v;
}

// Walk the modes k in Z_m + sigma/2, -m/2 < k <= m/2, as tk = 2k.
// fn(tk, v, paired): paired modes stand for both +-k (weight 2, real part).
template <class Fn>
inline void for_each_mode(const TorusParams& t, const Sector& s, Fn&& fn) {
    const std::int64_t m = t.m;
    for (std::int64_t tk = s.sigma ? 1 : 0; tk <= m; tk += 2) {
        const bool self_conj = (tk == 0 || tk == m);
        fn(tk, sector_v(t, s.tau, tk), !self_conj);
    }
}

inline double sector_log_prefactor(const TorusParams& t, const Sector& s) {
    const double sgn = s.sigma ? -1.0 : 1.0;
    return static_cast<double>(t.n) *
           (static_cast<double>(t.m) * std::log(t.a) +
            std::log1p(-sgn * std::pow(t.b / t.a, static_cast<double>(t.m))));
}

}  // namespace detail

// Z_{sigma tau} as a SignedLog.  A vanishing factor yields the exact zero
// (sign 0) rather than an error.
inline SignedLog log_z_sector(const TorusParams& t, Sector s) {
    t.validate();
    double acc = detail::sector_log_prefactor(t, s);
    int sign = +1;
    bool zero = false;
    detail::for_each_mode(t, s, [&](std::int64_t, cplx v, bool paired) {
        if (zero) return;
        if (paired) {
            acc += 2.0 * detail::log1p_c(-v).real();
            return;
        }
        const double f = 1.0 - v.real();  // real mode
        if (f == 0.0) {
            zero = true;
            return;
        }
        if (f < 0.0) sign = -sign;
        acc += std::log(std::fabs(f));
    });
    if (zero) return SignedLog::zero();
    return SignedLog::from_log(acc, sign);
}

// Z = (1/2)(-Z00 + Z01 + Z10 + Z11).  The result must be positive: Z is a
// sum of positive configuration weights.
inline SignedLog log_z_total(const TorusParams& t) {
    SignedLog z = SignedLog::zero();
    for (const Sector& s : Sector::all())
        z += scaled(log_z_sector(t, s), 0.5 * s.eps());
    if (z.sign != +1)
        throw std::runtime_error(
            "log_z_total: combined sign not positive (cancellation beyond rounding slack)");
    return z;
}

// l-th cumulant of one sector: L_{l,st} = -n^l sum_k Li_{1-l}(v_k), real
// part taken after conjugate pairing.  Exact identity, not an asymptotic.
inline double cumulant_sector(const TorusParams& t, Sector s, int l) {
    t.validate();
    if (l < 1) throw std::invalid_argument("cumulant_sector: need l >= 1");
    double tot = 0.0;
    detail::for_each_mode(t, s, [&](std::int64_t, cplx v, bool paired) {
        if (std::abs(1.0 - v) < 1e-12)
            throw NearSingularError("cumulant_sector: factor within 1e-12 of 0");
        const double w = paired ? 2.0 : 1.0;
        tot += w * li_int(1 - l, v).real();
    });
    return -std::pow(static_cast<double>(t.n), l) * tot;
}

// Cumulants L_1..L_lmax of one sector.
struct CumulantVector {
    Sector sector;
    std::vector<double> values;  // 1-indexed; values[0] unused
};

inline CumulantVector cumulant_vector(const TorusParams& t, Sector s, int lmax) {
    CumulantVector cv{s, std::vector<double>(static_cast<std::size_t>(lmax) + 1, 0.0)};
    for (int l = 1; l <= lmax; ++l)
        cv.values[static_cast<std::size_t>(l)] = cumulant_sector(t, s, l);
    return cv;
}

// Z_- (odd tau*q + sigma*p) and Z_+ (even, with the eps signs); Z- + Z+ = Z.
inline std::pair<SignedLog, SignedLog> z_plus_minus(const TorusParams& t, long long p,
                                                    long long q) {
    if (std::gcd(p, q) != 1) throw std::invalid_argument("z_plus_minus: need gcd(p, q) = 1");
    SignedLog zm = SignedLog::zero(), zp = SignedLog::zero();
    for (const Sector& s : Sector::all()) {
        const SignedLog z = log_z_sector(t, s);
        if ((s.tau * q + s.sigma * p) % 2 != 0)
            zm += scaled(z, 0.5);
        else
            zp += scaled(z, 0.5 * s.eps());
    }
    return {zm, zp};
}

namespace detail {

inline constexpr int kMomentMax = 8;
inline constexpr double kMomentSplitEps = 0.05;

// Per-sector scan: regular factors folded into a SignedLog and cumulants;
// factors with |1 - v| < split threshold set aside for the Leibniz route.
struct SectorScan {
    SignedLog g;                  // prefactor * product of regular factors
    std::vector<cplx> singular;   // v of the near-singular factors (with pair weight)
    std::vector<double> cum;      // cumulants of the regular part, [1..lmax]
};

inline SectorScan scan_sector(const TorusParams& t, const Sector& s, int lmax) {
    SectorScan sc;
    sc.cum.assign(static_cast<std::size_t>(lmax) + 1, 0.0);
    double acc = sector_log_prefactor(t, s);
    int sign = +1;
    for_each_mode(t, s, [&](std::int64_t, cplx v, bool paired) {
        const cplx f = 1.0 - v;
        if (std::abs(f) < kMomentSplitEps) {
            sc.singular.push_back(v);
            if (paired) sc.singular.push_back(std::conj(v));
            return;
        }
        if (paired) {
            acc += 2.0 * log1p_c(-v).real();
        } else {
            if (f.real() < 0.0) sign = -sign;
            acc += std::log(std::abs(f.real()));
        }
        const double w = paired ? 2.0 : 1.0;
        for (int l = 1; l <= lmax; ++l)
            sc.cum[static_cast<std::size_t>(l)] +=
                w * -std::pow(static_cast<double>(t.n), l) * li_int(1 - l, v).real();
    });
    sc.g = SignedLog::from_log(acc, sign);
    return sc;
}

// (c d/dc)^j derivative array of Z_st / G: complete Bell of the regular
// cumulants convolved with the two-term arrays of each singular factor
// ((c d/dc)^j (1 - v) = -n^j v for j >= 1).
inline std::vector<cplx> derivative_array(const SectorScan& sc, double n,
                                          const std::vector<double>& cum, int lmax) {
    const std::vector<double> y = complete_bell(cum, lmax);
    std::vector<cplx> arr(y.begin(), y.end());
    for (const cplx& v : sc.singular) {
        std::vector<cplx> d(static_cast<std::size_t>(lmax) + 1);
        d[0] = 1.0 - v;
        double npow = 1.0;
        for (int j = 1; j <= lmax; ++j) {
            npow *= n;
            d[static_cast<std::size_t>(j)] = -npow * v;
        }
        std::vector<cplx> next(static_cast<std::size_t>(lmax) + 1, cplx(0.0, 0.0));
        for (int j1 = 0; j1 <= lmax; ++j1) {
            double c = 1.0;  // C(j1 + j2, j1) built incrementally over j2
            for (int j2 = 0; j1 + j2 <= lmax; ++j2) {
                if (j2 > 0) c = c * (j1 + j2) / j2;
                next[static_cast<std::size_t>(j1 + j2)] +=
                    c * d[static_cast<std::size_t>(j1)] * arr[static_cast<std::size_t>(j2)];
            }
        }
        arr = std::move(next);
    }
    return arr;
}

}  // namespace detail

// Raw and central moments of N_c under the signed four-sector measure:
//   <N_c^l> = sum_st w_st Y_l(L_{1..l, st}),  w_st = eps_st Z_st / (2Z),
// with central moments from per-sector recentering at the global mean.
// Sectors with factors near zero (the critical resonance point makes one
// factor vanish exactly) are handled by splitting those factors out and
// applying the product rule, which keeps the assembly finite and stable.
inline MomentVector moments_exact(const TorusParams& t, int lmax) {
    t.validate();
    if (lmax < 1 || lmax > detail::kMomentMax)
        throw std::invalid_argument("moments_exact: need 1 <= lmax <= 8");
    const double n = static_cast<double>(t.n);

    std::array<detail::SectorScan, 4> scans;
    std::array<SignedLog, 4> zsec;
    SignedLog z2 = SignedLog::zero();  // 2Z
    const auto sectors = Sector::all();
    for (std::size_t i = 0; i < 4; ++i) {
        scans[i] = detail::scan_sector(t, sectors[i], lmax);
        // Z_st = G * prod singular f; product is real (conjugate pairs)
        cplx pf{1.0, 0.0};
        for (const cplx& v : scans[i].singular) pf *= (1.0 - v);
        zsec[i] = scans[i].g * SignedLog::from_value(pf.real());
        z2 += scaled(zsec[i], sectors[i].eps());
    }
    if (z2.sign != +1) throw std::runtime_error("moments_exact: nonpositive partition function");

    MomentVector mv;
    mv.raw.assign(static_cast<std::size_t>(lmax) + 1, 0.0);
    mv.central.assign(static_cast<std::size_t>(lmax) + 1, 0.0);
    mv.raw[0] = mv.central[0] = 1.0;

    for (std::size_t i = 0; i < 4; ++i) {
        const double w = sectors[i].eps() * (zsec[i] / z2).value();
        mv.max_weight_excursion = std::max(mv.max_weight_excursion, std::fabs(w) - 1.0);
    }

    // raw pass
    {
        std::array<std::vector<cplx>, 4> arrs;
        for (std::size_t i = 0; i < 4; ++i)
            arrs[i] = detail::derivative_array(scans[i], n, scans[i].cum, lmax);
        for (int l = 1; l <= lmax; ++l) {
            SignedLog acc = SignedLog::zero();
            for (std::size_t i = 0; i < 4; ++i)
                acc += scaled(
                    scans[i].g * SignedLog::from_value(arrs[i][static_cast<std::size_t>(l)].real()),
                    sectors[i].eps());
            mv.raw[static_cast<std::size_t>(l)] = (acc / z2).value();
        }
    }
    const double mu = mv.raw[1];

    // central pass: shift L_1 -> L_1 - mu inside each sector
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<double> cum = scans[i].cum;
        cum[1] -= mu;
        const auto arr = detail::derivative_array(scans[i], n, cum, lmax);
        for (int l = 1; l <= lmax; ++l) {
            const SignedLog contrib =
                scaled(scans[i].g * SignedLog::from_value(arr[static_cast<std::size_t>(l)].real()),
                       sectors[i].eps());
            mv.central[static_cast<std::size_t>(l)] += (contrib / z2).value();
        }
    }
    return mv;
}

}  // namespace dimer
