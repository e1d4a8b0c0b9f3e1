#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dimer/polylog.hpp"
#include "dimer/quadrature.hpp"
#include "dimer/torus.hpp"

// The asymptotic theory: critical-window parameters, the universal integrals
//   J_nu(beta, alpha) = int_{-inf}^{inf} Li_nu(beta e^{2 i alpha x - x^2}) dx
// in closed form and by quadrature, the Gaussian-window predictions for
// log Z / <N_c> / var(N_c), large-alpha limits, and crossover locations.
//
// Closed form (real beta, alpha >= 0, L = log|beta|):
//   J_nu = sqrt(pi) Li_{nu+1/2}(beta e^{-alpha^2})  -  sum over integers k
//          with (2 pi k + arg beta)^2 <= 4 alpha^2 L of
//     nu = 1:   2 pi (alpha - sqrt(B_k))
//     nu <= 0:  sqrt(pi) Gamma(1/2 - nu) B_k^(nu - 1/2)
//   where B_k = alpha^2 - Log beta - 2 pi i k (principal logs and powers).
// The main polylog is taken just below the cut when its argument lands on
// [1, inf); the k = 0 term then cancels its imaginary part and the total is
// real.  Terms at k and -k (beta > 0) or k and -1-k (beta < 0) are exact
// conjugates and are paired explicitly.

namespace dimer {

// Derived quantities of the critical window around aspect ratio p/q.
struct CriticalParams {
    long long p = 1, q = 1;
    double eps = 0.0;    // 2 pi^2 n a b / (m^2 (a-b)^2)
    double phi = 0.0;    // 2 pi n b / (m (a-b))
    double log_a = 0.0;  // log A = n (log c - log(a-b))
    double w = 0.0;      // sqrt(q eps) / (pi p)
    double alpha = 0.0;  // phi/(2 pi) = (p/q)(1 + alpha w)
    double gamma = 0.0;  // q log A - alpha^2
};

inline CriticalParams derive_params(const TorusParams& t, long long p, long long q) {
    t.validate();
    if (p < 1 || q < 1 || std::gcd(p, q) != 1)
        throw std::invalid_argument("derive_params: need coprime p, q >= 1");
    CriticalParams cp;
    cp.p = p;
    cp.q = q;
    const double m = static_cast<double>(t.m), n = static_cast<double>(t.n);
    const double d = t.a - t.b;
    cp.eps = 2.0 * detail::kPi * detail::kPi * n * t.a * t.b / (m * m * d * d);
    cp.phi = 2.0 * detail::kPi * n * t.b / (m * d);
    cp.log_a = n * (std::log(t.c) - std::log(d));
    cp.w = std::sqrt(static_cast<double>(q) * cp.eps) / (detail::kPi * static_cast<double>(p));
    cp.alpha = (cp.phi * static_cast<double>(q) / (2.0 * detail::kPi * static_cast<double>(p)) - 1.0) / cp.w;
    cp.gamma = static_cast<double>(q) * cp.log_a - cp.alpha * cp.alpha;
    return cp;
}

// An integral request: nu in {1, 0, -1}, real beta != 0, alpha (evenness in
// alpha is exploited; the sign is dropped).
struct JQuery {
    int nu = 1;
    double beta = 1.0;
    double alpha = 0.0;
};

struct JBranchTerm {
    long long k = 0;
    cplx term;
};

struct JResult {
    cplx value;      // main_term - sum of branch terms; real up to roundoff
    cplx main_term;  // sqrt(pi) Li_{nu+1/2}(beta e^{-alpha^2})
    std::vector<JBranchTerm> branch_terms;
    bool singular = false;  // curve beta e^{2 i alpha x - x^2} passes through 1
};

namespace detail {

inline void check_j_query(const JQuery& q) {
    if (q.nu != 1 && q.nu != 0 && q.nu != -1)
        throw std::domain_error("j integral: nu must be 1, 0 or -1");
    if (q.beta == 0.0 || !std::isfinite(q.beta))
        throw std::domain_error("j integral: beta must be finite and nonzero");
}

inline HalfOrder main_order(int nu) {
    switch (nu) {
        case 1: return HalfOrder::three_halves;
        case 0: return HalfOrder::one_half;
        default: return HalfOrder::minus_half;
    }
}

}  // namespace detail

// True when the curve passes through the polylog singularity at 1, i.e.
// 4 alpha^2 log|beta| = (2 pi k + arg beta)^2 for some integer k.  The
// condition is an exact equality; numeric use needs a relative band.
inline bool j_singular(double beta, double alpha) {
    const double L = std::log(std::fabs(beta));
    if (L < 0.0) return false;
    alpha = std::fabs(alpha);
    const double argb = beta > 0.0 ? 0.0 : detail::kPi;
    const double rhs = 4.0 * alpha * alpha * L;
    const double band = 1e-9 * (1.0 + rhs);
    const long long kmax =
        static_cast<long long>((2.0 * alpha * std::sqrt(L) + argb) / (2.0 * detail::kPi)) + 2;
    for (long long k = -kmax; k <= kmax; ++k) {
        const double lhs = (2.0 * detail::kPi * static_cast<double>(k) + argb) *
                           (2.0 * detail::kPi * static_cast<double>(k) + argb);
        if (std::fabs(lhs - rhs) <= band) return true;
    }
    return false;
}

inline JResult j_closed(const JQuery& query) {
    detail::check_j_query(query);
    const int nu = query.nu;
    const double beta = query.beta;
    const double alpha = std::fabs(query.alpha);
    const double L = std::log(std::fabs(beta));
    const double argb = beta > 0.0 ? 0.0 : detail::kPi;

    JResult r;
    r.singular = j_singular(beta, alpha);

    const double lx = L - alpha * alpha;  // log |main argument|
    const cplx x = (beta > 0.0 ? 1.0 : -1.0) * std::exp(lx);
    r.main_term = detail::kSqrtPi * li_half(detail::main_order(nu), x, BranchSide::below_cut);

    cplx total{0.0, 0.0};
    if (L >= 0.0) {
        const double rhs = 4.0 * alpha * alpha * L;
        const double slack = 1e-12 * (1.0 + rhs);
        auto bracket = [&](long long k) {
            double im = -(2.0 * detail::kPi * static_cast<double>(k) + argb);
            if (im == 0.0) im = 0.0;  // normalize -0.0: k = 0 boundary sits above the cut
            return cplx(alpha * alpha - L, im);
        };
        auto term_of = [&](cplx B) -> cplx {
            if (nu == 1) return 2.0 * detail::kPi * (alpha - std::sqrt(B));
            const double g = gamma_half(1 - 2 * nu);  // Gamma(1/2 - nu)
            if (std::abs(B) == 0.0)
                return {std::numeric_limits<double>::infinity(), 0.0};
            return detail::kSqrtPi * g * std::pow(B, cplx(nu - 0.5, 0.0));
        };
        auto admissible = [&](long long k) {
            const double u = 2.0 * detail::kPi * static_cast<double>(k) + argb;
            return u * u <= rhs + slack;
        };
        if (beta > 0.0) {
            if (admissible(0)) {
                const cplx t = term_of(bracket(0));
                r.branch_terms.push_back({0, t});
                total += t;
            }
            for (long long k = 1; admissible(k); ++k) {
                const cplx t = term_of(bracket(k));
                r.branch_terms.push_back({k, t});
                r.branch_terms.push_back({-k, std::conj(t)});
                total += 2.0 * t.real();
            }
        } else {
            for (long long k = 0; admissible(k); ++k) {
                const cplx t = term_of(bracket(k));
                r.branch_terms.push_back({k, t});
                r.branch_terms.push_back({-1 - k, std::conj(t)});
                total += 2.0 * t.real();
            }
        }
    }
    r.value = r.main_term - total;
    return r;
}

// Direct numerical integration of the defining integral on the principal
// branch, symmetric halves folded to 2 * int_0^X Re Li_nu(...) dx with the
// tail cut at X = alpha + sqrt(log|beta| + 30) and panels split at every
// cut-crossing abscissa.
struct JQuadResult {
    cplx value;
    double abs_err = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

inline JQuadResult j_quadrature_detail(const JQuery& query, double abs_tol = 1e-8,
                                       std::size_t max_panels = 20000) {
    detail::check_j_query(query);
    const int nu = query.nu;
    const double beta = query.beta;
    const double alpha = std::fabs(query.alpha);
    const double L = std::log(std::fabs(beta));
    const double argb = beta > 0.0 ? 0.0 : detail::kPi;

    const double X = alpha + std::sqrt(std::max(L, 0.0) + 30.0);
    std::vector<double> pts{0.0, X};
    if (L > 0.0) {
        const double xs = std::sqrt(L);
        if (xs < X) pts.push_back(xs);  // |argument| = 1
        if (alpha > 0.0) {
            // cut-crossing abscissae x = -(2 pi k + arg beta) / (2 alpha) > 0
            for (long long k = -1;; --k) {
                const double x =
                    -(2.0 * detail::kPi * static_cast<double>(k) + argb) / (2.0 * alpha);
                if (x >= X) break;
                if (x > 0.0) pts.push_back(x);
            }
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto f = [&](double x) {
        const double r = std::exp(-x * x);
        const cplx w = beta * cplx(r * std::cos(2.0 * alpha * x), r * std::sin(2.0 * alpha * x));
        const cplx d = 1.0 - w;
        switch (nu) {
            case 1: return -0.5 * std::log(std::norm(d));
            case 0: return (w / d).real();
            default: return (w / (d * d)).real();
        }
    };
    QuadResult q = integrate_segmented(f, pts, abs_tol / 2.0, max_panels);
    JQuadResult out;
    out.value = cplx(2.0 * q.value, 0.0);
    out.abs_err = 2.0 * q.abs_err;
    out.evals = q.evals;
    out.converged = q.converged;
    return out;
}

struct QuadratureBudgetError : std::runtime_error {
    double achieved_error;
    explicit QuadratureBudgetError(double err)
        : std::runtime_error("j_quadrature: error target not met (achieved " +
                             std::to_string(err) + ")"),
          achieved_error(err) {}
};

inline cplx j_quadrature(const JQuery& query, double abs_tol = 1e-8,
                         std::size_t max_panels = 20000) {
    if (query.beta == 0.0) return {0.0, 0.0};
    const JQuadResult r = j_quadrature_detail(query, abs_tol, max_panels);
    if (!r.converged) throw QuadratureBudgetError(r.abs_err);
    return r.value;
}

// Gaussian-window predictions (the +- sign chosen to maximize log Z):
//   log Z    = (m n b c)^{1/4} / (pi sqrt(2) (p q)^{3/4}) * max_pm -J_1(pm A^q)
//   <N_c>    = (m n c)^{3/4} / (pi sqrt(2) (p q b)^{1/4})   * -J_0(dom A^q)
//   var(N_c) = (m n c)^{5/4} (p q)^{1/4} / (pi sqrt(2) b^{3/4}) * -J_{-1}(dom A^q)
struct Prediction {
    double log_z = 0.0;
    int dominant = -1;  // sign of the maximizing branch
    double mean_nc = 0.0, var_nc = 0.0;
    double mean_nc_other = 0.0, var_nc_other = 0.0;  // subordinate branch
    double i_plus = 0.0, i_minus = 0.0;              // the two -J_1 values
    bool tie = false, singular = false, near_zero_var = false;
};

inline Prediction predict_all(const CriticalParams& cp, const TorusParams& t) {
    t.validate();
    const double log_aq = static_cast<double>(cp.q) * cp.log_a;
    if (std::fabs(log_aq) > 700.0)
        throw std::domain_error("predict_all: |q log A| too large to represent A^q");
    const double beta = std::exp(log_aq);
    const double alpha = std::fabs(cp.alpha);

    const JResult jp = j_closed({1, beta, alpha});
    const JResult jm = j_closed({1, -beta, alpha});
    Prediction pr;
    pr.i_plus = -jp.value.real();
    pr.i_minus = -jm.value.real();
    const double scale = 1.0 + std::max(std::fabs(pr.i_plus), std::fabs(pr.i_minus));
    pr.tie = std::fabs(pr.i_plus - pr.i_minus) <= 1e-9 * scale;
    pr.dominant = (pr.i_minus >= pr.i_plus) ? -1 : +1;
    pr.singular = (pr.dominant > 0 ? jp.singular : jm.singular);

    const double m = static_cast<double>(t.m), n = static_cast<double>(t.n);
    const double pq = static_cast<double>(cp.p) * static_cast<double>(cp.q);
    const double rt2pi = detail::kPi * std::sqrt(2.0);
    const double c_logz = std::pow(m * n * t.b * t.c, 0.25) / (rt2pi * std::pow(pq, 0.75));
    const double c_mean = std::pow(m * n * t.c, 0.75) / (rt2pi * std::pow(pq * t.b, 0.25));
    const double c_var =
        std::pow(m * n * t.c, 1.25) * std::pow(pq, 0.25) / (rt2pi * std::pow(t.b, 0.75));

    pr.log_z = c_logz * std::max(pr.i_plus, pr.i_minus);
    const double bd = pr.dominant * beta, bo = -pr.dominant * beta;
    pr.mean_nc = c_mean * -j_closed({0, bd, alpha}).value.real();
    pr.var_nc = c_var * -j_closed({-1, bd, alpha}).value.real();
    pr.mean_nc_other = c_mean * -j_closed({0, bo, alpha}).value.real();
    pr.var_nc_other = c_var * -j_closed({-1, bo, alpha}).value.real();
    pr.near_zero_var = std::fabs(pr.var_nc / c_var) <= 1e-9;
    return pr;
}

// Large-alpha limits of the three (scaled) integrals: for beta >= 1
//   -J_1 -> (4/3)(log beta)^{3/2},  -J_0 -> 2 (log beta)^{1/2},
//   -alpha^2 J_{-1} -> (log beta)^{1/2};  all three vanish for beta <= 1.
struct AlphaLimits {
    double logz_limit = 0.0;
    double mean_limit = 0.0;
    double var_scaled_limit = 0.0;
};

inline AlphaLimits large_alpha_limits(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("large_alpha_limits: need beta > 0");
    if (beta <= 1.0) return {};
    const double L = std::log(beta);
    return {4.0 / 3.0 * std::pow(L, 1.5), 2.0 * std::sqrt(L), std::sqrt(L)};
}

// Crossover of Z_- and Z_+ dominance.  The r-th crossover is parameterized
// by gamma = log beta - alpha^2:
//   (-1)^r alpha = [Li_{3/2}(e^gamma) - Li_{3/2}(-e^gamma)] / (2 sqrt(pi))
//                  + sum_{k=-r}^{r} (-1)^k sqrt(-gamma + k pi i),
// conjugate pairs combined to real; the on-cut polylog is the below-cut
// limit, whose imaginary part the k = 0 root cancels.  The returned pair is
// confirmed against the j_closed difference and refined by bisection if the
// closed forms disagree.
struct CrossoverPoint {
    double beta = 0.0;
    double alpha = 0.0;
    bool refined = false;  // bisection had to adjust the parametric value
};

inline CrossoverPoint crossover(int r, double gamma) {
    if (r < 0) throw std::invalid_argument("crossover: need r >= 0");
    if (std::fabs(gamma) > 700.0) throw std::domain_error("crossover: |gamma| too large");

    const double eg = std::exp(gamma);
    const cplx lp = li_half(HalfOrder::three_halves, cplx(eg, 0.0), BranchSide::below_cut);
    const cplx lm = li_half(HalfOrder::three_halves, cplx(-eg, 0.0));
    cplx s = (lp - lm) / (2.0 * detail::kSqrtPi);
    s += std::sqrt(cplx(-gamma, 0.0));  // k = 0; imaginary for gamma > 0
    for (int k = 1; k <= r; ++k) {
        const double pair = 2.0 * std::sqrt(cplx(-gamma, k * detail::kPi)).real();
        s += (k % 2 ? -1.0 : 1.0) * pair;
    }
    if (std::fabs(s.imag()) > 1e-7 * (1.0 + std::abs(s)))
        throw std::runtime_error("crossover: imaginary residue in the parametric formula");
    double alpha = (r % 2 ? -1.0 : 1.0) * s.real();
    if (!(alpha > 0.0))
        throw std::runtime_error("crossover: no solution (formula yields alpha <= 0)");

    // confirm with the integral difference along the fixed-gamma family
    auto diff = [&](double a) {
        const double b = std::exp(gamma + a * a);
        return -j_closed({1, -b, a}).value.real() + j_closed({1, b, a}).value.real();
    };
    CrossoverPoint out;
    const double d0 = diff(alpha);
    const double scale = 1.0 + std::fabs(-j_closed({1, -std::exp(gamma + alpha * alpha), alpha}).value.real());
    if (std::fabs(d0) > 1e-9 * scale) {
        double lo = alpha * 0.995, hi = alpha * 1.005;
        double flo = diff(lo), fhi = diff(hi);
        if (flo * fhi > 0.0)
            throw std::runtime_error("crossover: parametric value failed confirmation");
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = diff(mid);
            if (fm == 0.0 || hi - lo < 1e-15 * alpha) {
                lo = hi = mid;
                break;
            }
            if (flo * fm <= 0.0) {
                hi = mid;
                fhi = fm;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        alpha = 0.5 * (lo + hi);
        out.refined = true;
    }
    out.alpha = alpha;
    out.beta = std::exp(gamma + alpha * alpha);
    return out;
}

// Nonanalyticity locations of the two branches for beta > 1:
//   log Z_+ singular at alpha in (pi / sqrt(log beta)) * {0, 1, 2, ...},
//   log Z_- singular at alpha in (pi / sqrt(log beta)) * {1/2, 3/2, ...}.
struct NonanalyticityGrid {
    std::vector<double> plus;
    std::vector<double> minus;
};

inline NonanalyticityGrid nonanalyticity_grid(double beta, double alpha_max) {
    if (!(beta > 1.0)) throw std::domain_error("nonanalyticity_grid: need beta > 1");
    const double step = detail::kPi / std::sqrt(std::log(beta));
    NonanalyticityGrid g;
    for (double a = 0.0; a <= alpha_max; a += step) g.plus.push_back(a);
    for (double a = 0.5 * step; a <= alpha_max; a += step) g.minus.push_back(a);
    return g;
}

}  // namespace dimer
