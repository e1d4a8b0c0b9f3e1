#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dimer/kasteleyn.hpp"
#include "dimer/rational.hpp"
#include "dimer/resonance.hpp"
#include "dimer/torus.hpp"

// Parameter sweeps behind the CLI.  One record per evaluated point; the
// exact (Kasteleyn) and theory (resonance) routes fill disjoint columns.
// Normalization convention, applied uniformly across scan types:
//   log_z_*   = log Z / (mn)^{1/4}
//   mean_nc_* = <N_c> / (mn)^{3/4}
//   var_nc_*  = var(N_c) / (mn)^{5/4}
// Records are evaluated concurrently (RESONANCE_THREADS caps the workers)
// but buffered and emitted in input order, with fixed float formatting, so
// identical invocations produce byte-identical output.

namespace dimer {

struct ScanRecord {
    long long m = 0, n = 0;
    std::optional<long long> p, q;
    std::optional<double> alpha, log_aq;
    std::optional<double> log_z_exact, log_z_theory;
    std::optional<double> mean_nc_exact, mean_nc_theory;
    std::optional<double> var_nc_exact, var_nc_theory;
    std::optional<char> dominant;  // '+' or '-'
    std::vector<std::string> flags;
};

inline const char* scan_csv_header() {
    return "m,n,p,q,alpha,logAq,log_z_exact,log_z_theory,mean_nc_exact,mean_nc_theory,"
           "var_nc_exact,var_nc_theory,dominant,flags";
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join_flags(const std::vector<std::string>& flags) {
    std::string s;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) s += ';';
        s += flags[i];
    }
    return s;
}

}  // namespace detail

inline std::string to_csv(const ScanRecord& r) {
    std::string s;
    s += std::to_string(r.m);
    s += ',';
    s += std::to_string(r.n);
    auto opt_ll = [&](const std::optional<long long>& v) {
        s += ',';
        if (v) s += std::to_string(*v);
    };
    auto opt_d = [&](const std::optional<double>& v) {
        s += ',';
        if (v) s += detail::fmt_double(*v);
    };
    opt_ll(r.p);
    opt_ll(r.q);
    opt_d(r.alpha);
    opt_d(r.log_aq);
    opt_d(r.log_z_exact);
    opt_d(r.log_z_theory);
    opt_d(r.mean_nc_exact);
    opt_d(r.mean_nc_theory);
    opt_d(r.var_nc_exact);
    opt_d(r.var_nc_theory);
    s += ',';
    if (r.dominant) s += *r.dominant;
    s += ',';
    s += detail::join_flags(r.flags);
    return s;
}

inline std::string to_jsonl(const ScanRecord& r) {
    std::string s = "{";
    bool first = true;
    auto key = [&](const char* k) {
        if (!first) s += ',';
        first = false;
        s += '"';
        s += k;
        s += "\":";
    };
    auto put_ll = [&](const char* k, long long v) {
        key(k);
        s += std::to_string(v);
    };
    auto put_d = [&](const char* k, const std::optional<double>& v) {
        if (!v) return;
        key(k);
        s += detail::fmt_double(*v);
    };
    put_ll("m", r.m);
    put_ll("n", r.n);
    if (r.p) put_ll("p", *r.p);
    if (r.q) put_ll("q", *r.q);
    put_d("alpha", r.alpha);
    put_d("logAq", r.log_aq);
    put_d("log_z_exact", r.log_z_exact);
    put_d("log_z_theory", r.log_z_theory);
    put_d("mean_nc_exact", r.mean_nc_exact);
    put_d("mean_nc_theory", r.mean_nc_theory);
    put_d("var_nc_exact", r.var_nc_exact);
    put_d("var_nc_theory", r.var_nc_theory);
    if (r.dominant) {
        key("dominant");
        s += '"';
        s += *r.dominant;
        s += '"';
    }
    if (!r.flags.empty()) {
        key("flags");
        s += '"';
        s += detail::join_flags(r.flags);
        s += '"';
    }
    s += '}';
    return s;
}

namespace detail {

inline unsigned scan_worker_count(std::size_t items) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("RESONANCE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(items, 1)));
}

// Evaluate f(i) for i in [0, count) concurrently; results land in caller
// slots indexed by i, so output order is independent of scheduling.
template <class F>
inline void parallel_for_indexed(std::size_t count, F&& f) {
    const unsigned workers = scan_worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                f(i);
            }
        });
    for (auto& th : pool) th.join();
}

struct ExactValues {
    double log_z, mean, var;
    bool unreliable = false;
};

inline ExactValues exact_normalized(const TorusParams& t) {
    ExactValues v{};
    const double mn = static_cast<double>(t.m) * static_cast<double>(t.n);
    v.log_z = log_z_total(t).log_abs / std::pow(mn, 0.25);
    const MomentVector mv = moments_exact(t, 2);
    v.mean = mv.raw[1] / std::pow(mn, 0.75);
    v.var = mv.central[2] / std::pow(mn, 1.25);
    v.unreliable = mv.max_weight_excursion > 1e-6;
    return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// aspect-ratio sweep (the resonance-spike scan)

struct AspectScanOptions {
    double area = 1e6;
    double ratio_min = 0.8, ratio_max = 1.25;
    int steps = 101;
    double a = 1.0, b = 0.5, c = 0.5;
    long long qmax = 20;       // rational-detection bound
    double alpha_max = 8.0;    // emit theory only when |alpha| is below this
};

// Integer sizes for a requested aspect ratio: candidates m near
// sqrt(area/ratio) with n = round(ratio m); minimize |mn - area|, then
// |n/m - ratio|, then m.
struct SizePick {
    long long m = 1, n = 1;
};

inline SizePick realize_size(double area, double ratio) {
    const long long m0 = std::llround(std::sqrt(area / ratio));
    SizePick best;
    double best_area = std::numeric_limits<double>::infinity();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (long long m = std::max<long long>(1, m0 - 2); m <= m0 + 2; ++m) {
        const long long n = std::max<long long>(1, std::llround(ratio * static_cast<double>(m)));
        const double da = std::fabs(static_cast<double>(m) * static_cast<double>(n) - area);
        const double dr = std::fabs(static_cast<double>(n) / static_cast<double>(m) - ratio);
        if (da < best_area || (da == best_area && dr < best_ratio) ||
            (da == best_area && dr == best_ratio && m < best.m)) {
            best = {m, n};
            best_area = da;
            best_ratio = dr;
        }
    }
    return best;
}

inline std::vector<ScanRecord> scan_aspect(const AspectScanOptions& o) {
    if (o.steps < 1 || !(o.ratio_min > 0.0) || !(o.ratio_max >= o.ratio_min) || !(o.area >= 1.0) ||
        o.area > 1e8)
        throw std::invalid_argument("scan_aspect: bad options");
    std::vector<ScanRecord> out(static_cast<std::size_t>(o.steps));
    const double l0 = std::log(o.ratio_min), l1 = std::log(o.ratio_max);
    detail::parallel_for_indexed(out.size(), [&](std::size_t i) {
        const double f = o.steps == 1 ? 0.5 : static_cast<double>(i) / (o.steps - 1);
        const double ratio = std::exp(l0 + f * (l1 - l0));
        const SizePick sz = realize_size(o.area, ratio);
        ScanRecord rec;
        rec.m = sz.m;
        rec.n = sz.n;
        TorusParams t{sz.m, sz.n, o.a, o.b, o.c};
        try {
            const auto ex = detail::exact_normalized(t);
            rec.log_z_exact = ex.log_z;
            rec.mean_nc_exact = ex.mean;
            rec.var_nc_exact = ex.var;
            if (ex.unreliable) rec.flags.push_back("unreliable-cumulant");
        } catch (const NearSingularError&) {
            rec.flags.push_back("unreliable-cumulant");
        }
        const double x = static_cast<double>(t.n) * t.b / (static_cast<double>(t.m) * (t.a - t.b));
        const Rational pq = best_rational(x, o.qmax);
        if (pq.p >= 1) {
            const CriticalParams cp = derive_params(t, pq.p, pq.q);
            rec.p = pq.p;
            rec.q = pq.q;
            rec.alpha = cp.alpha;
            rec.log_aq = static_cast<double>(pq.q) * cp.log_a;
            if (std::fabs(cp.alpha) <= o.alpha_max) {
                const Prediction pr = predict_all(cp, t);
                const double mn = static_cast<double>(t.m) * static_cast<double>(t.n);
                rec.log_z_theory = pr.log_z / std::pow(mn, 0.25);
                rec.mean_nc_theory = pr.mean_nc / std::pow(mn, 0.75);
                rec.var_nc_theory = pr.var_nc / std::pow(mn, 1.25);
                rec.dominant = pr.dominant > 0 ? '+' : '-';
                if (pr.singular) rec.flags.push_back("singular");
                if (pr.tie) rec.flags.push_back("tie");
                if (pr.near_zero_var) rec.flags.push_back("near-zero-var");
            }
        }
        out[i] = std::move(rec);
    });
    return out;
}

// ---------------------------------------------------------------------------
// alpha sweep at fixed A^q (anatomy of one spike)

struct AlphaScanOptions {
    double log_aq = 0.0;
    double alpha_min = 0.0, alpha_max = 4.0;
    int steps = 81;
    long long m = 1000, n = 1000, p = 1, q = 1;
    bool with_exact = true;
};

namespace detail {

// Solve for b in (0, a): [b(qn+mp) - mpa] / sqrt(2 q n a b) = alpha, the
// alpha-realization of the aspect window at fixed (m, n, p, q).  Strictly
// increasing in b, so bisection is safe.
inline double solve_b_for_alpha(double a, long long m, long long n, long long p, long long q,
                                double alpha) {
    const double qn = static_cast<double>(q) * static_cast<double>(n);
    const double mp = static_cast<double>(m) * static_cast<double>(p);
    auto g = [&](double b) {
        return (b * (qn + mp) - mp * a) / std::sqrt(2.0 * qn * a * b) - alpha;
    };
    double lo = 1e-12 * a, hi = a * (1.0 - 1e-12);
    if (g(hi) < 0.0) throw std::domain_error("scan_alpha: alpha beyond the realizable window");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16 * a) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

inline std::vector<ScanRecord> scan_alpha(const AlphaScanOptions& o) {
    if (o.steps < 2 || o.alpha_min < 0.0 || !(o.alpha_max > o.alpha_min))
        throw std::invalid_argument("scan_alpha: bad options");
    const double a = 1.0;
    const double beta = std::exp(o.log_aq);

    // sweep grid plus marker abscissae (nonanalyticities; dominance flips
    // are located after evaluation by bisection between grid neighbours)
    std::vector<double> alphas(static_cast<std::size_t>(o.steps));
    for (int i = 0; i < o.steps; ++i)
        alphas[static_cast<std::size_t>(i)] =
            o.alpha_min + (o.alpha_max - o.alpha_min) * i / (o.steps - 1);
    if (beta > 1.0) {
        const NonanalyticityGrid g = nonanalyticity_grid(beta, o.alpha_max);
        for (double av : g.plus)
            if (av >= o.alpha_min) alphas.push_back(av);
        for (double av : g.minus)
            if (av >= o.alpha_min) alphas.push_back(av);
    }
    if (beta > 1.0) {
        // dominance flips on the grid -> bisect for crossover markers
        auto dom_diff = [&](double av) {
            return -j_closed({1, -beta, av}).value.real() + j_closed({1, beta, av}).value.real();
        };
        double prev = dom_diff(o.alpha_min);
        const int probes = 4 * o.steps;
        for (int i = 1; i <= probes; ++i) {
            const double av = o.alpha_min + (o.alpha_max - o.alpha_min) * i / probes;
            const double cur = dom_diff(av);
            if (prev * cur < 0.0) {
                double lo = o.alpha_min + (o.alpha_max - o.alpha_min) * (i - 1.0) / probes;
                double hi = av, flo = prev;
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = dom_diff(mid);
                    if (flo * fm <= 0.0)
                        hi = mid;
                    else {
                        lo = mid;
                        flo = fm;
                    }
                }
                alphas.push_back(0.5 * (lo + hi));
            }
            prev = cur;
        }
    }
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

    // prefactors at the alpha = 0 realization
    const double b0 = a * static_cast<double>(o.m) * static_cast<double>(o.p) /
                      (static_cast<double>(o.q) * static_cast<double>(o.n) +
                       static_cast<double>(o.m) * static_cast<double>(o.p));
    const double c0 = (a - b0) * std::exp(o.log_aq / (static_cast<double>(o.q) * static_cast<double>(o.n)));
    const double mn = static_cast<double>(o.m) * static_cast<double>(o.n);
    const double pq = static_cast<double>(o.p) * static_cast<double>(o.q);
    const double rt2pi = detail::kPi * std::sqrt(2.0);
    const double c_logz = std::pow(mn * b0 * c0, 0.25) / (rt2pi * std::pow(pq, 0.75));
    const double c_mean = std::pow(mn * c0, 0.75) / (rt2pi * std::pow(pq * b0, 0.25));
    const double c_var = std::pow(mn * c0, 1.25) * std::pow(pq, 0.25) / (rt2pi * std::pow(b0, 0.75));
    const double n1 = std::pow(mn, 0.25), n3 = std::pow(mn, 0.75), n5 = std::pow(mn, 1.25);

    std::vector<ScanRecord> out(2 * alphas.size());
    detail::parallel_for_indexed(alphas.size(), [&](std::size_t i) {
        const double av = alphas[i];
        std::optional<double> exact_logz, exact_mean, exact_var;
        std::vector<std::string> exact_flags;
        if (o.with_exact) {
            try {
                const double b = detail::solve_b_for_alpha(a, o.m, o.n, o.p, o.q, av);
                const double c =
                    (a - b) * std::exp(o.log_aq / (static_cast<double>(o.q) * static_cast<double>(o.n)));
                TorusParams t{o.m, o.n, a, b, c};
                const auto ex = detail::exact_normalized(t);
                exact_logz = ex.log_z;
                exact_mean = ex.mean;
                exact_var = ex.var;
                if (ex.unreliable) exact_flags.push_back("unreliable-cumulant");
            } catch (const std::exception&) {
                exact_flags.push_back("unreliable-cumulant");
            }
        }
        const JResult j1p = j_closed({1, beta, av});
        const JResult j1m = j_closed({1, -beta, av});
        const double ip = -j1p.value.real(), im = -j1m.value.real();
        const bool tie = std::fabs(ip - im) <= 1e-9 * (1.0 + std::max(std::fabs(ip), std::fabs(im)));
        for (int side = 0; side < 2; ++side) {
            const double sgn = side == 0 ? 1.0 : -1.0;
            ScanRecord rec;
            rec.m = o.m;
            rec.n = o.n;
            rec.p = o.p;
            rec.q = o.q;
            rec.alpha = av;
            rec.log_aq = o.log_aq;
            rec.dominant = side == 0 ? '+' : '-';
            const JResult& j1 = side == 0 ? j1p : j1m;
            rec.log_z_theory = c_logz * -j1.value.real() / n1;
            const double i0 = -j_closed({0, sgn * beta, av}).value.real();
            const double iv = -j_closed({-1, sgn * beta, av}).value.real();
            rec.mean_nc_theory = c_mean * i0 / n3;
            rec.var_nc_theory = c_var * iv / n5;
            if (j1.singular) rec.flags.push_back("singular");
            if (tie) rec.flags.push_back("tie");
            if (std::fabs(iv) <= 1e-9) rec.flags.push_back("near-zero-var");
            rec.log_z_exact = exact_logz;
            rec.mean_nc_exact = exact_mean;
            rec.var_nc_exact = exact_var;
            for (const auto& fl : exact_flags) rec.flags.push_back(fl);
            out[2 * i + static_cast<std::size_t>(side)] = std::move(rec);
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// melt sweep: A^q through 1 at alpha = 0

struct MeltScanOptions {
    long long m = 1000, n = 1000, p = 1, q = 1;
    double log_aq_min = -3.0, log_aq_max = 3.0;
    int steps = 61;
    bool with_exact = true;
};

inline std::vector<ScanRecord> scan_melt(const MeltScanOptions& o) {
    if (o.steps < 2) throw std::invalid_argument("scan_melt: bad options");
    const double a = 1.0;
    std::vector<ScanRecord> out(static_cast<std::size_t>(o.steps));
    detail::parallel_for_indexed(out.size(), [&](std::size_t i) {
        const double laq =
            o.log_aq_min + (o.log_aq_max - o.log_aq_min) * static_cast<double>(i) / (o.steps - 1);
        // alpha = 0 enforced: b pinned to the exact rational aspect
        const double b = a * static_cast<double>(o.m) * static_cast<double>(o.p) /
                         (static_cast<double>(o.q) * static_cast<double>(o.n) +
                          static_cast<double>(o.m) * static_cast<double>(o.p));
        const double c = (a - b) * std::exp(laq / (static_cast<double>(o.q) * static_cast<double>(o.n)));
        TorusParams t{o.m, o.n, a, b, c};
        ScanRecord rec;
        rec.m = o.m;
        rec.n = o.n;
        rec.p = o.p;
        rec.q = o.q;
        rec.log_aq = laq;
        const double mn = static_cast<double>(o.m) * static_cast<double>(o.n);
        CriticalParams cp = derive_params(t, o.p, o.q);
        cp.alpha = 0.0;  // exact by construction; drop the ~1e-14 rounding residue
        cp.gamma = static_cast<double>(cp.q) * cp.log_a;
        rec.alpha = 0.0;
        const Prediction pr = predict_all(cp, t);
        rec.log_z_theory = pr.log_z / std::pow(mn, 0.25);
        rec.mean_nc_theory = pr.mean_nc / std::pow(mn, 0.75);
        rec.var_nc_theory = pr.var_nc / std::pow(mn, 1.25);
        rec.dominant = pr.dominant > 0 ? '+' : '-';
        if (pr.singular) rec.flags.push_back("singular");
        if (pr.tie) rec.flags.push_back("tie");
        if (pr.near_zero_var) rec.flags.push_back("near-zero-var");
        if (o.with_exact) {
            try {
                const auto ex = detail::exact_normalized(t);
                rec.log_z_exact = ex.log_z;
                rec.mean_nc_exact = ex.mean;
                rec.var_nc_exact = ex.var;
                if (ex.unreliable) rec.flags.push_back("unreliable-cumulant");
            } catch (const std::exception&) {
                rec.flags.push_back("unreliable-cumulant");
            }
        }
        out[i] = std::move(rec);
    });
    return out;
}

}  // namespace dimer
