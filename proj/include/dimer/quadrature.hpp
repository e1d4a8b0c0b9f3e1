#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

// Adaptive Gauss-Kronrod (G7, K15) quadrature with mandatory breakpoints.
// The integrands here are piecewise analytic between breakpoints, so greedy
// bisection of the worst panel converges quickly.

namespace dimer {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

namespace detail {

// node, G7 weight, K15 weight
inline constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
inline double gk15_panel(F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double hl = b - mid;
    const double y0 = f(mid);
    double g7 = kGK15[0][1] * y0;
    double k15 = kGK15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hl * kGK15[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += kGK15[i][1] * yi;
        k15 += kGK15[i][2] * yi;
    }
    g7 *= hl;
    k15 *= hl;
    err = 200.0 * std::fabs(g7 - k15);
    err *= std::sqrt(err);
    err = std::max(err, 1e-16 * std::fabs(k15));
    return k15;
}

}  // namespace detail

template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                              std::size_t max_panels = 20000) {
    struct Panel {
        double a, b, val, err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::vector<Panel> heap;
    auto push = [&](double lo, double hi) {
        Panel p{lo, hi, 0.0, 0.0};
        p.val = detail::gk15_panel(f, lo, hi, p.err);
        res.evals += 15;
        heap.push_back(p);
        std::push_heap(heap.begin(), heap.end());
    };
    push(a, b);
    while (heap.size() < max_panels) {
        double tot_err = 0.0;
        for (const auto& p : heap) tot_err += p.err;
        if (tot_err <= abs_tol) break;
        std::pop_heap(heap.begin(), heap.end());
        const Panel worst = heap.back();
        heap.pop_back();
        if (worst.err <= abs_tol / (4.0 * static_cast<double>(heap.size() + 1))) {
            // worst panel already negligible; further splitting cannot help
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            break;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        push(worst.a, mid);
        push(mid, worst.b);
    }
    for (const auto& p : heap) {
        res.value += p.val;
        res.abs_err += p.err;
    }
    res.converged = res.abs_err <= abs_tol;
    return res;
}

// Integrate over [pts.front(), pts.back()] with every interior point a panel
// boundary.  pts must be sorted.
template <class F>
QuadResult integrate_segmented(F&& f, std::span<const double> pts, double abs_tol,
                               std::size_t max_panels = 20000) {
    QuadResult tot;
    tot.converged = true;
    if (pts.size() < 2) return tot;
    const double seg_tol = abs_tol / static_cast<double>(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        QuadResult r = integrate_adaptive(f, pts[i], pts[i + 1], seg_tol, max_panels);
        tot.value += r.value;
        tot.abs_err += r.abs_err;
        tot.evals += r.evals;
        tot.converged = tot.converged && r.converged;
    }
    return tot;
}

}  // namespace dimer
