#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dimer {

struct Rational {
    long long p = 0;
    long long q = 1;
};

// Best rational approximation of x > 0 with denominator <= qmax, by
// continued-fraction convergents and the final semiconvergent.  Ties go to
// the smaller denominator.
inline Rational best_rational(double x, long long qmax) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("best_rational: need finite x > 0");
    if (qmax < 1) throw std::invalid_argument("best_rational: need qmax >= 1");

    long long p_prev = 1, q_prev = 0;  // h_{-1}/k_{-1}
    long long p_cur = static_cast<long long>(std::floor(x)), q_cur = 1;
    double frac = x - std::floor(x);

    auto err = [x](long long p, long long q) { return std::fabs(x - static_cast<double>(p) / static_cast<double>(q)); };

    for (int it = 0; it < 64 && frac > 1e-15; ++it) {
        const double inv = 1.0 / frac;
        const double fa = std::floor(inv);
        if (fa > 9.0e17) break;
        const long long a = static_cast<long long>(fa);
        frac = inv - fa;
        const long long p_next = a * p_cur + p_prev;
        const long long q_next = a * q_cur + q_prev;
        if (q_next > qmax) {
            // largest semiconvergent within the bound
            const long long t = (qmax - q_prev) / q_cur;
            if (t > 0) {
                const long long ps = t * p_cur + p_prev;
                const long long qs = t * q_cur + q_prev;
                // semiconvergent is a best approximation only for t >= a/2;
                // compare against the last convergent and keep the winner
                const double es = err(ps, qs), ec = err(p_cur, q_cur);
                if (es < ec || (es == ec && qs < q_cur)) return {ps, qs};
            }
            return {p_cur, q_cur};
        }
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    return {p_cur, q_cur};
}

}  // namespace dimer
