#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

// Moment calculus: raw moments of an edge count are complete Bell
// polynomials of the cumulants L_l = (c d/dc)^l log Z.

namespace dimer {

// Integer partitions of l, parts non-increasing.  Deterministic order.
inline std::vector<std::vector<int>> partitions(int l) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest, int maxpart) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rest, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rest - p, p);
            cur.pop_back();
        }
    };
    rec(rec, l, l);
    return out;
}

// Coefficient of the monomial prod L_{s_i}^{r_i} in the complete Bell
// polynomial Y_l: l! / prod_i (s_i!^{r_i} r_i!).  Exact for l <= 20.
inline std::uint64_t bell_coefficient(std::span<const int> parts) {
    if (parts.empty()) throw std::invalid_argument("bell_coefficient: empty partition");
    int l = 0;
    for (int p : parts) {
        if (p < 1) throw std::invalid_argument("bell_coefficient: parts must be positive");
        l += p;
    }
    if (l > 20) throw std::invalid_argument("bell_coefficient: partition sum exceeds 20");
    auto fact = [](int k) {
        std::uint64_t f = 1;
        for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
        return f;
    };
    std::uint64_t num = fact(l);
    // group equal part sizes
    std::vector<int> sizes(static_cast<std::size_t>(l) + 1, 0);
    for (int p : parts) ++sizes[static_cast<std::size_t>(p)];
    for (int s = 1; s <= l; ++s) {
        const int r = sizes[static_cast<std::size_t>(s)];
        if (r == 0) continue;
        const std::uint64_t sf = fact(s);
        for (int i = 0; i < r; ++i) num /= sf;
        num /= fact(r);
    }
    return num;
}

// Complete Bell polynomial Y_l(L_1, ..., L_l) via the recurrence
// Y_l = sum_j C(l-1, j-1) L_j Y_{l-j}.  cum is 1-indexed (cum[0] ignored).
inline std::vector<double> complete_bell(std::span<const double> cum, int lmax) {
    if (static_cast<int>(cum.size()) < lmax + 1)
        throw std::invalid_argument("complete_bell: cumulant vector too short");
    std::vector<double> y(static_cast<std::size_t>(lmax) + 1, 0.0);
    y[0] = 1.0;
    for (int l = 1; l <= lmax; ++l) {
        double binom = 1.0;  // C(l-1, j-1), j = 1
        double s = 0.0;
        for (int j = 1; j <= l; ++j) {
            s += binom * cum[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(l - j)];
            binom = binom * (l - j) / j;  // -> C(l-1, j)
        }
        y[static_cast<std::size_t>(l)] = s;
    }
    return y;
}

// Raw and central moments of the c-edge count.  Index 1..lmax; raw[0] = 1,
// central[0] = 1 and central[1] == 0 up to assembly roundoff.
struct MomentVector {
    std::vector<double> raw;
    std::vector<double> central;
    double max_weight_excursion = 0.0;  // max(|w_sector| - 1, 0) diagnostic
};

}  // namespace dimer
