#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "dimer/bell.hpp"
#include "dimer/torus.hpp"

// Brute-force ground truth on tiny tori: every perfect matching of the
// honeycomb torus H_{m,n}, the matching -> lattice-path bijection, and
// Z2 x Z2 homology classes from cut-crossing parities.
//
// Cell (x, y) of the contracted square torus R_{m,n} holds one white and one
// black vertex of H_{m,n}.  Per white vertex the matched edge type is
//   a: W(x,y)-B(x,y)     (cell empty)
//   b: W(x,y)-B(x-1,y)   (east step entering from the west)
//   c: W(x,y)-B(x,y-1)   (north step entering from the south)

namespace dimer {

inline constexpr int kEnumerationVertexBound = 20;  // 2*m*n <= 20

enum class EdgeType : std::uint8_t { a = 0, b = 1, c = 2 };

struct Cover {
    std::int64_t m = 0, n = 0;
    std::vector<EdgeType> choice;  // per white vertex, row-major (y*m + x)
};

struct CoverStats {
    int n_a = 0, n_b = 0, n_c = 0;
    int eps_x = 0, eps_y = 0;  // crossing parities of the cuts x=0 / y=0
};

struct Loop {
    int h = 0, v = 0;  // winding numbers (wraps of the two cuts)
    int length = 0;    // number of steps
};

struct LoopSystem {
    std::vector<Loop> loops;
    int eps_x = 0, eps_y = 0;
};

struct HomologyTable {
    // weight by class [eps_x][eps_y]
    std::array<std::array<double, 2>, 2> w{};

    double total() const { return w[0][0] + w[0][1] + w[1][0] + w[1][1]; }
};

// Exact exponent content per homology class: multiset of (n_a, n_b, n_c)
// triples with multiplicities, reusable across weight choices.
struct ClassPolynomials {
    std::int64_t m = 0, n = 0;
    std::array<std::array<std::map<std::array<int, 3>, long long>, 2>, 2> poly{};

    HomologyTable eval(double a, double b, double c) const;
    long long cover_count() const {
        long long t = 0;
        for (const auto& row : poly)
            for (const auto& cls : row)
                for (const auto& [e, cnt] : cls) t += cnt;
        return t;
    }
};

namespace detail {

inline void check_enumeration_bound(std::int64_t m, std::int64_t n) {
    if (m < 1 || n < 1) throw std::invalid_argument("enumerate: need m, n >= 1");
    if (2 * m * n > kEnumerationVertexBound)
        throw std::invalid_argument("enumerate: 2*m*n exceeds the tractability bound");
}

// Depth-first enumeration over white vertices in row-major order, candidate
// edges tried in type order a, b, c.  Deterministic (lexicographic) output.
template <class Fn>
void enumerate_impl(std::int64_t m, std::int64_t n, Fn&& emit) {
    const std::int64_t cells = m * n;
    std::vector<EdgeType> choice(static_cast<std::size_t>(cells), EdgeType::a);
    std::vector<char> black_used(static_cast<std::size_t>(cells), 0);
    auto black_of = [&](std::int64_t x, std::int64_t y, EdgeType t) -> std::int64_t {
        if (t == EdgeType::b) x = (x - 1 + m) % m;
        if (t == EdgeType::c) y = (y - 1 + n) % n;
        return y * m + x;
    };
    auto rec = [&](auto&& self, std::int64_t w) -> void {
        if (w == cells) {
            Cover cv{m, n, choice};
            emit(cv);
            return;
        }
        const std::int64_t x = w % m, y = w / m;
        for (EdgeType t : {EdgeType::a, EdgeType::b, EdgeType::c}) {
            const std::int64_t bidx = black_of(x, y, t);
            if (black_used[static_cast<std::size_t>(bidx)]) continue;
            black_used[static_cast<std::size_t>(bidx)] = 1;
            choice[static_cast<std::size_t>(w)] = t;
            self(self, w + 1);
            black_used[static_cast<std::size_t>(bidx)] = 0;
        }
    };
    rec(rec, 0);
}

}  // namespace detail

// Loop system of a cover under the classical bijection, with per-loop
// winding and total crossing parities.  Throws on non-matching input.
inline LoopSystem paths_from_cover(const Cover& cover) {
    const std::int64_t m = cover.m, n = cover.n, cells = m * n;
    if (static_cast<std::int64_t>(cover.choice.size()) != cells)
        throw std::invalid_argument("paths_from_cover: malformed cover");
    // black vertex usage must be a bijection
    std::vector<char> black_used(static_cast<std::size_t>(cells), 0);
    for (std::int64_t w = 0; w < cells; ++w) {
        std::int64_t x = w % m, y = w / m;
        const EdgeType t = cover.choice[static_cast<std::size_t>(w)];
        if (t == EdgeType::b) x = (x - 1 + m) % m;
        if (t == EdgeType::c) y = (y - 1 + n) % n;
        char& used = black_used[static_cast<std::size_t>(y * m + x)];
        if (used) throw std::invalid_argument("paths_from_cover: black vertex covered twice");
        used = 1;
    }

    // outgoing step of cell (x,y): east if W(x+1,y) chose b, north if
    // W(x,y+1) chose c, none if W(x,y) chose a (empty cell)
    auto at = [&](std::int64_t x, std::int64_t y) {
        return cover.choice[static_cast<std::size_t>(y * m + x)];
    };
    LoopSystem sys;
    std::vector<char> visited(static_cast<std::size_t>(cells), 0);
    for (std::int64_t start = 0; start < cells; ++start) {
        if (visited[static_cast<std::size_t>(start)]) continue;
        if (at(start % m, start / m) == EdgeType::a) {
            visited[static_cast<std::size_t>(start)] = 1;
            continue;
        }
        Loop loop;
        std::int64_t x = start % m, y = start / m;
        do {
            visited[static_cast<std::size_t>(y * m + x)] = 1;
            const bool east = at((x + 1) % m, y) == EdgeType::b;
            const bool north = at(x, (y + 1) % n) == EdgeType::c;
            if (east == north)
                throw std::invalid_argument("paths_from_cover: cell without unique out-step");
            if (east) {
                if (x == m - 1) ++loop.h;
                x = (x + 1) % m;
            } else {
                if (y == n - 1) ++loop.v;
                y = (y + 1) % n;
            }
            ++loop.length;
        } while (y * m + x != start);
        sys.loops.push_back(loop);
        sys.eps_x = (sys.eps_x + loop.h) & 1;
        sys.eps_y = (sys.eps_y + loop.v) & 1;
    }
    return sys;
}

inline CoverStats stats_from_cover(const Cover& cover) {
    CoverStats st;
    for (EdgeType t : cover.choice) {
        if (t == EdgeType::a) ++st.n_a;
        if (t == EdgeType::b) ++st.n_b;
        if (t == EdgeType::c) ++st.n_c;
    }
    const LoopSystem sys = paths_from_cover(cover);
    st.eps_x = sys.eps_x;
    st.eps_y = sys.eps_y;
    return st;
}

inline std::vector<Cover> enumerate_covers_full(std::int64_t m, std::int64_t n) {
    detail::check_enumeration_bound(m, n);
    std::vector<Cover> out;
    detail::enumerate_impl(m, n, [&](const Cover& c) { out.push_back(c); });
    return out;
}

inline std::vector<CoverStats> enumerate_covers(std::int64_t m, std::int64_t n) {
    detail::check_enumeration_bound(m, n);
    std::vector<CoverStats> out;
    detail::enumerate_impl(m, n, [&](const Cover& c) { out.push_back(stats_from_cover(c)); });
    return out;
}

inline ClassPolynomials class_polynomials(std::int64_t m, std::int64_t n) {
    detail::check_enumeration_bound(m, n);
    ClassPolynomials cp;
    cp.m = m;
    cp.n = n;
    detail::enumerate_impl(m, n, [&](const Cover& c) {
        const CoverStats st = stats_from_cover(c);
        ++cp.poly[static_cast<std::size_t>(st.eps_x)][static_cast<std::size_t>(st.eps_y)]
                 [{st.n_a, st.n_b, st.n_c}];
    });
    return cp;
}

inline HomologyTable ClassPolynomials::eval(double a, double b, double c) const {
    HomologyTable t;
    for (int ex = 0; ex < 2; ++ex)
        for (int ey = 0; ey < 2; ++ey) {
            double s = 0.0;
            for (const auto& [e, cnt] : poly[static_cast<std::size_t>(ex)][static_cast<std::size_t>(ey)])
                s += static_cast<double>(cnt) * std::pow(a, e[0]) * std::pow(b, e[1]) *
                     std::pow(c, e[2]);
            t.w[static_cast<std::size_t>(ex)][static_cast<std::size_t>(ey)] = s;
        }
    return t;
}

inline HomologyTable homology_table(std::int64_t m, std::int64_t n, double a, double b, double c) {
    return class_polynomials(m, n).eval(a, b, c);
}

// The signed combination of homology weights giving Z_{sigma tau}:
//              N(0,0)  N(1,0)  N(0,1)  N(1,1)
//   Z00          +1      -1      -1      -1
//   Z10          +1      +1      -1      +1
//   Z01          +1      -1      +1      +1
//   Z11          +1      +1      +1      -1
inline double z_from_table(const HomologyTable& t, const Sector& s) {
    static constexpr int sign[2][2][2][2] = {
        // [sigma][tau][eps_x][eps_y]
        {{{+1, -1}, {-1, -1}},   // Z00
         {{+1, +1}, {-1, +1}}},  // Z01
        {{{+1, -1}, {+1, +1}},   // Z10
         {{+1, +1}, {+1, -1}}},  // Z11
    };
    double z = 0.0;
    for (int ex = 0; ex < 2; ++ex)
        for (int ey = 0; ey < 2; ++ey)
            z += sign[s.sigma][s.tau][ex][ey] *
                 t.w[static_cast<std::size_t>(ex)][static_cast<std::size_t>(ey)];
    return z;
}

// Exact Boltzmann moments of N_c by direct summation over covers.
inline MomentVector brute_moments(std::int64_t m, std::int64_t n, double a, double b, double c,
                                  int lmax) {
    detail::check_enumeration_bound(m, n);
    const ClassPolynomials cp = class_polynomials(m, n);
    double z = 0.0;
    std::vector<double> raw(static_cast<std::size_t>(lmax) + 1, 0.0);
    for (const auto& row : cp.poly)
        for (const auto& cls : row)
            for (const auto& [e, cnt] : cls) {
                const double w =
                    static_cast<double>(cnt) * std::pow(a, e[0]) * std::pow(b, e[1]) * std::pow(c, e[2]);
                z += w;
                double p = 1.0;
                for (int l = 0; l <= lmax; ++l) {
                    raw[static_cast<std::size_t>(l)] += w * p;
                    p *= e[2];
                }
            }
    MomentVector mv;
    mv.raw.assign(static_cast<std::size_t>(lmax) + 1, 0.0);
    mv.central.assign(static_cast<std::size_t>(lmax) + 1, 0.0);
    for (int l = 0; l <= lmax; ++l) mv.raw[static_cast<std::size_t>(l)] = raw[static_cast<std::size_t>(l)] / z;
    const double mu = lmax >= 1 ? mv.raw[1] : 0.0;
    // recompute centrals exactly rather than by binomial shift
    for (const auto& row : cp.poly)
        for (const auto& cls : row)
            for (const auto& [e, cnt] : cls) {
                const double w =
                    static_cast<double>(cnt) * std::pow(a, e[0]) * std::pow(b, e[1]) * std::pow(c, e[2]);
                double p = 1.0;
                for (int l = 0; l <= lmax; ++l) {
                    mv.central[static_cast<std::size_t>(l)] += w * p / z;
                    if (l < lmax) p *= (e[2] - mu);
                }
            }
    mv.central[0] = 1.0;
    return mv;
}

// One line per cover: "n_a n_b n_c eps_x eps_y".
inline void dump_covers(std::int64_t m, std::int64_t n, std::ostream& os) {
    detail::check_enumeration_bound(m, n);
    detail::enumerate_impl(m, n, [&](const Cover& c) {
        const CoverStats st = stats_from_cover(c);
        os << st.n_a << ' ' << st.n_b << ' ' << st.n_c << ' ' << st.eps_x << ' ' << st.eps_y
           << '\n';
    });
}

}  // namespace dimer
