// Brute-force ground truth, independent of the capacity and scheme modules.
// The confusability graph over all data realizations captures exactly which
// pairs a single broadcast symbol must separate; proper colorings are in
// one-to-one correspondence with valid scalar codes (linear or not), so the
// chromatic number is the minimal alphabet size at batch size one.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcbc/instance.hpp"
#include "lcbc/scheme.hpp"

namespace lcbc {

struct ConfusabilityGraph {
    std::size_t n = 0;                       // q^d vertices
    std::vector<std::vector<std::uint8_t>> adj;  // dense symmetric adjacency
    std::size_t edge_count = 0;

    bool adjacent(std::size_t a, std::size_t b) const { return adj[a][b] != 0; }
};

// Vertices are the q^d realizations of the data vector (batch size one);
// x ~ y when some user sees identical side information but different demand.
inline ConfusabilityGraph build_confusability(const LcbcInstance& inst, std::size_t cap = 4096) {
    const std::uint64_t q = inst.field()->order();
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < inst.d(); ++i) {
        n *= q;
        if (n > cap)
            throw std::invalid_argument("build_confusability: q^d = exceeds cap " + std::to_string(cap) +
                                        "; lower d or use randomized checks");
    }
    // per-vertex images (W'_k, W_k) for all users, as flat code tuples
    const std::size_t d = inst.d();
    std::vector<std::vector<std::uint64_t>> side_img(3), demand_img(3);
    std::vector<std::uint64_t> x(d);
    const Field& f = inst.field();
    for (std::size_t k = 0; k < 3; ++k) {
        side_img[k].resize(n * inst.user(k).side.cols());
        demand_img[k].resize(n * inst.user(k).demand.cols());
    }
    for (std::uint64_t v = 0; v < n; ++v) {
        std::uint64_t tmp = v;
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = tmp % q;
            tmp /= q;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            const MatrixFq& vp = inst.user(k).side;
            const MatrixFq& vd = inst.user(k).demand;
            for (std::size_t j = 0; j < vp.cols(); ++j) {
                std::uint64_t acc = 0;
                for (std::size_t i = 0; i < d; ++i) acc = f->add(acc, f->mul(x[i], vp.at(i, j)));
                side_img[k][v * vp.cols() + j] = acc;
            }
            for (std::size_t j = 0; j < vd.cols(); ++j) {
                std::uint64_t acc = 0;
                for (std::size_t i = 0; i < d; ++i) acc = f->add(acc, f->mul(x[i], vd.at(i, j)));
                demand_img[k][v * vd.cols() + j] = acc;
            }
        }
    }
    ConfusabilityGraph g;
    g.n = n;
    g.adj.assign(n, std::vector<std::uint8_t>(n, 0));
    for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = a + 1; b < n; ++b) {
            bool confusable = false;
            for (std::size_t k = 0; k < 3 && !confusable; ++k) {
                const std::size_t mp = inst.user(k).side.cols();
                const std::size_t m = inst.user(k).demand.cols();
                bool same_side = true;
                for (std::size_t j = 0; j < mp && same_side; ++j)
                    same_side = side_img[k][a * mp + j] == side_img[k][b * mp + j];
                if (!same_side) continue;
                for (std::size_t j = 0; j < m; ++j)
                    if (demand_img[k][a * m + j] != demand_img[k][b * m + j]) {
                        confusable = true;
                        break;
                    }
            }
            if (confusable) {
                g.adj[a][b] = g.adj[b][a] = 1;
                ++g.edge_count;
            }
        }
    return g;
}

struct ColoringResult {
    std::size_t chromatic_lower = 0;  // clique bound, raised by the search
    std::size_t chromatic_upper = 0;  // best proper coloring found
    bool exact = false;               // lower == upper within the node budget
    std::vector<std::uint32_t> coloring;  // a proper coloring with chromatic_upper colors
};

namespace detail {

inline std::vector<std::size_t> degrees(const ConfusabilityGraph& g) {
    std::vector<std::size_t> deg(g.n, 0);
    for (std::size_t v = 0; v < g.n; ++v)
        deg[v] = static_cast<std::size_t>(std::count(g.adj[v].begin(), g.adj[v].end(), 1));
    return deg;
}

// greedy coloring in saturation order with incremental saturation sets;
// returns the number of colors used
inline std::size_t dsatur(const ConfusabilityGraph& g, std::vector<std::uint32_t>& colors) {
    const std::size_t n = g.n;
    colors.assign(n, UINT32_MAX);
    const std::vector<std::size_t> degree = degrees(g);
    const std::size_t words = (n + 64) / 64 + 1;
    std::vector<std::uint64_t> sat(n * words, 0);  // per-vertex neighbor-color bitmask
    std::vector<std::size_t> sat_count(n, 0);
    std::size_t used = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = SIZE_MAX;
        for (std::size_t v = 0; v < n; ++v) {
            if (colors[v] != UINT32_MAX) continue;
            if (best == SIZE_MAX || sat_count[v] > sat_count[best] ||
                (sat_count[v] == sat_count[best] && degree[v] > degree[best]))
                best = v;
        }
        std::uint32_t c = 0;
        while (sat[best * words + c / 64] & (1ULL << (c % 64))) ++c;
        colors[best] = c;
        used = std::max<std::size_t>(used, c + 1);
        for (std::size_t u = 0; u < n; ++u) {
            if (!g.adj[best][u] || colors[u] != UINT32_MAX) continue;
            std::uint64_t& w = sat[u * words + c / 64];
            if (!(w & (1ULL << (c % 64)))) {
                w |= 1ULL << (c % 64);
                ++sat_count[u];
            }
        }
    }
    return used;
}

inline std::size_t greedy_clique(const ConfusabilityGraph& g) {
    // seed from the highest-degree vertices and extend greedily
    const std::size_t n = g.n;
    const std::vector<std::size_t> deg = degrees(g);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return deg[a] != deg[b] ? deg[a] > deg[b] : a < b; });
    std::size_t best = 0;
    for (std::size_t s = 0; s < std::min<std::size_t>(n, 16); ++s) {
        std::vector<std::size_t> clique{order[s]};
        for (std::size_t v : order) {
            bool ok = true;
            for (std::size_t c : clique)
                if (c == v || !g.adj[v][c]) {
                    ok = false;
                    break;
                }
            if (ok) clique.push_back(v);
        }
        best = std::max(best, clique.size());
    }
    return std::max<std::size_t>(best, g.n > 0 ? 1 : 0);
}

// backtracking k-colorability with a node budget; nullopt = budget exhausted
inline std::optional<bool> k_colorable(const ConfusabilityGraph& g, std::size_t k,
                                       std::vector<std::uint32_t>& colors, std::uint64_t& budget) {
    const std::size_t n = g.n;
    colors.assign(n, UINT32_MAX);
    // order vertices by degree, densest first
    const std::vector<std::size_t> deg = degrees(g);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return deg[a] != deg[b] ? deg[a] > deg[b] : a < b; });
    std::size_t depth = 0;
    std::vector<std::uint32_t> tried(n, 0);
    std::vector<std::uint32_t> maxused(n + 1, 0);
    while (true) {
        if (budget-- == 0) return std::nullopt;
        if (depth == n) {
            std::vector<std::uint32_t> out(n);
            for (std::size_t i = 0; i < n; ++i) out[order[i]] = colors[order[i]];
            colors = out;
            return true;
        }
        const std::size_t v = order[depth];
        bool advanced = false;
        // symmetry break: never open more than one new color
        const std::uint32_t cap = std::min<std::uint32_t>(static_cast<std::uint32_t>(k), maxused[depth] + 1);
        for (std::uint32_t c = tried[depth]; c < cap; ++c) {
            bool ok = true;
            for (std::size_t u = 0; u < n && ok; ++u)
                if (g.adj[v][u] && colors[u] == c) ok = false;
            if (ok) {
                colors[v] = c;
                tried[depth] = c + 1;
                maxused[depth + 1] = std::max(maxused[depth], c + 1);
                ++depth;
                if (depth < n) tried[depth] = 0;
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            if (depth == 0) return false;
            colors[v] = UINT32_MAX;
            --depth;
            colors[order[depth]] = UINT32_MAX;
        }
    }
}

}  // namespace detail

// Exact chromatic number via branch and bound (greedy upper bound, clique
// lower bound, iterative k-colorability). Falls back to the bound pair when
// the node budget runs out.
inline ColoringResult scalar_optimal_cost(const ConfusabilityGraph& g, std::uint64_t node_budget = 10'000'000) {
    ColoringResult res;
    if (g.n == 0) return res;
    std::vector<std::uint32_t> best;
    res.chromatic_upper = detail::dsatur(g, best);
    res.chromatic_lower = detail::greedy_clique(g);
    res.coloring = best;
    std::uint64_t budget = node_budget;
    while (res.chromatic_lower < res.chromatic_upper) {
        std::vector<std::uint32_t> cand;
        auto feasible = detail::k_colorable(g, res.chromatic_upper - 1, cand, budget);
        if (!feasible.has_value()) break;  // budget exhausted; report the bound pair
        if (*feasible) {
            res.chromatic_upper -= 1;
            res.coloring = cand;
        } else {
            res.chromatic_lower = res.chromatic_upper;
        }
    }
    res.exact = res.chromatic_lower == res.chromatic_upper;
    return res;
}

inline bool coloring_is_proper(const ConfusabilityGraph& g, const std::vector<std::uint32_t>& colors) {
    for (std::size_t a = 0; a < g.n; ++a)
        for (std::size_t b = a + 1; b < g.n; ++b)
            if (g.adj[a][b] && colors[a] == colors[b]) return false;
    return true;
}

// Enumerates every data realization of the scheme's batch, runs the encoder
// and all three decoders, and compares against the demanded projections.
inline bool exhaustive_decode_check(const BroadcastScheme& s, std::size_t cap = 4096) {
    const LcbcInstance& orig = s.base.original;
    const std::uint64_t q = orig.field()->order();
    const std::size_t cells = orig.d() * s.batch();
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < cells; ++i) {
        space *= q;
        if (space > cap)
            throw std::invalid_argument("exhaustive_decode_check: q^{dL} exceeds cap " + std::to_string(cap));
    }
    MatrixFq x(orig.field(), orig.d(), s.batch());
    for (std::uint64_t idx = 0; idx < space; ++idx) {
        std::uint64_t v = idx;
        for (std::size_t c = 0; c < cells; ++c) {
            x.set(c / s.batch(), c % s.batch(), v % q);
            v /= q;
        }
        const auto bc = encode(s, x);
        const MatrixFq xt = x.transpose();
        for (std::size_t k = 0; k < 3; ++k) {
            const MatrixFq got = decode(s, k, bc, xt.mul(orig.user(k).side));
            if (!(got == xt.mul(orig.user(k).demand))) return false;
        }
    }
    return true;
}

}  // namespace lcbc
