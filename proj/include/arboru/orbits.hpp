#pragma once

#include <map>
#include <string>
#include <vector>

#include "arboru/perm_group.hpp"
#include "arboru/tree.hpp"

namespace arboru {

// Orbits of the vertex stabilizer on the sphere of radius n. A stabilizer
// element carries the word c1..cn to d1..dn exactly when d1 is an F-image
// of c1 and every consecutive ordered pair (ck, ck+1) -> (dk, dk+1) has a
// transporter in F; the local action at the k-th vertex must realize that
// pair and nothing else.
struct SphereOrbits {
    int n;
    std::vector<std::vector<VertexAddr>> cells; // lex-sorted, first entry is the rep
};

namespace detail {

struct PairTable {
    int d;
    // allowed[b][c][r][x]: some member of F maps b to r and c to x
    std::vector<std::vector<std::vector<std::vector<bool>>>> allowed;

    explicit PairTable(const PermGroup& F) : d(F.degree()) {
        allowed.assign(d + 1, std::vector<std::vector<std::vector<bool>>>(
                                  d + 1, std::vector<std::vector<bool>>(
                                             d + 1, std::vector<bool>(d + 1, false))));
        for (const Perm& g : F.elements())
            for (int b = 1; b <= d; ++b)
                for (int c = 1; c <= d; ++c)
                    if (b != c)
                        allowed[b][c][g.apply(b)][g.apply(c)] = true;
    }
};

// Lex-least image word. Greedy is exact: any image prefix realized by some
// group element extends by that same element, so no choice dead-ends.
inline VertexAddr orbit_rep(const PermGroup& F, const PairTable& tab,
                            const VertexAddr& w) {
    const std::size_t n = w.length();
    std::vector<int> img(n);
    if (n == 1) {
        int best = tab.d + 1;
        for (const Perm& g : F.elements()) best = std::min(best, g.apply(w.at(0)));
        img[0] = best;
    } else {
        int best = tab.d + 1;
        for (int r = 1; r <= tab.d; ++r)
            for (int x = 1; x <= tab.d && r < best; ++x)
                if (tab.allowed[w.at(0)][w.at(1)][r][x]) best = r;
        img[0] = best;
    }
    for (std::size_t k = 1; k < n; ++k) {
        int best = 0;
        for (int x = 1; x <= tab.d && best == 0; ++x)
            if (tab.allowed[w.at(k - 1)][w.at(k)][img[k - 1]][x]) best = x;
        img[k] = best;
    }
    return VertexAddr::from_colors(img);
}

} // namespace detail

inline SphereOrbits stabilizer_orbits_on_sphere(const PermGroup& F, int n) {
    if (n < 1) throw std::invalid_argument("sphere radius must be positive");
    detail::PairTable tab(F);
    std::map<VertexAddr, std::vector<VertexAddr>> by_rep;
    for (const auto& w : sphere(F.degree(), n))
        by_rep[detail::orbit_rep(F, tab, w)].push_back(w);
    SphereOrbits out{n, {}};
    out.cells.reserve(by_rep.size());
    for (auto& [rep, cell] : by_rep) out.cells.push_back(std::move(cell));
    return out;
}

struct GrowthTable {
    int depth;
    std::vector<std::size_t> counts;       // orbit count per radius, 1-based
    std::vector<std::size_t> sphere_sizes; // d (d-1)^(n-1)
    bool bounded;                          // the count stops growing by depth N
};

inline GrowthTable boundary_orbit_growth(const PermGroup& F, int N) {
    if (N < 2) throw std::invalid_argument("growth table needs depth at least 2");
    GrowthTable t{N, {}, {}, false};
    std::size_t sz = F.degree();
    for (int n = 1; n <= N; ++n) {
        t.counts.push_back(stabilizer_orbits_on_sphere(F, n).cells.size());
        t.sphere_sizes.push_back(sz);
        sz *= F.degree() - 1;
    }
    t.bounded = t.counts[N - 1] == t.counts[N - 2];
    return t;
}

inline std::string growth_tsv(const GrowthTable& t) {
    std::string out;
    for (int n = 1; n <= t.depth; ++n)
        out += std::to_string(n) + "\t" + std::to_string(t.counts[n - 1]) + "\t" +
               std::to_string(t.sphere_sizes[n - 1]) + "\n";
    return out;
}

} // namespace arboru
