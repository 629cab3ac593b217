#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arboru/perm.hpp"

namespace arboru {

// Finite F <= Sym({1..d}), fully enumerated. Degrees stay tiny (the theory
// is exercised at d in {3,4,5,6}), so no stabilizer-chain machinery: every
// query walks the sorted element list, and "first witness" always means
// first in lexicographic image order.
class PermGroup {
public:
    static PermGroup from_generators(int degree, std::vector<Perm> gens) {
        if (degree < 2 || degree > kMaxDegree)
            throw std::invalid_argument("group degree out of range [2, 12]");
        for (const Perm& g : gens)
            if (g.degree() != degree)
                throw std::invalid_argument("generator degree mismatch");
        // Finite group: closure under products alone suffices (inverses are
        // positive powers).
        std::set<Perm> closed;
        std::vector<Perm> queue{Perm::identity(degree)};
        closed.insert(queue[0]);
        while (!queue.empty()) {
            Perm e = queue.back();
            queue.pop_back();
            for (const Perm& g : gens) {
                Perm f = e * g;
                if (closed.insert(f).second) queue.push_back(f);
            }
        }
        PermGroup G;
        G.d_ = degree;
        G.elems_.assign(closed.begin(), closed.end());
        G.gens_ = std::move(gens);
        return G;
    }

    // Accepts a set that is already a subgroup; rejects anything else.
    static PermGroup from_elements(int degree, std::vector<Perm> elems) {
        PermGroup G = from_generators(degree, elems);
        if (G.order() != std::set<Perm>(elems.begin(), elems.end()).size())
            throw std::invalid_argument("element set is not closed");
        return G;
    }

    int degree() const { return d_; }
    std::size_t order() const { return elems_.size(); }
    const std::vector<Perm>& elements() const { return elems_; }
    const std::vector<Perm>& generators() const { return gens_; }

    bool contains(const Perm& p) const {
        return std::binary_search(elems_.begin(), elems_.end(), p);
    }

    // ---- standard small groups ----

    static PermGroup symmetric(int d) {
        std::vector<Perm> gens;
        if (d >= 2) gens.push_back(Perm::transposition(d, 1, 2));
        if (d >= 3) gens.push_back(full_cycle(d));
        return from_generators(d, gens);
    }

    static PermGroup alternating(int d) {
        std::vector<Perm> gens;
        if (d >= 3) {
            std::vector<int> im(d);
            std::iota(im.begin(), im.end(), 1);
            im[0] = 2; im[1] = 3; im[2] = 1;
            gens.emplace_back(d, im);            // (1 2 3)
            if (d > 3) {
                std::vector<int> im2(d);
                if (d % 2 == 1) {                // (1 2 ... d)
                    for (int i = 1; i <= d; ++i) im2[i - 1] = i % d + 1;
                } else {                         // (2 3 ... d)
                    im2[0] = 1;
                    for (int i = 2; i <= d; ++i) im2[i - 1] = i == d ? 2 : i + 1;
                }
                gens.emplace_back(d, im2);
            }
        }
        return from_generators(d, gens);
    }

    static PermGroup cyclic(int d) {
        return from_generators(d, {full_cycle(d)});
    }

    // Dihedral of order 2d on d points: rotation + the reflection fixing 1.
    static PermGroup dihedral(int d) {
        std::vector<int> refl(d);
        refl[0] = 1;
        for (int i = 2; i <= d; ++i) refl[i - 1] = d + 2 - i;
        return from_generators(d, {Perm(d, refl), full_cycle(d)});
    }

private:
    static Perm full_cycle(int d) {
        std::vector<int> im(d);
        for (int i = 1; i <= d; ++i) im[i - 1] = i % d + 1;
        return Perm(d, im);
    }

    int d_ = 0;
    std::vector<Perm> elems_;
    std::vector<Perm> gens_;
};

inline PermGroup group_from_generators(int degree, const std::vector<Perm>& gens) {
    return PermGroup::from_generators(degree, gens);
}

// Partition of `domain` into G-orbit intersections. Each cell is sorted and
// cells are ordered by smallest member, so the result is canonical.
inline std::vector<std::vector<int>> orbits(const PermGroup& G, const std::vector<int>& domain) {
    std::vector<std::vector<int>> out;
    std::vector<bool> in_domain(G.degree() + 1, false), used(G.degree() + 1, false);
    for (int c : domain) {
        if (c < 1 || c > G.degree())
            throw std::invalid_argument("domain point out of range");
        in_domain[c] = true;
    }
    std::vector<int> sortedized(domain);
    std::sort(sortedized.begin(), sortedized.end());
    for (int c : sortedized) {
        if (used[c]) continue;
        std::vector<int> cell;
        for (const Perm& g : G.elements()) {
            int x = g.apply(static_cast<Color>(c));
            if (in_domain[x] && !used[x]) {
                used[x] = true;
                cell.push_back(x);
            }
        }
        std::sort(cell.begin(), cell.end());
        out.push_back(std::move(cell));
    }
    return out;
}

inline PermGroup point_stabilizer(const PermGroup& G, int c) {
    if (c < 1 || c > G.degree())
        throw std::invalid_argument("stabilized point out of range");
    std::vector<Perm> fixed;
    for (const Perm& g : G.elements())
        if (g.fixes(c)) fixed.push_back(g);
    return PermGroup::from_elements(G.degree(), std::move(fixed));
}

inline bool is_transitive(const PermGroup& G) {
    std::vector<int> all(G.degree());
    std::iota(all.begin(), all.end(), 1);
    return orbits(G, all).size() == 1;
}

inline bool is_2transitive(const PermGroup& G) {
    if (!is_transitive(G)) return false;
    PermGroup S = point_stabilizer(G, 1);
    std::vector<int> rest(G.degree() - 1);
    std::iota(rest.begin(), rest.end(), 2);
    return rest.empty() || orbits(S, rest).size() == 1;
}

// Partition refinement: the smallest G-congruence identifying 1 with x.
// G primitive iff every such congruence is the full square.
inline bool is_primitive(const PermGroup& G) {
    if (!is_transitive(G)) return false;
    const int d = G.degree();
    for (int x = 2; x <= d; ++x) {
        std::vector<int> parent(d + 1);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        std::vector<std::pair<int, int>> work;
        auto merge = [&](int a, int b) {
            a = find(a); b = find(b);
            if (a == b) return;
            parent[b] = a;
            work.emplace_back(a, b);
        };
        merge(1, x);
        while (!work.empty()) {
            auto [a, b] = work.back();
            work.pop_back();
            for (const Perm& g : G.generators()) {
                merge(g.apply(a), g.apply(b));
            }
        }
        int classes = 0;
        for (int i = 1; i <= d; ++i)
            if (find(i) == i) ++classes;
        if (classes > 1) return false;   // proper block system through {1, x}
    }
    return true;
}

inline bool is_generated_by_point_stabilizers(const PermGroup& G) {
    std::vector<Perm> gens;
    for (int c = 1; c <= G.degree(); ++c)
        for (const Perm& g : G.elements())
            if (g.fixes(c)) gens.push_back(g);
    return PermGroup::from_generators(G.degree(), gens).order() == G.order();
}

inline bool is_cyclic_of_prime_order(const PermGroup& G) {
    std::size_t n = G.order();
    if (n < 2) return false;
    for (std::size_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// First element (in the canonical lexicographic order) mapping a to c and
// b to e, if any.
inline std::optional<Perm> transporter_exists(const PermGroup& G,
                                              std::pair<int, int> from,
                                              std::pair<int, int> to) {
    auto [a, b] = from;
    auto [c, e] = to;
    const int d = G.degree();
    if (a == b || c == e || a < 1 || a > d || b < 1 || b > d || c < 1 || c > d ||
        e < 1 || e > d)
        throw std::invalid_argument("transporter pairs must be distinct in-range colors");
    for (const Perm& g : G.elements())
        if (g.apply(a) == c && g.apply(b) == e) return g;
    return std::nullopt;
}

} // namespace arboru
