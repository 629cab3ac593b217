#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arboru/error.hpp"
#include "arboru/perm.hpp"
#include "arboru/perm_group.hpp"
#include "arboru/tree.hpp"

namespace arboru {

// ---------------------------------------------------------------------------
// Portrait: a tree automorphism given by the image of x0 plus finitely many
// "true" local permutations.
//
// Semantics. Every vertex v carries a local action tau_v in Sym(d) mapping
// edge colors at v to edge colors at g(v). Adjacent vertices are not
// independent: the edge {parent(v), v} of color b has one image, so
// tau_v(b) must equal the color by which the walk arrives at g(v) (the
// "arrival color" r_v). A vertex that is not stored acts by the cheapest
// local permutation compatible with that constraint:
//
//     swap(b_v, r_v)  =  identity            if r_v == b_v,
//                        transposition (b r)  otherwise.
//
// The stored map holds exactly the vertices whose true local action differs
// from that default ("defects"), with its full permutation, so equality of
// automorphisms is equality of fields. With this completion every value of
// the fields denotes an automorphism, arbitrary raw maps can be
// canonicalized (from_raw), and the finite-defect class is closed under
// composition and inversion.
// ---------------------------------------------------------------------------

inline Perm swap_perm(int d, Color b, Color r) {
    return b == r ? Perm::identity(d) : Perm::transposition(d, b, r);
}

class Portrait {
public:
    static Portrait identity(int degree) {
        return Portrait(degree, VertexAddr(), {});
    }

    static Portrait left_translation(int degree, const VertexAddr& w) {
        return Portrait(degree, w, {});
    }

    // Interprets raw data (root image + arbitrary local perms, absent = id)
    // and produces the canonical form. Raw locals are read along the walk
    // with a collision patch: if the raw output color equals the arrival
    // color (which would fold the image), the backward output is taken
    // instead. The patched locals are total and bijective, so any raw value
    // denotes an automorphism.
    static Portrait from_raw(int degree, const VertexAddr& root,
                             const std::map<VertexAddr, Perm>& raw) {
        if (degree < 2 || degree > kMaxDegree)
            throw std::invalid_argument("portrait degree out of range");
        for (const auto& [v, p] : raw) {
            if (p.degree() != degree)
                throw std::invalid_argument("local perm degree mismatch");
            for (std::size_t i = 0; i < v.length(); ++i)
                if (v.at(i) > degree)
                    throw std::invalid_argument("support vertex letter exceeds degree");
        }
        for (std::size_t i = 0; i < root.length(); ++i)
            if (root.at(i) > degree)
                throw std::invalid_argument("root letter exceeds degree");

        std::set<VertexAddr> region;
        for (const auto& [v, p] : raw) {
            VertexAddr w = v;
            for (;;) {
                region.insert(w);
                if (w.empty()) break;
                w = w.parent();
            }
        }
        region.insert(VertexAddr());

        // Top-down (shortlex puts parents first): compute each vertex's true
        // local from its raw perm and arrival color, then keep defects only.
        std::map<VertexAddr, Perm> canon;
        std::map<VertexAddr, Color> arrival;    // 0 at the root
        arrival[VertexAddr()] = 0;
        for (const VertexAddr& p : region) {
            Color r = arrival.at(p);
            auto it = raw.find(p);
            Perm sigma = it != raw.end() ? it->second : Perm::identity(degree);
            Perm tau(degree);
            if (p.empty()) {
                tau = sigma;
            } else {
                Color b = p.last();
                std::vector<int> im(degree);
                for (int c = 1; c <= degree; ++c) {
                    if (c == b) { im[c - 1] = r; continue; }
                    Color x = sigma(static_cast<Color>(c));
                    if (x == r) x = sigma(b);
                    im[c - 1] = x;
                }
                tau = Perm(degree, im);
            }
            for (int c = 1; c <= degree; ++c) {
                if (!p.empty() && c == p.last()) continue;
                VertexAddr child = reduce_append(p, static_cast<Color>(c));
                if (region.count(child)) arrival[child] = tau(static_cast<Color>(c));
            }
            Perm dflt = p.empty() ? Perm::identity(degree) : swap_perm(degree, p.last(), r);
            if (tau != dflt) canon[p] = tau;
        }
        return Portrait(degree, root, std::move(canon));
    }

    int degree() const { return d_; }
    const VertexAddr& root_image() const { return root_; }
    const std::map<VertexAddr, Perm>& locals() const { return locals_; }
    bool is_identity() const { return root_.empty() && locals_.empty(); }

    friend bool operator==(const Portrait&, const Portrait&) = default;

    // Image of x0..v walked edge by edge; stored vertices use their stored
    // permutation (whose backward value matches the arrival color by
    // canonicality), others the swap default.
    VertexAddr apply(const VertexAddr& v) const {
        VertexAddr u = root_;
        Color r = 0;
        VertexAddr p;
        for (std::size_t k = 0; k < v.length(); ++k) {
            Color c = v.at(k);
            Color out = local_at(p, r)(c);
            u = reduce_append(u, out);
            r = out;
            p = reduce_append(p, c);   // prefix of a reduced word: plain append
        }
        return u;
    }

    // Solves apply(v) = u exactly: the image path from the root image to u
    // is the geodesic, so invert it color by color.
    VertexAddr apply_inverse(const VertexAddr& u) const {
        auto path = geodesic(root_, u);
        VertexAddr p;
        Color r = 0;
        for (std::size_t k = 1; k < path.size(); ++k) {
            Color out = path[k].length() > path[k - 1].length() ? path[k].last()
                                                                : path[k - 1].last();
            Color c = local_at(p, r).inverse()(out);
            p = reduce_append(p, c);
            r = out;
        }
        return p;
    }

    // Arrival color at v (0 for x0).
    Color arrival(const VertexAddr& v) const {
        Color r = 0;
        VertexAddr p;
        for (std::size_t k = 0; k < v.length(); ++k) {
            r = local_at(p, r)(v.at(k));
            p = reduce_append(p, v.at(k));
        }
        return r;
    }

    // Full true local action at any vertex.
    Perm local_action(const VertexAddr& v) const {
        return local_at(v, arrival(v));
    }

    // Smallest R with all defects and both x0, g(x0) inside B(x0, R).
    int support_hull() const {
        std::size_t r = root_.length();
        for (const auto& [v, p] : locals_) r = std::max(r, v.length());
        return static_cast<int>(r);
    }

private:
    Portrait(int degree, VertexAddr root, std::map<VertexAddr, Perm> locals)
        : d_(degree), root_(std::move(root)), locals_(std::move(locals)) {}

    Perm local_at(const VertexAddr& p, Color r) const {
        auto it = locals_.find(p);
        if (it != locals_.end()) return it->second;
        if (p.empty()) return Perm::identity(d_);
        return swap_perm(d_, p.last(), r);
    }

    int d_;
    VertexAddr root_;
    std::map<VertexAddr, Perm> locals_;
};

inline VertexAddr apply(const Portrait& g, const VertexAddr& v) { return g.apply(v); }

// ---------------------------------------------------------------------------
// Support geometry shared by composition, inversion and membership.
// ---------------------------------------------------------------------------

inline std::set<VertexAddr> prefix_closure(const std::set<VertexAddr>& s) {
    std::set<VertexAddr> out;
    for (const auto& v : s) {
        VertexAddr w = v;
        for (;;) {
            out.insert(w);
            if (w.empty()) break;
            w = w.parent();
        }
    }
    out.insert(VertexAddr());
    return out;
}

inline std::set<VertexAddr> support_closure(const Portrait& g) {
    std::set<VertexAddr> s;
    for (const auto& [v, p] : g.locals()) s.insert(v);
    return prefix_closure(s);
}

// A maximal thin ray of swap-acting vertices leaving the stored region.
// Vertices: seed, seed.c1, seed.c1.c0, ... (colors alternate), all acting
// by the transposition (c0 c1).
struct SwapRay {
    VertexAddr seed;
    Color c0;   // backward color at the seed
    Color c1;   // arrival color at the seed
};

inline std::vector<SwapRay> swap_rays(const Portrait& g) {
    std::vector<SwapRay> rays;
    auto region = support_closure(g);
    for (const auto& p : region) {
        Perm tau = g.local_action(p);
        for (int c = 1; c <= g.degree(); ++c) {
            if (!p.empty() && c == p.last()) continue;
            VertexAddr child = reduce_append(p, static_cast<Color>(c));
            if (region.count(child)) continue;
            Color r = tau(static_cast<Color>(c));
            if (r != c) rays.push_back({child, static_cast<Color>(c), r});
        }
    }
    return rays;
}

inline std::vector<VertexAddr> ray_vertices(const SwapRay& ray, std::size_t count) {
    std::vector<VertexAddr> out;
    VertexAddr v = ray.seed;
    bool toggle = true;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(v);
        v = reduce_append(v, toggle ? ray.c1 : ray.c0);
        toggle = !toggle;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Group operations. Defects of g.f live at stored vertices of f, preimages
// of stored vertices of g, preimages of the descending stretch of the image
// path near f's root, and where an image of an f-swap-ray crosses a g-swap-
// ray of different type (such crossings are at most one edge long). All
// candidates are evaluated exactly; non-defects prune away.
// ---------------------------------------------------------------------------

inline Portrait compose(const Portrait& g, const Portrait& f) {
    if (g.degree() != f.degree())
        throw std::invalid_argument("degree mismatch in composition");
    const int d = f.degree();

    std::set<VertexAddr> cand;
    for (const auto& v : support_closure(f)) cand.insert(v);
    for (const auto& v : support_closure(g)) cand.insert(f.apply_inverse(v));
    for (std::size_t k = 0; k <= f.root_image().length(); ++k)
        cand.insert(f.apply_inverse(f.root_image().prefix(k)));

    auto grays = swap_rays(g);
    auto frays = swap_rays(f);
    std::size_t gdepth = 0;
    std::set<VertexAddr> gray_verts;
    for (const auto& ray : grays) {
        std::size_t len = ray.seed.length() + g.root_image().length() +
                          f.root_image().length() + 8;
        for (const auto& v : ray_vertices(ray, len)) {
            gray_verts.insert(v);
            gdepth = std::max(gdepth, v.length());
        }
    }
    for (const auto& ray : frays) {
        std::size_t len = gdepth + ray.seed.length() + f.root_image().length() + 8;
        for (const auto& v : ray_vertices(ray, len)) {
            VertexAddr img = f.apply(v);
            if (gray_verts.count(img)) cand.insert(v);
            // The image path can still descend by at most |root(f)| steps,
            // so beyond this depth it stays above every g-ray vertex.
            if (img.length() > gdepth + f.root_image().length()) break;
        }
    }
    cand = prefix_closure(cand);

    std::map<VertexAddr, Perm> locals;
    for (const auto& p : cand) {
        Perm tau = g.local_action(f.apply(p)) * f.local_action(p);
        Perm dflt = p.empty() ? Perm::identity(d)
                              : swap_perm(d, p.last(), tau(p.last()));
        if (tau != dflt) locals[p] = tau;
    }
    return Portrait::from_raw(d, g.apply(f.root_image()), locals);
}

inline Portrait inverse(const Portrait& g) {
    const int d = g.degree();
    std::set<VertexAddr> cand;
    for (const auto& p : support_closure(g)) cand.insert(g.apply(p));
    for (const auto& ray : swap_rays(g)) {
        std::size_t len = ray.seed.length() + g.root_image().length() + 8;
        for (const auto& v : ray_vertices(ray, len)) cand.insert(g.apply(v));
    }
    VertexAddr root = g.apply_inverse(VertexAddr());
    for (std::size_t k = 0; k <= root.length(); ++k) cand.insert(root.prefix(k));
    for (std::size_t k = 0; k <= g.root_image().length(); ++k)
        cand.insert(g.root_image().prefix(k));
    cand = prefix_closure(cand);

    std::map<VertexAddr, Perm> locals;
    for (const auto& y : cand) {
        Perm tau = g.local_action(g.apply_inverse(y)).inverse();
        Perm dflt = y.empty() ? Perm::identity(d)
                              : swap_perm(d, y.last(), tau(y.last()));
        if (tau != dflt) locals[y] = tau;
    }
    return Portrait::from_raw(d, root, locals);
}

// ---------------------------------------------------------------------------
// Membership. g lies in U(F) iff every true local action is in F; stored
// vertices and their closure are checked directly, and beyond them the only
// non-identity locals are the swap rays' transpositions.
// ---------------------------------------------------------------------------

inline bool is_in_UF(const Portrait& g, const PermGroup& F) {
    if (g.degree() != F.degree())
        throw std::invalid_argument("degree mismatch in membership test");
    for (const auto& p : support_closure(g))
        if (!F.contains(g.local_action(p))) return false;
    for (const auto& ray : swap_rays(g))
        if (!F.contains(Perm::transposition(g.degree(), ray.c0, ray.c1))) return false;
    return true;
}

// True iff F satisfies the hypotheses under which U(F)+ coincides with the
// type-preserving part of U(F) (transitive, generated by point stabilizers).
inline bool uf_plus_equality_licensed(const PermGroup& F) {
    return is_transitive(F) && is_generated_by_point_stabilizers(F);
}

// Type-preserving membership: in U(F) with even displacement of x0. When
// `licensed` is supplied it reports whether the identification of this set
// with the subgroup generated by edge stabilizers is justified for F.
inline bool is_in_UF_plus(const Portrait& g, const PermGroup& F,
                          bool* licensed = nullptr) {
    if (licensed) *licensed = uf_plus_equality_licensed(F);
    return is_in_UF(g, F) && g.root_image().length() % 2 == 0;
}

// ---------------------------------------------------------------------------
// Pointwise half-tree fixation, exact: both endpoints fixed, no defect on
// h's side, and x0 itself fixed whenever x0 lies in h.
// ---------------------------------------------------------------------------

inline bool fixes_half_tree_pointwise(const Portrait& g, const HalfTree& h) {
    if (g.apply(h.boundary()) != h.boundary()) return false;
    if (g.apply(h.across()) != h.across()) return false;
    if (half_tree_contains(h, VertexAddr()) && !g.root_image().empty()) return false;
    for (const auto& [v, p] : g.locals())
        if (half_tree_contains(h, v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Random members of U(F).
//
// Sampling must respect two facts: each vertex's local has its backward
// value pinned to the arrival color, and below the stored region every
// remaining obligation (b, r) must be closable (r == b, or transposition
// (b r) in F so a swap ray carries it). closable(k) = solvable storing at
// most k more levels. For F without the needed transpositions (e.g. cyclic
// F) the only closable choice can be the identity; the flag reports that.
// ---------------------------------------------------------------------------

struct SampledPortrait {
    Portrait value;
    bool forced_trivial;
};

namespace detail {

class Closable {
public:
    Closable(const PermGroup& F, int depth) : F_(&F), d_(F.degree()) {
        table_.resize(depth + 1);
        for (int b = 1; b <= d_; ++b)
            for (int r = 1; r <= d_; ++r)
                table_[0][b][r] =
                    b == r || F.contains(Perm::transposition(d_, b, r));
        for (int k = 1; k <= depth; ++k) {
            for (int b = 1; b <= d_; ++b)
                for (int r = 1; r <= d_; ++r) {
                    bool ok = table_[0][b][r];
                    for (const Perm& pi : F.elements()) {
                        if (ok) break;
                        if (pi(static_cast<Color>(b)) != r) continue;
                        bool all = true;
                        for (int c = 1; c <= d_ && all; ++c)
                            if (c != b && !table_[k - 1][c][pi(static_cast<Color>(c))])
                                all = false;
                        ok = all;
                    }
                    table_[k][b][r] = ok;
                }
        }
    }

    bool tail_ok(int b, int r) const { return table_[0][b][r]; }
    bool ok(int b, int r, int k) const { return table_[std::max(k, 0)][b][r]; }

    // Candidates for an obligation (b -> r) with k further levels available;
    // b == 0 means the root (no pinned backward value). `pin` optionally
    // forces one more image value.
    std::vector<Perm> candidates(int b, int r, int k,
                                 std::optional<std::pair<int, int>> pin) const {
        std::vector<Perm> out;
        for (const Perm& pi : F_->elements()) {
            if (b != 0 && pi(static_cast<Color>(b)) != r) continue;
            if (pin && pi(static_cast<Color>(pin->first)) != pin->second) continue;
            bool all = true;
            for (int c = 1; c <= d_ && all; ++c)
                if (c != b && !ok(c, pi(static_cast<Color>(c)), k - 1)) all = false;
            if (all) out.push_back(pi);
        }
        return out;
    }

private:
    const PermGroup* F_;
    int d_;
    std::vector<std::array<std::array<bool, kMaxDegree + 1>, kMaxDegree + 1>> table_;
};

// Fills raw[] below one obligation. `pins` force one extra image value at
// path vertices; recursion never enters `blocked` (the fixed half-tree,
// whose obligation is closed by construction).
inline void sample_below(const PermGroup& F, const Closable& cl, std::mt19937_64& rng,
                         const std::map<VertexAddr, std::pair<int, int>>& pins,
                         const VertexAddr* blocked, const VertexAddr& v, int b, int r,
                         int k, std::map<VertexAddr, Perm>& raw,
                         bool& nontrivial_possible) {
    if (k <= 0) return;                       // tail handled by a swap ray
    std::optional<std::pair<int, int>> pin;
    if (auto it = pins.find(v); it != pins.end()) pin = it->second;
    auto cands = cl.candidates(b, r, k, pin);
    if (cands.empty()) return;                // must close here; tail_ok holds
    if (cands.size() > 1 || !cands[0].is_identity()) nontrivial_possible = true;
    std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
    Perm pi = cands[pick(rng)];
    if (!pi.is_identity()) raw[v] = pi;
    for (int c = 1; c <= F.degree(); ++c) {
        if (c == b) continue;
        VertexAddr child = reduce_append(v, static_cast<Color>(c));
        if (blocked && child == *blocked) continue;
        sample_below(F, cl, rng, pins, blocked, child, c, pi(static_cast<Color>(c)),
                     k - 1, raw, nontrivial_possible);
    }
}

} // namespace detail

// Random element of U(F) fixing x0, with locals stored on (a closable subset
// of) B(x0, depth-1).
inline SampledPortrait random_vertex_stabilizer_element(const PermGroup& F, int depth,
                                                        std::uint64_t seed) {
    if (depth < 1) throw std::invalid_argument("sampler depth must be >= 1");
    std::mt19937_64 rng(seed);
    detail::Closable cl(F, depth);
    std::map<VertexAddr, Perm> raw;
    bool nontrivial = false;
    detail::sample_below(F, cl, rng, {}, nullptr, VertexAddr(), 0, 0, depth, raw,
                         nontrivial);
    return {Portrait::from_raw(F.degree(), VertexAddr(), raw), !nontrivial};
}

// Random element of U(F) fixing the half-tree h pointwise (and x0).
//
// If x0 is outside h, the free side contains x0: sampling runs from the
// root with the geodesic toward h pinned color-by-color (so the endpoint
// facing h gets a local in the point stabilizer of the edge color) and
// never enters h. If x0 is inside h, everything except the subtree past
// the far endpoint is forced rigid, and sampling starts at that endpoint.
inline SampledPortrait random_half_tree_fixator(const PermGroup& F, const HalfTree& h,
                                                int depth, std::uint64_t seed) {
    if (depth < 1) throw std::invalid_argument("sampler depth must be >= 1");
    std::mt19937_64 rng(seed);
    detail::Closable cl(F, depth);
    std::map<VertexAddr, Perm> raw;
    bool nontrivial = false;

    if (half_tree_contains(h, VertexAddr())) {
        VertexAddr alpha = h.across();          // deeper endpoint, outside h
        Color chi = alpha.last();
        detail::sample_below(F, cl, rng, {}, nullptr, alpha, chi, chi, depth, raw,
                             nontrivial);
    } else {
        VertexAddr beta = h.boundary();         // deeper endpoint, h = its subtree
        std::map<VertexAddr, std::pair<int, int>> pins;
        auto path = geodesic(VertexAddr(), beta);
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            Color c = path[k + 1].last();       // prefix chain: colors append
            pins[path[k]] = {c, c};
        }
        detail::sample_below(F, cl, rng, pins, &beta, VertexAddr(), 0, 0, depth, raw,
                             nontrivial);
    }
    return {Portrait::from_raw(F.degree(), VertexAddr(), raw), !nontrivial};
}

// Random finite portrait with no membership constraint (for group-law and
// geometry tests): root drawn from a ball, locals from Sym(d).
inline Portrait random_portrait(int degree, int depth, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto b = ball(degree, depth);
    std::uniform_int_distribution<std::size_t> pick_root(0, b.size() - 1);
    VertexAddr root = b[pick_root(rng)];
    std::map<VertexAddr, Perm> raw;
    std::uniform_int_distribution<int> coin(0, 1);
    auto region = ball(degree, std::max(0, depth - 1));
    for (const auto& v : region) {
        if (coin(rng) == 0) continue;
        std::vector<int> im(degree);
        std::iota(im.begin(), im.end(), 1);
        std::shuffle(im.begin(), im.end(), rng);
        raw.emplace(v, Perm(degree, im));
    }
    return Portrait::from_raw(degree, root, raw);
}

// ---------------------------------------------------------------------------
// Text form:
//   root: 12
//   -: (1 2 3)
//   2: (1 3)
// Lines starting with '#' and blank lines are skipped; vertices before the
// colon use the word literal syntax ("-" for x0).
// ---------------------------------------------------------------------------

inline std::string print_portrait(const Portrait& g) {
    std::string out = "root: " + print_vertex(g.root_image()) + "\n";
    for (const auto& [v, p] : g.locals())
        out += print_vertex(v) + ": " + p.cycle_string() + "\n";
    return out;
}

inline Portrait parse_portrait(const std::string& text, int degree) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_root = false;
    VertexAddr root;
    std::map<VertexAddr, Perm> raw;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos || line[i] == '#') continue;
        std::size_t colon = line.find(':', i);
        if (colon == std::string::npos)
            throw parse_error("expected '<word>: <value>'", line_no, static_cast<int>(i) + 1);
        std::string key = line.substr(i, colon - i);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string rest = line.substr(colon + 1);
        if (!rest.empty() && rest.back() == '\r') rest.pop_back();
        std::size_t j = rest.find_first_not_of(" \t");
        rest = j == std::string::npos ? std::string() : rest.substr(j);
        if (key == "root") {
            if (have_root) throw parse_error("duplicate root line", line_no, 1);
            root = parse_vertex(rest, degree, line_no, static_cast<int>(colon) + 1);
            have_root = true;
        } else {
            VertexAddr v = parse_vertex(key, degree, line_no, static_cast<int>(i));
            if (raw.count(v)) throw parse_error("duplicate vertex line", line_no, 1);
            raw.emplace(v, parse_perm(degree, rest, line_no));
        }
    }
    return Portrait::from_raw(degree, root, raw);
}

} // namespace arboru
