#pragma once

#include <climits>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "arboru/line_element.hpp"
#include "arboru/perm_group.hpp"
#include "arboru/portrait.hpp"
#include "arboru/tree.hpp"

namespace arboru {

struct Elliptic {
    VertexAddr fixed;
    friend bool operator==(const Elliptic&, const Elliptic&) = default;
};

struct Inversion {
    EdgeAddr edge;
    friend bool operator==(const Inversion&, const Inversion&) = default;
};

struct Hyperbolic {
    int length;
    std::vector<VertexAddr> axis_segment;
    End attracting;
    End repelling;
    friend bool operator==(const Hyperbolic&, const Hyperbolic&) = default;
};

using ElementClass = std::variant<Elliptic, Inversion, Hyperbolic>;

namespace detail {

// Attracting end of a hyperbolic g with minimal displacement m attained at
// start. The forward ray start, g(start), g^2(start), ... is followed until
// it is past the支 support (depth > hull, ascending); from there the colors
// obey an autonomous recurrence
//     t[j+m] = s[j](t[j]),   s[j+1] = swap(t[j], s[j](t[j])),
// where s[j] is the true local action at the j-th ray vertex, so the first
// repeated (m colors, s) state certifies the eventual period exactly.
inline End forward_end(const Portrait& g, const VertexAddr& start, int m) {
    const int hull = g.support_hull();
    std::vector<VertexAddr> pts{start};
    VertexAddr cur = start;
    auto extend = [&](std::size_t need) {
        while (pts.size() < need) {
            VertexAddr nxt = g.apply(cur);
            auto seg = geodesic(cur, nxt);
            for (std::size_t i = 1; i < seg.size(); ++i) pts.push_back(seg[i]);
            cur = nxt;
        }
    };
    auto color_at = [&](std::size_t j) {
        extend(j + 2);
        return pts[j + 1].length() > pts[j].length() ? pts[j + 1].last()
                                                     : pts[j].last();
    };
    std::size_t j0 = 0;
    for (;; ++j0) {
        extend(j0 + 2);
        if (static_cast<int>(pts[j0].length()) > hull + 1 &&
            pts[j0 + 1].length() > pts[j0].length())
            break;
    }
    Perm s = g.local_action(pts[j0]);
    std::map<std::string, std::size_t> seen;
    std::vector<Color> colors; // colors[i] = edge color at ray index j0 + i
    for (std::size_t j = j0;; ++j) {
        std::string key;
        for (int i = 0; i < m; ++i)
            key.push_back(static_cast<char>(color_at(j + i)));
        for (int c = 1; c <= g.degree(); ++c)
            key.push_back(static_cast<char>(s(static_cast<Color>(c))));
        auto [it, fresh] = seen.emplace(key, j);
        if (!fresh) {
            std::size_t j1 = it->second;
            std::vector<int> per;
            for (std::size_t i = j1; i < j; ++i)
                per.push_back(colors[i - j0]);
            return End(pts[j1], VertexAddr::from_colors(per));
        }
        Color t = color_at(j);
        colors.push_back(t);
        s = swap_perm(g.degree(), t, s(t));
        if (j - j0 > 20000)
            throw std::runtime_error("end period not detected within budget");
    }
}

} // namespace detail

// Exact: for a finite portrait the minimal displacement is attained within
// B(x0, hull + 2), so a scan of that ball finds the type. The witness vertex
// is the first one in shortlex order.
inline ElementClass classify(const Portrait& g) {
    const int R = g.support_hull() + 2;
    int m = INT_MAX;
    VertexAddr best;
    for (const auto& v : ball(g.degree(), R)) {
        int dd = static_cast<int>(dist(v, g.apply(v)));
        if (dd < m) {
            m = dd;
            best = v;
        }
    }
    if (m == 0) return Elliptic{best};
    VertexAddr img = g.apply(best);
    if (m == 1 && g.apply(img) == best) {
        const VertexAddr& deep = img.length() > best.length() ? img : best;
        const VertexAddr& near = img.length() > best.length() ? best : img;
        return Inversion{EdgeAddr(near, deep.last())};
    }
    return Hyperbolic{m, geodesic(best, img), detail::forward_end(g, best, m),
                      detail::forward_end(inverse(g), best, m)};
}

inline ElementClass classify(const LineElement& g) {
    const int P = g.period();
    const int s = g.shift();
    std::vector<VertexAddr> axis;
    for (int j = 0; j <= s; ++j) axis.push_back(g.line_vertex(j));
    long w = static_cast<long>(g.anchor().length()) + P + 4;
    w += P - w % P; // multiple of the period, in the ascending zone
    std::vector<int> fwd(P), bwd(P);
    for (int i = 0; i < P; ++i) {
        fwd[i] = g.gamma(i);
        bwd[i] = g.gamma(-1 - i);
    }
    End plus(g.line_vertex(w), VertexAddr::from_colors(fwd));
    End minus(g.line_vertex(-w), VertexAddr::from_colors(bwd));
    return Hyperbolic{s, axis, plus, minus};
}

inline std::string print_element_class(const ElementClass& c) {
    if (const auto* e = std::get_if<Elliptic>(&c))
        return "elliptic fixed=" + print_vertex(e->fixed);
    if (const auto* i = std::get_if<Inversion>(&c))
        return "inversion edge=" + print_edge(i->edge);
    const auto& h = std::get<Hyperbolic>(c);
    return "hyperbolic len=" + std::to_string(h.length) + " axis=(" +
           print_vertex(VertexAddr(h.attracting.period())) + ") ends=+" +
           print_end(h.attracting) + " -" + print_end(h.repelling);
}

// Splits an automorphism fixing the edge e pointwise into a factor trivial
// on the inner side and a factor trivial on the outer subtree. True locals
// restrict cleanly to each side (no swap ray crosses a pointwise-fixed
// edge), so splitting the stored map is exact.
inline std::pair<Portrait, Portrait> tits_split(const Portrait& g, const EdgeAddr& e) {
    if (g.apply(e.inner()) != e.inner() || g.apply(e.outer()) != e.outer())
        throw std::invalid_argument("element does not fix the edge pointwise");
    std::map<VertexAddr, Perm> outer_part, inner_part;
    HalfTree outer_side(e, HalfTree::Side::Outer);
    for (const auto& [v, p] : g.locals())
        (half_tree_contains(outer_side, v) ? outer_part : inner_part).emplace(v, p);
    Portrait g1 = Portrait::from_raw(g.degree(), VertexAddr(), outer_part);
    Portrait g2 = Portrait::from_raw(g.degree(), g.root_image(), inner_part);
    return {g1, g2};
}

struct ContractionResult {
    bool member;
    int witness_n; // conjugate a^-n g a^n is trivial on B(x0, 6); -1 if not a member
};

// Fixing B(x0, r) pointwise is a support condition on the canonical form:
// the root is fixed and every defect sits at depth >= r.
inline bool fixes_ball_pointwise(const Portrait& g, int radius) {
    if (!g.root_image().empty()) return false;
    for (const auto& [v, p] : g.locals())
        if (static_cast<int>(v.length()) < radius) return false;
    return true;
}

// Membership in the contraction group of a: conjugates a^-n g a^n shrink to
// the identity iff g fixes pointwise some half-tree around the attracting
// end. Defects sit inside the hull and swap rays separate from the end's
// ray within one period after it, so the scan depth below is exhaustive.
inline ContractionResult contraction_membership(const Portrait& g, const Portrait& a) {
    ElementClass cls = classify(a);
    const auto* hyp = std::get_if<Hyperbolic>(&cls);
    if (!hyp) throw std::invalid_argument("conjugating element is not hyperbolic");
    const End& xi = hyp->attracting;
    const int nmax = g.support_hull() +
                     static_cast<int>(xi.preperiod().size() + 2 * xi.period().size()) +
                     6;
    bool fixed = false;
    for (int n = 0; n <= nmax && !fixed; ++n) {
        VertexAddr u = ray_vertex(xi, n + 1);
        fixed = fixes_half_tree_pointwise(
            g, HalfTree(EdgeAddr(u.parent(), u.last()), HalfTree::Side::Outer));
    }
    if (!fixed) return {false, -1};
    Portrait ainv = inverse(a);
    Portrait c = g;
    const int cap = nmax + a.support_hull() + 20;
    for (int n = 0; n <= cap; ++n) {
        if (fixes_ball_pointwise(c, 6)) return {true, n};
        c = compose(compose(ainv, c), a);
    }
    throw std::logic_error("contraction witness escaped its bound");
}

// One step of the Mautner-style factorization g = t h along the ray of xi:
// t fixes pointwise the half-tree past ray vertex j+1 (the side holding xi),
// h fixes pointwise the other side, hence all of B(x0, j).
inline std::pair<Portrait, Portrait> mautner_sequence(const Portrait& g, const End& xi,
                                                      int j) {
    if (j < 0) throw std::invalid_argument("ray index must be nonnegative");
    for (int k = 0; k <= j + 1; ++k)
        if (g.apply(ray_vertex(xi, k)) != ray_vertex(xi, k))
            throw std::invalid_argument("element moves the ray segment");
    int n0 = std::max(g.support_hull() + 2, j + 2);
    if (g.apply(ray_vertex(xi, n0)) != ray_vertex(xi, n0))
        throw std::invalid_argument("element does not fix the ray cofinally");
    VertexAddr u = ray_vertex(xi, j + 1);
    auto [toward, away] = tits_split(g, EdgeAddr(u.parent(), u.last()));
    return {away, toward};
}

struct GenerationFactor {
    Portrait factor;
    bool plus; // contracts under a (true) or under a^-1 (false)
};

// Factorization of an axis-edge fixator into one element of each
// contraction group (the two-sided generation argument).
inline std::vector<GenerationFactor> generation_witness(const Portrait& g,
                                                        const Portrait& a) {
    ElementClass cls = classify(a);
    const auto* hyp = std::get_if<Hyperbolic>(&cls);
    if (!hyp) throw std::invalid_argument("conjugating element is not hyperbolic");

    // Axis window: translate the minimal segment both ways far enough to
    // cover every edge the fixator could pin.
    Portrait ainv = inverse(a);
    const int steps =
        (2 * (g.support_hull() + a.support_hull()) + 8) / hyp->length + 2;
    std::vector<VertexAddr> axis = hyp->axis_segment;
    for (int k = 0; k < steps; ++k) {
        VertexAddr nxt = a.apply(axis.back());
        auto seg = geodesic(axis.back(), nxt);
        axis.insert(axis.end(), seg.begin() + 1, seg.end());
        VertexAddr prv = ainv.apply(axis.front());
        auto seg2 = geodesic(prv, axis.front());
        axis.insert(axis.begin(), seg2.begin(), seg2.end() - 1);
    }
    std::optional<EdgeAddr> edge;
    for (std::size_t i = 0; i + 1 < axis.size() && !edge; ++i) {
        if (g.apply(axis[i]) != axis[i] || g.apply(axis[i + 1]) != axis[i + 1])
            continue;
        const VertexAddr& deep =
            axis[i + 1].length() > axis[i].length() ? axis[i + 1] : axis[i];
        const VertexAddr& near =
            axis[i + 1].length() > axis[i].length() ? axis[i] : axis[i + 1];
        edge = EdgeAddr(near, deep.last());
    }
    if (!edge) throw std::invalid_argument("element fixes no axis edge pointwise");

    auto [outer_factor, inner_factor] = tits_split(g, *edge);
    // A ray vertex past the edge's depth plus one period lands strictly on
    // the attracting side of the edge.
    VertexAddr deep_plus = ray_vertex(
        hyp->attracting, edge->outer().length() + hyp->attracting.preperiod().size() +
                             hyp->attracting.period().size() + 4);
    bool outer_holds_plus =
        half_tree_contains(HalfTree(*edge, HalfTree::Side::Outer), deep_plus);
    // Membership in the contraction group of a means fixing a half-tree
    // around the attracting end pointwise, so the factor supported on the
    // attracting side contracts under a^-1 and vice versa.
    std::vector<GenerationFactor> out;
    if (!outer_factor.is_identity()) out.push_back({outer_factor, !outer_holds_plus});
    if (!inner_factor.is_identity()) out.push_back({inner_factor, outer_holds_plus});
    return out;
}

// A translation carrying edge e to edge e', built on the periodic line that
// extends the geodesic through both edges by reflection. The segment
// between the far endpoints has s + 1 colors (s = shift, even); doubling it
// palindromically always yields a cyclically reduced color word, and each
// line vertex needs a permutation in F carrying its back/forward color pair
// s steps down the line. Greedy: every local is the first transporter
// witness in the canonical element order. Returns nothing when some
// transporter is missing in F.
inline std::optional<LineElement> translation_mapping_edge(const EdgeAddr& e,
                                                           const EdgeAddr& ep,
                                                           const PermGroup& F) {
    if (!is_transitive(F) || !is_generated_by_point_stabilizers(F))
        throw std::invalid_argument(
            "color group must be transitive and generated by point stabilizers");
    const VertexAddr ends1[2] = {e.inner(), e.outer()};
    const VertexAddr ends2[2] = {ep.inner(), ep.outer()};
    std::size_t best = 0;
    VertexAddr w0 = ends1[0], wm = ends2[0];
    for (const VertexAddr& x : ends1)
        for (const VertexAddr& y : ends2)
            if (dist(x, y) > best) {
                best = dist(x, y);
                w0 = x;
                wm = y;
            }
    const int m = static_cast<int>(best);
    if (m < 3 || m % 2 == 0)
        throw std::invalid_argument("edges must be an odd distance apart");
    auto path = geodesic(w0, wm);
    std::vector<int> col(m);
    for (int k = 0; k < m; ++k)
        col[k] = path[k + 1].length() > path[k].length() ? path[k + 1].last()
                                                         : path[k].last();
    const int s = m - 1;
    const int p = 2 * s;
    std::vector<int> gam(p);
    for (int i = 0; i <= s; ++i) gam[i] = col[i];
    for (int j = 1; j < s; ++j) gam[s + j] = col[s - j];
    auto at = [&](int i) { return gam[((i % p) + p) % p]; };
    std::vector<Perm> perms;
    for (int i = 0; i < p; ++i) {
        auto w = transporter_exists(F, {at(i - 1), at(i)}, {at(i + s - 1), at(i + s)});
        if (!w) return std::nullopt;
        perms.push_back(*w);
    }
    return LineElement(F.degree(), path[0], gam, s, perms);
}

} // namespace arboru
