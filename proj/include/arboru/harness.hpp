#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "arboru/dynamics.hpp"
#include "arboru/error.hpp"
#include "arboru/line_element.hpp"
#include "arboru/orbits.hpp"
#include "arboru/perm_group.hpp"
#include "arboru/portrait.hpp"
#include "arboru/tree.hpp"

// Desk-scale certificate checks. Every verdict is backed by finite data:
// positive answers come with the constructed element, negative answers with
// the transporter or stabilizer obstruction that blocks the construction.

namespace arboru {

// Obstruction blocking hyperbolics in an end stabilizer: a color a whose
// point stabilizer cannot carry b to c. A translation of length 2N fixing
// the end over the ray ...(ab)^N (ac) (ab)^N... would need exactly the
// missing transporter at the midpoint of the pattern block, so no such
// translation exists in U(F).
struct HypEndsCert {
    int a;
    int b;
    int c;
    int n;
    VertexAddr pattern;

    friend bool operator==(const HypEndsCert&, const HypEndsCert&) = default;
};

inline std::optional<HypEndsCert> check_hyp_ends_obstruction(const PermGroup& F) {
    if (!is_transitive(F))
        throw std::invalid_argument("end stabilizer check needs a transitive group");
    const int d = F.degree();
    for (int a = 1; a <= d; ++a)
        for (int b = 1; b <= d; ++b) {
            if (b == a) continue;
            for (int c = 1; c <= d; ++c) {
                if (c == a || c == b) continue;
                if (transporter_exists(F, {a, b}, {a, c})) continue;
                const int N = 2;
                std::vector<int> w;
                for (int k = 0; k < N; ++k) {
                    w.push_back(a);
                    w.push_back(b);
                }
                w.push_back(a);
                w.push_back(c);
                for (int k = 0; k < N; ++k) {
                    w.push_back(a);
                    w.push_back(b);
                }
                return HypEndsCert{a, b, c, N, VertexAddr::from_colors(w)};
            }
        }
    return std::nullopt;
}

// Length-2 translation along the periodic line with the given colors, if F
// admits one. The local at axis vertex i must carry the ordered color pair
// (gamma(i-1), gamma(i)) to (gamma(i+1), gamma(i+2)); each slot takes the
// first transporter in canonical element order.
inline std::optional<LineElement> length2_translation_along(
    const std::vector<int>& period_colors, const PermGroup& F) {
    const int P = static_cast<int>(period_colors.size());
    if (P < 2 || P % 2 != 0)
        throw std::invalid_argument("period must have even length at least 2");
    auto at = [&](int i) { return period_colors[static_cast<std::size_t>(((i % P) + P) % P)]; };
    for (int i = 0; i < P; ++i) {
        if (at(i) < 1 || at(i) > F.degree())
            throw std::invalid_argument("period color out of range");
        if (at(i) == at(i + 1))
            throw std::invalid_argument("period colors must be cyclically reduced");
    }
    std::vector<Perm> perms;
    for (int i = 0; i < P; ++i) {
        auto pi = transporter_exists(F, {at(i - 1), at(i)}, {at(i + 1), at(i + 2)});
        if (!pi) return std::nullopt;
        perms.push_back(*pi);
    }
    return LineElement(F.degree(), VertexAddr(), period_colors, 2, std::move(perms));
}

// Verdict on halving the standard length-4 translation h along the
// (1,2,1,3) line. Positive: a length-2 hyperbolic b with b^2 = h on the
// axis. Negative: the lexicographically least ordered-pair transporter
// constraint F cannot satisfy, as (from, to) color pairs.
struct SecondTransReport {
    bool positive;
    std::optional<LineElement> halver;
    std::optional<std::array<int, 4>> missing;  // pi(m[0]) = m[2] and pi(m[1]) = m[3]
};

inline SecondTransReport check_second_trans(const PermGroup& F) {
    if (F.degree() < 3 || !is_transitive(F) || !is_generated_by_point_stabilizers(F))
        throw std::invalid_argument(
            "second transitivity check needs >= 3 colors and a transitive group "
            "generated by point stabilizers");
    const std::vector<int> axis = {1, 2, 1, 3};
    auto at = [&](int i) { return axis[static_cast<std::size_t>(((i % 4) + 4) % 4)]; };
    auto b = length2_translation_along(axis, F);
    if (b) {
        LineElement h(F.degree(), VertexAddr(), axis, 4,
                      std::vector<Perm>(4, Perm::identity(F.degree())));
        auto cls = classify(*b);
        const auto* hyp = std::get_if<Hyperbolic>(&cls);
        bool ok = hyp != nullptr && hyp->length == 2;
        for (long j = -6; j <= 6 && ok; ++j)
            ok = b->apply(b->apply(h.line_vertex(j))) == h.line_vertex(j + 4);
        if (!ok) throw std::logic_error("length-2 witness failed verification");
        return {true, std::move(b), std::nullopt};
    }
    std::optional<std::array<int, 4>> least;
    for (int i = 0; i < 4; ++i) {
        if (transporter_exists(F, {at(i - 1), at(i)}, {at(i + 1), at(i + 2)})) continue;
        std::array<int, 4> m{at(i - 1), at(i), at(i + 1), at(i + 2)};
        if (!least || m < *least) least = m;
    }
    return {false, std::nullopt, least};
}

// Equal point stabilizers F_j = F_k admit a translation of length 2 along
// the (j,k)-line all of whose true locals are trivial, hence lying in U(F)
// whatever F is. The certificate carries the first such pair and the
// translation itself.
struct EqualStabCert {
    int j;
    int k;
    Portrait h;

    friend bool operator==(const EqualStabCert&, const EqualStabCert&) = default;
};

inline std::optional<EqualStabCert> check_equal_stabilizer_line(const PermGroup& F) {
    const int d = F.degree();
    for (int j = 1; j <= d; ++j)
        for (int k = j + 1; k <= d; ++k) {
            if (point_stabilizer(F, j).elements() != point_stabilizer(F, k).elements())
                continue;
            Portrait h = Portrait::left_translation(d, VertexAddr::from_colors({j, k}));
            if (!is_in_UF_plus(h, F))
                throw std::logic_error("left translation escaped U(F)+");
            auto cls = classify(h);
            const auto* hyp = std::get_if<Hyperbolic>(&cls);
            if (hyp == nullptr || hyp->length != 2)
                throw std::logic_error("left translation is not a length-2 hyperbolic");
            if (hyp->attracting != End(VertexAddr(), VertexAddr::from_colors({j, k})))
                throw std::logic_error("translation axis is not the (j,k)-line");
            return EqualStabCert{j, k, std::move(h)};
        }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Suite runner. A config is a list of named groups plus depth/sample/seed
// budgets; the report is one line per check per group,
//
//   CHECK <name> <group> PASS|FAIL <certificate>
//
// with a tab-separated twin of the same rows. Certificates are single
// tokens ('-' when there is nothing to report). Verdict-style checks pass
// when the computed answer matches the ground truth recomputed from the
// group; battery checks pass when every sample verifies.
// ---------------------------------------------------------------------------

struct NamedGroup {
    std::string name;
    PermGroup group;
};

struct SuiteConfig {
    std::vector<NamedGroup> groups;
    int depth = 5;
    int samples = 6;
    std::uint64_t seed = 12345;
    std::map<std::string, bool> expect_bounded;  // optional verdict pins per group name
};

inline SuiteConfig default_suite_config() {
    SuiteConfig cfg;
    cfg.groups.push_back({"Sym3", PermGroup::symmetric(3)});
    cfg.groups.push_back({"Sym5", PermGroup::symmetric(5)});
    cfg.groups.push_back({"A5", PermGroup::alternating(5)});
    cfg.groups.push_back({"D5", PermGroup::dihedral(5)});
    cfg.groups.push_back({"C4", PermGroup::cyclic(4)});
    cfg.groups.push_back({"C5", PermGroup::cyclic(5)});
    return cfg;
}

// Line format: 'depth N', 'samples N', 'seed N', 'expect-bounded NAME yes|no',
// 'group NAME DEGREE cycles[;cycles...]'. Blank lines and lines starting
// with '#' are skipped.
inline SuiteConfig parse_suite_config(const std::string& text) {
    SuiteConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tok(line);
        std::string key;
        if (!(tok >> key) || key[0] == '#') continue;
        if (key == "depth" || key == "samples" || key == "seed") {
            long long v = 0;
            if (!(tok >> v) || v < 0)
                throw parse_error("'" + key + "' needs a nonnegative integer", line_no, 1);
            if (key == "depth") {
                if (v < 2) throw parse_error("depth must be at least 2", line_no, 1);
                cfg.depth = static_cast<int>(v);
            } else if (key == "samples") {
                cfg.samples = static_cast<int>(v);
            } else {
                cfg.seed = static_cast<std::uint64_t>(v);
            }
        } else if (key == "expect-bounded") {
            std::string name, verdict;
            if (!(tok >> name >> verdict) || (verdict != "yes" && verdict != "no"))
                throw parse_error("expected 'expect-bounded NAME yes|no'", line_no, 1);
            cfg.expect_bounded[name] = verdict == "yes";
        } else if (key == "group") {
            std::string name;
            int deg = 0;
            if (!(tok >> name >> deg) || deg < 2 || deg > 9)
                throw parse_error("expected 'group NAME DEGREE gens' with degree 2..9",
                                  line_no, 1);
            std::string rest;
            std::getline(tok, rest);
            std::vector<Perm> gens;
            std::size_t pos = 0;
            while (pos <= rest.size()) {
                std::size_t semi = rest.find(';', pos);
                std::string part = rest.substr(pos, semi == std::string::npos
                                                        ? std::string::npos
                                                        : semi - pos);
                std::size_t a = part.find_first_not_of(" \t\r");
                if (a != std::string::npos) {
                    std::size_t z = part.find_last_not_of(" \t\r");
                    gens.push_back(parse_perm(deg, part.substr(a, z - a + 1), line_no));
                }
                if (semi == std::string::npos) break;
                pos = semi + 1;
            }
            if (gens.empty())
                throw parse_error("group '" + name + "' lists no generators", line_no, 1);
            cfg.groups.push_back({name, PermGroup::from_generators(deg, gens)});
        } else {
            throw parse_error("unknown directive '" + key + "'", line_no, 1);
        }
    }
    return cfg;
}

struct SuiteReport {
    std::string text;
    std::string tsv;
    bool all_pass;
};

namespace detail {

inline std::string counts_list(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

// Type-preserving sample of U(F): a left translation by an even word
// composed with a vertex stabilizer element.
inline Portrait suite_sample(const PermGroup& F, int depth, bool even_only,
                             std::mt19937_64& rng) {
    auto region = ball(F.degree(), 2);
    VertexAddr w;
    do {
        w = region[rng() % region.size()];
    } while (even_only && w.length() % 2 != 0);
    auto stab = random_vertex_stabilizer_element(F, depth, rng());
    return compose(Portrait::left_translation(F.degree(), w), stab.value);
}

}  // namespace detail

inline SuiteReport run_suite(const SuiteConfig& cfg) {
    if (cfg.depth < 2) throw std::invalid_argument("suite depth must be at least 2");
    SuiteReport rep{"", "", true};
    if (cfg.groups.empty()) return rep;
    auto emit = [&rep](const std::string& check, const std::string& g, bool pass,
                       const std::string& cert) {
        rep.all_pass = rep.all_pass && pass;
        const std::string status = pass ? "PASS" : "FAIL";
        rep.text += "CHECK " + check + " " + g + " " + status + " " + cert + "\n";
        rep.tsv += check + "\t" + g + "\t" + status + "\t" + cert + "\n";
    };
    auto guarded = [&emit](const std::string& check, const std::string& g, auto body) {
        try {
            body();
        } catch (const std::exception& ex) {
            emit(check, g, false, std::string("error:") + ex.what());
        }
    };
    rep.text += "# suite depth=" + std::to_string(cfg.depth) +
                " samples=" + std::to_string(cfg.samples) +
                " seed=" + std::to_string(cfg.seed) +
                " groups=" + std::to_string(cfg.groups.size()) + "\n";
    const int bdepth = std::min(2, std::max(1, cfg.depth - 2));
    for (std::size_t gi = 0; gi < cfg.groups.size(); ++gi) {
        const auto& name = cfg.groups[gi].name;
        const auto& F = cfg.groups[gi].group;
        const int d = F.degree();
        const bool cyc_prime = is_cyclic_of_prime_order(F);
        if (cyc_prime)
            rep.text += "NOTE " + name + " U(F)+ trivial (cyclic of prime order); "
                        "skipping +-only checks\n";
        std::mt19937_64 rng(cfg.seed * 1000003ull + gi * 7919ull + 1ull);

        guarded("orbit-growth", name, [&] {
            auto gt = boundary_orbit_growth(F, cfg.depth);
            bool pass = gt.bounded == is_2transitive(F);
            std::string cert = "o=" + detail::counts_list(gt.counts) +
                               ";verdict=" + (gt.bounded ? "bounded" : "growing");
            if (auto it = cfg.expect_bounded.find(name); it != cfg.expect_bounded.end()) {
                pass = pass && gt.bounded == it->second;
                cert += std::string(";pinned=") + (it->second ? "bounded" : "growing");
            }
            emit("orbit-growth", name, pass, cert);
        });

        guarded("classify-battery", name, [&] {
            bool ok = true;
            for (int t = 0; t < cfg.samples && ok; ++t) {
                Portrait g = detail::suite_sample(F, bdepth, false, rng);
                ok = is_in_UF(g, F) && compose(g, inverse(g)).is_identity();
                int brute = -1;
                for (const auto& v : ball(d, g.support_hull() + 2)) {
                    int m = dist(v, g.apply(v));
                    if (brute < 0 || m < brute) brute = m;
                }
                auto cls = classify(g);
                int expected = 0;
                if (const auto* hyp = std::get_if<Hyperbolic>(&cls)) expected = hyp->length;
                if (std::holds_alternative<Inversion>(cls)) expected = 1;
                if (const auto* ell = std::get_if<Elliptic>(&cls))
                    ok = ok && g.apply(ell->fixed) == ell->fixed;
                ok = ok && brute == expected &&
                     brute % 2 == static_cast<int>(g.root_image().length()) % 2;
            }
            emit("classify-battery", name, ok,
                 "checked=" + std::to_string(cfg.samples));
        });

        guarded("tits-battery", name, [&] {
            const std::vector<EdgeAddr> edges = {
                EdgeAddr(VertexAddr(), 1), EdgeAddr(VertexAddr::from_colors({1}), 2),
                EdgeAddr(VertexAddr::from_colors({2}), 1),
                EdgeAddr(VertexAddr::from_colors({1, 2}), d >= 3 ? 3 : 1)};
            bool ok = true;
            int trivial = 0;
            for (int t = 0; t < cfg.samples && ok; ++t) {
                const auto& e = edges[static_cast<std::size_t>(t) % edges.size()];
                auto inner = random_half_tree_fixator(
                    F, HalfTree(e, HalfTree::Side::Inner), bdepth, rng());
                auto outer = random_half_tree_fixator(
                    F, HalfTree(e, HalfTree::Side::Outer), bdepth, rng());
                trivial += inner.forced_trivial && outer.forced_trivial ? 1 : 0;
                Portrait g = compose(inner.value, outer.value);
                auto [g1, g2] = tits_split(g, e);
                ok = compose(g1, g2) == g && compose(g2, g1) == g &&
                     fixes_half_tree_pointwise(g1, HalfTree(e, HalfTree::Side::Inner)) &&
                     fixes_half_tree_pointwise(g2, HalfTree(e, HalfTree::Side::Outer)) &&
                     is_in_UF(g1, F) && is_in_UF(g2, F);
            }
            emit("tits-battery", name, ok,
                 "checked=" + std::to_string(cfg.samples) +
                     ";forced-trivial=" + std::to_string(trivial));
        });

        guarded("bipartition", name, [&] {
            const int bd = std::min(cfg.depth, 4);
            bool ok = true;
            std::size_t even_words = 0;
            for (const auto& w : ball(d, bd)) {
                if (w.length() % 2 != 0) continue;
                ++even_words;
                Portrait t = Portrait::left_translation(d, w);
                ok = ok && is_in_UF(t, F) && t.apply(VertexAddr()) == w;
            }
            auto sph = sphere(d, 3);
            for (int t = 0; t < cfg.samples && ok; ++t) {
                Portrait g = detail::suite_sample(F, bdepth, true, rng);
                for (const auto& v : sph) ok = ok && dist(v, g.apply(v)) % 2 == 0;
            }
            emit("bipartition", name, ok,
                 "depth=" + std::to_string(bd) + ";even-words=" +
                     std::to_string(even_words) + ";samples=" +
                     std::to_string(cfg.samples));
        });

        guarded("hyp-ends", name, [&] {
            if (!is_transitive(F)) {
                emit("hyp-ends", name, true, "skipped:not-transitive");
                return;
            }
            auto cert = check_hyp_ends_obstruction(F);
            bool pass = cert.has_value() != is_2transitive(F);
            std::string s = "-";
            if (cert) {
                pass = pass &&
                       !transporter_exists(F, {cert->a, cert->b}, {cert->a, cert->c});
                s = "a=" + std::to_string(cert->a) + ";b=" + std::to_string(cert->b) +
                    ";c=" + std::to_string(cert->c) + ";N=" + std::to_string(cert->n) +
                    ";pattern=" + print_vertex(cert->pattern);
            }
            emit("hyp-ends", name, pass, s);
        });

        guarded("second-trans", name, [&] {
            if (d < 3 || !is_transitive(F) || !is_generated_by_point_stabilizers(F)) {
                emit("second-trans", name, true, "skipped:hypothesis");
                return;
            }
            auto r = check_second_trans(F);
            bool pass = r.positive == is_2transitive(F);
            std::string s;
            if (r.positive) {
                std::vector<int> per(static_cast<std::size_t>(r.halver->period()));
                for (int i = 0; i < r.halver->period(); ++i) per[i] = r.halver->gamma(i);
                s = "axis=(" + print_vertex(VertexAddr::from_colors(per)) + ");shift=2";
            } else if (r.missing) {
                const auto& m = *r.missing;
                s = "missing=(" + std::to_string(m[0]) + "," + std::to_string(m[1]) +
                    ")->(" + std::to_string(m[2]) + "," + std::to_string(m[3]) + ")";
            } else {
                pass = false;
                s = "missing=?";
            }
            emit("second-trans", name, pass, s);
        });

        guarded("equal-stab", name, [&] {
            if (cyc_prime) {
                emit("equal-stab", name, true, "skipped:cyclic-prime");
                return;
            }
            auto cert = check_equal_stabilizer_line(F);
            if (!cert) {
                emit("equal-stab", name, true, "-");
                return;
            }
            bool pass = is_in_UF_plus(cert->h, F) &&
                        point_stabilizer(F, cert->j).elements() ==
                            point_stabilizer(F, cert->k).elements();
            emit("equal-stab", name, pass,
                 "j=" + std::to_string(cert->j) + ";k=" + std::to_string(cert->k));
        });
    }
    return rep;
}

}  // namespace arboru
