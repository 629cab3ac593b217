#pragma once

#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "arboru/error.hpp"
#include "arboru/perm.hpp"
#include "arboru/perm_group.hpp"
#include "arboru/portrait.hpp"
#include "arboru/tree.hpp"

namespace arboru {

// Translation by an even shift along a periodically colored bi-infinite
// geodesic line. Needed because such translations generally have no
// finite-defect portrait: every line vertex carries a nontrivial local.
//
// The line through the anchor a_0 has vertices a_i with edge {a_i, a_i+1}
// colored gamma(i mod P). The element maps a_i to a_i+shift with true local
// perms[i mod P] there; off the line, locals follow the same swap
// completion as Portrait. Canonical form: primitive (gamma, perms) period
// and the anchor re-based at the projection of x0 onto the line, so
// equality is field equality.
class LineElement {
public:
    LineElement(int degree, const VertexAddr& anchor, const std::vector<int>& colors,
                int shift, std::vector<Perm> perms)
        : d_(degree), anchor_(anchor), shift_(shift), perms_(std::move(perms)) {
        if (degree < 2 || degree > kMaxDegree)
            throw std::invalid_argument("line element degree out of range");
        if (colors.size() < 2)
            throw std::invalid_argument("line period needs at least two colors");
        for (int c : colors) {
            if (c < 1 || c > degree)
                throw std::invalid_argument("line color out of range");
            gamma_.push_back(static_cast<char>(c));
        }
        const int P = static_cast<int>(gamma_.size());
        for (int i = 0; i < P; ++i)
            if (gamma(i) == gamma(i + 1))
                throw std::invalid_argument("line period not cyclically reduced");
        if (shift_ <= 0 || shift_ % 2 != 0)
            throw std::invalid_argument("shift must be even and positive");
        if (static_cast<int>(perms_.size()) != P)
            throw std::invalid_argument("need one perm per period position");
        for (const Perm& p : perms_)
            if (p.degree() != degree)
                throw std::invalid_argument("line perm degree mismatch");
        for (std::size_t i = 0; i < anchor_.length(); ++i)
            if (anchor_.at(i) > degree)
                throw std::invalid_argument("anchor letter exceeds degree");
        for (int j = 0; j < P; ++j) {
            if (pi(j)(gamma(j - 1)) != gamma(j + shift_ - 1) ||
                pi(j)(gamma(j)) != gamma(j + shift_))
                throw std::invalid_argument(
                    "perm does not carry line colors along the shift");
        }
        canonicalize();
    }

    int degree() const { return d_; }
    const VertexAddr& anchor() const { return anchor_; }
    int shift() const { return shift_; }
    int period() const { return static_cast<int>(gamma_.size()); }
    const std::vector<Perm>& period_perms() const { return perms_; }

    Color gamma(long i) const {
        return static_cast<Color>(gamma_[imod(i, static_cast<long>(gamma_.size()))]);
    }
    const Perm& pi(long i) const {
        return perms_[imod(i, static_cast<long>(perms_.size()))];
    }

    VertexAddr line_vertex(long i) const {
        VertexAddr w = anchor_;
        for (long k = 0; k < i; ++k) w = reduce_append(w, gamma(k));
        for (long k = -1; k >= i; --k) w = reduce_append(w, gamma(k));
        return w;
    }

    VertexAddr apply(const VertexAddr& v) const {
        long j = project(v);
        VertexAddr u = line_vertex(j + shift_);
        auto branch = geodesic(line_vertex(j), v);
        Color prev_src = 0, prev_img = 0;
        for (std::size_t k = 1; k < branch.size(); ++k) {
            Color t = branch[k].length() > branch[k - 1].length()
                          ? branch[k].last()
                          : branch[k - 1].last();
            Color t2;
            if (k == 1) t2 = pi(j)(t);
            else t2 = t == prev_img ? prev_src : t;
            u = reduce_append(u, t2);
            prev_src = t;
            prev_img = t2;
        }
        return u;
    }

    LineElement inverse() const {
        const int P = period();
        std::vector<int> rev(P);
        for (int i = 0; i < P; ++i) rev[i] = gamma(-i - 1);
        std::vector<Perm> perms(P, Perm::identity(d_));
        for (int j = 0; j < P; ++j) perms[j] = pi(-j - shift_).inverse();
        return LineElement(d_, anchor_, rev, shift_, std::move(perms));
    }

    LineElement pow(int k) const {
        if (k == 0)
            throw std::invalid_argument("zero power is the identity portrait, "
                                        "not a line translation");
        if (k < 0) return inverse().pow(-k);
        const int P = period();
        std::vector<Perm> perms(P, Perm::identity(d_));
        for (int j = 0; j < P; ++j) {
            Perm acc = pi(j);
            for (int step = 1; step < k; ++step) acc = pi(j + step * shift_) * acc;
            perms[j] = acc;
        }
        std::vector<int> colors(P);
        for (int i = 0; i < P; ++i) colors[i] = gamma(i);
        return LineElement(d_, anchor_, colors, k * shift_, std::move(perms));
    }

    friend bool operator==(const LineElement&, const LineElement&) = default;

private:
    static long imod(long a, long m) {
        long r = a % m;
        return r < 0 ? r + m : r;
    }

    // Index of the line vertex closest to v (unique in a tree). Line
    // vertices satisfy |a_j| >= |j| - |a_0|, so the scan terminates.
    long project(const VertexAddr& v) const {
        long best_j = 0;
        std::size_t best = dist(line_vertex(0), v);
        VertexAddr fwd = anchor_, bwd = anchor_;
        for (long j = 1;; ++j) {
            fwd = reduce_append(fwd, gamma(j - 1));
            bwd = reduce_append(bwd, gamma(-j));
            if (dist(fwd, v) < best) { best = dist(fwd, v); best_j = j; }
            if (dist(bwd, v) < best) { best = dist(bwd, v); best_j = -j; }
            if (static_cast<std::size_t>(j) >
                best + anchor_.length() + v.length() + 2)
                break;
        }
        return best_j;
    }

    void canonicalize() {
        // Joint primitive period of the colors and the perms.
        int P = period();
        for (int q = 1; q < P; ++q) {
            if (P % q != 0) continue;
            bool rep = true;
            for (int i = 0; i < P && rep; ++i)
                if (gamma_[i] != gamma_[i % q] || perms_[i] != perms_[i % q])
                    rep = false;
            if (rep) {
                gamma_.resize(q);
                perms_.resize(q, Perm::identity(d_));
                P = q;
                break;
            }
        }
        // Re-base the anchor at the projection of x0.
        long j = project(VertexAddr());
        if (j != 0) {
            VertexAddr a = line_vertex(j);
            std::string g2(P, 0);
            std::vector<Perm> p2(P, Perm::identity(d_));
            for (int i = 0; i < P; ++i) {
                g2[i] = static_cast<char>(gamma(i + j));
                p2[i] = pi(i + j);
            }
            anchor_ = a;
            gamma_ = g2;
            perms_ = std::move(p2);
        }
    }

    int d_;
    VertexAddr anchor_;
    std::string gamma_;
    int shift_;
    std::vector<Perm> perms_;
};

inline VertexAddr apply(const LineElement& g, const VertexAddr& v) { return g.apply(v); }

inline LineElement conjugate_by_translation(const LineElement& g, const VertexAddr& w) {
    std::vector<int> colors(g.period());
    for (int i = 0; i < g.period(); ++i) colors[i] = g.gamma(i);
    return LineElement(g.degree(), reduce_concat(w, g.anchor()), colors, g.shift(),
                       g.period_perms());
}

// Membership: every line perm in F, and every off-line branch must be
// carried by an F-transposition (or fixed).
inline bool is_in_UF(const LineElement& g, const PermGroup& F) {
    if (g.degree() != F.degree())
        throw std::invalid_argument("degree mismatch in membership test");
    for (int j = 0; j < g.period(); ++j) {
        const Perm& p = g.pi(j);
        if (!F.contains(p)) return false;
        for (int c = 1; c <= g.degree(); ++c) {
            if (c == g.gamma(j - 1) || c == g.gamma(j)) continue;
            Color img = p(static_cast<Color>(c));
            if (img != c && !F.contains(Perm::transposition(g.degree(), c, img)))
                return false;
        }
    }
    return true;
}

inline bool is_in_UF_plus(const LineElement& g, const PermGroup& F,
                          bool* licensed = nullptr) {
    if (licensed) *licensed = uf_plus_equality_licensed(F);
    return is_in_UF(g, F) && g.apply(VertexAddr()).length() % 2 == 0;
}

// ---------------------------------------------------------------------------
// Text form:
//   anchor: -        (optional, defaults to x0)
//   line: 1213
//   shift: 2
//   perm[0]: (2 3)
//   ...
// ---------------------------------------------------------------------------

inline std::string print_line_element(const LineElement& g) {
    std::string out;
    if (!g.anchor().empty()) out += "anchor: " + print_vertex(g.anchor()) + "\n";
    std::vector<int> colors(g.period());
    for (int i = 0; i < g.period(); ++i) colors[i] = g.gamma(i);
    out += "line: " + print_vertex(VertexAddr::from_colors(colors)) + "\n";
    out += "shift: " + std::to_string(g.shift()) + "\n";
    for (int i = 0; i < g.period(); ++i)
        out += "perm[" + std::to_string(i) + "]: " + g.period_perms()[i].cycle_string() +
               "\n";
    return out;
}

inline LineElement parse_line_element(const std::string& text, int degree) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    VertexAddr anchor;
    std::optional<VertexAddr> colors;
    std::optional<int> shift;
    std::map<int, Perm> perms;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos || line[i] == '#') continue;
        std::size_t colon = line.find(':', i);
        if (colon == std::string::npos)
            throw parse_error("expected '<field>: <value>'", line_no,
                              static_cast<int>(i) + 1);
        std::string key = line.substr(i, colon - i);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string rest = line.substr(colon + 1);
        if (!rest.empty() && rest.back() == '\r') rest.pop_back();
        std::size_t j = rest.find_first_not_of(" \t");
        rest = j == std::string::npos ? std::string() : rest.substr(j);
        if (key == "anchor") {
            anchor = parse_vertex(rest, degree, line_no, static_cast<int>(colon) + 1);
        } else if (key == "line") {
            colors = parse_vertex(rest, degree, line_no, static_cast<int>(colon) + 1);
        } else if (key == "shift") {
            try {
                shift = std::stoi(rest);
            } catch (const std::exception&) {
                throw parse_error("shift must be an integer", line_no,
                                  static_cast<int>(colon) + 2);
            }
        } else if (key.rfind("perm[", 0) == 0 && key.back() == ']') {
            int idx;
            try {
                idx = std::stoi(key.substr(5, key.size() - 6));
            } catch (const std::exception&) {
                throw parse_error("bad perm index", line_no, static_cast<int>(i) + 1);
            }
            if (perms.count(idx))
                throw parse_error("duplicate perm index", line_no, 1);
            perms.emplace(idx, parse_perm(degree, rest, line_no));
        } else {
            throw parse_error("unknown field '" + key + "'", line_no,
                              static_cast<int>(i) + 1);
        }
    }
    if (!colors) throw parse_error("missing 'line:' field");
    if (!shift) throw parse_error("missing 'shift:' field");
    std::vector<int> cv;
    for (std::size_t k = 0; k < colors->length(); ++k) cv.push_back(colors->at(k));
    std::vector<Perm> pv;
    for (int k = 0; k < static_cast<int>(colors->length()); ++k) {
        auto it = perms.find(k);
        if (it == perms.end())
            throw parse_error("missing perm[" + std::to_string(k) + "]");
        pv.push_back(it->second);
    }
    if (perms.size() != colors->length())
        throw parse_error("perm index out of range for the period");
    return LineElement(degree, anchor, cv, *shift, std::move(pv));
}

// A portrait file is told apart from a line element file by the presence of
// a "line:" field.
inline std::variant<Portrait, LineElement> parse_element(const std::string& text,
                                                         int degree) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i != std::string::npos && line.compare(i, 5, "line:") == 0)
            return parse_line_element(text, degree);
    }
    return parse_portrait(text, degree);
}

} // namespace arboru
