#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "arboru/error.hpp"
#include "arboru/perm.hpp"

namespace arboru {

// The d-regular tree with its canonical legal coloring: vertices are reduced
// color words over {1..d} (no letter repeated consecutively), the base vertex
// x0 is the empty word, and the edge {w, w.c} carries color c. Letters are
// stored as raw bytes 1..12, so short addresses live in the SSO buffer.
class VertexAddr {
public:
    VertexAddr() = default;

    explicit VertexAddr(std::string raw) : w_(std::move(raw)) {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            if (w_[i] < 1 || w_[i] > kMaxDegree)
                throw std::invalid_argument("vertex letter out of range");
            if (i > 0 && w_[i] == w_[i - 1])
                throw std::invalid_argument("vertex word not reduced");
        }
    }

    static VertexAddr from_colors(const std::vector<int>& colors) {
        std::string raw;
        raw.reserve(colors.size());
        for (int c : colors) raw.push_back(static_cast<char>(c));
        return VertexAddr(std::move(raw));
    }

    std::size_t length() const { return w_.size(); }
    bool empty() const { return w_.empty(); }
    Color at(std::size_t i) const { return static_cast<Color>(w_[i]); }
    Color last() const { return static_cast<Color>(w_.back()); }
    const std::string& raw() const { return w_; }

    VertexAddr parent() const {
        VertexAddr p;
        p.w_ = w_.substr(0, w_.size() - 1);
        return p;
    }

    VertexAddr prefix(std::size_t n) const {
        VertexAddr p;
        p.w_ = w_.substr(0, n);
        return p;
    }

    friend bool operator==(const VertexAddr&, const VertexAddr&) = default;

    // Shortlex: length first, then letters. This is the storage order for
    // portraits and the tie-break order everywhere a "first vertex" is needed.
    friend bool operator<(const VertexAddr& a, const VertexAddr& b) {
        if (a.w_.size() != b.w_.size()) return a.w_.size() < b.w_.size();
        return a.w_ < b.w_;
    }

private:
    friend VertexAddr reduce_append(const VertexAddr&, Color);
    std::string w_;
};

struct VertexHash {
    std::size_t operator()(const VertexAddr& v) const {
        return std::hash<std::string>{}(v.raw());
    }
};

inline VertexAddr reduce_append(const VertexAddr& w, Color c) {
    if (c < 1 || c > kMaxDegree)
        throw std::invalid_argument("color out of range");
    VertexAddr r = w;
    if (!r.w_.empty() && r.w_.back() == static_cast<char>(c))
        r.w_.pop_back();
    else
        r.w_.push_back(static_cast<char>(c));
    return r;
}

// Reduced concatenation; with words as group elements this is the product.
inline VertexAddr reduce_concat(const VertexAddr& a, const VertexAddr& b) {
    VertexAddr r = a;
    for (std::size_t i = 0; i < b.length(); ++i) r = reduce_append(r, b.at(i));
    return r;
}

inline std::size_t lcp_len(const VertexAddr& u, const VertexAddr& v) {
    std::size_t n = std::min(u.length(), v.length());
    std::size_t i = 0;
    while (i < n && u.at(i) == v.at(i)) ++i;
    return i;
}

inline std::size_t dist(const VertexAddr& u, const VertexAddr& v) {
    return u.length() + v.length() - 2 * lcp_len(u, v);
}

// Vertices of the geodesic [u, v], in order, endpoints included.
inline std::vector<VertexAddr> geodesic(const VertexAddr& u, const VertexAddr& v) {
    std::size_t m = lcp_len(u, v);
    std::vector<VertexAddr> path;
    for (std::size_t k = u.length(); k + 1 > m + 1; --k) path.push_back(u.prefix(k));
    for (std::size_t k = m; k <= v.length(); ++k) path.push_back(v.prefix(k));
    return path;
}

// ---- text form: "-" for x0, digit string, or comma-separated letters ----

inline std::string print_vertex(const VertexAddr& v) {
    if (v.empty()) return "-";
    bool small = true;
    for (std::size_t i = 0; i < v.length(); ++i)
        if (v.at(i) > 9) small = false;
    std::string out;
    for (std::size_t i = 0; i < v.length(); ++i) {
        if (!small && i > 0) out += ',';
        out += std::to_string(static_cast<int>(v.at(i)));
    }
    return out;
}

inline VertexAddr parse_vertex(const std::string& text, int degree, int line_no = 0,
                               int col_base = 0) {
    if (text == "-") return VertexAddr();
    std::vector<int> colors;
    if (text.find(',') != std::string::npos) {
        std::size_t i = 0;
        while (i <= text.size()) {
            std::size_t j = text.find(',', i);
            if (j == std::string::npos) j = text.size();
            int v = 0;
            if (i == j)
                throw parse_error("empty letter", line_no, col_base + static_cast<int>(i) + 1);
            for (std::size_t k = i; k < j; ++k) {
                if (text[k] < '0' || text[k] > '9')
                    throw parse_error("expected digit", line_no,
                                      col_base + static_cast<int>(k) + 1);
                v = v * 10 + (text[k] - '0');
            }
            colors.push_back(v);
            i = j + 1;
            if (j == text.size()) break;
        }
    } else {
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] < '0' || text[i] > '9')
                throw parse_error("expected digit", line_no, col_base + static_cast<int>(i) + 1);
            colors.push_back(text[i] - '0');
        }
    }
    if (colors.empty()) throw parse_error("empty vertex word", line_no, col_base + 1);
    for (std::size_t i = 0; i < colors.size(); ++i) {
        if (colors[i] < 1 || colors[i] > degree)
            throw parse_error("letter out of range", line_no, col_base + static_cast<int>(i) + 1);
        if (i > 0 && colors[i] == colors[i - 1])
            throw parse_error("word not reduced", line_no, col_base + static_cast<int>(i) + 1);
    }
    return VertexAddr::from_colors(colors);
}

// Unoriented edge {inner, inner.color}, canonicalized so that appending the
// color to inner lengthens the word (inner is the endpoint nearer x0).
class EdgeAddr {
public:
    EdgeAddr(VertexAddr v, Color c) {
        if (c < 1 || c > kMaxDegree)
            throw std::invalid_argument("edge color out of range");
        if (!v.empty() && v.last() == c) {
            inner_ = v.parent();
        } else {
            inner_ = std::move(v);
        }
        color_ = c;
    }

    const VertexAddr& inner() const { return inner_; }
    Color color() const { return color_; }
    VertexAddr outer() const { return reduce_append(inner_, color_); }

    friend bool operator==(const EdgeAddr&, const EdgeAddr&) = default;

private:
    VertexAddr inner_;
    Color color_;
};

inline std::string print_edge(const EdgeAddr& e) {
    return print_vertex(e.inner()) + ":" + std::to_string(static_cast<int>(e.color()));
}

// One of the two components of T minus an open edge, boundary endpoint
// included.
class HalfTree {
public:
    enum class Side { Inner, Outer };

    HalfTree(EdgeAddr e, Side s) : edge_(std::move(e)), side_(s) {}

    const EdgeAddr& edge() const { return edge_; }
    Side side() const { return side_; }

    VertexAddr boundary() const {
        return side_ == Side::Inner ? edge_.inner() : edge_.outer();
    }
    VertexAddr across() const {
        return side_ == Side::Inner ? edge_.outer() : edge_.inner();
    }

    HalfTree complement() const {
        return HalfTree(edge_, side_ == Side::Inner ? Side::Outer : Side::Inner);
    }

    friend bool operator==(const HalfTree&, const HalfTree&) = default;

private:
    EdgeAddr edge_;
    Side side_;
};

inline bool half_tree_contains(const HalfTree& h, const VertexAddr& v) {
    return dist(v, h.boundary()) < dist(v, h.across());
}

// Eventually periodic boundary point, written pre.per.per... as a reduced
// infinite word. Canonical form: primitive period, shortest preperiod.
class End {
public:
    End(const VertexAddr& pre, const VertexAddr& per) : pre_(pre.raw()), per_(per.raw()) {
        validate();
        canonicalize();
    }

    End(const std::string& pre_raw, const std::string& per_raw)
        : End(VertexAddr(pre_raw), VertexAddr(per_raw)) {}

    const std::string& preperiod() const { return pre_; }
    const std::string& period() const { return per_; }

    Color letter(std::size_t k) const {
        if (k < pre_.size()) return static_cast<Color>(pre_[k]);
        return static_cast<Color>(per_[(k - pre_.size()) % per_.size()]);
    }

    friend bool operator==(const End&, const End&) = default;

private:
    void validate() const {
        // VertexAddr construction already checked both pieces are reduced;
        // what remains are the junctions of pre|per and per|per.
        if (per_.empty()) throw std::invalid_argument("end period must be nonempty");
        if (per_.back() == per_.front())
            throw std::invalid_argument("end period not cyclically reduced");
        if (!pre_.empty() && pre_.back() == per_.front())
            throw std::invalid_argument("end word not reduced at preperiod junction");
    }

    void canonicalize() {
        for (std::size_t len = 1; len < per_.size(); ++len) {
            if (per_.size() % len != 0) continue;
            bool repeats = true;
            for (std::size_t i = len; i < per_.size() && repeats; ++i)
                if (per_[i] != per_[i - len]) repeats = false;
            if (repeats) {
                per_.resize(len);
                break;
            }
        }
        while (!pre_.empty() && pre_.back() == per_.back()) {
            pre_.pop_back();
            per_.insert(per_.begin(), per_.back());
            per_.pop_back();
        }
    }

    std::string pre_;
    std::string per_;
};

inline VertexAddr ray_vertex(const End& xi, std::size_t n) {
    std::string raw;
    raw.reserve(n);
    for (std::size_t k = 0; k < n; ++k) raw.push_back(static_cast<char>(xi.letter(k)));
    return VertexAddr(std::move(raw));
}

inline std::string print_end(const End& xi) {
    std::string out;
    if (!xi.preperiod().empty()) out += print_vertex(VertexAddr(xi.preperiod()));
    out += "(" + print_vertex(VertexAddr(xi.period())) + ")^inf";
    return out;
}

// All reduced words of length n over {1..d}, lexicographic.
inline std::vector<VertexAddr> sphere(int d, int n) {
    if (d < 2 || d > kMaxDegree) throw std::invalid_argument("degree out of range");
    if (n < 0) throw std::invalid_argument("negative radius");
    std::vector<VertexAddr> out;
    std::string cur;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            out.push_back(VertexAddr(cur));
            return;
        }
        for (int c = 1; c <= d; ++c) {
            if (!cur.empty() && cur.back() == c) continue;
            cur.push_back(static_cast<char>(c));
            self(self, depth + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Ball of radius r in shortlex order.
inline std::vector<VertexAddr> ball(int d, int r) {
    std::vector<VertexAddr> out;
    for (int n = 0; n <= r; ++n) {
        auto s = sphere(d, n);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

// First n letters of the aperiodic word (12)(13)(12)^2(13)(12)^3(13)...
// whose ray has a boundary point no finite-data construction translates to.
inline VertexAddr hyp_ends_ray(int d, int n) {
    if (d < 3) throw std::invalid_argument("ray needs colors 1,2,3: degree >= 3");
    if (n < 0) throw std::invalid_argument("negative length");
    std::string raw;
    int block = 1;
    while (static_cast<int>(raw.size()) < n) {
        for (int k = 0; k < block && static_cast<int>(raw.size()) < n; ++k) {
            raw.push_back(1);
            if (static_cast<int>(raw.size()) < n) raw.push_back(2);
        }
        if (static_cast<int>(raw.size()) < n) {
            raw.push_back(1);
            if (static_cast<int>(raw.size()) < n) raw.push_back(3);
        }
        ++block;
    }
    return VertexAddr(std::move(raw));
}

} // namespace arboru
