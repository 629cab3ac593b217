#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "arboru/error.hpp"

namespace arboru {

// Colors (= letters of the alphabet acted on) are 1-based: 1..degree.
// uint8_t keeps vertex addresses compact; degree 12 is far beyond anything
// the exhaustive routines can sweep anyway.
using Color = std::uint8_t;

inline constexpr int kMaxDegree = 12;

// A permutation of {1..d} stored as an image table. The unused tail of im_
// is zero-filled, so the defaulted comparison is a genuine total order on
// (degree, images) and equal perms compare equal regardless of history.
class Perm {
public:
    Perm() : d_(0) {}

    explicit Perm(int degree) : d_(degree) {
        check_degree(degree);
        for (int i = 1; i <= d_; ++i) im_[i - 1] = static_cast<Color>(i);
    }

    Perm(int degree, const std::vector<int>& images) : d_(degree) {
        check_degree(degree);
        if (static_cast<int>(images.size()) != degree)
            throw std::invalid_argument("image list length != degree");
        std::array<bool, kMaxDegree + 1> seen{};
        for (int i = 0; i < degree; ++i) {
            int v = images[i];
            if (v < 1 || v > degree || seen[v])
                throw std::invalid_argument("image list is not a permutation");
            seen[v] = true;
            im_[i] = static_cast<Color>(v);
        }
    }

    static Perm identity(int degree) { return Perm(degree); }

    static Perm transposition(int degree, int a, int b) {
        Perm p(degree);
        if (a < 1 || a > degree || b < 1 || b > degree)
            throw std::invalid_argument("transposition point out of range");
        p.im_[a - 1] = static_cast<Color>(b);
        p.im_[b - 1] = static_cast<Color>(a);
        return p;
    }

    int degree() const { return d_; }

    Color operator()(Color x) const { return im_[x - 1]; }
    int apply(int x) const { return im_[x - 1]; }

    bool is_identity() const {
        for (int i = 1; i <= d_; ++i)
            if (im_[i - 1] != i) return false;
        return true;
    }

    bool fixes(int x) const { return im_[x - 1] == x; }

    // (a*b)(x) = a(b(x)); matches function composition.
    friend Perm operator*(const Perm& a, const Perm& b) {
        if (a.d_ != b.d_)
            throw std::invalid_argument("degree mismatch in composition");
        Perm r(a.d_);
        for (int i = 1; i <= a.d_; ++i)
            r.im_[i - 1] = a.im_[b.im_[i - 1] - 1];
        return r;
    }

    Perm inverse() const {
        Perm r(d_);
        for (int i = 1; i <= d_; ++i) r.im_[im_[i - 1] - 1] = static_cast<Color>(i);
        return r;
    }

    // Disjoint cycle notation, fixed points omitted; identity prints "()".
    // Cycles start at their smallest point and are listed by that point.
    std::string cycle_string() const {
        std::string out;
        std::array<bool, kMaxDegree + 1> done{};
        for (int s = 1; s <= d_; ++s) {
            if (done[s] || im_[s - 1] == s) continue;
            out += '(';
            int x = s;
            bool first = true;
            do {
                done[x] = true;
                if (!first) out += ' ';
                out += std::to_string(x);
                first = false;
                x = im_[x - 1];
            } while (x != s);
            out += ')';
        }
        if (out.empty()) out = "()";
        return out;
    }

    friend auto operator<=>(const Perm&, const Perm&) = default;

private:
    static void check_degree(int degree) {
        if (degree < 1 || degree > kMaxDegree)
            throw std::invalid_argument("degree out of range [1, 12]");
    }

    int d_;
    std::array<Color, kMaxDegree> im_{};
};

// Parses cycle notation: "(1 2 3)(4 5)", "()", or "id". Commas are accepted
// as separators inside cycles. Throws parse_error with a column pointing at
// the offending character.
inline Perm parse_perm(int degree, const std::string& text, int line_no = 0) {
    Perm p(degree);
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i; };
    auto fail = [&](const std::string& msg) -> parse_error {
        return parse_error(msg, line_no, static_cast<int>(i) + 1);
    };

    skip_ws();
    if (text.compare(i, 2, "id") == 0) {
        i += 2;
        skip_ws();
        if (i != text.size()) throw fail("trailing characters after 'id'");
        return p;
    }

    bool any_cycle = false;
    while (i < text.size()) {
        skip_ws();
        if (i == text.size()) break;
        if (text[i] != '(') throw fail("expected '('");
        ++i;
        std::vector<int> cyc;
        for (;;) {
            skip_ws();
            if (i == text.size()) throw fail("unterminated cycle");
            if (text[i] == ')') { ++i; break; }
            if (text[i] == ',') { ++i; continue; }
            if (text[i] < '0' || text[i] > '9') throw fail("expected point or ')'");
            int v = 0;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9')
                v = v * 10 + (text[i++] - '0');
            if (v < 1 || v > degree) throw fail("point out of range");
            cyc.push_back(v);
        }
        if (cyc.size() == 1) throw fail("singleton cycle");
        std::vector<int> imgs(degree);
        for (int x = 1; x <= degree; ++x) imgs[x - 1] = p.apply(x);
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            int from = cyc[k];
            if (imgs[from - 1] != from) throw fail("point repeated");
            imgs[from - 1] = cyc[(k + 1) % cyc.size()];
        }
        p = Perm(degree, imgs);
        any_cycle = true;
    }
    if (!any_cycle && text.find("()") == std::string::npos) {
        // Empty string or garbage-free whitespace is not a permutation.
        bool only_ws = true;
        for (char c : text)
            if (c != ' ' && c != '\t') { only_ws = false; break; }
        if (only_ws) throw parse_error("empty permutation", line_no, 1);
    }
    return p;
}

} // namespace arboru
