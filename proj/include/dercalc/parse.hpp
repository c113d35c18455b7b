#pragma once

// Polynomial text format.
//
//   poly  := term (('+'|'-') term)*
//   term  := coeff | coeff '*' mono | mono
//   mono  := var ('^' uint)? ('*' var ('^' uint)?)*
//   coeff := ['-'] uint ('/' uint)?
//   var   := letter (letter|digit)*
//
// Whitespace is ignored. A leading '-' directly before a monomial is also
// accepted, since that is what the printer emits for coefficient -1.

#include "dercalc/mpoly.hpp"

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dercalc {

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& msg, size_t pos)
        : std::invalid_argument(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    size_t position() const { return pos_; }

private:
    size_t pos_;
};

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view text, RingPtr ring) : s_(text), ring_(std::move(ring)) {}

    MPoly parse() {
        MPoly out(ring_);
        skip();
        if (at_end()) throw ParseError("empty polynomial", pos_);
        bool negate = false;
        term(out, negate);
        while (true) {
            skip();
            if (at_end()) break;
            char c = s_[pos_];
            if (c != '+' && c != '-') throw ParseError(std::string("unexpected '") + c + "'", pos_);
            ++pos_;
            term(out, c == '-');
        }
        return out;
    }

private:
    bool at_end() const { return pos_ >= s_.size(); }
    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return at_end() ? '\0' : s_[pos_];
    }

    Integer uint() {
        skip();
        size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected unsigned integer", start);
        return Integer(std::string(s_.substr(start, pos_ - start)));
    }

    void term(MPoly& out, bool negate) {
        Rat coeff(1);
        bool have_coeff = false;
        if (peek() == '-') {
            ++pos_;
            negate = !negate;
        }
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer n = uint();
            Integer d = 1;
            if (peek() == '/') {
                ++pos_;
                size_t p = pos_;
                d = uint();
                if (d == 0) throw ParseError("zero denominator", p);
            }
            coeff = Rat(n, d);
            have_coeff = true;
            if (peek() != '*') {
                out.add_term(Exponent(ring_->size(), 0), negate ? -coeff : coeff);
                return;
            }
            ++pos_;
        }
        Exponent e(ring_->size(), 0);
        c = peek();
        if (!std::isalpha(static_cast<unsigned char>(c)))
            throw ParseError(have_coeff ? "expected variable after '*'" : "expected term", pos_);
        factor(e);
        while (peek() == '*') {
            ++pos_;
            factor(e);
        }
        out.add_term(e, negate ? -coeff : coeff);
    }

    void factor(Exponent& e) {
        skip();
        size_t start = pos_;
        if (at_end() || !std::isalpha(static_cast<unsigned char>(s_[pos_]))) throw ParseError("expected variable", pos_);
        while (!at_end() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string name(s_.substr(start, pos_ - start));
        auto idx = ring_->index_of(name);
        if (!idx) throw ParseError("unknown variable '" + name + "'", start);
        unsigned k = 1;
        if (peek() == '^') {
            ++pos_;
            size_t p = pos_;
            Integer n = uint();
            if (n > 1000000) throw ParseError("exponent too large", p);
            k = static_cast<unsigned>(n.get_ui());
        }
        e[*idx] += k;
    }

    std::string_view s_;
    RingPtr ring_;
    size_t pos_ = 0;
};

} // namespace detail

inline MPoly parse_poly(std::string_view text, const RingPtr& ring) { return detail::PolyParser(text, ring).parse(); }

inline MPoly parse_poly(std::string_view text, const std::vector<std::string>& vars) {
    return parse_poly(text, make_ring(vars));
}

/// Identifiers mentioned in `text`, in order of first appearance.
inline std::vector<std::string> identifiers_in(std::string_view text) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < text.size()) {
        if (std::isalpha(static_cast<unsigned char>(text[i]))) {
            size_t j = i;
            while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
            std::string id(text.substr(i, j - i));
            if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

} // namespace dercalc
