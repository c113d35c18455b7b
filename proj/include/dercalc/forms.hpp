#pragma once

// Polynomial differential forms on the plane.

#include "dercalc/derivation.hpp"
#include "dercalc/mpoly.hpp"

#include <stdexcept>
#include <string>

namespace dercalc {

namespace detail {
inline void require_plane(const RingPtr& r, const char* what) {
    if (r->size() != 2) throw std::invalid_argument(std::string(what) + ": forms need exactly two variables");
}
} // namespace detail

/// c1 dx1 + c2 dx2.
struct Form1 {
    MPoly c1, c2;

    Form1() = default;
    Form1(MPoly a, MPoly b) : c1(std::move(a)), c2(std::move(b)) {
        detail::require_plane(c1.ring(), "Form1");
        if (!same_ring(c1.ring(), c2.ring())) throw VariableMismatch("Form1: coefficients in different rings");
    }
    static Form1 zero(const RingPtr& r) { return Form1(MPoly(r), MPoly(r)); }

    const RingPtr& ring() const { return c1.ring(); }
    bool is_zero() const { return c1.is_zero() && c2.is_zero(); }

    Form1 operator+(const Form1& o) const { return Form1(c1 + o.c1, c2 + o.c2); }
    Form1 operator-(const Form1& o) const { return Form1(c1 - o.c1, c2 - o.c2); }
    Form1 operator*(const MPoly& h) const { return Form1(c1 * h, c2 * h); }
    friend bool operator==(const Form1&, const Form1&) = default;

    std::string to_string() const {
        const auto& v = c1.vars();
        std::string s;
        auto term = [&](const MPoly& c, const std::string& dx) {
            if (c.is_zero()) return;
            std::string cs = c.to_string();
            std::string body = c == MPoly::constant(c.ring(), 1) ? "" : (c.size() > 1 ? "(" + cs + ")*" : cs + "*");
            if (!s.empty()) s += " + ";
            s += body + dx;
        };
        term(c1, "d" + v[0]);
        term(c2, "d" + v[1]);
        return s.empty() ? "0" : s;
    }
};

/// c dx1^dx2.
struct Form2 {
    MPoly c;

    Form2() = default;
    explicit Form2(MPoly a) : c(std::move(a)) { detail::require_plane(c.ring(), "Form2"); }

    const RingPtr& ring() const { return c.ring(); }
    bool is_zero() const { return c.is_zero(); }
    friend bool operator==(const Form2&, const Form2&) = default;

    std::string to_string() const {
        if (c.is_zero()) return "0";
        const auto& v = c.vars();
        std::string vol = "d" + v[0] + "^d" + v[1];
        if (c == MPoly::constant(c.ring(), 1)) return vol;
        return (c.size() > 1 ? "(" + c.to_string() + ")" : c.to_string()) + "*" + vol;
    }
};

inline std::ostream& operator<<(std::ostream& os, const Form1& w) { return os << w.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Form2& w) { return os << w.to_string(); }

inline Form2 volume_form(const RingPtr& r) { return Form2(MPoly::constant(r, 1)); }

/// Contraction of the volume form: -f2 dx1 + f1 dx2.
inline Form1 omega_of(const Deriv& D) {
    if (D.nvars() != 2) throw std::invalid_argument("omega_of: derivation must have exactly two variables");
    return Form1(-D.coeff(1), D.coeff(0));
}

inline Form1 d0(const MPoly& f) {
    detail::require_plane(f.ring(), "d0");
    return Form1(f.derivative(0), f.derivative(1));
}

inline Form2 d1(const Form1& w) { return Form2(w.c2.derivative(0) - w.c1.derivative(1)); }

inline Form2 wedge(const Form1& a, const Form1& b) { return Form2(a.c1 * b.c2 - a.c2 * b.c1); }

inline MPoly delta(const Deriv& D, const Form1& w) {
    if (D.nvars() != 2) throw std::invalid_argument("delta: derivation must have exactly two variables");
    if (!same_ring(D.ring(), w.ring())) throw VariableMismatch("delta: form and derivation use different variables");
    return w.c1 * D.coeff(0) + w.c2 * D.coeff(1);
}

/// D_f(h) = dh + h df.
inline Form1 twisted(const MPoly& f, const MPoly& h) {
    if (!same_ring(f.ring(), h.ring())) throw VariableMismatch("twisted: ring mismatch");
    return d0(h) + d0(f) * h;
}

/// D_f(w) = dw + df ^ w.
inline Form2 twisted(const MPoly& f, const Form1& w) {
    if (!same_ring(f.ring(), w.ring())) throw VariableMismatch("twisted: ring mismatch");
    Form2 a = d1(w), b = wedge(d0(f), w);
    return Form2(a.c + b.c);
}

[[noreturn]] inline Form2 twisted(const MPoly&, const Form2&) {
    throw std::invalid_argument("twisted: 2-forms have no successor in two variables");
}

/// w_D ^ dg = -D(g) vol.
inline bool star_identity_check(const Deriv& D, const MPoly& g) {
    return wedge(omega_of(D), d0(g)).c == -D(g);
}

} // namespace dercalc
