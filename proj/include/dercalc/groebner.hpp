#pragma once

// Buchberger's algorithm over Q with the normal selection strategy and
// Buchberger's two criteria; reduced bases, normal forms, ideal membership,
// and rational points of the resulting systems.

#include "dercalc/factor.hpp"
#include "dercalc/mpoly.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dercalc {

enum class TermOrder { GrLex, Lex };

inline const char* to_string(TermOrder o) { return o == TermOrder::GrLex ? "grlex" : "lex"; }

struct GrobnerBasis {
    std::vector<MPoly> generators;
    TermOrder order = TermOrder::GrLex;

    bool is_unit() const { return generators.size() == 1 && generators.front().is_constant(); }
};

namespace detail {

struct OrderGreater {
    TermOrder order;
    bool operator()(const Exponent& a, const Exponent& b) const {
        if (order == TermOrder::GrLex) return GrlexGreater{}(a, b);
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

/// Polynomial with terms in a runtime-selected order; first entry leads.
class GPoly {
public:
    using Map = std::map<Exponent, Rat, OrderGreater>;

    explicit GPoly(TermOrder o) : terms_(OrderGreater{o}) {}
    GPoly(const MPoly& p, TermOrder o) : terms_(OrderGreater{o}) {
        for (const auto& [e, c] : p.terms()) terms_.emplace(e, c);
    }

    bool is_zero() const { return terms_.empty(); }
    const Exponent& lt() const { return terms_.begin()->first; }
    const Rat& lc() const { return terms_.begin()->second; }
    const Map& terms() const { return terms_; }
    bool is_constant() const { return terms_.size() == 1 && total_degree(lt()) == 0; }

    void add(const Exponent& e, const Rat& c) {
        if (c.is_zero()) return;
        auto [it, ins] = terms_.try_emplace(e, c);
        if (!ins) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    /// this -= c * x^m * g
    void sub_mul(const Rat& c, const Exponent& m, const GPoly& g) {
        for (const auto& [e, ce] : g.terms_) add(exp_add(e, m), -(c * ce));
    }
    void make_monic() {
        if (is_zero()) return;
        Rat inv = lc().inverse();
        for (auto& [e, c] : terms_) c *= inv;
    }
    void pop_lead() { terms_.erase(terms_.begin()); }

    MPoly to_mpoly(const RingPtr& ring) const {
        MPoly r(ring);
        for (const auto& [e, c] : terms_) r.add_term(e, c);
        return r;
    }

private:
    Map terms_;
};

inline GPoly reduce_full(GPoly p, const std::vector<GPoly>& G, TermOrder order) {
    GPoly rem(order);
    while (!p.is_zero()) {
        bool reduced = false;
        for (const auto& g : G) {
            if (g.is_zero() || !divides(g.lt(), p.lt())) continue;
            Rat c = p.lc() / g.lc();
            p.sub_mul(c, exp_sub(p.lt(), g.lt()), g);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.add(p.lt(), p.lc());
            p.pop_lead();
        }
    }
    return rem;
}

inline bool coprime(const Exponent& a, const Exponent& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) return false;
    return true;
}

} // namespace detail

inline GrobnerBasis buchberger(const std::vector<MPoly>& gens, TermOrder order = TermOrder::GrLex) {
    using detail::GPoly;
    if (gens.empty()) throw std::invalid_argument("buchberger: empty generator list");
    const RingPtr ring = gens.front().ring();
    for (const auto& g : gens)
        if (!same_ring(g.ring(), ring)) throw VariableMismatch("buchberger: generators live in different rings");

    GrobnerBasis out;
    out.order = order;
    std::vector<GPoly> G;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        GPoly gp(g, order);
        gp.make_monic();
        G.push_back(std::move(gp));
    }
    if (G.empty()) throw std::invalid_argument("buchberger: all generators are zero");
    auto unit = [&] {
        out.generators = {MPoly::constant(ring, 1)};
        return out;
    };
    for (const auto& g : G)
        if (g.is_constant()) return unit();

    detail::OrderGreater greater{order};
    std::set<std::pair<size_t, size_t>> pending;
    for (size_t j = 0; j < G.size(); ++j)
        for (size_t i = 0; i < j; ++i) pending.emplace(i, j);

    while (!pending.empty()) {
        // Normal strategy: smallest lcm first.
        auto best = pending.begin();
        Exponent best_l = exp_lcm(G[best->first].lt(), G[best->second].lt());
        for (auto it = std::next(pending.begin()); it != pending.end(); ++it) {
            Exponent l = exp_lcm(G[it->first].lt(), G[it->second].lt());
            if (greater(best_l, l)) {
                best = it;
                best_l = std::move(l);
            }
        }
        auto [i, j] = *best;
        pending.erase(best);
        const Exponent& li = G[i].lt();
        const Exponent& lj = G[j].lt();
        if (detail::coprime(li, lj)) continue;
        bool chain = false;
        for (size_t k = 0; k < G.size() && !chain; ++k) {
            if (k == i || k == j || !divides(G[k].lt(), best_l)) continue;
            auto key = [](size_t a, size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
            if (!pending.count(key(i, k)) && !pending.count(key(j, k))) chain = true;
        }
        if (chain) continue;

        GPoly s(order);
        s.sub_mul(Rat(-1), exp_sub(best_l, li), G[i]);
        s.sub_mul(Rat(1), exp_sub(best_l, lj), G[j]);
        GPoly r = detail::reduce_full(std::move(s), G, order);
        if (r.is_zero()) continue;
        r.make_monic();
        if (r.is_constant()) return unit();
        for (size_t k = 0; k < G.size(); ++k) pending.emplace(k, G.size());
        G.push_back(std::move(r));
    }

    // Minimal basis, then inter-reduction.
    std::vector<GPoly> minimal;
    for (size_t i = 0; i < G.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < G.size() && !redundant; ++j) {
            if (i == j || !divides(G[j].lt(), G[i].lt())) continue;
            // Equal leading terms: keep the first.
            if (G[j].lt() == G[i].lt() && j > i) continue;
            redundant = true;
        }
        if (!redundant) minimal.push_back(G[i]);
    }
    std::vector<GPoly> reduced;
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<GPoly> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        GPoly r = detail::reduce_full(minimal[i], others, order);
        r.make_monic();
        reduced.push_back(std::move(r));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const GPoly& a, const GPoly& b) { return greater(b.lt(), a.lt()); });
    for (const auto& g : reduced) out.generators.push_back(g.to_mpoly(ring));
    return out;
}

inline MPoly normal_form(const MPoly& f, const GrobnerBasis& G) {
    std::vector<detail::GPoly> gs;
    for (const auto& g : G.generators) {
        if (!same_ring(g.ring(), f.ring())) throw VariableMismatch("normal_form: ring mismatch");
        gs.emplace_back(g, G.order);
    }
    return detail::reduce_full(detail::GPoly(f, G.order), gs, G.order).to_mpoly(f.ring());
}

inline bool ideal_membership(const MPoly& f, const std::vector<MPoly>& gens) {
    return normal_form(f, buchberger(gens)).is_zero();
}

inline bool contains_one(const std::vector<MPoly>& gens) { return buchberger(gens).is_unit(); }

// ---------------------------------------------------------------------------
// Rational points of polynomial systems.

enum class PointStatus { Found, NoneCertified, Unknown };

struct PointResult {
    PointStatus status = PointStatus::Unknown;
    std::vector<Rat> point; ///< one value per ring variable when Found
    std::string reason;
};

namespace detail {

inline PointResult rational_point_rec(std::vector<MPoly> eqs, std::vector<std::optional<Rat>> assigned, unsigned depth) {
    PointResult res;
    std::erase_if(eqs, [](const MPoly& p) { return p.is_zero(); });
    auto finish = [&] {
        res.status = PointStatus::Found;
        for (auto& a : assigned) res.point.push_back(a.value_or(Rat(0)));
        return res;
    };
    if (eqs.empty()) return finish();
    GrobnerBasis G = buchberger(eqs, TermOrder::Lex);
    if (G.is_unit()) {
        res.status = PointStatus::NoneCertified;
        res.reason = "Groebner basis is {1}";
        return res;
    }
    // Lex-smallest involved variable.
    std::optional<size_t> var;
    for (const auto& g : G.generators)
        for (size_t v : g.support_vars())
            if (!var || v > *var) var = v;
    if (!var) return finish();

    const MPoly* univariate = nullptr;
    for (const auto& g : G.generators) {
        auto sv = g.support_vars();
        if (sv.size() == 1 && sv.front() == *var) univariate = &g;
    }
    auto try_value = [&](const Rat& value) {
        std::vector<MPoly> sub;
        for (const auto& g : G.generators) sub.push_back(g.substitute(*var, value));
        auto next = assigned;
        next[*var] = value;
        return rational_point_rec(std::move(sub), std::move(next), depth + 1);
    };
    if (univariate) {
        bool all_certified = true;
        for (const auto& [root, mult] : rational_roots(*univariate)) {
            PointResult r = try_value(root);
            if (r.status == PointStatus::Found) return r;
            if (r.status == PointStatus::Unknown) all_certified = false;
        }
        res.status = all_certified ? PointStatus::NoneCertified : PointStatus::Unknown;
        res.reason = all_certified ? "no rational root extends to a solution" : "positive-dimensional fibre not resolved";
        return res;
    }
    // Positive-dimensional in this variable: probe a few rational values.
    for (long v : {0L, 1L, -1L, 2L, -2L}) {
        PointResult r = try_value(Rat(v));
        if (r.status == PointStatus::Found) return r;
    }
    res.status = PointStatus::Unknown;
    res.reason = "positive-dimensional system without a rational point among probed values";
    return res;
}

} // namespace detail

/// Search for a rational common zero of `eqs` (all in one ring). NoneCertified
/// is only returned when the search was exhaustive.
inline PointResult find_rational_point(const std::vector<MPoly>& eqs, const RingPtr& ring) {
    std::vector<std::optional<Rat>> assigned(ring->size());
    return detail::rational_point_rec(eqs, std::move(assigned), 0);
}

} // namespace dercalc
