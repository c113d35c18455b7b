#pragma once

// Command dispatch for the dercalc executable. Every command prints one JSON
// object {"status", "command", "result", "certificate"}.

#include "dercalc/cohomology.hpp"
#include "dercalc/darboux.hpp"
#include "dercalc/derivation.hpp"
#include "dercalc/dim_one.hpp"
#include "dercalc/factor.hpp"
#include "dercalc/forms.hpp"
#include "dercalc/groebner.hpp"
#include "dercalc/parse.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace dercalc::cli {

using Json = nlohmann::ordered_json;

enum class Status { Ok, Error, Inconclusive };

inline const char* to_string(Status s) {
    switch (s) {
    case Status::Ok: return "ok";
    case Status::Error: return "error";
    case Status::Inconclusive: return "inconclusive";
    }
    return "error";
}

inline int exit_code(Status s) {
    switch (s) {
    case Status::Ok: return 0;
    case Status::Error: return 2;
    case Status::Inconclusive: return 3;
    }
    return 2;
}

struct CommandResult {
    Status status = Status::Ok;
    std::string command;
    Json result;
    Json certificate;
    std::string error;

    Json to_json() const {
        Json j;
        j["status"] = to_string(status);
        j["command"] = command;
        j["result"] = result;
        if (!certificate.is_null()) j["certificate"] = certificate;
        if (!error.empty()) j["error"] = error;
        return j;
    }
};

struct Output {
    CommandResult result;
    int code = 0;
    std::string text;
};

/// Raised when a certificate fails to re-verify.
class CertificateFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw CertificateFailure("certificate failed to verify: " + what);
}

// ---- serialization ------------------------------------------------------------

inline Json to_json(const Deriv& D) {
    Json cs = Json::array();
    for (const auto& c : D.coeffs()) cs.push_back(c.to_string());
    return Json{{"vars", D.vars()}, {"coeffs", cs}, {"string", D.to_string()}};
}

inline Json to_json(const Form1& w) {
    return Json{{"c1", w.c1.to_string()}, {"c2", w.c2.to_string()}, {"string", w.to_string()}};
}

inline Json to_json(const Form2& w) { return Json{{"c", w.c.to_string()}, {"string", w.to_string()}}; }

inline Json to_json(const PartialFraction& p) {
    Json terms = Json::array();
    for (const auto& t : p.terms) terms.push_back({{"alpha", t.alpha.str()}, {"k", t.k}, {"coeff", t.coeff.str()}});
    return Json{{"string", p.to_string()}, {"polynomial", p.poly.to_string()}, {"pole_terms", terms}};
}

inline Json to_json(const Factorization& f) {
    Json fs = Json::array();
    for (const auto& [p, k] : f.factors) fs.push_back({{"factor", p.to_string()}, {"multiplicity", k}});
    return Json{{"unit", f.unit.str()}, {"factors", fs}};
}

inline Json polys_json(const std::vector<MPoly>& ps) {
    Json a = Json::array();
    for (const auto& p : ps) a.push_back(p.to_string());
    return a;
}

inline const char* to_string(PointStatus s) {
    switch (s) {
    case PointStatus::Found: return "found";
    case PointStatus::NoneCertified: return "none_certified";
    case PointStatus::Unknown: return "unknown";
    }
    return "unknown";
}

inline Json residues_json(const std::vector<std::pair<Rat, Rat>>& rs) {
    Json a = Json::array();
    for (const auto& [al, r] : rs) a.push_back({{"alpha", al.str()}, {"residue", r.str()}});
    return a;
}

// ---- input handling -----------------------------------------------------------

struct Options {
    std::string derivation_file;
    std::vector<std::string> coeffs, vars, polys;
    std::string poly, form, function, poles, numerator, member, order = "grlex", var = "t";
    std::vector<unsigned> cutoffs;
    unsigned max_degree = 0;
    unsigned power = 0;
    unsigned bound = 25;
    bool compact = false;
};

/// Variables for texts that should live in an n-variable ring (n = 0: any).
inline std::vector<std::string> infer_vars(const std::vector<std::string>& texts, size_t n, bool allow_t = true) {
    std::vector<std::string> ids;
    for (const auto& t : texts)
        for (const auto& id : identifiers_in(t))
            if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    if (n == 0) {
        if (ids.empty()) throw std::invalid_argument("cannot infer variables from constant input; pass --vars");
        return ids;
    }
    std::vector<std::vector<std::string>> shapes;
    std::vector<std::string> indexed, letters;
    for (size_t i = 0; i < n; ++i) indexed.push_back("x" + std::to_string(i + 1));
    const std::vector<std::string> xyz{"x", "y", "z"};
    if (n <= xyz.size()) letters.assign(xyz.begin(), xyz.begin() + static_cast<long>(n));
    if (n == 1 && allow_t) shapes.push_back({"t"});
    if (!letters.empty()) shapes.push_back(letters);
    shapes.push_back(indexed);
    for (const auto& s : shapes) {
        bool inside = true;
        for (const auto& id : ids) inside = inside && std::find(s.begin(), s.end(), id) != s.end();
        if (inside && !ids.empty()) return s;
    }
    if (ids.empty()) return shapes.front();
    if (ids.size() == n) return ids;
    throw std::invalid_argument("cannot infer " + std::to_string(n) + " variables from the input; pass --vars");
}

inline Deriv load_derivation(const Options& o) {
    if (!o.derivation_file.empty()) {
        std::ifstream in(o.derivation_file);
        if (!in) throw std::invalid_argument("cannot open derivation file '" + o.derivation_file + "'");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("malformed derivation file: " + std::string(e.what()));
        }
        if (!j.is_object() || !j.contains("vars") || !j.contains("coeffs") || !j["vars"].is_array() || !j["coeffs"].is_array())
            throw std::invalid_argument("malformed derivation file: expected {\"vars\": [...], \"coeffs\": [...]}");
        std::vector<std::string> vars, coeffs;
        try {
            vars = j["vars"].get<std::vector<std::string>>();
            coeffs = j["coeffs"].get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception&) {
            throw std::invalid_argument("malformed derivation file: vars and coeffs must be string arrays");
        }
        return Deriv::parse(vars, coeffs);
    }
    if (o.coeffs.empty()) throw std::invalid_argument("missing derivation: pass --derivation <file.json> or --coeffs");
    std::vector<std::string> texts = o.coeffs;
    for (const auto* t : {&o.poly, &o.function}) texts.push_back(*t);
    texts.push_back(o.form);
    return Deriv::parse(o.vars.empty() ? infer_vars(texts, o.coeffs.size(), false) : o.vars, o.coeffs);
}

inline RingPtr ring_for(const Options& o, const std::vector<std::string>& texts, size_t n) {
    return make_ring(o.vars.empty() ? infer_vars(texts, n) : o.vars);
}

inline void need(const std::string& value, const char* flag) {
    if (value.empty()) throw std::invalid_argument(std::string("missing required option ") + flag);
}

inline Form1 parse_form(const std::string& text, const RingPtr& ring) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--form expects \"c1,c2\"");
    return Form1(parse_poly(text.substr(0, comma), ring), parse_poly(text.substr(comma + 1), ring));
}

// ---- commands -----------------------------------------------------------------

inline void cmd_apply(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    need(o.poly, "--poly");
    r.result = D(parse_poly(o.poly, D.ring())).to_string();
}

inline void cmd_divergence(const Options& o, CommandResult& r) { r.result = divergence(load_derivation(o)).to_string(); }

inline void cmd_reduced(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    bool red = is_reduced(D);
    MPoly g(D.ring());
    for (const auto& c : D.coeffs()) g = g.is_zero() ? c.monic() : mgcd(g, c);
    require(red == g.is_constant(), "gcd of coefficients");
    r.result = red;
    r.certificate = {{"gcd", g.to_string()}};
}

inline void cmd_lnd(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    LndReport rep = lnd_check(D, o.max_degree ? o.max_degree : 10);
    Json nil = Json::array();
    for (const auto& k : rep.nilpotency) nil.push_back(k ? Json(*k) : Json(nullptr));
    r.result = {{"verdict", dercalc::to_string(rep.status)}, {"nilpotency", nil}};
    Json cert{{"reason", rep.certificate}};
    if (rep.witness) cert["witness"] = rep.witness->to_string();
    if (rep.eigenvalue) {
        cert["eigenvalue"] = rep.eigenvalue->str();
        if (rep.witness) require(D(*rep.witness) == *rep.witness * *rep.eigenvalue, "eigenvector relation");
    }
    r.certificate = cert;
    if (rep.status == LndStatus::Unknown) r.status = Status::Inconclusive;
}

inline void cmd_jacobian(const Options& o, CommandResult& r) {
    need(o.poly, "--poly");
    MPoly f = parse_poly(o.poly, ring_for(o, {o.poly}, 2));
    Deriv J = jacobian_deriv(f);
    require(J(f).is_zero(), "D(f) = 0");
    r.result = to_json(J);
}

inline void cmd_solve_image(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    need(o.poly, "--poly");
    MPoly target = parse_poly(o.poly, D.ring());
    unsigned d = o.max_degree ? o.max_degree : static_cast<unsigned>(std::max(target.degree(), 0)) + 1;
    ImageSolve s = solve_image(D, target, d);
    r.result = {{"preimage", s.preimage ? Json(s.preimage->to_string()) : Json(nullptr)}, {"degree_bound", s.degree_bound}};
    if (s.preimage) {
        require(D(*s.preimage) == target, "D(u) = target");
        r.certificate = {{"check", "D(u) = target"}};
    } else if (s.obstruction) {
        r.certificate = {{"obstruction", *s.obstruction}};
    } else {
        r.status = Status::Inconclusive;
    }
}

inline void cmd_kernel(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    auto K = kernel_upto(D, o.max_degree ? o.max_degree : 4);
    for (const auto& k : K) require(D(k).is_zero(), "D(k) = 0");
    r.result = polys_json(K);
}

inline void cmd_extend_slice(const Options& o, CommandResult& r) { r.result = to_json(extend_slice(load_derivation(o), o.var)); }

inline void cmd_lf_preimage(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    need(o.poly, "--poly");
    MPoly a = parse_poly(o.poly, D.ring());
    SlicePreimage s = lf_preimage(D, a, o.power, o.bound, o.var);
    const RingPtr& ext = s.extended.ring();
    require(s.extended(s.h) == a.embed(ext) * MPoly::variable(ext, D.nvars()).pow(o.power), "extended D(h) = a t^n");
    r.result = {{"h", s.h.to_string()}, {"coeffs", polys_json(s.coeffs)}, {"cascade_holds", s.cascade_holds}};
    r.certificate = {{"extended", to_json(s.extended)}};
}

inline void cmd_omega(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    Form1 w = omega_of(D);
    require(d1(w).c == divergence(D), "d(omega) = div(D) vol");
    r.result = to_json(w);
}

inline void cmd_delta(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    need(o.form, "--form");
    r.result = delta(D, parse_form(o.form, D.ring())).to_string();
}

inline void cmd_twisted(const Options& o, CommandResult& r) {
    need(o.poly, "--poly");
    std::vector<std::string> texts{o.poly};
    if (!o.form.empty()) texts.push_back(o.form);
    if (!o.function.empty()) texts.push_back(o.function);
    RingPtr ring = ring_for(o, texts, 2);
    MPoly f = parse_poly(o.poly, ring);
    if (!o.form.empty() == !o.function.empty()) throw std::invalid_argument("twisted needs exactly one of --form or --function");
    if (!o.form.empty()) r.result = to_json(twisted(f, parse_form(o.form, ring)));
    else r.result = to_json(twisted(f, parse_poly(o.function, ring)));
}

inline void cmd_darboux_verify(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    need(o.poly, "--poly");
    MPoly f = parse_poly(o.poly, D.ring());
    auto g = darboux_verify(D, f);
    r.result = {{"integral", g.has_value()}, {"cofactor", g ? Json(g->to_string()) : Json(nullptr)}};
    if (g) {
        require(D(f) == *g * f, "D(f) = g f");
        r.certificate = {{"relation", "D(f) = cofactor * f"}};
    }
}

inline void cmd_darboux(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    DarbouxReport rep = darboux_search(D, o.max_degree ? o.max_degree : 3);
    Json found = Json::array();
    for (const auto& p : rep.found) {
        require(D(p.f) == p.cofactor * p.f, "D(f) = g f for " + p.f.to_string());
        found.push_back({{"f", p.f.to_string()}, {"cofactor", p.cofactor.to_string()}});
    }
    Json cands = Json::array();
    for (const auto& c : rep.candidates)
        cands.push_back({{"leading_form", c.leading.to_string()},
                         {"leading_cofactor", c.leading_cofactor.to_string()},
                         {"outcome", to_string(c.outcome)},
                         {"note", c.note}});
    r.result = {{"verdict", dercalc::to_string(rep.status)},
                {"empty_certified", rep.status == DarbouxStatus::EmptyCertified},
                {"degree_bound", rep.degree_bound},
                {"found", found}};
    if (!rep.reason.empty()) r.result["reason"] = rep.reason;
    r.certificate = {{"W", rep.directions.W.to_string()}, {"W_factors", to_json(rep.directions.factors)}, {"candidates", cands}};
    if (rep.status == DarbouxStatus::Inconclusive) r.status = Status::Inconclusive;
}

inline void cmd_integral_element(const Options& o, CommandResult& r) {
    Deriv D = load_derivation(o);
    PipelineResult p = integral_element_pipeline(D, o.max_degree ? o.max_degree : 4);
    r.result = {{"stage", p.stage},
                {"g", p.g ? Json(p.g->to_string()) : Json(nullptr)},
                {"h", p.h ? Json(p.h->to_string()) : Json(nullptr)},
                {"reduced", p.reduced},
                {"trivial_kernel", p.trivial_kernel}};
    if (p.g) require(D(*p.g) == -divergence(D), "D(g) = -div D");
    if (p.h) {
        require((D(*p.h) + *p.h * D(*p.g)).is_zero(), "D(h) + h D(g) = 0");
        r.certificate = {{"cofactor_of_h", (-D(*p.g)).to_string()}};
    }
}

inline void cmd_q311(const Options& o, CommandResult& r) {
    need(o.poly, "--poly");
    MPoly W = parse_poly(o.poly, ring_for(o, {o.poly}, 2));
    bool ans = unit_ideal_of_partials(W);
    MPoly x2 = MPoly::variable(W.ring(), 1);
    GrobnerBasis G = buchberger({x2 * W.derivative(0), MPoly::constant(W.ring(), 1) + x2 * W.derivative(1)});
    require(G.is_unit() == ans, "Groebner basis agrees with verdict");
    r.result = ans;
    r.certificate = {{"groebner_basis", polys_json(G.generators)}};
}

inline Dim1Spec load_dim1(const Options& o) {
    need(o.numerator, "--numerator");
    RingPtr ring = ring_for(o, {o.numerator}, 1);
    return Dim1Spec(Dim1Spec::parse_poles(o.poles), parse_poly(o.numerator, ring));
}

inline void cmd_dim1_solve(const Options& o, CommandResult& r) {
    Dim1Spec s = load_dim1(o);
    Dim1Solve sol = solve_slice_dim1(s);
    r.result = {{"derivation", s.to_string()}, {"u", sol.u ? to_json(*sol.u) : Json(nullptr)}};
    Json cert{{"residues", residues_json(sol.residues)}};
    if (sol.derivative) cert["u_prime"] = to_json(*sol.derivative);
    if (!sol.obstruction.empty()) cert["obstruction"] = sol.obstruction;
    if (sol.u) require(apply_dim1(s, *sol.u) == as_element(MPoly::constant(s.ring(), 1)), "D(u) = 1");
    r.certificate = cert;
}

inline void cmd_dim1_surjective(const Options& o, CommandResult& r) {
    Dim1Spec s = load_dim1(o);
    SurjectivityVerdict v = is_surjective_dim1(s);
    r.result = {{"derivation", s.to_string()}, {"surjective", v.surjective}, {"witness", v.witness ? to_json(*v.witness) : Json(nullptr)}};
    if (v.witness) {
        require(v.witness_check && !v.witness_check->u, "witness has no preimage");
        Json cert{{"residues", residues_json(v.witness_check->residues)}, {"obstruction", v.witness_check->obstruction}};
        if (v.witness_check->derivative) cert["u_prime"] = to_json(*v.witness_check->derivative);
        r.certificate = cert;
    }
}

inline void cmd_cohomology(const Options& o, CommandResult& r) {
    need(o.poly, "--poly");
    MPoly f = parse_poly(o.poly, ring_for(o, {o.poly}, 2));
    std::vector<unsigned> cutoffs = o.cutoffs.empty() ? std::vector<unsigned>{4, 6, 8} : o.cutoffs;
    TruncatedCohomologyReport rep = stabilization_probe(f, cutoffs);
    Json h1 = Json::array(), h2 = Json::array();
    for (const auto& d : rep.dims) {
        h1.push_back(d.h1);
        h2.push_back(d.h2);
    }
    r.result = {{"f", f.to_string()}, {"cutoffs", rep.cutoffs}, {"h1", h1}, {"h2", h2},
                {"stabilized", {{"h1", rep.stabilized_h1}, {"h2", rep.stabilized_h2}}}};
}

inline void cmd_groebner(const Options& o, CommandResult& r) {
    if (o.polys.empty()) throw std::invalid_argument("missing required option --polys");
    std::vector<std::string> texts = o.polys;
    if (!o.member.empty()) texts.push_back(o.member);
    RingPtr ring = ring_for(o, texts, 0);
    std::vector<MPoly> gens;
    for (const auto& t : o.polys) gens.push_back(parse_poly(t, ring));
    TermOrder order;
    if (o.order == "grlex") order = TermOrder::GrLex;
    else if (o.order == "lex") order = TermOrder::Lex;
    else throw std::invalid_argument("--order must be grlex or lex");
    GrobnerBasis G = buchberger(gens, order);
    for (const auto& g : gens) require(normal_form(g, G).is_zero(), "generator reduces to 0");
    r.result = {{"vars", ring->names}, {"order", dercalc::to_string(order)}, {"basis", polys_json(G.generators)}, {"unit", G.is_unit()}};
    if (!o.member.empty()) {
        MPoly f = parse_poly(o.member, ring);
        MPoly nf = normal_form(f, G);
        r.result["member"] = nf.is_zero();
        r.certificate = {{"normal_form", nf.to_string()}};
    }
}

inline void cmd_factor(const Options& o, CommandResult& r) {
    need(o.poly, "--poly");
    RingPtr ring = ring_for(o, {o.poly}, 0);
    MPoly f = parse_poly(o.poly, ring);
    Factorization fz = ring->size() == 1 ? factor_univar_q(f) : factor_homog2(f);
    require(fz.expand(ring) == f, "product of factors equals input");
    r.result = to_json(fz);
    r.certificate = {{"check", "unit * prod factor^multiplicity = input"}};
}

// ---- dispatch -----------------------------------------------------------------

inline Output run(const std::vector<std::string>& args) {
    Options o;
    CLI::App app{"Exact computations with polynomial derivations", "dercalc"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto add_common = [&](CLI::App* s) {
        s->add_option("--derivation", o.derivation_file, "JSON file {\"vars\": [...], \"coeffs\": [...]}");
        s->add_option("--coeffs", o.coeffs, "derivation coefficients, comma separated")->delimiter(',');
        s->add_option("--vars", o.vars, "variable names, comma separated")->delimiter(',');
        s->add_option("--poly", o.poly, "polynomial");
        s->add_option("--max-degree", o.max_degree, "degree bound");
        s->add_flag("--json", o.compact, "single-line JSON output");
    };

    std::string name;
    std::map<std::string, std::function<void(const Options&, CommandResult&)>> handlers;
    auto sub = [&](CLI::App* parent, const std::string& n, const std::string& desc, auto fn) {
        CLI::App* s = parent->add_subcommand(n, desc);
        add_common(s);
        std::string full = parent == &app ? n : parent->get_name() + " " + n;
        handlers[full] = fn;
        s->final_callback([&name, full] { name = full; });
        return s;
    };

    sub(&app, "apply", "apply D to --poly", cmd_apply);
    sub(&app, "divergence", "divergence of D", cmd_divergence);
    sub(&app, "reduced", "whether the coefficients of D are coprime", cmd_reduced);
    sub(&app, "lnd", "local nilpotency probe (bound = --max-degree)", cmd_lnd);
    sub(&app, "jacobian", "Jacobian derivation of --poly", cmd_jacobian);
    sub(&app, "solve-image", "solve D(u) = --poly with deg u <= --max-degree", cmd_solve_image);
    sub(&app, "kernel", "kernel of D up to --max-degree", cmd_kernel);
    sub(&app, "extend-slice", "D + d/dt on a new variable", cmd_extend_slice)->add_option("--var", o.var, "new variable name");
    {
        CLI::App* s = sub(&app, "lf-preimage", "h with (D + d/dt)(h) = --poly * t^power", cmd_lf_preimage);
        s->add_option("--power", o.power, "exponent n of t");
        s->add_option("--bound", o.bound, "local finiteness bound");
        s->add_option("--var", o.var, "new variable name");
    }
    sub(&app, "omega", "1-form contracted from D", cmd_omega);
    sub(&app, "delta", "delta(D, --form)", cmd_delta)->add_option("--form", o.form, "1-form \"c1,c2\"");
    {
        CLI::App* s = sub(&app, "twisted", "twisted differential by --poly", cmd_twisted);
        s->add_option("--form", o.form, "1-form \"c1,c2\"");
        s->add_option("--function", o.function, "0-form");
    }
    sub(&app, "darboux-verify", "whether --poly divides D(--poly)", cmd_darboux_verify);
    sub(&app, "darboux", "search for integral elements up to --max-degree", cmd_darboux);
    sub(&app, "integral-element", "divergence-cofactor pipeline", cmd_integral_element);
    sub(&app, "q311", "unit-ideal test for W = --poly", cmd_q311);
    CLI::App* dim1 = app.add_subcommand("dim1", "dimension-one localized rings");
    dim1->require_subcommand(1);
    for (auto [n, fn] : {std::pair{std::string("solve-slice"), &cmd_dim1_solve}, std::pair{std::string("surjective"), &cmd_dim1_surjective}}) {
        CLI::App* s = sub(dim1, n, n == "solve-slice" ? "solve D(u) = 1" : "surjectivity with a non-image witness", fn);
        s->add_option("--poles", o.poles, "poles \"a1:n1,a2:n2\"");
        s->add_option("--numerator", o.numerator, "numerator f(t)");
    }
    sub(&app, "cohomology", "truncated twisted cohomology of --poly", cmd_cohomology)
        ->add_option("--cutoffs", o.cutoffs, "cutoff degrees, comma separated")
        ->delimiter(',');
    {
        CLI::App* s = sub(&app, "groebner", "reduced Groebner basis of --polys", cmd_groebner);
        s->add_option("--polys", o.polys, "generators, comma separated")->delimiter(',');
        s->add_option("--order", o.order, "grlex or lex");
        s->add_option("--member", o.member, "polynomial to test for membership");
    }
    sub(&app, "factor", "factor a univariate or homogeneous bivariate --poly", cmd_factor);

    Output out;
    CommandResult& r = out.result;
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out.text = app.help();
        return out;
    } catch (const CLI::CallForAllHelp&) {
        out.text = app.help("", CLI::AppFormatMode::All);
        return out;
    } catch (const CLI::ParseError& e) {
        r.status = Status::Error;
        r.command = args.empty() ? "" : args.front();
        bool known = !args.empty() && (handlers.count(args.front()) || args.front() == "dim1");
        r.error = !args.empty() && !known && args.front().rfind("-", 0) != 0 ? "unknown subcommand '" + args.front() + "'" : e.what();
    }
    if (r.error.empty()) {
        r.command = name;
        try {
            handlers.at(name)(o, r);
        } catch (const std::exception& e) {
            r.status = Status::Error;
            r.result = nullptr;
            r.certificate = nullptr;
            r.error = e.what();
        }
    }
    out.code = exit_code(r.status);
    out.text = r.to_json().dump(o.compact ? -1 : 2) + "\n";
    return out;
}

} // namespace dercalc::cli
