#include "cclnc/engine.hpp"

#include "cclnc/coordination.hpp"
#include "cclnc/herbrand.hpp"
#include "cclnc/mediatorial.hpp"
#include "cclnc/parser.hpp"
#include "cclnc/real.hpp"
#include "cclnc/typing.hpp"

#include <algorithm>
#include <sstream>

namespace cclnc {

namespace {

enum class Dom { None, M, H, F, R };

std::string join(const std::vector<Atom>& as) {
    std::string s;
    for (std::size_t i = 0; i < as.size(); ++i) {
        if (i) s += ", ";
        s += show(as[i]);
    }
    return s;
}

std::string join(const std::vector<Production>& ps) {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) s += ", ";
        s += show(ps[i]);
    }
    return s;
}

bool meets(const std::set<VarId>& a, const std::set<VarId>& b) {
    const auto& small = a.size() < b.size() ? a : b;
    const auto& large = a.size() < b.size() ? b : a;
    for (auto v : small)
        if (large.count(v)) return true;
    return false;
}

std::set<VarId> vars_of(const std::vector<Atom>& as) {
    std::set<VarId> out;
    for (const auto& a : as) collect_vars(a, out);
    return out;
}

Subst new_bindings(const Subst& before, const Subst& after) {
    Subst s;
    for (const auto& [id, b] : after.bindings())
        if (!before.binds(id)) s.bind(b.first, b.second);
    return s;
}

void add_atoms(std::vector<Atom>& store, const std::vector<Atom>& extra) {
    Store st;
    st.atoms = std::move(store);
    for (const auto& a : extra) st.add(a);
    store = std::move(st.atoms);
}

// apply s to a store's atoms, keeping set semantics; true if anything changed
bool apply_atoms(std::vector<Atom>& as, const Subst& s, const std::set<VarId>& dom) {
    bool hit = false;
    for (const auto& a : as) {
        std::set<VarId> vs;
        collect_vars(a, vs);
        if (meets(vs, dom)) {
            hit = true;
            break;
        }
    }
    if (!hit) return false;
    Store st;
    for (const auto& a : as) st.add(apply_subst(a, s));
    as = std::move(st.atoms);
    return true;
}

BaseType base_of(const TypeP& t) {
    if (!t || t->kind != Type::Kind::Con || !t->args.empty()) return BaseType::Unknown;
    if (t->name == "int") return BaseType::Int;
    if (t->name == "real") return BaseType::Real;
    if (t->name == "bool") return BaseType::Bool;
    return BaseType::Unknown;
}

// static base type of an expression, when it is obvious from its head
BaseType tag_of(const Program& prog, const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Int: return BaseType::Int;
        case ExprKind::Real: return BaseType::Real;
        case ExprKind::Bool: return BaseType::Bool;
        case ExprKind::Var: return e->tag;
        default: break;
    }
    ExprP h = head(e);
    if (auto p = as_prim(h)) {
        if (nargs(e) != prim_info(*p).arity) return BaseType::Unknown;
        switch (*p) {
            case Prim::RAdd: case Prim::RSub: case Prim::RMul: case Prim::RDiv: return BaseType::Real;
            case Prim::FAdd: case Prim::FSub: case Prim::FMul: case Prim::FDiv: return BaseType::Int;
            default: return BaseType::Bool;
        }
    }
    if (h->kind != ExprKind::Sym) return BaseType::Unknown;
    try {
        TypeP t = expand_type(prog, symbol_type(prog, h));
        int n = nargs(e);
        for (int i = 0; i < n; ++i) {
            if (t->kind != Type::Kind::Con || t->name != "->") return BaseType::Unknown;
            t = expand_type(prog, t->args[1]);
        }
        return base_of(t);
    } catch (const std::exception&) {
        return BaseType::Unknown;
    }
}

// rigid passive e against pattern t (t not a variable): same root?
bool same_root(const ExprP& e, const ExprP& t) { return nargs(e) == nargs(t) && expr_eq(head(e), head(t)); }

std::vector<ExprP> list_items(const ExprP& l, bool& proper) {
    std::vector<ExprP> out;
    ExprP cur = l;
    proper = false;
    while (true) {
        if (cur->kind == ExprKind::Sym && *cur->name == "[]") {
            proper = true;
            return out;
        }
        if (is_app(cur) && nargs(cur) == 2 && head(cur)->kind == ExprKind::Sym && *head(cur)->name == ":") {
            auto as = args(cur);
            out.push_back(as[0]);
            cur = as[1];
            continue;
        }
        return out;
    }
}

bool is_totality(const Atom& a) {
    return a.is_eq() && is_var(a.args[0]) && is_var(a.args[1]) && a.args[0]->id == a.args[1]->id;
}

}  // namespace

// ---------------------------------------------------------------- printing

std::string show(const Production& p) { return show(p.lhs) + " -> " + show(p.rhs); }

std::string show_goal(const Goal& g) {
    std::ostringstream os;
    os << join(g.P) << " □ " << join(g.C) << " □ " << join(g.M) << " □ " << join(g.H);
    if (!g.sH.empty()) os << " " << show(g.sH);
    os << " □ " << join(g.F.residual()) << " □ " << join(g.R);
    return os.str();
}

std::string format_trace(const TraceRecord& r, TraceLevel level) {
    std::ostringstream os;
    os << r.step << '\t' << r.rule << '\t' << r.selected;
    if (!r.detail.empty()) os << " => " << r.detail;
    os << '\t' << "P=" << r.sizes[0] << " C=" << r.sizes[1] << " M=" << r.sizes[2] << " H=" << r.sizes[3]
       << " F=" << r.sizes[4] << " R=" << r.sizes[5];
    if (level == TraceLevel::Full) os << '\t' << r.goal;
    return os.str();
}

std::string show_subst(const Answer& a) {
    std::string s = "{";
    bool first = true;
    for (const auto& v : a.vars) {
        const ExprP* b = a.subst.lookup(v->id);
        if (!b) continue;
        if (!first) s += ", ";
        first = false;
        s += show(v) + " -> " + show(*b);
    }
    return s + "}";
}

std::string show(const Answer& a, bool show_totality) {
    std::string s = show_subst(a);
    std::vector<Atom> res;
    for (const auto* st : {&a.m, &a.h, &a.f, &a.r})
        for (const auto& x : *st)
            if (show_totality || !is_totality(x)) res.push_back(x);
    if (!res.empty()) s += " {" + join(res) + "}";
    if (!a.pending.empty()) s += " pending {" + join(a.pending) + "}";
    if (a.unsafe_h) s += " [unsafe: H13]";
    if (a.opaque_dc) s += " [warning: opaque decomposition]";
    return s;
}

// ---------------------------------------------------------------- goal queries

Goal initial_goal(const ParsedGoal& pg) {
    Goal g;
    g.C = pg.constraints;
    return g;
}

std::set<VarId> pvar(const Goal& g) {
    std::set<VarId> out;
    for (const auto& p : g.P) collect_vars(p.rhs, out);
    return out;
}

std::set<VarId> odvar(const Goal& g) {
    std::set<VarId> od = vars_of(g.M);
    for (const auto& a : g.H) {
        auto o = odvar(a);
        od.insert(o.begin(), o.end());
    }
    auto fv = g.F.vars();
    od.insert(fv.begin(), fv.end());
    for (const auto& a : g.R) collect_vars(a, od);
    // primitive atoms waiting in the pool demand what they will demand in a store
    for (const auto& a : g.C) {
        if (!a.is_prim() || !a.primitive_args() || !is_pattern(a.result)) continue;
        auto o = odvar(a);
        od.insert(o.begin(), o.end());
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& p : g.P) {
            ExprP h = head(p.lhs);
            if (!is_var(h) || nargs(p.lhs) == 0 || od.count(h->id)) continue;
            if (!is_var(p.rhs) || od.count(p.rhs->id)) {
                od.insert(h->id);
                grew = true;
            }
        }
    }
    return od;
}

// ---------------------------------------------------------------- engine

struct Engine::Ctx {
    Engine& eng;
    const Program& prog;
    const Config& cfg;
    std::set<VarId> goal_vars;

    // (…)@_D σ′: apply everywhere, compose into σ_D, star the other stores
    bool propagate(Goal& g, const Subst& s, Dom src) {
        if (s.empty()) return true;
        std::set<VarId> dom = s.vdom();
        for (auto& p : g.P) {
            p.lhs = apply_subst(p.lhs, s);
            p.rhs = apply_subst(p.rhs, s);
        }
        for (auto& a : g.C) a = apply_subst(a, s);
        if (apply_atoms(g.M, s, dom)) g.dirty_m = true;
        apply_atoms(g.H, s, dom);
        if (apply_atoms(g.R, s, dom)) g.dirty_r = true;
        if (src != Dom::F) {
            bool changed = false;
            if (!g.F.absorb(s, changed)) return false;
            if (changed) g.dirty_f = true;
        }
        g.sM = src == Dom::M ? compose(g.sM, s) : star(g.sM, s);
        g.sH = src == Dom::H ? compose(g.sH, s) : star(g.sH, s);
        g.sR = src == Dom::R ? compose(g.sR, s) : star(g.sR, s);
        for (auto v : dom) g.U.erase(v);
        // a binding may have made an M or R atom ground and false
        for (const auto* st : {&g.M, &g.H, &g.R})
            for (const auto& a : *st)
                if (a.kind == Atom::Kind::False) return false;
        return true;
    }

    bool occurs_elsewhere(const Goal& g, VarId x, std::size_t skip) const {
        if (goal_vars.count(x)) return true;
        for (std::size_t i = 0; i < g.P.size(); ++i) {
            if (i == skip) continue;
            if (occurs(x, g.P[i].lhs) || occurs(x, g.P[i].rhs)) return true;
        }
        auto in = [&](const std::vector<Atom>& as) {
            for (const auto& a : as) {
                for (const auto& e : a.args)
                    if (occurs(x, e)) return true;
                if (a.is_prim() && occurs(x, a.result)) return true;
            }
            return false;
        };
        if (in(g.C) || in(g.M) || in(g.H) || in(g.R)) return true;
        return g.F.vars().count(x) != 0;
    }

    // fresh variant of a program rule
    Rule variant(const Rule& r) const {
        std::map<VarId, ExprP> vs;
        for (const auto& e : r.lhs) collect_vars(e, vs);
        collect_vars(r.rhs, vs);
        for (const auto& a : r.cond) collect_vars(a, vs);
        Subst s;
        for (const auto& [id, v] : vs) s.bind(v, fresh_like(v));
        Rule out = r;
        for (auto& e : out.lhs) e = apply_subst(e, s);
        out.rhs = apply_subst(out.rhs, s);
        for (auto& a : out.cond) a = apply_subst(a, s);
        return out;
    }

    // ------------------------------------------------------------ narrowing

    enum class PRule { None, DC, CF, SP, IM, EL, DF, PC };

    PRule classify(const Goal& g, std::size_t i, const std::set<VarId>& od, bool force) const {
        const ExprP& e = g.P[i].lhs;
        const ExprP& t = g.P[i].rhs;
        bool demanded = true;
        if (is_var(t)) {
            if (is_pattern(e)) return PRule::SP;
            if (!occurs_elsewhere(g, t->id, i)) return PRule::EL;
            demanded = force || od.count(t->id);
        } else if (is_var(e)) {
            return PRule::SP;
        }
        ExprP h = head(e);
        if (is_var(h) || e->kind == ExprKind::Bottom) return PRule::None;
        if (is_passive(e)) {
            if (!is_var(t)) return same_root(e, t) ? PRule::DC : PRule::CF;
            return demanded ? PRule::IM : PRule::None;
        }
        if (!demanded) return PRule::None;
        if (h->kind == ExprKind::Sym && h->skind == SymKind::Defined) {
            const FunDef* f = prog.fun(*h->name);
            if (f && nargs(e) >= f->arity) return PRule::DF;
            return PRule::None;
        }
        if (auto p = as_prim(h); p && nargs(e) == prim_info(*p).arity) return PRule::PC;
        return PRule::None;
    }

    StepOutcome apply_production(Goal& g, std::size_t i, PRule rule, bool forced) {
        StepOutcome out;
        Production pr = g.P[i];
        std::string sel = show(pr);
        const std::string tag = forced ? " (forced)" : "";
        auto erase_i = [&](Goal& x) { x.P.erase(x.P.begin() + static_cast<long>(i)); };
        switch (rule) {
            case PRule::DC: {
                auto ea = args(pr.lhs), ta = args(pr.rhs);
                std::vector<Production> ps;
                for (std::size_t k = 0; k < ea.size(); ++k) ps.push_back({ea[k], ta[k]});
                if (!ea.empty() && head(pr.lhs)->kind == ExprKind::Sym &&
                    is_opaque(prog, head(pr.lhs), static_cast<int>(ea.size())))
                    g.opaque_dc = true;
                erase_i(g);
                g.P.insert(g.P.begin() + static_cast<long>(i), ps.begin(), ps.end());
                eng.record(g, "DC", sel);
                return out;
            }
            case PRule::CF:
                eng.record(g, "CF", sel);
                out.kind = StepOutcome::Kind::Fail;
                return out;
            case PRule::SP: {
                Subst s;
                if (is_var(pr.lhs) && !is_var(pr.rhs)) {
                    s.bind(pr.lhs, pr.rhs);
                } else {
                    s.bind(pr.rhs, pr.lhs);
                    g.U.erase(pr.rhs->id);
                }
                erase_i(g);
                eng.record(g, "SP", sel, show(s));
                if (!propagate(g, s, Dom::H)) out.kind = StepOutcome::Kind::Fail;
                return out;
            }
            case PRule::EL:
                erase_i(g);
                g.U.erase(pr.rhs->id);
                eng.record(g, "EL", sel);
                return out;
            case PRule::IM: {
                auto ea = args(pr.lhs);
                std::vector<ExprP> xs;
                std::vector<Production> ps;
                for (const auto& a : ea) {
                    ExprP x = mk_fresh_var("X", tag_of(prog, a));
                    xs.push_back(x);
                    g.U.insert(x->id);
                    ps.push_back({a, x});
                }
                Subst s;
                s.bind(pr.rhs, mk_apps(head(pr.lhs), xs));
                g.U.erase(pr.rhs->id);
                erase_i(g);
                g.P.insert(g.P.begin() + static_cast<long>(i), ps.begin(), ps.end());
                eng.record(g, "IM" + tag, sel, show(s));
                if (!propagate(g, s, Dom::None)) out.kind = StepOutcome::Kind::Fail;
                return out;
            }
            case PRule::PC: {
                ExprP h = head(pr.lhs);
                Atom a = Atom::make(*as_prim(h), args(pr.lhs), pr.rhs);
                erase_i(g);
                g.C.insert(g.C.begin(), a);
                eng.record(g, "PC" + tag, sel);
                return out;
            }
            case PRule::DF: {
                ExprP h = head(pr.lhs);
                const FunDef* f = prog.fun(*h->name);
                auto ea = args(pr.lhs);
                std::vector<Goal> alts;
                for (const auto& r0 : f->rules) {
                    Rule r = variant(r0);
                    Goal ng = (f->rules.size() == 1) ? std::move(g) : g;
                    std::vector<Production> ps;
                    std::set<VarId> rv;
                    for (const auto& e : r.lhs) collect_vars(e, rv);
                    collect_vars(r.rhs, rv);
                    for (const auto& c : r.cond) collect_vars(c, rv);
                    ng.U.insert(rv.begin(), rv.end());
                    for (int k = 0; k < f->arity; ++k) ps.push_back({ea[static_cast<std::size_t>(k)], r.lhs[static_cast<std::size_t>(k)]});
                    if (static_cast<int>(ea.size()) == f->arity) {
                        ps.push_back({r.rhs, pr.rhs});
                    } else {
                        ExprP x = mk_fresh_var("F");
                        ng.U.insert(x->id);
                        ps.push_back({r.rhs, x});
                        std::vector<ExprP> rest(ea.begin() + f->arity, ea.end());
                        ps.push_back({mk_apps(x, rest), pr.rhs});
                    }
                    ng.P.erase(ng.P.begin() + static_cast<long>(i));
                    ng.P.insert(ng.P.begin() + static_cast<long>(i), ps.begin(), ps.end());
                    ng.C.insert(ng.C.begin(), r.cond.begin(), r.cond.end());
                    alts.push_back(std::move(ng));
                    if (f->rules.size() == 1) break;
                }
                eng.record(alts.empty() ? g : alts.front(), "DF_" + f->name + tag, sel,
                           std::to_string(f->rules.size()) + " rule(s)");
                if (alts.empty()) {
                    out.kind = StepOutcome::Kind::Fail;
                } else if (alts.size() == 1) {
                    g = std::move(alts.front());
                } else {
                    out.kind = StepOutcome::Kind::Branch;
                    out.alternatives = std::move(alts);
                }
                return out;
            }
            case PRule::None:
                break;
        }
        throw EngineError("internal: no rule for production " + sel);
    }

    // FC: flatten the leftmost pool constraint
    void flatten(Goal& g) {
        Atom a = g.C.front();
        std::string sel = show(a);
        std::vector<Production> ps;
        for (auto& x : a.args) {
            if (is_pattern(x)) continue;
            ExprP v = mk_fresh_var("V", tag_of(prog, x));
            g.U.insert(v->id);
            ps.push_back({x, v});
            x = v;
        }
        g.C.front() = a;
        g.P.insert(g.P.begin(), ps.begin(), ps.end());
        eng.record(g, "FC", sel);
    }

    // ------------------------------------------------------------ pool routing

    bool post_f(Goal& g, const Atom& a) {
        if (!is_fd_atom(a)) throw EngineError("internal: not an FD constraint: " + show(a));
        g.dirty_f = true;
        Subst before = g.F.sigma();
        if (!g.F.post(a)) return false;
        return propagate(g, new_bindings(before, g.F.sigma()), Dom::F);
    }

    StepOutcome submit(Goal& g) {
        StepOutcome out;
        Atom a = g.C.front();
        std::string sel = show(a);
        auto fail = [&](const std::string& why) {
            eng.record(g, "SF", sel, why);
            out.kind = StepOutcome::Kind::Fail;
            return out;
        };
        if (a.kind == Atom::Kind::True) {
            g.C.erase(g.C.begin());
            return out;
        }
        if (a.kind == Atom::Kind::False) return fail("false");
        if (is_m_atom(a)) {
            g.C.erase(g.C.begin());
            add_atoms(g.M, {a});
            g.dirty_m = true;
            eng.record(g, "SC(i)", sel);
            return out;
        }
        bool ext = is_extended_herbrand(a);
        Specific sp = ext ? infer_specific(g.M, a) : Specific::Neither;
        bool to_fd = (is_proper_fd(a) && !ext) || sp == Specific::FD;
        bool to_r = (is_proper_r(a) && !ext) || sp == Specific::R;
        if (to_fd) {
            if (cfg.projections) {
                auto pr = fd_to_r(a, bridges_of(g.M));
                if (!pr.new_bridges.empty()) {
                    for (const auto& b : pr.new_bridges) collect_vars(b, g.U);
                    add_atoms(g.M, pr.new_bridges);
                    g.dirty_m = true;
                    eng.record(g, "SB", sel, join(pr.new_bridges));
                }
                if (!pr.projected.empty()) {
                    add_atoms(g.R, pr.projected);
                    g.dirty_r = true;
                    eng.record(g, "PP", sel, "R: " + join(pr.projected));
                }
            }
            g.C.erase(g.C.begin());
            if (a.prim == Prim::Labeling) {
                bool proper = false;
                for (const auto& x : list_items(a.args[1], proper))
                    if (x->kind == ExprKind::Int) ++eng.counters_.label_choices;
            }
            bool ok = post_f(g, a);
            eng.record(g, "SC(iii)", sel);
            if (!ok) return fail("FD");
            return out;
        }
        if (to_r) {
            if (cfg.projections) {
                auto pr = r_to_fd(a, bridges_of(g.M));
                if (!pr.new_bridges.empty()) {
                    for (const auto& b : pr.new_bridges) collect_vars(b, g.U);
                    add_atoms(g.M, pr.new_bridges);
                    g.dirty_m = true;
                    eng.record(g, "SB", sel, join(pr.new_bridges));
                }
                if (!pr.projected.empty()) {
                    bool ok = true;
                    for (const auto& p : pr.projected) ok = ok && post_f(g, p);
                    eng.record(g, "PP", sel, "FD: " + join(pr.projected));
                    if (!ok) return fail("FD");
                }
            }
            g.C.erase(g.C.begin());
            add_atoms(g.R, {a});
            g.dirty_r = true;
            eng.record(g, "SC(iv)", sel);
            return out;
        }
        if (ext) {
            g.C.erase(g.C.begin());
            add_atoms(g.H, {a});
            eng.record(g, "SC(ii)", sel);
            return out;
        }
        throw EngineError("internal: constraint fits no store: " + sel);
    }

    // ------------------------------------------------------------ solvers

    bool commit_label(Goal& g) {
        auto [v, val] = *g.pending_label;
        g.pending_label.reset();
        ++eng.counters_.label_choices;
        Subst before = g.F.sigma();
        bool ok = g.F.assign(v, val);
        eng.record(g, "FS", "labeling", show(v) + " = " + std::to_string(val));
        if (!ok) return false;
        g.dirty_f = true;
        return propagate(g, new_bindings(before, g.F.sigma()), Dom::F);
    }

    template <class Branches, class Apply>
    StepOutcome fan_out(Goal& g, Branches&& bs, Apply&& apply) {
        StepOutcome out;
        if (bs.empty()) {
            out.kind = StepOutcome::Kind::Fail;
            return out;
        }
        if (bs.size() == 1) {
            if (!apply(g, bs.front())) out.kind = StepOutcome::Kind::Fail;
            return out;
        }
        out.kind = StepOutcome::Kind::Branch;
        for (auto& b : bs) {
            Goal ng = g;
            if (apply(ng, b)) out.alternatives.push_back(std::move(ng));
        }
        if (out.alternatives.empty()) out.kind = StepOutcome::Kind::Fail;
        return out;
    }

    // step 2; nullopt when no solver rule applies
    std::optional<StepOutcome> solvers(Goal& g) {
        StepOutcome out;
        if (auto inf = ie_rule(g.M); inf || (inf = id_rule(g.M, cfg.epsilon))) {
            std::string sel = show(g.M[inf->drop]);
            g.M.erase(g.M.begin() + static_cast<long>(inf->drop));
            std::string det;
            bool ok = true;
            if (inf->to_f) {
                det = "FD: " + show(*inf->to_f);
                ok = post_f(g, *inf->to_f);
            }
            if (inf->to_r) {
                det = "R: " + show(*inf->to_r);
                add_atoms(g.R, {*inf->to_r});
                g.dirty_r = true;
            }
            eng.record(g, inf->rule, sel, det);
            if (!ok) out.kind = StepOutcome::Kind::Fail;
            return out;
        }
        std::set<VarId> pv = pvar(g);
        if (!g.M.empty() && !is_solved_m(g.M, cfg.epsilon) && !meets(pv, vars_of(g.M))) {
            ++eng.counters_.solver_calls;
            auto bs = solve_m(g.M, cfg.epsilon);
            std::string sel = join(g.M);
            if (bs.empty()) {
                eng.record(g, "SF", sel, "M");
                out.kind = StepOutcome::Kind::Fail;
                return out;
            }
            eng.record(g, "MS", sel, std::to_string(bs.size()) + " alternative(s)");
            g.dirty_m = false;
            return fan_out(g, bs, [&](Goal& x, MBranch& b) {
                x.M = b.atoms;
                return propagate(x, b.sigma, Dom::M);
            });
        }
        g.dirty_m = false;
        if (!g.H.empty()) {
            std::set<VarId> odh;
            for (const auto& a : g.H) {
                auto o = odvar(a);
                odh.insert(o.begin(), o.end());
            }
            if (!meets(pv, odh)) {
                std::set<VarId> chi;
                for (auto v : vars_of(g.H))
                    if (pv.count(v)) chi.insert(v);
                if (!is_solved_h(prog, g.H, chi)) {
                    ++eng.counters_.solver_calls;
                    std::string sel = join(g.H);
                    auto res = solve_h(prog, g.H, chi);
                    if (res.flags.h13_used) g.unsafe_h = true;
                    if (res.flags.opaque_decomposition_used) g.opaque_dc = true;
                    if (res.stores.empty()) {
                        eng.record(g, "SF", sel, "H");
                        out.kind = StepOutcome::Kind::Fail;
                        return out;
                    }
                    eng.record(g, "HS", sel, std::to_string(res.stores.size()) + " alternative(s)");
                    return fan_out(g, res.stores, [&](Goal& x, HStore& s) {
                        x.H = s.atoms;
                        if (s.flags.h13_used) x.unsafe_h = true;
                        if (s.flags.opaque_decomposition_used) x.opaque_dc = true;
                        return propagate(x, s.sigma, Dom::H);
                    });
                }
            }
        }
        if (g.dirty_r && !meets(pv, vars_of(g.R))) {
            ++eng.counters_.solver_calls;
            std::string sel = join(g.R);
            RStore rs;
            bool ok = rs.post_all(g.R) && rs.solve();
            if (!ok) {
                eng.record(g, "SF", sel, "R");
                out.kind = StepOutcome::Kind::Fail;
                return out;
            }
            g.R = rs.residual();
            g.dirty_r = false;
            eng.record(g, "RS", sel, show(rs.sigma()));
            if (!propagate(g, rs.sigma(), Dom::R)) out.kind = StepOutcome::Kind::Fail;
            return out;
        }
        if (g.dirty_f && !meets(pv, g.F.vars())) {
            ++eng.counters_.solver_calls;
            Subst before = g.F.sigma();
            bool ok = g.F.propagate();
            if (!ok) {
                eng.record(g, "SF", "FD store", "FD");
                out.kind = StepOutcome::Kind::Fail;
                return out;
            }
            Subst s = new_bindings(before, g.F.sigma());
            g.dirty_f = false;
            std::optional<LabelPick> pick;
            try {
                pick = g.F.next_label(cfg.labeling);
            } catch (const FDError& e) {
                std::string d = e.what();
                if (std::find(g.diagnostics.begin(), g.diagnostics.end(), d) == g.diagnostics.end())
                    g.diagnostics.push_back(d);
            }
            std::string det = show(s);
            if (pick) {
                det += " label " + show(pick->var) + " in {" + std::to_string(pick->values.size()) + " value(s)}";
                g.dirty_f = true;
            }
            eng.record(g, "FS", "FD store", det);
            if (!propagate(g, s, Dom::F)) {
                out.kind = StepOutcome::Kind::Fail;
                return out;
            }
            if (!pick) return out;
            std::vector<std::int64_t> vals = pick->values;
            if (vals.empty()) {
                out.kind = StepOutcome::Kind::Fail;
                return out;
            }
            if (vals.size() == 1) {
                g.pending_label = std::make_pair(pick->var, vals.front());
                if (!commit_label(g)) out.kind = StepOutcome::Kind::Fail;
                return out;
            }
            out.kind = StepOutcome::Kind::Branch;
            for (auto v : vals) {
                Goal ng = g;
                ng.pending_label = std::make_pair(pick->var, v);
                out.alternatives.push_back(std::move(ng));
            }
            return out;
        }
        return std::nullopt;
    }
};

Engine::Engine(const Program& prog, const ParsedGoal& goal, Config cfg)
    : prog_(prog), goal_(goal), cfg_(std::move(cfg)) {
    // fresh names restart per goal (REPL and batch print the same text), above
    // any "_k" suffix the goal already carries
    std::uint64_t from = 1;
    for (const auto& v : goal_.vars) {
        const std::string& n = *v->name;
        auto us = n.rfind('_');
        if (us != std::string::npos && us + 1 < n.size() && n.size() - us < 19 &&
            n.find_first_not_of("0123456789", us + 1) == std::string::npos)
            from = std::max<std::uint64_t>(from, std::stoull(n.substr(us + 1)) + 1);
    }
    reset_fresh_names(from);
    stack_.push_back(initial_goal(goal_));
}

void Engine::record(const Goal& g, const std::string& rule, const std::string& selected, const std::string& detail) {
    ++counters_.steps;
    if (counters_.steps > cfg_.max_steps)
        throw EngineError("step limit exceeded (" + std::to_string(cfg_.max_steps) + ")");
    if (cfg_.trace == TraceLevel::Off && !sink_) return;
    TraceRecord r;
    r.step = counters_.steps;
    r.rule = rule;
    r.selected = selected;
    r.detail = detail;
    r.sizes = {g.P.size(), g.C.size(), g.M.size(), g.H.size(), g.F.residual().size(), g.R.size()};
    if (cfg_.trace == TraceLevel::Full) r.goal = show_goal(g);
    if (sink_) sink_(r);
    if (cfg_.trace != TraceLevel::Off) trace_.push_back(std::move(r));
}

StepOutcome Engine::step(Goal& g) {
    Ctx cx{*this, prog_, cfg_, {}};
    for (const auto& v : goal_.vars) cx.goal_vars.insert(v->id);

    if (g.pending_label) {
        StepOutcome out;
        if (!cx.commit_label(g)) out.kind = StepOutcome::Kind::Fail;
        return out;
    }
    // 1. leftmost processable production
    if (!g.P.empty()) {
        auto od = odvar(g);
        for (std::size_t i = 0; i < g.P.size(); ++i) {
            auto r = cx.classify(g, i, od, false);
            if (r != Ctx::PRule::None) return cx.apply_production(g, i, r, false);
        }
    }
    // 2. solvers on unsolved stores free of produced variables
    if (auto o = cx.solvers(g)) return std::move(*o);
    // 3. leftmost pool constraint
    if (!g.C.empty()) {
        const Atom& a = g.C.front();
        if (a.is_prim() && (!a.primitive_args() || !is_pattern(a.result))) {
            cx.flatten(g);
            return {};
        }
        return cx.submit(g);
    }
    // nothing applies: solved, or only suspensions are left
    StepOutcome out;
    if (g.P.empty()) {
        out.kind = StepOutcome::Kind::Solved;
        return out;
    }
    auto od = odvar(g);
    for (std::size_t i = 0; i < g.P.size(); ++i) {
        auto r = cx.classify(g, i, od, true);
        if (r != Ctx::PRule::None) return cx.apply_production(g, i, r, true);
    }
    out.kind = StepOutcome::Kind::Solved;  // stuck on flexible productions
    return out;
}

Answer Engine::make_answer(const Goal& g) const {
    Answer a;
    a.vars = goal_.vars;
    for (const auto& v : goal_.vars) {
        const ExprP* b = nullptr;
        for (const Subst* s : {&g.sM, &g.sH, &g.F.sigma(), &g.sR})
            if ((b = s->lookup(v->id))) break;
        if (b) a.subst.bind(v, *b);
    }
    // residual constraints connected to the goal variables
    std::vector<std::pair<int, Atom>> all;
    for (const auto& x : g.M) all.emplace_back(0, x);
    for (const auto& x : g.H) all.emplace_back(1, x);
    for (const auto& x : g.F.residual()) all.emplace_back(2, x);
    for (const auto& x : g.R) all.emplace_back(3, x);
    std::set<VarId> rel;
    for (const auto& v : goal_.vars) {
        const ExprP* b = a.subst.lookup(v->id);
        if (b)
            collect_vars(*b, rel);
        else
            rel.insert(v->id);
    }
    std::vector<bool> keep(all.size(), false);
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (keep[i]) continue;
            std::set<VarId> vs;
            collect_vars(all[i].second, vs);
            if (vs.empty() || meets(vs, rel)) {
                keep[i] = true;
                rel.insert(vs.begin(), vs.end());
                grew = true;
            }
        }
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!keep[i]) continue;
        auto& dst = all[i].first == 0 ? a.m : all[i].first == 1 ? a.h : all[i].first == 2 ? a.f : a.r;
        dst.push_back(all[i].second);
    }
    for (const auto& p : g.P) a.pending.push_back(p);
    a.unsafe_h = g.unsafe_h;
    a.opaque_dc = g.opaque_dc;
    a.diagnostics = g.diagnostics;
    if (!a.pending.empty()) a.diagnostics.push_back("goal stuck on productions with flexible heads");
    return a;
}

std::optional<Answer> Engine::next() {
    while (!stack_.empty()) {
        Goal g = std::move(stack_.back());
        stack_.pop_back();
        while (true) {
            StepOutcome o = step(g);
            if (o.kind == StepOutcome::Kind::Progress) continue;
            if (o.kind == StepOutcome::Kind::Fail) break;
            if (o.kind == StepOutcome::Kind::Solved) {
                ++counters_.answers;
                return make_answer(g);
            }
            for (auto it = o.alternatives.rbegin(); it != o.alternatives.rend(); ++it)
                stack_.push_back(std::move(*it));
            break;
        }
    }
    return std::nullopt;
}

std::vector<Answer> Engine::solve() {
    std::vector<Answer> out;
    while (cfg_.max_answers == 0 || out.size() < cfg_.max_answers) {
        auto a = next();
        if (!a) break;
        out.push_back(std::move(*a));
    }
    return out;
}

std::vector<Answer> solve_goal(const Program& prog, const std::string& goal_text, const Config& cfg,
                               Counters* counters) {
    ParsedGoal g = parse_goal(prog, goal_text);
    check_goal(prog, g);
    Engine e(prog, g, cfg);
    auto out = e.solve();
    if (counters) *counters = e.counters();
    return out;
}

// ---------------------------------------------------------------- answer checking

namespace {

// Innermost evaluation of rules and primitives, independent of the narrowing
// machinery. Conditions are solved by delaying atoms until their arguments
// can be evaluated; free variables get bound by == / #== / arithmetic results
// or enumerated from domain/belongs lists; leftovers are sampled.
struct Checker {
    explicit Checker(const Program& p) : prog(p) {}

    const Program& prog;
    std::size_t budget = 20000000;
    bool sampled = false;
    int depth = 0;
    std::string why;
    static constexpr std::size_t kMaxResults = 4096;

    void tick() {
        if (budget == 0) throw EngineError("answer check: evaluation budget exhausted");
        --budget;
    }

    using Vals = std::optional<std::vector<ExprP>>;  // nullopt: needs an unbound variable

    static Subst extend(const Subst& th, const ExprP& v, const ExprP& t) {
        Subst s;
        s.bind(v, t);
        return compose(th, s);
    }

    bool unify(ExprP a, ExprP b, Subst& th) {
        tick();
        a = apply_subst(a, th);
        b = apply_subst(b, th);
        if (is_var(a) && is_var(b) && a->id == b->id) return true;
        if (is_var(a)) {
            if (occurs(a->id, b)) return false;
            th = extend(th, a, b);
            return true;
        }
        if (is_var(b)) return unify(b, a, th);
        if (is_numeric(a) && is_numeric(b)) return *numeric_value(a) == *numeric_value(b);
        if (!is_app(a) || !is_app(b)) return expr_eq(a, b);
        if (nargs(a) != nargs(b) || !expr_eq(head(a), head(b))) return false;
        auto xs = args(a), ys = args(b);
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (!unify(xs[i], ys[i], th)) return false;
        return true;
    }

    // one-way matching of a rule pattern (rule variables only) against a value
    bool match(const ExprP& p, const ExprP& v, Subst& th) {
        if (is_var(p)) {
            if (const ExprP* b = th.lookup(p->id)) return ground_eq(*b, v);
            th.bind(p, v);
            return true;
        }
        if (is_numeric(p)) return is_numeric(v) && *numeric_value(p) == *numeric_value(v);
        if (!is_app(p)) return !is_app(v) && expr_eq(p, v);
        if (!is_app(v) || nargs(p) != nargs(v) || !expr_eq(head(p), head(v))) return false;
        auto ps = args(p), vs = args(v);
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (!match(ps[i], vs[i], th)) return false;
        return true;
    }

    static bool ground_eq(const ExprP& a, const ExprP& b) {
        if (is_numeric(a) && is_numeric(b)) return *numeric_value(a) == *numeric_value(b);
        if (!is_app(a) || !is_app(b)) return expr_eq(a, b);
        if (nargs(a) != nargs(b) || !expr_eq(head(a), head(b))) return false;
        auto xs = args(a), ys = args(b);
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (!ground_eq(xs[i], ys[i])) return false;
        return true;
    }

    static std::optional<std::vector<ExprP>> ground_list(const ExprP& l) {
        bool proper = false;
        auto xs = list_items(l, proper);
        if (!proper) return std::nullopt;
        return xs;
    }

    // value of a saturated primitive on ground arguments; empty = undefined
    std::vector<ExprP> prim_value(Prim p, const std::vector<ExprP>& a) {
        auto num = [&](std::size_t i) { return *numeric_value(a[i]); };
        auto iv = [&](std::size_t i) { return a[i]->ival; };
        switch (p) {
            case Prim::Eq: return {mk_bool(ground_eq(a[0], a[1]))};
            case Prim::SEq: return {mk_bool(num(0) == num(1))};
            case Prim::RAdd: return {mk_real(num(0) + num(1))};
            case Prim::RSub: return {mk_real(num(0) - num(1))};
            case Prim::RMul: return {mk_real(num(0) * num(1))};
            case Prim::RDiv:
                if (num(1) == 0) return {};
                return {mk_real(num(0) / num(1))};
            case Prim::RLe: return {mk_bool(num(0) <= num(1))};
            case Prim::FAdd: return {mk_int(iv(0) + iv(1))};
            case Prim::FSub: return {mk_int(iv(0) - iv(1))};
            case Prim::FMul: return {mk_int(iv(0) * iv(1))};
            case Prim::FDiv:
                if (iv(1) == 0) return {};
                return {mk_int(iv(0) / iv(1))};
            case Prim::FLe: return {mk_bool(iv(0) <= iv(1))};
            case Prim::Domain: {
                auto xs = ground_list(a[0]);
                if (!xs) return {};
                bool ok = iv(1) <= iv(2);
                for (const auto& x : *xs) ok = ok && iv(1) <= x->ival && x->ival <= iv(2);
                return {mk_bool(ok)};
            }
            case Prim::Belongs: {
                auto xs = ground_list(a[1]);
                if (!xs) return {};
                bool in = false;
                for (const auto& x : *xs) in = in || x->ival == iv(0);
                return {mk_bool(in)};
            }
            case Prim::Labeling: return {mk_bool(true)};
        }
        return {};
    }

    Vals eval(const ExprP& e0, const Subst& th) {
        tick();
        ExprP e = apply_subst(e0, th);
        if (e->kind == ExprKind::Bottom) return std::vector<ExprP>{};
        if (!is_app(e)) {
            if (e->kind == ExprKind::Sym && e->skind == SymKind::Defined) {
                const FunDef* f = prog.fun(*e->name);
                if (f && f->arity == 0) return call(*f, {});
            }
            return std::vector<ExprP>{e};
        }
        ExprP h = head(e);
        if (is_var(h)) return std::nullopt;
        auto as = args(e);
        std::vector<std::vector<ExprP>> vals;
        for (const auto& a : as) {
            auto v = eval(a, Subst());
            if (!v) return std::nullopt;
            if (v->empty()) return std::vector<ExprP>{};
            vals.push_back(std::move(*v));
        }
        std::vector<ExprP> out;
        std::vector<ExprP> cur(as.size());
        bool stuck = false;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (stuck || out.size() >= kMaxResults) return;
            if (i < as.size()) {
                for (const auto& v : vals[i]) {
                    cur[i] = v;
                    rec(i + 1);
                }
                return;
            }
            auto r = apply_head(h, cur);
            if (!r) {
                stuck = true;
                return;
            }
            out.insert(out.end(), r->begin(), r->end());
        };
        rec(0);
        if (stuck) return std::nullopt;
        return out;
    }

    Vals apply_head(const ExprP& h, const std::vector<ExprP>& vs) {
        int n = static_cast<int>(vs.size());
        if (h->kind != ExprKind::Sym) return std::vector<ExprP>{mk_apps(h, vs)};
        if (auto p = as_prim(h)) {
            int ar = prim_info(*p).arity;
            if (n < ar) return std::vector<ExprP>{mk_apps(h, vs)};
            for (const auto& v : vs)
                if (!is_ground(v)) return std::nullopt;
            return prim_value(*p, vs);
        }
        if (h->skind != SymKind::Defined) return std::vector<ExprP>{mk_apps(h, vs)};
        const FunDef* f = prog.fun(*h->name);
        if (!f) throw EngineError("answer check: unknown function " + *h->name);
        if (n < f->arity) return std::vector<ExprP>{mk_apps(h, vs)};
        for (const auto& v : vs)
            if (!is_ground(v)) return std::nullopt;
        std::vector<ExprP> first(vs.begin(), vs.begin() + f->arity);
        auto rs = call(*f, first);
        if (!rs || n == f->arity) return rs;
        std::vector<ExprP> rest(vs.begin() + f->arity, vs.end());
        std::vector<ExprP> out;
        for (const auto& r : *rs) {
            auto more = eval(mk_apps(r, rest), Subst());
            if (!more) return std::nullopt;
            out.insert(out.end(), more->begin(), more->end());
        }
        return out;
    }

    Vals call(const FunDef& f, const std::vector<ExprP>& vs) {
        if (++depth > 400) throw EngineError("answer check: recursion too deep in " + f.name);
        std::vector<ExprP> out;
        bool stuck = false;
        for (const auto& r : f.rules) {
            Subst th;
            bool ok = true;
            for (std::size_t i = 0; ok && i < vs.size(); ++i) ok = match(r.lhs[i], vs[i], th);
            if (!ok) continue;
            std::vector<Subst> sols;
            conds(r.cond, th, sols, false);
            for (const auto& s : sols) {
                auto v = eval(r.rhs, s);
                if (!v) {
                    stuck = true;
                    continue;
                }
                for (const auto& x : *v)
                    if (std::none_of(out.begin(), out.end(), [&](const ExprP& y) { return ground_eq(x, y); }))
                        out.push_back(x);
            }
        }
        --depth;
        if (stuck && out.empty()) return std::nullopt;
        return out;
    }

    struct Try {
        bool stuck = false;
        bool keep = false;  // atom not yet decided; stays pending
        std::vector<Subst> succ;
    };

    Try try_atom(const Atom& a0, const Subst& th) {
        Try t;
        if (a0.kind == Atom::Kind::True) {
            t.succ.push_back(th);
            return t;
        }
        if (a0.kind == Atom::Kind::False) return t;
        Atom a = apply_subst(a0, th);
        std::vector<std::vector<ExprP>> vals;
        for (const auto& x : a.args) {
            auto v = eval(x, Subst());
            if (!v) {
                t.stuck = true;
                return t;
            }
            vals.push_back(std::move(*v));
        }
        std::vector<ExprP> cur(a.args.size());
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i < cur.size()) {
                for (const auto& v : vals[i]) {
                    cur[i] = v;
                    rec(i + 1);
                }
                return;
            }
            decide(a, cur, th, t);
        };
        rec(0);
        return t;
    }

    void decide(const Atom& a, const std::vector<ExprP>& v, const Subst& th, Try& t) {
        bool ground = std::all_of(v.begin(), v.end(), [](const ExprP& x) { return is_ground(x); });
        if (ground) {
            for (const auto& r : prim_value(a.prim, v)) {
                Subst s = th;
                if (unify(a.result, r, s)) t.succ.push_back(s);
            }
            return;
        }
        bool pos = a.result_is(true);
        switch (a.prim) {
            case Prim::Eq:
                if (pos) {
                    Subst s = th;
                    if (unify(v[0], v[1], s)) t.succ.push_back(s);
                    return;
                }
                break;
            case Prim::SEq:
                if (pos) {
                    if (is_var(v[0]) && is_numeric(v[1])) {
                        Rat r = *numeric_value(v[1]);
                        if (r.get_den() == 1 && r.get_num().fits_slong_p())
                            t.succ.push_back(extend(th, v[0], mk_int(r.get_num().get_si())));
                        return;
                    }
                    if (is_numeric(v[0]) && is_var(v[1])) {
                        t.succ.push_back(extend(th, v[1], mk_real(*numeric_value(v[0]))));
                        return;
                    }
                }
                break;
            case Prim::Domain:
            case Prim::Belongs: {
                bool dom = a.prim == Prim::Domain;
                auto xs = ground_list(dom ? v[0] : v[1]);
                ExprP x;
                if (dom) {
                    if (!xs || !is_ground(v[1]) || !is_ground(v[2]) || !pos) break;
                    for (const auto& e : *xs)
                        if (is_var(e)) {
                            x = e;
                            break;
                        }
                    if (!x || v[2]->ival - v[1]->ival > 100000) break;
                    for (auto k = v[1]->ival; k <= v[2]->ival; ++k) t.succ.push_back(extend(th, x, mk_int(k)));
                } else {
                    if (!xs || !is_var(v[0]) || !pos) break;
                    for (const auto& e : *xs)
                        if (e->kind == ExprKind::Int) t.succ.push_back(extend(th, v[0], e));
                }
                t.keep = true;
                return;
            }
            default:
                break;
        }
        t.stuck = true;
    }

    std::vector<ExprP> samples(BaseType tag) {
        std::vector<ExprP> out;
        switch (tag) {
            case BaseType::Bool:
                out = {mk_bool(false), mk_bool(true)};
                break;
            case BaseType::Real:
                for (int k = -20; k <= 20; ++k) out.push_back(mk_real(Rat(k, 2)));
                break;
            default:
                for (int k = -10; k <= 10; ++k) out.push_back(mk_int(k));
        }
        return out;
    }

    // all solutions of the atoms (bounded); sample=false inside rule bodies
    // still samples, but the flag records it
    void conds(std::vector<Atom> pending, const Subst& th, std::vector<Subst>& out, bool top) {
        tick();
        if (out.size() >= kMaxResults) return;
        if (pending.empty()) {
            out.push_back(th);
            return;
        }
        for (std::size_t i = 0; i < pending.size(); ++i) {
            Try t = try_atom(pending[i], th);
            if (t.stuck) continue;
            std::vector<Atom> rest = pending;
            if (!t.keep) rest.erase(rest.begin() + static_cast<long>(i));
            for (const auto& s : t.succ) conds(rest, s, out, top);
            return;
        }
        std::map<VarId, ExprP> vs;
        for (const auto& a : pending) collect_vars(apply_subst(a, th), vs);
        if (vs.empty()) {
            why = "cannot evaluate: " + show(apply_subst(pending.front(), th));
            return;
        }
        sampled = true;
        const ExprP& x = vs.begin()->second;
        for (const auto& c : samples(x->tag)) conds(pending, extend(th, x, c), out, top);
    }
};

}  // namespace

bool check_substitution(const Program& prog, const ParsedGoal& initial, const Subst& s, std::string* report) {
    Answer a;
    a.vars = initial.vars;
    a.subst = s;
    return check_answer(prog, initial, a, report);
}

bool check_answer(const Program& prog, const ParsedGoal& initial, const Answer& answer, std::string* report) {
    Checker ck{prog};
    Subst th;
    for (const auto& v : initial.vars)
        if (const ExprP* b = answer.subst.lookup(v->id)) th.bind(v, *b);
    // instances of the answer: solve its residual constraints, then ground the
    // remaining goal variables
    std::vector<Atom> residual;
    for (const auto* st : {&answer.m, &answer.h, &answer.f, &answer.r})
        residual.insert(residual.end(), st->begin(), st->end());
    std::vector<Subst> inst;
    try {
        ck.conds(residual, th, inst, true);
    } catch (const EngineError& e) {
        if (report) *report = e.what();
        return false;
    }
    std::vector<Subst> grounded;
    for (const auto& s : inst) {
        std::vector<Subst> layer{s};
        for (const auto& v : initial.vars) {
            std::vector<Subst> next;
            for (const auto& l : layer) {
                if (!is_var(apply_subst(v, l))) {
                    next.push_back(l);
                    continue;
                }
                ck.sampled = true;
                for (const auto& c : ck.samples(v->tag)) next.push_back(Checker::extend(l, v, c));
            }
            layer = std::move(next);
            if (layer.size() > 64) layer.resize(64);
        }
        grounded.insert(grounded.end(), layer.begin(), layer.end());
        if (grounded.size() >= 64) break;
    }
    std::size_t checked = 0;
    for (const auto& s : grounded) {
        std::vector<Subst> sols;
        try {
            ck.conds(initial.constraints, s, sols, true);
        } catch (const EngineError& e) {
            if (report) *report = e.what();
            return false;
        }
        if (sols.empty()) {
            if (report) {
                *report = "goal fails for instance {";
                bool first = true;
                for (const auto& v : initial.vars) {
                    *report += (first ? "" : ", ") + show(v) + " -> " + show(apply_subst(v, s));
                    first = false;
                }
                *report += "}";
                if (!ck.why.empty()) *report += " (" + ck.why + ")";
            }
            return false;
        }
        ++checked;
    }
    if (report) {
        *report = "ok: " + std::to_string(checked) + " instance(s) checked";
        if (checked == 0) *report += " (no instance of the residual found on the sample grid)";
        if (ck.sampled) *report += ", sampled";
    }
    return true;
}

}  // namespace cclnc
