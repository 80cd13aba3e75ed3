#include "cclnc/typing.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace cclnc {

namespace {

TypeP list_of(TypeP t) { return tcon("list", {std::move(t)}); }

TypeP prim_type(Prim p) {
    TypeP a = tvar("A");
    switch (p) {
        case Prim::Eq: return tfun({a, a}, t_bool());
        case Prim::SEq: return tfun({t_int(), t_real()}, t_bool());
        case Prim::RAdd: case Prim::RSub: case Prim::RMul: case Prim::RDiv:
            return tfun({t_real(), t_real()}, t_real());
        case Prim::RLe: return tfun({t_real(), t_real()}, t_bool());
        case Prim::FAdd: case Prim::FSub: case Prim::FMul: case Prim::FDiv:
            return tfun({t_int(), t_int()}, t_int());
        case Prim::FLe: return tfun({t_int(), t_int()}, t_bool());
        case Prim::Domain: return tfun({list_of(t_int()), t_int(), t_int()}, t_bool());
        case Prim::Belongs: return tfun({t_int(), list_of(t_int())}, t_bool());
        case Prim::Labeling: return tfun({list_of(tcon("labelType")), list_of(t_int())}, t_bool());
    }
    return a;
}

void tvars_of(const TypeP& t, std::set<std::string>& out) {
    if (t->kind == Type::Kind::Var) {
        out.insert(t->name.empty() ? "#" + std::to_string(t->id) : t->name);
        return;
    }
    for (const auto& a : t->args) tvars_of(a, out);
}

struct Clash {
    std::string msg;
};

class Unifier {
public:
    TypeP fresh(bool numeric = false) {
        auto t = std::make_shared<Type>();
        t->kind = Type::Kind::Var;
        t->id = next_++;
        t->numeric = numeric;
        return t;
    }

    TypeP resolve(const TypeP& t) const {
        TypeP cur = t;
        while (cur->kind == Type::Kind::Var && cur->id >= 0) {
            auto it = bind_.find(cur->id);
            if (it == bind_.end()) break;
            cur = it->second;
        }
        return cur;
    }

    TypeP zonk(const TypeP& t) const {
        TypeP r = resolve(t);
        if (r->kind == Type::Kind::Var) return r;
        if (r->args.empty()) return r;
        std::vector<TypeP> as;
        for (const auto& a : r->args) as.push_back(zonk(a));
        return tcon(r->name, as);
    }

    bool occurs(int id, const TypeP& t) const {
        TypeP r = resolve(t);
        if (r->kind == Type::Kind::Var) return r->id == id;
        for (const auto& a : r->args)
            if (occurs(id, a)) return true;
        return false;
    }

    void unify(const TypeP& x, const TypeP& y) {
        TypeP a = resolve(x), b = resolve(y);
        if (a == b) return;
        if (a->kind == Type::Kind::Var && b->kind == Type::Kind::Var && a->id >= 0 && b->id >= 0) {
            if (a->id == b->id) return;
            if (a->numeric && !b->numeric) std::swap(a, b);
            // b absorbs a; keep the numeric restriction
            if (a->numeric && !b->numeric) {
                auto nb = fresh(true);
                bind_[b->id] = nb;
                bind_[a->id] = nb;
                return;
            }
            bind_[a->id] = b;
            return;
        }
        if (a->kind == Type::Kind::Var && a->id >= 0) return bind_var(a, b);
        if (b->kind == Type::Kind::Var && b->id >= 0) return bind_var(b, a);
        if (a->kind == Type::Kind::Var || b->kind == Type::Kind::Var) {
            // rigid (skolem) variables
            if (a->kind == b->kind && a->name == b->name) return;
            throw Clash{"cannot match " + show(zonk(a)) + " with " + show(zonk(b))};
        }
        if (a->name != b->name || a->args.size() != b->args.size())
            throw Clash{"cannot match " + show(zonk(a)) + " with " + show(zonk(b))};
        for (std::size_t i = 0; i < a->args.size(); ++i) unify(a->args[i], b->args[i]);
    }

    bool is_numeric_var(const TypeP& t) const {
        TypeP r = resolve(t);
        return r->kind == Type::Kind::Var && r->numeric;
    }

private:
    void bind_var(const TypeP& v, const TypeP& t) {
        if (v->numeric) {
            if (t->kind != Type::Kind::Con || (t->name != "int" && t->name != "real"))
                throw Clash{"numeric literal used at type " + show(zonk(t))};
        }
        if (occurs(v->id, t)) throw Clash{"infinite type " + show(zonk(t))};
        bind_[v->id] = t;
    }

    int next_ = 0;
    std::map<int, TypeP> bind_;
};

// rename free inference variables to A, B, C, ...
TypeP generalize(const Unifier& u, const TypeP& t) {
    std::map<int, std::string> names;
    std::function<TypeP(const TypeP&)> go = [&](const TypeP& x) -> TypeP {
        TypeP r = u.resolve(x);
        if (r->kind == Type::Kind::Var) {
            if (r->id < 0) return r;
            if (r->numeric) return t_int();  // defaulting
            auto it = names.find(r->id);
            if (it == names.end()) {
                std::size_t k = names.size();
                std::string n = k < 26 ? std::string(1, static_cast<char>('A' + k)) : "T" + std::to_string(k);
                it = names.emplace(r->id, n).first;
            }
            return tvar(it->second);
        }
        std::vector<TypeP> as;
        for (const auto& a : r->args) as.push_back(go(a));
        return tcon(r->name, as);
    };
    return go(t);
}

class Checker {
public:
    Checker(const Program& prog) : prog_(prog) {}

    Unifier u;
    std::map<VarId, TypeP> env;
    std::map<const Expr*, TypeP> literals;  // digit literals -> their type
    std::map<std::string, TypeP> mono;      // undeclared functions during program check

    TypeP instantiate(const TypeP& scheme, bool rigid = false, const std::string& rigid_tag = "") {
        std::map<std::string, TypeP> sub;
        std::function<TypeP(const TypeP&)> go = [&](const TypeP& t) -> TypeP {
            if (t->kind == Type::Kind::Var) {
                auto it = sub.find(t->name);
                if (it != sub.end()) return it->second;
                TypeP nv = rigid ? tvar("'" + t->name + rigid_tag) : u.fresh();
                sub.emplace(t->name, nv);
                return nv;
            }
            if (t->args.empty()) return t;
            std::vector<TypeP> as;
            for (const auto& a : t->args) as.push_back(go(a));
            return tcon(t->name, as);
        };
        return go(scheme);
    }

    TypeP sym_scheme(const ExprP& s) {
        if (s->skind == SymKind::Primitive) {
            auto p = as_prim(s);
            return prim_type(*p);
        }
        if (s->skind == SymKind::Constructor) {
            const ConInfo* c = prog_.con(*s->name);
            if (!c) throw Clash{"unknown constructor " + *s->name};
            std::vector<TypeP> ps;
            for (const auto& p : c->params) ps.push_back(tvar(p));
            std::vector<TypeP> as;
            for (const auto& a : c->args) as.push_back(expand_type(prog_, a));
            return tfun(as, tcon(c->datatype, ps));
        }
        auto it = mono.find(*s->name);
        if (it != mono.end()) return nullptr;
        const FunDef* f = prog_.fun(*s->name);
        if (!f) throw Clash{"unknown function " + *s->name};
        if (f->principal) return f->principal;
        if (f->declared) return expand_type(prog_, f->declared);
        throw Clash{"function " + *s->name + " has no type"};
    }

    TypeP infer(const ExprP& e) {
        switch (e->kind) {
            case ExprKind::Var: {
                auto it = env.find(e->id);
                if (it != env.end()) return it->second;
                TypeP t = u.fresh();
                if (e->tag == BaseType::Int) t = t_int();
                if (e->tag == BaseType::Real) t = t_real();
                if (e->tag == BaseType::Bool) t = t_bool();
                env.emplace(e->id, t);
                return t;
            }
            case ExprKind::Int: {
                TypeP t = u.fresh(true);
                literals[e.get()] = t;
                return t;
            }
            case ExprKind::Real: return t_real();
            case ExprKind::Bool: return t_bool();
            case ExprKind::Bottom: return u.fresh();
            case ExprKind::Sym: {
                auto it = mono.find(*e->name);
                if (e->skind == SymKind::Defined && it != mono.end()) return it->second;
                return instantiate(sym_scheme(e));
            }
            case ExprKind::App: {
                TypeP tf = infer(e->fun);
                TypeP ta = infer(e->arg);
                TypeP r = u.fresh();
                try {
                    u.unify(tf, tfun(ta, r));
                } catch (const Clash& c) {
                    throw Clash{"in '" + show(e) + "': " + c.msg};
                }
                return r;
            }
        }
        return u.fresh();
    }

    void check_atom(const Atom& a) {
        if (!a.is_prim()) return;
        TypeP t = instantiate(prim_type(a.prim));
        std::vector<TypeP> as;
        for (const auto& x : a.args) as.push_back(infer(x));
        TypeP res = infer(a.result);
        try {
            u.unify(t, tfun(as, res));
        } catch (const Clash& c) {
            throw Clash{"in constraint '" + show(a) + "': " + c.msg};
        }
    }

    // rebuild with literal coercion and variable tags
    ExprP elaborate(const ExprP& e) {
        switch (e->kind) {
            case ExprKind::Var: {
                auto it = env.find(e->id);
                if (it == env.end()) return e;
                TypeP t = u.resolve(it->second);
                BaseType tag = BaseType::Unknown;
                if (t->kind == Type::Kind::Con) {
                    if (t->name == "int") tag = BaseType::Int;
                    if (t->name == "real") tag = BaseType::Real;
                    if (t->name == "bool") tag = BaseType::Bool;
                } else if (t->numeric) {
                    tag = BaseType::Int;
                }
                if (tag == e->tag) return e;
                return mk_var_with_id(e->id, e->name, tag);
            }
            case ExprKind::Int: {
                auto it = literals.find(e.get());
                if (it != literals.end()) {
                    TypeP t = u.resolve(it->second);
                    if (t->kind == Type::Kind::Con && t->name == "real") return mk_real(Rat(static_cast<long>(e->ival)));
                }
                return e;
            }
            case ExprKind::App: {
                ExprP f = elaborate(e->fun), a = elaborate(e->arg);
                if (f == e->fun && a == e->arg) return e;
                return mk_app(f, a);
            }
            default: return e;
        }
    }

    Atom elaborate(const Atom& a) {
        if (!a.is_prim()) return a;
        Atom r = a;
        for (auto& x : r.args) x = elaborate(x);
        r.result = elaborate(r.result);
        return r;
    }

private:
    const Program& prog_;
};

}  // namespace

TypeP expand_type(const Program& prog, const TypeP& t) {
    if (t->kind == Type::Kind::Var) return t;
    std::vector<TypeP> as;
    for (const auto& a : t->args) as.push_back(expand_type(prog, a));
    const std::string& n = t->name;
    if (n == "int" || n == "real" || n == "bool" || n == "->") {
        if ((n == "->" && as.size() != 2) || (n != "->" && !as.empty()))
            throw TypeError("type '" + n + "' applied to wrong number of arguments");
        return tcon(n, as);
    }
    if (n.rfind("tup", 0) == 0 && prog.con(n)) return tcon(n, as);
    if (const AliasDecl* al = prog.alias(n)) {
        if (al->params.size() != as.size())
            throw TypeError("type alias '" + n + "' expects " + std::to_string(al->params.size()) + " arguments");
        std::map<std::string, TypeP> sub;
        for (std::size_t i = 0; i < as.size(); ++i) sub[al->params[i]] = as[i];
        std::function<TypeP(const TypeP&)> go = [&](const TypeP& x) -> TypeP {
            if (x->kind == Type::Kind::Var) {
                auto it = sub.find(x->name);
                return it == sub.end() ? x : it->second;
            }
            std::vector<TypeP> ys;
            for (const auto& y : x->args) ys.push_back(go(y));
            return tcon(x->name, ys);
        };
        return expand_type(prog, go(al->body));
    }
    if (const DataDecl* d = prog.data(n)) {
        if (d->params.size() != as.size())
            throw TypeError("datatype '" + n + "' expects " + std::to_string(d->params.size()) + " arguments");
        return tcon(n, as);
    }
    throw TypeError("unknown type '" + n + "'");
}

TypeP symbol_type(const Program& prog, const ExprP& sym) {
    Checker c(prog);
    try {
        return c.sym_scheme(sym);
    } catch (const Clash& k) {
        throw TypeError(k.msg);
    }
}

TypeP infer(const Program& prog, const TypeEnv& env, const ExprP& e) {
    Checker c(prog);
    for (const auto& [k, v] : env) c.env[k] = v;
    try {
        return generalize(c.u, c.infer(e));
    } catch (const Clash& k) {
        throw TypeError(k.msg);
    }
}

bool is_opaque_type(const TypeP& t, int m) {
    std::set<std::string> argv, resv;
    TypeP cur = t;
    for (int i = 0; i < m; ++i) {
        if (cur->kind != Type::Kind::Con || cur->name != "->") return false;
        tvars_of(cur->args[0], argv);
        cur = cur->args[1];
    }
    tvars_of(cur, resv);
    for (const auto& v : argv)
        if (!resv.count(v)) return true;
    return false;
}

bool is_opaque(const Program& prog, const ExprP& h, int m) {
    if (h->kind != ExprKind::Sym) return false;
    try {
        return is_opaque_type(symbol_type(prog, h), m);
    } catch (const TypeError&) {
        return false;
    }
}

std::vector<std::string> check_program(Program& prog) {
    std::vector<std::string> warnings;
    for (const auto& d : prog.datas) {
        for (const auto& c : d.cons)
            for (const auto& a : c.args) {
                TypeP t;
                try {
                    t = expand_type(prog, a);
                } catch (const TypeError& e) {
                    throw TypeError(prog.file, {}, "in datatype '" + d.name + "': " + e.what());
                }
                std::function<bool(const TypeP&)> has_fun = [&](const TypeP& x) {
                    if (x->kind == Type::Kind::Con && x->name == "->") return true;
                    for (const auto& y : x->args)
                        if (has_fun(y)) return true;
                    return false;
                };
                if (has_fun(t)) throw TypeError(prog.file, {}, "datatype '" + d.name + "' contains a function type");
            }
    }
    for (const auto& name : prog.fun_order) {
        FunDef& f = prog.funs[name];
        f.principal = nullptr;
        if (f.declared) {
            try {
                f.principal = expand_type(prog, f.declared);
            } catch (const TypeError& e) {
                throw TypeError(prog.file, f.decl_loc, e.what());
            }
        }
    }

    // undeclared functions share one monomorphic typing pass
    Checker shared(prog);
    for (const auto& name : prog.fun_order)
        if (!prog.funs[name].principal) shared.mono[name] = shared.u.fresh();

    std::map<std::string, std::vector<Rule>> elaborated;
    auto check_rule = [&](Checker& c, const FunDef& f, const Rule& r, TypeP ftype) {
        try {
            TypeP cur = ftype;
            for (const auto& p : r.lhs) {
                TypeP arg = c.u.fresh(), res = c.u.fresh();
                c.u.unify(cur, tfun(arg, res));
                c.u.unify(arg, c.infer(p));
                cur = res;
            }
            c.u.unify(cur, c.infer(r.rhs));
            for (const auto& a : r.cond) c.check_atom(a);
        } catch (const Clash& k) {
            throw TypeError(prog.file, r.loc, "type error in rule for '" + f.name + "': " + k.msg);
        }
    };
    for (const auto& name : prog.fun_order) {
        const FunDef& f = prog.funs[name];
        if (f.principal) continue;
        for (const auto& r : f.rules) check_rule(shared, f, r, shared.mono[name]);
    }
    for (const auto& name : prog.fun_order) {
        FunDef& f = prog.funs[name];
        if (f.principal) continue;
        f.principal = generalize(shared.u, shared.mono[name]);
    }
    for (const auto& name : prog.fun_order) {
        FunDef& f = prog.funs[name];
        std::vector<Rule> out;
        int k = 0;
        for (const auto& r : f.rules) {
            Checker local(prog);
            Checker& c = prog.funs[name].declared ? local : shared;
            if (f.declared) {
                TypeP ft = c.instantiate(f.principal, true, "#" + std::to_string(k++));
                check_rule(c, f, r, ft);
            }
            Rule e = r;
            for (auto& p : e.lhs) p = c.elaborate(p);
            e.rhs = c.elaborate(e.rhs);
            for (auto& a : e.cond) a = c.elaborate(a);
            out.push_back(std::move(e));
        }
        elaborated[name] = std::move(out);
    }
    for (auto& [name, rules] : elaborated) prog.funs[name].rules = std::move(rules);
    return warnings;
}

void check_goal(const Program& prog, ParsedGoal& goal) {
    Checker c(prog);
    try {
        for (const auto& a : goal.constraints) c.check_atom(a);
    } catch (const Clash& k) {
        throw TypeError("<goal>", {1, 1}, "type error in goal: " + k.msg);
    }
    for (auto& a : goal.constraints) a = c.elaborate(a);
    for (auto& v : goal.vars) v = c.elaborate(v);
}

bool types_equal_upto_renaming(const TypeP& a, const TypeP& b) {
    std::map<std::string, std::string> ab, ba;
    std::function<bool(const TypeP&, const TypeP&)> go = [&](const TypeP& x, const TypeP& y) {
        if (x->kind != y->kind) return false;
        if (x->kind == Type::Kind::Var) {
            auto i = ab.emplace(x->name, y->name).first;
            auto j = ba.emplace(y->name, x->name).first;
            return i->second == y->name && j->second == x->name;
        }
        if (x->name != y->name || x->args.size() != y->args.size()) return false;
        for (std::size_t k = 0; k < x->args.size(); ++k)
            if (!go(x->args[k], y->args[k])) return false;
        return true;
    };
    return go(a, b);
}

}  // namespace cclnc
