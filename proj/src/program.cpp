#include "cclnc/program.hpp"

#include <sstream>

namespace cclnc {

TypeP tcon(const std::string& name, std::vector<TypeP> args) {
    auto t = std::make_shared<Type>();
    t->kind = Type::Kind::Con;
    t->name = name;
    t->args = std::move(args);
    return t;
}

TypeP tvar(const std::string& name) {
    auto t = std::make_shared<Type>();
    t->kind = Type::Kind::Var;
    t->name = name;
    return t;
}

TypeP tfun(TypeP a, TypeP b) { return tcon("->", {std::move(a), std::move(b)}); }

TypeP tfun(const std::vector<TypeP>& as, TypeP res) {
    for (auto it = as.rbegin(); it != as.rend(); ++it) res = tfun(*it, res);
    return res;
}

TypeP t_int() {
    static const TypeP t = tcon("int");
    return t;
}
TypeP t_real() {
    static const TypeP t = tcon("real");
    return t;
}
TypeP t_bool() {
    static const TypeP t = tcon("bool");
    return t;
}

namespace {
void show_type(std::ostringstream& os, const TypeP& t, int prec) {
    if (t->kind == Type::Kind::Var) {
        if (!t->name.empty())
            os << t->name;
        else
            os << (t->numeric ? "N" : "T") << t->id;
        return;
    }
    if (t->name == "->") {
        if (prec > 0) os << "(";
        show_type(os, t->args[0], 1);
        os << " -> ";
        show_type(os, t->args[1], 0);
        if (prec > 0) os << ")";
        return;
    }
    if (t->name == "list") {
        os << "[";
        show_type(os, t->args[0], 0);
        os << "]";
        return;
    }
    if (t->name.rfind("tup", 0) == 0 && t->args.size() >= 2) {
        os << "(";
        for (std::size_t i = 0; i < t->args.size(); ++i) {
            if (i) os << ", ";
            show_type(os, t->args[i], 0);
        }
        os << ")";
        return;
    }
    if (t->args.empty()) {
        os << t->name;
        return;
    }
    if (prec > 1) os << "(";
    os << t->name;
    for (const auto& a : t->args) {
        os << " ";
        show_type(os, a, 2);
    }
    if (prec > 1) os << ")";
}
}  // namespace

std::string show(const TypeP& t) {
    std::ostringstream os;
    show_type(os, t, 0);
    return os.str();
}

std::string show_atomic(const TypeP& t) {
    std::ostringstream os;
    show_type(os, t, 2);
    return os.str();
}

Program::Program() {
    DataDecl list{"list", {"A"}, {{"[]", {}}, {":", {tvar("A"), tcon("list", {tvar("A")})}}}, true};
    DataDecl label{"labelType", {}, {{"naiveOrder", {}}, {"ff", {}}}, true};
    for (auto* d : {&list, &label}) {
        for (const auto& c : d->cons)
            constructors[c.name] = ConInfo{c.name, static_cast<int>(c.args.size()), d->name, d->params, c.args};
        datas.push_back(*d);
    }
}

const FunDef* Program::fun(const std::string& name) const {
    auto it = funs.find(name);
    return it == funs.end() ? nullptr : &it->second;
}

const ConInfo* Program::con(const std::string& name) const {
    auto it = constructors.find(name);
    if (it != constructors.end()) return &it->second;
    if (name.size() > 3 && name.rfind("tup", 0) == 0 &&
        name.find_first_not_of("0123456789", 3) == std::string::npos) {
        auto jt = tuples_.find(name);
        if (jt != tuples_.end()) return &jt->second;
        int n = std::stoi(name.substr(3));
        ConInfo ci;
        ci.name = name;
        ci.arity = n;
        ci.datatype = name;
        for (int i = 0; i < n; ++i) {
            std::string p = "T" + std::to_string(i + 1);
            ci.params.push_back(p);
            ci.args.push_back(tvar(p));
        }
        return &tuples_.emplace(name, ci).first->second;
    }
    return nullptr;
}

const DataDecl* Program::data(const std::string& name) const {
    for (const auto& d : datas)
        if (d.name == name) return &d;
    return nullptr;
}

const AliasDecl* Program::alias(const std::string& name) const {
    for (const auto& a : aliases)
        if (a.name == name) return &a;
    return nullptr;
}

std::vector<ExprP> Program::sibling_constructors(const ExprP& c) const {
    std::vector<ExprP> out;
    const ConInfo* ci = con(*c->name);
    if (!ci) return out;
    const DataDecl* d = data(ci->datatype);
    if (!d) return out;
    for (const auto& k : d->cons)
        if (k.name != ci->name) out.push_back(mk_sym(SymKind::Constructor, k.name, static_cast<int>(k.args.size())));
    return out;
}

ExprP Program::fun_sym(const std::string& name) const {
    const FunDef* f = fun(name);
    return mk_sym(SymKind::Defined, name, f ? f->arity : 0);
}

ExprP Program::con_sym(const std::string& name) const {
    const ConInfo* c = con(name);
    return mk_sym(SymKind::Constructor, name, c ? c->arity : 0);
}

}  // namespace cclnc
