#include "cclnc/parser.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace cclnc {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Var, Ident, Int, Real, Op, End, Eof };

struct Token {
    Tok kind;
    std::string text;
    SourceLoc loc;
};

const char* kOps[] = {"#/==", "#==", "#<=", "#>=", "->!", "<==", "#<", "#>", "#+", "#-", "#*", "#/",
                      "->",   "<=",  ">=",  "==",  "/=",  ":-",  "::", "<",  ">",  "+",  "-",  "*",
                      "/",    ":",   "=",   "|",   ",",   "(",   ")",  "[",  "]"};

class Lexer {
public:
    Lexer(const std::string& text, std::string file) : s_(text), file_(std::move(file)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip();
            SourceLoc loc{line_, col_};
            if (i_ >= s_.size()) {
                out.push_back({Tok::Eof, "", loc});
                return out;
            }
            char c = s_[i_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i_;
                while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
                bool real = j + 1 < s_.size() && s_[j] == '.' && std::isdigit(static_cast<unsigned char>(s_[j + 1]));
                if (real) {
                    ++j;
                    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
                }
                out.push_back({real ? Tok::Real : Tok::Int, s_.substr(i_, j - i_), loc});
                advance(j - i_);
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i_;
                while (j < s_.size() &&
                       (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '\''))
                    ++j;
                std::string w = s_.substr(i_, j - i_);
                bool upper = std::isupper(static_cast<unsigned char>(c)) || c == '_';
                out.push_back({upper ? Tok::Var : Tok::Ident, w, loc});
                advance(j - i_);
                continue;
            }
            if (c == '.') {
                out.push_back({Tok::End, ".", loc});
                advance(1);
                continue;
            }
            bool found = false;
            for (const char* op : kOps) {
                std::size_t n = std::char_traits<char>::length(op);
                if (s_.compare(i_, n, op) == 0) {
                    out.push_back({Tok::Op, op, loc});
                    advance(n);
                    found = true;
                    break;
                }
            }
            if (!found) throw SyntaxError(file_, loc, std::string("unexpected character '") + c + "'");
        }
    }

private:
    void advance(std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i_) {
            if (s_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }
    void skip() {
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (c == '%') {
                while (i_ < s_.size() && s_[i_] != '\n') advance(1);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else {
                break;
            }
        }
    }
    const std::string& s_;
    std::string file_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------- raw syntax

struct Raw;
using RawP = std::shared_ptr<Raw>;
struct Raw {
    enum class K { Var, Ident, Int, Real, App, List, Tuple, BinOp, OpSym, Paren } k;
    std::string text;
    SourceLoc loc;
    std::vector<RawP> kids;
    RawP tail;  // List tail
};

RawP raw(Raw::K k, std::string text, SourceLoc loc, std::vector<RawP> kids = {}) {
    auto r = std::make_shared<Raw>();
    r->k = k;
    r->text = std::move(text);
    r->loc = loc;
    r->kids = std::move(kids);
    return r;
}

struct RawCond {
    RawP expr;
    RawP result;  // explicit ->! result, may be null
    SourceLoc loc;
};

struct RawRule {
    std::string fun;
    std::vector<RawP> lhs;
    RawP rhs;  // null for clauses
    std::vector<RawCond> conds;
    SourceLoc loc;
};

const std::set<std::string> kCmpOps = {"==", "/=", "<=", "<", ">", ">=", "#==", "#/==", "#<=", "#<", "#>", "#>="};

class Parser {
public:
    Parser(std::vector<Token> toks, std::string file) : t_(std::move(toks)), file_(std::move(file)) {}

    const Token& peek(std::size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
    bool at_op(const char* op, std::size_t k = 0) const { return peek(k).kind == Tok::Op && peek(k).text == op; }
    bool at_eof() const { return peek().kind == Tok::Eof; }
    bool at_end() const { return peek().kind == Tok::End; }
    Token next() { return t_[std::min(p_++, t_.size() - 1)]; }
    [[noreturn]] void fail(const std::string& msg, SourceLoc loc) { throw SyntaxError(file_, loc, msg); }
    [[noreturn]] void fail(const std::string& msg) { fail(msg, peek().loc); }
    void expect_op(const char* op) {
        if (!at_op(op)) fail(std::string("expected '") + op + "'" + found());
        next();
    }
    void expect_end() {
        if (!at_end()) fail("expected '.'" + found());
        next();
    }
    std::string found() const {
        if (peek().kind == Tok::Eof) return " but found end of input";
        return " but found '" + peek().text + "'";
    }

    // ---- types
    TypeP type() {
        TypeP a = btype();
        if (at_op("->")) {
            next();
            return tfun(a, type());
        }
        return a;
    }
    bool starts_atype() const {
        const Token& k = peek();
        return k.kind == Tok::Var || k.kind == Tok::Ident || (k.kind == Tok::Op && (k.text == "(" || k.text == "["));
    }
    TypeP btype() {
        if (peek().kind == Tok::Ident) {
            std::string n = next().text;
            std::vector<TypeP> as;
            while (starts_atype()) as.push_back(atype());
            return tcon(n, std::move(as));
        }
        return atype();
    }
    TypeP atype() {
        const Token& k = peek();
        if (k.kind == Tok::Var) return tvar(next().text);
        if (k.kind == Tok::Ident) return tcon(next().text);
        if (at_op("[")) {
            next();
            TypeP e = type();
            expect_op("]");
            return tcon("list", {e});
        }
        if (at_op("(")) {
            next();
            std::vector<TypeP> items{type()};
            while (at_op(",")) {
                next();
                items.push_back(type());
            }
            expect_op(")");
            if (items.size() == 1) return items[0];
            return tcon("tup" + std::to_string(items.size()), items);
        }
        fail("expected a type" + found());
    }

    // ---- expressions
    RawP cmp_expr() {
        RawP a = cons_expr();
        if (peek().kind == Tok::Op && kCmpOps.count(peek().text)) {
            Token op = next();
            RawP b = cons_expr();
            if (peek().kind == Tok::Op && kCmpOps.count(peek().text)) fail("comparison operators are non-associative");
            return raw(Raw::K::BinOp, op.text, op.loc, {a, b});
        }
        return a;
    }
    RawP cons_expr() {
        RawP a = add_expr();
        if (at_op(":")) {
            Token op = next();
            RawP b = cons_expr();
            return raw(Raw::K::BinOp, ":", op.loc, {a, b});
        }
        return a;
    }
    RawP add_expr() {
        RawP a = mul_expr();
        while (at_op("+") || at_op("-") || at_op("#+") || at_op("#-")) {
            Token op = next();
            a = raw(Raw::K::BinOp, op.text, op.loc, {a, mul_expr()});
        }
        return a;
    }
    RawP mul_expr() {
        RawP a = app_expr();
        while (at_op("*") || at_op("/") || at_op("#*") || at_op("#/")) {
            Token op = next();
            a = raw(Raw::K::BinOp, op.text, op.loc, {a, app_expr()});
        }
        return a;
    }
    bool starts_primary() const {
        const Token& k = peek();
        if (k.kind == Tok::Var || k.kind == Tok::Ident || k.kind == Tok::Int || k.kind == Tok::Real) return true;
        return k.kind == Tok::Op && (k.text == "(" || k.text == "[");
    }
    RawP app_expr() {
        if (!starts_primary() && !(at_op("-") && (peek(1).kind == Tok::Int || peek(1).kind == Tok::Real)))
            fail("expected an expression" + found());
        RawP f = primary();
        std::vector<RawP> as;
        while (starts_primary()) as.push_back(primary());
        if (as.empty()) return f;
        as.insert(as.begin(), f);
        return raw(Raw::K::App, "", f->loc, std::move(as));
    }
    RawP primary() {
        Token k = peek();
        if (at_op("-")) {
            next();
            Token n = next();
            return raw(n.kind == Tok::Int ? Raw::K::Int : Raw::K::Real, "-" + n.text, k.loc);
        }
        switch (k.kind) {
            case Tok::Var: next(); return raw(Raw::K::Var, k.text, k.loc);
            case Tok::Ident: next(); return raw(Raw::K::Ident, k.text, k.loc);
            case Tok::Int: next(); return raw(Raw::K::Int, k.text, k.loc);
            case Tok::Real: next(); return raw(Raw::K::Real, k.text, k.loc);
            default: break;
        }
        if (at_op("(")) {
            next();
            // operator section
            if (peek().kind == Tok::Op && peek(1).kind == Tok::Op && peek(1).text == ")" && peek().text != "(" &&
                peek().text != "[") {
                Token op = next();
                next();
                return raw(Raw::K::OpSym, op.text, op.loc);
            }
            std::vector<RawP> items{cmp_expr()};
            while (at_op(",")) {
                next();
                items.push_back(cmp_expr());
            }
            expect_op(")");
            if (items.size() == 1) return raw(Raw::K::Paren, "", k.loc, {items[0]});
            return raw(Raw::K::Tuple, "", k.loc, std::move(items));
        }
        if (at_op("[")) {
            next();
            auto r = raw(Raw::K::List, "", k.loc);
            if (at_op("]")) {
                next();
                return r;
            }
            r->kids.push_back(cmp_expr());
            while (at_op(",")) {
                next();
                r->kids.push_back(cmp_expr());
            }
            if (at_op("|")) {
                next();
                r->tail = cmp_expr();
            }
            expect_op("]");
            return r;
        }
        fail("expected an expression" + found());
    }

    RawCond condition() {
        RawCond c;
        c.loc = peek().loc;
        c.expr = cmp_expr();
        if (at_op("->!")) {
            next();
            c.result = cons_expr();
        }
        return c;
    }
    std::vector<RawCond> conditions() {
        std::vector<RawCond> cs{condition()};
        while (at_op(",")) {
            next();
            cs.push_back(condition());
        }
        return cs;
    }

    std::vector<Token> t_;
    std::size_t p_ = 0;
    std::string file_;
};

// ---------------------------------------------------------------- resolution

class Resolver {
public:
    Resolver(const Program& prog, std::string file) : prog_(prog), file_(std::move(file)) {}

    std::map<std::string, ExprP> scope;
    std::vector<ExprP> order;

    [[noreturn]] void fail(const std::string& msg, SourceLoc loc) { throw SyntaxError(file_, loc, msg); }

    ExprP var(const std::string& name) {
        if (name == "_") {
            ExprP v = mk_var("_");
            order.push_back(v);
            return v;
        }
        auto it = scope.find(name);
        if (it != scope.end()) return it->second;
        ExprP v = mk_var(name);
        scope.emplace(name, v);
        order.push_back(v);
        return v;
    }

    ExprP symbol(const std::string& name, SourceLoc loc) {
        if (name == "true") return mk_bool(true);
        if (name == "false") return mk_bool(false);
        if (prog_.con(name)) return prog_.con_sym(name);
        if (prog_.fun(name)) return prog_.fun_sym(name);
        if (auto p = prim_by_name(name)) return prim_sym(*p);
        fail("unknown symbol '" + name + "'", loc);
    }

    static std::optional<Prim> arith_op(const std::string& op) {
        static const std::map<std::string, Prim> m = {
            {"+", Prim::RAdd},  {"-", Prim::RSub},  {"*", Prim::RMul},  {"/", Prim::RDiv},
            {"#+", Prim::FAdd}, {"#-", Prim::FSub}, {"#*", Prim::FMul}, {"#/", Prim::FDiv},
            {"==", Prim::Eq},   {"<=", Prim::RLe},  {"#<=", Prim::FLe}, {"#==", Prim::SEq}};
        auto it = m.find(op);
        if (it == m.end()) return std::nullopt;
        return it->second;
    }

    ExprP conv(const RawP& r) {
        switch (r->k) {
            case Raw::K::Var: return var(r->text);
            case Raw::K::Ident: return symbol(r->text, r->loc);
            case Raw::K::Int: {
                try {
                    return mk_int(std::stoll(r->text));
                } catch (...) {
                    fail("integer literal out of range", r->loc);
                }
            }
            case Raw::K::Real: {
                std::string s = r->text;
                bool neg = s[0] == '-';
                if (neg) s = s.substr(1);
                auto dot = s.find('.');
                std::string digits = s.substr(0, dot) + s.substr(dot + 1);
                mpz_class num(digits, 10), den = 1;
                for (std::size_t k = dot + 1; k < s.size(); ++k) den *= 10;
                Rat q(num, den);
                q.canonicalize();
                return mk_real(neg ? Rat(-q) : q);
            }
            case Raw::K::Paren: return conv(r->kids[0]);
            case Raw::K::App: {
                ExprP f = conv(r->kids[0]);
                for (std::size_t i = 1; i < r->kids.size(); ++i) f = mk_app(f, conv(r->kids[i]));
                return f;
            }
            case Raw::K::List: {
                std::vector<ExprP> xs;
                for (const auto& k : r->kids) xs.push_back(conv(k));
                return mk_list(xs, r->tail ? conv(r->tail) : nullptr);
            }
            case Raw::K::Tuple: {
                std::vector<ExprP> xs;
                for (const auto& k : r->kids) xs.push_back(conv(k));
                return mk_tuple(xs);
            }
            case Raw::K::BinOp: {
                ExprP a = conv(r->kids[0]), b = conv(r->kids[1]);
                if (r->text == ":") return mk_apps(cons_sym(), {a, b});
                if (auto p = arith_op(r->text)) return mk_apps(prim_sym(*p), {a, b});
                fail("operator '" + r->text + "' is only allowed at the top of a condition", r->loc);
            }
            case Raw::K::OpSym: {
                if (r->text == ":") return cons_sym();
                if (auto p = arith_op(r->text)) return prim_sym(*p);
                fail("operator '" + r->text + "' cannot be used as a function", r->loc);
            }
        }
        fail("bad expression", r->loc);
    }

    Atom condition(const RawCond& c) {
        if (c.result) {
            ExprP e = conv(c.expr);
            ExprP res = conv(c.result);
            ExprP h = head(e);
            auto p = as_prim(h);
            if (!p || nargs(e) != prim_info(*p).arity)
                fail("'->!' requires a fully applied primitive on its left", c.loc);
            if (!is_pattern(res)) fail("the result of '->!' must be a pattern", c.loc);
            return Atom::make(*p, args(e), res);
        }
        const RawP& r = c.expr;
        if (r->k == Raw::K::BinOp && kCmpOps.count(r->text)) {
            ExprP a = conv(r->kids[0]), b = conv(r->kids[1]);
            const std::string& op = r->text;
            if (op == "==") return Atom::make(Prim::Eq, {a, b}, mk_bool(true));
            if (op == "/=") return Atom::make(Prim::Eq, {a, b}, mk_bool(false));
            if (op == "#==") return Atom::make(Prim::SEq, {a, b}, mk_bool(true));
            if (op == "#/==") return Atom::make(Prim::SEq, {a, b}, mk_bool(false));
            bool fd = op[0] == '#';
            Prim le = fd ? Prim::FLe : Prim::RLe;
            std::string base = fd ? op.substr(1) : op;
            if (base == "<=") return Atom::make(le, {a, b}, mk_bool(true));
            if (base == "<") return Atom::make(le, {b, a}, mk_bool(false));
            if (base == ">") return Atom::make(le, {a, b}, mk_bool(false));
            if (base == ">=") return Atom::make(le, {b, a}, mk_bool(true));
        }
        ExprP e = conv(r);
        ExprP h = head(e);
        if (auto p = as_prim(h); p && nargs(e) == prim_info(*p).arity) return Atom::make(*p, args(e), mk_bool(true));
        return Atom::make(Prim::Eq, {e, mk_bool(true)}, mk_bool(true));
    }

private:
    const Program& prog_;
    std::string file_;
};

void collect_raw_vars(const RawP& r, std::vector<std::pair<std::string, SourceLoc>>& out) {
    if (!r) return;
    if (r->k == Raw::K::Var && r->text != "_") out.emplace_back(r->text, r->loc);
    for (const auto& k : r->kids) collect_raw_vars(k, out);
    collect_raw_vars(r->tail, out);
}

}  // namespace

// ---------------------------------------------------------------- entry points

Program parse_program(const std::string& text, const std::string& file) {
    Program prog;
    prog.file = file;
    Parser ps(Lexer(text, file).run(), file);
    std::vector<RawRule> rules;
    std::vector<std::pair<std::string, std::pair<TypeP, SourceLoc>>> decls;
    std::set<std::string> reserved = {"data", "type", "true", "false"};

    while (!ps.at_eof()) {
        Token first = ps.peek();
        if (first.kind == Tok::Ident && first.text == "data") {
            ps.next();
            if (ps.peek().kind != Tok::Ident) ps.fail("expected datatype name" + ps.found());
            DataDecl d;
            d.name = ps.next().text;
            while (ps.peek().kind == Tok::Var) d.params.push_back(ps.next().text);
            ps.expect_op("=");
            do {
                if (ps.peek().kind != Tok::Ident) ps.fail("expected constructor name" + ps.found());
                Token cn = ps.next();
                if (reserved.count(cn.text) || prog.con(cn.text) || prim_by_name(cn.text))
                    ps.fail("constructor '" + cn.text + "' already defined", cn.loc);
                ConDecl c{cn.text, {}};
                while (ps.starts_atype()) c.args.push_back(ps.atype());
                d.cons.push_back(c);
                prog.constructors[c.name] =
                    ConInfo{c.name, static_cast<int>(c.args.size()), d.name, d.params, c.args};
                if (ps.at_op("|")) {
                    ps.next();
                    continue;
                }
                break;
            } while (true);
            ps.expect_end();
            prog.datas.push_back(d);
            continue;
        }
        if (first.kind == Tok::Ident && first.text == "type") {
            ps.next();
            if (ps.peek().kind != Tok::Ident) ps.fail("expected type name" + ps.found());
            AliasDecl a;
            a.name = ps.next().text;
            while (ps.peek().kind == Tok::Var) a.params.push_back(ps.next().text);
            ps.expect_op("=");
            a.body = ps.type();
            ps.expect_end();
            prog.aliases.push_back(a);
            continue;
        }
        if (first.kind == Tok::Ident && ps.at_op("::", 1)) {
            ps.next();
            ps.next();
            TypeP t = ps.type();
            ps.expect_end();
            decls.push_back({first.text, {t, first.loc}});
            continue;
        }
        if (first.kind != Tok::Ident) ps.fail("expected a declaration or rule" + ps.found());
        if (reserved.count(first.text)) ps.fail("reserved word '" + first.text + "' cannot head a rule");
        RawRule rr;
        rr.loc = first.loc;
        rr.fun = ps.next().text;
        while (ps.starts_primary()) rr.lhs.push_back(ps.primary());
        if (ps.at_op(":-")) {
            ps.next();
            rr.conds = ps.conditions();
        } else if (ps.at_op("=") || ps.at_op("->")) {
            ps.next();
            rr.rhs = ps.cmp_expr();
            if (ps.at_op("<==")) {
                ps.next();
                rr.conds = ps.conditions();
            }
        } else {
            ps.fail("expected '=', '->' or ':-'" + ps.found());
        }
        ps.expect_end();
        rules.push_back(std::move(rr));
    }

    // register functions
    for (const auto& r : rules) {
        if (prog.con(r.fun) || prim_by_name(r.fun))
            throw SyntaxError(file, r.loc, "cannot define rules for constructor/primitive '" + r.fun + "'");
        auto it = prog.funs.find(r.fun);
        if (it == prog.funs.end()) {
            FunDef f;
            f.name = r.fun;
            f.arity = static_cast<int>(r.lhs.size());
            prog.funs.emplace(r.fun, f);
            prog.fun_order.push_back(r.fun);
        } else if (it->second.arity != static_cast<int>(r.lhs.size())) {
            throw SyntaxError(file, r.loc,
                              "rule for '" + r.fun + "' has " + std::to_string(r.lhs.size()) +
                                  " arguments, expected " + std::to_string(it->second.arity));
        }
    }
    for (const auto& [name, td] : decls) {
        auto it = prog.funs.find(name);
        if (it == prog.funs.end()) throw SyntaxError(file, td.second, "type declaration for '" + name + "' without rules");
        if (it->second.declared) throw SyntaxError(file, td.second, "duplicate type declaration for '" + name + "'");
        it->second.declared = td.first;
        it->second.decl_loc = td.second;
    }

    for (const auto& rr : rules) {
        std::vector<std::pair<std::string, SourceLoc>> hv;
        for (const auto& p : rr.lhs) collect_raw_vars(p, hv);
        std::set<std::string> seen;
        for (const auto& [n, loc] : hv)
            if (!seen.insert(n).second)
                throw SyntaxError(file, loc, "non-linear left-hand side: variable " + n + " repeated");
        Resolver res(prog, file);
        Rule rule;
        rule.fun = rr.fun;
        rule.loc = rr.loc;
        for (const auto& p : rr.lhs) {
            ExprP e = res.conv(p);
            if (!is_pattern(e)) throw SyntaxError(file, p->loc, "left-hand side argument is not a pattern: " + show(e));
            rule.lhs.push_back(e);
        }
        rule.rhs = rr.rhs ? res.conv(rr.rhs) : mk_bool(true);
        for (const auto& c : rr.conds) rule.cond.push_back(res.condition(c));
        prog.funs[rr.fun].rules.push_back(std::move(rule));
    }
    return prog;
}

ParsedGoal parse_goal(const Program& prog, const std::string& text, const std::string& file) {
    Parser ps(Lexer(text, file).run(), file);
    if (ps.at_eof()) ps.fail("empty goal");
    auto conds = ps.conditions();
    if (ps.at_end()) ps.next();
    if (!ps.at_eof()) ps.fail("unexpected input after goal" + ps.found());
    Resolver res(prog, file);
    ParsedGoal g;
    g.text = text;
    for (const auto& c : conds) g.constraints.push_back(res.condition(c));
    for (const auto& v : res.order)
        if (*v->name != "_") g.vars.push_back(v);
    return g;
}

// ---------------------------------------------------------------- printing

std::string print_condition(const Atom& a) { return show(a); }

std::string print_rule(const Rule& r) {
    std::ostringstream os;
    os << r.fun;
    for (const auto& p : r.lhs) os << " " << show_prec(p, 10);
    os << " = " << show(r.rhs);
    if (!r.cond.empty()) {
        os << " <== ";
        for (std::size_t i = 0; i < r.cond.size(); ++i) {
            if (i) os << ", ";
            os << print_condition(r.cond[i]);
        }
    }
    os << ".";
    return os.str();
}

std::string print_program(const Program& prog) {
    std::ostringstream os;
    for (const auto& d : prog.datas) {
        if (d.builtin) continue;
        os << "data " << d.name;
        for (const auto& p : d.params) os << " " << p;
        os << " =";
        for (std::size_t i = 0; i < d.cons.size(); ++i) {
            os << (i ? " | " : " ") << d.cons[i].name;
            for (const auto& t : d.cons[i].args) os << " " << show_atomic(t);
        }
        os << ".\n";
    }
    for (const auto& a : prog.aliases) {
        os << "type " << a.name;
        for (const auto& p : a.params) os << " " << p;
        os << " = " << show(a.body) << ".\n";
    }
    for (const auto& name : prog.fun_order) {
        const FunDef& f = prog.funs.at(name);
        if (f.declared) os << name << " :: " << show(f.declared) << ".\n";
        for (const auto& r : f.rules) os << print_rule(r) << "\n";
    }
    return os.str();
}

}  // namespace cclnc
