#include "mtl/formula.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <tuple>
#include <unordered_map>

namespace mtl {

namespace {

struct Key {
    Kind kind;
    std::string name;
    const Node* a;
    const Node* b;
    bool operator==(const Key& o) const {
        return kind == o.kind && a == o.a && b == o.b && name == o.name;
    }
};

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::size_t h = std::hash<std::string>{}(k.name);
        h ^= std::hash<const void*>{}(k.a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<const void*>{}(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::size_t>(k.kind) * 0x100000001b3ULL;
        return h;
    }
};

class InternTable {
public:
    const Node* get(Kind kind, std::string name, const Node* a, const Node* b) {
        std::lock_guard<std::mutex> lock(mu_);
        Key key{kind, name, a, b};
        if (auto it = map_.find(key); it != map_.end()) return it->second;
        Node& n = nodes_.emplace_back();
        n.kind = kind;
        n.name = std::move(name);
        n.a = a;
        n.b = b;
        n.id = static_cast<std::uint32_t>(nodes_.size());
        fill(n);
        map_.emplace(std::move(key), &n);
        return &n;
    }

private:
    static void fill(Node& n) {
        switch (n.kind) {
        case Kind::Top:
        case Kind::Prop:
            n.md = 0;
            n.classical = true;
            break;
        case Kind::MLNeg:
            n.md = n.a->md;
            n.classical = true;
            n.has_strict = n.a->has_strict;
            break;
        case Kind::TeamNeg:
            n.md = n.a->md;
            n.has_strict = n.a->has_strict;
            break;
        case Kind::And:
        case Kind::LaxOr:
            n.md = std::max(n.a->md, n.b->md);
            n.classical = n.a->classical && n.b->classical;
            n.has_strict = n.a->has_strict || n.b->has_strict;
            break;
        case Kind::StrictOr:
            n.md = std::max(n.a->md, n.b->md);
            n.has_strict = true;
            break;
        case Kind::Box:
        case Kind::Dia:
            n.md = n.a->md + 1;
            n.classical = n.a->classical;
            n.has_strict = n.a->has_strict;
            break;
        case Kind::StrictDia:
            n.md = n.a->md + 1;
            n.has_strict = true;
            break;
        }
    }

    std::mutex mu_;
    std::deque<Node> nodes_;
    std::unordered_map<Key, const Node*, KeyHash> map_;
};

InternTable& table() {
    static InternTable t;
    return t;
}

Formula make(Kind k, const Node* a = nullptr, const Node* b = nullptr, std::string name = {}) {
    return Formula(table().get(k, std::move(name), a, b));
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

bool name_less(std::string_view x, std::string_view y) {
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        bool dx = std::isdigit(static_cast<unsigned char>(x[i]));
        bool dy = std::isdigit(static_cast<unsigned char>(y[j]));
        if (dx && dy) {
            std::size_t ie = i, je = j;
            while (ie < x.size() && std::isdigit(static_cast<unsigned char>(x[ie]))) ++ie;
            while (je < y.size() && std::isdigit(static_cast<unsigned char>(y[je]))) ++je;
            std::string_view nx = x.substr(i, ie - i), ny = y.substr(j, je - j);
            while (nx.size() > 1 && nx.front() == '0') nx.remove_prefix(1);
            while (ny.size() > 1 && ny.front() == '0') ny.remove_prefix(1);
            if (nx.size() != ny.size()) return nx.size() < ny.size();
            if (nx != ny) return nx < ny;
            i = ie;
            j = je;
        } else {
            if (x[i] != y[j]) return x[i] < y[j];
            ++i;
            ++j;
        }
    }
    if ((x.size() - i) != (y.size() - j)) return (x.size() - i) < (y.size() - j);
    return x < y;  // tie-break on leading zeros
}

Formula top() { return make(Kind::Top); }

Formula prop(const std::string& name) {
    if (name.empty() || !is_ident_start(name[0])) throw WellFormednessError("bad proposition name '" + name + "'");
    for (char c : name)
        if (!is_ident_char(c)) throw WellFormednessError("bad proposition name '" + name + "'");
    return make(Kind::Prop, nullptr, nullptr, name);
}

Formula ml_neg(Formula f) {
    if (!f.classical()) throw WellFormednessError("ML negation applied to a non-classical subformula");
    return make(Kind::MLNeg, f.node());
}
Formula team_neg(Formula f) { return make(Kind::TeamNeg, f.node()); }
Formula conj(Formula l, Formula r) { return make(Kind::And, l.node(), r.node()); }
Formula lax_or(Formula l, Formula r) { return make(Kind::LaxOr, l.node(), r.node()); }
Formula strict_or(Formula l, Formula r) { return make(Kind::StrictOr, l.node(), r.node()); }
Formula box(Formula f) { return make(Kind::Box, f.node()); }
Formula dia(Formula f) { return make(Kind::Dia, f.node()); }
Formula strict_dia(Formula f) { return make(Kind::StrictDia, f.node()); }

Formula bot() { return ml_neg(top()); }

namespace {
void require_classical(Formula f, const char* what) {
    if (!f.classical()) throw WellFormednessError(std::string(what) + " requires a classical argument");
}
}  // namespace

Formula implies(Formula a, Formula b) {
    require_classical(a, "->");
    require_classical(b, "->");
    return lax_or(ml_neg(a), b);
}

Formula iff(Formula a, Formula b) {
    require_classical(a, "<->");
    require_classical(b, "<->");
    return lax_or(conj(a, b), conj(ml_neg(a), ml_neg(b)));
}

Formula ovee(Formula a, Formula b) { return team_neg(conj(team_neg(a), team_neg(b))); }
Formula team_impl(Formula a, Formula b) { return ovee(team_neg(a), b); }

Formula hook(Formula a, Formula f) {
    require_classical(a, "hook guard");
    return lax_or(ml_neg(a), conj(a, f));
}

Formula exists_point(Formula a) {
    require_classical(a, "E");
    return team_neg(ml_neg(a));
}

Formula dep(const std::vector<Formula>& args) {
    if (args.empty()) throw WellFormednessError("dep needs at least one argument");
    for (Formula a : args) require_classical(a, "dep");
    auto constancy = [](Formula a) { return ovee(a, ml_neg(a)); };
    if (args.size() == 1) return constancy(args[0]);
    std::vector<Formula> premises;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) premises.push_back(constancy(args[i]));
    Formula body = team_impl(conj_all(premises), constancy(args.back()));
    return team_neg(lax_or(top(), team_neg(body)));
}

Formula box_n(Formula f, unsigned n) {
    for (unsigned i = 0; i < n; ++i) f = box(f);
    return f;
}

Formula dia_n(Formula f, unsigned n) {
    for (unsigned i = 0; i < n; ++i) f = dia(f);
    return f;
}

Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula lax_or_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = lax_or(acc, fs[i]);
    return acc;
}

Formula strict_or_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = strict_or(acc, fs[i]);
    return acc;
}

Formula ovee_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return team_neg(top());
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = ovee(acc, fs[i]);
    return acc;
}

Formula sugar_expand(const std::string& kind, const std::vector<Formula>& args) {
    auto arity = [&](std::size_t n) {
        if (args.size() != n)
            throw WellFormednessError("sugar '" + kind + "' expects " + std::to_string(n) + " arguments");
    };
    if (kind == "bot") { arity(0); return bot(); }
    if (kind == "E") { arity(1); return exists_point(args[0]); }
    if (kind == "hook") { arity(2); return hook(args[0], args[1]); }
    if (kind == "ovee") { arity(2); return ovee(args[0], args[1]); }
    if (kind == "impl") { arity(2); return team_impl(args[0], args[1]); }
    if (kind == "->") { arity(2); return implies(args[0], args[1]); }
    if (kind == "<->") { arity(2); return iff(args[0], args[1]); }
    if (kind == "dep") return dep(args);
    throw WellFormednessError("unknown sugar '" + kind + "'");
}

// ---------------------------------------------------------------- printing

namespace {
void print_rec(const Node* n, std::string& out) {
    switch (n->kind) {
    case Kind::Top: out += "top"; return;
    case Kind::Prop: out += n->name; return;
    case Kind::MLNeg: out += "!("; break;
    case Kind::TeamNeg: out += "~("; break;
    case Kind::Box: out += "[]("; break;
    case Kind::Dia: out += "<>("; break;
    case Kind::StrictDia: out += "<s>("; break;
    case Kind::And:
    case Kind::LaxOr:
    case Kind::StrictOr: {
        out += '(';
        print_rec(n->a, out);
        out += n->kind == Kind::And ? " & " : n->kind == Kind::LaxOr ? " | " : " |s ";
        print_rec(n->b, out);
        out += ')';
        return;
    }
    }
    print_rec(n->a, out);
    out += ')';
}
}  // namespace

std::string print_canonical(Formula f) {
    std::string out;
    print_rec(f.node(), out);
    return out;
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { End, Ident, LParen, RParen, Comma, Amp, Bar, BarS, Ovee, Impl, Tilde, Bang, Box, Dia, SDia, Hook, Arrow, Iff };

struct Token {
    Tok tok;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    while (true) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        std::size_t p = i;
        char c = s[i];
        if (is_ident_start(c)) {
            std::size_t e = i;
            while (e < s.size() && is_ident_char(s[e])) ++e;
            out.push_back({Tok::Ident, std::string(s.substr(i, e - i)), p});
            i = e;
        } else if (starts("<->")) { out.push_back({Tok::Iff, "<->", p}); i += 3; }
        else if (starts("<s>")) { out.push_back({Tok::SDia, "<s>", p}); i += 3; }
        else if (starts("<>")) { out.push_back({Tok::Dia, "<>", p}); i += 2; }
        else if (starts("[]")) { out.push_back({Tok::Box, "[]", p}); i += 2; }
        else if (starts("?>")) { out.push_back({Tok::Hook, "?>", p}); i += 2; }
        else if (starts("->")) { out.push_back({Tok::Arrow, "->", p}); i += 2; }
        else if (starts("=>")) { out.push_back({Tok::Impl, "=>", p}); i += 2; }
        else if (starts("\\/")) { out.push_back({Tok::Ovee, "\\/", p}); i += 2; }
        else if (starts("|s") && (i + 2 >= s.size() || !is_ident_char(s[i + 2]))) {
            out.push_back({Tok::BarS, "|s", p});
            i += 2;
        } else {
            Tok t;
            switch (c) {
            case '(': t = Tok::LParen; break;
            case ')': t = Tok::RParen; break;
            case ',': t = Tok::Comma; break;
            case '&': t = Tok::Amp; break;
            case '|': t = Tok::Bar; break;
            case '~': t = Tok::Tilde; break;
            case '!': t = Tok::Bang; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", p);
            }
            out.push_back({t, std::string(1, c), p});
            ++i;
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view s) : toks_(lex(s)) {}

    Formula run() {
        Formula f = formula();
        if (peek().tok != Tok::End) throw ParseError("trailing input '" + peek().text + "'", peek().pos);
        return f;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_++]; }
    bool accept(Tok t) {
        if (peek().tok == t) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(Tok t, const char* what) {
        if (!accept(t)) throw ParseError(std::string("expected ") + what, peek().pos);
    }

    template <class F>
    Formula guarded(std::size_t pos, F&& build) {
        try {
            return build();
        } catch (const WellFormednessError& e) {
            throw WellFormednessError(std::string(e.what()) + " at offset " + std::to_string(pos));
        }
    }

    Formula formula() { return impl(); }

    Formula impl() {
        Formula l = orr();
        if (accept(Tok::Impl)) {
            Formula r = impl();
            return team_impl(l, r);
        }
        return l;
    }

    Formula orr() {
        Formula l = andd();
        while (true) {
            if (accept(Tok::Bar)) l = lax_or(l, andd());
            else if (accept(Tok::BarS)) l = strict_or(l, andd());
            else if (accept(Tok::Ovee)) l = ovee(l, andd());
            else return l;
        }
    }

    Formula andd() {
        Formula l = unary();
        while (accept(Tok::Amp)) l = conj(l, unary());
        return l;
    }

    Formula unary() {
        std::size_t pos = peek().pos;
        if (accept(Tok::Tilde)) return team_neg(unary());
        if (accept(Tok::Bang)) {
            Formula f = unary();
            return guarded(pos, [&] { return ml_neg(f); });
        }
        if (accept(Tok::Box)) return box(unary());
        if (accept(Tok::Dia)) return dia(unary());
        if (accept(Tok::SDia)) return strict_dia(unary());
        return atom();
    }

    Formula atom() {
        const Token& t = peek();
        std::size_t pos = t.pos;
        if (t.tok == Tok::Ident) {
            next();
            if (t.text == "top") return top();
            if (t.text == "bot") return bot();
            if (t.text == "E") {
                Formula f = unary();
                return guarded(pos, [&] { return exists_point(f); });
            }
            if (t.text == "dep" && peek().tok == Tok::LParen) {
                next();
                std::vector<Formula> args{formula()};
                while (accept(Tok::Comma)) args.push_back(formula());
                expect(Tok::RParen, "')' after dep arguments");
                return guarded(pos, [&] { return dep(args); });
            }
            return prop(t.text);
        }
        if (accept(Tok::LParen)) {
            Formula l = formula();
            if (accept(Tok::Hook)) {
                Formula r = formula();
                expect(Tok::RParen, "')'");
                return guarded(pos, [&] { return hook(l, r); });
            }
            if (accept(Tok::Arrow)) {
                Formula r = formula();
                expect(Tok::RParen, "')'");
                return guarded(pos, [&] { return implies(l, r); });
            }
            if (accept(Tok::Iff)) {
                Formula r = formula();
                expect(Tok::RParen, "')'");
                return guarded(pos, [&] { return iff(l, r); });
            }
            expect(Tok::RParen, "')'");
            return l;
        }
        throw ParseError(t.tok == Tok::End ? "unexpected end of input" : "unexpected token '" + t.text + "'", pos);
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

unsigned modal_depth(Formula f) { return f.md(); }

PropSet props_of(Formula f) {
    PropSet out;
    std::unordered_map<const Node*, bool> seen;
    std::vector<const Node*> stack{f.node()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!seen.emplace(n, true).second) continue;
        if (n->kind == Kind::Prop) out.insert(n->name);
        if (n->a) stack.push_back(n->a);
        if (n->b) stack.push_back(n->b);
    }
    return out;
}

namespace {
std::uint64_t sat_add(std::uint64_t x, std::uint64_t y) {
    return x > UINT64_MAX - y ? UINT64_MAX : x + y;
}

template <class Leaf>
std::uint64_t dag_count(const Node* root, Leaf&& leaf) {
    std::unordered_map<const Node*, std::uint64_t> memo;
    std::function<std::uint64_t(const Node*)> go = [&](const Node* n) -> std::uint64_t {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        std::uint64_t v = leaf(n);
        if (n->a) v = sat_add(v, go(n->a));
        if (n->b) v = sat_add(v, go(n->b));
        memo.emplace(n, v);
        return v;
    };
    return go(root);
}
}  // namespace

std::uint64_t tree_size(Formula f) {
    return dag_count(f.node(), [](const Node*) -> std::uint64_t { return 1; });
}

std::uint64_t count_occurrences(Formula f, Formula sub) {
    // Occurrences inside an occurrence are still counted.
    const Node* s = sub.node();
    return dag_count(f.node(), [s](const Node* n) -> std::uint64_t { return n == s ? 1 : 0; });
}

Formula substitute(Formula f, Formula from, Formula to) {
    std::unordered_map<const Node*, Formula> memo;
    std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
        if (g == from) return to;
        if (auto it = memo.find(g.node()); it != memo.end()) return it->second;
        Formula r;
        switch (g.kind()) {
        case Kind::Top:
        case Kind::Prop: r = g; break;
        case Kind::MLNeg: r = ml_neg(go(g.child())); break;
        case Kind::TeamNeg: r = team_neg(go(g.child())); break;
        case Kind::And: r = conj(go(g.left()), go(g.right())); break;
        case Kind::LaxOr: r = lax_or(go(g.left()), go(g.right())); break;
        case Kind::StrictOr: r = strict_or(go(g.left()), go(g.right())); break;
        case Kind::Box: r = box(go(g.child())); break;
        case Kind::Dia: r = dia(go(g.child())); break;
        case Kind::StrictDia: r = strict_dia(go(g.child())); break;
        }
        memo.emplace(g.node(), r);
        return r;
    };
    return go(f);
}

}  // namespace mtl
