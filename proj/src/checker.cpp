#include "mtl/checker.hpp"

#include <stdexcept>

namespace mtl {

namespace {

bool is(Formula f, Kind k) { return f.valid() && f.kind() == k; }

Formula build_exists_one(Formula a, Formula body) {
    Formula e = exists_point(a);
    return lax_or(a, conj(e, team_neg(lax_or(a, team_neg(team_impl(e, body))))));
}

// Top-level classical conjuncts of f, conjoined (top if none).
Formula classical_bound(Formula f) {
    if (f.classical()) return f;
    if (f.kind() == Kind::And) {
        Formula l = classical_bound(f.left()), r = classical_bound(f.right());
        if (l.kind() == Kind::Top) return r;
        if (r.kind() == Kind::Top) return l;
        return conj(l, r);
    }
    return top();
}

// If f holds on exactly the teams inside V(a_i) for some listed a_i (a Boolean
// disjunction of classical formulas), return those a_i.
std::optional<std::vector<Formula>> downset_cases(Formula f) {
    if (f.classical()) return std::vector<Formula>{f};
    if (f.kind() != Kind::TeamNeg) return std::nullopt;
    Formula c = f.child();
    if (c.kind() == Kind::Top) return std::vector<Formula>{};
    if (c.kind() != Kind::And || !is(c.left(), Kind::TeamNeg) || !is(c.right(), Kind::TeamNeg)) return std::nullopt;
    auto l = downset_cases(c.left().child()), r = downset_cases(c.right().child());
    if (!l || !r) return std::nullopt;
    l->insert(l->end(), r->begin(), r->end());
    return l;
}

struct MemoKey {
    const Node* n;
    Team t;
    bool operator==(const MemoKey& o) const { return n == o.n && t == o.t; }
};

struct MemoHash {
    std::size_t operator()(const MemoKey& k) const noexcept {
        return k.t.hash() ^ (std::hash<const void*>{}(k.n) * 0x9e3779b97f4a7c15ULL);
    }
};

}  // namespace

std::optional<std::pair<Formula, Formula>> match_hook(Formula phi) {
    if (!is(phi, Kind::LaxOr)) return std::nullopt;
    Formula l = phi.left(), r = phi.right();
    if (!is(l, Kind::MLNeg) || !is(r, Kind::And)) return std::nullopt;
    if (r.left() != l.child()) return std::nullopt;
    return std::make_pair(l.child(), r.right());
}

std::optional<std::pair<Formula, Formula>> match_exists_one(Formula phi) {
    if (!is(phi, Kind::LaxOr)) return std::nullopt;
    Formula a = phi.left(), b = phi.right();
    if (!a.classical() || !is(b, Kind::And)) return std::nullopt;
    Formula neg = b.right();  // ~(a | ~(E a => body))
    if (!is(neg, Kind::TeamNeg) || !is(neg.child(), Kind::LaxOr)) return std::nullopt;
    Formula inner = neg.child().right();  // ~(E a => body)
    if (!is(inner, Kind::TeamNeg) || !is(inner.child(), Kind::TeamNeg)) return std::nullopt;
    Formula impl = inner.child();  // ~(~~E a & ~body)
    if (!is(impl.child(), Kind::And)) return std::nullopt;
    Formula nb = impl.child().right();
    if (!is(nb, Kind::TeamNeg)) return std::nullopt;
    Formula body = nb.child();
    if (build_exists_one(a, body) != phi) return std::nullopt;
    return std::make_pair(a, body);
}

struct Checker::Impl {
    const KripkeStructure& K;
    Mode mode;
    CheckOptions opts;
    std::unordered_map<const Node*, Team> sat_cache;
    std::unordered_map<MemoKey, bool, MemoHash> memo;

    enum class Shape { Plain, Hook, ExistsOne };
    struct ShapeInfo {
        Shape shape;
        Formula a, body, bound_l, bound_r;
        std::optional<std::vector<Formula>> cases_l, cases_r;
    };
    std::unordered_map<const Node*, ShapeInfo> shapes;

    Impl(const KripkeStructure& k, Mode m, CheckOptions o) : K(k), mode(m), opts(o) {}

    const Team& sat(Formula f) {
        if (auto it = sat_cache.find(f.node()); it != sat_cache.end()) return it->second;
        Team r(K.size());
        switch (f.kind()) {
        case Kind::Top: r = K.full_team(); break;
        case Kind::Prop: r = K.valuation(f.name()); break;
        case Kind::MLNeg: r = sat(f.child()).complement(); break;
        case Kind::And: r = sat(f.left()) & sat(f.right()); break;
        case Kind::LaxOr: r = sat(f.left()) | sat(f.right()); break;
        case Kind::Box: r = preimage(K, sat(f.child()).complement()).complement(); break;
        case Kind::Dia: r = preimage(K, sat(f.child())); break;
        default: throw WellFormednessError("point evaluation of a non-classical formula");
        }
        return sat_cache.emplace(f.node(), std::move(r)).first->second;
    }

    const ShapeInfo& shape_of(Formula f) {
        if (auto it = shapes.find(f.node()); it != shapes.end()) return it->second;
        ShapeInfo info{Shape::Plain, {}, {}, {}, {}, {}, {}};
        if (f.kind() == Kind::LaxOr) {
            if (auto h = match_hook(f)) info = {Shape::Hook, h->first, h->second, {}, {}, {}, {}};
            else if (auto e = match_exists_one(f)) info = {Shape::ExistsOne, e->first, e->second, {}, {}, {}, {}};
        }
        if (f.kind() == Kind::LaxOr || f.kind() == Kind::StrictOr) {
            info.bound_l = classical_bound(f.left());
            info.bound_r = classical_bound(f.right());
            if (!f.left().classical()) info.cases_l = downset_cases(f.left());
            if (!f.right().classical()) info.cases_r = downset_cases(f.right());
        }
        return shapes.emplace(f.node(), info).first->second;
    }

    bool eval(Formula f, const Team& T) {
        if (f.classical()) return T.subset_of(sat(f));
        MemoKey key{f.node(), T};
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool r = compute(f, T);
        memo.emplace(std::move(key), r);
        return r;
    }

    bool compute(Formula f, const Team& T) {
        switch (f.kind()) {
        case Kind::TeamNeg: return !eval(f.child(), T);
        case Kind::And: return eval(f.left(), T) && eval(f.right(), T);
        case Kind::Box: return eval(f.child(), image(K, T));
        case Kind::Dia:
        case Kind::StrictDia: {
            Mode m = f.kind() == Kind::Dia ? Mode::Lax : Mode::Strict;
            Formula c = f.child();
            return !successor_teams(K, T, m, [&](const Team& S) { return !eval(c, S); });
        }
        case Kind::LaxOr: return eval_or(f, T, Mode::Lax);
        case Kind::StrictOr: return eval_or(f, T, Mode::Strict);
        default: throw std::logic_error("unexpected classical node in team evaluation");
        }
    }

    bool eval_or(Formula f, const Team& T, Mode m) {
        const ShapeInfo& info = shape_of(f);
        if (m == Mode::Lax && info.shape == Shape::Hook) {
            bool r = eval(info.body, T & sat(info.a));
            if (opts.verify_shortcuts && r != generic_or(f, T, m, info))
                throw std::logic_error("hook shortcut disagrees with its expansion");
            return r;
        }
        if (m == Mode::Lax && info.shape == Shape::ExistsOne) {
            const Team& a = sat(info.a);
            Team rest = T - a;
            bool r = false;
            (T & a).for_each([&](std::size_t w) {
                if (r) return;
                Team sel = rest;
                sel.set(w);
                r = eval(info.body, sel);
            });
            if (opts.verify_shortcuts && r != generic_or(f, T, m, info))
                throw std::logic_error("single-point quantifier shortcut disagrees with its expansion");
            return r;
        }
        return generic_or(f, T, m, info);
    }

    // Split search restricted by the classical conjuncts of each side: the
    // left part must lie in A, the right part in B.
    bool generic_or(Formula f, const Team& T, Mode m, const ShapeInfo& info) {
        Formula l = f.left(), r = f.right();
        Team A = T & sat(info.bound_l), B = T & sat(info.bound_r);
        if (!(T - A).subset_of(B)) return false;
        if (m == Mode::Strict) {
            // U = (T \\ A) plus any part of A within B; S = T \\ U.
            return !for_each_subset(T - A, A & B, [&](const Team& U) {
                return !(eval(l, T - U) && eval(r, U));
            });
        }
        if (info.cases_l || info.cases_r) {
            // A downset side can take its largest admissible part T_{a_i}.
            bool left = info.cases_l.has_value();
            Formula other = left ? r : l;
            const Team& Bo = left ? B : A;
            for (Formula c : left ? *info.cases_l : *info.cases_r) {
                Team M = T & sat(c);
                if (!(T - M).subset_of(Bo)) continue;
                if (!for_each_subset(T - M, M & Bo, [&](const Team& U) { return !eval(other, U); })) return true;
            }
            return false;
        }
        if (l.classical()) {
            // Largest admissible left part is A itself.
            return !for_each_subset(T - A, A & B, [&](const Team& U) { return !eval(r, U); });
        }
        if (r.classical()) {
            return !for_each_subset(T - B, A & B, [&](const Team& S) { return !eval(l, S); });
        }
        bool swap = B.count() < A.count();
        Formula first = swap ? r : l, second = swap ? l : r;
        const Team& F = swap ? B : A;
        const Team& G = swap ? A : B;
        return !for_each_subset(Team(K.size()), F, [&](const Team& S) {
            Team need = T - S;
            if (!need.subset_of(G)) return true;
            if (!eval(first, S)) return true;
            bool found = !for_each_subset(need, S & G, [&](const Team& U) { return !eval(second, U); });
            return !found;
        });
    }
};

Checker::Checker(const KripkeStructure& K, Mode mode, CheckOptions opts)
    : impl_(std::make_unique<Impl>(K, mode, opts)) {}
Checker::~Checker() = default;

bool Checker::eval(Formula phi, const Team& T) {
    if (impl_->mode == Mode::Lax && phi.has_strict())
        throw WellFormednessError("strict connective in a lax-mode check");
    if (T.universe() != impl_->K.size()) throw std::invalid_argument("team does not belong to the structure");
    return impl_->eval(phi, T);
}

const Team& Checker::sat(Formula alpha) {
    if (!alpha.classical()) throw WellFormednessError("point evaluation of a non-classical formula");
    return impl_->sat(alpha);
}

std::size_t Checker::cache_size() const { return impl_->memo.size(); }

Team sat_set(const KripkeStructure& K, Formula alpha) {
    Checker c(K, Mode::Strict);
    return c.sat(alpha);
}

bool check_point(const KripkeStructure& K, std::size_t w, Formula alpha) { return sat_set(K, alpha).test(w); }

bool check(const KripkeStructure& K, const Team& T, Formula phi, Mode mode, CheckOptions opts) {
    Checker c(K, mode, opts);
    return c.eval(phi, T);
}

}  // namespace mtl
