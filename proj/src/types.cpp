#include "mtl/types.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <tuple>

#include <omp.h>

namespace mtl {

// ---------------------------------------------------------------- arithmetic

namespace {
constexpr unsigned kMaxBits = 1U << 26;

BigInt pow2(const BigInt& e) {
    if (e > kMaxBits) throw std::overflow_error("value too large to represent exactly");
    BigInt r = 1;
    r <<= static_cast<unsigned>(e);
    return r;
}
}  // namespace

BigInt exp_tower(unsigned k, const BigInt& n) {
    BigInt r = n;
    for (unsigned i = 0; i < k; ++i) r = pow2(r);
    return r;
}

BigInt exp_star(unsigned k, const BigInt& n) {
    BigInt r = n;
    for (unsigned i = 0; i < k; ++i) r = n * pow2(r);
    return r;
}

BigInt count_types(std::size_t num_props, unsigned k) {
    return exp_star(k, pow2(BigInt(num_props)));
}

std::optional<std::uint64_t> count_types_capped(std::size_t num_props, unsigned k, std::uint64_t cap) {
    if (num_props >= 63) return std::nullopt;
    std::uint64_t n = std::uint64_t{1} << num_props;
    if (n > cap) return std::nullopt;
    std::uint64_t r = n;
    for (unsigned i = 0; i < k; ++i) {
        if (r >= 63) return std::nullopt;
        std::uint64_t p = std::uint64_t{1} << r;
        if (p > cap / n) return std::nullopt;
        r = n * p;
    }
    return r <= cap ? std::optional<std::uint64_t>(r) : std::nullopt;
}

// ---------------------------------------------------------------- table

std::vector<std::string> sorted_props(const std::vector<std::string>& names) {
    std::vector<std::string> out(names);
    std::sort(out.begin(), out.end(), name_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t TypeTable::KeyHash::operator()(const std::vector<std::uint64_t>& k) const noexcept {
    std::size_t h = k.size();
    for (auto x : k) h = (h ^ x) * 0x100000001b3ULL + (h >> 31);
    return h;
}

TypeTable::TypeTable(std::vector<std::string> phi) : phi_(sorted_props(phi)) {
    if (phi_.size() > 63) throw std::invalid_argument("too many propositions for a type table");
}

TypeId TypeTable::intern(unsigned depth, std::uint64_t props, std::vector<TypeId> children) {
    sort_types(children);
    std::vector<std::uint64_t> key;
    key.reserve(children.size() + 2);
    key.push_back(depth);
    key.push_back(props);
    for (auto c : children) key.push_back(c.v);
    {
        std::shared_lock lock(mu_);
        if (auto it = index_.find(key); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    for (auto c : children)
        if (entries_[c.v].depth + 1 != depth) throw std::invalid_argument("child type of wrong depth");
    TypeId id{static_cast<std::uint32_t>(entries_.size())};
    entries_.push_back({depth, props, std::move(children)});
    index_.emplace(std::move(key), id);
    return id;
}

unsigned TypeTable::depth(TypeId t) const {
    std::shared_lock lock(mu_);
    return entries_.at(t.v).depth;
}

std::uint64_t TypeTable::props(TypeId t) const {
    std::shared_lock lock(mu_);
    return entries_.at(t.v).props;
}

const std::vector<TypeId>& TypeTable::children(TypeId t) const {
    std::shared_lock lock(mu_);
    return entries_.at(t.v).children;
}

std::size_t TypeTable::size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
}

namespace {

// Unlocked comparisons over the entry deque.
template <class Entries>
bool set_lt_raw(const Entries& es, const std::vector<TypeId>& a, const std::vector<TypeId>& b);

template <class Entries>
bool lt_raw(const Entries& es, TypeId a, TypeId b) {
    if (a == b) return false;
    const auto& x = es[a.v];
    const auto& y = es[b.v];
    if (x.props != y.props) return x.props < y.props;
    return set_lt_raw(es, x.children, y.children);
}

// Both lists sorted ascending; the largest element of the symmetric
// difference decides.
template <class Entries>
bool set_lt_raw(const Entries& es, const std::vector<TypeId>& a, const std::vector<TypeId>& b) {
    std::size_t i = a.size(), j = b.size();
    while (i > 0 && j > 0) {
        TypeId x = a[i - 1], y = b[j - 1];
        if (x == y) {
            --i;
            --j;
            continue;
        }
        return lt_raw(es, x, y);  // larger one belongs to b iff x < y
    }
    return i == 0 && j > 0;
}

}  // namespace

bool TypeTable::lt(TypeId a, TypeId b) const {
    std::shared_lock lock(mu_);
    if (entries_.at(a.v).depth != entries_.at(b.v).depth) throw std::invalid_argument("type depth mismatch");
    return lt_raw(entries_, a, b);
}

bool TypeTable::set_lt(const std::vector<TypeId>& a, const std::vector<TypeId>& b) const {
    std::shared_lock lock(mu_);
    std::optional<unsigned> d;
    for (const auto* v : {&a, &b})
        for (auto t : *v) {
            unsigned td = entries_.at(t.v).depth;
            if (d && *d != td) throw std::invalid_argument("type depth mismatch");
            d = td;
        }
    std::vector<TypeId> sa(a), sb(b);
    auto cmp = [&](TypeId x, TypeId y) { return lt_raw(entries_, x, y); };
    std::sort(sa.begin(), sa.end(), cmp);
    std::sort(sb.begin(), sb.end(), cmp);
    sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
    sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
    return set_lt_raw(entries_, sa, sb);
}

void TypeTable::sort_types(std::vector<TypeId>& ts) const {
    std::shared_lock lock(mu_);
    std::sort(ts.begin(), ts.end(), [&](TypeId x, TypeId y) { return lt_raw(entries_, x, y); });
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

std::string TypeTable::render(TypeId t) const {
    unsigned d;
    std::uint64_t p;
    std::vector<TypeId> cs;
    {
        std::shared_lock lock(mu_);
        const auto& e = entries_.at(t.v);
        d = e.depth;
        p = e.props;
        cs = e.children;
    }
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < phi_.size(); ++i)
        if ((p >> i) & 1U) {
            if (!first) s += ',';
            s += phi_[i];
            first = false;
        }
    s += '}';
    if (d == 0) return s;
    std::string out = "(" + s + ",[";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) out += ',';
        out += render(cs[i]);
    }
    return out + "])";
}

std::uint64_t TypeTable::props_mask(const KripkeStructure& K, std::size_t w) const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < phi_.size(); ++i)
        if (K.holds(w, phi_[i])) m |= std::uint64_t{1} << i;
    return m;
}

TypeId TypeTable::type_of_rec(const KripkeStructure& K, std::size_t w, unsigned k,
                              std::unordered_map<std::uint64_t, TypeId>& memo) {
    std::uint64_t key = (static_cast<std::uint64_t>(w) << 8) | k;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<TypeId> cs;
    if (k > 0)
        for (auto v : K.succ(w)) cs.push_back(type_of_rec(K, v, k - 1, memo));
    TypeId t = intern(k, props_mask(K, w), std::move(cs));
    memo.emplace(key, t);
    return t;
}

TypeId TypeTable::type_of(const KripkeStructure& K, std::size_t w, unsigned k) {
    std::unordered_map<std::uint64_t, TypeId> memo;
    return type_of_rec(K, w, k, memo);
}

std::vector<TypeId> TypeTable::types_of_team(const KripkeStructure& K, const Team& T, unsigned k) {
    std::unordered_map<std::uint64_t, TypeId> memo;
    std::vector<TypeId> out;
    T.for_each([&](std::size_t w) { out.push_back(type_of_rec(K, w, k, memo)); });
    sort_types(out);
    return out;
}

std::vector<TypeId> TypeTable::types_of_worlds_parallel(const KripkeStructure& K, const std::vector<std::size_t>& worlds,
                                                        unsigned k, int jobs) {
    std::vector<TypeId> out(worlds.size());
    const long n = static_cast<long>(worlds.size());
#pragma omp parallel num_threads(std::max(1, jobs))
    {
        std::unordered_map<std::uint64_t, TypeId> memo;
#pragma omp for schedule(dynamic, 16)
        for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = type_of_rec(K, worlds[static_cast<std::size_t>(i)], k, memo);
    }
    return out;
}

std::vector<TypeId> TypeTable::enumerate(unsigned k, std::uint64_t budget) {
    if (!count_types_capped(phi_.size(), k, budget)) {
        std::string req;
        try {
            req = count_types(phi_.size(), k).str();
        } catch (const std::overflow_error&) {
            req = "exp*_" + std::to_string(k) + "(2^" + std::to_string(phi_.size()) + ")";
        }
        throw BudgetExceeded("type enumeration needs " + req + " types (budget " + std::to_string(budget) + ")",
                             req);
    }
    {
        std::shared_lock lock(mu_);
        if (auto it = enumerated_.find(k); it != enumerated_.end()) return it->second;
    }
    const std::uint64_t nprops = std::uint64_t{1} << phi_.size();
    std::vector<TypeId> level;
    for (std::uint64_t p = 0; p < nprops; ++p) level.push_back(intern(0, p, {}));
    for (unsigned d = 1; d <= k; ++d) {
        std::vector<TypeId> next;
        const std::size_t m = level.size();
        for (std::uint64_t p = 0; p < nprops; ++p)
            for (std::uint64_t c = 0; c < (std::uint64_t{1} << m); ++c) {
                std::vector<TypeId> cs;
                for (std::size_t i = 0; i < m; ++i)
                    if ((c >> i) & 1U) cs.push_back(level[i]);
                next.push_back(intern(d, p, std::move(cs)));
            }
        level = std::move(next);
    }
    std::unique_lock lock(mu_);
    enumerated_[k] = level;
    return level;
}

Formula TypeTable::hintikka(TypeId t) {
    {
        std::shared_lock lock(mu_);
        if (auto it = hintikka_.find(t.v); it != hintikka_.end()) return it->second;
    }
    unsigned d = depth(t);
    std::uint64_t p = props(t);
    std::vector<TypeId> cs = children(t);
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < phi_.size(); ++i) {
        Formula a = prop(phi_[i]);
        parts.push_back(((p >> i) & 1U) ? a : ml_neg(a));
    }
    if (d > 0) {
        std::vector<Formula> ch;
        for (auto c : cs) ch.push_back(hintikka(c));
        for (auto f : ch) parts.push_back(dia(f));
        parts.push_back(box(lax_or_all(ch)));
    }
    Formula f = conj_all(parts);
    std::unique_lock lock(mu_);
    hintikka_.emplace(t.v, f);
    return f;
}

// ---------------------------------------------------------------- bisimulation

namespace {

struct BisimCtx {
    const KripkeStructure& K1;
    const KripkeStructure& K2;
    const std::vector<std::string>& phi;
    std::map<std::tuple<std::size_t, std::size_t, unsigned>, bool> memo;

    bool point(std::size_t a, std::size_t b, unsigned k) {
        auto key = std::make_tuple(a, b, k);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool r = true;
        for (auto& p : phi)
            if (K1.holds(a, p) != K2.holds(b, p)) {
                r = false;
                break;
            }
        if (r && k > 0) {
            // forth
            for (auto v1 : K1.succ(a)) {
                bool ok = false;
                for (auto v2 : K2.succ(b))
                    if (point(v1, v2, k - 1)) {
                        ok = true;
                        break;
                    }
                if (!ok) {
                    r = false;
                    break;
                }
            }
        }
        if (r && k > 0) {
            // back
            for (auto v2 : K2.succ(b)) {
                bool ok = false;
                for (auto v1 : K1.succ(a))
                    if (point(v1, v2, k - 1)) {
                        ok = true;
                        break;
                    }
                if (!ok) {
                    r = false;
                    break;
                }
            }
        }
        memo.emplace(key, r);
        return r;
    }
};

}  // namespace

bool bisimilar_points(const KripkeStructure& K1, std::size_t w1, const KripkeStructure& K2, std::size_t w2,
                      const std::vector<std::string>& phi, unsigned k) {
    BisimCtx ctx{K1, K2, phi, {}};
    return ctx.point(w1, w2, k);
}

bool bisimilar_teams(const KripkeStructure& K1, const Team& T1, const KripkeStructure& K2, const Team& T2,
                     const std::vector<std::string>& phi, unsigned k) {
    BisimCtx ctx{K1, K2, phi, {}};
    bool ok = true;
    T1.for_each([&](std::size_t a) {
        if (!ok) return;
        bool found = false;
        T2.for_each([&](std::size_t b) { found = found || ctx.point(a, b, k); });
        ok = found;
    });
    T2.for_each([&](std::size_t b) {
        if (!ok) return;
        bool found = false;
        T1.for_each([&](std::size_t a) { found = found || ctx.point(a, b, k); });
        ok = found;
    });
    return ok;
}

}  // namespace mtl
