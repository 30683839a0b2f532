#include "mtl/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtl/encodings.hpp"
#include "mtl/types.hpp"

namespace mtl {

using json = nlohmann::json;

namespace {

bool ident_safe(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

StateKind parse_kind(const std::string& s) {
    if (s == "exists") return StateKind::Exists;
    if (s == "forall") return StateKind::Forall;
    if (s == "accept") return StateKind::Accept;
    if (s == "reject") return StateKind::Reject;
    throw SpecError("unknown state kind '" + s + "'");
}

bool halting(StateKind k) { return k == StateKind::Accept || k == StateKind::Reject; }

}  // namespace

// ------------------------------------------------------------------ ATMSpec

void ATMSpec::validate() {
    if (states.empty()) throw SpecError("machine has no states");
    std::set<std::string> seen;
    for (auto& q : states) {
        if (!ident_safe(q)) throw SpecError("state name '" + q + "' must match [A-Za-z0-9_]+");
        if (!seen.insert(q).second) throw SpecError("duplicate state '" + q + "'");
        if (!kind.count(q)) throw SpecError("state '" + q + "' has no kind");
    }
    seen.clear();
    for (auto& a : alphabet) {
        if (!ident_safe(a)) throw SpecError("symbol '" + a + "' must match [A-Za-z0-9_]+");
        if (!seen.insert(a).second) throw SpecError("duplicate symbol '" + a + "'");
    }
    if (!seen.count(blank)) throw SpecError("blank symbol is not in the alphabet");
    if (!kind.count(initial)) throw SpecError("unknown initial state");
    if (kind.at(initial) != StateKind::Exists) throw SpecError("initial state must be existential");
    for (auto& t : delta) {
        if (!kind.count(t.q) || !kind.count(t.q2)) throw SpecError("transition mentions an unknown state");
        if (!seen.count(t.a) || !seen.count(t.a2)) throw SpecError("transition mentions an unknown symbol");
        if (t.dir != 'L' && t.dir != 'R') throw SpecError("transition direction must be L or R");
    }
    if (depth < 1) throw SpecError("depth must be at least 1");
    if (alternations < 1) alternations = 1;
    if (alternations % 2 == 1) ++alternations;
    std::set<std::string> names;
    for (auto& c : xi_cells(*this))
        if (!names.insert(xi_name(c)).second) throw SpecError("cell proposition '" + xi_name(c) + "' is ambiguous");
}

std::vector<std::string> ATMSpec::states_of(StateKind k) const {
    std::vector<std::string> out;
    for (auto& q : states)
        if (kind.at(q) == k) out.push_back(q);
    return out;
}

ATMSpec load_atm_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("machine file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SpecError("machine file must hold a JSON object");
    static const std::set<std::string> keys{"states", "initial", "alphabet", "blank", "delta",
                                            "alternations", "depth", "phi_size"};
    for (auto& [key, _] : j.items())
        if (!keys.count(key)) throw SpecError("unknown key '" + key + "' in machine file");
    for (auto& key : keys)
        if (!j.contains(key)) throw SpecError("machine file lacks '" + key + "'");
    ATMSpec m;
    try {
        for (auto& s : j.at("states")) {
            std::string name = s.at("name").get<std::string>();
            m.states.push_back(name);
            m.kind[name] = parse_kind(s.at("kind").get<std::string>());
        }
        m.initial = j.at("initial").get<std::string>();
        m.alphabet = j.at("alphabet").get<std::vector<std::string>>();
        m.blank = j.at("blank").get<std::string>();
        for (auto& t : j.at("delta")) {
            if (!t.is_array() || t.size() != 5) throw SpecError("transitions are 5-element arrays");
            std::string d = t[4].get<std::string>();
            if (d.size() != 1) throw SpecError("transition direction must be L or R");
            m.delta.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>(),
                               t[3].get<std::string>(), d[0]});
        }
        m.alternations = j.at("alternations").get<unsigned>();
        m.depth = j.at("depth").get<unsigned>();
        m.phi_size = j.at("phi_size").get<unsigned>();
    } catch (const json::exception& e) {
        throw SpecError(std::string("malformed machine file: ") + e.what());
    }
    m.validate();
    return m;
}

ATMSpec load_atm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open machine file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_atm_json(ss.str());
}

// ------------------------------------------------------------------ windows

std::vector<Cell> xi_cells(const ATMSpec& m) {
    std::vector<Cell> out;
    for (auto& a : m.alphabet) out.push_back({"", a});
    for (auto& q : m.states)
        for (auto& a : m.alphabet) out.push_back({q, a});
    return out;
}

std::string xi_name(const Cell& c) { return c.head() ? "x_" + c.state + "_" + c.sym : "x_" + c.sym; }

namespace {

struct XiIndex {
    std::map<Cell, std::size_t> idx;
    explicit XiIndex(const ATMSpec& m) {
        auto cells = xi_cells(m);
        for (std::size_t i = 0; i < cells.size(); ++i) idx[cells[i]] = i;
    }
    Window of(const std::array<Cell, 6>& w) const {
        Window out{};
        for (std::size_t i = 0; i < 6; ++i) out[i] = idx.at(w[i]);
        return out;
    }
};

}  // namespace

std::set<Window> legal_windows(const ATMSpec& m) {
    XiIndex xi(m);
    std::set<Window> out;
    const auto& G = m.alphabet;
    auto plain = [](const std::string& s) { return Cell{"", s}; };
    for (auto& b1 : G)
        for (auto& b2 : G)
            for (auto& b3 : G) {
                std::array<Cell, 3> top{plain(b1), plain(b2), plain(b3)};
                out.insert(xi.of({top[0], top[1], top[2], top[0], top[1], top[2]}));
                // Head entering from outside the window.
                for (auto& t : m.delta) {
                    if (halting(m.kind.at(t.q))) continue;
                    std::array<Cell, 3> bot = top;
                    if (t.dir == 'R') bot[0] = {t.q2, bot[0].sym};
                    else bot[2] = {t.q2, bot[2].sym};
                    out.insert(xi.of({top[0], top[1], top[2], bot[0], bot[1], bot[2]}));
                }
                // Head inside the window, in column c.
                for (std::size_t c = 0; c < 3; ++c)
                    for (auto& q : m.states) {
                        std::array<Cell, 3> hd = top;
                        hd[c] = {q, top[c].sym};
                        if (halting(m.kind.at(q))) {
                            out.insert(xi.of({hd[0], hd[1], hd[2], hd[0], hd[1], hd[2]}));
                            continue;
                        }
                        for (auto& t : m.delta) {
                            if (t.q != q || t.a != top[c].sym) continue;
                            std::array<Cell, 3> bot = top;
                            bot[c] = plain(t.a2);
                            int nc = static_cast<int>(c) + (t.dir == 'R' ? 1 : -1);
                            if (nc >= 0 && nc <= 2) bot[nc] = {t.q2, bot[nc].sym};
                            out.insert(xi.of({hd[0], hd[1], hd[2], bot[0], bot[1], bot[2]}));
                        }
                    }
            }
    return out;
}

std::vector<std::vector<Cell>> successor_configs(const ATMSpec& m, const std::vector<Cell>& config) {
    std::vector<std::vector<Cell>> out;
    auto h = std::find_if(config.begin(), config.end(), [](const Cell& c) { return c.head(); });
    if (h == config.end()) return out;
    std::size_t pos = static_cast<std::size_t>(h - config.begin());
    if (halting(m.kind.at(h->state))) {
        out.push_back(config);
        return out;
    }
    for (auto& t : m.delta) {
        if (t.q != h->state || t.a != h->sym) continue;
        long np = static_cast<long>(pos) + (t.dir == 'R' ? 1 : -1);
        if (np < 0 || np >= static_cast<long>(config.size())) continue;
        std::vector<Cell> next = config;
        next[pos] = {"", t.a2};
        next[static_cast<std::size_t>(np)].state = t.q2;
        out.push_back(std::move(next));
    }
    return out;
}

std::set<Window> harvested_windows(const ATMSpec& m, unsigned n) {
    XiIndex xi(m);
    std::set<Window> out;
    const std::size_t g = m.alphabet.size();
    std::size_t total = 1;
    for (unsigned i = 0; i < n; ++i) total *= g;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<Cell> tape(n);
        std::size_t c = code;
        for (unsigned i = 0; i < n; ++i, c /= g) tape[i] = {"", m.alphabet[c % g]};
        for (unsigned h = 0; h < n; ++h)
            for (auto& q : m.states) {
                std::vector<Cell> cfg = tape;
                cfg[h].state = q;
                for (auto& next : successor_configs(m, cfg))
                    for (unsigned j = 0; j + 2 < n; ++j)
                        out.insert(xi.of({cfg[j], cfg[j + 1], cfg[j + 2], next[j], next[j + 1], next[j + 2]}));
            }
    }
    return out;
}

// ---------------------------------------------------------------- formulas

Reduction::Reduction(const ATMSpec& m, std::vector<std::string> phi)
    : m_(m), phi_(std::move(phi)), k_(m.depth), xi_(xi_cells(m)), win_(legal_windows(m)) {
    for (unsigned i = 0; i <= k_; ++i) names_.stairs.push_back(stair_name(i));
    names_.prime = kPrimeStair;
    t_ = prop(names_.t);
    p_ = prop(names_.p);
}

Formula Reduction::xi_prop(const Cell& c) const { return prop(xi_name(c)); }

Formula Reduction::other(const std::string& q) const { return prop(q == names_.t ? names_.p : names_.t); }

Formula Reduction::bar(Formula a, const std::string& q, Formula psi) const {
    Formula pq = prop(q);
    return lax_or(conj(a, ml_neg(pq)), conj(hook(a, pq), psi));
}

Formula Reduction::prec(const std::string& q, Formula a, Formula b) const {
    return box(bar(a, q, bar(b, q, gen_zeta(phi_, k_ - 1, a, b, names_.stairs, true))));
}

Formula Reduction::equiv(const std::string& q, Formula a, Formula b) const {
    return box(bar(a, q, bar(b, q, gen_chi(phi_, k_ - 1, a, b, true))));
}

Formula Reduction::succ(const std::string& q, Formula a, Formula b) const {
    const std::string& oq = q == names_.t ? names_.p : names_.t;
    Formula between = exists_one(g(0), conj(prec(q, a, g(0)), prec(q, g(0), b)));
    return conj(conj(equiv(oq, a, b), prec(q, a, b)), team_neg(between));
}

Formula Reduction::min(const std::string& q, Formula a) const {
    return team_neg(exists_one(g(0), prec(q, g(0), a)));
}

Formula Reduction::pair(Formula a) const {
    Formula s = prop(names_.stairs[k_]), sp = prop(names_.prime);
    return box(conj(bar(a, names_.t, gen_chi(phi_, k_ - 1, s, a, true)),
                    bar(a, names_.p, gen_chi(phi_, k_ - 1, sp, a, true))));
}

Formula Reduction::grid(Formula a) const {
    std::vector<Formula> alts;
    for (std::size_t i = 0; i < xi_.size(); ++i) {
        std::vector<Formula> parts{xi_prop(xi_[i])};
        for (std::size_t j = 0; j < xi_.size(); ++j)
            if (j != i) parts.push_back(ml_neg(xi_prop(xi_[j])));
        alts.push_back(conj_all(parts));
    }
    Formula s = prop(names_.stairs[k_]), sp = prop(names_.prime);
    return conj(hook(a, lax_or_all(alts)), forall_one(s, forall_one(sp, exists_one(a, pair(a)))));
}

Formula Reduction::pre_tableau(Formula a) const {
    std::vector<Formula> each;
    for (auto& c : xi_) each.push_back(exists_one(a, conj(pair(a), hook(a, xi_prop(c)))));
    Formula s = prop(names_.stairs[k_]), sp = prop(names_.prime);
    return conj(grid(a), forall_one(s, forall_one(sp, conj_all(each))));
}

Formula Reduction::approx(Formula a, Formula b) const {
    std::vector<Formula> same;
    for (auto& c : xi_) same.push_back(hook(lax_or(a, b), xi_prop(c)));
    Formula loc = conj(equiv(names_.t, a, b), equiv(names_.p, a, b));
    return forall_one(a, forall_one(b, team_impl(loc, ovee_all(same))));
}

Formula Reduction::tableau(Formula a) const {
    return conj(grid(a), exists_sub(g(0), conj(grid(g(0)), approx(a, g(0)))));
}

Formula Reduction::copy(Formula gamma, Formula a, Formula body) const {
    return exists_sub(gamma, conj(conj(grid(gamma), approx(a, gamma)), body));
}

Formula Reduction::window(const std::array<Formula, 6>& w) const {
    const std::string &t = names_.t, &p = names_.p;
    return conj_all({succ(t, w[0], w[3]), succ(t, w[1], w[4]), succ(t, w[2], w[5]), succ(p, w[0], w[1]),
                     succ(p, w[1], w[2])});
}

Formula Reduction::theta1() const {
    std::vector<Formula> heads;
    for (auto& c : xi_)
        if (c.head()) heads.push_back(xi_prop(c));
    std::vector<Formula> parts;
    for (Formula h1 : heads)
        for (Formula h2 : heads) parts.push_back(team_neg(conj(hook(g(1), h1), hook(g(2), h2))));
    Formula pre = conj(equiv(names_.t, g(1), g(2)), prec(names_.p, g(1), g(2)));
    return forall_one(g(1), forall_one(g(2), team_impl(pre, conj_all(parts))));
}

Formula Reduction::theta2() const {
    std::vector<Formula> heads;
    for (auto& c : xi_)
        if (c.head()) heads.push_back(hook(g(2), xi_prop(c)));
    return forall_one(g(1), exists_one(g(2), conj(equiv(names_.t, g(1), g(2)), ovee_all(heads))));
}

Formula Reduction::theta3() const {
    std::array<Formula, 6> gs{g(1), g(2), g(3), g(4), g(5), g(6)};
    std::vector<Formula> alts;
    for (auto& w : win_) {
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < 6; ++i) parts.push_back(hook(gs[i], xi_prop(xi_[w[i]])));
        alts.push_back(conj_all(parts));
    }
    Formula body = team_impl(window(gs), ovee_all(alts));
    for (int i = 5; i >= 0; --i) body = forall_one(gs[static_cast<std::size_t>(i)], body);
    return body;
}

Formula Reduction::legal(Formula a) const {
    Formula body = conj_all({theta1(), theta2(), theta3()});
    for (unsigned i = 6; i >= 1; --i) body = copy(g(i), a, body);
    return conj(tableau(a), body);
}

Formula Reduction::input(Formula a, const std::vector<std::string>& x) const {
    if (x.empty()) throw SpecError("input must be nonempty");
    const unsigned n = static_cast<unsigned>(x.size());
    const std::string &t = names_.t, &p = names_.p;
    std::vector<Formula> parts{min(t, g(1)), min(p, g(1)), hook(g(1), xi_prop({m_.initial, x[0]}))};
    for (unsigned i = 2; i <= n; ++i) {
        parts.push_back(succ(p, g(i - 1), g(i)));
        parts.push_back(hook(g(i), xi_prop({"", x[i - 1]})));
    }
    Formula later = conj(equiv(t, g(n), g(n + 1)), prec(p, g(n), g(n + 1)));
    parts.push_back(forall_one(g(n + 1), team_impl(later, hook(g(n + 1), xi_prop({"", m_.blank})))));
    Formula body = conj_all(parts);
    for (unsigned i = n; i >= 1; --i) body = exists_one(g(i), body);
    for (unsigned i = n + 1; i >= 1; --i) body = copy(g(i), a, body);
    return body;
}

Formula Reduction::xstate(const std::vector<std::string>& states, Formula b) const {
    std::vector<Formula> alts;
    for (auto& q : states)
        for (auto& s : m_.alphabet) alts.push_back(hook(b, xi_prop({q, s})));
    return ovee_all(alts);
}

Formula Reduction::tail(Formula a, Formula b) const {
    auto ex = m_.states_of(StateKind::Exists), fa = m_.states_of(StateKind::Forall);
    auto ac = m_.states_of(StateKind::Accept), rj = m_.states_of(StateKind::Reject);
    Formula alternation = ovee(conj(xstate(ex, a), xstate(fa, g(0))), conj(xstate(fa, a), xstate(ex, g(0))));
    Formula earlier = exists_one(g(0), conj(prec(names_.t, g(0), a), alternation));
    Formula kinds = ovee(ovee(xstate(ac, a), xstate(rj, a)), earlier);
    Formula body = conj_all({equiv(names_.t, a, b), xstate(m_.states, a), kinds});
    return copy(g(0), a, exists_one(a, body));
}

Formula Reduction::first_tail(Formula a, Formula b) const {
    Formula earlier = exists_one(g(1), conj(prec(names_.t, g(1), b), tail(a, g(1))));
    return conj(tail(a, b), team_neg(earlier));
}

Formula Reduction::acc(Formula a) const {
    return copy(g(2), a, exists_one(g(2), conj(xstate(m_.states_of(StateKind::Accept), g(2)), first_tail(a, g(2)))));
}

Formula Reduction::rej(Formula a) const {
    return copy(g(2), a, exists_one(g(2), conj(xstate(m_.states_of(StateKind::Reject), g(2)), first_tail(a, g(2)))));
}

Formula Reduction::cont(Formula a, Formula b) const {
    std::vector<Formula> same;
    for (auto& c : xi_) same.push_back(hook(lax_or(a, b), xi_prop(c)));
    Formula pre = conj_all({min(names_.t, b), equiv(names_.t, a, g(2)), equiv(names_.p, a, b)});
    Formula rows = forall_one(a, forall_one(b, team_impl(pre, ovee_all(same))));
    return exists_one(g(2), conj(first_tail(a, g(2)), rows));
}

Formula Reduction::run(unsigned i, const std::vector<std::string>& x) const {
    const unsigned r = m_.alternations;
    if (i < 1 || i > r) throw std::out_of_range("run index out of range");
    Formula a = prop(ReductionNames::alpha(i));
    if (i == 1) {
        Formula more = r >= 2 ? ovee(acc(a), run(2, x)) : acc(a);
        return exists_sub(a, conj_all({legal(a), input(a, x), team_neg(rej(a)), more}));
    }
    Formula prev = prop(ReductionNames::alpha(i - 1));
    Formula guard = conj(legal(a), cont(prev, a));
    if (i == r) return forall_sub(a, team_impl(guard, conj(team_neg(rej(a)), acc(a))));
    Formula more = ovee(acc(a), run(i + 1, x));
    if (i % 2 == 0) return forall_sub(a, team_impl(guard, conj(team_neg(rej(a)), more)));
    return exists_sub(a, conj_all({legal(a), cont(prev, a), team_neg(rej(a)), more}));
}

Formula Reduction::canon_prime() const { return gen_canon(phi_, k_, names_.stairs, names_.prime); }

Formula Reduction::component(const std::string& name, const std::vector<std::string>& args,
                             const std::vector<std::string>& x) const {
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw std::invalid_argument("component '" + name + "' takes " + std::to_string(n) + " scope arguments");
    };
    auto A = [&](std::size_t i) { return prop(args.at(i)); };
    const std::string &t = names_.t, &p = names_.p;
    if (name == "grid") return need(1), grid(A(0));
    if (name == "pair") return need(1), pair(A(0));
    if (name == "pre-tableau") return need(1), pre_tableau(A(0));
    if (name == "tableau") return need(1), tableau(A(0));
    if (name == "legal") return need(1), legal(A(0));
    if (name == "acc") return need(1), acc(A(0));
    if (name == "rej") return need(1), rej(A(0));
    if (name == "min-t") return need(1), min(t, A(0));
    if (name == "min-p") return need(1), min(p, A(0));
    if (name == "input") return need(1), input(A(0), x);
    if (name == "approx") return need(2), approx(A(0), A(1));
    if (name == "prec-t") return need(2), prec(t, A(0), A(1));
    if (name == "prec-p") return need(2), prec(p, A(0), A(1));
    if (name == "equiv-t") return need(2), equiv(t, A(0), A(1));
    if (name == "equiv-p") return need(2), equiv(p, A(0), A(1));
    if (name == "succ-t") return need(2), succ(t, A(0), A(1));
    if (name == "succ-p") return need(2), succ(p, A(0), A(1));
    if (name == "tail") return need(2), tail(A(0), A(1));
    if (name == "first-tail") return need(2), first_tail(A(0), A(1));
    if (name == "cont") return need(2), cont(A(0), A(1));
    if (name == "window") return need(6), window({A(0), A(1), A(2), A(3), A(4), A(5)});
    if (name == "theta1") return need(0), theta1();
    if (name == "theta2") return need(0), theta2();
    if (name == "theta3") return need(0), theta3();
    if (name == "canon-prime") return need(0), canon_prime();
    if (name == "run") {
        need(1);
        return run(static_cast<unsigned>(std::stoul(args[0])), x);
    }
    if (name.rfind("xstate-", 0) == 0) {
        need(1);
        std::string which = name.substr(7);
        std::vector<std::string> qs;
        if (which == "all") qs = m_.states;
        else if (which == "exists") qs = m_.states_of(StateKind::Exists);
        else if (which == "forall") qs = m_.states_of(StateKind::Forall);
        else if (which == "accept") qs = m_.states_of(StateKind::Accept);
        else if (which == "reject") qs = m_.states_of(StateKind::Reject);
        else throw std::invalid_argument("unknown state class '" + which + "'");
        return xstate(qs, A(0));
    }
    throw std::invalid_argument("unknown reduction component '" + name + "'");
}

std::vector<std::string> tokenize_input(const ATMSpec& m, const std::string& x) {
    std::vector<std::string> out;
    if (x.find_first_of(" \t") != std::string::npos) {
        std::istringstream in(x);
        for (std::string tok; in >> tok;) out.push_back(tok);
    } else {
        for (char c : x) out.emplace_back(1, c);
    }
    for (auto& s : out)
        if (std::find(m.alphabet.begin(), m.alphabet.end(), s) == m.alphabet.end())
            throw SpecError("input symbol '" + s + "' is not in the alphabet");
    if (out.empty()) throw SpecError("input must be nonempty");
    return out;
}

ReduceResult reduce(const ATMSpec& m_in, const std::string& x_text) {
    ATMSpec m = m_in;
    m.validate();
    std::vector<std::string> x = tokenize_input(m, x_text);
    std::vector<std::string> phi;
    for (unsigned i = 1; i <= m.phi_size; ++i) phi.push_back("p" + std::to_string(i));
    Reduction red(m, phi);

    ReduceResult res;
    res.scopes = red.names().stairs;
    res.scopes.push_back(red.names().prime);
    const unsigned gmax = std::max<unsigned>(static_cast<unsigned>(x.size()) + 1, 6);
    for (unsigned i = 0; i <= gmax; ++i) res.tableaus.push_back(ReductionNames::gamma(i));
    for (unsigned i = 1; i <= m.alternations; ++i) res.tableaus.push_back(ReductionNames::alpha(i));
    res.scopes.insert(res.scopes.end(), res.tableaus.begin(), res.tableaus.end());

    std::vector<std::string> reserved = res.scopes;
    reserved.push_back(red.names().t);
    reserved.push_back(red.names().p);
    for (auto& c : red.xi()) reserved.push_back(xi_name(c));
    require_fresh(phi, reserved);

    std::vector<Formula> parts{red.canon_prime(), gen_scopes(res.scopes, m.depth)};
    for (auto& s : res.tableaus) parts.push_back(red.pre_tableau(prop(s)));
    parts.push_back(red.run(1, x));
    res.formula = conj_all(parts);
    return res;
}

// ------------------------------------------------------------ witness side

std::pair<std::uint64_t, std::uint64_t> location_of(const KripkeStructure& K, std::size_t w,
                                                    const std::vector<std::string>& phi, unsigned k,
                                                    const ReductionNames& names, std::uint64_t budget) {
    if (k < 1) throw std::invalid_argument("locations need depth at least 1");
    TypeTable table(phi);
    std::vector<TypeId> delta = table.enumerate(k - 1, budget);
    if (delta.size() > 63) throw BudgetExceeded("location rank over too many types", std::to_string(delta.size()));
    std::map<std::uint32_t, std::size_t> rank;
    for (std::size_t i = 0; i < delta.size(); ++i) rank[delta[i].v] = i;
    Team tt(K.size()), tp(K.size());
    for (auto v : K.succ(w)) {
        bool t = K.holds(v, names.t), p = K.holds(v, names.p);
        if (t == p) throw std::invalid_argument("successor " + K.name(v) + " is not cleanly marked t or p");
        (t ? tt : tp).set(v);
    }
    auto mask = [&](const Team& S) {
        std::uint64_t m = 0;
        for (TypeId id : table.types_of_team(K, S, k - 1)) m |= std::uint64_t{1} << rank.at(id.v);
        return m + 1;
    };
    return {mask(tt), mask(tp)};
}

Cell cell_of(const KripkeStructure& K, std::size_t w, const ATMSpec& m) {
    std::optional<Cell> found;
    for (auto& c : xi_cells(m)) {
        if (!K.holds(w, xi_name(c))) continue;
        if (found) throw std::invalid_argument("world " + K.name(w) + " carries two cell symbols");
        found = c;
    }
    if (!found) throw std::invalid_argument("world " + K.name(w) + " carries no cell symbol");
    return *found;
}

PretableauWitness build_pretableau_witness(const ATMSpec& m, const std::vector<std::string>& scopes,
                                           const std::optional<std::vector<std::vector<Cell>>>& run,
                                           std::uint64_t budget) {
    std::vector<std::string> phi;
    for (unsigned i = 1; i <= m.phi_size; ++i) phi.push_back("p" + std::to_string(i));
    const unsigned k = m.depth;
    PretableauWitness wt;
    wt.base = build_staircase(phi, k, true, budget);
    KripkeStructure& K = wt.base.K;
    ReductionNames names;
    TypeTable table(phi);
    std::vector<TypeId> delta = table.enumerate(k - 1, budget);
    if (delta.size() > 20) throw BudgetExceeded("witness needs 2^" + std::to_string(delta.size()) + " locations per axis",
                                                "2^" + std::to_string(delta.size()));
    wt.n = std::uint64_t{1} << delta.size();
    auto cells = xi_cells(m);
    const std::uint64_t per_loc = run ? 1 : cells.size();
    if (wt.n * wt.n * per_loc * scopes.size() > budget)
        throw BudgetExceeded("witness exceeds the budget", std::to_string(wt.n * wt.n * per_loc * scopes.size()));
    if (run && (run->size() != wt.n || std::any_of(run->begin(), run->end(), [&](auto& r) { return r.size() != wt.n; })))
        throw std::invalid_argument("run must be an N x N matrix");

    for (auto& c : cells) K.declare(xi_name(c));
    K.declare(names.t);
    K.declare(names.p);
    for (auto& s : scopes) {
        K.declare(s);
        auto& list = wt.scope_worlds[s];
        for (std::uint64_t i = 0; i < wt.n; ++i)
            for (std::uint64_t j = 0; j < wt.n; ++j) {
                std::vector<Cell> here = run ? std::vector<Cell>{(*run)[i][j]} : cells;
                for (std::size_t e = 0; e < here.size(); ++e) {
                    std::string base = s + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" +
                                       std::to_string(e);
                    std::size_t w = K.add_world(base);
                    K.label(w, s);
                    K.label(w, xi_name(here[e]));
                    std::size_t child = 0;
                    for (std::size_t b = 0; b < delta.size(); ++b) {
                        if ((i >> b) & 1U) {
                            std::size_t v = realize_type(K, table, delta[b], base + ".t" + std::to_string(child++),
                                                         {s, names.t});
                            K.add_edge(w, v);
                        }
                        if ((j >> b) & 1U) {
                            std::size_t v = realize_type(K, table, delta[b], base + ".p" + std::to_string(child++),
                                                         {s, names.p});
                            K.add_edge(w, v);
                        }
                    }
                    list.push_back(w);
                }
            }
    }
    Team T = K.empty_team();
    wt.base.team.for_each([&](std::size_t w) { T.set(w); });
    for (auto& [s, ws] : wt.scope_worlds)
        for (auto w : ws) T.set(w);
    wt.base.team = T;
    return wt;
}

}  // namespace mtl
