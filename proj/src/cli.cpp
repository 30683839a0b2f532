#include "mtl/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtl/canonical.hpp"
#include "mtl/checker.hpp"
#include "mtl/decide.hpp"
#include "mtl/encodings.hpp"
#include "mtl/reduction.hpp"
#include "mtl/translate.hpp"
#include "mtl/types.hpp"

namespace mtl {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "-" reads standard input, an existing path reads that file, anything else
// is formula text.
Formula read_formula(const std::string& spec, std::istream& in) {
    if (spec == "-") return parse(slurp(in));
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) {
        std::ifstream f(spec);
        return parse(slurp(f));
    }
    return parse(spec);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        cur.erase(0, cur.find_first_not_of(" \t"));
        cur.erase(cur.find_last_not_of(" \t") + 1);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        if (text.empty() || text.back() != '\n') out << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
    if (text.empty() || text.back() != '\n') f << '\n';
}

std::vector<std::string> stairs_upto(unsigned k) {
    std::vector<std::string> s;
    for (unsigned i = 0; i <= k; ++i) s.push_back(stair_name(i));
    return s;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    CLI::App app{"Modal team logic toolkit"};
    app.require_subcommand(1);

    std::string formula_s, model_s, output_s, props_s, left_s, right_s, machine_s, input_s, witness_s;
    std::string family, a_s = "a", b_s = "b", scope_s = "a", names_s, name_s, args_s, which;
    unsigned depth = 0, index = 0;
    std::uint64_t budget = kDefaultBudget;
    int jobs = 1;
    bool strict = false, list = false, prime = false, star = false, no_reduce = false;
    bool depth_given = false;

    auto* c_parse = app.add_subcommand("parse", "Print the canonical core form of a formula");
    c_parse->add_option("formula", formula_s, "Formula text, file, or -")->required();

    auto* c_check = app.add_subcommand("check", "Model-check a formula on a model's team");
    c_check->add_option("--model", model_s)->required();
    c_check->add_option("--formula", formula_s)->required();
    c_check->add_flag("--strict", strict, "Use strict semantics");

    CLI::App* c_dec[2];
    const char* dec_names[2] = {"sat", "val"};
    for (int i = 0; i < 2; ++i) {
        c_dec[i] = app.add_subcommand(dec_names[i], i == 0 ? "Decide satisfiability" : "Decide validity");
        c_dec[i]->add_option("--formula", formula_s)->required();
        c_dec[i]->add_option("--budget", budget);
        c_dec[i]->add_option("--jobs", jobs)->check(CLI::Range(1, 1024));
        c_dec[i]->add_flag("--no-reduce", no_reduce, "Search every subteam of the unpruned canonical model");
        if (i == 0) c_dec[i]->add_option("--witness", witness_s, "Write a model of the formula here");
    }

    auto* c_canon = app.add_subcommand("canon", "Emit the canonical model");
    c_canon->add_option("--props", props_s);
    c_canon->add_option("--depth", depth)->required();
    c_canon->add_option("-o,--output", output_s);
    c_canon->add_option("--budget", budget);

    auto* c_stair = app.add_subcommand("staircase", "Emit a k-staircase");
    c_stair->add_option("--props", props_s);
    c_stair->add_option("--depth", depth)->required();
    c_stair->add_flag("--prime", prime);
    c_stair->add_option("-o,--output", output_s);
    c_stair->add_option("--budget", budget);

    auto* c_types = app.add_subcommand("types", "Count (and list) the types");
    c_types->add_option("--props", props_s);
    c_types->add_option("--depth", depth)->required();
    c_types->add_flag("--list", list);
    c_types->add_option("--budget", budget);

    auto* c_bisim = app.add_subcommand("bisim", "Test k-bisimilarity of two worlds");
    c_bisim->add_option("--model", model_s)->required();
    c_bisim->add_option("--left", left_s)->required();
    c_bisim->add_option("--right", right_s)->required();
    c_bisim->add_option("--depth", depth)->required();
    c_bisim->add_option("--props", props_s, "Defaults to every proposition of the model");

    auto* c_gen = app.add_subcommand("gen", "Emit a generated formula family");
    c_gen->add_option("family", family,
                      "exists-sub|forall-sub|exists-one|forall-one|max|strict-max|chi|rho|canon|scopes|zeta|component")
        ->required();
    c_gen->add_option("--props", props_s);
    c_gen->add_option("--depth", depth)->each([&](const std::string&) { depth_given = true; });
    c_gen->add_option("--i", index);
    c_gen->add_option("--a", a_s);
    c_gen->add_option("--b", b_s);
    c_gen->add_option("--scope", scope_s);
    c_gen->add_option("--body", formula_s);
    c_gen->add_option("--names", names_s);
    c_gen->add_flag("--star", star);
    c_gen->add_flag("--prime", prime);
    c_gen->add_option("--machine", machine_s);
    c_gen->add_option("--name", name_s);
    c_gen->add_option("--args", args_s);
    c_gen->add_option("--input", input_s);

    auto* c_reduce = app.add_subcommand("reduce", "Build the formula for an alternating machine and input");
    c_reduce->add_option("--machine", machine_s)->required();
    c_reduce->add_option("--input", input_s)->required();
    c_reduce->add_option("-o,--output", output_s);

    auto* c_tr = app.add_subcommand("translate", "Frame-layer or strict-semantics translation");
    c_tr->add_option("which", which, "frames|strict")->required()->check(CLI::IsMember({"frames", "strict"}));
    c_tr->add_option("--formula", formula_s);
    c_tr->add_option("--depth", depth)->each([&](const std::string&) { depth_given = true; });
    c_tr->add_option("--model", model_s, "With frames: also write the layer-restricted model");
    c_tr->add_option("--layers", names_s, "Layer propositions for --model (default l_0..l_k)");
    c_tr->add_option("-o,--output", output_s);
    c_tr->add_option("--props", props_s);
    c_tr->add_option("--i", index);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*c_parse) {
            out << print_canonical(read_formula(formula_s, in)) << '\n';
            return 0;
        }
        if (*c_check) {
            Model m = load_model_file(model_s);
            bool v = check(m.K, m.team, read_formula(formula_s, in), strict ? Mode::Strict : Mode::Lax);
            out << (v ? "true" : "false") << '\n';
            return v ? 0 : 1;
        }
        for (int i = 0; i < 2; ++i) {
            if (!*c_dec[i]) continue;
            DecideOptions opts;
            opts.budget = budget;
            opts.jobs = jobs;
            opts.reduce = !no_reduce;
            opts.want_witness = !witness_s.empty();
            DecideResult r = decide(read_formula(formula_s, in), i == 0 ? DecideMode::Sat : DecideMode::Val, opts);
            if (i == 0) out << (r.value ? "SAT" : "UNSAT") << '\n';
            else out << (r.value ? "VALID" : "INVALID") << '\n';
            if (r.witness) emit(witness_s, model_to_json(r.witness->K, r.witness->team), out);
            return r.value ? 0 : 1;
        }
        if (*c_canon) {
            CanonicalModel cm = build_canonical_model(split_list(props_s), depth, budget);
            emit(output_s, model_to_json(cm.K, cm.layer_team(depth), cm.metadata_json()), out);
            return 0;
        }
        if (*c_stair) {
            Staircase s = build_staircase(split_list(props_s), depth, prime, budget);
            emit(output_s, model_to_json(s.K, s.team, s.metadata_json()), out);
            return 0;
        }
        if (*c_types) {
            auto phi = split_list(props_s);
            if (!list) {
                out << count_types(phi.size(), depth) << '\n';
                return 0;
            }
            TypeTable table(phi);
            auto ts = table.enumerate(depth, budget);
            out << ts.size() << '\n';
            for (TypeId t : ts) out << table.render(t) << '\n';
            return 0;
        }
        if (*c_bisim) {
            Model m = load_model_file(model_s);
            auto phi = props_s.empty() ? m.K.propositions() : split_list(props_s);
            bool v = bisimilar_points(m.K, m.K.index(left_s), m.K, m.K.index(right_s), phi, depth);
            out << (v ? "true" : "false") << '\n';
            return v ? 0 : 1;
        }
        if (*c_gen) {
            auto phi = split_list(props_s);
            Formula a = prop(a_s), b = prop(b_s);
            Formula f;
            static const std::map<std::string, Quantifier> quants{{"exists-sub", Quantifier::ExistsSub},
                                                                   {"forall-sub", Quantifier::ForallSub},
                                                                   {"exists-one", Quantifier::ExistsOne},
                                                                   {"forall-one", Quantifier::ForallOne}};
            if (auto q = quants.find(family); q != quants.end()) {
                if (formula_s.empty()) throw UsageError("quantifiers need --body");
                f = gen_quantifier(q->second, prop(scope_s), read_formula(formula_s, in));
            } else if (family == "max") {
                f = gen_max(phi, index);
            } else if (family == "strict-max") {
                f = strict_rewrite_max(phi, index);
            } else if (family == "chi") {
                require_fresh(phi, {a_s, b_s});
                f = gen_chi(phi, depth, a, b, star);
            } else if (family == "rho") {
                require_fresh(phi, {a_s, b_s});
                f = depth == 0 ? gen_rho0(phi, index, b) : gen_rho(phi, index, depth, a, b);
            } else if (family == "canon") {
                f = gen_canon(phi, depth, stairs_upto(depth),
                              prime ? std::optional<std::string>(kPrimeStair) : std::nullopt);
            } else if (family == "scopes") {
                f = gen_scopes(split_list(names_s), depth);
            } else if (family == "zeta") {
                auto st = stairs_upto(depth);
                std::vector<std::string> all = st;
                all.push_back(a_s);
                all.push_back(b_s);
                require_fresh(phi, all);
                f = gen_zeta(phi, depth, a, b, st, star);
            } else if (family == "component") {
                if (machine_s.empty() || name_s.empty()) throw UsageError("component needs --machine and --name");
                ATMSpec m = load_atm_file(machine_s);
                std::vector<std::string> p;
                for (unsigned i = 1; i <= m.phi_size; ++i) p.push_back("p" + std::to_string(i));
                Reduction red(m, p);
                std::vector<std::string> x = input_s.empty() ? std::vector<std::string>{} : tokenize_input(m, input_s);
                f = red.component(name_s, split_list(args_s), x);
            } else {
                throw UsageError("unknown family '" + family + "'");
            }
            out << print_canonical(f) << '\n';
            return 0;
        }
        if (*c_reduce) {
            ReduceResult r = reduce(load_atm_file(machine_s), input_s);
            if (output_s.empty() || output_s == "-") {
                out << print_canonical(r.formula) << '\n';
                return 0;
            }
            emit(output_s, print_canonical(r.formula), out);
            nlohmann::json j;
            j["md"] = r.formula.md();
            j["size"] = tree_size(r.formula);
            j["scopes"] = r.scopes;
            j["tableaus"] = r.tableaus;
            out << j.dump(2) << '\n';
            return 0;
        }
        if (*c_tr) {
            if (which == "strict") {
                out << print_canonical(strict_rewrite_max(split_list(props_s), index)) << '\n';
                return 0;
            }
            if (formula_s.empty()) throw UsageError("translate frames needs --formula");
            Formula phi = read_formula(formula_s, in);
            LayerTranslation t = frame_layer_translate(phi, depth_given ? depth : phi.md());
            for (auto& note : t.renamed) err << "renamed " << note << '\n';
            out << print_canonical(t.formula) << '\n';
            if (!model_s.empty()) {
                Model m = load_model_file(model_s);
                auto layers = names_s.empty() ? t.layers : split_list(names_s);
                KripkeStructure K = restrict_edges_by_layers(m.K, layers);
                Team T = K.empty_team();
                m.team.for_each([&](std::size_t w) { T.set(w); });
                emit(output_s, model_to_json(K, T, m.metadata_json), out);
            }
            return 0;
        }
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << " (required " << e.required << ")\n";
        return 3;
    } catch (const std::overflow_error& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace mtl
