#include "tocsp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "tocsp/axiom.hpp"
#include "tocsp/minimize.hpp"
#include "tocsp/syntax.hpp"

namespace tocsp {

namespace {

using nlohmann::json;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return static_cast<bool>(in);
}

std::size_t env_number(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (*end) throw UsageError(std::string(name) + " must be a non-negative integer");
    return static_cast<std::size_t>(n);
}

// Alphabet, named processes and budgets shared by one invocation.
class Workspace {
public:
    Alphabet alpha;
    ProcessTable processes;
    CheckOptions opts;

    void load_file(const std::string& path) {
        SpecFile f = parse_spec(read_file(path), &alpha);
        alpha = f.alphabet;
        for (auto& p : f.processes) processes.push_back(p);
        files_.emplace(path, std::move(f.processes));
    }

    // `file[:Name]`, a process name, or an inline expression.
    Term resolve(const std::string& arg) {
        if (Term t = named(arg)) return t;
        std::string path = arg, name;
        if (!file_exists(path)) {
            auto colon = arg.rfind(':');
            if (colon != std::string::npos && file_exists(arg.substr(0, colon))) {
                path = arg.substr(0, colon);
                name = arg.substr(colon + 1);
            } else {
                path.clear();
            }
        }
        if (!path.empty()) {
            if (!files_.count(path)) load_file(path);
            const auto& table = files_.at(path);
            if (table.empty()) throw UsageError("'" + path + "' declares no process");
            if (name.empty()) {
                for (const auto& [n, t] : table)
                    if (n == "main") return t;
                return table.back().second;
            }
            for (const auto& [n, t] : table)
                if (n == name) return t;
            throw UsageError("'" + path + "' has no process '" + name + "'");
        }
        declare_actions(arg);
        Term t = parse_process(arg, alpha, &processes);
        if (!free_variables(t).empty())
            throw UsageError("unknown process name '" + *free_variables(t).begin() + "'");
        return t;
    }

    // Inline expressions may use actions that no file declares.
    void declare_actions(const std::string& text) {
        static const std::regex prefix_re(R"(([A-Za-z_][A-Za-z0-9_']*)\s*\.)");
        static const std::regex set_re(R"(\{([^{}=]*)\})");
        static const std::regex ident_re(R"([A-Za-z_][A-Za-z0-9_']*)");
        auto add = [&](const std::string& n) {
            if (!Alphabet::is_reserved(n) && !is_process(n)) alpha.add(n);
        };
        for (std::sregex_iterator it(text.begin(), text.end(), prefix_re), e; it != e; ++it) add((*it)[1]);
        for (std::sregex_iterator it(text.begin(), text.end(), set_re), e; it != e; ++it) {
            std::string inner = (*it)[1];
            for (std::sregex_iterator jt(inner.begin(), inner.end(), ident_re); jt != std::sregex_iterator(); ++jt)
                add((*jt)[0]);
        }
    }

    ActionSet parse_set(std::string text) {
        if (!text.empty() && text.front() == '{') {
            if (text.back() != '}') throw UsageError("malformed action set '" + text + "'");
            text = text.substr(1, text.size() - 2);
        }
        static const std::regex ident_re(R"([A-Za-z_][A-Za-z0-9_']*)");
        for (std::sregex_iterator it(text.begin(), text.end(), ident_re), e; it != e; ++it)
            if (!Alphabet::is_reserved((*it)[0].str())) alpha.add((*it)[0].str());
        return alpha.parse_list(text);
    }

private:
    Term named(const std::string& n) const {
        for (const auto& [name, t] : processes)
            if (name == n) return t;
        return nullptr;
    }
    bool is_process(const std::string& n) const { return named(n) != nullptr; }

    std::map<std::string, ProcessTable> files_;
};

json set_json(const Alphabet& alpha, ActionSet s) {
    json arr = json::array();
    for (Action a : s.elements()) arr.push_back(alpha.name(a));
    return arr;
}

json certificate_json(const Certificate& c, const Alphabet& alpha, std::pair<Term, Term> root) {
    json pairs = json::array();
    for (auto [p, q] : c.pairs) pairs.push_back({print(p, alpha), print(q, alpha)});
    return {{"relation", relation_name(c.relation)},
            {"alphabet", alpha.names()},
            {"env_alphabet", set_json(alpha, c.env_alphabet)},
            {"root", {print(root.first, alpha), print(root.second, alpha)}},
            {"pairs", pairs}};
}

std::string initials_text(const Alphabet& alpha, const Initials& in) {
    std::string s = "{";
    bool first = true;
    for (Action a : in.visible.elements()) {
        s += (first ? "" : ",") + alpha.name(a);
        first = false;
    }
    if (in.tau) s += first ? "tau" : ",tau";
    return s + "}";
}

struct Common {
    bool json_out = false;
    std::vector<std::string> files;
    std::optional<std::size_t> max_states;
    std::optional<int> env_limit;
};

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int main(const std::vector<std::string>& args) {
        CLI::App app{"Workbench for CCSP with time-outs", "tocsp"};
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all");
        auto common = [&](CLI::App* sub) {
            sub->add_flag("--json", c_.json_out, "Machine-readable output");
            sub->add_option("--file", c_.files, "Load a specification file into the workspace (repeatable)")
                ->allow_extra_args(false);
            sub->add_option("--max-states", c_.max_states, "Exploration budget");
            sub->add_option("--env-limit", c_.env_limit, "Largest relevant alphabet for environment enumeration");
        };

        std::vector<std::string> procs;
        std::string rel = "reactive", env, formula, law;
        bool dot = false, why = false, cert = false, trace = false, as_term = false, no_side = false;
        bool env_given = false;
        std::vector<std::string> binds;
        std::string cert_path;

        auto* lts = app.add_subcommand("lts", "Print the reachable transition system");
        common(lts);
        lts->add_option("process", procs, "Process")->required()->expected(1);
        lts->add_flag("--dot", dot, "Graphviz output");

        auto* ini = app.add_subcommand("initials", "Print I(P)");
        common(ini);
        ini->add_option("process", procs, "Process")->required()->expected(1);

        auto* chk = app.add_subcommand("check", "Decide an equivalence");
        common(chk);
        chk->add_option("processes", procs, "Two processes")->required()->expected(2);
        chk->add_option("--rel", rel, "strong | reactive | initials | x-bisim (alias x)")
            ->check(CLI::IsMember({"strong", "reactive", "initials", "x", "x-bisim"}));
        chk->add_option("--env", env, "Environment set X for --rel x");
        chk->add_flag("--why", why, "Print a distinguishing formula when not equivalent");
        chk->add_flag("--cert", cert, "Print a relation witnessing equivalence");

        auto* sat_cmd = app.add_subcommand("sat", "Model-check a formula");
        common(sat_cmd);
        sat_cmd->add_option("process", procs, "Process")->required()->expected(1);
        sat_cmd->add_option("--formula", formula, "Formula")->required();
        sat_cmd->add_option("--env", env, "Check P ⊨_X φ for this environment");

        auto* hnf_cmd = app.add_subcommand("hnf", "Head normal form");
        common(hnf_cmd);
        hnf_cmd->add_option("process", procs, "Process")->required()->expected(1);
        hnf_cmd->add_flag("--trace", trace, "Print the rewrite steps");

        auto* prove = app.add_subcommand("prove-eq", "Equational decision for recursion-free processes");
        common(prove);
        prove->add_option("processes", procs, "Two processes")->required()->expected(2);
        prove->add_flag("--trace", trace, "Print the head normalisation steps");

        auto* laws = app.add_subcommand("laws", "List or check the laws");
        common(laws);
        laws->add_option("--check", law, "Law to instantiate and check");
        laws->add_option("--bind", binds, "Binding name=value (repeatable)")->allow_extra_args(false);
        laws->add_flag("--no-side-condition", no_side, "Skip the optional side condition");

        auto* mini = app.add_subcommand("minimize", "Canonical quotient modulo reactive bisimilarity");
        common(mini);
        mini->add_option("process", procs, "Process")->required()->expected(1);
        mini->add_flag("--as-term", as_term, "Also print the recursive specification");

        auto* dist = app.add_subcommand("distinguish", "Distinguishing formula for two processes");
        common(dist);
        dist->add_option("processes", procs, "Two processes")->required()->expected(2);

        auto* ver = app.add_subcommand("verify-cert", "Re-check a certificate produced by check --cert --json");
        common(ver);
        ver->add_option("certificate", cert_path, "JSON file")->required();

        try {
            std::vector<std::string> rev(args.rbegin(), args.rend());
            app.parse(rev);
        } catch (const CLI::CallForHelp&) {
            out_ << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err_ << "tocsp: " << e.what() << "\n";
            return kExitUsage;
        }
        env_given = !env.empty();

        try {
            ws_.opts.max_states = env_number("TOCSP_MAX_STATES", kDefaultMaxStates);
            ws_.opts.env_limit = static_cast<int>(env_number("TOCSP_ENV_LIMIT", kDefaultEnvLimit));
            if (c_.max_states) ws_.opts.max_states = *c_.max_states;
            if (c_.env_limit) ws_.opts.env_limit = *c_.env_limit;
            for (const auto& f : c_.files) ws_.load_file(f);

            if (lts->parsed()) return cmd_lts(procs[0], dot);
            if (ini->parsed()) return cmd_initials(procs[0]);
            if (chk->parsed()) return cmd_check(procs[0], procs[1], rel, env, env_given, why, cert);
            if (sat_cmd->parsed()) return cmd_sat(procs[0], formula, env, env_given);
            if (hnf_cmd->parsed()) return cmd_hnf(procs[0], trace);
            if (prove->parsed()) return cmd_prove(procs[0], procs[1], trace);
            if (laws->parsed()) return cmd_laws(law, binds, !no_side);
            if (mini->parsed()) return cmd_minimize(procs[0], as_term);
            if (dist->parsed()) return cmd_distinguish(procs[0], procs[1]);
            if (ver->parsed()) return cmd_verify(cert_path);
        } catch (const BudgetExceeded& e) {
            err_ << "tocsp: budget exceeded: " << e.what() << "\n";
            return kExitBudget;
        } catch (const InstanceTooLarge& e) {
            err_ << "tocsp: budget exceeded: " << e.what() << "\n";
            return kExitBudget;
        } catch (const ParseError& e) {
            err_ << "tocsp: parse error at " << e.what() << "\n";
            return kExitUsage;
        } catch (const std::invalid_argument& e) {
            err_ << "tocsp: " << e.what() << "\n";
            return kExitUsage;
        } catch (const json::exception& e) {
            err_ << "tocsp: malformed certificate: " << e.what() << "\n";
            return kExitUsage;
        }
        return kExitUsage;
    }

private:
    void emit(const json& j) { out_ << j.dump(2) << "\n"; }
    std::string show(Term t) const { return print(t, ws_.alpha); }

    int cmd_lts(const std::string& p, bool dot) {
        Term t = ws_.resolve(p);
        Lts l = explore({t}, ws_.opts.max_states);
        if (c_.json_out) {
            json states = json::array(), trans = json::array();
            for (Term s : l.states) states.push_back(show(s));
            for (std::uint32_t i = 0; i < l.size(); ++i)
                for (auto k = l.begin(i); k < l.end(i); ++k)
                    trans.push_back({{"from", i}, {"label", ws_.alpha.label_name(l.labels[k])}, {"to", l.targets[k]}});
            emit({{"command", "lts"}, {"states", states}, {"transitions", trans}, {"roots", l.roots},
                  {"complete", l.complete}});
        } else {
            out_ << (dot ? lts_to_dot(l, ws_.alpha) : lts_to_text(l, ws_.alpha));
        }
        if (!l.complete) {
            err_ << "tocsp: budget exceeded: more than " << ws_.opts.max_states << " states\n";
            return kExitBudget;
        }
        return kExitOk;
    }

    int cmd_initials(const std::string& p) {
        Term t = ws_.resolve(p);
        Initials in = initials(t);
        if (c_.json_out) {
            json arr = set_json(ws_.alpha, in.visible);
            if (in.tau) arr.push_back("tau");
            emit({{"command", "initials"}, {"initials", arr}});
        } else {
            out_ << initials_text(ws_.alpha, in) << "\n";
        }
        return kExitOk;
    }

    int cmd_check(const std::string& a, const std::string& b, const std::string& rel, const std::string& env,
                  bool env_given, bool why, bool cert) {
        Term p = ws_.resolve(a), q = ws_.resolve(b);
        CheckOptions o = ws_.opts;
        o.explain = why;
        o.certify = cert;
        Verdict v;
        std::pair<Term, Term> root{p, q};
        if (rel == "strong") {
            v = strong_bisim(p, q, o);
        } else if (rel == "reactive") {
            v = reactive_bisim(p, q, o);
        } else if (rel == "initials") {
            v = initials_eq(p, q);
        } else {
            if (!env_given) throw UsageError("--rel x-bisim needs --env");
            ActionSet x = ws_.parse_set(env);
            v = x_bisim(p, x, q, o);
            root = {theta(x & relevant_of(p, q), p), theta(x & relevant_of(p, q), q)};
        }
        std::string note;
        if (why && !v.equivalent && !v.formula && rel == "strong") {
            // The logic has no time-out modality; fall back to a reactive witness if there is one.
            v.formula = distinguishing_formula(p, q, o);
            if (!v.formula) note = "the processes are reactive bisimilar; they differ only in time-out structure";
        }
        if (c_.json_out) {
            json j{{"command", "check"}, {"relation", rel}, {"equivalent", v.equivalent}};
            if (!note.empty()) j["note"] = note;
            if (v.formula) j["formula"] = print(*v.formula, ws_.alpha);
            if (v.certificate) j["certificate"] = certificate_json(*v.certificate, ws_.alpha, root);
            emit(j);
        } else {
            out_ << (v.equivalent ? "equivalent" : "not equivalent") << "\n";
            if (v.formula) out_ << "formula: " << print(*v.formula, ws_.alpha) << "\n";
            if (!note.empty()) out_ << "note: " << note << "\n";
            if (v.certificate) {
                out_ << "relation (" << v.certificate->pairs.size() << " pairs):\n";
                for (auto [x, y] : v.certificate->pairs) out_ << "  " << show(x) << "  ~  " << show(y) << "\n";
            }
        }
        return v.equivalent ? kExitOk : kExitNegative;
    }

    ActionSet relevant_of(Term p, Term q) {
        return relevant_alphabet(explore({p, q}, ws_.opts.max_states));
    }

    int cmd_sat(const std::string& a, const std::string& formula, const std::string& env, bool env_given) {
        Term p = ws_.resolve(a);
        ws_.declare_actions(formula);
        Formula f = parse_formula(formula, ws_.alpha);
        bool ok;
        if (env_given) {
            ok = sat_env(p, ws_.parse_set(env), f);
        } else {
            ok = sat(p, f);
        }
        if (c_.json_out)
            emit({{"command", "sat"}, {"formula", print(f, ws_.alpha)}, {"satisfied", ok}});
        else
            out_ << (ok ? "satisfied" : "not satisfied") << "\n";
        return ok ? kExitOk : kExitNegative;
    }

    int cmd_hnf(const std::string& a, bool trace) {
        Term p = ws_.resolve(a);
        RewriteTrace tr;
        HeadNormalForm h = hnf(p, &tr);
        if (c_.json_out) {
            json j{{"command", "hnf"}, {"hnf", show(h.as_term())}};
            json summands = json::array();
            for (const auto& m : h.summands)
                summands.push_back({{"label", ws_.alpha.label_name(m.label)}, {"target", show(m.target)}});
            j["summands"] = summands;
            if (trace) j["trace"] = trace_json(tr);
            emit(j);
        } else {
            if (trace) out_ << tr.to_text(ws_.alpha);
            out_ << show(h.as_term()) << "\n";
        }
        return kExitOk;
    }

    json trace_json(const RewriteTrace& tr) {
        json steps = json::array();
        for (const auto& s : tr.steps)
            steps.push_back({{"axiom", s.axiom}, {"position", s.position}, {"before", show(s.before)},
                             {"after", show(s.after)}});
        return steps;
    }

    int cmd_prove(const std::string& a, const std::string& b, bool trace) {
        Term p = ws_.resolve(a), q = ws_.resolve(b);
        EquationalVerdict v = eq_recursion_free(p, q);
        auto classes = environment_classes(hnf(p), hnf(q), v.relevant, &ws_.alpha);
        for (std::size_t i = 0; i < classes.size() && i < v.classes.size(); ++i) classes[i].equal = v.classes[i].equal;
        if (c_.json_out) {
            json cs = json::array();
            for (const auto& c : classes) {
                json members = json::array();
                for (auto m : c.members) members.push_back(set_json(ws_.alpha, m));
                cs.push_back({{"description", c.description}, {"members", members}, {"psi_left", show(c.psi_left)},
                              {"psi_right", show(c.psi_right)}, {"equal", c.equal}});
            }
            json j{{"command", "prove-eq"}, {"equivalent", v.equivalent},
                   {"relevant", set_json(ws_.alpha, v.relevant)}, {"classes", cs}};
            if (trace) j["trace"] = trace_json(v.trace);
            emit(j);
        } else {
            if (trace) out_ << v.trace.to_text(ws_.alpha);
            out_ << "relevant actions: " << ws_.alpha.format(v.relevant) << "\n";
            for (const auto& c : classes) {
                out_ << "case " << c.description << ": psi_X(P) = " << show(c.psi_left)
                     << "\n    psi_X(Q) = " << show(c.psi_right) << "\n    " << (c.equal ? "equal" : "differ")
                     << "\n";
            }
            out_ << (v.equivalent ? "equivalent" : "not equivalent") << "\n";
        }
        return v.equivalent ? kExitOk : kExitNegative;
    }

    int cmd_laws(const std::string& law, const std::vector<std::string>& binds, bool enforce) {
        if (law.empty()) {
            json list = json::array();
            for (const auto& name : law_names()) {
                json params = json::array();
                std::string line = name + ":";
                for (const auto& [n, kind] : law_parameters(name)) {
                    params.push_back({{"name", n}, {"kind", kind}});
                    line += " " + n + "(" + kind + ")";
                }
                list.push_back({{"law", name}, {"parameters", params}});
                if (!c_.json_out) out_ << line << "\n";
            }
            if (c_.json_out) emit({{"command", "laws"}, {"laws", list}});
            return kExitOk;
        }
        auto params = law_parameters(law);
        std::map<std::string, std::string> raw;
        for (const auto& b : binds) {
            auto eq = b.find('=');
            if (eq == std::string::npos) throw UsageError("--bind expects name=value, got '" + b + "'");
            raw[b.substr(0, eq)] = b.substr(eq + 1);
        }
        LawBinding binding;
        for (const auto& [n, kind] : params) {
            auto it = raw.find(n);
            if (it == raw.end()) throw UsageError(law + ": missing --bind " + n + "=...");
            if (kind == "term") {
                binding[n] = ws_.resolve(it->second);
            } else if (kind == "set") {
                binding[n] = ws_.parse_set(it->second);
            } else {
                if (Alphabet::is_reserved(it->second)) throw UsageError(n + " must be a visible action");
                binding[n] = ws_.alpha.add(it->second);
            }
            raw.erase(it);
        }
        if (!raw.empty()) throw UsageError(law + " has no parameter '" + raw.begin()->first + "'");
        LawInstance inst = instantiate_law(law, binding, ws_.alpha.all(), enforce);
        CheckOptions o = ws_.opts;
        o.explain = true;
        Verdict v = inst.relation == Relation::Strong ? strong_bisim(inst.lhs, inst.rhs, o)
                                                      : reactive_bisim(inst.lhs, inst.rhs, o);
        if (c_.json_out) {
            json j{{"command", "laws"}, {"law", law}, {"lhs", show(inst.lhs)}, {"rhs", show(inst.rhs)},
                   {"relation", relation_name(inst.relation)}, {"holds", v.equivalent}};
            if (v.formula) j["formula"] = print(*v.formula, ws_.alpha);
            emit(j);
        } else {
            out_ << law << ": " << show(inst.lhs) << "  =  " << show(inst.rhs) << "\n";
            out_ << (v.equivalent ? "holds" : "fails") << " under " << relation_name(inst.relation) << "\n";
            if (v.formula) out_ << "formula: " << print(*v.formula, ws_.alpha) << "\n";
        }
        return v.equivalent ? kExitOk : kExitNegative;
    }

    int cmd_minimize(const std::string& a, bool as_term) {
        Term p = ws_.resolve(a);
        CanonicalLts c = minimize({p}, ws_.opts);
        Term spec = as_term ? to_recspec(c, c.root_classes.at(0)) : nullptr;
        if (c_.json_out) {
            json classes = json::array(), trans = json::array();
            for (std::size_t i = 0; i < c.size(); ++i) {
                classes.push_back({{"representative", show(c.representative_terms[i])}, {"size", c.classes[i].size()}});
                for (auto [l, t] : c.transitions[i])
                    trans.push_back({{"from", i}, {"label", ws_.alpha.label_name(l)}, {"to", t}});
            }
            json j{{"command", "minimize"}, {"classes", classes}, {"transitions", trans}, {"root", c.root_classes.at(0)}};
            if (spec) j["term"] = show(spec);
            emit(j);
        } else {
            out_ << canonical_to_text(c, ws_.alpha);
            if (spec) out_ << show(spec) << "\n";
        }
        return kExitOk;
    }

    int cmd_distinguish(const std::string& a, const std::string& b) {
        Term p = ws_.resolve(a), q = ws_.resolve(b);
        auto f = distinguishing_formula(p, q, ws_.opts);
        if (c_.json_out) {
            json j{{"command", "distinguish"}, {"equivalent", !f}};
            if (f) j["formula"] = print(*f, ws_.alpha);
            emit(j);
        } else {
            out_ << (f ? print(*f, ws_.alpha) : std::string("none: the processes are reactive bisimilar")) << "\n";
        }
        return f ? kExitOk : kExitNegative;
    }

    int cmd_verify(const std::string& path) {
        json j = json::parse(read_file(path));
        if (j.contains("certificate")) j = j.at("certificate");
        for (const auto& n : j.at("alphabet")) ws_.alpha.add(n.get<std::string>());
        Certificate c;
        std::string rel = j.at("relation").get<std::string>();
        bool known = false;
        for (Relation r : {Relation::Strong, Relation::Reactive, Relation::Initials, Relation::XBisim})
            if (rel == relation_name(r)) {
                c.relation = r;
                known = true;
            }
        if (!known) throw UsageError("unknown relation '" + rel + "' in certificate");
        for (const auto& n : j.at("env_alphabet")) c.env_alphabet.insert(ws_.alpha.at(n.get<std::string>()));
        auto term = [&](const json& s) { return parse_process(s.get<std::string>(), ws_.alpha); };
        for (const auto& pr : j.at("pairs")) c.pairs.emplace_back(term(pr.at(0)), term(pr.at(1)));
        std::pair<Term, Term> root{term(j.at("root").at(0)), term(j.at("root").at(1))};
        std::string problem = verify_certificate(c, root);
        if (c_.json_out)
            emit({{"command", "verify-cert"}, {"valid", problem.empty()}, {"problem", problem}});
        else
            out_ << (problem.empty() ? "certificate valid" : "certificate invalid: " + problem) << "\n";
        return problem.empty() ? kExitOk : kExitNegative;
    }

    std::ostream& out_;
    std::ostream& err_;
    Common c_;
    Workspace ws_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Runner r(out, err);
    return r.main(args);
}

}  // namespace tocsp
