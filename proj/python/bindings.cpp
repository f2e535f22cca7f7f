#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "tocsp/axiom.hpp"
#include "tocsp/cli.hpp"
#include "tocsp/equiv.hpp"
#include "tocsp/minimize.hpp"
#include "tocsp/syntax.hpp"

namespace py = pybind11;
using namespace tocsp;

namespace {

// A term together with the alphabet it was parsed against.
struct Process {
    Term term;
    std::shared_ptr<Alphabet> alpha;

    std::string str() const { return print(term, *alpha); }
};

struct Session {
    std::shared_ptr<Alphabet> alpha;

    explicit Session(const std::vector<std::string>& actions) : alpha(std::make_shared<Alphabet>(actions)) {}

    Process parse(const std::string& text) const { return {parse_process(text, *alpha), alpha}; }
    void declare(const std::string& name) { alpha->add(name); }
    std::vector<std::string> actions() const { return alpha->names(); }
};

ActionSet to_set(const Alphabet& alpha, const std::vector<std::string>& names) {
    ActionSet s;
    for (const auto& n : names) s.insert(alpha.at(n));
    return s;
}

void same_alphabet(const Process& p, const Process& q) {
    if (p.alpha != q.alpha) throw std::invalid_argument("processes come from different sessions");
}

}  // namespace

PYBIND11_MODULE(_tocsp, m) {
    m.doc() = "CCSP with time-outs: semantics, equivalence checking, modal logic, axioms, minimisation";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidTerm>(m, "InvalidTerm", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<InstanceTooLarge>(m, "InstanceTooLarge", PyExc_RuntimeError);

    py::class_<Process>(m, "Process")
        .def("__str__", &Process::str)
        .def("__repr__", [](const Process& p) { return "<Process " + p.str() + ">"; })
        .def("__eq__", [](const Process& p, const Process& q) { return p.term == q.term; })
        .def("__hash__", [](const Process& p) { return std::hash<const void*>{}(p.term); })
        .def("initials",
             [](const Process& p) {
                 Initials i = initials(p.term);
                 std::vector<std::string> names;
                 for (Action a : i.visible.elements()) names.push_back(p.alpha->name(a));
                 return py::make_tuple(names, i.tau);
             },
             "Visible initial actions and whether τ is enabled")
        .def("transitions", [](const Process& p) {
            std::vector<std::pair<std::string, Process>> out;
            for (const auto& mv : derive_transitions(p.term))
                out.emplace_back(p.alpha->label_name(mv.label), Process{mv.target, p.alpha});
            return out;
        });

    py::class_<Session>(m, "Session")
        .def(py::init<const std::vector<std::string>&>(), py::arg("actions"))
        .def("parse", &Session::parse, py::arg("text"))
        .def("declare", &Session::declare, py::arg("name"))
        .def_property_readonly("actions", &Session::actions);

    m.def("strong_bisim", [](const Process& p, const Process& q) {
        same_alphabet(p, q);
        return strong_bisim(p.term, q.term).equivalent;
    });
    m.def("reactive_bisim", [](const Process& p, const Process& q) {
        same_alphabet(p, q);
        return reactive_bisim(p.term, q.term).equivalent;
    });
    m.def("x_bisim", [](const Process& p, const std::vector<std::string>& env, const Process& q) {
        same_alphabet(p, q);
        return x_bisim(p.term, to_set(*p.alpha, env), q.term).equivalent;
    });
    m.def("initials_eq", [](const Process& p, const Process& q) {
        same_alphabet(p, q);
        return initials_eq(p.term, q.term).equivalent;
    });
    m.def(
        "sat",
        [](const Process& p, const std::string& formula, std::optional<std::vector<std::string>> env) {
            Formula f = parse_formula(formula, *p.alpha);
            return env ? sat_env(p.term, to_set(*p.alpha, *env), f) : sat(p.term, f);
        },
        py::arg("process"), py::arg("formula"), py::arg("env") = py::none());
    m.def("distinguishing_formula", [](const Process& p, const Process& q) -> std::optional<std::string> {
        same_alphabet(p, q);
        auto f = distinguishing_formula(p.term, q.term);
        if (!f) return std::nullopt;
        return print(*f, *p.alpha);
    });
    m.def("hnf", [](const Process& p) { return Process{hnf(p.term).as_term(), p.alpha}; });
    m.def("eq_recursion_free", [](const Process& p, const Process& q) {
        same_alphabet(p, q);
        return eq_recursion_free(p.term, q.term).equivalent;
    });
    m.def(
        "minimize",
        [](const Process& p) {
            CanonicalLts c = minimize({p.term});
            return py::make_tuple(c.size(), Process{to_recspec(c, c.root_classes[0]), p.alpha});
        },
        "Number of classes and the quotient as a recursive specification");
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = tocsp::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a tocsp subcommand; returns (exit code, stdout, stderr)");
}
