// Python bindings: load programs, solve goals, run bundled benchmarks.
#include "cclnc/bench.hpp"
#include "cclnc/engine.hpp"
#include "cclnc/parser.hpp"
#include "cclnc/typing.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using namespace cclnc;

namespace {

struct PyProgram {
    std::shared_ptr<Program> prog;
    std::vector<std::string> warnings;
};

PyProgram from_text(const std::string& text) {
    PyProgram p{std::make_shared<Program>(parse_program(text)), {}};
    p.warnings = check_program(*p.prog);
    return p;
}

PyProgram from_file(const std::string& path) {
    PyProgram p;
    p.prog = std::make_shared<Program>(load_program(path, &p.warnings));
    return p;
}

std::optional<LabelStrategy> strategy(const std::optional<std::string>& s) {
    if (!s || *s == "program") return std::nullopt;
    if (*s == "naive") return LabelStrategy::Naive;
    if (*s == "ff") return LabelStrategy::FirstFail;
    throw py::value_error("labeling must be naive, ff or program");
}

py::dict counters(const Counters& c) {
    py::dict d;
    d["steps"] = c.steps;
    d["label_choices"] = c.label_choices;
    d["solver_calls"] = c.solver_calls;
    d["answers"] = c.answers;
    return d;
}

py::dict solve(const PyProgram& p, const std::string& goal, bool projections,
               const std::optional<std::string>& labeling, std::size_t answers, const std::string& epsilon,
               bool trace) {
    ParsedGoal g = parse_goal(*p.prog, goal);
    check_goal(*p.prog, g);
    Config cfg;
    cfg.projections = projections;
    cfg.labeling = strategy(labeling);
    cfg.max_answers = answers;
    cfg.epsilon = parse_rational(epsilon);
    if (trace) cfg.trace = TraceLevel::Rules;
    std::vector<std::string> out;
    Counters c;
    std::vector<py::tuple> tr;
    {
        py::gil_scoped_release nogil;
        Engine e(*p.prog, g, cfg);
        for (const auto& a : e.solve()) out.push_back(show(a, cfg.show_totality));
        c = e.counters();
        py::gil_scoped_acquire gil;
        for (const auto& r : e.trace()) tr.push_back(py::make_tuple(r.step, r.rule, r.selected, r.detail));
    }
    py::dict d;
    d["answers"] = out;
    d["counters"] = counters(c);
    d["trace"] = tr;
    return d;
}

py::dict bench(const std::string& name, std::size_t n, bool projections, const std::optional<std::string>& labeling,
               const std::string& dir) {
    auto cases = bench_suite(name, n);
    if (cases.size() != 1) throw py::value_error("bench takes a single benchmark name");
    BenchResult r;
    {
        py::gil_scoped_release nogil;
        r = run_bench(cases[0], dir, projections, strategy(labeling));
    }
    py::dict d;
    d["answers"] = r.answers;
    d["correct"] = r.correct;
    d["why"] = r.why;
    d["counters"] = counters(r.counters);
    d["seconds"] = r.seconds;
    return d;
}

}  // namespace

PYBIND11_MODULE(cclnc, m) {
    m.doc() = "Cooperative constraint functional logic programming over M + H + FD + R";

    py::register_exception<SyntaxError>(m, "SyntaxError", PyExc_ValueError);
    py::register_exception<TypeError>(m, "TypeError", PyExc_ValueError);
    py::register_exception<EngineError>(m, "EngineError", PyExc_RuntimeError);

    py::class_<PyProgram>(m, "Program")
        .def(py::init(&from_text), py::arg("text"))
        .def_static("load", &from_file, py::arg("path"))
        .def_readonly("warnings", &PyProgram::warnings)
        .def("__str__", [](const PyProgram& p) { return print_program(*p.prog); });

    m.def("solve", &solve, py::arg("program"), py::arg("goal"), py::arg("projections") = true,
          py::arg("labeling") = py::none(), py::arg("answers") = 1, py::arg("epsilon") = "0",
          py::arg("trace") = false,
          "Solve goal; answers=0 asks for all. Returns {answers, counters, trace}.");
    m.def("bench", &bench, py::arg("name"), py::arg("n") = 100, py::arg("projections") = true,
          py::arg("labeling") = py::none(), py::arg("program_dir") = CCLNC_PROGRAM_DIR);
    m.def("goal_text", [](const std::string& which, std::size_t n) {
        if (which == "goal1") return goal1_text(n);
        if (which == "goal2") return goal2_text(n);
        if (which == "goal3") return goal3_text(n);
        if (which == "goal5") return goal5_text();
        throw py::value_error("goal1|goal2|goal3|goal5");
    }, py::arg("which"), py::arg("n") = 4);
}
