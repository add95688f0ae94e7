#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpinv/cli.hpp"
#include "cpinv/dynamics.hpp"
#include "cpinv/invariants.hpp"
#include "cpinv/linalg.hpp"

namespace py = pybind11;
using namespace cpinv;

namespace {

py::int_ to_py(const Integer& x)
{
    const std::string s = x.get_str();
    return py::reinterpret_steal<py::int_>(PyLong_FromString(s.c_str(), nullptr, 10));
}

Integer from_py(const py::handle& h)
{
    return Integer(py::str(h).cast<std::string>());
}

IntMatrix matrix_from_py(const py::sequence& rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : py::len(rows[0]);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        const py::sequence row = rows[i];
        if (py::len(row) != c)
            throw std::invalid_argument("matrix rows have different lengths");
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = from_py(row[j]);
    }
    return m;
}

py::list matrix_to_py(const IntMatrix& m)
{
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.append(to_py(m(i, j)));
        rows.append(row);
    }
    return rows;
}

py::dict group_to_py(const AbelianGroup& g)
{
    py::list torsion;
    for (const auto& t : g.torsion)
        torsion.append(to_py(t));
    py::dict d;
    d["free_rank"] = g.free_rank;
    d["torsion"] = torsion;
    d["text"] = g.to_string();
    return d;
}

DiffeoDescriptor descriptor(const std::string& actions, const std::string& label)
{
    return {parse_action_list(actions), label, false};
}

py::dict invariants_to_py(const DescriptorInvariants& inv)
{
    py::dict k;
    k["k0"] = group_to_py(inv.k_theory.k0);
    k["k1"] = group_to_py(inv.k_theory.k1);
    py::dict d;
    d["label"] = inv.descriptor.label;
    d["k_theory"] = k;
    d["hp"] = py::make_tuple(inv.hp.hp_even_dim, inv.hp.hp_odd_dim);
    d["odd_support"] = inv.grading.odd_support;
    d["support"] = inv.grading.support();
    d["e_infty"] = inv.grading.e_infty_dims;
    return d;
}

} // namespace

PYBIND11_MODULE(_cpinv, m)
{
    m.doc() = "Exact crossed-product invariants and dynamics checks for sphere products";
    m.attr("__version__") = CPINV_VERSION;

    py::register_exception<InvariantViolation>(m, "InvariantViolation");
    py::register_exception<dynamics::DegreeEstimationError>(m, "DegreeEstimationError");

    m.def(
        "smith_normal_form",
        [](const py::sequence& rows) {
            const auto s = smith_normal_form(matrix_from_py(rows));
            py::dict d;
            d["U"] = matrix_to_py(s.U);
            d["D"] = matrix_to_py(s.D);
            d["V"] = matrix_to_py(s.V);
            return d;
        },
        py::arg("matrix"), "U, D, V with U M V = D");
    m.def(
        "cokernel", [](const py::sequence& rows) { return group_to_py(cokernel(matrix_from_py(rows))); },
        py::arg("matrix"));

    m.def(
        "invariants",
        [](const std::vector<int>& dims, const std::string& actions, const std::string& label) {
            const SphereProductManifold man{dims};
            man.validate();
            return invariants_to_py(compute_invariants(man, descriptor(actions, label)));
        },
        py::arg("manifold"), py::arg("actions"), py::arg("label") = "phi",
        "K-theory, HP dimensions and E_inf grading for one descriptor");
    m.def(
        "compare",
        [](const std::vector<int>& dims, const std::string& a, const std::string& b) {
            const SphereProductManifold man{dims};
            man.validate();
            const auto r = compare_invariants(descriptor(a, "a"), descriptor(b, "b"), man);
            py::dict d;
            d["first"] = invariants_to_py(r.first);
            d["second"] = invariants_to_py(r.second);
            d["cstar_verdict"] = to_string(r.cstar_verdict);
            d["smooth_verdict"] = to_string(r.smooth_verdict);
            d["discrepancy_notes"] = r.discrepancy_notes;
            return d;
        },
        py::arg("manifold"), py::arg("a"), py::arg("b"));

    m.def(
        "estimate_degree",
        [](const std::string& factor, double t, bool p6, bool p8, std::size_t samples, std::uint64_t seed,
           unsigned workers) {
            py::gil_scoped_release release;
            const auto e = dynamics::estimate_degree(dynamics::parse_sphere_factor(factor), {t, p6, p8}, samples,
                                                     seed, workers);
            py::gil_scoped_acquire acquire;
            py::dict d;
            d["degree"] = e.degree;
            d["raw_mean"] = e.raw_mean;
            d["ci"] = py::make_tuple(e.ci_low, e.ci_high);
            d["samples"] = e.samples;
            return d;
        },
        py::arg("factor"), py::arg("t"), py::arg("p6") = true, py::arg("p8") = false, py::arg("samples") = 100000,
        py::arg("seed") = 42, py::arg("workers") = 0);
    m.def(
        "birkhoff_averages",
        [](double t, bool p6, bool p8, const std::string& observable, std::size_t horizon, std::size_t starts,
           std::uint64_t seed) {
            dynamics::BirkhoffConfig cfg;
            cfg.horizon = horizon;
            cfg.observable = dynamics::parse_observable(observable);
            cfg.random_starts = starts;
            cfg.seed = seed;
            py::gil_scoped_release release;
            auto r = dynamics::birkhoff_average({t, p6, p8}, cfg);
            py::gil_scoped_acquire acquire;
            py::dict d;
            d["averages"] = r.averages;
            d["max_deviation"] = r.max_deviation;
            return d;
        },
        py::arg("t"), py::arg("p6") = true, py::arg("p8") = false, py::arg("observable") = "character_s3",
        py::arg("horizon") = 1000, py::arg("starts") = 2, py::arg("seed") = 42);
    m.def(
        "orbit_coverage",
        [](double t, bool p6, bool p8, std::size_t horizon, double eps) {
            const dynamics::ProductPoint x{dynamics::SpherePoint::north_pole(3), dynamics::SpherePoint::north_pole(6),
                                           dynamics::SpherePoint::north_pole(8)};
            const auto r = dynamics::orbit_density_check({t, p6, p8}, x, horizon, eps);
            py::dict d;
            d["coverage"] = r.coverage;
            d["grid_points"] = r.grid_points;
            d["covered"] = r.covered;
            d["max_gap"] = r.max_gap;
            return d;
        },
        py::arg("t"), py::arg("p6") = true, py::arg("p8") = false, py::arg("horizon") = 10000,
        py::arg("epsilon") = 0.01, "Coverage of the orbit of the north poles");

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            CommandOutcome out;
            {
                py::gil_scoped_release release;
                out = run_command(args);
            }
            return py::make_tuple(out.exit_code, out.report ? out.json.dump() : std::string(), out.text, out.error);
        },
        py::arg("args"), "Runs a CLI subcommand; returns (exit_code, report_json, text, error)");
}
