#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "amenable/boundary.hpp"
#include "amenable/errors.hpp"
#include "amenable/group.hpp"
#include "amenable/percolation.hpp"
#include "amenable/runner.hpp"
#include "amenable/spectral.hpp"

namespace py = pybind11;
using namespace amenable;

namespace {

using Coords = std::vector<std::int64_t>;

GroupModel group_named(const std::string& name) {
    if (name == "Z") return GroupModel::lattice(1);
    if (name == "Z2") return GroupModel::lattice(2);
    if (name == "Z3") return GroupModel::lattice(3);
    if (name == "H") return GroupModel::heisenberg();
    throw std::invalid_argument("unknown group '" + name + "' (expected Z, Z2, Z3 or H)");
}

FiniteSubset to_subset(const GroupModel& g, const std::vector<Coords>& pts) {
    std::vector<Element> xs;
    xs.reserve(pts.size());
    for (const auto& p : pts) xs.push_back(g.element(std::span<const std::int64_t>(p)));
    return FiniteSubset(xs);
}

std::vector<Coords> to_coords(const GroupModel& g, const FiniteSubset& s) {
    std::vector<Coords> out;
    out.reserve(s.size());
    for (const auto& x : s) out.emplace_back(x.c.begin(), x.c.begin() + g.rank());
    return out;
}

}  // namespace

PYBIND11_MODULE(_amenable, m) {
    m.doc() = "Tilings, ergodic averages, IDS and percolation densities on Z^d and the Heisenberg group";

    py::register_exception<ResourceCapExceeded>(m, "ResourceCapExceeded", PyExc_MemoryError);
    py::register_exception<runner::ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<runner::RunOutcome>(m, "RunOutcome")
        .def_readonly("exit_code", &runner::RunOutcome::exit_code)
        .def_readonly("message", &runner::RunOutcome::message)
        .def_property_readonly("results_dir", [](const runner::RunOutcome& o) { return o.results_dir.string(); });

    m.def("experiments", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& e : runner::experiments()) out.emplace_back(e.kind, e.description);
        return out;
    });
    m.def(
        "resolve_config",
        [](const std::string& text) { return runner::resolve_config(runner::Json::parse(text)).dump(2); },
        py::arg("config_json"));
    m.def(
        "run_json",
        [](const std::string& text, const std::filesystem::path& out) {
            runner::Json raw;
            try {
                raw = runner::Json::parse(text);
            } catch (const runner::Json::exception& e) {
                throw runner::ConfigError(e.what());
            }
            py::gil_scoped_release release;
            return runner::run_json(raw, out);
        },
        py::arg("config_json"), py::arg("out_dir") = std::filesystem::path{});
    m.def(
        "run_file",
        [](const std::filesystem::path& config, const std::filesystem::path& out) {
            py::gil_scoped_release release;
            return runner::run_file(config, out);
        },
        py::arg("config"), py::arg("out_dir") = std::filesystem::path{});
    m.def("verify", [](const std::filesystem::path& report) { return runner::verify_file(report); },
          py::arg("report"));

    m.def(
        "ball", [](const std::string& group, int r) {
            const auto g = group_named(group);
            return to_coords(g, ball(g, r));
        },
        py::arg("group"), py::arg("radius"));
    m.def(
        "k_boundary",
        [](const std::string& group, const std::vector<Coords>& t, const std::vector<Coords>& k) {
            const auto g = group_named(group);
            return to_coords(g, k_boundary(g, to_subset(g, t), to_subset(g, k)));
        },
        py::arg("group"), py::arg("t"), py::arg("k"));
    m.def(
        "r_boundary",
        [](const std::string& group, const std::vector<Coords>& lam, int r) {
            const auto g = group_named(group);
            return to_coords(g, r_boundary(g, to_subset(g, lam), r));
        },
        py::arg("group"), py::arg("subset"), py::arg("r"));
    m.def(
        "boundary_ratio",
        [](const std::string& group, const std::vector<Coords>& t, const std::vector<Coords>& k) {
            const auto g = group_named(group);
            return boundary_ratio(g, to_subset(g, t), to_subset(g, k));
        },
        py::arg("group"), py::arg("t"), py::arg("k"));

    m.def("z_adjacency_ids", &z_adjacency_ids, py::arg("energy"));

    m.def(
        "cluster_statistics",
        [](const std::string& group, double q, std::int64_t side, std::size_t samples, std::size_t m_max,
           std::uint64_t seed) {
            const auto g = group_named(group);
            const auto par = PercolationParams::from_edge_probability(g, q, seed);
            ClusterStatistics s;
            {
                py::gil_scoped_release release;
                s = cluster_statistics(par, folner_set(g, side), samples, m_max);
            }
            py::dict d;
            d["window"] = s.window;
            d["samples"] = s.samples;
            d["kappa"] = s.kappa;
            d["kappa_se"] = s.kappa_se;
            d["c"] = s.c;
            d["c_se"] = s.c_se;
            d["d"] = s.d;
            d["d_se"] = s.d_se;
            d["phi"] = s.phi;
            d["phi_se"] = s.phi_se;
            return d;
        },
        py::arg("group"), py::arg("q"), py::arg("side"), py::arg("samples") = 16, py::arg("m_max") = 10,
        py::arg("seed") = 1);
}
