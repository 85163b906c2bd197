#include "gffperc/gff.hpp"
#include "gffperc/harness.hpp"
#include "gffperc/lattice.hpp"
#include "gffperc/limits.hpp"
#include "gffperc/metric.hpp"
#include "gffperc/percolation.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

namespace py = pybind11;
using namespace gffperc;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> as_grid(const LatticeRect& lat, const std::vector<double>& values)
{
    py::array_t<double> out({lat.ny(), lat.nx()});
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

std::span<const double> vertex_values(const LatticeRect& lat, const Array& values)
{
    if (values.size() != lat.num_vertices())
        throw py::value_error("expected " + std::to_string(lat.num_vertices()) + " vertex values");
    return {values.data(), static_cast<std::size_t>(values.size())};
}

EdgeStates edge_states(const LatticeRect& lat, const py::array_t<std::uint8_t, py::array::forcecast>& bits)
{
    if (bits.size() != lat.num_edges())
        throw py::value_error("expected " + std::to_string(lat.num_edges()) + " edge states");
    EdgeStates w(lat.num_edges());
    const auto view = bits.unchecked();
    for (int e = 0; e < lat.num_edges(); ++e) w.set(e, view.data(0)[e] != 0);
    return w;
}

Field field_from(const LatticeRect& lat, const Array& values, double lambda)
{
    const auto span = vertex_values(lat, values);
    Field f;
    f.values.assign(span.begin(), span.end());
    f.bc = lambda > 0.0 ? BoundaryCondition::alternating(lambda) : BoundaryCondition::zero();
    return f;
}

ExperimentConfig config_from(const py::dict& settings)
{
    ExperimentConfig c;
    for (const auto& [k, v] : settings) apply_setting(c, py::str(k).cast<std::string>(), py::str(v).cast<std::string>());
    return c;
}

py::dict to_dict(const Estimate& e)
{
    py::dict d;
    d["event"] = to_string(e.event);
    d["delta"] = e.delta;
    d["p_hat"] = e.p_hat;
    d["n"] = e.n;
    d["ci_low"] = e.ci_low;
    d["ci_high"] = e.ci_high;
    d["seed"] = e.seed;
    d["boundary_edge_opens"] = e.boundary_edge_opens;
    d["inclusion_violations"] = e.inclusion_violations;
    return d;
}

}  // namespace

PYBIND11_MODULE(_gffperc, m)
{
    m.doc() = "Gaussian free field level-set and metric-graph percolation on rectangles";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<Arc>(m, "Arc")
        .value("LEFT", Arc::Left)
        .value("BOTTOM", Arc::Bottom)
        .value("RIGHT", Arc::Right)
        .value("TOP", Arc::Top)
        .value("INNER_LEFT", Arc::InnerLeft)
        .value("INNER_RIGHT", Arc::InnerRight);

    py::enum_<CrossingMode>(m, "CrossingMode")
        .value("DISCRETE_ALT", CrossingMode::DiscreteAlt)
        .value("DISCRETE_ZERO", CrossingMode::DiscreteZero)
        .value("METRIC_ALT", CrossingMode::MetricAlt)
        .value("METRIC_ZERO", CrossingMode::MetricZero);

    py::class_<LatticeRect>(m, "Lattice")
        .def(py::init(&build_lattice), py::arg("L"), py::arg("delta"))
        .def_property_readonly("L", &LatticeRect::width)
        .def_property_readonly("delta", &LatticeRect::delta)
        .def_property_readonly("nx", &LatticeRect::nx)
        .def_property_readonly("ny", &LatticeRect::ny)
        .def_property_readonly("num_vertices", &LatticeRect::num_vertices)
        .def_property_readonly("num_edges", &LatticeRect::num_edges)
        .def_property_readonly("num_interior", &LatticeRect::num_interior)
        .def("id", py::overload_cast<int, int>(&LatticeRect::id, py::const_), py::arg("i"), py::arg("j"))
        .def("coords", [](const LatticeRect& l, int v) { auto p = l.coords(v); return py::make_tuple(p.i, p.j); })
        .def("position", &LatticeRect::position)
        .def("is_boundary", &LatticeRect::is_boundary)
        .def("arc_vertices", &LatticeRect::arc_vertices)
        .def("corners", [](const LatticeRect& l) {
            return py::make_tuple(l.corner_a(), l.corner_b(), l.corner_c(), l.corner_d());
        })
        .def("edges", [](const LatticeRect& l) {
            py::array_t<int> out({l.num_edges(), 2});
            auto w = out.mutable_unchecked<2>();
            for (int e = 0; e < l.num_edges(); ++e) {
                w(e, 0) = l.edges()[e].u;
                w(e, 1) = l.edges()[e].v;
            }
            return out;
        })
        .def("__repr__", [](const LatticeRect& l) {
            return "Lattice(L=" + std::to_string(l.width()) + ", nx=" + std::to_string(l.nx()) +
                   ", ny=" + std::to_string(l.ny()) + ")";
        });

    m.def("green_matrix", [](const LatticeRect& lat) {
        const GreenMatrix g = dirichlet_green_dense(lat);
        py::array_t<double> out({g.size(), g.size()});
        auto w = out.mutable_unchecked<2>();
        for (int a = 0; a < g.size(); ++a)
            for (int b = 0; b < g.size(); ++b) w(a, b) = g(a, b);
        return out;
    });

    m.def(
        "sample_field",
        [](const LatticeRect& lat, double lambda, Seed seed) {
            const auto bc = lambda > 0.0 ? BoundaryCondition::alternating(lambda) : BoundaryCondition::zero();
            return as_grid(lat, sample_with_boundary(lat, bc, seed).values);
        },
        py::arg("lattice"), py::arg("lam") = 0.0, py::arg("seed") = 1,
        "One GFF sample as an (ny, nx) array; lam > 0 selects the alternating boundary condition.");

    m.def("edge_open_probability", &edge_open_probability, py::arg("phi_u"), py::arg("phi_v"));

    m.def(
        "sample_edge_states",
        [](const LatticeRect& lat, const Array& values, Seed seed) {
            Field f;
            const auto span = vertex_values(lat, values);
            f.values.assign(span.begin(), span.end());
            const EdgeStates w = sample_edge_states(lat, f, seed);
            py::array_t<std::uint8_t> out(w.size());
            std::copy(w.bits().begin(), w.bits().end(), out.mutable_data());
            return out;
        },
        py::arg("lattice"), py::arg("values"), py::arg("seed") = 1);

    m.def(
        "crossing",
        [](const LatticeRect& lat, const py::array& data, CrossingMode mode) {
            if (is_metric(mode)) return crossing(lat, edge_states(lat, data), mode);
            return crossing(lat, vertex_values(lat, Array::ensure(data)), mode);
        },
        py::arg("lattice"), py::arg("data"), py::arg("mode"),
        "Vertex values for discrete modes, edge states for metric modes.");

    m.def(
        "closed_pivotal_edges",
        [](const LatticeRect& lat, const py::array_t<std::uint8_t, py::array::forcecast>& bits) {
            return closed_pivotal_exists(lat, edge_states(lat, bits)).edges;
        },
        py::arg("lattice"), py::arg("edges"));

    m.def(
        "level_line",
        [](const LatticeRect& lat, const Array& values, double lambda) {
            const LevelLinePath p = trace_level_line(lat, field_from(lat, values, lambda));
            py::array_t<int> path({static_cast<py::ssize_t>(p.vertices.size()), py::ssize_t{2}});
            auto w = path.mutable_unchecked<2>();
            for (std::size_t k = 0; k < p.vertices.size(); ++k) {
                w(k, 0) = p.vertices[k].i;
                w(k, 1) = p.vertices[k].j;
            }
            return py::make_tuple(path, p.terminal);
        },
        py::arg("lattice"), py::arg("values"), py::arg("lam"),
        "Dual-vertex path and terminal arc of the interface from the bottom-left corner.");

    m.def("elliptic_k", &elliptic_k, py::arg("k"));
    m.def("modulus_for_aspect", &modulus_for_aspect, py::arg("L"));
    m.def("conformal_images", [](double L) {
        const auto im = conformal_images(L);
        py::dict d;
        d["a"] = im.ya;
        d["b"] = im.yb;
        d["c"] = im.yc;
        d["d"] = im.yd;
        d["k"] = im.k;
        return d;
    });
    m.def("cross_ratio", &cross_ratio);
    m.def("crossing_limit", &crossing_limit, py::arg("L"));
    m.def("sle_hitting_probability", &sle_hitting_probability, py::arg("y_left"), py::arg("y_right"));
    m.def(
        "simulate_sle_diffusion",
        [](double x0, double dt, Seed seed) {
            const auto p = simulate_sle_diffusion(x0, dt, seed);
            return py::make_tuple(py::array_t<double>(static_cast<py::ssize_t>(p.values.size()), p.values.data()),
                                  p.absorbed_at);
        },
        py::arg("x0"), py::arg("dt"), py::arg("seed") = 1);
    m.def("bm_line_hitting_cdf", &bm_line_hitting_cdf, py::arg("m"), py::arg("b"), py::arg("T"));

    m.attr("LAMBDA0") = kDefaultLambda0;
    m.def("wilson_interval", &wilson_interval, py::arg("successes"), py::arg("n"));
    m.def(
        "estimate",
        [](const py::dict& settings, double delta) {
            const ExperimentConfig c = config_from(settings);
            c.validate();
            py::list out;
            for (const auto& e : estimate_events(c, delta)) out.append(to_dict(e));
            return out;
        },
        py::arg("settings"), py::arg("delta"),
        "Runs every configured event at one mesh. Settings use the config-file keys.");
    m.def(
        "sweep_csv",
        [](const py::dict& settings) {
            const ExperimentConfig c = config_from(settings);
            std::ostringstream out;
            write_sweep_csv(out, c, sweep(c));
            return out.str();
        },
        py::arg("settings"));
}
