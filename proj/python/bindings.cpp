#include "ttagg/config.hpp"
#include "ttagg/errors.hpp"
#include "ttagg/integrator.hpp"
#include "ttagg/kinetics.hpp"
#include "ttagg/subset_codec.hpp"
#include "ttagg/tensor.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace ttagg;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

ConcentrationState state_of(const std::vector<double>& n, double t) { return ConcentrationState(n, t); }

ExecutionPlan plan_of(int workers) { return ExecutionPlan(workers); }

py::dict series_dict(const MomentSeries& series) {
    std::vector<int> step;
    std::vector<double> t, m0, m1, m2, min_n;
    for (const auto& r : series.records) {
        step.push_back(r.step);
        t.push_back(r.t);
        m0.push_back(r.m0);
        m1.push_back(r.m1);
        m2.push_back(r.m2);
        min_n.push_back(r.min_n);
    }
    py::dict d;
    d["step"] = step;
    d["t"] = to_array(t);
    d["M0"] = to_array(m0);
    d["M1"] = to_array(m1);
    d["M2"] = to_array(m2);
    d["min_n"] = to_array(min_n);
    d["negativity_warnings"] = series.negativity_warnings();
    return d;
}

py::dict result_dict(const IntegrationResult& result) {
    py::dict d;
    d["n"] = to_array(result.final_state.values());
    d["t"] = result.final_state.t();
    d["moments"] = series_dict(result.series);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tensor-train multi-particle aggregation kinetics";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("binomial", &binomial, py::arg("n"), py::arg("k"));

    py::class_<BrownianSpec>(m, "BrownianSpec")
        .def(py::init<std::vector<double>>(), py::arg("exponents"))
        .def_property_readonly("dim", &BrownianSpec::dim)
        .def("__getitem__", &BrownianSpec::operator[]);

    py::class_<TTKernel>(m, "TTKernel")
        .def_property_readonly("dim", &TTKernel::dim)
        .def_property_readonly("mode_size", &TTKernel::mode_size)
        .def_property_readonly("ranks", &TTKernel::ranks)
        .def_property_readonly("max_rank", &TTKernel::max_rank)
        .def("core", [](const TTKernel& k, int level) {
            const auto& c = k.core(level);
            py::array_t<double> out({static_cast<py::ssize_t>(c.rank_left()), static_cast<py::ssize_t>(c.mode_size()),
                                     static_cast<py::ssize_t>(c.rank_right())});
            auto view = out.mutable_unchecked<3>();
            for (std::size_t a = 0; a < c.rank_left(); ++a)
                for (int i = 1; i <= c.mode_size(); ++i)
                    for (std::size_t b = 0; b < c.rank_right(); ++b)
                        view(static_cast<py::ssize_t>(a), i - 1, static_cast<py::ssize_t>(b)) = c(a, i, b);
            return out;
        }, py::arg("level"), "Core at 1-based level as an array of shape (r_left, N, r_right).")
        .def("element", [](const TTKernel& k, std::vector<int> idx) { return tt_element(k, MultiIndex(std::move(idx))); },
             py::arg("index"));

    py::class_<CPKernel>(m, "CPKernel")
        .def_property_readonly("dim", &CPKernel::dim)
        .def_property_readonly("mode_size", &CPKernel::mode_size)
        .def_property_readonly("rank", &CPKernel::rank)
        .def("element", [](const CPKernel& k, std::vector<int> idx) { return cp_element(k, MultiIndex(std::move(idx))); },
             py::arg("index"));

    py::class_<DenseKernel>(m, "DenseKernel")
        .def_property_readonly("dim", &DenseKernel::dim)
        .def_property_readonly("mode_size", &DenseKernel::mode_size)
        .def("element", [](const DenseKernel& k, std::vector<int> idx) { return k(MultiIndex(std::move(idx))); },
             py::arg("index"));

    m.def("brownian_element", [](const BrownianSpec& s, std::vector<int> idx) {
        return brownian_element(s, MultiIndex(std::move(idx)));
    }, py::arg("spec"), py::arg("index"));
    m.def("build_brownian_tt", &build_brownian_tt, py::arg("spec"), py::arg("N"));
    m.def("build_brownian_cp", &build_brownian_cp, py::arg("spec"), py::arg("N"));
    m.def("constant_tt", &constant_tt, py::arg("dim"), py::arg("N"), py::arg("c") = 1.0);
    m.def("constant_cp", &constant_cp, py::arg("dim"), py::arg("N"), py::arg("c") = 1.0);
    m.def("dense_from_brownian", [](const BrownianSpec& s, int N) { return dense_from_brownian(s, N); },
          py::arg("spec"), py::arg("N"));
    m.def("dense_from_tt", [](const TTKernel& k) { return dense_from_tt(k); }, py::arg("kernel"));

    m.def("rhs_tt_P", [](const TTKernel& k, const std::vector<double>& n, int workers) {
        return to_array(rhs_tt_P(k, state_of(n, 0.0), plan_of(workers)));
    }, py::arg("kernel"), py::arg("n"), py::arg("workers") = 1);
    m.def("rhs_tt_Q", [](const TTKernel& k, const std::vector<double>& n, int workers) {
        return to_array(rhs_tt_Q(k, state_of(n, 0.0), plan_of(workers)));
    }, py::arg("kernel"), py::arg("n"), py::arg("workers") = 1);
    m.def("rhs_cp_P", [](const CPKernel& k, const std::vector<double>& n, int workers) {
        return to_array(rhs_cp_P(k, state_of(n, 0.0), plan_of(workers)));
    }, py::arg("kernel"), py::arg("n"), py::arg("workers") = 1);
    m.def("rhs_cp_Q", [](const CPKernel& k, const std::vector<double>& n, int workers) {
        return to_array(rhs_cp_Q(k, state_of(n, 0.0), plan_of(workers)));
    }, py::arg("kernel"), py::arg("n"), py::arg("workers") = 1);
    m.def("rhs_dense_P", [](const DenseKernel& k, const std::vector<double>& n) {
        return to_array(rhs_dense_P(k, state_of(n, 0.0)));
    }, py::arg("kernel"), py::arg("n"));
    m.def("rhs_dense_Q", [](const DenseKernel& k, const std::vector<double>& n) {
        return to_array(rhs_dense_Q(k, state_of(n, 0.0)));
    }, py::arg("kernel"), py::arg("n"));

    py::class_<KernelSet>(m, "KernelSet")
        .def(py::init<int>(), py::arg("N"))
        .def("add", py::overload_cast<int, TTKernel>(&KernelSet::add), py::arg("order"), py::arg("kernel"))
        .def("add", py::overload_cast<int, CPKernel>(&KernelSet::add), py::arg("order"), py::arg("kernel"))
        .def("add", py::overload_cast<int, DenseKernel>(&KernelSet::add), py::arg("order"), py::arg("kernel"))
        .def_property_readonly("N", &KernelSet::mode_size)
        .def_property_readonly("max_order", &KernelSet::max_order);

    m.def("rhs_total", [](const KernelSet& ks, const std::vector<double>& n, int workers) {
        const auto r = rhs_total(ks, state_of(n, 0.0), plan_of(workers));
        py::dict d;
        d["p"] = to_array(r.p);
        d["q"] = to_array(r.q);
        d["s"] = to_array(r.s);
        return d;
    }, py::arg("kernels"), py::arg("n"), py::arg("workers") = 1);

    m.def("rk2_step", [](const KernelSet& ks, const std::vector<double>& n, double dt, double t, int workers) {
        return to_array(rk2_step(state_of(n, t), dt, ks, plan_of(workers)).values());
    }, py::arg("kernels"), py::arg("n"), py::arg("dt"), py::arg("t") = 0.0, py::arg("workers") = 1);

    m.def("moments", [](const std::vector<double>& n, const std::vector<double>& orders) {
        return to_array(moments(state_of(n, 0.0), orders));
    }, py::arg("n"), py::arg("orders"));

    m.def("integrate", [](const KernelSet& ks, const std::vector<double>& n0, double dt, int steps, double t0,
                          int record_every, int workers) {
        const auto result = integrate(ks, state_of(n0, t0), TimeGrid{t0, dt, steps}, record_every, plan_of(workers));
        return result_dict(result);
    }, py::arg("kernels"), py::arg("n0"), py::arg("dt"), py::arg("steps"), py::arg("t0") = 0.0,
       py::arg("record_every") = 1, py::arg("workers") = 1);

    m.def("simulate_config", [](const std::filesystem::path& path) {
        return result_dict(integrate(SimulationConfig::load(path)));
    }, py::arg("path"), "Run the simulation described by a JSON config file.");

    m.attr("__version__") = TTAGG_VERSION;
}
