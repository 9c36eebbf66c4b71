#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "nbldpc/analysis.hpp"
#include "nbldpc/code.hpp"
#include "nbldpc/galois.hpp"
#include "nbldpc/mlc.hpp"
#include "nbldpc/qspa.hpp"
#include "nbldpc/sim.hpp"

namespace py = pybind11;
using namespace nbldpc;

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Non-binary LDPC codes over GF(2^m) with multilevel modulation";
    mod.attr("__version__") = "0.1.0";

    py::class_<GaloisField>(mod, "GaloisField")
        .def(py::init<int>(), py::arg("m"))
        .def(py::init<int, unsigned>(), py::arg("m"), py::arg("poly"))
        .def_property_readonly("m", &GaloisField::m)
        .def_property_readonly("q", &GaloisField::q)
        .def_property_readonly("modulus", &GaloisField::modulus)
        .def("add", &GaloisField::add)
        .def("mul", &GaloisField::mul)
        .def("inv", &GaloisField::inv)
        .def("log", &GaloisField::log)
        .def("antilog", &GaloisField::antilog)
        .def_static("default_poly", &GaloisField::default_poly, py::arg("m"));

    py::class_<DegreeProfile>(mod, "DegreeProfile")
        .def_static("regular", &DegreeProfile::regular, py::arg("n_cols"),
                    py::arg("n_checks"), py::arg("weight"))
        .def_static("mixed", &DegreeProfile::mixed, py::arg("n_cols"),
                    py::arg("n_checks"), py::arg("weight_fractions"))
        .def("column_weights", &DegreeProfile::column_weights);

    py::class_<Code, std::shared_ptr<Code>>(mod, "Code")
        .def_property_readonly("n", &Code::n)
        .def_property_readonly("m_checks", &Code::m_checks)
        .def_property_readonly("k", &Code::k)
        .def_property_readonly("rank", &Code::rank)
        .def_property_readonly("rate", &Code::rate)
        .def_property_readonly("num_edges", &Code::num_edges)
        .def_property_readonly("avg_row_weight", &Code::avg_row_weight)
        .def_property_readonly("avg_col_weight", &Code::avg_col_weight)
        .def_property_readonly("max_row_weight", &Code::max_row_weight)
        .def_property_readonly("max_col_weight", &Code::max_col_weight)
        .def_property_readonly("field", &Code::field,
                               py::return_value_policy::reference_internal)
        .def("girth", &Code::girth)
        .def("encode",
             [](const Code& c, const std::vector<Symbol>& info) {
                 return c.encode(info);
             })
        .def("syndrome",
             [](const Code& c, const std::vector<Symbol>& word) {
                 return c.syndrome(word);
             })
        .def("in_codespace",
             [](const Code& c, const std::vector<Symbol>& word) {
                 return c.in_codespace(word);
             })
        .def("save_alist", &Code::save_alist, py::arg("path"))
        .def_static("load_alist", &Code::load_alist, py::arg("path"));

    mod.def("peg_construct", &peg_construct, py::arg("field"), py::arg("profile"),
            py::arg("seed"));

    py::class_<DecodeOptions>(mod, "DecodeOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &DecodeOptions::max_iterations)
        .def_readwrite("early_stop", &DecodeOptions::early_stop);

    py::class_<OpCounts>(mod, "OpCounts")
        .def_readonly("gf_mul", &OpCounts::gf_mul)
        .def_readonly("float_add", &OpCounts::float_add)
        .def_readonly("float_mul", &OpCounts::float_mul)
        .def_readonly("peak_message_doubles", &OpCounts::peak_message_doubles);

    py::class_<DecodeResult>(mod, "DecodeResult")
        .def_readonly("decided", &DecodeResult::decided)
        .def_readonly("converged", &DecodeResult::converged)
        .def_readonly("degenerate", &DecodeResult::degenerate)
        .def_readonly("iterations_used", &DecodeResult::iterations_used)
        .def_readonly("ops", &DecodeResult::ops);

    py::class_<QspaDecoder>(mod, "QspaDecoder")
        .def(py::init<const Code&>(), py::arg("code"), py::keep_alive<1, 2>())
        .def(
            "decode",
            [](QspaDecoder& d, const std::vector<double>& priors,
               const DecodeOptions& opt) { return d.decode(priors, opt); },
            py::arg("priors"), py::arg("opt") = DecodeOptions{});

    py::class_<SchemeSpec>(mod, "SchemeSpec")
        .def_readonly("name", &SchemeSpec::name)
        .def_readonly("constellation", &SchemeSpec::constellation)
        .def_readonly("n_symbols", &SchemeSpec::n_symbols)
        .def("bits_per_symbol", &SchemeSpec::bits_per_symbol)
        .def("info_bits", &SchemeSpec::info_bits)
        .def("rate_total", &SchemeSpec::rate_total)
        .def("scaled", &SchemeSpec::scaled, py::arg("n_symbols"));

    mod.def("preset_names", [] { return preset_names(); });
    mod.def("preset", &preset, py::arg("name"));

    py::class_<LevelReport>(mod, "LevelReport")
        .def_readonly("coded", &LevelReport::coded)
        .def_readonly("converged", &LevelReport::converged)
        .def_readonly("degenerate", &LevelReport::degenerate)
        .def_readonly("iterations", &LevelReport::iterations)
        .def_readonly("codeword", &LevelReport::codeword)
        .def_readonly("info", &LevelReport::info);

    py::class_<MsdResult>(mod, "MsdResult")
        .def_readonly("levels", &MsdResult::levels)
        .def_readonly("ops", &MsdResult::ops)
        .def_readonly("total_iterations", &MsdResult::total_iterations);

    py::class_<MlcScheme>(mod, "MlcScheme")
        .def(py::init<SchemeSpec, std::uint64_t>(), py::arg("spec"), py::arg("seed"))
        .def(py::init([](SchemeSpec spec, const std::vector<std::shared_ptr<Code>>& codes) {
                 std::vector<std::shared_ptr<const Code>> cc(codes.begin(), codes.end());
                 return MlcScheme(std::move(spec), std::move(cc));
             }),
             py::arg("spec"), py::arg("codes"))
        .def_property_readonly("name", &MlcScheme::name)
        .def_property_readonly("n_symbols", &MlcScheme::n_symbols)
        .def_property_readonly("bits_per_symbol", &MlcScheme::bits_per_symbol)
        .def_property_readonly("num_levels", &MlcScheme::num_levels)
        .def_property_readonly("info_bits", &MlcScheme::info_bits)
        .def_property_readonly("rate_total", &MlcScheme::rate_total)
        .def("spec", &MlcScheme::spec, py::return_value_policy::reference_internal)
        .def("level_code", &MlcScheme::level_code, py::arg("level"),
             py::return_value_policy::reference_internal)
        .def("level_info_len", &MlcScheme::level_info_len, py::arg("level"))
        .def("encode",
             [](const MlcScheme& s, const std::vector<std::vector<Symbol>>& info) {
                 return s.encode(info);
             },
             py::arg("info"))
        .def(
            "decode",
            [](const MlcScheme& s, const std::vector<Cplx>& y, double n0,
               const DecodeOptions& opt) { return s.decode(y, n0, opt); },
            py::arg("y"), py::arg("n0"), py::arg("opt") = DecodeOptions{});

    mod.def("ebn0_to_n0", &ebn0_to_n0, py::arg("ebn0_db"), py::arg("rate_total"),
            py::arg("bits_per_symbol"));

    py::class_<StopRule>(mod, "StopRule")
        .def(py::init<>())
        .def(py::init([](std::uint64_t min_block_errors, std::uint64_t max_trials) {
                 return StopRule{min_block_errors, max_trials};
             }),
             py::arg("min_block_errors"), py::arg("max_trials"))
        .def_readwrite("min_block_errors", &StopRule::min_block_errors)
        .def_readwrite("max_trials", &StopRule::max_trials);

    py::class_<RunOptions>(mod, "RunOptions")
        .def(py::init<>())
        .def_readwrite("decode", &RunOptions::decode)
        .def_readwrite("workers", &RunOptions::workers)
        .def_readwrite("zero_info", &RunOptions::zero_info)
        .def_readwrite("progress", &RunOptions::progress)
        .def_readwrite("genie_below", &RunOptions::genie_below);

    py::class_<SimPoint>(mod, "SimPoint")
        .def_readonly("ebn0_db", &SimPoint::ebn0_db)
        .def_readonly("trials", &SimPoint::trials)
        .def_readonly("block_errors", &SimPoint::block_errors)
        .def_readonly("bit_errors", &SimPoint::bit_errors)
        .def_readonly("info_bits_per_block", &SimPoint::info_bits_per_block)
        .def_readonly("iteration_sum", &SimPoint::iteration_sum)
        .def_readonly("level_block_errors", &SimPoint::level_block_errors)
        .def_readonly("wall_time_s", &SimPoint::wall_time_s)
        .def_property_readonly("bler", &SimPoint::bler)
        .def_property_readonly("ber", &SimPoint::ber)
        .def_property_readonly("avg_iterations", &SimPoint::avg_iterations)
        .def("__repr__", [](const SimPoint& p) {
            char buf[128];
            snprintf(buf, sizeof(buf), "SimPoint(ebn0_db=%g, trials=%llu, bler=%.3e)",
                     p.ebn0_db, (unsigned long long)p.trials, p.bler());
            return std::string(buf);
        });

    mod.def("run_point", &run_point, py::arg("scheme"), py::arg("ebn0_db"),
            py::arg("stop"), py::arg("seed"), py::arg("opt") = RunOptions{});
    mod.def(
        "sweep",
        [](const MlcScheme& scheme, const std::vector<double>& grid, const StopRule& stop,
           std::uint64_t seed, const std::string& out_path, const RunOptions& opt) {
            return sweep(scheme, grid, stop, seed, out_path, opt);
        },
        py::arg("scheme"), py::arg("ebn0_grid"), py::arg("stop"), py::arg("seed"),
        py::arg("out_path"), py::arg("opt") = RunOptions{});

    py::class_<ComplexityReport>(mod, "ComplexityReport")
        .def_readonly("gf_mul", &ComplexityReport::gf_mul)
        .def_readonly("float_add", &ComplexityReport::float_add)
        .def_readonly("float_mul", &ComplexityReport::float_mul)
        .def_readonly("memory", &ComplexityReport::memory)
        .def("__repr__", [](const ComplexityReport& r) {
            char buf[160];
            snprintf(buf, sizeof(buf),
                     "ComplexityReport(gf_mul=%lld, float_add=%lld, float_mul=%lld, "
                     "memory=%lld)",
                     (long long)r.gf_mul, (long long)r.float_add, (long long)r.float_mul,
                     (long long)r.memory);
            return std::string(buf);
        });

    py::class_<ComplexityParams>(mod, "ComplexityParams")
        .def_readonly("n", &ComplexityParams::n)
        .def_readonly("rate", &ComplexityParams::rate)
        .def_readonly("q", &ComplexityParams::q)
        .def_readonly("row_avg", &ComplexityParams::row_avg)
        .def_readonly("col_avg", &ComplexityParams::col_avg)
        .def_readonly("row_max", &ComplexityParams::row_max);

    mod.def("complexity_estimate", &complexity_estimate, py::arg("n"), py::arg("rate"),
            py::arg("q"), py::arg("row_avg"), py::arg("col_avg"), py::arg("row_max"));
    mod.def("complexity_for_code", &complexity_for_code, py::arg("code"));
    mod.def("complexity_for_scheme", &complexity_for_scheme, py::arg("scheme"));
    mod.def("complexity_presets", [] { return complexity_presets(); });

    py::class_<CapacityEstimate>(mod, "CapacityEstimate")
        .def_readonly("bits", &CapacityEstimate::bits)
        .def_readonly("std_error", &CapacityEstimate::std_error);

    mod.def("cm_capacity", &cm_capacity, py::arg("constellation"), py::arg("snr_db"),
            py::arg("samples") = 1000000, py::arg("seed") = 20240901);
    mod.def("shannon_limit_db", &shannon_limit_db, py::arg("constellation"),
            py::arg("rate_total"), py::arg("samples") = 1000000,
            py::arg("seed") = 20240901);
    mod.def("qfunc", &qfunc, py::arg("x"));
    mod.def("error_floor_uncoded",
            py::overload_cast<const MlcScheme&, double>(&error_floor_uncoded),
            py::arg("scheme"), py::arg("ebn0_db"));
}
