#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fqsalem/charsums.hpp"
#include "fqsalem/constructions.hpp"
#include "fqsalem/geometry.hpp"
#include "fqsalem/harness.hpp"
#include "fqsalem/lattice.hpp"
#include "fqsalem/spectrum.hpp"

namespace py = pybind11;
using namespace fqsalem;

namespace {

py::array_t<std::complex<double>> values_array(const std::vector<std::complex<double>>& v) {
    py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Transforms of subsets of F_q^d, their L^p spectral exponents, and the "
              "geometric counters built on them";

    py::class_<Field>(m, "Field")
        .def_static("make", &Field::make, py::arg("p"), py::arg("m") = 1,
                    py::arg("modulus") = std::vector<std::uint32_t>{})
        .def_static("parse", [](const std::string& s) { return Field::parse(s); })
        .def_property_readonly("p", &Field::p)
        .def_property_readonly("m", &Field::m)
        .def_property_readonly("q", &Field::q)
        .def_property_readonly("modulus", &Field::modulus)
        .def("spec_string", &Field::spec_string)
        .def("add", &Field::add)
        .def("sub", &Field::sub)
        .def("neg", &Field::neg)
        .def("mul", &Field::mul)
        .def("inv", &Field::inv)
        .def("pow", &Field::pow)
        .def("trace", &Field::trace)
        .def("chi", &Field::chi)
        .def("sqrt", &Field::sqrt)
        .def("eval_poly", &Field::eval_poly)
        .def("__eq__", [](const Field& a, const Field& b) { return a == b; })
        .def("__repr__", [](const Field& f) { return "Field(" + f.spec_string() + ")"; });

    py::class_<Ambient>(m, "Ambient")
        .def(py::init<Field, std::uint32_t>(), py::arg("field"), py::arg("d"))
        .def_readonly("field", &Ambient::field)
        .def_readonly("dim", &Ambient::dim)
        .def_readonly("size", &Ambient::size)
        .def("encode", &Ambient::encode)
        .def("decode", &Ambient::decode);

    m.def("dot", &dot);
    m.def("norm_sq", &norm_sq);

    py::class_<PointSet>(m, "PointSet")
        .def(py::init<Ambient>())
        .def_static("empty", &PointSet::empty)
        .def_static("full", &PointSet::full)
        .def_static("from_indices", &PointSet::from_indices)
        .def_static("from_points", &PointSet::from_points)
        .def_property_readonly("ambient", &PointSet::ambient)
        .def("__len__", [](const PointSet& s) { return s.size(); })
        .def("size", &PointSet::size)
        .def("contains", &PointSet::contains)
        .def("insert", py::overload_cast<std::uint64_t>(&PointSet::insert))
        .def("insert_point", &PointSet::insert_point)
        .def("indices", &PointSet::indices)
        .def("united", &PointSet::united)
        .def("complemented", &PointSet::complemented)
        .def("translated", &PointSet::translated)
        .def("negated", &PointSet::negated)
        .def("to_json", [](const PointSet& s, const std::string& name) {
            return set_to_json(s, name);
        }, py::arg("name") = "")
        .def_static("from_json", [](const std::string& text) {
            return set_from_json(text, nullptr);
        });

    m.def("save_set", &save_set, py::arg("set"), py::arg("path"), py::arg("name") = "");
    m.def("load_set", [](const std::string& path) { return load_set(path, nullptr); });

    py::enum_<TransformMethod>(m, "TransformMethod")
        .value("STAGED", TransformMethod::kStaged)
        .value("PER_AXIS_NAIVE", TransformMethod::kPerAxisNaive);

    py::class_<FourierTable>(m, "FourierTable")
        .def_property_readonly("ambient", &FourierTable::ambient)
        .def_property_readonly("set_size", &FourierTable::set_size)
        .def_property_readonly("twist", &FourierTable::twist)
        .def("values", [](const FourierTable& t) { return values_array(t.values()); });

    m.def(
        "fourier_transform",
        [](const PointSet& set, TransformMethod method, felem twist, unsigned workers) {
            return fourier_transform(set, TransformOptions{method, twist, workers});
        },
        py::arg("set"), py::arg("method") = TransformMethod::kStaged, py::arg("twist") = 1,
        py::arg("workers") = 1);
    m.def("lp_norm", &lp_norm);
    m.def("salem_exponent", &salem_exponent);
    m.def("salem_exponent_from", &salem_exponent_from);
    m.def("plancherel_residual", py::overload_cast<const PointSet&>(&plancherel_residual));

    py::class_<SpectralBounds>(m, "SpectralBounds")
        .def_readonly("trivial", &SpectralBounds::trivial)
        .def_readonly("interpolation", &SpectralBounds::interpolation)
        .def_readonly("lower", &SpectralBounds::lower);
    m.def("spectral_bounds", &spectral_bounds);

    py::class_<ProfileRecord>(m, "ProfileRecord")
        .def_readonly("p", &ProfileRecord::p)
        .def_readonly("lp", &ProfileRecord::lp)
        .def_readonly("s_emp", &ProfileRecord::s_emp)
        .def_readonly("bounds", &ProfileRecord::bounds);
    py::class_<SpectralProfile>(m, "SpectralProfile")
        .def_readonly("field_spec", &SpectralProfile::field_spec)
        .def_readonly("dim", &SpectralProfile::dim)
        .def_readonly("set_name", &SpectralProfile::set_name)
        .def_readonly("set_size", &SpectralProfile::set_size)
        .def_readonly("records", &SpectralProfile::records);
    m.def(
        "spectral_profile",
        [](const PointSet& set, const std::vector<double>& grid, const std::string& name) {
            return spectral_profile(set, grid, name);
        },
        py::arg("set"), py::arg("p_grid"), py::arg("name") = "");
    m.def("profile_csv", &profile_csv);

    // Constructions.
    m.def("sphere", &sphere);
    m.def("cone_c", &cone_c);
    m.def("cone_d", &cone_d);
    m.def("cylinder", &cylinder);
    m.def("paraboloid", &paraboloid);
    m.def("diagonal", &diagonal);
    m.def("kloosterman_curve", &kloosterman_curve);
    m.def("polynomial_curve", &polynomial_curve);
    m.def("subspace_complement", &subspace_complement);
    m.def("direct_sum", &direct_sum);
    m.def("random_set", &random_set);

    py::class_<SidonReport>(m, "SidonReport")
        .def_readonly("sidon", &SidonReport::sidon)
        .def_readonly("witness", &SidonReport::witness);
    m.def("is_sidon", &is_sidon);

    py::class_<BuiltSet>(m, "BuiltSet")
        .def_readonly("set", &BuiltSet::set)
        .def_readonly("label", &BuiltSet::label)
        .def_readonly("notes", &BuiltSet::notes)
        .def("s_theory", [](const BuiltSet& b, double p) -> py::object {
            if (!b.s_theory) return py::none();
            return py::float_(b.s_theory(p));
        });
    m.def("build_recipe", [](const Ambient& amb, const std::string& text) {
        return build_recipe(amb, text);
    });

    // Geometry.
    py::class_<SumsetResult>(m, "SumsetResult")
        .def_readonly("set", &SumsetResult::set)
        .def_readonly("fibers", &SumsetResult::fibers);
    m.def("sumset", [](const std::vector<PointSet>& parts) {
        std::vector<const PointSet*> ptrs;
        for (const auto& p : parts) ptrs.push_back(&p);
        return sumset(ptrs);
    });
    m.def("difference_set", &difference_set);
    m.def("direction_count", &direction_count);
    m.def("distance_set", &distance_set);

    py::class_<SphericalEnergy>(m, "SphericalEnergy")
        .def_readonly("energy", &SphericalEnergy::energy)
        .def_readonly("sphere_sizes", &SphericalEnergy::sphere_sizes)
        .def_readonly("mattila", &SphericalEnergy::mattila)
        .def_readonly("gensalem_max", &SphericalEnergy::gensalem_max)
        .def_readonly("gensalem_argmax", &SphericalEnergy::gensalem_argmax)
        .def_readonly("gensalem_threshold", &SphericalEnergy::gensalem_threshold)
        .def_readonly("epsilon", &SphericalEnergy::epsilon);
    m.def("spherical_energy",
          py::overload_cast<const PointSet&, double>(&spherical_energy), py::arg("set"),
          py::arg("epsilon") = 0.05);

    py::class_<DistanceReport>(m, "DistanceReport")
        .def_readonly("distance_count", &DistanceReport::distance_count)
        .def_readonly("mattila", &DistanceReport::mattila)
        .def_readonly("bound_mattila", &DistanceReport::bound_mattila)
        .def_readonly("s_emp4", &DistanceReport::s_emp4)
        .def_readonly("bound_exponent", &DistanceReport::bound_exponent)
        .def_readonly("ratio_mattila", &DistanceReport::ratio_mattila)
        .def_readonly("ratio_exponent", &DistanceReport::ratio_exponent);
    m.def("distance_bound_report", &distance_bound_report);

    m.def("orthogonal_group", &orthogonal_group);
    py::class_<SimplexCensus>(m, "SimplexCensus")
        .def_readonly("k", &SimplexCensus::k)
        .def_readonly("signature_count", &SimplexCensus::signature_count)
        .def_readonly("orbit_count", &SimplexCensus::orbit_count)
        .def_readonly("degenerate_note", &SimplexCensus::degenerate_note);
    m.def("simplex_census", &simplex_census, py::arg("set"), py::arg("k"),
          py::arg("with_orbit_oracle") = false);

    py::class_<SumsetBoundReport>(m, "SumsetBoundReport")
        .def_readonly("lhs", &SumsetBoundReport::lhs)
        .def_readonly("rhs", &SumsetBoundReport::rhs)
        .def_readonly("slack", &SumsetBoundReport::slack)
        .def_readonly("sumset_size", &SumsetBoundReport::sumset_size)
        .def_readonly("fiber_l2", &SumsetBoundReport::fiber_l2)
        .def_readonly("fiber_plancherel_residual",
                      &SumsetBoundReport::fiber_plancherel_residual);
    m.def("sumset_bound_check",
          [](const std::vector<PointSet>& parts, const std::vector<double>& ps) {
              std::vector<const PointSet*> ptrs;
              for (const auto& p : parts) ptrs.push_back(&p);
              return sumset_bound_check(ptrs, ps);
          });

    py::class_<SidonSumReport>(m, "SidonSumReport")
        .def_readonly("lower", &SidonSumReport::lower)
        .def_readonly("value", &SidonSumReport::value)
        .def_readonly("upper", &SidonSumReport::upper)
        .def_readonly("holds", &SidonSumReport::holds)
        .def_readonly("s_emp", &SidonSumReport::s_emp)
        .def_readonly("two_over_p", &SidonSumReport::two_over_p);
    m.def("sidon_sum_check", &sidon_sum_check);

    // Character sums.
    py::enum_<SumKind>(m, "SumKind")
        .value("GENERAL", SumKind::kGeneral)
        .value("KLOOSTERMAN", SumKind::kKloosterman)
        .value("WEIL", SumKind::kWeil);
    py::class_<CharSumGrid>(m, "CharSumGrid")
        .def_readonly("ambient", &CharSumGrid::ambient)
        .def_readonly("kind", &CharSumGrid::kind)
        .def("values", [](const CharSumGrid& g) { return values_array(g.values); });
    m.def("char_sum", &char_sum);
    m.def("char_sum_grid", &char_sum_grid);
    m.def("kloosterman_grid", &kloosterman_grid);
    m.def("weil_grid", &weil_grid);
    m.def("charsum_lp", &charsum_lp);

    py::class_<CharSpectrumLink>(m, "CharSpectrumLink")
        .def_readonly("injective", &CharSpectrumLink::injective)
        .def_readonly("image_size", &CharSpectrumLink::image_size)
        .def_readonly("max_residual", &CharSpectrumLink::max_residual);
    m.def("char_spectrum_link", &char_spectrum_link);

    py::class_<KloostermanCheck>(m, "KloostermanCheck")
        .def_readonly("pointwise_ok", &KloostermanCheck::pointwise_ok)
        .def_readonly("worst_ratio", &KloostermanCheck::worst_ratio)
        .def_readonly("fibers_ok", &KloostermanCheck::fibers_ok)
        .def_readonly("fiber_values", &KloostermanCheck::fiber_values)
        .def_readonly("zero_fiber", &KloostermanCheck::zero_fiber);
    m.def("kloosterman_pointwise_check", &kloosterman_pointwise_check);

    py::class_<WeilPointwiseReport>(m, "WeilPointwiseReport")
        .def_readonly("ok", &WeilPointwiseReport::ok)
        .def_readonly("worst_ratio", &WeilPointwiseReport::worst_ratio)
        .def_readonly("asserted", &WeilPointwiseReport::asserted)
        .def_readonly("constant_phases", &WeilPointwiseReport::constant_phases)
        .def_readonly("char_divides_degree", &WeilPointwiseReport::char_divides_degree);
    m.def("weil_pointwise_check", &weil_pointwise_check);

    // Harness.
    py::class_<CFun>(m, "CFun")
        .def_static("parse", &CFun::parse)
        .def("__call__", &CFun::operator())
        .def("__str__", &CFun::str);
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("recipe", &ExperimentConfig::recipe)
        .def_readwrite("q_grid", &ExperimentConfig::q_grid)
        .def_readwrite("dim", &ExperimentConfig::dim)
        .def_readwrite("p_grid", &ExperimentConfig::p_grid)
        .def_readwrite("band_lo", &ExperimentConfig::band_lo)
        .def_readwrite("band_hi", &ExperimentConfig::band_hi)
        .def_readwrite("slope_max", &ExperimentConfig::slope_max)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("alpha", &ExperimentConfig::alpha)
        .def_readwrite("mc_p", &ExperimentConfig::mc_p)
        .def_readwrite("cfun", &ExperimentConfig::cfun)
        .def_readwrite("max_exceedance", &ExperimentConfig::max_exceedance)
        .def_readwrite("workers", &ExperimentConfig::workers)
        .def("canonical", &ExperimentConfig::canonical);
    py::class_<CellMeasurement>(m, "CellMeasurement")
        .def_readonly("field_spec", &CellMeasurement::field_spec)
        .def_readonly("q", &CellMeasurement::q)
        .def_readonly("set_size", &CellMeasurement::set_size)
        .def_readonly("trial", &CellMeasurement::trial)
        .def_readonly("p", &CellMeasurement::p)
        .def_readonly("lp", &CellMeasurement::lp)
        .def_readonly("s_emp", &CellMeasurement::s_emp)
        .def_readonly("s_theory", &CellMeasurement::s_theory)
        .def_readonly("predicted", &CellMeasurement::predicted)
        .def_readonly("ratio", &CellMeasurement::ratio)
        .def_readonly("in_band", &CellMeasurement::in_band);
    py::class_<AssertionResult>(m, "AssertionResult")
        .def_readonly("id", &AssertionResult::id)
        .def_readonly("pass_", &AssertionResult::pass)
        .def_readonly("value", &AssertionResult::value)
        .def_readonly("detail", &AssertionResult::detail);
    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("config_hash", &RunRecord::config_hash)
        .def_readonly("cells", &RunRecord::cells)
        .def_readonly("assertions", &RunRecord::assertions)
        .def("all_pass", &RunRecord::all_pass)
        .def("to_json", &RunRecord::to_json);
    m.def("sweep", &sweep, py::call_guard<py::gil_scoped_release>());
    m.def("monte_carlo", &monte_carlo, py::call_guard<py::gil_scoped_release>());

    m.attr("__version__") = kLibraryVersion;
    m.attr("INF_P") = kInfP;
}
