#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "photonfluid/diagnostics.hpp"
#include "photonfluid/dispersion.hpp"
#include "photonfluid/error.hpp"
#include "photonfluid/scales.hpp"
#include "photonfluid/snapshot_io.hpp"
#include "photonfluid/solver.hpp"
#include "photonfluid/vapor.hpp"

namespace py = pybind11;
using namespace photonfluid;
using solver::cplx;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

py::array_t<cplx> to_array(const solver::ComplexField& f, std::size_t nx, std::size_t ny) {
  py::array_t<cplx> a({ny, nx});
  std::copy(f.begin(), f.end(), a.mutable_data());
  return a;
}

solver::ComplexField from_array(const CArray& a, const solver::Grid& g) {
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != g.ny || static_cast<std::size_t>(a.shape(1)) != g.nx)
    throw InvalidArgument("field must have shape (ny, nx)");
  return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-stream instability laboratory for paraxial fluids of light";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // scales
  py::class_<scales::FluidScales>(m, "FluidScales")
      .def_readonly("rho0", &scales::FluidScales::rho0)
      .def_readonly("g", &scales::FluidScales::g)
      .def_property_readonly("regime", [](const scales::FluidScales& s) { return scales::to_string(s.regime); })
      .def_readonly("cs_single", &scales::FluidScales::cs_single)
      .def_readonly("cs_two", &scales::FluidScales::cs_two)
      .def_readonly("xi_single", &scales::FluidScales::xi_single)
      .def_readonly("xi_two", &scales::FluidScales::xi_two);
  m.def("fluid_scales", &scales::fluid_scales, py::arg("g"), py::arg("rho0"));
  m.def("mach_number", &scales::mach_number, py::arg("v"), py::arg("scales"));

  // dispersion
  m.def("bogoliubov", py::overload_cast<double, int>(&dispersion::bogoliubov), py::arg("q"), py::arg("sign") = 1);
  m.def(
      "two_stream_roots",
      [](double Q, double beta, double alignment, bool oracle) {
        const dispersion::ModeQuery q{Q, beta, alignment};
        const auto s = oracle ? dispersion::two_stream_roots_oracle(q) : dispersion::two_stream_roots(q);
        return py::make_tuple(std::vector<cplx>(s.roots.begin(), s.roots.end()),
                              std::vector<bool>(s.on_pole.begin(), s.on_pole.end()));
      },
      py::arg("Q"), py::arg("beta"), py::arg("alignment") = 1.0, py::arg("oracle") = false,
      "Roots W = Omega xi^2 and their pole flags.");
  m.def(
      "growth_rate",
      [](double Q, double beta, double alignment) { return dispersion::growth_rate({Q, beta, alignment}); },
      py::arg("Q"), py::arg("beta"), py::arg("alignment") = 1.0);
  m.def(
      "unstable_band",
      [](double beta) {
        const auto b = dispersion::unstable_band(beta);
        return py::make_tuple(b.q_lo, b.q_hi);
      },
      py::arg("beta"));
  m.def(
      "max_growth",
      [](double beta) {
        const auto r = dispersion::max_growth(beta);
        return py::make_tuple(r.Q_star, r.gamma_star);
      },
      py::arg("beta"));
  m.def(
      "stability_map",
      [](const std::vector<double>& betas, const std::vector<double>& Qs) {
        const auto map = dispersion::stability_map(betas, Qs);
        py::array_t<double> out({betas.size(), Qs.size()});
        std::copy(map.growth.begin(), map.growth.end(), out.mutable_data());
        return out;
      },
      py::arg("betas"), py::arg("Qs"), "Growth-rate raster of shape (len(betas), len(Qs)).");

  // solver
  py::class_<solver::Grid>(m, "Grid")
      .def(py::init([](std::size_t nx, std::size_t ny, double lx, double ly, double dz) {
             solver::Grid g{nx, ny, lx, ly, dz};
             g.validate();
             return g;
           }),
           py::arg("nx"), py::arg("ny"), py::arg("lx"), py::arg("ly"), py::arg("dz"))
      .def_readwrite("nx", &solver::Grid::nx)
      .def_readwrite("ny", &solver::Grid::ny)
      .def_readwrite("lx", &solver::Grid::lx)
      .def_readwrite("ly", &solver::Grid::ly)
      .def_readwrite("dz", &solver::Grid::dz);
  m.def("default_dz", &solver::default_dz, py::arg("grid"), py::arg("g"), py::arg("rho_max"));

  py::class_<solver::RunSpec>(m, "RunSpec")
      .def(py::init<>())
      .def_readwrite("g", &solver::RunSpec::g)
      .def_readwrite("v0", &solver::RunSpec::v0)
      .def_readwrite("rho0", &solver::RunSpec::rho0)
      .def_readwrite("noise_amplitude", &solver::RunSpec::noise_amplitude)
      .def_readwrite("noise_seed", &solver::RunSpec::noise_seed)
      .def_readwrite("z_end", &solver::RunSpec::z_end)
      .def_readwrite("snapshot_every", &solver::RunSpec::snapshot_every)
      .def_readwrite("dealias", &solver::RunSpec::dealias)
      .def_property(
          "mode", [](const solver::RunSpec& s) { return std::string(solver::to_string(s.mode)); },
          [](solver::RunSpec& s, const std::string& v) { s.mode = solver::stream_mode_from_string(v); });

  py::class_<solver::FieldState>(m, "FieldState")
      .def(py::init([](const solver::Grid& g, const std::vector<CArray>& envelopes, double z) {
             solver::FieldState s;
             s.grid = g;
             s.z = z;
             for (const auto& e : envelopes) s.envelopes.push_back(from_array(e, g));
             s.validate();
             return s;
           }),
           py::arg("grid"), py::arg("envelopes"), py::arg("z") = 0.0)
      .def_readonly("grid", &solver::FieldState::grid)
      .def_readonly("z", &solver::FieldState::z)
      .def_property_readonly("envelopes",
                             [](const solver::FieldState& s) {
                               py::list out;
                               for (const auto& e : s.envelopes) out.append(to_array(e, s.grid.nx, s.grid.ny));
                               return out;
                             })
      .def("density", [](const solver::FieldState& s) {
        const auto rho = s.density();
        py::array_t<double> a({s.grid.ny, s.grid.nx});
        std::copy(rho.begin(), rho.end(), a.mutable_data());
        return a;
      });

  m.def("init_two_stream", &solver::init_two_stream, py::arg("grid"), py::arg("spec"));
  m.def(
      "propagate",
      [](const solver::FieldState& state, const solver::RunSpec& spec) {
        py::gil_scoped_release release;
        return solver::propagate(state, spec);
      },
      py::arg("state"), py::arg("spec"), "Snapshots from the initial state to z_end.");
  m.def("norm", &solver::norm);
  m.def("momentum", &solver::momentum);
  m.def("hamiltonian", [](const solver::FieldState& s, double g) { return solver::hamiltonian(s, g); });
  m.def("checksum", &solver::checksum);

  // diagnostics
  m.def("peak_mode_amplitude", &diagnostics::peak_mode_amplitude);
  m.def(
      "density_mode",
      [](const solver::FieldState& s, std::array<double, 2> q) {
        return diagnostics::density_mode(s, diagnostics::lattice_mode(s.grid, q));
      },
      py::arg("state"), py::arg("q"));
  m.def(
      "fit_growth_rate",
      [](const std::vector<double>& z, const std::vector<cplx>& amplitude, double amp_lo, double amp_hi,
         std::optional<double> z_max) {
        if (z.size() != amplitude.size()) throw InvalidArgument("z and amplitude differ in length");
        diagnostics::ModeHistory h;
        for (std::size_t i = 0; i < z.size(); ++i) h.samples.push_back({z[i], amplitude[i]});
        const auto f = diagnostics::fit_growth_rate(h, {amp_lo, amp_hi, z_max});
        py::dict d;
        d["ok"] = f.ok;
        d["gamma"] = f.gamma;
        d["uncertainty"] = f.uncertainty;
        d["samples_used"] = f.samples_used;
        d["diagnostic"] = f.diagnostic;
        return d;
      },
      py::arg("z"), py::arg("amplitude"), py::arg("amp_lo") = 1e-5, py::arg("amp_hi") = 1e-2,
      py::arg("z_max") = py::none());
  m.def(
      "detect_vortices",
      [](const solver::Grid& g, const CArray& psi, bool periodic) {
        const auto field = from_array(psi, g);
        std::vector<std::tuple<double, double, int>> out;
        for (const auto& v : diagnostics::detect_vortices(
                 g, field, 0.0, periodic ? diagnostics::Boundary::periodic : diagnostics::Boundary::open))
          out.emplace_back(v.x, v.y, v.charge);
        return out;
      },
      py::arg("grid"), py::arg("psi"), py::arg("periodic") = true);
  m.def("far_field", [](const solver::FieldState& s) {
    const auto r = diagnostics::far_field(s);
    py::array_t<double> a({r.ny, r.nx});
    std::copy(r.values.begin(), r.values.end(), a.mutable_data());
    return a;
  });
  m.def("band_power", &diagnostics::band_power, py::arg("state"), py::arg("xi"), py::arg("Q_lo"), py::arg("Q_hi"));

  // vapor
  m.def(
      "vapor_report",
      [](double atomic_density_cm3, double detuning_mhz, double intensity_w_cm2) {
        using namespace vapor;
        const VaporConditions c{atomic_density_cm3 * units::per_cm3, units::mhz_to_rad_per_s(detuning_mhz),
                                intensity_w_cm2 * units::w_per_cm2};
        const auto r = feasibility_report(rubidium85_d2(), c);
        py::dict d;
        d["n0"] = r.kerr.n0;
        d["n2_cm2_per_W"] = r.kerr.n2 / units::cm2_per_w;
        d["saturation_intensity_W_per_cm2"] = r.saturation_intensity / units::w_per_cm2;
        d["delta_n"] = r.delta_n;
        d["length_scale_mm"] = r.length_scale ? py::cast(*r.length_scale / units::mm) : py::none();
        d["text"] = r.to_text();
        return d;
      },
      py::arg("atomic_density_cm3") = 1e12, py::arg("detuning_mhz") = -120.0, py::arg("intensity_w_cm2") = 0.4,
      "Feasibility report for 85Rb in laboratory units.");

  // io
  m.def("read_field", [](const std::filesystem::path& p) {
    const auto f = io::read_field(p);
    py::array_t<cplx> a({static_cast<std::size_t>(f.header.ny), static_cast<std::size_t>(f.header.nx)});
    std::copy(f.data.begin(), f.data.end(), a.mutable_data());
    return py::make_tuple(a, f.header.lx, f.header.ly, f.header.z);
  });
  m.def(
      "write_field",
      [](const std::filesystem::path& p, const CArray& a, double lx, double ly, double z) {
        if (a.ndim() != 2) throw InvalidArgument("field must be two-dimensional");
        const io::RasterHeader h{static_cast<std::uint32_t>(a.shape(1)), static_cast<std::uint32_t>(a.shape(0)), lx, ly,
                                 z};
        io::write_field(p, h, std::span<const cplx>(a.data(), static_cast<std::size_t>(a.size())));
      },
      py::arg("path"), py::arg("field"), py::arg("lx"), py::arg("ly"), py::arg("z") = 0.0);
}
