#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <sstream>

#include "otto/app/commands.hpp"
#include "otto/app/config.hpp"
#include "otto/errors.hpp"
#include "otto/limit_cycle.hpp"
#include "otto/lindblad_oracle.hpp"
#include "otto/sudden_approx.hpp"
#include "otto/sweep.hpp"

namespace py = pybind11;
using namespace otto;

namespace {

py::dict trajectory_dict(const std::vector<TrajectorySample>& samples) {
  std::vector<double> t, omega, Omega, E, L, C, D, s_e, s_vn, coh;
  std::vector<std::string> seg;
  for (const auto& s : samples) {
    t.push_back(s.t);
    seg.emplace_back(to_string(s.segment));
    omega.push_back(s.omega);
    Omega.push_back(s.Omega);
    E.push_back(s.x.E);
    L.push_back(s.x.L);
    C.push_back(s.x.C);
    D.push_back(s.x.D);
    s_e.push_back(s.s.energy);
    s_vn.push_back(s.s.von_neumann);
    coh.push_back(s.coherence);
  }
  py::dict d;
  d["t"] = t;
  d["segment"] = seg;
  d["omega"] = omega;
  d["Omega"] = Omega;
  d["E"] = E;
  d["L"] = L;
  d["C"] = C;
  d["D"] = D;
  d["S_E"] = s_e;
  d["S_VN"] = s_vn;
  d["coherence"] = coh;
  return d;
}

py::list sweep_rows(const SweepResult& r) {
  py::list rows;
  for (const auto& p : r.points) {
    py::dict d;
    d["index"] = p.index;
    d["coord"] = std::vector<double>(p.coord.begin(), p.coord.begin() + r.spec.axes.size());
    if (p.report) {
      d["Q_c"] = p.report->Q_c;
      d["W_on"] = p.report->W_on;
      d["P_c"] = p.report->P_c;
      d["COP"] = p.report->COP;
      d["S_u"] = p.report->S_u;
    }
    d["refrigerating"] = p.refrigerating();
    d["failure"] = p.failure ? py::object(py::str(std::string(to_string(*p.failure)))) : py::none();
    rows.append(d);
  }
  return rows;
}

// Oracle deviation of each segment at the limit cycle corners.
std::vector<double> oracle_deviation(CycleParams p) {
  p.models = {};
  ReportOptions ro;
  ro.run_power_iteration = false;
  const CycleReport r = cycle_report(p, ro);
  const auto segments = build_segments(p);
  const auto& m = p.medium;
  auto adiabat = [&](double from, double to, const AdiabatSegment& a) {
    return a.schedule == Schedule::ConstantMu ? oracle::constant_mu_segment(m.J, from, to, a.tau)
                                              : oracle::linear_segment(m.J, from, to, a.tau);
  };
  const std::array<oracle::OracleSegment, 4> segs{
      oracle::isochore_segment(m.omega_c, m.J, p.cold), adiabat(m.omega_c, m.omega_h, p.compression),
      oracle::isochore_segment(m.omega_h, m.J, p.hot), adiabat(m.omega_h, m.omega_c, p.expansion)};
  std::vector<double> out;
  for (int k = 0; k < 4; ++k) {
    const auto a = segments[k].apply(r.corner_vectors[k]);
    const auto b = oracle::propagate(r.corner_vectors[k], segs[k]);
    out.push_back((a.affine() - b.affine()).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sudden quantum Otto refrigerator with a coupled spin-pair working medium";

  auto base = py::register_exception<Error>(m, "OttoError", PyExc_RuntimeError);
#define OTTO_PY_ERROR(Name) py::register_exception<Name>(m, #Name, base.ptr());
  OTTO_PY_ERROR(InvalidParameter)
  OTTO_PY_ERROR(PhysicalityViolation)
  OTTO_PY_ERROR(DegenerateAdiabat)
  OTTO_PY_ERROR(SegmentOrderMismatch)
  OTTO_PY_ERROR(MarginalCycle)
  OTTO_PY_ERROR(NoConvergence)
  OTTO_PY_ERROR(ClassInapplicable)
  OTTO_PY_ERROR(RegimeViolation)
  OTTO_PY_ERROR(NoMaximum)
  OTTO_PY_ERROR(StepTooLarge)
  OTTO_PY_ERROR(DegenerateBasisAmbiguity)
  OTTO_PY_ERROR(ConfigError)
#undef OTTO_PY_ERROR

  py::enum_<Schedule>(m, "Schedule")
      .value("ConstantMu", Schedule::ConstantMu)
      .value("Linear", Schedule::Linear);

  py::class_<WorkingMedium>(m, "WorkingMedium")
      .def(py::init([](double J, double wc, double wh) { return WorkingMedium{J, wc, wh}; }),
           py::arg("J") = 1.0, py::arg("omega_c") = 0.5, py::arg("omega_h") = 2.0)
      .def_readwrite("J", &WorkingMedium::J)
      .def_readwrite("omega_c", &WorkingMedium::omega_c)
      .def_readwrite("omega_h", &WorkingMedium::omega_h)
      .def_property_readonly("Omega_c", &WorkingMedium::Omega_c)
      .def_property_readonly("Omega_h", &WorkingMedium::Omega_h);

  py::class_<BathSegment>(m, "BathSegment")
      .def(py::init([](double T, double k, double g, double tau) { return BathSegment{T, k, g, tau}; }),
           py::arg("T") = 1.0, py::arg("kappa_down") = 1.0, py::arg("gamma") = 0.0,
           py::arg("tau") = 1.0)
      .def_readwrite("T", &BathSegment::T)
      .def_readwrite("kappa_down", &BathSegment::kappa_down)
      .def_readwrite("gamma", &BathSegment::gamma)
      .def_readwrite("tau", &BathSegment::tau)
      .def("kappa_up", &BathSegment::kappa_up)
      .def("relaxation_rate", &BathSegment::relaxation_rate);

  py::class_<AdiabatSegment>(m, "AdiabatSegment")
      .def(py::init([](double tau, Schedule s) { return AdiabatSegment{tau, s}; }),
           py::arg("tau") = 0.1, py::arg("schedule") = Schedule::ConstantMu)
      .def_readwrite("tau", &AdiabatSegment::tau)
      .def_readwrite("schedule", &AdiabatSegment::schedule);

  py::class_<CycleParams>(m, "CycleParams")
      .def(py::init<>())
      .def_readwrite("medium", &CycleParams::medium)
      .def_readwrite("cold", &CycleParams::cold)
      .def_readwrite("hot", &CycleParams::hot)
      .def_readwrite("compression", &CycleParams::compression)
      .def_readwrite("expansion", &CycleParams::expansion)
      .def("validate", &CycleParams::validate)
      .def("cycle_time", &CycleParams::cycle_time);

  py::class_<ObservableVector>(m, "ObservableVector")
      .def(py::init([](double E, double L, double C, double D) { return ObservableVector{E, L, C, D}; }),
           py::arg("E") = 0.0, py::arg("L") = 0.0, py::arg("C") = 0.0, py::arg("D") = 0.0)
      .def_readwrite("E", &ObservableVector::E)
      .def_readwrite("L", &ObservableVector::L)
      .def_readwrite("C", &ObservableVector::C)
      .def_readwrite("D", &ObservableVector::D)
      .def("__repr__", [](const ObservableVector& x) {
        std::ostringstream os;
        os << "ObservableVector(E=" << x.E << ", L=" << x.L << ", C=" << x.C << ", D=" << x.D << ")";
        return os.str();
      });

  py::class_<Entropies>(m, "Entropies")
      .def_readonly("energy", &Entropies::energy)
      .def_readonly("von_neumann", &Entropies::von_neumann);

  py::class_<CycleReport>(m, "CycleReport")
      .def_readonly("Q_c", &CycleReport::Q_c)
      .def_readonly("Q_h", &CycleReport::Q_h)
      .def_readonly("W_on", &CycleReport::W_on)
      .def_readonly("P_c", &CycleReport::P_c)
      .def_readonly("COP", &CycleReport::COP)
      .def_readonly("S_u", &CycleReport::S_u)
      .def_readonly("corner_vectors", &CycleReport::corner_vectors)
      .def_readonly("corner_entropies", &CycleReport::corner_entropies)
      .def_readonly("corner_coherence", &CycleReport::corner_coherence)
      .def_readonly("n_iterations", &CycleReport::n_iterations)
      .def_readonly("spectral_gap", &CycleReport::spectral_gap)
      .def_readonly("cycle_time", &CycleReport::cycle_time)
      .def_readonly("fixed_point_residual", &CycleReport::fixed_point_residual)
      .def_readonly("first_law_residual", &CycleReport::first_law_residual)
      .def_readonly("iteration_deviation", &CycleReport::iteration_deviation)
      .def_readonly("commutator", &CycleReport::commutator)
      .def_readonly("cop_otto", &CycleReport::cop_otto)
      .def_readonly("cop_carnot", &CycleReport::cop_carnot)
      .def_readonly("violations", &CycleReport::violations)
      .def_readonly("notes", &CycleReport::notes)
      .def_property_readonly("refrigerating", &CycleReport::refrigerating);

  m.def("list_presets", &app::list_presets);
  m.def("load_preset", [](const std::string& name) { return app::load_config(app::preset_path(name)).params; },
        py::arg("name"));
  m.def("parse_config", [](const std::string& text) { return app::parse_config(text).params; },
        py::arg("text"));

  m.def("big_omega", &big_omega, py::arg("omega"), py::arg("J"));
  m.def("equilibrium_energy", &equilibrium_energy, py::arg("Omega"), py::arg("T"));
  m.def("equilibrium_vector", &equilibrium_vector, py::arg("Omega"), py::arg("T"));
  m.def("entropies", [](const ObservableVector& x, double Omega) { return entropies(reconstruct_rho(x, Omega)); },
        py::arg("x"), py::arg("Omega"));
  m.def("density_matrix", [](const ObservableVector& x, double Omega) { return reconstruct_rho(x, Omega).rho; },
        py::arg("x"), py::arg("Omega"));
  m.def("isochore_matrix", &isochore_matrix, py::arg("Omega"), py::arg("bath"));
  m.def("constant_mu_matrix", &constant_mu_matrix, py::arg("J"), py::arg("omega_from"),
        py::arg("omega_to"), py::arg("tau"));
  m.def("global_propagator", [](const CycleParams& p) { return global_propagator(build_segments(p)); },
        py::arg("params"));

  m.def("cycle_report",
        [](const CycleParams& p, bool power_iteration) {
          ReportOptions o;
          o.run_power_iteration = power_iteration;
          return cycle_report(p, o);
        },
        py::arg("params"), py::arg("power_iteration") = true);
  m.def("trajectory", [](const CycleParams& p, int samples) { return trajectory_dict(trajectory(p, samples)); },
        py::arg("params"), py::arg("samples") = 200);
  m.def("sweep_preset",
        [](const std::string& name, int threads) {
          const auto c = app::load_config(app::preset_path(name));
          SweepResult r;
          {
            py::gil_scoped_release release;
            r = run_sweep(c.sweep_spec(), threads);
          }
          return sweep_rows(r);
        },
        py::arg("name"), py::arg("threads") = 1);
  m.def("oracle_deviation", &oracle_deviation, py::arg("params"));

  m.def("qc_appr1b", &qc_appr1b, py::arg("params"));
  m.def("qc_appr2", &qc_appr2, py::arg("params"));
  m.def("qc_appr3a", &qc_appr3a, py::arg("params"));
  m.def("qc_appr3b", [](const CycleParams& p) { return qc_appr3b(p); }, py::arg("params"));
  m.def("sign_switch_roots",
        [](double Omega_c, double Gamma_c, double lo, double hi, int grid) {
          return sign_switch_roots(Omega_c, Gamma_c, lo, hi, grid);
        },
        py::arg("Omega_c"), py::arg("Gamma_c"), py::arg("lo"), py::arg("hi"), py::arg("grid") = 10000);
  m.def("max_cooling_point", &max_cooling_point, py::arg("J"), py::arg("kappa_down_c"), py::arg("tau_c"));

  m.def("run_command",
        [](const std::string& command, const std::string& preset, const std::filesystem::path& out,
           int threads) {
          using Cmd = int (*)(const app::RunConfig&, const app::CommandOptions&, std::ostream&);
          static const std::map<std::string, Cmd> table{
              {"limit-cycle", app::cmd_limit_cycle}, {"trajectory", app::cmd_trajectory},
              {"sweep", app::cmd_sweep},             {"island-map", app::cmd_island_map},
              {"approx-compare", app::cmd_approx_compare}, {"validate", app::cmd_validate},
              {"run-all", app::cmd_run_all}};
          const auto it = table.find(command);
          if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
          app::CommandOptions o;
          o.out_dir = out;
          o.threads = threads;
          std::ostringstream log;
          const int code = it->second(app::load_config(app::preset_path(preset)), o, log);
          return py::make_tuple(code, log.str());
        },
        py::arg("command"), py::arg("preset"), py::arg("out"), py::arg("threads") = 1);
}
