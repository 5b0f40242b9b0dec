// Python bindings. Experiments are described by the same YAML text the command line
// tool reads, so Python and C++ runs share one configuration format.

#include <memory>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vic/dynamics/dynamics.hpp"
#include "vic/dynamics/robot_model.hpp"
#include "vic/dynamics/simulator.hpp"
#include "vic/error.hpp"
#include "vic/harness/evaluate.hpp"
#include "vic/harness/experiment.hpp"
#include "vic/io/checkpoint.hpp"
#include "vic/io/config.hpp"

namespace py = pybind11;
using namespace vic;

namespace {

RobotModel preset(const std::string& name) {
  if (name == "hopper") return hopper_preset();
  if (name == "arm") return arm_preset();
  throw ConfigError("robot", "unknown preset '" + name + "' (hopper | arm)");
}

ExperimentSpec spec_from(const std::string& env, const std::string& yaml) {
  const ExperimentSpec base = ExperimentSpec::defaults_for(env);
  return yaml.empty() ? base : parse_experiment(yaml, base);
}

py::dict diagnostics_dict(const EpisodeDiagnostics& d) {
  py::dict out;
  out["score"] = d.score;
  out["steps"] = d.steps;
  out["diverged"] = d.diverged;
  out["peak_force"] = d.peak_force;
  out["tracking_error"] = d.tracking_error;
  out["contact_losses"] = d.contact_losses;
  out["force_diff_std"] = d.force_diff_std;
  out["mean_kp"] = d.mean_kp;
  return out;
}

py::dict step_dict(const StepResult& r) {
  py::dict terms;
  for (const auto& [name, value] : r.reward.terms()) terms[py::str(name)] = value;
  py::dict info;
  info["reward_terms"] = terms;
  info["peak_force"] = r.info.peak_force;
  info["tip_force"] = r.info.tip_force;
  info["tip_in_contact"] = r.info.tip_in_contact;
  info["tracking_error"] = r.info.tracking_error;
  info["torque"] = r.info.torque;
  info["q_des"] = r.info.q_des;
  info["kp"] = r.info.kp;
  info["diverged"] = r.info.diverged;
  return info;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulation, impedance control and DDPG training for contact-rich tasks";

  // Base first: later registrations are tried first, so subclasses keep their own type.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<MismatchError>(m, "MismatchError", PyExc_ValueError);

  m.def("default_config", [](const std::string& env) { return dump_experiment(ExperimentSpec::defaults_for(env)); },
        py::arg("env") = "hopper", "Default experiment YAML for an environment.");

  m.def("robot_preset", [](const std::string& name) { return dump_robot(preset(name)); },
        py::arg("name"), "Robot description YAML of a preset (hopper | arm).");

  m.def("mass_matrix", [](const std::string& robot, const Eigen::VectorXd& q) {
          return mass_matrix(preset(robot), q);
        },
        py::arg("robot"), py::arg("q"), "Joint-space inertia matrix M(q) of a preset.");

  m.def("mechanical_energy",
        [](const std::string& robot, const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) {
          const RobotModel model = preset(robot);
          EnvState s = make_state(model, q);
          s.qdot = qdot;
          ContactParams p;
          p.surface_height = -1e3;  // far away: no contact energy
          return mechanical_energy(model, s, p);
        },
        py::arg("robot"), py::arg("q"), py::arg("qdot"), "Kinetic plus gravity energy, J.");

  py::class_<Environment>(m, "Environment")
      .def(py::init([](const std::string& env, const std::string& config) {
             return make_environment(spec_from(env, config));
           }),
           py::arg("env") = "hopper", py::arg("config") = "",
           "Environment described by a default config overridden by YAML text.")
      .def_property_readonly("id", [](const Environment& e) { return std::string(e.id()); })
      .def_property_readonly("observation_dim", &Environment::observation_dim)
      .def_property_readonly("action_dim", [](const Environment& e) { return e.codec().action_dim(); })
      .def_property_readonly("parametrization",
                             [](const Environment& e) { return std::string(to_string(e.parametrization())); })
      .def_property_readonly("reward_names", &Environment::reward_names)
      .def_property_readonly("done", &Environment::done)
      .def_property_readonly("q", [](const Environment& e) { return e.state().q; })
      .def_property_readonly("qdot", [](const Environment& e) { return e.state().qdot; })
      .def("reset", &Environment::reset, py::arg("seed"), "Start an episode; returns the observation.")
      .def("step",
           [](Environment& e, const Eigen::VectorXd& raw) {
             const StepResult r = e.step_raw(raw);
             return py::make_tuple(r.observation, r.reward.total(), r.terminal, step_dict(r));
           },
           py::arg("action"),
           "Apply a raw action in [-1, 1]^d; returns (observation, reward, terminal, info).");

  py::class_<Policy>(m, "Policy")
      .def_readonly("env_id", &Policy::env_id)
      .def_readonly("seed", &Policy::seed)
      .def_property_readonly("parametrization",
                             [](const Policy& p) { return std::string(to_string(p.codec.parametrization)); })
      .def("act", &Policy::raw_action, py::arg("observation"), "Raw action in [-1, 1]^d.")
      .def("save", [](const Policy& p, const std::string& path) { save_checkpoint(p, path); },
           py::arg("path"));

  m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

  m.def("evaluate",
        [](const Policy& policy, const std::string& config, int episodes, std::uint64_t seed) {
          const ExperimentSpec spec = spec_from(policy.env_id, config);
          const EvalReport r = [&] {
            py::gil_scoped_release release;
            return evaluate_policy(policy, spec, episodes, seed);
          }();
          py::list out;
          for (const auto& d : r.episodes) out.append(diagnostics_dict(d));
          return out;
        },
        py::arg("policy"), py::arg("config") = "", py::arg("episodes") = 5, py::arg("seed") = 0,
        "Noise-free episodes; one metrics dict per episode.");

  m.def("run_experiment",
        [](const std::string& config, const std::string& env) {
          const ExperimentSpec spec = spec_from(env, config);
          const RunSummary s = [&] {
            py::gil_scoped_release release;
            return run_experiment(spec);
          }();
          py::list seeds;
          for (const auto& r : s.seeds) {
            py::dict d;
            d["seed"] = r.seed;
            d["failed"] = r.failed;
            d["failure"] = r.failure;
            d["final_score"] = r.final_score;
            d["best_eval_score"] = r.best_eval_score;
            d["converged"] = r.converged;
            d["env_steps"] = r.env_steps;
            seeds.append(d);
          }
          py::dict out;
          out["output_dir"] = s.spec.output_dir;
          out["mean_final"] = s.mean_final;
          out["std_final"] = s.std_final;
          out["best_score"] = s.best_score;
          out["threshold"] = s.threshold;
          out["converged_fraction"] = s.converged_fraction;
          out["seeds"] = seeds;
          return out;
        },
        py::arg("config"), py::arg("env") = "hopper",
        "Train every seed of an experiment and write its artifacts; returns the summary.");
}
