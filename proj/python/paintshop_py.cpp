#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "paintshop/anneal.hpp"
#include "paintshop/bench.hpp"
#include "paintshop/core.hpp"
#include "paintshop/exact.hpp"
#include "paintshop/generate.hpp"
#include "paintshop/heuristics.hpp"
#include "paintshop/ilp.hpp"
#include "paintshop/io.hpp"
#include "paintshop/learn.hpp"
#include "paintshop/masks.hpp"
#include "paintshop/msa.hpp"

namespace py = pybind11;
using namespace paintshop;

namespace {

std::vector<bool> mask_bits(const ActionMask& m) {
  std::vector<bool> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i];
  return out;
}

}  // namespace

PYBIND11_MODULE(_paintshop, m) {
  m.doc() = "Paint shop resequencing with flexible multi-lane FIFO buffers";

  py::register_exception<Error>(m, "PaintshopError");

  py::class_<Instance>(m, "Instance")
      .def(py::init([](int num_colors, int lanes, int width, std::vector<Color> upstream,
                       std::vector<std::vector<Color>> initial_buffer) {
             Instance inst;
             inst.num_colors = num_colors;
             inst.lanes = lanes;
             inst.width = width;
             inst.upstream = std::move(upstream);
             inst.initial_buffer = std::move(initial_buffer);
             inst.validate();
             return inst;
           }),
           py::arg("num_colors"), py::arg("lanes"), py::arg("width"), py::arg("upstream"),
           py::arg("initial_buffer") = std::vector<std::vector<Color>>{})
      .def_readonly("num_colors", &Instance::num_colors)
      .def_readonly("lanes", &Instance::lanes)
      .def_readonly("width", &Instance::width)
      .def_readonly("upstream", &Instance::upstream)
      .def_readonly("initial_buffer", &Instance::initial_buffer)
      .def_property_readonly("id", [](const Instance& i) { return instance_id(i); })
      .def("to_json", [](const Instance& i) { return io::instance_to_json(i); })
      .def_static("from_json", [](const std::string& s) { return io::instance_from_json(s); })
      .def("__repr__", [](const Instance& i) { return "<Instance " + instance_id(i) + ">"; });

  py::enum_<ActionKind>(m, "ActionKind").value("Retrieve", ActionKind::Retrieve).value("Store", ActionKind::Store);

  py::class_<Action>(m, "Action")
      .def_static("store", &Action::store, py::arg("lane"))
      .def_static("retrieve", &Action::retrieve, py::arg("lane"))
      .def_readonly("kind", &Action::kind)
      .def_readonly("lane", &Action::lane)
      .def("flat", &Action::flat, py::arg("lanes"))
      .def("__eq__", [](const Action& a, const Action& b) { return a == b; })
      .def("__repr__", &Action::to_string);

  py::class_<Solution>(m, "Solution")
      .def_readonly("actions", &Solution::actions)
      .def_readonly("downstream", &Solution::downstream)
      .def_readonly("color_changes", &Solution::color_changes)
      .def_readonly("producer", &Solution::producer)
      .def_readonly("runtime_seconds", &Solution::runtime_seconds)
      .def("to_json", [](const Solution& s) { return io::solution_to_json(s); });

  py::class_<ShopState>(m, "ShopState")
      .def(py::init([](const Instance& i) { return new_state(i); }))
      .def("advance", [](ShopState& s, Action a) { return s.advance(a); })
      .def("legal", [](const ShopState& s, Action a) { return legal(s, a); })
      .def("is_terminal", [](const ShopState& s) { return is_terminal(s); })
      .def("observation", [](const ShopState& s, int k) { return encode_observation(s, k); }, py::arg("lookahead") = 5)
      .def("mask", [](const ShopState& s, const std::string& v) { return mask_bits(full_mask(s, parse_mask_variant(v))); },
           py::arg("variant") = "all")
      .def_property_readonly("current_color", &ShopState::current_color)
      .def_property_readonly("downstream", &ShopState::downstream)
      .def_property_readonly("grid", [](const ShopState& s) { return std::vector<Color>(s.grid().begin(), s.grid().end()); });

  m.def("color_changes", [](const std::vector<Color>& d) { return color_changes(d); });
  m.def("replay", [](const Instance& i, const std::vector<Action>& a) { return replay(i, a); });

  m.def(
      "generate_instance",
      [](int colors, int seq_len, int lanes, int width, const std::string& dist, std::uint64_t seed, bool fill) {
        return generate_instance(colors, seq_len, lanes, width, ColorDistribution::parse(dist), seed, fill);
      },
      py::arg("colors"), py::arg("seq_len"), py::arg("lanes"), py::arg("width"), py::arg("dist") = "balanced",
      py::arg("seed") = 0, py::arg("fill") = false);
  m.def(
      "color_probabilities",
      [](const std::string& dist, int colors) { return ColorDistribution::parse(dist).probabilities(colors); },
      py::arg("dist"), py::arg("colors"));

  m.def("greedy", &greedy_solve);
  m.def(
      "greedy_fill_rate",
      [](const Instance& i, double fu, double fl) { return greedy_fill_rate_solve(i, FillBounds::from_double(fu, fl)); },
      py::arg("instance"), py::arg("fu"), py::arg("fl"));
  m.def("msa", &msa_solve);
  m.def(
      "optimal_retrieval",
      [](const LaneQueues& q, Color start) {
        const auto p = optimal_retrieval(q, start);
        return py::make_tuple(p.lane_order, p.color_changes);
      },
      py::arg("queues"), py::arg("start_color") = kEmpty);

  auto exact = [](bool str) {
    return [str](const Instance& i, std::optional<double> max_seconds) {
      SearchLimits limits;
      limits.max_seconds = max_seconds;
      const ExactResult r = str ? solve_exact_store_then_retrieve(i, limits) : solve_exact(i, limits);
      return py::make_tuple(r.solution, r.proven_optimal);
    };
  };
  m.def("solve_exact", exact(false), py::arg("instance"), py::arg("max_seconds") = std::nullopt,
        "Returns (solution, proven_optimal).");
  m.def("solve_exact_store_then_retrieve", exact(true), py::arg("instance"), py::arg("max_seconds") = std::nullopt);
  m.def("gap_family", &gap_family);

  m.def(
      "simulated_annealing",
      [](const Instance& i, std::uint64_t iterations, std::uint64_t seed, double t0, double beta) {
        AnnealConfig cfg;
        cfg.max_iterations = iterations;
        cfg.cutoff_seconds.reset();
        cfg.seed = seed;
        cfg.t0 = t0;
        cfg.beta = beta;
        return simulated_annealing(i, cfg).solution;
      },
      py::arg("instance"), py::arg("iterations") = 10000, py::arg("seed") = 0, py::arg("t0") = 10.0,
      py::arg("beta") = AnnealConfig{}.beta);

  m.def(
      "export_ilp", [](const Instance& i, bool aligned) { return export_ilp(i, IlpOptions{aligned}); },
      py::arg("instance"), py::arg("aligned") = false);
  m.def(
      "ilp_counts",
      [](const Instance& i, bool aligned) {
        const IlpModel model = build_ilp(i, IlpOptions{aligned});
        return py::make_tuple(model.variable_counts, model.constraint_counts);
      },
      py::arg("instance"), py::arg("aligned") = false);

  m.def("rpd", &rpd);
  m.def("arpd", [](const std::vector<double>& v) { return arpd(v); });
  m.def("max_exclusive_run", &max_exclusive_run);

  py::class_<PolicyParams>(m, "Policy")
      .def_readonly("lanes", &PolicyParams::lanes)
      .def_readonly("width", &PolicyParams::width)
      .def_readonly("lookahead", &PolicyParams::lookahead)
      .def_readonly("num_colors", &PolicyParams::num_colors)
      .def("to_json", [](const PolicyParams& p) { return io::policy_to_json(p); })
      .def_static("from_json", [](const std::string& s) { return io::policy_from_json(s); });

  m.def(
      "train",
      [](int colors, int lanes, int width, int seq_len, std::uint64_t steps, std::uint64_t seed,
         const std::string& mask, std::size_t horizon) {
        PPOConfig cfg;
        cfg.total_timesteps = steps;
        cfg.seed = seed;
        cfg.mask = parse_mask_variant(mask);
        cfg.horizon = horizon;
        TrainTask task;
        task.num_colors = colors;
        task.lanes = lanes;
        task.width = width;
        task.seq_len = seq_len;
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = train(cfg, task);
        }
        std::vector<double> curve;
        for (const auto& c : r.curve) curve.push_back(c.mean_episode_reward);
        return py::make_tuple(r.policy, curve, r.invalid_rewards);
      },
      py::arg("colors"), py::arg("lanes"), py::arg("width"), py::arg("seq_len"), py::arg("steps"),
      py::arg("seed") = 0, py::arg("mask") = "all", py::arg("horizon") = 2048,
      "Returns (policy, mean episode reward per update, invalid reward count).");
  m.def("apply_deterministic", &apply_deterministic);
  m.def(
      "apply_sampling",
      [](const PolicyParams& p, const Instance& i, std::size_t samples, std::uint64_t seed) {
        return apply_sampling(p, i, SamplingBudget{samples, std::nullopt}, seed);
      },
      py::arg("policy"), py::arg("instance"), py::arg("samples"), py::arg("seed") = 0);
  m.def(
      "random_policy",
      [](const Instance& i, const std::string& mask, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return random_policy_solve(i, parse_mask_variant(mask), rng);
      },
      py::arg("instance"), py::arg("mask") = "all", py::arg("seed") = 0);
}
