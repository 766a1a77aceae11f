#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "paintshop/anneal.hpp"
#include "paintshop/bench.hpp"
#include "paintshop/core.hpp"
#include "paintshop/exact.hpp"
#include "paintshop/generate.hpp"
#include "paintshop/heuristics.hpp"
#include "paintshop/ilp.hpp"
#include "paintshop/io.hpp"
#include "paintshop/learn.hpp"
#include "paintshop/msa.hpp"

namespace fs = std::filesystem;
using namespace paintshop;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  double cutoff_seconds = 300.0;
  std::string out;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    io::write_file(g.out, text);
  }
}

std::vector<std::pair<int, int>> parse_buffers(const std::string& list) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw Error("buffer '" + item + "' is not of the form LxW");
    out.emplace_back(std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1)));
  }
  return out;
}

std::string summary_line(const Solution& s) {
  std::ostringstream line;
  line << s.producer << ": " << s.color_changes << " color change(s), " << s.actions.size() << " actions, "
       << s.runtime_seconds << " s";
  return line.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paint shop resequencing with flexible multi-lane FIFO buffers"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--cutoff-seconds", g.cutoff_seconds, "Wall-clock budget per run");
  app.add_option("--out", g.out, "Output file (stdout if omitted)");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate random instances as JSON");
  int colors = 5, lanes = 2, width = 2, seq_len = 20, count = 1;
  std::string dist_name = "balanced";
  double slope = -1.0;
  bool fill = false;
  gen->add_option("--colors", colors)->check(CLI::PositiveNumber);
  gen->add_option("--lanes", lanes)->check(CLI::PositiveNumber);
  gen->add_option("--width", width)->check(CLI::PositiveNumber);
  gen->add_option("--seq-len", seq_len)->check(CLI::NonNegativeNumber);
  gen->add_option("--dist", dist_name, "balanced | exponential | linear");
  gen->add_option("--slope", slope, "Slope of the linear distribution");
  gen->add_flag("--fill", fill, "Start with a randomly filled buffer");
  gen->add_option("--count", count, "Number of instances; with --out a directory is written")
      ->check(CLI::PositiveNumber);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  std::string instance_path, method = "greedy", policy_path, mask_name = "all";
  double fu = 1.0, fl = 0.0, grid_step = -1.0, t0 = 10.0, beta = AnnealConfig{}.beta, time_scale = 1.0;
  double max_seconds = -1.0;
  std::uint64_t iterations = 0;
  std::size_t samples = 0;
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--method", method,
                    "exact | exact-str | greedy | greedy-fill | msa | sa | policy-det | policy-sample | random");
  solve->add_option("--fu", fu, "Upper fill-rate bound");
  solve->add_option("--fl", fl, "Lower fill-rate bound");
  solve->add_option("--grid-step", grid_step, "Search fill-rate bounds on a grid");
  solve->add_option("--t0", t0);
  solve->add_option("--beta", beta);
  solve->add_option("--time-scale", time_scale);
  solve->add_option("--iterations", iterations, "SA iteration budget");
  solve->add_option("--max-seconds", max_seconds, "Exact search time limit");
  solve->add_option("--policy", policy_path);
  solve->add_option("--samples", samples);
  solve->add_option("--mask", mask_name, "Mask for the random policy");

  // train
  auto* tr = app.add_subcommand("train", "Train a masked PPO policy");
  TrainTask task;
  PPOConfig ppo;
  std::string train_mask = "all", curve_path, hidden = "64,64";
  std::uint64_t steps = ppo.total_timesteps;
  tr->add_option("--colors", task.num_colors)->check(CLI::PositiveNumber);
  tr->add_option("--lanes", task.lanes)->check(CLI::PositiveNumber);
  tr->add_option("--width", task.width)->check(CLI::PositiveNumber);
  tr->add_option("--seq-len", task.seq_len)->check(CLI::NonNegativeNumber);
  tr->add_option("--dist", dist_name);
  tr->add_option("--mask", train_mask, "all | inv-gr-ft | inv-gr | inv | none");
  tr->add_option("--steps", steps, "Total environment steps");
  tr->add_option("--horizon", ppo.horizon);
  tr->add_option("--lr", ppo.learning_rate);
  tr->add_option("--epochs", ppo.epochs);
  tr->add_option("--minibatch", ppo.minibatch_size);
  tr->add_option("--lookahead", ppo.lookahead);
  tr->add_option("--clip", ppo.clip_epsilon);
  tr->add_option("--value-coef", ppo.value_coef);
  tr->add_option("--entropy-coef", ppo.entropy_coef);
  tr->add_option("--hidden", hidden, "Hidden layer sizes, e.g. 64,64");
  tr->add_flag("--gae", ppo.use_gae, "Use generalized advantage estimation");
  tr->add_option("--curve", curve_path, "Write the learning curve as CSV");

  // export-ilp
  auto* ilp = app.add_subcommand("export-ilp", "Write the integer program in LP format");
  bool raw = false, aligned = false;
  ilp->add_option("--instance", instance_path)->required();
  auto* raw_flag = ilp->add_flag("--raw", raw, "Objective counts the first painted car as a change");
  ilp->add_flag("--aligned", aligned, "Objective equals the color change count")->excludes(raw_flag);

  // bench
  auto* bench = app.add_subcommand("bench", "Run methods over an instance grid and write CSV");
  std::vector<std::string> methods{"greedy", "greedy-fill:fu=0.6,fl=0.5", "msa", "sa:iterations=20000"};
  std::vector<std::string> instance_files;
  std::string color_list = "5", buffers = "2x2";
  int per_cell = 10;
  std::size_t workers = 0;
  bench->add_option("--method", methods, "Method spec, repeatable (name[:k=v,...])");
  bench->add_option("--instances", instance_files, "Instance JSON files or directories");
  bench->add_option("--colors", color_list, "Comma separated color counts for the generated grid");
  bench->add_option("--buffers", buffers, "Comma separated LxW buffers for the generated grid");
  bench->add_option("--seq-len", seq_len);
  bench->add_option("--count", per_cell, "Instances per grid cell");
  bench->add_option("--dist", dist_name);
  bench->add_option("--workers", workers, std::string("Parallel cells (default: $") + kWorkersEnv + " or 1)");

  // report
  auto* report = app.add_subcommand("report", "Summarize a results CSV");
  std::string csv_path;
  report->add_option("--in", csv_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ColorDistribution dist = ColorDistribution::parse(dist_name);
      if (slope >= 0.0) dist.slope = slope;
      if (auto w = generation_warning(colors, lanes)) std::cerr << "warning: " << *w << '\n';
      if (count == 1) {
        emit(g, io::instance_to_json(generate_instance(colors, seq_len, lanes, width, dist, g.seed, fill)));
      } else {
        if (g.out.empty()) throw Error("--count > 1 needs --out DIR");
        fs::create_directories(g.out);
        for (int k = 0; k < count; ++k) {
          const Instance inst = generate_instance(colors, seq_len, lanes, width, dist, g.seed + k, fill);
          io::write_file((fs::path(g.out) / (instance_id(inst) + ".json")).string(), io::instance_to_json(inst));
        }
      }
      return 0;
    }

    if (solve->parsed()) {
      const Instance inst = io::instance_from_json(io::read_file(instance_path));
      Solution sol;
      std::string extra;
      if (method == "exact" || method == "exact-str") {
        SearchLimits limits;
        limits.max_seconds = max_seconds > 0 ? max_seconds : g.cutoff_seconds;
        const ExactResult r =
            method == "exact" ? solve_exact(inst, limits) : solve_exact_store_then_retrieve(inst, limits);
        sol = r.solution;
        extra = r.proven_optimal ? " (proven optimal)" : " (limit hit, best found)";
      } else if (method == "greedy") {
        sol = greedy_solve(inst);
      } else if (method == "greedy-fill") {
        if (grid_step > 0) {
          const auto r = greedy_fill_rate_grid(inst, grid_step);
          sol = r.solution;
          extra = " best bounds " + r.bounds.to_string();
        } else {
          const FillBounds b = FillBounds::from_double(fu, fl);
          b.validate();
          sol = greedy_fill_rate_solve(inst, b);
        }
      } else if (method == "msa") {
        sol = msa_solve(inst);
      } else if (method == "sa") {
        AnnealConfig cfg;
        cfg.t0 = t0;
        cfg.beta = beta;
        cfg.time_scale = time_scale;
        cfg.cutoff_seconds = g.cutoff_seconds;
        if (iterations > 0) cfg.max_iterations = iterations;
        cfg.seed = g.seed;
        sol = simulated_annealing(inst, cfg).solution;
      } else if (method == "policy-det" || method == "policy-sample") {
        if (policy_path.empty()) throw Error("--policy FILE is required");
        const PolicyParams policy = io::policy_from_json(io::read_file(policy_path));
        if (method == "policy-det") {
          sol = apply_deterministic(policy, inst);
        } else {
          SamplingBudget budget;
          if (samples > 0) budget.samples = samples;
          budget.seconds = g.cutoff_seconds;
          sol = apply_sampling(policy, inst, budget, g.seed);
        }
      } else if (method == "random") {
        std::mt19937_64 rng(g.seed);
        sol = random_policy_solve(inst, parse_mask_variant(mask_name), rng);
      } else {
        throw Error("unknown method '" + method + "'");
      }
      std::cerr << summary_line(sol) << extra << '\n';
      emit(g, io::solution_to_json(sol, instance_id(inst)));
      return 0;
    }

    if (tr->parsed()) {
      task.distribution = ColorDistribution::parse(dist_name);
      ppo.mask = parse_mask_variant(train_mask);
      ppo.total_timesteps = steps;
      ppo.seed = g.seed;
      ppo.architecture.hidden.clear();
      std::stringstream hs(hidden);
      std::string h;
      while (std::getline(hs, h, ',')) ppo.architecture.hidden.push_back(std::stoi(h));
      TrainCallback checkpoint = [&](const PolicyParams& p, const CurvePoint& c) {
        std::cerr << "steps " << c.timesteps << "  mean reward " << c.mean_episode_reward << "  mean changes "
                  << c.mean_color_changes << "  invalid " << c.invalid_rewards << '\n';
        if (!g.out.empty()) io::write_file(g.out, io::policy_to_json(p));
      };
      const TrainResult result = train(ppo, task, checkpoint);
      if (!curve_path.empty()) io::write_file(curve_path, io::curve_to_csv(result.curve));
      emit(g, io::policy_to_json(result.policy));
      std::cerr << "trained " << result.timesteps << " steps, " << result.invalid_rewards << " invalid reward(s)\n";
      return 0;
    }

    if (ilp->parsed()) {
      const Instance inst = io::instance_from_json(io::read_file(instance_path));
      IlpOptions opts;
      opts.aligned = aligned;
      const IlpModel model = build_ilp(inst, opts);
      emit(g, model.to_lp());
      std::cerr << model.variables.size() << " variables, " << model.rows.size() << " constraints\n";
      return 0;
    }

    if (bench->parsed()) {
      SuiteConfig suite;
      suite.cutoff_seconds = g.cutoff_seconds;
      suite.seed = g.seed;
      suite.workers = workers;
      for (const auto& path : instance_files) {
        if (fs::is_directory(path)) {
          std::vector<fs::path> files;
          for (const auto& e : fs::directory_iterator(path)) {
            if (e.path().extension() == ".json") files.push_back(e.path());
          }
          std::sort(files.begin(), files.end());
          for (const auto& f : files) suite.instances.push_back(io::instance_from_json(io::read_file(f.string())));
        } else {
          suite.instances.push_back(io::instance_from_json(io::read_file(path)));
        }
      }
      if (instance_files.empty()) {
        const ColorDistribution dist = ColorDistribution::parse(dist_name);
        std::stringstream cs(color_list);
        std::string c;
        while (std::getline(cs, c, ',')) {
          for (const auto& [l, w] : parse_buffers(buffers)) {
            for (int k = 0; k < per_cell; ++k) {
              suite.instances.push_back(generate_instance(std::stoi(c), seq_len, l, w, dist, g.seed + k));
            }
          }
        }
      }
      std::map<std::string, std::shared_ptr<const PolicyParams>> policies;
      for (const auto& m : methods) {
        MethodSpec spec = MethodSpec::parse(m);
        if (spec.name == "policy-det" || spec.name == "policy-sample") {
          if (spec.policy_path.empty()) throw Error(spec.name + " needs policy=FILE");
          auto& p = policies[spec.policy_path];
          if (!p) p = std::make_shared<const PolicyParams>(io::policy_from_json(io::read_file(spec.policy_path)));
          spec.policy = p;
        }
        suite.methods.push_back(std::move(spec));
      }
      const auto records = run_benchmark(suite);
      std::ostringstream csv;
      write_csv(csv, records);
      emit(g, csv.str());
      if (!g.out.empty()) {
        nlohmann::json side = nlohmann::json::array();
        for (const auto& r : records) {
          nlohmann::json acts = nlohmann::json::array();
          for (const auto& a : r.actions) acts.push_back({{"kind", a.is_store() ? "store" : "retrieve"}, {"lane", a.lane + 1}});
          side.push_back({{"instance_id", r.instance_id},
                          {"method", r.method},
                          {"params", r.params},
                          {"color_changes", r.color_changes},
                          {"error", r.error},
                          {"actions", std::move(acts)}});
        }
        io::write_file(g.out + ".solutions.json",
                       nlohmann::json{{"schema", "paintshop.solutions/1"}, {"records", side}}.dump() + "\n");
      }
      std::size_t failed = 0;
      for (const auto& r : records) failed += r.ok() ? 0 : 1;
      std::cerr << format_summary(summarize(records));
      std::cerr << "mean max exclusive run\n";
      for (const auto& [label, v] : mean_exclusive_runs(records)) std::cerr << "    " << label << "  " << v << '\n';
      if (failed > 0) std::cerr << failed << " failed cell(s)\n";
      return 0;
    }

    if (report->parsed()) {
      std::ifstream in(csv_path);
      if (!in) throw Error("cannot read " + csv_path);
      const auto records = read_csv(in);
      std::ostringstream out;
      out << format_summary(summarize(records));
      out << "mean max exclusive run\n";
      for (const auto& [label, v] : mean_exclusive_runs(records)) out << "    " << label << "  " << v << '\n';
      emit(g, out.str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
