#include "paintshop/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "paintshop/exact.hpp"
#include "paintshop/msa.hpp"

namespace paintshop {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::map<std::string, std::string> parse_kv(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find_first_of(",;", pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw Error("method parameter '" + std::string(item) + "' lacks '='");
    kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    pos = end + 1;
  }
  return kv;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw Error("not a number: " + s);
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string group_of(const std::string& id) {
  const auto key = parse_instance_id(id);
  if (!key) return "other";
  return "C" + std::to_string(key->num_colors) + " " + std::to_string(key->lanes) + "x" + std::to_string(key->width);
}

}  // namespace

double rpd(int changes, int best) {
  if (best == 0) throw BestIsZero();
  return static_cast<double>(changes - best) / static_cast<double>(best) * 100.0;
}

double arpd(std::span<const double> rpds) {
  if (rpds.empty()) throw Error("ARPD of an empty instance set");
  return std::accumulate(rpds.begin(), rpds.end(), 0.0) / static_cast<double>(rpds.size());
}

double mean_color_changes(std::span<const int> counts) {
  if (counts.empty()) throw Error("mean of an empty record set");
  return std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
}

int max_exclusive_run(const std::vector<Action>& actions) {
  const auto segs = segments(actions);
  if (segs.size() < 3) return 0;
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < segs.size(); ++i) best = std::max(best, segs[i].length);
  return static_cast<int>(best);
}

std::string MethodSpec::params() const {
  if (name == "greedy-fill") return bounds.to_string();
  if (name == "greedy-fill-grid") return "step=" + fmt(grid_step);
  if (name == "sa") {
    std::string s = "t0=" + fmt(anneal.t0) + ";beta=" + fmt(anneal.beta);
    if (anneal.time_scale != 1.0) s += ";time_scale=" + fmt(anneal.time_scale);
    if (anneal.max_iterations) s += ";iterations=" + std::to_string(*anneal.max_iterations);
    return s;
  }
  if (name == "policy-det") return "policy=" + policy_path;
  if (name == "policy-sample") return "policy=" + policy_path + ";samples=" + std::to_string(samples);
  if (name == "random") return "mask=" + std::string(to_string(random_mask));
  return "";
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"exact",    "exact-str", "greedy",     "greedy-fill", "greedy-fill-grid",
                                              "msa",      "sa",        "policy-det", "policy-sample", "random"};
  return names;
}

MethodSpec MethodSpec::parse(std::string_view text) {
  MethodSpec m;
  const std::size_t colon = text.find(':');
  m.name = std::string(text.substr(0, colon));
  const auto& names = method_names();
  if (std::find(names.begin(), names.end(), m.name) == names.end()) throw Error("unknown method '" + m.name + "'");
  if (colon == std::string_view::npos) return m;
  double fu = 1.0;
  double fl = 0.0;
  for (const auto& [k, v] : parse_kv(text.substr(colon + 1))) {
    if (k == "fu") {
      fu = to_double(v);
    } else if (k == "fl") {
      fl = to_double(v);
    } else if (k == "step") {
      m.grid_step = to_double(v);
    } else if (k == "t0") {
      m.anneal.t0 = to_double(v);
    } else if (k == "beta") {
      m.anneal.beta = to_double(v);
    } else if (k == "time_scale") {
      m.anneal.time_scale = to_double(v);
    } else if (k == "iterations") {
      m.anneal.max_iterations = std::stoull(v);
    } else if (k == "samples") {
      m.samples = std::stoull(v);
    } else if (k == "mask") {
      m.random_mask = parse_mask_variant(v);
    } else if (k == "policy") {
      m.policy_path = v;
    } else {
      throw Error("unknown parameter '" + k + "' for method " + m.name);
    }
  }
  m.bounds = FillBounds::from_double(fu, fl);
  m.bounds.validate();
  return m;
}

RunRecord run_method(const Instance& instance, const MethodSpec& method, double cutoff_seconds, std::uint64_t seed) {
  RunRecord r;
  r.instance_id = instance_id(instance);
  r.method = method.name;
  r.params = method.params();
  r.seed = seed;
  Stopwatch clock;
  Solution sol;
  const std::string& m = method.name;
  if (m == "exact" || m == "exact-str") {
    SearchLimits limits;
    limits.max_seconds = cutoff_seconds;
    const ExactResult res =
        m == "exact" ? solve_exact(instance, limits) : solve_exact_store_then_retrieve(instance, limits);
    sol = res.solution;
    r.proven_optimal = res.proven_optimal;
  } else if (m == "greedy") {
    sol = greedy_solve(instance);
  } else if (m == "greedy-fill") {
    sol = greedy_fill_rate_solve(instance, method.bounds);
  } else if (m == "greedy-fill-grid") {
    sol = greedy_fill_rate_grid(instance, method.grid_step).solution;
  } else if (m == "msa") {
    sol = msa_solve(instance);
  } else if (m == "sa") {
    AnnealConfig cfg = method.anneal;
    cfg.cutoff_seconds = cutoff_seconds;
    cfg.seed = seed;
    sol = simulated_annealing(instance, cfg).solution;
  } else if (m == "policy-det" || m == "policy-sample") {
    if (!method.policy) throw Error(m + " needs a policy");
    if (m == "policy-det") {
      sol = apply_deterministic(*method.policy, instance);
    } else {
      sol = apply_sampling(*method.policy, instance, {method.samples, cutoff_seconds}, seed);
    }
  } else if (m == "random") {
    std::mt19937_64 rng(seed);
    sol = random_policy_solve(instance, method.random_mask, rng);
  } else {
    throw Error("unknown method '" + m + "'");
  }
  r.runtime_ms = clock.seconds() * 1000.0;
  // recount from the action list, never trust the solver's own number
  const Solution checked = replay(instance, sol.actions);
  r.color_changes = checked.color_changes;
  r.max_exclusive_run = max_exclusive_run(checked.actions);
  r.actions = checked.actions;
  return r;
}

std::size_t workers_from_env() {
  const char* env = std::getenv(kWorkersEnv);
  if (env == nullptr || *env == '\0') return 1;
  try {
    const long v = std::stol(env);
    return v > 0 ? static_cast<std::size_t>(v) : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

std::uint64_t cell_seed(std::uint64_t suite_seed, std::string_view instance_id, std::string_view method) {
  // FNV-1a over the id and method, mixed with the suite seed (splitmix64)
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  feed(instance_id);
  feed(method);
  std::uint64_t z = h ^ (suite_seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<RunRecord> run_benchmark(const SuiteConfig& config) {
  const std::size_t cells = config.instances.size() * config.methods.size();
  std::vector<RunRecord> records(cells);
  std::atomic<std::size_t> next{0};
  std::mutex sink;
  auto worker = [&]() {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= cells) return;
      const Instance& inst = config.instances[cell / config.methods.size()];
      const MethodSpec& method = config.methods[cell % config.methods.size()];
      const std::string id = instance_id(inst);
      const std::uint64_t seed = cell_seed(config.seed, id, method.name + method.params());
      RunRecord r;
      try {
        r = run_method(inst, method, config.cutoff_seconds, seed);
      } catch (const std::exception& e) {
        r.instance_id = id;
        r.method = method.name;
        r.params = method.params();
        r.seed = seed;
        r.error = e.what();
      }
      std::lock_guard<std::mutex> lock(sink);
      records[cell] = std::move(r);
    }
  };
  std::size_t workers = config.workers > 0 ? config.workers : workers_from_env();
  workers = std::max<std::size_t>(1, std::min(workers, cells));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

void write_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    char runtime[32];
    std::snprintf(runtime, sizeof runtime, "%.3f", r.runtime_ms);
    out << csv_field(r.instance_id) << ',' << csv_field(r.method) << ',' << csv_field(r.params) << ',' << r.seed << ','
        << r.color_changes << ',' << runtime << ',' << r.max_exclusive_run << ','
        << (r.proven_optimal ? (*r.proven_optimal ? "true" : "false") : "") << '\n';
  }
}

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error("unexpected CSV header: " + line);
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw Error("CSV row with " + std::to_string(f.size()) + " fields: " + line);
    RunRecord r;
    r.instance_id = f[0];
    r.method = f[1];
    r.params = f[2];
    r.seed = std::stoull(f[3]);
    r.color_changes = std::stoi(f[4]);
    r.runtime_ms = std::stod(f[5]);
    r.max_exclusive_run = std::stoi(f[6]);
    if (f[7] == "true") r.proven_optimal = true;
    if (f[7] == "false") r.proven_optimal = false;
    if (r.color_changes < 0) r.error = "failed";
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<InstanceKey> parse_instance_id(std::string_view id) {
  InstanceKey k;
  char dist[64] = {0};
  unsigned long long seed = 0;
  const std::string s(id);
  if (std::sscanf(s.c_str(), "C%d-L%dxW%d-N%d-%63[^-]-s%llu", &k.num_colors, &k.lanes, &k.width, &k.seq_len, dist,
                  &seed) != 6) {
    return std::nullopt;
  }
  k.distribution = dist;
  return k;
}

std::string method_label(const RunRecord& r) { return r.params.empty() ? r.method : r.method + "[" + r.params + "]"; }

ArpdSummary summarize(std::span<const RunRecord> records) {
  ArpdSummary summary;
  std::map<std::string, int> best;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    auto [it, inserted] = best.emplace(r.instance_id, r.color_changes);
    if (!inserted) it->second = std::min(it->second, r.color_changes);
  }
  for (const auto& [id, b] : best) {
    if (b == 0) summary.monochrome_instances.push_back(id);
  }
  std::map<std::string, std::map<std::string, std::vector<double>>> rpds;
  std::map<std::string, std::vector<int>> counts;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    const std::string label = method_label(r);
    counts[label].push_back(r.color_changes);
    const int b = best.at(r.instance_id);
    if (b == 0) continue;
    rpds[group_of(r.instance_id)][label].push_back(rpd(r.color_changes, b));
  }
  for (const auto& [group, by_method] : rpds) {
    for (const auto& [label, values] : by_method) summary.arpd[group][label] = arpd(values);
  }
  for (const auto& [label, c] : counts) summary.mean_changes[label] = mean_color_changes(c);
  return summary;
}

std::string format_summary(const ArpdSummary& summary) {
  std::ostringstream out;
  std::vector<std::string> labels;
  for (const auto& [label, mean] : summary.mean_changes) labels.push_back(label);
  std::size_t width = 12;
  for (const auto& l : labels) width = std::max(width, l.size());
  char buf[64];
  out << "ARPD (%) by group\n";
  for (const auto& [group, by_method] : summary.arpd) {
    out << "  " << group << '\n';
    for (const auto& label : labels) {
      const auto it = by_method.find(label);
      out << "    " << label << std::string(width - label.size() + 2, ' ');
      if (it == by_method.end()) {
        out << "-\n";
      } else {
        std::snprintf(buf, sizeof buf, "%.2f", it->second);
        out << buf << '\n';
      }
    }
  }
  out << "mean color changes\n";
  for (const auto& label : labels) {
    std::snprintf(buf, sizeof buf, "%.3f", summary.mean_changes.at(label));
    out << "    " << label << std::string(width - label.size() + 2, ' ') << buf << '\n';
  }
  if (!summary.monochrome_instances.empty()) {
    out << "excluded from ARPD (best count 0): " << summary.monochrome_instances.size() << " instance(s)\n";
  }
  return out.str();
}

std::map<std::string, double> mean_exclusive_runs(std::span<const RunRecord> records) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    auto& a = acc[method_label(r)];
    a.first += r.max_exclusive_run;
    ++a.second;
  }
  std::map<std::string, double> out;
  for (const auto& [label, a] : acc) out[label] = a.first / static_cast<double>(a.second);
  return out;
}

}  // namespace paintshop
