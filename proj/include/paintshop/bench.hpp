#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paintshop/anneal.hpp"
#include "paintshop/core.hpp"
#include "paintshop/generate.hpp"
#include "paintshop/heuristics.hpp"
#include "paintshop/learn.hpp"

namespace paintshop {

class BestIsZero : public Error {
 public:
  BestIsZero() : Error("relative deviation is undefined when the best count is zero") {}
};

// (changes - best) / best * 100
double rpd(int changes, int best);
// Mean of per-instance RPDs; throws on an empty set.
double arpd(std::span<const double> rpds);
double mean_color_changes(std::span<const int> counts);

// Longest store-only or retrieve-only run, ignoring the first and last runs;
// 0 with fewer than three runs.
int max_exclusive_run(const std::vector<Action>& actions);

struct RunRecord {
  std::string instance_id;
  std::string method;
  std::string params;
  std::uint64_t seed = 0;
  int color_changes = -1;  // -1 for a failed cell
  double runtime_ms = 0.0;
  int max_exclusive_run = 0;
  std::optional<bool> proven_optimal;  // exact methods only
  std::string error;                   // non-empty for a failed cell
  std::vector<Action> actions;         // not part of the CSV

  [[nodiscard]] bool ok() const { return error.empty(); }
};

struct MethodSpec {
  std::string name = "greedy";
  FillBounds bounds;                // greedy-fill
  double grid_step = 0.05;          // greedy-fill-grid
  AnnealConfig anneal;              // sa; cutoff and seed come from the suite
  std::size_t samples = 100;        // policy-sample
  MaskVariant random_mask = MaskVariant::All;  // random
  std::shared_ptr<const PolicyParams> policy;  // policy-det, policy-sample
  std::string policy_path;          // for the params column

  [[nodiscard]] std::string params() const;
  // "sa:t0=10,beta=0.999,iterations=20000", "greedy-fill:fu=0.6,fl=0.5", ...
  static MethodSpec parse(std::string_view text);
};

// Method names accepted by parse/run_method.
const std::vector<std::string>& method_names();

// Runs one method on one instance. Throws on failure.
RunRecord run_method(const Instance& instance, const MethodSpec& method, double cutoff_seconds, std::uint64_t seed);

struct SuiteConfig {
  std::vector<Instance> instances;
  std::vector<MethodSpec> methods;
  double cutoff_seconds = 300.0;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0: PAINTSHOP_WORKERS, else 1
};

inline constexpr const char* kWorkersEnv = "PAINTSHOP_WORKERS";
std::size_t workers_from_env();

// Seed of one (instance, method) cell, independent of scheduling.
std::uint64_t cell_seed(std::uint64_t suite_seed, std::string_view instance_id, std::string_view method);

// Cells run in parallel; the output is ordered by instance, then method.
// Failed cells are recorded, not thrown.
std::vector<RunRecord> run_benchmark(const SuiteConfig& config);

inline constexpr const char* kCsvHeader =
    "instance_id,method,params,seed,color_changes,runtime_ms,max_exclusive_run,proven_optimal";

void write_csv(std::ostream& out, std::span<const RunRecord> records);
std::vector<RunRecord> read_csv(std::istream& in);

struct InstanceKey {
  int num_colors = 0;
  int lanes = 0;
  int width = 0;
  int seq_len = 0;
  std::string distribution;
};
// Parses ids of the form produced by instance_id().
std::optional<InstanceKey> parse_instance_id(std::string_view id);

// Method label used in tables: "method" or "method[params]".
std::string method_label(const RunRecord& r);

struct ArpdSummary {
  // group ("C5 2x2") -> method label -> ARPD
  std::map<std::string, std::map<std::string, double>> arpd;
  // method label -> mean color changes over all successful records
  std::map<std::string, double> mean_changes;
  std::vector<std::string> monochrome_instances;  // best == 0, excluded
};

// Best per instance is taken over every successful record of that instance.
ArpdSummary summarize(std::span<const RunRecord> records);
std::string format_summary(const ArpdSummary& summary);

// Mean max_exclusive_run per method label.
std::map<std::string, double> mean_exclusive_runs(std::span<const RunRecord> records);

}  // namespace paintshop
