#include "paintshop/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace paintshop::io {

namespace {

using nlohmann::json;

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

void check_schema(const json& j, const char* expected) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  if (j.contains("schema") && j.at("schema") != expected) {
    throw FormatError("schema '" + j.at("schema").get<std::string>() + "' where '" + expected + "' was expected");
  }
}

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw FormatError(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

std::string instance_to_json(const Instance& instance) {
  json j;
  j["schema"] = kInstanceSchema;
  j["num_colors"] = instance.num_colors;
  j["lanes"] = instance.lanes;
  j["width"] = instance.width;
  j["upstream"] = instance.upstream;
  if (!instance.initial_buffer.empty()) j["initial_buffer"] = instance.initial_buffer;
  j["meta"] = {{"distribution", instance.meta.distribution}, {"seed", instance.meta.seed}};
  return j.dump(2) + "\n";
}

Instance instance_from_json(std::string_view text) {
  const json j = parse(text);
  check_schema(j, kInstanceSchema);
  Instance inst;
  inst.num_colors = field<int>(j, "num_colors");
  inst.lanes = field<int>(j, "lanes");
  inst.width = field<int>(j, "width");
  inst.upstream = field<std::vector<Color>>(j, "upstream");
  if (j.contains("initial_buffer")) inst.initial_buffer = field<std::vector<std::vector<Color>>>(j, "initial_buffer");
  if (j.contains("meta")) {
    const json& m = j.at("meta");
    if (m.contains("distribution")) inst.meta.distribution = field<std::string>(m, "distribution");
    if (m.contains("seed")) inst.meta.seed = field<std::uint64_t>(m, "seed");
  }
  inst.validate();
  return inst;
}

std::string solution_to_json(const Solution& solution, const std::string& instance_id) {
  json j;
  j["schema"] = kSolutionSchema;
  if (!instance_id.empty()) j["instance_id"] = instance_id;
  j["producer"] = solution.producer;
  json actions = json::array();
  for (const Action& a : solution.actions) {
    actions.push_back({{"kind", a.is_store() ? "store" : "retrieve"}, {"lane", a.lane + 1}});
  }
  j["actions"] = std::move(actions);
  j["downstream"] = solution.downstream;
  j["color_changes"] = solution.color_changes;
  j["runtime_seconds"] = solution.runtime_seconds;
  return j.dump(2) + "\n";
}

StoredSolution solution_from_json(std::string_view text) {
  const json j = parse(text);
  check_schema(j, kSolutionSchema);
  StoredSolution s;
  for (const json& a : field<json>(j, "actions")) {
    const auto kind = field<std::string>(a, "kind");
    const int lane = field<int>(a, "lane");
    if (lane < 1) throw FormatError("lanes are numbered from 1");
    if (kind == "store") {
      s.actions.push_back(Action::store(lane - 1));
    } else if (kind == "retrieve") {
      s.actions.push_back(Action::retrieve(lane - 1));
    } else {
      throw FormatError("action kind must be store or retrieve, got " + kind);
    }
  }
  s.color_changes = field<int>(j, "color_changes");
  if (j.contains("producer")) s.producer = field<std::string>(j, "producer");
  if (j.contains("instance_id")) s.instance_id = field<std::string>(j, "instance_id");
  return s;
}

std::string policy_to_json(const PolicyParams& policy) {
  json j;
  j["schema"] = kPolicySchema;
  j["lanes"] = policy.lanes;
  j["width"] = policy.width;
  j["lookahead"] = policy.lookahead;
  j["num_colors"] = policy.num_colors;
  j["architecture"] = {{"hidden", policy.architecture.hidden}, {"activation", policy.architecture.activation}};
  j["mask"] = std::string(to_string(policy.mask));
  j["policy_weights"] = policy.policy_weights;
  j["value_weights"] = policy.value_weights;
  return j.dump() + "\n";
}

PolicyParams policy_from_json(std::string_view text) {
  const json j = parse(text);
  check_schema(j, kPolicySchema);
  PolicyParams p;
  p.lanes = field<int>(j, "lanes");
  p.width = field<int>(j, "width");
  p.lookahead = field<int>(j, "lookahead");
  p.num_colors = field<int>(j, "num_colors");
  const json& arch = field<json>(j, "architecture");
  p.architecture.hidden = field<std::vector<int>>(arch, "hidden");
  p.architecture.activation = field<std::string>(arch, "activation");
  p.mask = parse_mask_variant(field<std::string>(j, "mask"));
  p.policy_weights = field<std::vector<double>>(j, "policy_weights");
  p.value_weights = field<std::vector<double>>(j, "value_weights");
  try {
    p.validate();
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
  return p;
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "timesteps,episodes,mean_episode_reward,mean_color_changes,invalid_rewards\n";
  char buf[128];
  for (const auto& c : curve) {
    std::snprintf(buf, sizeof buf, "%llu,%zu,%.6f,%.6f,%zu\n", static_cast<unsigned long long>(c.timesteps),
                  c.episodes, c.mean_episode_reward, c.mean_color_changes, c.invalid_rewards);
    out << buf;
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace paintshop::io
