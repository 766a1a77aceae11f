#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "paintshop/core.hpp"
#include "paintshop/learn.hpp"

namespace paintshop::io {

inline constexpr const char* kInstanceSchema = "paintshop.instance/1";
inline constexpr const char* kSolutionSchema = "paintshop.solution/1";
inline constexpr const char* kPolicySchema = "paintshop.policy/1";

class FormatError : public Error {
 public:
  using Error::Error;
};

// A missing "schema" field is accepted on read (hand-written or imported
// files); a different schema is rejected.
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(std::string_view text);

// Lanes are written 1-based.
std::string solution_to_json(const Solution& solution, const std::string& instance_id = "");

struct StoredSolution {
  std::vector<Action> actions;
  int color_changes = 0;
  std::string producer;
  std::string instance_id;
};
StoredSolution solution_from_json(std::string_view text);

std::string policy_to_json(const PolicyParams& policy);
PolicyParams policy_from_json(std::string_view text);

std::string curve_to_csv(const std::vector<CurvePoint>& curve);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace paintshop::io
