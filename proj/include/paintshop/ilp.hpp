#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "paintshop/core.hpp"

namespace paintshop {

class UnsupportedInitialBuffer : public Error {
 public:
  UnsupportedInitialBuffer() : Error("the integer program starts from an empty buffer; initial fill is unsupported") {}
};

struct IlpOptions {
  // Adds indicators so that leaving "nothing painted" is not counted as a
  // change; the optimum then equals color_changes(). Off: the raw model, whose
  // optimum is one higher on every instance.
  bool aligned = false;
};

struct LinearTerm {
  std::string var;
  long long coef;
};

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LinearRow {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense;
  long long rhs;
};

struct VariableDecl {
  std::string name;
  std::string family;  // x, y, z, B, e, p, u, w
  long long lower;
  long long upper;
  bool binary;
};

struct IlpModel {
  std::vector<VariableDecl> variables;
  std::vector<LinearTerm> objective;
  std::vector<LinearRow> rows;
  std::map<std::string, std::size_t> variable_counts;    // by family
  std::map<std::string, std::size_t> constraint_counts;  // by row-name prefix

  [[nodiscard]] std::string to_lp() const;
};

IlpModel build_ilp(const Instance& instance, const IlpOptions& options = {});
std::string export_ilp(const Instance& instance, const IlpOptions& options = {});

}  // namespace paintshop
