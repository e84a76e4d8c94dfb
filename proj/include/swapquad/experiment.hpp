#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "swapquad/solver.hpp"

namespace swapquad {

// Declarative key-value config with [section] headers; keys are addressed as
// "section.key".
struct ExperimentConfig {
  std::map<std::string, std::string> values;

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_num(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_flag(const std::string& key, bool fallback) const;
  void set(const std::string& key, const std::string& value);
};

struct ResultRow {
  std::string experiment;
  int n = 0;
  Complex target{};
  Complex computed{};
  Complex reference{};
  double rel_error = 0.0;
  std::string strategy;
  std::string flags;
  double wall_ms = 0.0;
};

struct ResultTable {
  std::string experiment_id;
  std::vector<ResultRow> rows;
};

double relative_error(Complex computed, Complex reference);

// csv/json emission: deterministic column order, 17 significant digits.
void emit_csv(const ResultTable& table, std::ostream& os);
void emit_json(const ResultTable& table, std::ostream& os);
void emit(const ResultTable& table, const std::string& path,
          const std::string& format);
ResultTable parse_result_csv(std::istream& is);

// Experiment drivers (one per CLI subcommand).
ResultTable run_kernel_convergence(const ExperimentConfig& cfg);
ResultTable run_field_map(const ExperimentConfig& cfg);
ResultTable run_slice(const ExperimentConfig& cfg);
ResultTable run_target_convergence(const ExperimentConfig& cfg);
ResultTable run_solve(const ExperimentConfig& cfg);
ResultTable run_eval(const ExperimentConfig& cfg);

// Shared builders (also used by the acceptance suite).
PiecewiseBoundary boundary_from_config(const ExperimentConfig& cfg);
BIEProblem problem_from_config(const ExperimentConfig& cfg,
                               const PiecewiseBoundary& boundary);
std::function<Complex(Complex)> exact_solution_from_config(const ExperimentConfig& cfg);
FieldOptions field_options_from_config(const ExperimentConfig& cfg);

// The two nearest preimages of x (by |Im|), for predicted-rate columns.
std::vector<Complex> nearest_preimages(const PiecewiseBoundary& boundary, Complex x,
                                       std::size_t count);

}  // namespace swapquad
