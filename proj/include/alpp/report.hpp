#pragma once

#include <string>
#include <vector>

#include "alpp/bdd.hpp"
#include "alpp/explain.hpp"

namespace alpp {

struct ExplanationReport {
  Explanation expl;
  double probability = 0.0;  // product form
};

struct AnswerReport {
  Answer answer;
  double probability = 0.0;  // weighted count over this answer's explanations
  std::vector<ExplanationReport> explanations;
};

struct QueryReport {
  std::string goal_text;
  double total_probability = 0.0;
  std::vector<AnswerReport> answers;  // most probable first
  std::size_t worlds_found = 0;
  DeriveStatus status = DeriveStatus::Complete;
  long long nodes_expanded = 0;
  double wall_seconds = 0.0;
};

QueryReport build_report(const Program& program, const Goal& goal, const std::string& goal_text,
                         const DeriveResult& result);

std::string status_string(DeriveStatus s);

// Probabilities printed with round-half-even at `precision` decimals.
std::string format_probability(double p, int precision);

std::string report_to_text(const QueryReport& report, int precision, bool list_explanations);
std::string report_to_json(const QueryReport& report, int precision);

}  // namespace alpp
