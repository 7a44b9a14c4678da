#include "alpp/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace alpp {

std::string status_string(DeriveStatus s) {
  switch (s) {
    case DeriveStatus::Complete: return "ok";
    case DeriveStatus::DepthLimit: return "depth_limit";
    case DeriveStatus::NodeLimit: return "node_limit";
    case DeriveStatus::LeafLimit: return "leaf_limit";
  }
  return "unknown";
}

std::string format_probability(double p, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, p);
  return buf;
}

QueryReport build_report(const Program& program, const Goal& goal, const std::string& goal_text,
                         const DeriveResult& result) {
  QueryReport report;
  report.goal_text = goal_text;
  report.status = result.status;
  report.nodes_expanded = result.nodes_expanded;
  report.worlds_found = result.leaves.size();

  Collected collected = collect(result.leaves, goal);
  std::map<int, double> probs = program.pic_probs();

  report.total_probability = goal_probability(collected.explanations, probs);
  for (auto& ans : collected.answers) {
    AnswerReport ar;
    ar.probability = goal_probability(ans.explanations, probs);
    for (const auto& e : ans.explanations) ar.explanations.push_back({e, choice_prob(e, probs)});
    std::sort(ar.explanations.begin(), ar.explanations.end(),
              [](const ExplanationReport& a, const ExplanationReport& b) {
                if (a.probability != b.probability) return a.probability > b.probability;
                return a.expl.key() < b.expl.key();
              });
    ar.answer = std::move(ans);
    report.answers.push_back(std::move(ar));
  }
  std::sort(report.answers.begin(), report.answers.end(),
            [](const AnswerReport& a, const AnswerReport& b) {
              if (a.probability != b.probability) return a.probability > b.probability;
              return a.answer.key < b.answer.key;
            });
  return report;
}

namespace {

std::string explanation_to_string(const Explanation& e) {
  std::string s = "{";
  for (std::size_t i = 0; i < e.choices.size(); ++i) {
    const auto& c = e.choices[i];
    if (i) s += ", ";
    s += "(ic" + std::to_string(c.ic_id) + ", {";
    for (std::size_t j = 0; j < c.theta.size(); ++j) {
      if (j) s += ", ";
      s += c.theta[j].first + "/" + c.theta[j].second;
    }
    s += "}, " + std::to_string(c.k) + ")";
  }
  return s + "}";
}

}  // namespace

std::string report_to_text(const QueryReport& report, int precision, bool list_explanations) {
  std::ostringstream os;
  os << "goal: " << report.goal_text << "\n";
  os << "status: " << status_string(report.status) << "\n";
  os << "worlds found: " << report.worlds_found << "\n";
  os << "total probability: " << format_probability(report.total_probability, precision) << "\n";
  int idx = 1;
  for (const auto& ar : report.answers) {
    os << "\nanswer " << idx++ << ": P = " << format_probability(ar.probability, precision)
       << "\n";
    if (!ar.answer.theta.empty()) {
      os << "  theta:";
      bool first = true;
      for (const auto& [v, t] : ar.answer.theta) {
        os << (first ? " " : ", ") << v << " = " << t;
        first = false;
      }
      os << "\n";
    }
    os << "  delta: ";
    for (std::size_t i = 0; i < ar.answer.delta.size(); ++i)
      os << (i ? ", " : "") << ar.answer.delta[i];
    os << "\n";
    if (!ar.answer.store.empty()) {
      os << "  constraints: ";
      for (std::size_t i = 0; i < ar.answer.store.size(); ++i)
        os << (i ? ", " : "") << ar.answer.store[i];
      os << "\n";
    }
    os << "  explanations: " << ar.explanations.size() << "\n";
    if (list_explanations) {
      for (const auto& er : ar.explanations)
        os << "    P = " << format_probability(er.probability, precision) << "  "
           << explanation_to_string(er.expl) << "\n";
    }
  }
  if (report.wall_seconds > 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", report.wall_seconds);
    os << "\ntime: " << buf << " s\n";
  }
  return os.str();
}

std::string report_to_json(const QueryReport& report, int precision) {
  using nlohmann::json;
  auto num = [&](double p) { return json(std::stod(format_probability(p, precision))); };

  json answers = json::array();
  for (const auto& ar : report.answers) {
    json expls = json::array();
    for (const auto& er : ar.explanations) {
      json choices = json::array();
      for (const auto& c : er.expl.choices) {
        json theta = json::object();
        for (const auto& [v, t] : c.theta) theta[v] = t;
        choices.push_back({{"ic", c.ic_id}, {"theta", theta}, {"k", c.k}});
      }
      expls.push_back({{"choices", choices}, {"probability", num(er.probability)}});
    }
    json theta = json::object();
    for (const auto& [v, t] : ar.answer.theta) theta[v] = t;
    json ans = {{"delta", ar.answer.delta},
                {"theta", theta},
                {"explanations", expls},
                {"probability", num(ar.probability)}};
    if (!ar.answer.store.empty()) ans["constraints"] = ar.answer.store;
    answers.push_back(std::move(ans));
  }
  json j = {{"goal", report.goal_text},
            {"total_probability", num(report.total_probability)},
            {"answers", answers},
            {"worlds_found", report.worlds_found},
            {"status", status_string(report.status)}};
  return j.dump(2) + "\n";
}

}  // namespace alpp
