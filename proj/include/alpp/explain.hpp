#pragma once

#include <map>
#include <string>
#include <vector>

#include "alpp/engine.hpp"
#include "alpp/program.hpp"

namespace alpp {

// Frozen atomic choice: terms resolved and rendered, with the canonical
// instance key that identifies the constraint instance up to renaming.
struct FrozenChoice {
  int ic_id = 0;
  std::vector<std::pair<std::string, std::string>> theta;  // original var -> term text
  std::string instance_key;                                // "ic<i>{<canonical theta>}"
  int k = 0;
};

struct Explanation {
  std::vector<FrozenChoice> choices;  // sorted by (instance_key, k)
  std::string key() const;
  bool consistent() const;
};

// Two explanations are incompatible when they disagree on some shared
// constraint instance; only then may their probabilities be summed directly.
bool incompatible(const Explanation& a, const Explanation& b);
bool pairwise_incompatible(const std::vector<Explanation>& set);

// Product of p_i over enforced choices and (1 - p_i) over relaxed ones.
// Throws std::out_of_range for an unknown constraint id.
double choice_prob(const Explanation& e, const std::map<int, double>& probs);

struct Answer {
  std::vector<std::string> delta;  // canonical, sorted
  std::map<std::string, std::string> theta;  // goal variable -> term (bound ones only)
  std::vector<std::string> store;  // residual disequalities
  std::vector<Explanation> explanations;  // deduplicated, canonical order
  std::string key;
};

struct Collected {
  std::vector<Answer> answers;          // grouped by (delta, theta) up to renaming
  std::vector<Explanation> explanations;  // deduplicated union across answers
  std::size_t leaf_count = 0;           // raw successful derivations ("worlds found")
};

Explanation freeze_explanation(const SuccessLeaf& leaf);

// Groups leaves into answers and deduplicates explanations.
Collected collect(const std::vector<SuccessLeaf>& leaves, const Goal& goal);

}  // namespace alpp
