#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "alpp/explain.hpp"

namespace alpp {

// Boolean random variable: one per constraint instance appearing in the
// explanation set, true with the owning constraint's probability.
struct BoolVar {
  int index = 0;
  int ic_id = 0;
  std::string instance_key;
  std::string display;  // e.g. "ic1{P/husband,H/house1}"
  double prob = 0.0;
};

// Cubes of signed variable indices: +(i+1) for the variable, -(i+1) negated.
struct DnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> cubes;
};

// One cube per explanation: positive literal for k=1, negated for k=0.
// Variable indices follow first appearance across the canonically sorted
// explanation list. Throws std::out_of_range for an unknown constraint id.
std::pair<DnfFormula, std::vector<BoolVar>> formula_of(const std::vector<Explanation>& K,
                                                       const std::map<int, double>& probs);

class BddLimitError : public std::runtime_error {
 public:
  explicit BddLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Reduced ordered BDD with a hash-consed unique table and a memoized binary
// apply. Node ids 0 and 1 are the terminals.
class BddManager {
 public:
  using NodeId = std::int32_t;
  static constexpr NodeId kFalse = 0;
  static constexpr NodeId kTrue = 1;

  explicit BddManager(std::size_t node_budget = 1u << 24);

  NodeId mk(int var, NodeId hi, NodeId lo);
  NodeId apply_or(NodeId a, NodeId b);
  NodeId apply_and(NodeId a, NodeId b);
  NodeId cube(const std::vector<int>& literals);  // conjunction of signed literals
  NodeId compile(const DnfFormula& f);

  bool is_terminal(NodeId n) const { return n <= 1; }
  int var(NodeId n) const { return nodes_[static_cast<std::size_t>(n)].var; }
  NodeId hi(NodeId n) const { return nodes_[static_cast<std::size_t>(n)].hi; }
  NodeId lo(NodeId n) const { return nodes_[static_cast<std::size_t>(n)].lo; }
  std::size_t node_count() const { return nodes_.size() - 2; }  // internal nodes created
  std::size_t reachable_count(NodeId root) const;

  // Shannon-expansion probability with per-node memoization; skipped levels
  // marginalize implicitly.
  double prob(NodeId root, const std::vector<double>& var_probs) const;

  // DOT rendering: solid edge to the 1-child, dashed to the 0-child.
  std::string to_dot(NodeId root, const std::vector<BoolVar>& vars) const;

 private:
  struct Node {
    int var;
    NodeId hi, lo;
  };
  struct Key {
    int var;
    NodeId hi, lo;
    bool operator==(const Key& o) const { return var == o.var && hi == o.hi && lo == o.lo; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t x = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.var)) << 40) ^
                        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.hi)) << 20) ^
                        static_cast<std::uint32_t>(k.lo);
      x ^= x >> 33;
      x *= 0xff51afd7ed558ccdULL;
      x ^= x >> 33;
      return static_cast<std::size_t>(x);
    }
  };

  NodeId apply(bool is_or, NodeId a, NodeId b);

  std::vector<Node> nodes_;
  std::unordered_map<Key, NodeId, KeyHash> unique_;
  std::unordered_map<std::uint64_t, NodeId> cache_;
  std::size_t budget_;
};

// prob(compile(formula_of(K))) — the exact goal probability.
double goal_probability(const std::vector<Explanation>& K, const std::map<int, double>& probs);

// Same pipeline, returning the pieces (used by the DOT dump).
struct CompiledFormula {
  DnfFormula formula;
  std::vector<BoolVar> vars;
  BddManager::NodeId root;
  double probability;
};
CompiledFormula compile_explanations(const std::vector<Explanation>& K,
                                     const std::map<int, double>& probs, BddManager& manager);

}  // namespace alpp
