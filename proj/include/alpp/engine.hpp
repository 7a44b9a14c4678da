#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "alpp/program.hpp"
#include "alpp/unify.hpp"

namespace alpp {

// Atomic choice with live terms: the decoration substitution recorded when a
// probabilistic constraint's body was discharged. Range terms keep sharing
// variables with the rest of the node, so later bindings refine them.
struct Choice {
  int ic_id = 0;
  std::vector<std::string> dom;  // original body variable names
  std::vector<TermPtr> rng;      // current image of those variables
  int k = 0;                     // 1 = constraint instance enforced, 0 = relaxed
};

// Active implication inside a derivation node. Copies spawned by
// propagation or unfolding keep the decoration of their pristine original.
struct ICInst {
  std::optional<double> prob;
  int pic_id = 0;
  std::vector<std::string> dec_dom;
  std::vector<TermPtr> dec_rng;
  std::vector<Atom> body;
  std::vector<std::vector<Atom>> head;
  // Index of the first delta atom not yet considered for propagation
  // against this instance's leading abducible.
  std::size_t prop_watermark = 0;
};

struct DerivationNode {
  std::vector<Atom> resolvent;  // non-abducible goals, leftmost first
  std::vector<Atom> delta;      // abduced atoms, append-only
  std::vector<ICInst> psics;
  std::vector<Choice> expl;
  Substitution subst;
  DisequalityStore store;
  std::size_t factor_i = 0, factor_j = 1;  // next factoring pair (i < j)
  int depth = 0;
};

struct SuccessLeaf {
  std::vector<Atom> delta;  // fully resolved
  Substitution theta;       // bindings of the goal's free variables
  std::vector<Choice> expl;
  DisequalityStore store;
};

struct SearchLimits {
  int max_depth = 10000;
  long long max_nodes = 10000000;
  long long max_leaves = 1000000;
};

enum class DeriveStatus { Complete, DepthLimit, NodeLimit, LeafLimit };

struct DeriveResult {
  DeriveStatus status = DeriveStatus::Complete;
  std::vector<SuccessLeaf> leaves;  // partial (non-covering) unless complete
  long long nodes_expanded = 0;
  bool complete() const { return status == DeriveStatus::Complete; }
};

class EngineError : public std::runtime_error {
 public:
  explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

struct EngineOptions {
  SearchLimits limits;
  bool factoring = true;
  int threads = 1;
  // Invoked after each expansion with the parent and its surviving children;
  // used by invariant-checking tests.
  std::function<void(const DerivationNode&, const std::vector<DerivationNode>&)> observer;
};

// Exhaustive depth-first search over the transition system. Returns every
// success leaf in deterministic order.
DeriveResult derive(const Program& program, const Goal& goal, const EngineOptions& opts = {});

// --- pieces exposed for tests ---------------------------------------------

class Engine {
 public:
  Engine(const Program& program, const Goal& goal, EngineOptions opts = {});

  DerivationNode initial_node();

  struct Step {
    enum class Kind { Children, Leaf, Fail } kind;
    std::vector<DerivationNode> children;
    std::optional<SuccessLeaf> leaf;
  };
  // Normalizes the node and applies the single highest-priority transition.
  Step step(DerivationNode node);

  // The deterministic simplification sweep alone (exposed for tests).
  // Returns false when the node is inconsistent.
  bool simplify(DerivationNode& node) { return normalize(node); }

  DeriveResult run();

  VarGen& var_gen() { return gen_; }

 private:
  bool normalize(DerivationNode& node);
  Step finish(const DerivationNode& parent, std::vector<DerivationNode> children);
  SuccessLeaf make_leaf(const DerivationNode& node) const;

  std::vector<DerivationNode> case_analysis(const DerivationNode& node, std::size_t ic_idx);
  void unfold_ic(DerivationNode& node, std::size_t ic_idx);
  std::vector<DerivationNode> prob_equivalence(const DerivationNode& node, std::size_t ic_idx);
  std::vector<DerivationNode> unfold_resolvent(const DerivationNode& node);
  std::vector<DerivationNode> factoring(const DerivationNode& node, std::size_t i, std::size_t j);

  const Program& program_;
  Goal goal_;
  EngineOptions opts_;
  VarGen gen_;
};

// Renamed-apart copy of an implication whose leading (abducible) body atom is
// replaced by the argument equations against the given delta atom. Universal
// variables are refreshed; existential ones stay shared with the node.
ICInst propagate(const Atom& delta_atom, const ICInst& ic, const Substitution& ctx, VarGen& gen);

// Canonical form of a decoration substitution: original variables in order,
// range variables renamed by first occurrence, so alpha-equivalent instances
// compare equal.
std::string canonical_subst_key(const std::vector<std::string>& dom,
                                const std::vector<TermPtr>& rng, const Substitution& ctx);
std::string canonical_choice_key(const Choice& c, const Substitution& ctx);

// True when no two choices claim the same constraint instance with
// different k.
bool choices_consistent(const std::vector<Choice>& expl, const Substitution& ctx);

}  // namespace alpp
