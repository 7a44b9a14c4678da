#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "alpp/bdd.hpp"
#include "alpp/engine.hpp"
#include "alpp/explain.hpp"
#include "alpp/program.hpp"

namespace alpp {

// Brute-force ground semantics used as an independent check of the engine:
// enumerate every selection over the ground constraint-instance universe,
// decide goal entailment per world with a crisp derivation, and sum.

class UniverseError : public std::runtime_error {
 public:
  explicit UniverseError(const std::string& what) : std::runtime_error(what) {}
};

struct GroundInstance {
  int pic_id = 0;
  double prob = 0.0;
  std::string instance_key;  // matches canonical engine choice keys
  IntegrityConstraint crisp_ic;  // ground, probability stripped
};

struct OracleUniverse {
  std::vector<TermPtr> constants;
  std::vector<GroundInstance> instances;
};

struct OracleOptions {
  std::size_t max_instances = 20;
  SearchLimits world_limits{10000, 2000000, 1000000};
};

// Constants from program plus goal (one invented constant when there are
// none); instances are the groundings of each probabilistic constraint's
// body variables whose abducible body atoms stay inside the ground
// abducible base. Throws UniverseError past max_instances.
OracleUniverse build_universe(const Program& program, const Goal& goal,
                              std::size_t max_instances = 20);

struct WorldRecord {
  std::vector<int> chosen;  // indices into universe.instances with k=1
  double prob = 0.0;
  bool entails = false;
};

// All selections, with per-world probability and (optionally) entailment.
std::vector<WorldRecord> enumerate_worlds(const Program& program, const Goal& goal,
                                          const OracleOptions& opts = {},
                                          bool with_entailment = true);

// Sum of world probabilities over entailing worlds.
double oracle_probability(const Program& program, const Goal& goal,
                          const OracleOptions& opts = {});

// Sum of all world probabilities (distribution sanity; no entailment work).
double world_probability_sum(const Program& program, const Goal& goal,
                             const OracleOptions& opts = {});

// Mass of the worlds compatible with at least one explanation of the set.
double world_mass_of(const std::vector<Explanation>& K, const Program& program, const Goal& goal,
                     const OracleOptions& opts = {});

// Engine-side value on the oracle's ground universe: non-ground choices are
// expanded existentially over the constants (respecting each leaf's
// disequality store) before weighted counting. Equals goal_probability on
// ground explanation sets.
double ground_expanded_probability(const std::vector<SuccessLeaf>& leaves, const Program& program,
                                   const Goal& goal, const OracleUniverse& universe);

// --- ground checking -------------------------------------------------------

// Bottom-up evaluator over the knowledge base grounded once at construction.
// The independent checker behind leaf soundness and crisp-constraint tests.
class GroundEvaluator {
 public:
  GroundEvaluator(const Program& program, std::vector<TermPtr> constants);

  // Least Herbrand model of kb + delta; atoms rendered to strings.
  std::set<std::string> least_model(const std::vector<Atom>& ground_delta) const;

  // Every ground instance of every listed constraint holds in the least
  // model (body true implies some head disjunct true).
  bool ics_satisfied(const std::vector<IntegrityConstraint>& ics,
                     const std::vector<Atom>& ground_delta) const;

  // Ground goal atoms hold: abducibles via delta, defined ones via the model.
  bool goal_holds(const std::vector<Atom>& ground_goal,
                  const std::vector<Atom>& ground_delta) const;

  const std::vector<TermPtr>& constants() const { return constants_; }

 private:
  struct GroundClause {
    std::string head;
    std::vector<std::string> body;
  };
  const Program& program_;
  std::vector<TermPtr> constants_;
  std::vector<GroundClause> clauses_;
};

std::set<std::string> least_model(const Program& program, const std::vector<Atom>& ground_delta,
                                  const std::vector<TermPtr>& constants);
bool ground_ics_satisfied(const Program& program, const std::vector<IntegrityConstraint>& ics,
                          const std::vector<Atom>& ground_delta,
                          const std::vector<TermPtr>& constants);
bool ground_goal_holds(const Program& program, const std::vector<Atom>& ground_goal,
                       const std::vector<Atom>& ground_delta,
                       const std::vector<TermPtr>& constants);

}  // namespace alpp
