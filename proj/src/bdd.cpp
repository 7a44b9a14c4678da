#include "alpp/bdd.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

namespace alpp {

std::pair<DnfFormula, std::vector<BoolVar>> formula_of(const std::vector<Explanation>& K,
                                                       const std::map<int, double>& probs) {
  std::vector<const Explanation*> sorted;
  sorted.reserve(K.size());
  for (const auto& e : K) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(),
            [](const Explanation* a, const Explanation* b) { return a->key() < b->key(); });

  std::vector<BoolVar> vars;
  std::unordered_map<std::string, int> index;
  DnfFormula f;
  for (const Explanation* e : sorted) {
    std::vector<int> cube;
    for (const auto& c : e->choices) {
      auto [it, inserted] = index.try_emplace(c.instance_key, static_cast<int>(vars.size()));
      if (inserted) {
        BoolVar v;
        v.index = it->second;
        v.ic_id = c.ic_id;
        v.instance_key = c.instance_key;
        v.display = c.instance_key;
        v.prob = probs.at(c.ic_id);
        vars.push_back(std::move(v));
      }
      int lit = it->second + 1;
      cube.push_back(c.k == 1 ? lit : -lit);
    }
    // consistency guarantees no opposite pair; drop duplicate literals
    std::sort(cube.begin(), cube.end(), [](int a, int b) { return std::abs(a) < std::abs(b); });
    cube.erase(std::unique(cube.begin(), cube.end()), cube.end());
    f.cubes.push_back(std::move(cube));
  }
  f.num_vars = static_cast<int>(vars.size());
  return {std::move(f), std::move(vars)};
}

BddManager::BddManager(std::size_t node_budget) : budget_(node_budget) {
  nodes_.push_back({-1, kFalse, kFalse});  // terminal 0
  nodes_.push_back({-1, kTrue, kTrue});    // terminal 1
}

BddManager::NodeId BddManager::mk(int var, NodeId hi, NodeId lo) {
  if (hi == lo) return hi;
  Key key{var, hi, lo};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  if (nodes_.size() >= budget_) throw BddLimitError("BDD node budget exceeded");
  NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({var, hi, lo});
  unique_.emplace(key, id);
  return id;
}

BddManager::NodeId BddManager::apply(bool is_or, NodeId a, NodeId b) {
  if (a == b) return a;
  if (is_or) {
    if (a == kTrue || b == kTrue) return kTrue;
    if (a == kFalse) return b;
    if (b == kFalse) return a;
  } else {
    if (a == kFalse || b == kFalse) return kFalse;
    if (a == kTrue) return b;
    if (b == kTrue) return a;
  }
  if (a > b) std::swap(a, b);
  std::uint64_t key = (static_cast<std::uint64_t>(is_or ? 1 : 0) << 62) |
                      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 31) |
                      static_cast<std::uint32_t>(b);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  int va = var(a), vb = var(b);
  int v = std::min(va, vb);
  NodeId a1 = va == v ? hi(a) : a, a0 = va == v ? lo(a) : a;
  NodeId b1 = vb == v ? hi(b) : b, b0 = vb == v ? lo(b) : b;
  NodeId r = mk(v, apply(is_or, a1, b1), apply(is_or, a0, b0));
  cache_.emplace(key, r);
  return r;
}

BddManager::NodeId BddManager::apply_or(NodeId a, NodeId b) { return apply(true, a, b); }
BddManager::NodeId BddManager::apply_and(NodeId a, NodeId b) { return apply(false, a, b); }

BddManager::NodeId BddManager::cube(const std::vector<int>& literals) {
  std::vector<int> lits = literals;
  std::sort(lits.begin(), lits.end(), [](int a, int b) { return std::abs(a) > std::abs(b); });
  NodeId acc = kTrue;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i > 0 && lits[i] == lits[i - 1]) continue;
    if (i > 0 && lits[i] == -lits[i - 1]) return kFalse;  // x and not x
    int v = std::abs(lits[i]) - 1;
    acc = lits[i] > 0 ? mk(v, acc, kFalse) : mk(v, kFalse, acc);
  }
  return acc;
}

BddManager::NodeId BddManager::compile(const DnfFormula& f) {
  NodeId acc = kFalse;
  for (const auto& c : f.cubes) acc = apply_or(acc, cube(c));
  return acc;
}

std::size_t BddManager::reachable_count(NodeId root) const {
  std::set<NodeId> seen;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (is_terminal(n) || !seen.insert(n).second) continue;
    stack.push_back(hi(n));
    stack.push_back(lo(n));
  }
  return seen.size();
}

double BddManager::prob(NodeId root, const std::vector<double>& var_probs) const {
  std::unordered_map<NodeId, double> memo;
  std::function<double(NodeId)> go = [&](NodeId n) -> double {
    if (n == kFalse) return 0.0;
    if (n == kTrue) return 1.0;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    double px = var_probs[static_cast<std::size_t>(var(n))];
    double p = px * go(hi(n)) + (1.0 - px) * go(lo(n));
    memo.emplace(n, p);
    return p;
  };
  return go(root);
}

std::string BddManager::to_dot(NodeId root, const std::vector<BoolVar>& vars) const {
  std::ostringstream os;
  os << "digraph bdd {\n";
  os << "  node [shape=circle];\n";
  os << "  t0 [shape=box,label=\"0\"];\n  t1 [shape=box,label=\"1\"];\n";
  std::set<NodeId> seen;
  std::vector<NodeId> stack{root};
  auto name = [](NodeId n) {
    if (n == kFalse) return std::string("t0");
    if (n == kTrue) return std::string("t1");
    return "n" + std::to_string(n);
  };
  if (is_terminal(root)) {
    os << "}\n";
    return os.str();
  }
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (is_terminal(n) || !seen.insert(n).second) continue;
    const std::string label = vars.empty() ? ("x" + std::to_string(var(n)))
                                           : vars[static_cast<std::size_t>(var(n))].display;
    os << "  " << name(n) << " [label=\"" << label << "\"];\n";
    os << "  " << name(n) << " -> " << name(hi(n)) << " [style=solid];\n";
    os << "  " << name(n) << " -> " << name(lo(n)) << " [style=dashed];\n";
    stack.push_back(hi(n));
    stack.push_back(lo(n));
  }
  os << "}\n";
  return os.str();
}

CompiledFormula compile_explanations(const std::vector<Explanation>& K,
                                     const std::map<int, double>& probs, BddManager& manager) {
  CompiledFormula out;
  auto [formula, vars] = formula_of(K, probs);
  out.formula = std::move(formula);
  out.vars = std::move(vars);
  out.root = manager.compile(out.formula);
  std::vector<double> var_probs;
  var_probs.reserve(out.vars.size());
  for (const auto& v : out.vars) var_probs.push_back(v.prob);
  out.probability = manager.prob(out.root, var_probs);
  return out;
}

double goal_probability(const std::vector<Explanation>& K, const std::map<int, double>& probs) {
  if (K.empty()) return 0.0;
  BddManager manager;
  return compile_explanations(K, probs, manager).probability;
}

}  // namespace alpp
