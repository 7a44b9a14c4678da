#include "alpp/explain.hpp"

#include <algorithm>
#include <stdexcept>

namespace alpp {

std::string Explanation::key() const {
  std::string s;
  for (const auto& c : choices) {
    s += c.instance_key;
    s += '=';
    s += char('0' + c.k);
    s += ';';
  }
  return s;
}

bool Explanation::consistent() const {
  for (std::size_t i = 0; i < choices.size(); ++i)
    for (std::size_t j = i + 1; j < choices.size(); ++j)
      if (choices[i].instance_key == choices[j].instance_key && choices[i].k != choices[j].k)
        return false;
  return true;
}

bool incompatible(const Explanation& a, const Explanation& b) {
  for (const auto& ca : a.choices)
    for (const auto& cb : b.choices)
      if (ca.instance_key == cb.instance_key && ca.k != cb.k) return true;
  return false;
}

bool pairwise_incompatible(const std::vector<Explanation>& set) {
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (!incompatible(set[i], set[j])) return false;
  return true;
}

double choice_prob(const Explanation& e, const std::map<int, double>& probs) {
  double p = 1.0;
  for (const auto& c : e.choices) {
    double pi = probs.at(c.ic_id);
    p *= c.k == 1 ? pi : 1.0 - pi;
  }
  return p;
}

Explanation freeze_explanation(const SuccessLeaf& leaf) {
  Substitution empty;
  Explanation e;
  e.choices.reserve(leaf.expl.size());
  for (const auto& c : leaf.expl) {
    FrozenChoice fc;
    fc.ic_id = c.ic_id;
    fc.k = c.k;
    fc.instance_key = canonical_choice_key(c, empty);
    for (std::size_t i = 0; i < c.dom.size(); ++i)
      fc.theta.emplace_back(c.dom[i], term_to_string(c.rng[i]));
    e.choices.push_back(std::move(fc));
  }
  std::sort(e.choices.begin(), e.choices.end(), [](const FrozenChoice& a, const FrozenChoice& b) {
    return a.instance_key != b.instance_key ? a.instance_key < b.instance_key : a.k < b.k;
  });
  // bindings can collapse two recordings of one instance into duplicates
  e.choices.erase(std::unique(e.choices.begin(), e.choices.end(),
                              [](const FrozenChoice& a, const FrozenChoice& b) {
                                return a.instance_key == b.instance_key && a.k == b.k;
                              }),
                  e.choices.end());
  return e;
}

namespace {

// Canonical rendering of a term with variables renamed in first-occurrence
// order of the whole (delta, theta) group, so alpha-equivalent answers get
// the same key.
std::string render_canonical(const TermPtr& t, std::map<VarId, std::string>& names) {
  switch (t->kind()) {
    case Term::Kind::Var: {
      auto it = names.find(t->var_id());
      if (it == names.end())
        it = names.emplace(t->var_id(), "_" + std::to_string(names.size())).first;
      return it->second;
    }
    case Term::Kind::Int:
      return std::to_string(t->int_value());
    case Term::Kind::App: {
      std::string s = t->name();
      if (!t->args().empty()) {
        s += '(';
        for (std::size_t i = 0; i < t->args().size(); ++i) {
          if (i) s += ',';
          s += render_canonical(t->args()[i], names);
        }
        s += ')';
      }
      return s;
    }
  }
  return {};
}

std::string render_atom_canonical(const Atom& a, std::map<VarId, std::string>& names) {
  std::string s = a.pred;
  if (!a.args.empty()) {
    s += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ',';
      s += render_canonical(a.args[i], names);
    }
    s += ')';
  }
  return s;
}

// Variable-blind rendering used only to fix a stable atom order before the
// canonical renaming pass.
std::string render_blind(const Atom& a) {
  std::string s = a.pred + "/" + std::to_string(a.args.size()) + "(";
  for (const auto& t : a.args) {
    if (t->is_var())
      s += "_,";
    else
      s += term_to_string(t) + ",";
  }
  return s + ")";
}

}  // namespace

Collected collect(const std::vector<SuccessLeaf>& leaves, const Goal& goal) {
  Collected out;
  out.leaf_count = leaves.size();

  std::map<std::string, std::size_t> answer_index;
  std::map<std::string, bool> global_expl_seen;

  for (const auto& leaf : leaves) {
    // Stable order for the delta atoms, then a joint canonical renaming over
    // delta and theta.
    std::vector<const Atom*> ordered;
    ordered.reserve(leaf.delta.size());
    for (const auto& a : leaf.delta) ordered.push_back(&a);
    std::stable_sort(ordered.begin(), ordered.end(), [](const Atom* a, const Atom* b) {
      return render_blind(*a) < render_blind(*b);
    });

    std::map<VarId, std::string> names;
    std::vector<std::string> delta_strs;
    delta_strs.reserve(ordered.size());
    for (const Atom* a : ordered) delta_strs.push_back(render_atom_canonical(*a, names));

    std::map<std::string, std::string> theta;
    std::string theta_key;
    for (const auto& v : goal.free_vars) {
      auto it = leaf.theta.bindings().find(v->var_id());
      if (it == leaf.theta.bindings().end()) continue;
      std::string rendered = render_canonical(it->second, names);
      theta[v->name()] = term_to_string(it->second);
      theta_key += v->name() + "=" + rendered + ";";
    }

    std::string key;
    for (const auto& d : delta_strs) key += d + "&";
    key += "|" + theta_key;

    auto [it, inserted] = answer_index.try_emplace(key, out.answers.size());
    if (inserted) {
      Answer ans;
      ans.delta = delta_strs;
      ans.theta = std::move(theta);
      ans.key = key;
      for (const auto& [l, r] : leaf.store.pairs())
        ans.store.push_back(term_to_string(l) + " \\= " + term_to_string(r));
      out.answers.push_back(std::move(ans));
    }
    Answer& ans = out.answers[it->second];

    Explanation e = freeze_explanation(leaf);
    std::string ekey = e.key();
    bool dup = false;
    for (const auto& existing : ans.explanations)
      if (existing.key() == ekey) {
        dup = true;
        break;
      }
    if (!dup) ans.explanations.push_back(e);
    if (!global_expl_seen.count(ekey)) {
      global_expl_seen[ekey] = true;
      out.explanations.push_back(std::move(e));
    }
  }

  for (auto& ans : out.answers)
    std::sort(ans.explanations.begin(), ans.explanations.end(),
              [](const Explanation& a, const Explanation& b) { return a.key() < b.key(); });
  std::sort(out.explanations.begin(), out.explanations.end(),
            [](const Explanation& a, const Explanation& b) { return a.key() < b.key(); });
  return out;
}

}  // namespace alpp
