#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ct/backend.hpp"
#include "ct/conservation.hpp"
#include "ct/core.hpp"
#include "ct/possibility.hpp"

namespace ct {

// A derived possibility contradicts a declared impossibility (or vice versa).
// Carries both sides so the derivation can be replayed.
struct InconsistentModelError : Error {
  InconsistentModelError(const std::string& what, Task task_, FactOrigin derived_,
                         FactOrigin declared_)
      : Error(what), task(std::move(task_)), derived(std::move(derived_)),
        declared(std::move(declared_)) {}
  Task task;
  FactOrigin derived;
  FactOrigin declared;
};

struct ClosureRules {
  bool serial = true;      // chain possible tasks through matching outputs
  bool parallel = true;    // run possible tasks side by side
  bool spectator = true;   // seed identity tasks so substrates can sit idle
  bool identity_axiom = true;  // identity tasks count as possible unasked
  std::size_t max_arity = 3;       // atomic-slot bound on derived tasks
  std::size_t max_facts = 20000;   // safety valve for the fixpoint
};

struct ClosureStats {
  std::size_t derived = 0;
  std::size_t rounds = 0;
  bool truncated = false;
};

// Finite declared model: a possibility relation over tasks, closed under the
// composition rules above. A possible task also certifies every restriction
// of itself, which the queries exploit instead of materialising subsets.
class AbstractBackend : public ModelBackend {
 public:
  explicit AbstractBackend(ClosureRules rules = {}) : rules_(rules) {}

  const Universe& universe() const override { return u_; }
  Universe& universe_mut() { return u_; }
  const ClosureRules& rules() const { return rules_; }

  // Declares a fact; returns the conflicting stored fact when contradicted.
  const Fact* declare(const Task& task, Possibility status);

  void declare_variable(Variable v) { variables_.push_back(std::move(v)); }
  const std::vector<Variable>& variables() const { return variables_; }

  void set_energy(AttributeId a, Rational value) { energy_.values[a] = std::move(value); }
  const EnergyLabeling& energy() const { return energy_; }

  // Runs the composition rules to a fixpoint. Throws InconsistentModelError
  // when a derived possibility meets a declared impossibility.
  ClosureStats close();

  Possibility status_of(const Task& task) const;

  // The stored task (if any) whose restriction/extension settles the status.
  const Task* deciding_task(const Task& task, Possibility expected) const;

  Decision decide_task(const Task& task) const override;
  std::optional<Rational> tuple_energy(const AttrTuple& tuple) const override;
  std::vector<Variable> candidate_variables(const std::vector<SubstrateId>& slots,
                                            std::size_t cardinality) const override;

  const PossibilityRelation& facts() const { return relation_; }

 private:
  std::size_t atomic_arity(const Task& t) const;
  void insert_derived(const Task& task, FactOrigin origin, std::vector<Task>& fresh);

  Universe u_;
  ClosureRules rules_;
  PossibilityRelation relation_;
  std::vector<Variable> variables_;
  EnergyLabeling energy_;
  bool closed_ = false;
};

}  // namespace ct
