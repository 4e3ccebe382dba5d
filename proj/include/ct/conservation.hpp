#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ct/core.hpp"
#include "ct/possibility.hpp"
#include "ct/rational.hpp"

namespace ct {

struct NonPairwiseTaskError : Error {
  using Error::Error;
};
struct MissingLabelError : Error {
  using Error::Error;
};

// Exact energy values per attribute; tuple energies are componentwise sums.
struct EnergyLabeling {
  std::unordered_map<AttributeId, Rational> values;

  std::optional<Rational> attribute_energy(AttributeId a) const;
  std::optional<Rational> tuple_energy(const AttrTuple& t) const;
};

// One equivalence class of pairwise tasks sharing an energy gap. `gap` is set
// when the partition came from a labeling.
struct TaskClass {
  std::optional<Rational> gap;
  std::vector<Task> members;
};

struct TaskPartition {
  std::vector<TaskClass> classes;

  // Index of the class flagged gap == 0, if present.
  std::optional<std::size_t> zero_class() const;
};

// All single-pair tasks a->b (including a->a) over the given tuples, grouped
// by the exact gap E(b)-E(a). Throws MissingLabelError when a tuple has no
// energy. Classes and members come out in a deterministic order.
TaskPartition classify_by_labeling(const Universe& u, const std::vector<AttrTuple>& attrs,
                                   const EnergyLabeling& labeling);

// ---------------------------------------------------------------------------
// Class-condition validation
// ---------------------------------------------------------------------------

using StatusFn = std::function<Possibility(const Task&)>;

struct ClassConditionViolation {
  std::string kind;  // "status-mismatch" | "nonzero-class-possible" | "product-impossible"
  std::size_t class_index;
  Task witness;
  std::string note;
};

struct ClassConditionReport {
  bool valid = true;
  std::vector<ClassConditionViolation> violations;
  std::size_t checks = 0;
  std::size_t unknown = 0;

  double coverage() const {
    return checks == 0 ? 1.0 : 1.0 - static_cast<double>(unknown) / static_cast<double>(checks);
  }
};

// Validates the two class conditions against a possibility relation, plus the
// separation consequence that a class not closed under transposition may not
// contain a Possible member (only the gap-0 class may pair a task with its
// possible transpose). Unknown statuses count as coverage gaps, not failures.
// Throws NonPairwiseTaskError when a member has more than one pair.
ClassConditionReport check_class_conditions(const Universe& u, const TaskPartition& partition,
                                            const StatusFn& status);

// ---------------------------------------------------------------------------
// Labeling recovery
// ---------------------------------------------------------------------------

struct WitnessConstraint {
  Task task;
  std::size_t class_index;
  Rational multiplier;
};

struct SolveOutcome {
  bool feasible = false;
  EnergyLabeling labeling;
  std::vector<Rational> class_gaps;  // parallel to partition.classes when feasible

  // Infeasibility evidence: a minimal set of member constraints whose signed
  // combination forces two distinct classes onto one gap.
  std::vector<WitnessConstraint> witness;
  std::size_t conflict_class_a = 0;
  std::size_t conflict_class_b = 0;
  std::string note;
};

// Recovers an exact labeling whose induced classification has the same
// gap-equality structure as the given partition: members of one class share a
// gap, distinct classes get distinct gaps. One attribute per connected
// component is anchored at 0. Returns Infeasible with a cycle witness when the
// within-class equations force two classes together.
SolveOutcome solve_labeling(const Universe& u, const TaskPartition& partition);

// ---------------------------------------------------------------------------
// Shared exact linear algebra (also used by the principle checker)
// ---------------------------------------------------------------------------

// A linear form over variables indexed 0..n-1 plus constraints sum(c_i x_i)=0.
struct LinearSystem {
  std::size_t vars = 0;
  std::vector<std::vector<Rational>> rows;

  void add_row(std::vector<Rational> row);

  // Reduced row echelon form as-is; used for forced-equality queries.
  struct Reduced {
    std::vector<std::vector<Rational>> rows;        // RREF rows
    std::vector<std::size_t> pivot_col;             // per row
    std::vector<std::optional<std::size_t>> pivot_of_col;
    // Row-operation bookkeeping: combination of original rows per RREF row.
    // Empty when reduce() ran without provenance.
    std::vector<std::vector<Rational>> provenance;
  };
  Reduced reduce(bool with_provenance = true) const;
};

// Is the linear form forced to zero on the null space? When yes, optionally
// reports the combination of original rows proving it.
bool forced_zero(const LinearSystem::Reduced& reduced, const std::vector<Rational>& form,
                 std::vector<Rational>* combination = nullptr);

// A deterministic point in the null space with every listed form nonzero,
// when one exists (forms not identically zero on the null space).
std::vector<Rational> generic_solution(const LinearSystem::Reduced& reduced, std::size_t vars,
                                       const std::vector<std::vector<Rational>>& avoid_zero_forms);

}  // namespace ct
