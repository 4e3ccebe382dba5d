#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ct/core.hpp"

namespace ct {

enum class Possibility { Possible, Impossible, Unknown };

const char* to_string(Possibility p);

// Where a fact came from: "declared", or a closure rule name plus the premise
// tasks it was derived from. Traces make derivations replayable.
struct FactOrigin {
  std::string rule;
  std::vector<Task> premises;
};

struct Fact {
  Possibility status = Possibility::Unknown;
  FactOrigin origin;
};

struct Conflict {
  Task task;
  Fact existing;
  Fact incoming;
};

// A finite map from canonical tasks to declared/derived possibility statuses.
// Re-declaring an identical status is a no-op; conflicting statuses are
// reported to the caller instead of being silently overwritten.
class PossibilityRelation {
 public:
  // Returns nullptr on success, otherwise a pointer to the stored conflicting
  // fact (the relation keeps the first status).
  const Fact* set(const Task& task, Possibility status, FactOrigin origin);

  const Fact* find(const Task& task) const;
  Possibility status(const Task& task) const;

  const std::unordered_map<Task, Fact, TaskHash>& facts() const { return facts_; }
  std::size_t size() const { return facts_.size(); }

  // Deterministic iteration order for rule application and reports.
  std::vector<const Task*> sorted_tasks() const;

 private:
  std::unordered_map<Task, Fact, TaskHash> facts_;
};

}  // namespace ct
