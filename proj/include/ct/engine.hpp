#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "json.hpp"

#include "ct/closure.hpp"
#include "ct/dsl.hpp"
#include "ct/enumeration.hpp"
#include "ct/quantum.hpp"

namespace ct {

// A task decision touched an attribute that carries more than one state;
// pairwise decisions need singleton-state attributes.
struct UnsupportedAttributeError : Error {
  using Error::Error;
};

// Document-level structural problems the grammar cannot see (facts in a
// state-vector document, Hamiltonians in an abstract one, ...).
struct EngineError : Error {
  using Error::Error;
};

struct EngineOptions {
  std::uint64_t seed = 0;
  bool strict_work_axiom = false;
};

// The declared model, ready for queries. Exactly one backend pointer is set.
struct BuiltModel {
  std::unique_ptr<QuantumModel> quantum;
  std::unique_ptr<AbstractBackend> abstract;
  std::map<std::string, Variable> variables;
  std::set<std::string> multi_state;  // attributes declared with several states

  ModelBackend& backend() { return quantum ? static_cast<ModelBackend&>(*quantum) : *abstract; }
  const ModelBackend& backend() const {
    return quantum ? static_cast<const ModelBackend&>(*quantum) : *abstract;
  }
  const Universe& universe() const { return backend().universe(); }
};

// Declares everything and (for abstract documents) closes the relation.
// Propagates InconsistentModelError; run_document turns that into a report.
BuiltModel build_model(const Document& doc);

// The task a query denotes, for the variational front-end: the cloning task of
// an info-variable query, the shift task of a work-variable query, the
// extraction task of extract/theorem1, the target of derive.
Task task_of_query(const BuiltModel& model, const QueryStmt& q);

struct RunOutcome {
  nlohmann::json report;
  // 0: every verdict computed; 2: a Violation or inconsistency surfaced;
  // 1: some query (or the model build) failed to execute.
  int exit_code = 0;
};

RunOutcome run_document(const Document& doc, const std::string& input_bytes,
                        const EngineOptions& opts);

// Search result as report JSON, with the bounds and toggles embedded (wall
// time deliberately left out so reports stay byte-stable).
nlohmann::json search_report(const SearchBounds& bounds, const PrincipleToggles& toggles,
                             const SearchResult& result);

}  // namespace ct
