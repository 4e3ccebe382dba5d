#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ct/closure.hpp"
#include "ct/conservation.hpp"
#include "ct/info_media.hpp"

namespace ct {

struct PrincipleToggles {
  bool conservation = true;
  bool asymptotic = true;
  bool interoperability = true;
};

enum class PrincipleStatus { Pass, Fail, Gap };

const char* to_string(PrincipleStatus s);

struct PrincipleFinding {
  std::string principle;
  PrincipleStatus status = PrincipleStatus::Gap;
  std::string note;
};

struct PrincipleReport {
  std::vector<PrincipleFinding> findings;

  // Energy labeling backing the conservation finding: the declared one when
  // complete, otherwise a solved witness. Absent when infeasible.
  std::optional<EnergyLabeling> labeling;

  // Strict reading of the asymptotic principle: every disjoint attribute pair
  // was affirmatively distinguishable at some level within the truncation.
  // The finding itself reports Gap (not Fail) for merely-undecided pairs;
  // the counterexample search filters on this stronger flag.
  bool asymptotic_affirmative = true;

  bool any_fail() const;
  const PrincipleFinding* find(const std::string& principle) const;
};

// Evaluates the framework's principles against a closed abstract model:
// conservation (a labeling must reproduce the declared facts' energy balance,
// and the induced partition must pass the class conditions), asymptotic
// distinguishability truncated at n_truncation, and interoperability over the
// model's declared variables.
PrincipleReport check_principles(const AbstractBackend& model, long n_truncation,
                                 const PrincipleToggles& toggles = {});

// The conservation core reused by the report and the search: equalities from
// every pair of every possible fact, disequalities from impossible pairwise
// facts. Returns a witness labeling or nullopt when no labeling fits.
std::optional<EnergyLabeling> solve_model_labeling(const AbstractBackend& model,
                                                   std::string* infeasibility_note = nullptr);

}  // namespace ct
