#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ct/backend.hpp"
#include "ct/conservation.hpp"
#include "ct/core.hpp"
#include "ct/info_media.hpp"

namespace ct {

struct NonInjectiveWorkMapError : Error {
  using Error::Error;
};

// Three designated attributes of one substrate: a raised, a resting and a
// lowered configuration.
struct WorkVariable {
  SubstrateId substrate = 0;
  AttributeId w_plus = 0;
  AttributeId w_zero = 0;
  AttributeId w_minus = 0;

  std::vector<AttributeId> members() const { return {w_plus, w_zero, w_minus}; }
};

// The defining two-pair shift task on a doubled substrate:
//   {(w+, w0) -> (w0, w+), (w0, w0) -> (w+, w-)}.
Task build_work_axiom_task(const Universe& u, const WorkVariable& w);

struct AxiomCheck {
  std::string axiom;  // "shift-task" | "pairwise-impossible" | "spacing" | "same-class"
  Possibility status = Possibility::Unknown;  // Possible = satisfied
  std::optional<Task> witness;
  std::string note;
};

struct WorkVariableVerdict {
  Possibility status = Possibility::Unknown;  // certified / refused / undecided
  std::vector<AxiomCheck> axioms;
  std::string note;  // first failing or undecided axiom
};

// Certification: (a) the shift task is possible; (b) every one-sided member
// transition {w_m -> w_n}, m != n, is impossible; (c) the energies are evenly
// spaced around w0 with a nonzero step. With strict_same_class the literal
// same-class reading replaces (c); it is self-contradictory (a class holding a
// task and its transpose forces a zero step) and the verdict says so.
WorkVariableVerdict is_work_variable(const ModelBackend& backend, const WorkVariable& w,
                                     const EnergyLabeling& labeling,
                                     bool strict_same_class = false);

struct WorkExtractionSpec {
  Variable source;                    // the variable whose value is read out
  std::vector<AttrTuple> residuals;   // what each member turns into
  std::vector<AttributeId> work_out;  // which work attribute each member raises; injective
};

// Eq-style readout {(x, w0) -> (f_x, w_x)} on source-substrate (+) work-substrate.
Task build_extraction_task(const Universe& u, const WorkExtractionSpec& spec,
                           const WorkVariable& w);

enum class TheoremOutcome { Holds, Violation, Undecided };

const char* to_string(TheoremOutcome o);

struct TheoremVerdict {
  TheoremOutcome outcome = TheoremOutcome::Undecided;
  Task extraction_task;
  Possibility extraction_status = Possibility::Unknown;
  DistinguishabilityVerdict distinguishability;
  std::string note;
};

// Work extraction from a variable forces its distinguishability. Possible
// extraction + affirmatively indistinguishable source = Violation (the model
// breaks the framework's principles).
TheoremVerdict theorem1_check(const ModelBackend& backend, const WorkExtractionSpec& spec,
                              const WorkVariable& w);

// {(w+, w0^(2n)) -> (w+, (w+,w-)^n), (w0, w0^(2n)) -> (w0, (w-,w+)^n)} on 2n+1
// parts: n runs of the shift task leave records that tell w+ from w0 apart.
Task build_asymptotic_extractor_task(const Universe& u, const WorkVariable& w, std::size_t n);

struct AdiabaticVerdict {
  Possibility status = Possibility::Unknown;
  std::optional<AttributeId> witness_member;  // the w1 that makes the lift possible
  std::vector<TaskVerdict> lifts;
  std::string note;
};

// {x -> y} is adiabatically possible when {(x, w0) -> (y, w1)} is possible for
// some member w1 of the work variable.
AdiabaticVerdict is_adiabatically_possible(const ModelBackend& backend, const Task& pairwise,
                                           const WorkVariable& w);

struct SecondLawWitness {
  Task task;
  AdiabaticVerdict forward;
  AdiabaticVerdict reverse;
};

// Looks for a candidate task that is adiabatically possible while its
// transpose is not: the second-law asymmetry, when the model exhibits one.
std::optional<SecondLawWitness> second_law_witness(const ModelBackend& backend,
                                                   const WorkVariable& w,
                                                   const std::vector<Task>& candidates);

}  // namespace ct
