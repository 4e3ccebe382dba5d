#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ct/backend.hpp"
#include "ct/core.hpp"

namespace ct {

struct ReceptacleNotInVariableError : Error {
  using Error::Error;
};
struct NotABijectionError : Error {
  using Error::Error;
};
// For callers that insist on a definite verdict where the model has none.
struct BackendUndecidedError : Error {
  using Error::Error;
};

// Three-valued connectives: Impossible dominates AND, Possible dominates OR,
// Unknown floats in between.
Possibility kleene_and(Possibility a, Possibility b);
Possibility kleene_or(Possibility a, Possibility b);

// Copy every member of x onto a second instance prepared in the receptacle
// member x0: {(x, x0) -> (x, x)}.
Task build_cloning_task(const Universe& u, const Variable& x, const AttrTuple& x0);

// Relabel members along a permutation of their indices: {x_i -> x_perm(i)}.
Task build_permutation_task(const Universe& u, const Variable& x,
                            const std::vector<std::size_t>& perm);

struct TaskVerdict {
  Task task;
  Possibility status = Possibility::Unknown;
};

struct InfoVariableCertificate {
  Possibility status = Possibility::Unknown;  // certified / refused / undecided
  Variable variable;
  std::optional<AttrTuple> receptacle;  // the x0 behind the certified cloning
  std::vector<TaskVerdict> witnesses;   // every task consulted, in order
  std::string note;                     // names the first refusing/undecided task
};

// A variable holds information when every relabeling of its members and the
// cloning task (for some receptacle member) are possible. Permutations are
// enumerated outright up to 6 members; past that a transposition and a full
// cycle stand in for the rest, which composition closure justifies.
InfoVariableCertificate is_information_variable(const ModelBackend& backend, const Variable& x);

struct DistinguishabilityVerdict {
  Possibility status = Possibility::Unknown;
  std::optional<Task> witness;         // the possible relabeling, when found
  std::optional<Variable> target;      // the information variable reached
  bool exhaustive = true;              // false when the candidate pool was cut
  std::string note;
};

// A variable is distinguishable when it maps one-to-one onto some information
// variable by a possible task. State-vector backends decide this directly;
// otherwise every candidate target and bijection is tried with three-valued
// verdicts combined across routes.
DistinguishabilityVerdict is_distinguishable(const ModelBackend& backend, const Variable& y);

struct InteroperabilityReport {
  InfoVariableCertificate first;
  InfoVariableCertificate second;
  InfoVariableCertificate product;
  Possibility premise = Possibility::Unknown;  // both inputs certified?
  Possibility holds = Possibility::Unknown;    // premise -> product, three-valued
  std::string note;
};

// Two information variables must combine into an information variable on the
// composite substrate (Cartesian product of members).
InteroperabilityReport check_interoperability(const ModelBackend& backend, const Variable& x1,
                                              const Variable& x2);

Variable product_variable(const Universe& u, const Variable& x1, const Variable& x2);

struct AsymptoticVerdict {
  Possibility status = Possibility::Unknown;  // at the requested level
  long level = 0;
  std::optional<double> overlap;       // largest cross overlap, when states exist
  std::optional<long> minimal_level;   // least n that already distinguishes
  std::string note;
};

// Distinguishability of n joint copies of two attributes. With state vectors
// the n-copy overlap c^n decides it against epsilon; abstract models answer
// with the status of the distinguishing variable on the n-fold substrate.
AsymptoticVerdict check_asymptotic_distinguishability(const ModelBackend& backend,
                                                      const AttrTuple& x, const AttrTuple& xp,
                                                      long n, double epsilon);

// Smallest n with c^n < epsilon, by direct iteration; nullopt when c >= 1 or
// no n up to the cap works.
std::optional<long> minimal_copies_below(double c, double epsilon, long cap = 10000000);

}  // namespace ct
