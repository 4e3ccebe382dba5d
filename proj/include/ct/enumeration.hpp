#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ct/closure.hpp"
#include "ct/core.hpp"
#include "ct/principles.hpp"

namespace ct {

struct BoundsTooLargeError : Error {
  using Error::Error;
};

// One atomic substrate carrying `attributes` attributes. Models are generated
// from a mixed-radix digit vector, most significant digit first:
//   - one binary digit per ordered attribute pair: {a_i -> a_j} impossible /
//     possible;
//   - one ternary digit per unordered pair: the swap relabeling
//     {a_i -> a_j, a_j -> a_i} left open / impossible / possible;
//   - one ternary digit per unordered pair: the two cloning tasks of {a_i,a_j}
//     (one per receptacle, declared together so relabeling maps the pool onto
//     itself) left open / impossible / possible;
//   - one digit choosing a shift-task declaration: 0 for none, otherwise
//     1 + the lexicographic index of the ordered distinct triple (w+,w0,w-).
// Only the lexicographically least digit vector of each relabeling orbit is
// examined.
struct SearchBounds {
  std::size_t attributes = 3;
  std::size_t arity = 2;    // closure derives nothing wider than this
  long n_truncation = 2;    // asymptotic levels examined
};

enum class SearchOutcome { Exhausted, Counterexample };

struct CounterexampleModel {
  std::uint64_t index = 0;
  std::vector<int> digits;
  std::vector<std::string> possible;    // declared possible tasks
  std::vector<std::string> impossible;  // declared impossible tasks
  std::string energies;                 // the witness labeling
  std::string work_variable;            // (w+, w0, w-)
  std::string source;                   // the extraction source variable
  std::string extraction;               // the possible extraction task
  std::string note;                     // why the source is not distinguishable
};

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Exhausted;
  std::uint64_t raw_models = 0;         // all digit vectors
  std::uint64_t canonical_models = 0;   // orbit representatives examined
  std::uint64_t contradictory = 0;      // closure found declared facts in conflict
  std::uint64_t principle_filtered = 0; // excluded by the enabled principles
  std::uint64_t no_work_variable = 0;   // nothing certifies as a work variable
  std::uint64_t theorem_held = 0;       // work variable present, theorem undamaged
  std::optional<CounterexampleModel> counterexample;
  double seconds = 0.0;
};

// Scans canonical models in index order and stops at the first one where some
// certified work variable admits a possible extraction task whose source is
// affirmatively not distinguishable. With every principle enabled the scan is
// expected to exhaust; dropping the asymptotic principle lets counterexamples
// through. Results are identical between the two entry points; the first runs
// the per-chunk model evaluation across threads.
SearchResult search_counterexample(const SearchBounds& bounds,
                                   const PrincipleToggles& toggles = {});
SearchResult search_counterexample_serial(const SearchBounds& bounds,
                                          const PrincipleToggles& toggles = {});

}  // namespace ct
