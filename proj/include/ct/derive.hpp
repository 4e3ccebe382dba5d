#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ct/core.hpp"

namespace ct {

struct DerivationStep {
  std::string kind;                    // "generator" or "swap"
  std::size_t generator = 0;           // index into the generator list
  std::vector<std::size_t> positions;  // slot positions used (embedding / the swapped pair)
};

struct Derivation {
  bool found = false;
  std::vector<DerivationStep> steps;   // applied left to right
  std::size_t depth = 0;               // compositions used: steps minus one, floored at 0
  std::size_t explored = 0;            // states expanded by the search
  std::size_t frontier = 0;            // frontier size when the bound ran out
  std::string note;
};

// Searches for the target as a serial chain of generator applications. Each
// step embeds one generator into a subset of the slots (the rest idle as
// spectators) or swaps two same-substrate slots; parallel use of generators
// appears as consecutive steps on disjoint slots. Breadth-first with a fixed
// move order, so the reported chain is the lexicographically first shortest
// one. A found chain certifies the target: every step is a possible task and
// the final restriction to the target's inputs reproduces it exactly.
Derivation derive_task(const Universe& u, const Task& target, const std::vector<Task>& generators,
                       std::size_t max_depth);

}  // namespace ct
