#pragma once

#include <cstdint>

#include "ct/quantum.hpp"

namespace ct {

// Variational check that a task's input states can be carried onto its output
// states by some unitary with ancillas. Used as an independent cross-check of
// the algebraic criterion: a reachable fidelity of 1 certifies the task, a
// ceiling below 1 quantifies how badly it fails.
struct OracleParams {
  int ancilla_dim = 4;
  int restarts = 8;
  int iterations = 600;
  std::uint64_t seed = 1;
};

struct OracleResult {
  // Best min-over-pairs fidelity reached. A lower bound on the true optimum;
  // equals it to numerical precision in practice.
  double fidelity = 0.0;
  int best_restart = -1;
  long iterations = 0;  // total ascent steps across restarts
};

// Parallel over restarts when built with OpenMP; bitwise-identical to the
// serial run either way because each restart draws from its own stream.
OracleResult oracle_max_fidelity(const QuantumModel& model, const Task& task,
                                 const OracleParams& params);

// Reference implementation: same restarts, one after the other.
OracleResult oracle_max_fidelity_serial(const QuantumModel& model, const Task& task,
                                        const OracleParams& params);

}  // namespace ct
