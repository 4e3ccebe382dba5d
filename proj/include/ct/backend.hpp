#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ct/core.hpp"
#include "ct/possibility.hpp"
#include "ct/rational.hpp"

namespace ct {

struct Decision {
  Possibility status = Possibility::Unknown;
  std::string note;
};

// What the media-level checks need from a concrete model: a possibility
// verdict per task, sharp energies when they exist, and (for state-vector
// models) overlap data. Everything else is generic.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;

  virtual const Universe& universe() const = 0;

  virtual Decision decide_task(const Task& task) const = 0;

  // Componentwise energy sum of a tuple; nullopt when any part has no sharp
  // energy under this model.
  virtual std::optional<Rational> tuple_energy(const AttrTuple& tuple) const = 0;

  // State-vector models can decide distinguishability directly (support
  // orthogonality). nullopt routes the caller to the relabeling search.
  virtual std::optional<Decision> distinguishable_shortcut(const Variable& v) const {
    (void)v;
    return std::nullopt;
  }

  // Largest cross overlap magnitude between two attribute tuples, when state
  // vectors exist for both.
  virtual std::optional<double> max_cross_overlap(const AttrTuple& x, const AttrTuple& y) const {
    (void)x;
    (void)y;
    return std::nullopt;
  }

  // Target candidates for the relabeling search: declared variables plus (for
  // small abstract models) every same-cardinality attribute subset.
  virtual std::vector<Variable> candidate_variables(const std::vector<SubstrateId>& slots,
                                                    std::size_t cardinality) const {
    (void)slots;
    (void)cardinality;
    return {};
  }
};

}  // namespace ct
