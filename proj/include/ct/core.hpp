#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ct {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DuplicateInputError : Error {
  using Error::Error;
};
struct DuplicateOutputError : Error {
  using Error::Error;
};
struct CompositionMismatchError : Error {
  using Error::Error;
};
struct TupleMismatchError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Universe: interned substrates and attributes
// ---------------------------------------------------------------------------

using SubstrateId = std::uint32_t;
using AttributeId = std::uint32_t;

// An attribute tuple names one attribute per covered slot run; composites are
// kept flat, so ((a,b),c) and (a,(b,c)) are the same tuple [a,b,c].
using AttrTuple = std::vector<AttributeId>;

struct SubstrateInfo {
  std::string name;
  std::vector<SubstrateId> components;  // empty for atomic substrates
  std::vector<SubstrateId> slots;       // flattened atomic slots (self if atomic)
};

struct AttributeInfo {
  std::string name;
  SubstrateId substrate;
};

class Universe {
 public:
  SubstrateId add_substrate(std::string name);
  SubstrateId add_composite(std::string name, SubstrateId left, SubstrateId right);
  AttributeId add_attribute(std::string name, SubstrateId substrate);

  const SubstrateInfo& substrate(SubstrateId id) const { return substrates_.at(id); }
  const AttributeInfo& attribute(AttributeId id) const { return attributes_.at(id); }
  std::size_t substrate_count() const { return substrates_.size(); }
  std::size_t attribute_count() const { return attributes_.size(); }

  // Flattened atomic slot signature of a substrate / of an attribute tuple.
  const std::vector<SubstrateId>& slots_of(SubstrateId id) const { return substrates_.at(id).slots; }
  std::vector<SubstrateId> slots_of_tuple(const AttrTuple& tuple) const;

  // Attributes declared directly on a substrate, in declaration order.
  const std::vector<AttributeId>& attributes_of(SubstrateId id) const;

  std::optional<SubstrateId> find_substrate(std::string_view name) const;
  std::optional<AttributeId> find_attribute(std::string_view name) const;

  std::string tuple_name(const AttrTuple& tuple) const;

 private:
  std::vector<SubstrateInfo> substrates_;
  std::vector<AttributeInfo> attributes_;
  std::vector<std::vector<AttributeId>> by_substrate_;
};

// ---------------------------------------------------------------------------
// Tasks
// ---------------------------------------------------------------------------

struct TaskPair {
  AttrTuple in;
  AttrTuple out;

  friend bool operator==(const TaskPair&, const TaskPair&) = default;
  friend auto operator<=>(const TaskPair&, const TaskPair&) = default;
};

// A finite deterministic task: distinct input tuples, pairs kept sorted so that
// structurally equal tasks compare equal.
class Task {
 public:
  Task() = default;

  // Validates tuples against the slot signature and sorts the pair list.
  static Task make(const Universe& u, std::vector<SubstrateId> slots, std::vector<TaskPair> pairs);

  const std::vector<SubstrateId>& slots() const { return slots_; }
  const std::vector<TaskPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  bool has_input(const AttrTuple& in) const;
  const AttrTuple* output_for(const AttrTuple& in) const;

  // True when every pair maps a tuple to itself.
  bool is_identity() const;

  friend bool operator==(const Task&, const Task&) = default;
  friend auto operator<=>(const Task&, const Task&) = default;

 private:
  std::vector<SubstrateId> slots_;
  std::vector<TaskPair> pairs_;
};

struct TaskHash {
  std::size_t operator()(const Task& t) const;
};

// sub is a restriction of super: same slots, pair set contained.
bool is_subtask(const Task& sub, const Task& super);

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

// Swaps every pair; throws DuplicateOutputError when outputs collide.
Task transpose(const Universe& u, const Task& t);

// T1 then T2 on the same substrate. Every output of T1 must appear among T2's
// inputs; throws CompositionMismatchError otherwise.
Task serial_compose(const Universe& u, const Task& t1, const Task& t2);

// Side-by-side composition; slot signatures concatenate and pair sets take the
// cross product. Flat tuples make the operation associative on the nose.
Task parallel_compose(const Universe& u, const Task& t1, const Task& t2);

Task n_fold_task(const Universe& u, const Task& t, std::size_t n);

AttrTuple n_fold_tuple(const AttrTuple& x, std::size_t n);

// Identity task fixing each listed tuple.
Task make_identity(const Universe& u, std::vector<SubstrateId> slots, const std::vector<AttrTuple>& tuples);

std::string format_task(const Universe& u, const Task& t);

// ---------------------------------------------------------------------------
// Variables
// ---------------------------------------------------------------------------

// An ordered set of pairwise distinct attribute tuples sharing one slot
// signature. Declared DSL variables have singleton tuples; product variables
// (interoperability) have longer ones.
struct Variable {
  std::vector<SubstrateId> slots;
  std::vector<AttrTuple> members;

  friend bool operator==(const Variable&, const Variable&) = default;
};

Variable make_variable(const Universe& u, const std::vector<AttrTuple>& members);

}  // namespace ct
