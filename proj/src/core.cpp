#include "ct/core.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace ct {

// --------------------------------------------------------------------------
// Universe
// --------------------------------------------------------------------------

SubstrateId Universe::add_substrate(std::string name) {
  SubstrateId id = static_cast<SubstrateId>(substrates_.size());
  substrates_.push_back(SubstrateInfo{std::move(name), {}, {id}});
  by_substrate_.emplace_back();
  return id;
}

SubstrateId Universe::add_composite(std::string name, SubstrateId left, SubstrateId right) {
  SubstrateId id = static_cast<SubstrateId>(substrates_.size());
  SubstrateInfo info;
  info.name = std::move(name);
  info.components = {left, right};
  const auto& ls = substrates_.at(left).slots;
  const auto& rs = substrates_.at(right).slots;
  info.slots.reserve(ls.size() + rs.size());
  info.slots.insert(info.slots.end(), ls.begin(), ls.end());
  info.slots.insert(info.slots.end(), rs.begin(), rs.end());
  substrates_.push_back(std::move(info));
  by_substrate_.emplace_back();
  return id;
}

AttributeId Universe::add_attribute(std::string name, SubstrateId substrate) {
  AttributeId id = static_cast<AttributeId>(attributes_.size());
  attributes_.push_back(AttributeInfo{std::move(name), substrate});
  by_substrate_.at(substrate).push_back(id);
  return id;
}

std::vector<SubstrateId> Universe::slots_of_tuple(const AttrTuple& tuple) const {
  std::vector<SubstrateId> slots;
  for (AttributeId a : tuple) {
    const auto& s = slots_of(attributes_.at(a).substrate);
    slots.insert(slots.end(), s.begin(), s.end());
  }
  return slots;
}

const std::vector<AttributeId>& Universe::attributes_of(SubstrateId id) const {
  return by_substrate_.at(id);
}

std::optional<SubstrateId> Universe::find_substrate(std::string_view name) const {
  for (std::size_t i = 0; i < substrates_.size(); ++i)
    if (substrates_[i].name == name) return static_cast<SubstrateId>(i);
  return std::nullopt;
}

std::optional<AttributeId> Universe::find_attribute(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i)
    if (attributes_[i].name == name) return static_cast<AttributeId>(i);
  return std::nullopt;
}

std::string Universe::tuple_name(const AttrTuple& tuple) const {
  if (tuple.size() == 1) return attributes_.at(tuple[0]).name;
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += attributes_.at(tuple[i]).name;
  }
  out += ")";
  return out;
}

// --------------------------------------------------------------------------
// Task
// --------------------------------------------------------------------------

Task Task::make(const Universe& u, std::vector<SubstrateId> slots, std::vector<TaskPair> pairs) {
  for (const TaskPair& p : pairs) {
    if (u.slots_of_tuple(p.in) != slots || u.slots_of_tuple(p.out) != slots) {
      throw TupleMismatchError("task pair " + u.tuple_name(p.in) + "->" + u.tuple_name(p.out) +
                               " does not match the task substrate signature");
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].in == pairs[i - 1].in) {
      throw DuplicateInputError("duplicate input tuple " + u.tuple_name(pairs[i].in) +
                                " (tasks are deterministic: one pair per input)");
    }
  }
  Task t;
  t.slots_ = std::move(slots);
  t.pairs_ = std::move(pairs);
  return t;
}

bool Task::has_input(const AttrTuple& in) const { return output_for(in) != nullptr; }

const AttrTuple* Task::output_for(const AttrTuple& in) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), in,
                             [](const TaskPair& p, const AttrTuple& key) { return p.in < key; });
  if (it != pairs_.end() && it->in == in) return &it->out;
  return nullptr;
}

bool Task::is_identity() const {
  return std::all_of(pairs_.begin(), pairs_.end(), [](const TaskPair& p) { return p.in == p.out; });
}

std::size_t TaskHash::operator()(const Task& t) const {
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (SubstrateId s : t.slots()) mix(s + 1);
  mix(0xffffu);
  for (const TaskPair& p : t.pairs()) {
    for (AttributeId a : p.in) mix(a + 3);
    mix(0xaaaau);
    for (AttributeId a : p.out) mix(a + 7);
    mix(0xbbbbu);
  }
  return h;
}

bool is_subtask(const Task& sub, const Task& super) {
  if (sub.slots() != super.slots()) return false;
  for (const TaskPair& p : sub.pairs()) {
    const AttrTuple* out = super.output_for(p.in);
    if (!out || *out != p.out) return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// Algebra
// --------------------------------------------------------------------------

Task transpose(const Universe& u, const Task& t) {
  std::vector<TaskPair> flipped;
  flipped.reserve(t.size());
  for (const TaskPair& p : t.pairs()) flipped.push_back(TaskPair{p.out, p.in});
  std::sort(flipped.begin(), flipped.end());
  for (std::size_t i = 1; i < flipped.size(); ++i) {
    if (flipped[i].in == flipped[i - 1].in) {
      throw DuplicateOutputError("transpose undefined: output tuple " + u.tuple_name(flipped[i].in) +
                                 " occurs twice");
    }
  }
  return Task::make(u, t.slots(), std::move(flipped));
}

Task serial_compose(const Universe& u, const Task& t1, const Task& t2) {
  if (t1.slots() != t2.slots()) {
    throw CompositionMismatchError("serial composition needs matching substrates, got " +
                                   format_task(u, t1) + " ; " + format_task(u, t2));
  }
  std::vector<TaskPair> pairs;
  pairs.reserve(t1.size());
  for (const TaskPair& p : t1.pairs()) {
    const AttrTuple* next = t2.output_for(p.out);
    if (!next) {
      throw CompositionMismatchError("serial composition undefined: intermediate tuple " +
                                     u.tuple_name(p.out) + " is not an input of the second task");
    }
    pairs.push_back(TaskPair{p.in, *next});
  }
  return Task::make(u, t1.slots(), std::move(pairs));
}

Task parallel_compose(const Universe& u, const Task& t1, const Task& t2) {
  std::vector<SubstrateId> slots = t1.slots();
  slots.insert(slots.end(), t2.slots().begin(), t2.slots().end());
  std::vector<TaskPair> pairs;
  pairs.reserve(t1.size() * t2.size());
  for (const TaskPair& a : t1.pairs()) {
    for (const TaskPair& b : t2.pairs()) {
      TaskPair p;
      p.in = a.in;
      p.in.insert(p.in.end(), b.in.begin(), b.in.end());
      p.out = a.out;
      p.out.insert(p.out.end(), b.out.begin(), b.out.end());
      pairs.push_back(std::move(p));
    }
  }
  return Task::make(u, std::move(slots), std::move(pairs));
}

Task n_fold_task(const Universe& u, const Task& t, std::size_t n) {
  if (n == 0) throw Error("n_fold_task needs n >= 1");
  Task result = t;
  for (std::size_t i = 1; i < n; ++i) result = parallel_compose(u, result, t);
  return result;
}

AttrTuple n_fold_tuple(const AttrTuple& x, std::size_t n) {
  AttrTuple out;
  out.reserve(x.size() * n);
  for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), x.begin(), x.end());
  return out;
}

Task make_identity(const Universe& u, std::vector<SubstrateId> slots, const std::vector<AttrTuple>& tuples) {
  std::vector<TaskPair> pairs;
  pairs.reserve(tuples.size());
  for (const AttrTuple& t : tuples) pairs.push_back(TaskPair{t, t});
  return Task::make(u, std::move(slots), std::move(pairs));
}

std::string format_task(const Universe& u, const Task& t) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < t.pairs().size(); ++i) {
    if (i) out << ", ";
    out << u.tuple_name(t.pairs()[i].in) << "->" << u.tuple_name(t.pairs()[i].out);
  }
  out << "} on ";
  for (std::size_t i = 0; i < t.slots().size(); ++i) {
    if (i) out << "+";
    out << u.substrate(t.slots()[i]).name;
  }
  return out.str();
}

// --------------------------------------------------------------------------
// Variables
// --------------------------------------------------------------------------

Variable make_variable(const Universe& u, const std::vector<AttrTuple>& members) {
  if (members.empty()) throw Error("a variable needs at least one member");
  Variable v;
  v.slots = u.slots_of_tuple(members[0]);
  for (const AttrTuple& m : members) {
    if (u.slots_of_tuple(m) != v.slots) {
      throw TupleMismatchError("variable members live on different substrates: " + u.tuple_name(m));
    }
    for (const AttrTuple& seen : v.members) {
      if (seen == m) throw Error("variable members must be distinct: " + u.tuple_name(m));
    }
    v.members.push_back(m);
  }
  return v;
}

}  // namespace ct
