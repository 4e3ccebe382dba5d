#include "ct/closure.hpp"

#include <algorithm>

namespace ct {

const Fact* AbstractBackend::declare(const Task& task, Possibility status) {
  closed_ = false;
  return relation_.set(task, status, FactOrigin{"declared", {}});
}

std::size_t AbstractBackend::atomic_arity(const Task& t) const {
  std::size_t n = 0;
  for (SubstrateId s : t.slots()) n += u_.slots_of(s).size();
  return n;
}

void AbstractBackend::insert_derived(const Task& task, FactOrigin origin, std::vector<Task>& fresh) {
  // Subsumed facts add nothing: a possible task certifies its restrictions,
  // and everything a restriction would derive is itself a restriction of what
  // the superset derives.
  for (const auto& [stored, fact] : relation_.facts())
    if (fact.status == Possibility::Possible && is_subtask(task, stored)) return;

  for (const auto& [stored, fact] : relation_.facts()) {
    if (fact.status == Possibility::Impossible && is_subtask(stored, task)) {
      throw InconsistentModelError("derived possible task " + format_task(u_, task) +
                                       " contains the impossible " + format_task(u_, stored),
                                   task, origin, fact.origin);
    }
  }
  relation_.set(task, Possibility::Possible, std::move(origin));
  fresh.push_back(task);
}

ClosureStats AbstractBackend::close() {
  ClosureStats stats;

  // Declared contradictions first, so query order never decides.
  for (const auto& [pt, pf] : relation_.facts()) {
    if (pf.status != Possibility::Possible) continue;
    for (const auto& [it, imf] : relation_.facts()) {
      if (imf.status != Possibility::Impossible) continue;
      if (is_subtask(it, pt))
        throw InconsistentModelError("declared possible task " + format_task(u_, pt) +
                                         " contains the impossible " + format_task(u_, it),
                                     pt, pf.origin, imf.origin);
    }
  }

  std::vector<Task> possible;
  for (const Task* t : relation_.sorted_tasks())
    if (relation_.status(*t) == Possibility::Possible) possible.push_back(*t);

  if (rules_.spectator) {
    std::vector<Task> seeded;
    for (SubstrateId s = 0; s < u_.substrate_count(); ++s) {
      const auto& attrs = u_.attributes_of(s);
      if (attrs.empty()) continue;
      std::vector<AttrTuple> tuples;
      for (AttributeId a : attrs) tuples.push_back({a});
      Task id = make_identity(u_, {s}, tuples);
      if (atomic_arity(id) > rules_.max_arity) continue;
      insert_derived(id, FactOrigin{"identity", {}}, seeded);
    }
    for (Task& t : seeded) possible.push_back(std::move(t));
  }

  auto derive_pair = [&](const Task& t1, const Task& t2, std::vector<Task>& fresh) {
    if (rules_.serial && t1.slots() == t2.slots()) {
      // Maximal chaining: keep exactly the pairs of t1 whose outputs t2
      // accepts. Restrictions of possible tasks are possible, so this is the
      // strongest serial consequence of the two facts.
      std::vector<TaskPair> pairs;
      for (const TaskPair& p : t1.pairs()) {
        const AttrTuple* out = t2.output_for(p.out);
        if (out) pairs.push_back(TaskPair{p.in, *out});
      }
      if (!pairs.empty())
        insert_derived(Task::make(u_, t1.slots(), std::move(pairs)),
                       FactOrigin{"serial", {t1, t2}}, fresh);
    }
    if (rules_.parallel && atomic_arity(t1) + atomic_arity(t2) <= rules_.max_arity) {
      insert_derived(parallel_compose(u_, t1, t2), FactOrigin{"parallel", {t1, t2}}, fresh);
    }
  };

  std::vector<Task> fresh = possible;
  while (!fresh.empty()) {
    if (relation_.size() > rules_.max_facts) {
      stats.truncated = true;
      break;
    }
    ++stats.rounds;
    std::vector<Task> next;
    for (const Task& a : possible)
      for (const Task& b : fresh) {
        derive_pair(a, b, next);
        derive_pair(b, a, next);
      }
    stats.derived += next.size();
    for (const Task& t : next) possible.push_back(t);
    fresh = std::move(next);
  }
  closed_ = true;
  return stats;
}

Possibility AbstractBackend::status_of(const Task& task) const {
  if (rules_.identity_axiom && task.is_identity()) return Possibility::Possible;
  for (const auto& [stored, fact] : relation_.facts())
    if (fact.status == Possibility::Possible && is_subtask(task, stored))
      return Possibility::Possible;
  for (const auto& [stored, fact] : relation_.facts())
    if (fact.status == Possibility::Impossible && is_subtask(stored, task))
      return Possibility::Impossible;
  return Possibility::Unknown;
}

const Task* AbstractBackend::deciding_task(const Task& task, Possibility expected) const {
  const Task* best = nullptr;
  for (const auto& [stored, fact] : relation_.facts()) {
    if (fact.status != expected) continue;
    bool hits = (expected == Possibility::Possible) ? is_subtask(task, stored)
                                                    : is_subtask(stored, task);
    if (hits && (!best || stored < *best)) best = &stored;
  }
  return best;
}

Decision AbstractBackend::decide_task(const Task& task) const {
  Possibility st = status_of(task);
  std::string note;
  switch (st) {
    case Possibility::Possible:
      if (rules_.identity_axiom && task.is_identity()) {
        note = "identity task";
      } else if (const Task* t = deciding_task(task, st)) {
        note = "restriction of possible " + format_task(u_, *t);
      }
      break;
    case Possibility::Impossible:
      if (const Task* t = deciding_task(task, st))
        note = "contains impossible " + format_task(u_, *t);
      break;
    case Possibility::Unknown:
      note = "no stored fact decides it";
      break;
  }
  return Decision{st, std::move(note)};
}

std::optional<Rational> AbstractBackend::tuple_energy(const AttrTuple& tuple) const {
  return energy_.tuple_energy(tuple);
}

std::vector<Variable> AbstractBackend::candidate_variables(const std::vector<SubstrateId>& slots,
                                                           std::size_t cardinality) const {
  std::vector<Variable> out;
  for (const Variable& v : variables_)
    if (v.slots == slots && v.members.size() == cardinality) out.push_back(v);

  // For a single substrate, small attribute pools allow trying every subset.
  if (slots.size() == 1) {
    const auto& attrs = u_.attributes_of(slots[0]);
    const std::size_t n = attrs.size();
    if (cardinality >= 1 && cardinality <= n) {
      double combos = 1.0;
      for (std::size_t i = 0; i < cardinality; ++i)
        combos *= double(n - i) / double(i + 1);
      if (combos <= 64.0) {
        std::vector<std::size_t> pick(cardinality);
        for (std::size_t i = 0; i < cardinality; ++i) pick[i] = i;
        while (true) {
          Variable v;
          v.slots = slots;
          for (std::size_t i : pick) v.members.push_back({attrs[i]});
          if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
          // next lexicographic combination
          std::size_t i = cardinality;
          while (i > 0 && pick[i - 1] == n - cardinality + i - 1) --i;
          if (i == 0) break;
          ++pick[i - 1];
          for (std::size_t j = i; j < cardinality; ++j) pick[j] = pick[j - 1] + 1;
        }
      }
    }
  }
  return out;
}

}  // namespace ct
