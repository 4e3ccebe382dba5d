#include "ct/possibility.hpp"

#include <algorithm>

namespace ct {

const char* to_string(Possibility p) {
  switch (p) {
    case Possibility::Possible:
      return "possible";
    case Possibility::Impossible:
      return "impossible";
    case Possibility::Unknown:
      return "unknown";
  }
  return "unknown";
}

const Fact* PossibilityRelation::set(const Task& task, Possibility status, FactOrigin origin) {
  auto [it, inserted] = facts_.try_emplace(task, Fact{status, std::move(origin)});
  if (inserted) return nullptr;
  if (it->second.status == status) return nullptr;
  return &it->second;
}

const Fact* PossibilityRelation::find(const Task& task) const {
  auto it = facts_.find(task);
  return it == facts_.end() ? nullptr : &it->second;
}

Possibility PossibilityRelation::status(const Task& task) const {
  const Fact* f = find(task);
  return f ? f->status : Possibility::Unknown;
}

std::vector<const Task*> PossibilityRelation::sorted_tasks() const {
  std::vector<const Task*> tasks;
  tasks.reserve(facts_.size());
  for (const auto& [task, fact] : facts_) tasks.push_back(&task);
  std::sort(tasks.begin(), tasks.end(), [](const Task* a, const Task* b) { return *a < *b; });
  return tasks;
}

}  // namespace ct
