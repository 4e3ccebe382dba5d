#include "ct/derive.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace ct {

namespace {

// Joint images of the target's inputs after the steps applied so far; the
// chain equals the target exactly when the images reach the target outputs.
using State = std::vector<AttrTuple>;

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::size_t h = 1469598103934665603ull;
    for (const AttrTuple& t : s)
      for (AttributeId a : t) {
        h ^= a + 0x9e37;
        h *= 1099511628211ull;
      }
    return h;
  }
};

struct Move {
  DerivationStep step;
  const Task* generator = nullptr;  // null for swaps
};

void enumerate_embeddings(const std::vector<SubstrateId>& gen_slots,
                          const std::vector<SubstrateId>& target_slots, std::size_t pos,
                          std::vector<std::size_t>& chosen, std::vector<bool>& used,
                          std::vector<std::vector<std::size_t>>& out) {
  if (pos == gen_slots.size()) {
    out.push_back(chosen);
    return;
  }
  for (std::size_t i = 0; i < target_slots.size(); ++i) {
    if (used[i] || target_slots[i] != gen_slots[pos]) continue;
    used[i] = true;
    chosen.push_back(i);
    enumerate_embeddings(gen_slots, target_slots, pos + 1, chosen, used, out);
    chosen.pop_back();
    used[i] = false;
  }
}

}  // namespace

Derivation derive_task(const Universe& u, const Task& target, const std::vector<Task>& generators,
                       std::size_t max_depth) {
  Derivation result;
  const std::vector<SubstrateId>& slots = target.slots();
  const std::size_t width = slots.size();

  auto check_flat = [&](const Task& t, const char* what) {
    for (const TaskPair& p : t.pairs())
      if (p.in.size() != t.slots().size() || p.out.size() != t.slots().size())
        throw Error(std::string(what) + " must carry one attribute per slot for the chain search");
  };
  check_flat(target, "target");
  for (const Task& g : generators) check_flat(g, "generator");

  // Move table, in a fixed order: generators by index and embedding, then
  // slot swaps in lexicographic order.
  std::vector<Move> moves;
  for (std::size_t gi = 0; gi < generators.size(); ++gi) {
    std::vector<std::vector<std::size_t>> embeddings;
    std::vector<std::size_t> chosen;
    std::vector<bool> used(width, false);
    enumerate_embeddings(generators[gi].slots(), slots, 0, chosen, used, embeddings);
    for (auto& e : embeddings)
      moves.push_back(Move{DerivationStep{"generator", gi, std::move(e)}, &generators[gi]});
  }
  for (std::size_t i = 0; i < width; ++i)
    for (std::size_t j = i + 1; j < width; ++j)
      if (slots[i] == slots[j])
        moves.push_back(Move{DerivationStep{"swap", 0, {i, j}}, nullptr});

  State start, goal;
  for (const TaskPair& p : target.pairs()) {
    start.push_back(p.in);
    goal.push_back(p.out);
  }

  struct Node {
    State state;
    std::size_t parent;
    std::size_t move;
  };
  std::vector<Node> nodes{{start, SIZE_MAX, SIZE_MAX}};
  std::unordered_set<State, StateHash> visited{start};
  std::size_t level_begin = 0, level_end = 1;
  const std::size_t max_steps = max_depth + 1;  // k steps chain with k-1 compositions
  constexpr std::size_t kMaxStates = 2000000;

  auto finish = [&](std::size_t node) {
    for (std::size_t n = node; nodes[n].parent != SIZE_MAX; n = nodes[n].parent)
      result.steps.push_back(moves[nodes[n].move].step);
    std::reverse(result.steps.begin(), result.steps.end());
    result.found = true;
    result.depth = result.steps.empty() ? 0 : result.steps.size() - 1;
    result.note = result.steps.empty() ? "target is an identity chain of length zero"
                                       : "chain found";
    return result;
  };

  if (start == goal) return finish(0);

  for (std::size_t step = 0; step < max_steps; ++step) {
    for (std::size_t n = level_begin; n < level_end; ++n) {
      ++result.explored;
      for (std::size_t mi = 0; mi < moves.size(); ++mi) {
        const Move& mv = moves[mi];
        State next = nodes[n].state;
        bool ok = true;
        if (mv.generator) {
          const auto& pos = mv.step.positions;
          for (AttrTuple& image : next) {
            AttrTuple part(pos.size());
            for (std::size_t k = 0; k < pos.size(); ++k) part[k] = image[pos[k]];
            const AttrTuple* mapped = mv.generator->output_for(part);
            if (!mapped) {
              ok = false;  // some image is outside the generator's domain
              break;
            }
            for (std::size_t k = 0; k < pos.size(); ++k) image[pos[k]] = (*mapped)[k];
          }
        } else {
          for (AttrTuple& image : next)
            std::swap(image[mv.step.positions[0]], image[mv.step.positions[1]]);
        }
        if (!ok || !visited.insert(next).second) continue;
        nodes.push_back(Node{std::move(next), n, mi});
        if (nodes.back().state == goal) return finish(nodes.size() - 1);
        if (nodes.size() > kMaxStates) {
          result.note = "state cap reached";
          result.frontier = nodes.size() - level_end;
          return result;
        }
      }
    }
    level_begin = level_end;
    level_end = nodes.size();
    if (level_begin == level_end) break;  // nothing new reachable
  }

  result.frontier = level_end - level_begin;
  result.note = "bound exhausted";
  return result;
}

}  // namespace ct
