#include <doctest.h>

#include "ct/derive.hpp"

using namespace ct;

namespace {

struct Grid {
  Universe u;
  SubstrateId s;
  AttributeId a0, a1;
  Task swap;

  Grid() {
    s = u.add_substrate("s");
    a0 = u.add_attribute("a0", s);
    a1 = u.add_attribute("a1", s);
    u.add_composite("ss", s, s);
    swap = Task::make(u, {s}, {{{a0}, {a1}}, {{a1}, {a0}}});
  }
};

}  // namespace

TEST_CASE("a doubled swap is found by applying the generator to each slot") {
  Grid g;
  Task target = Task::make(g.u, {g.s, g.s},
                           {{{g.a0, g.a0}, {g.a1, g.a1}},
                            {{g.a0, g.a1}, {g.a1, g.a0}},
                            {{g.a1, g.a0}, {g.a0, g.a1}},
                            {{g.a1, g.a1}, {g.a0, g.a0}}});
  Derivation d = derive_task(g.u, target, {g.swap}, 3);
  REQUIRE(d.found);
  REQUIRE(d.steps.size() == 2);
  CHECK(d.depth == 1);
  CHECK(d.steps[0].kind == "generator");
  CHECK(d.steps[0].generator == 0);
  CHECK(d.steps[0].positions == std::vector<std::size_t>{0});
  CHECK(d.steps[1].kind == "generator");
  CHECK(d.steps[1].positions == std::vector<std::size_t>{1});
}

TEST_CASE("restrictions of one application need a single step") {
  Grid g;
  Task target = Task::make(g.u, {g.s, g.s}, {{{g.a0, g.a0}, {g.a1, g.a0}}});
  Derivation d = derive_task(g.u, target, {g.swap}, 2);
  REQUIRE(d.found);
  CHECK(d.steps.size() == 1);
  CHECK(d.depth == 0);
  CHECK(d.steps[0].positions == std::vector<std::size_t>{0});
}

TEST_CASE("slot swaps count as moves") {
  Grid g;
  Universe& u = g.u;
  // Move the left value to the right while resetting the left: reachable by
  // swapping the two slots when their contents differ.
  Task target = Task::make(u, {g.s, g.s},
                           {{{g.a0, g.a1}, {g.a1, g.a0}}, {{g.a1, g.a0}, {g.a0, g.a1}}});
  Derivation d = derive_task(u, target, {}, 2);
  REQUIRE(d.found);
  REQUIRE(d.steps.size() == 1);
  CHECK(d.steps[0].kind == "swap");
  CHECK(d.steps[0].positions == std::vector<std::size_t>{0, 1});
}

TEST_CASE("unreachable targets report the exploration effort") {
  Grid g;
  // One-sided transition: no chain of swaps reaches it.
  Task target = Task::make(g.u, {g.s}, {{{g.a0}, {g.a1}}, {{g.a1}, {g.a1}}});
  Derivation d = derive_task(g.u, target, {g.swap}, 3);
  CHECK_FALSE(d.found);
  CHECK(d.explored > 0);
  CHECK_FALSE(d.note.empty());
}

TEST_CASE("the search is deterministic") {
  Grid g;
  Task target = Task::make(g.u, {g.s, g.s},
                           {{{g.a0, g.a0}, {g.a1, g.a1}},
                            {{g.a0, g.a1}, {g.a1, g.a0}},
                            {{g.a1, g.a0}, {g.a0, g.a1}},
                            {{g.a1, g.a1}, {g.a0, g.a0}}});
  Derivation first = derive_task(g.u, target, {g.swap}, 3);
  Derivation second = derive_task(g.u, target, {g.swap}, 3);
  REQUIRE(first.found);
  CHECK(first.steps.size() == second.steps.size());
  for (std::size_t i = 0; i < first.steps.size(); ++i) {
    CHECK(first.steps[i].kind == second.steps[i].kind);
    CHECK(first.steps[i].generator == second.steps[i].generator);
    CHECK(first.steps[i].positions == second.steps[i].positions);
  }
  CHECK(first.explored == second.explored);
}

TEST_CASE("the depth bound is honoured") {
  Grid g;
  Derivation hit = derive_task(g.u, g.swap, {g.swap}, 0);
  CHECK(hit.found);
  CHECK(hit.depth == 0);

  // Identity targets are chains of length zero by convention.
  Task ident = Task::make(g.u, {g.s}, {{{g.a0}, {g.a0}}});
  Derivation trivial = derive_task(g.u, ident, {g.swap}, 0);
  CHECK(trivial.found);
  CHECK(trivial.steps.empty());

  // The doubled swap needs two applications, one more than depth 0 allows.
  Task target = Task::make(g.u, {g.s, g.s},
                           {{{g.a0, g.a0}, {g.a1, g.a1}},
                            {{g.a0, g.a1}, {g.a1, g.a0}},
                            {{g.a1, g.a0}, {g.a0, g.a1}},
                            {{g.a1, g.a1}, {g.a0, g.a0}}});
  Derivation miss = derive_task(g.u, target, {g.swap}, 0);
  CHECK_FALSE(miss.found);
  CHECK(miss.note == "bound exhausted");
  Derivation deeper = derive_task(g.u, target, {g.swap}, 1);
  CHECK(deeper.found);
}
