#include <doctest.h>

#include <algorithm>
#include <random>

#include "ct/core.hpp"

using namespace ct;

namespace {

// Shared playground: three atomic substrates with 2-3 attributes each.
struct Playground {
  Universe u;
  std::vector<SubstrateId> subs;

  Playground() {
    SubstrateId a = u.add_substrate("a");
    SubstrateId b = u.add_substrate("b");
    SubstrateId c = u.add_substrate("c");
    u.add_attribute("a0", a);
    u.add_attribute("a1", a);
    u.add_attribute("b0", b);
    u.add_attribute("b1", b);
    u.add_attribute("b2", b);
    u.add_attribute("c0", c);
    u.add_attribute("c1", c);
    subs = {a, b, c};
  }
};

std::vector<AttrTuple> all_tuples(const Universe& u, const std::vector<SubstrateId>& slots) {
  std::vector<AttrTuple> out{AttrTuple{}};
  for (SubstrateId s : slots) {
    std::vector<AttrTuple> next;
    for (const AttrTuple& prefix : out) {
      for (AttributeId attr : u.attributes_of(s)) {
        AttrTuple t = prefix;
        t.push_back(attr);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<SubstrateId> random_slots(const Playground& p, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> len(1, 2);
  std::uniform_int_distribution<std::size_t> pick(0, p.subs.size() - 1);
  std::vector<SubstrateId> slots;
  std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) slots.push_back(p.subs[pick(rng)]);
  return slots;
}

// A random task with distinct inputs; outputs drawn freely (may repeat).
Task random_task(const Playground& p, const std::vector<SubstrateId>& slots, std::mt19937& rng) {
  std::vector<AttrTuple> tuples = all_tuples(p.u, slots);
  std::shuffle(tuples.begin(), tuples.end(), rng);
  std::uniform_int_distribution<std::size_t> count(1, std::min<std::size_t>(tuples.size(), 4));
  std::uniform_int_distribution<std::size_t> any(0, tuples.size() - 1);
  std::size_t n = count(rng);
  std::vector<TaskPair> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.push_back({tuples[i], tuples[any(rng)]});
  return Task::make(p.u, slots, std::move(pairs));
}

// A random injective task: distinct inputs mapped to distinct outputs.
Task random_injective_task(const Playground& p, const std::vector<SubstrateId>& slots,
                           std::mt19937& rng) {
  std::vector<AttrTuple> ins = all_tuples(p.u, slots);
  std::vector<AttrTuple> outs = ins;
  std::shuffle(ins.begin(), ins.end(), rng);
  std::shuffle(outs.begin(), outs.end(), rng);
  std::uniform_int_distribution<std::size_t> count(1, std::min<std::size_t>(ins.size(), 4));
  std::size_t n = count(rng);
  std::vector<TaskPair> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.push_back({ins[i], outs[i]});
  return Task::make(p.u, slots, std::move(pairs));
}

// A random task whose input set contains every tuple in `required`.
Task random_task_covering(const Playground& p, const std::vector<SubstrateId>& slots,
                          const std::vector<AttrTuple>& required, std::mt19937& rng) {
  std::vector<AttrTuple> ins = required;
  std::sort(ins.begin(), ins.end());
  ins.erase(std::unique(ins.begin(), ins.end()), ins.end());
  std::vector<AttrTuple> pool = all_tuples(p.u, slots);
  std::uniform_int_distribution<std::size_t> any(0, pool.size() - 1);
  std::vector<TaskPair> pairs;
  for (const AttrTuple& in : ins) pairs.push_back({in, pool[any(rng)]});
  return Task::make(p.u, slots, std::move(pairs));
}

std::vector<AttrTuple> outputs_of(const Task& t) {
  std::vector<AttrTuple> outs;
  for (const TaskPair& pr : t.pairs()) outs.push_back(pr.out);
  return outs;
}

}  // namespace

TEST_CASE("task construction sorts pairs and rejects duplicates") {
  Playground p;
  SubstrateId a = p.subs[0];
  AttributeId a0 = *p.u.find_attribute("a0");
  AttributeId a1 = *p.u.find_attribute("a1");

  Task t = Task::make(p.u, {a}, {{{a1}, {a0}}, {{a0}, {a1}}});
  REQUIRE(t.size() == 2);
  CHECK(t.pairs()[0].in == AttrTuple{a0});
  CHECK(t.pairs()[1].in == AttrTuple{a1});

  CHECK_THROWS_AS(Task::make(p.u, {a}, {{{a0}, {a0}}, {{a0}, {a1}}}), DuplicateInputError);

  // Attribute from the wrong substrate and tuples of the wrong length.
  AttributeId b0 = *p.u.find_attribute("b0");
  CHECK_THROWS_AS(Task::make(p.u, {a}, {{{b0}, {a0}}}), TupleMismatchError);
  CHECK_THROWS_AS(Task::make(p.u, {a}, {{{a0, a0}, {a0, a0}}}), TupleMismatchError);
}

TEST_CASE("identity detection and subtask relation") {
  Playground p;
  SubstrateId a = p.subs[0];
  AttributeId a0 = *p.u.find_attribute("a0");
  AttributeId a1 = *p.u.find_attribute("a1");

  Task ident = make_identity(p.u, {a}, {{a0}, {a1}});
  CHECK(ident.is_identity());
  CHECK(ident.size() == 2);

  Task swap = Task::make(p.u, {a}, {{{a0}, {a1}}, {{a1}, {a0}}});
  CHECK_FALSE(swap.is_identity());

  Task half = Task::make(p.u, {a}, {{{a0}, {a1}}});
  CHECK(is_subtask(half, swap));
  CHECK_FALSE(is_subtask(swap, half));
  CHECK(is_subtask(swap, swap));

  // Same pair shape on a different substrate is not a subtask.
  SubstrateId c = p.subs[2];
  AttributeId c0 = *p.u.find_attribute("c0");
  AttributeId c1 = *p.u.find_attribute("c1");
  Task other = Task::make(p.u, {c}, {{{c0}, {c1}}});
  CHECK_FALSE(is_subtask(other, swap));
}

TEST_CASE("transpose flips pairs and rejects non-injective tasks") {
  Playground p;
  SubstrateId a = p.subs[0];
  AttributeId a0 = *p.u.find_attribute("a0");
  AttributeId a1 = *p.u.find_attribute("a1");

  Task t = Task::make(p.u, {a}, {{{a0}, {a1}}});
  Task tt = transpose(p.u, t);
  CHECK(tt.pairs()[0].in == AttrTuple{a1});
  CHECK(tt.pairs()[0].out == AttrTuple{a0});

  Task merge = Task::make(p.u, {a}, {{{a0}, {a0}}, {{a1}, {a0}}});
  CHECK_THROWS_AS(transpose(p.u, merge), DuplicateOutputError);
}

TEST_CASE("transpose is an involution on injective tasks") {
  Playground p;
  std::mt19937 rng(20260814);
  for (int i = 0; i < 1200; ++i) {
    Task t = random_injective_task(p, random_slots(p, rng), rng);
    CHECK(transpose(p.u, transpose(p.u, t)) == t);
  }
}

TEST_CASE("transpose distributes over parallel composition") {
  Playground p;
  std::mt19937 rng(481516);
  for (int i = 0; i < 1200; ++i) {
    Task t1 = random_injective_task(p, random_slots(p, rng), rng);
    Task t2 = random_injective_task(p, random_slots(p, rng), rng);
    Task lhs = transpose(p.u, parallel_compose(p.u, t1, t2));
    Task rhs = parallel_compose(p.u, transpose(p.u, t1), transpose(p.u, t2));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("serial composition is associative when defined") {
  Playground p;
  std::mt19937 rng(910111);
  for (int i = 0; i < 1200; ++i) {
    std::vector<SubstrateId> slots = random_slots(p, rng);
    Task t1 = random_task(p, slots, rng);
    Task t2 = random_task_covering(p, slots, outputs_of(t1), rng);
    Task t3 = random_task_covering(p, slots, outputs_of(t2), rng);
    Task lhs = serial_compose(p.u, serial_compose(p.u, t1, t2), t3);
    Task rhs = serial_compose(p.u, t1, serial_compose(p.u, t2, t3));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("parallel composition is associative and concatenates slots") {
  Playground p;
  std::mt19937 rng(222333);
  for (int i = 0; i < 1200; ++i) {
    Task t1 = random_task(p, random_slots(p, rng), rng);
    Task t2 = random_task(p, random_slots(p, rng), rng);
    Task t3 = random_task(p, random_slots(p, rng), rng);
    Task lhs = parallel_compose(p.u, parallel_compose(p.u, t1, t2), t3);
    Task rhs = parallel_compose(p.u, t1, parallel_compose(p.u, t2, t3));
    CHECK(lhs == rhs);
    CHECK(lhs.size() == t1.size() * t2.size() * t3.size());
    std::vector<SubstrateId> want = t1.slots();
    want.insert(want.end(), t2.slots().begin(), t2.slots().end());
    want.insert(want.end(), t3.slots().begin(), t3.slots().end());
    CHECK(lhs.slots() == want);
  }
}

TEST_CASE("serial composition mismatches are rejected") {
  Playground p;
  SubstrateId a = p.subs[0];
  SubstrateId c = p.subs[2];
  AttributeId a0 = *p.u.find_attribute("a0");
  AttributeId a1 = *p.u.find_attribute("a1");
  AttributeId c0 = *p.u.find_attribute("c0");
  AttributeId c1 = *p.u.find_attribute("c1");

  Task on_a = Task::make(p.u, {a}, {{{a0}, {a1}}});
  Task on_c = Task::make(p.u, {c}, {{{c0}, {c1}}});
  CHECK_THROWS_AS(serial_compose(p.u, on_a, on_c), CompositionMismatchError);

  // Intermediate tuple missing from the second task's inputs.
  Task a_self = Task::make(p.u, {a}, {{{a0}, {a0}}});
  CHECK_THROWS_AS(serial_compose(p.u, on_a, a_self), CompositionMismatchError);
}

TEST_CASE("n-fold tasks agree with repeated parallel composition") {
  Playground p;
  SubstrateId a = p.subs[0];
  AttributeId a0 = *p.u.find_attribute("a0");
  AttributeId a1 = *p.u.find_attribute("a1");
  Task swap = Task::make(p.u, {a}, {{{a0}, {a1}}, {{a1}, {a0}}});

  Task twice = n_fold_task(p.u, swap, 2);
  CHECK(twice == parallel_compose(p.u, swap, swap));
  Task thrice = n_fold_task(p.u, swap, 3);
  CHECK(thrice == parallel_compose(p.u, twice, swap));
  CHECK(thrice.size() == 8);
  CHECK_THROWS_AS(n_fold_task(p.u, swap, 0), Error);

  AttrTuple x{a0};
  CHECK(n_fold_tuple(x, 3) == AttrTuple{a0, a0, a0});
}

TEST_CASE("universe lookups and tuple names") {
  Playground p;
  CHECK(p.u.find_substrate("b").has_value());
  CHECK_FALSE(p.u.find_substrate("zz").has_value());
  CHECK(p.u.attributes_of(p.subs[1]).size() == 3);

  SubstrateId ab = p.u.add_composite("ab", p.subs[0], p.subs[1]);
  CHECK(p.u.slots_of(ab) == std::vector<SubstrateId>{p.subs[0], p.subs[1]});

  AttributeId a0 = *p.u.find_attribute("a0");
  AttributeId b1 = *p.u.find_attribute("b1");
  CHECK(p.u.tuple_name({a0}) == "a0");
  CHECK(p.u.tuple_name({a0, b1}) == "(a0,b1)");

  // Nested composites flatten: ((a+b)+c) has three atomic slots.
  SubstrateId abc = p.u.add_composite("abc", ab, p.subs[2]);
  CHECK(p.u.slots_of(abc).size() == 3);
}

TEST_CASE("variable construction validates members") {
  Playground p;
  AttributeId a0 = *p.u.find_attribute("a0");
  AttributeId a1 = *p.u.find_attribute("a1");
  AttributeId b0 = *p.u.find_attribute("b0");

  Variable v = make_variable(p.u, {{a0}, {a1}});
  CHECK(v.members.size() == 2);
  CHECK(v.slots == std::vector<SubstrateId>{p.subs[0]});

  CHECK_THROWS_AS(make_variable(p.u, {{a0}, {b0}}), TupleMismatchError);
  CHECK_THROWS_AS(make_variable(p.u, {{a0}, {a0}}), Error);
  CHECK_THROWS_AS(make_variable(p.u, {}), Error);
}
