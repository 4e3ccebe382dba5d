#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>

#include "ct/conservation.hpp"

using namespace ct;

namespace {

Task pairwise(const Universe& u, SubstrateId s, AttributeId a, AttributeId b) {
  return Task::make(u, {s}, {{{a}, {b}}});
}

// Universe with one substrate carrying n attributes x0..x{n-1}.
struct Row {
  Universe u;
  SubstrateId s;
  std::vector<AttributeId> attrs;

  explicit Row(std::size_t n) {
    s = u.add_substrate("s");
    for (std::size_t i = 0; i < n; ++i) attrs.push_back(u.add_attribute("x" + std::to_string(i), s));
  }

  std::vector<AttrTuple> tuples() const {
    std::vector<AttrTuple> out;
    for (AttributeId a : attrs) out.push_back({a});
    return out;
  }
};

EnergyLabeling ladder_labels(const Row& r, const std::vector<Rational>& values) {
  EnergyLabeling lab;
  for (std::size_t i = 0; i < values.size(); ++i) lab.values[r.attrs[i]] = values[i];
  return lab;
}

}  // namespace

TEST_CASE("tuple energies sum componentwise") {
  Row r(3);
  EnergyLabeling lab = ladder_labels(r, {Rational(0), Rational(1), Rational(5, 2)});
  CHECK(*lab.attribute_energy(r.attrs[2]) == Rational(5, 2));
  CHECK(*lab.tuple_energy({r.attrs[1], r.attrs[2]}) == Rational(7, 2));
  CHECK_FALSE(lab.tuple_energy({r.attrs[1], 999}).has_value());
}

TEST_CASE("classification groups ordered pairs by exact gap") {
  Row r(3);
  EnergyLabeling lab = ladder_labels(r, {Rational(0), Rational(1), Rational(2)});
  TaskPartition part = classify_by_labeling(r.u, r.tuples(), lab);

  // Gaps -2,-1,0,1,2 over the 9 ordered pairs (diagonal included).
  REQUIRE(part.classes.size() == 5);
  std::size_t members = 0;
  for (const TaskClass& c : part.classes) members += c.members.size();
  CHECK(members == 9);

  REQUIRE(part.zero_class().has_value());
  const TaskClass& zero = part.classes[*part.zero_class()];
  CHECK(zero.gap == Rational(0));
  CHECK(zero.members.size() == 3);  // the three self-pairs

  // Classes are ordered by gap value.
  for (std::size_t i = 1; i < part.classes.size(); ++i)
    CHECK(*part.classes[i - 1].gap < *part.classes[i].gap);
}

TEST_CASE("constant labeling collapses everything into the zero class") {
  Row r(4);
  EnergyLabeling lab = ladder_labels(r, {Rational(7), Rational(7), Rational(7), Rational(7)});
  TaskPartition part = classify_by_labeling(r.u, r.tuples(), lab);
  REQUIRE(part.classes.size() == 1);
  CHECK(part.classes[0].gap == Rational(0));
  CHECK(part.classes[0].members.size() == 16);
}

TEST_CASE("classification is antisymmetric under transposition") {
  Row r(3);
  EnergyLabeling lab = ladder_labels(r, {Rational(0), Rational(1, 3), Rational(2)});
  TaskPartition part = classify_by_labeling(r.u, r.tuples(), lab);
  std::map<Rational, std::size_t> by_gap;
  for (std::size_t i = 0; i < part.classes.size(); ++i) by_gap[*part.classes[i].gap] = i;
  for (const TaskClass& c : part.classes) {
    REQUIRE(by_gap.count(-*c.gap) == 1);
    const TaskClass& mirror = part.classes[by_gap[-*c.gap]];
    for (const Task& t : c.members) {
      Task tt = transpose(r.u, t);
      CHECK(std::find(mirror.members.begin(), mirror.members.end(), tt) != mirror.members.end());
    }
  }
}

TEST_CASE("classification requires a label for every tuple") {
  Row r(2);
  EnergyLabeling partial;
  partial.values[r.attrs[0]] = Rational(0);
  CHECK_THROWS_AS(classify_by_labeling(r.u, r.tuples(), partial), MissingLabelError);
}

TEST_CASE("class conditions accept a conserving relation and report gaps") {
  Row r(3);
  EnergyLabeling lab = ladder_labels(r, {Rational(0), Rational(1), Rational(2)});
  TaskPartition part = classify_by_labeling(r.u, r.tuples(), lab);

  // Zero-gap pairs possible, every energy-changing pair impossible.
  StatusFn conserving = [&](const Task& t) {
    const TaskPair& p = t.pairs().at(0);
    return *lab.tuple_energy(p.in) == *lab.tuple_energy(p.out) ? Possibility::Possible
                                                               : Possibility::Impossible;
  };
  ClassConditionReport rep = check_class_conditions(r.u, part, conserving);
  CHECK(rep.valid);
  CHECK(rep.unknown == 0);
  CHECK(rep.checks > 0);
  CHECK(rep.coverage() == 1.0);

  // Statuses may not split a class.
  StatusFn split = [&](const Task& t) {
    const TaskPair& p = t.pairs().at(0);
    if (p.in == AttrTuple{r.attrs[0]} && p.out == AttrTuple{r.attrs[1]}) return Possibility::Possible;
    return Possibility::Impossible;
  };
  ClassConditionReport bad = check_class_conditions(r.u, part, split);
  CHECK_FALSE(bad.valid);
  bool found_mismatch = false;
  for (const auto& v : bad.violations) found_mismatch |= v.kind == "status-mismatch";
  // 0->1 possible while its classmate 1->2 is impossible, or the nonzero class
  // holds a possible member: either way the report must carry a named witness.
  CHECK((found_mismatch || !bad.violations.empty()));

  // A possible member of a nonzero-gap class is flagged even when consistent.
  StatusFn lifting = [&](const Task& t) {
    const TaskPair& p = t.pairs().at(0);
    Rational gap = *lab.tuple_energy(p.out) - *lab.tuple_energy(p.in);
    return gap == Rational(1) ? Possibility::Possible : Possibility::Impossible;
  };
  ClassConditionReport lift = check_class_conditions(r.u, part, lifting);
  CHECK_FALSE(lift.valid);
  bool found_nonzero = false;
  for (const auto& v : lift.violations) found_nonzero |= v.kind == "nonzero-class-possible";
  CHECK(found_nonzero);
}

TEST_CASE("unknown statuses are coverage gaps, not failures") {
  Row r(2);
  EnergyLabeling lab = ladder_labels(r, {Rational(0), Rational(1)});
  TaskPartition part = classify_by_labeling(r.u, r.tuples(), lab);
  StatusFn silent = [](const Task&) { return Possibility::Unknown; };
  ClassConditionReport rep = check_class_conditions(r.u, part, silent);
  CHECK(rep.valid);
  CHECK(rep.unknown > 0);
  CHECK(rep.coverage() < 1.0);
}

TEST_CASE("class-condition checks insist on single-pair members") {
  Row r(2);
  TaskPartition part;
  Task big = Task::make(r.u, {r.s},
                        {{{r.attrs[0]}, {r.attrs[1]}}, {{r.attrs[1]}, {r.attrs[0]}}});
  part.classes.push_back({Rational(0), {big}});
  StatusFn silent = [](const Task&) { return Possibility::Unknown; };
  CHECK_THROWS_AS(check_class_conditions(r.u, part, silent), NonPairwiseTaskError);
}

// ---------------------------------------------------------------------------
// Labeling recovery
// ---------------------------------------------------------------------------

TEST_CASE("random labelings round-trip through classification exactly") {
  std::mt19937 rng(77001);
  std::uniform_int_distribution<int> nattr(2, 8);
  std::uniform_int_distribution<long> num(-12, 12);
  std::uniform_int_distribution<long> den(1, 6);

  auto started = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    Row r(static_cast<std::size_t>(nattr(rng)));
    std::vector<Rational> values;
    for (std::size_t i = 0; i < r.attrs.size(); ++i)
      values.emplace_back(num(rng), den(rng));
    EnergyLabeling lab = ladder_labels(r, values);

    TaskPartition part = classify_by_labeling(r.u, r.tuples(), lab);
    SolveOutcome out = solve_labeling(r.u, part);
    REQUIRE(out.feasible);

    // All pairwise tasks share one connected component, so the recovered
    // labeling differs from the original by a single constant: gaps match verbatim.
    REQUIRE(out.class_gaps.size() == part.classes.size());
    for (std::size_t ci = 0; ci < part.classes.size(); ++ci)
      CHECK(out.class_gaps[ci] == *part.classes[ci].gap);

    // And the recovered labels reproduce the declared values up to one shift.
    std::optional<Rational> shift;
    for (std::size_t i = 0; i < r.attrs.size(); ++i) {
      Rational got = *out.labeling.attribute_energy(r.attrs[i]);
      Rational delta = got - values[i];
      if (!shift) shift = delta;
      CHECK(delta == *shift);
    }
  }
  auto elapsed = std::chrono::steady_clock::now() - started;
  CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 10);
}

TEST_CASE("declared gaps are recovered verbatim across components") {
  // Two disconnected attribute families; each gets its own anchor.
  Universe u;
  SubstrateId s = u.add_substrate("s");
  SubstrateId t = u.add_substrate("t");
  AttributeId a0 = u.add_attribute("a0", s);
  AttributeId a1 = u.add_attribute("a1", s);
  AttributeId b0 = u.add_attribute("b0", t);
  AttributeId b1 = u.add_attribute("b1", t);

  TaskPartition part;
  part.classes.push_back({Rational(3), {pairwise(u, s, a0, a1)}});
  part.classes.push_back({Rational(5), {pairwise(u, t, b0, b1)}});
  SolveOutcome out = solve_labeling(u, part);
  REQUIRE(out.feasible);
  CHECK(out.class_gaps[0] == Rational(3));
  CHECK(out.class_gaps[1] == Rational(5));
  CHECK(*out.labeling.attribute_energy(a1) - *out.labeling.attribute_energy(a0) == Rational(3));
  CHECK(*out.labeling.attribute_energy(b1) - *out.labeling.attribute_energy(b0) == Rational(5));
  // One attribute per component anchors at zero.
  CHECK(*out.labeling.attribute_energy(a0) == Rational(0));
  CHECK(*out.labeling.attribute_energy(b0) == Rational(0));
}

TEST_CASE("undeclared gaps come out distinct and consistent") {
  Row r(3);
  TaskPartition part;
  part.classes.push_back({std::nullopt, {pairwise(r.u, r.s, r.attrs[0], r.attrs[1])}});
  part.classes.push_back({std::nullopt, {pairwise(r.u, r.s, r.attrs[1], r.attrs[2])}});
  part.classes.push_back({std::nullopt, {pairwise(r.u, r.s, r.attrs[0], r.attrs[2])}});
  SolveOutcome out = solve_labeling(r.u, part);
  REQUIRE(out.feasible);
  std::set<Rational> distinct(out.class_gaps.begin(), out.class_gaps.end());
  CHECK(distinct.size() == 3);
  // The third gap is the sum of the first two by construction.
  CHECK(out.class_gaps[2] == out.class_gaps[0] + out.class_gaps[1]);
}

TEST_CASE("mixed declared and free gaps keep the declared values") {
  Row r(4);
  TaskPartition part;
  part.classes.push_back({Rational(2), {pairwise(r.u, r.s, r.attrs[0], r.attrs[1])}});
  part.classes.push_back({std::nullopt, {pairwise(r.u, r.s, r.attrs[1], r.attrs[2])}});
  part.classes.push_back({Rational(-7, 2), {pairwise(r.u, r.s, r.attrs[3], r.attrs[0])}});
  SolveOutcome out = solve_labeling(r.u, part);
  REQUIRE(out.feasible);
  CHECK(out.class_gaps[0] == Rational(2));
  CHECK(out.class_gaps[2] == Rational(-7, 2));
  CHECK(out.class_gaps[1] != out.class_gaps[0]);
  CHECK(out.class_gaps[1] != out.class_gaps[2]);
}

TEST_CASE("within-class equations can force two classes together") {
  // Class 0 carries a self-pair, pinning its gap to zero. Class 1 contains
  // a->b, b->c and a->c, so d = 2d forces d = 0 as well: infeasible.
  Row r(3);
  TaskPartition part;
  TaskClass diag;
  diag.members = {pairwise(r.u, r.s, r.attrs[0], r.attrs[0])};
  TaskClass chain;
  chain.members = {pairwise(r.u, r.s, r.attrs[0], r.attrs[1]),
                   pairwise(r.u, r.s, r.attrs[1], r.attrs[2]),
                   pairwise(r.u, r.s, r.attrs[0], r.attrs[2])};
  part.classes = {diag, chain};

  SolveOutcome out = solve_labeling(r.u, part);
  REQUIRE_FALSE(out.feasible);
  CHECK(out.conflict_class_a != out.conflict_class_b);
  CHECK_FALSE(out.note.empty());
  CHECK_FALSE(out.witness.empty());
  // The witness names members of the colliding classes only.
  for (const WitnessConstraint& w : out.witness) {
    bool from_conflict = w.class_index == out.conflict_class_a || w.class_index == out.conflict_class_b;
    CHECK(from_conflict);
    CHECK(w.multiplier != Rational(0));
  }
}

TEST_CASE("duplicate declared gaps are rejected up front") {
  Row r(3);
  TaskPartition part;
  part.classes.push_back({Rational(3), {pairwise(r.u, r.s, r.attrs[0], r.attrs[1])}});
  part.classes.push_back({Rational(3), {pairwise(r.u, r.s, r.attrs[1], r.attrs[2])}});
  SolveOutcome out = solve_labeling(r.u, part);
  REQUIRE_FALSE(out.feasible);
  CHECK(out.conflict_class_a == 0);
  CHECK(out.conflict_class_b == 1);
  CHECK(out.note.find("both declare gap 3") != std::string::npos);
}

TEST_CASE("declared gap clashing with a structural zero is infeasible") {
  // A self-pair forces gap 0, contradicting the declared value 1.
  Row r(1);
  TaskPartition part;
  part.classes.push_back({Rational(1), {pairwise(r.u, r.s, r.attrs[0], r.attrs[0])}});
  SolveOutcome out = solve_labeling(r.u, part);
  REQUIRE_FALSE(out.feasible);
  CHECK(out.note.find("contradict") != std::string::npos);
}

TEST_CASE("declared gaps forced equal by the equations are infeasible") {
  // a->b and b->c share class 0 so E(b)-E(a) = E(c)-E(b) = g0; a->c in class 1
  // then has gap 2*g0. Declaring g0=1 and g1=2 is consistent; declaring g1=3 is not.
  Row r(3);
  TaskPartition good;
  good.classes.push_back({Rational(1), {pairwise(r.u, r.s, r.attrs[0], r.attrs[1]),
                                        pairwise(r.u, r.s, r.attrs[1], r.attrs[2])}});
  good.classes.push_back({Rational(2), {pairwise(r.u, r.s, r.attrs[0], r.attrs[2])}});
  SolveOutcome ok = solve_labeling(r.u, good);
  REQUIRE(ok.feasible);
  CHECK(ok.class_gaps == std::vector<Rational>{Rational(1), Rational(2)});

  TaskPartition bad = good;
  bad.classes[1].gap = Rational(3);
  SolveOutcome out = solve_labeling(r.u, bad);
  REQUIRE_FALSE(out.feasible);
  CHECK_FALSE(out.note.empty());
}

// ---------------------------------------------------------------------------
// Exact linear algebra helpers
// ---------------------------------------------------------------------------

TEST_CASE("forced_zero detects forms vanishing on the null space") {
  // x0 - x1 = 0 and x1 - x2 = 0 leave span{(1,1,1)}.
  LinearSystem sys;
  sys.vars = 3;
  sys.add_row({Rational(1), Rational(-1), Rational(0)});
  sys.add_row({Rational(0), Rational(1), Rational(-1)});
  auto red = sys.reduce();

  std::vector<Rational> combo;
  CHECK(forced_zero(red, {Rational(1), Rational(0), Rational(-1)}, &combo));
  CHECK(combo.size() == 2);  // x0-x2 = (x0-x1) + (x1-x2)
  CHECK_FALSE(forced_zero(red, {Rational(1), Rational(0), Rational(0)}));
  CHECK_FALSE(forced_zero(red, {Rational(1), Rational(1), Rational(1)}));
}

TEST_CASE("generic solutions avoid the listed forms") {
  LinearSystem sys;
  sys.vars = 3;
  sys.add_row({Rational(1), Rational(-1), Rational(0)});
  auto red = sys.reduce();
  std::vector<std::vector<Rational>> avoid = {
      {Rational(0), Rational(0), Rational(1)},
      {Rational(1), Rational(0), Rational(-1)},
  };
  std::vector<Rational> x = generic_solution(red, 3, avoid);
  REQUIRE(x.size() == 3);
  CHECK(x[0] == x[1]);
  CHECK(x[2] != Rational(0));
  CHECK(x[0] != x[2]);
}
