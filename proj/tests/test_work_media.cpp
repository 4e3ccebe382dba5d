#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "ct/closure.hpp"
#include "ct/quantum.hpp"
#include "ct/work_media.hpp"

using namespace ct;

namespace {

// Abstract three-level medium with the defining facts declared by hand.
struct Medium {
  AbstractBackend b;
  SubstrateId s;
  AttributeId wm, w0, wp;
  WorkVariable w;

  Medium() {
    Universe& u = b.universe_mut();
    s = u.add_substrate("s");
    wm = u.add_attribute("wm", s);
    w0 = u.add_attribute("w0", s);
    wp = u.add_attribute("wp", s);
    u.add_composite("ss", s, s);
    w = WorkVariable{s, wp, w0, wm};
    b.set_energy(wm, Rational(-1));
    b.set_energy(w0, Rational(0));
    b.set_energy(wp, Rational(1));
  }

  void declare_axioms(bool include_shift = true, bool include_pairwise = true) {
    Universe& u = b.universe_mut();
    if (include_shift) b.declare(build_work_axiom_task(u, w), Possibility::Possible);
    if (include_pairwise) {
      AttributeId all[] = {wm, w0, wp};
      for (AttributeId from : all)
        for (AttributeId to : all)
          if (from != to)
            b.declare(Task::make(u, {s}, {{{from}, {to}}}), Possibility::Impossible);
    }
  }
};

}  // namespace

TEST_CASE("the defining shift task has the two-pair shape") {
  Medium m;
  Task axiom = build_work_axiom_task(m.b.universe(), m.w);
  Task expected = Task::make(m.b.universe(), {m.s, m.s},
                             {{{m.wp, m.w0}, {m.w0, m.wp}}, {{m.w0, m.w0}, {m.wp, m.wm}}});
  CHECK(axiom == expected);
}

TEST_CASE("a declared ladder certifies as a work variable") {
  Medium m;
  m.declare_axioms();
  m.b.close();
  WorkVariableVerdict v = is_work_variable(m.b, m.w, m.b.energy());
  CHECK(v.status == Possibility::Possible);
  REQUIRE(v.axioms.size() >= 3);
  for (const AxiomCheck& ax : v.axioms) CHECK(ax.status == Possibility::Possible);
}

TEST_CASE("a missing impossibility leaves certification open") {
  Medium m;
  m.declare_axioms(true, false);
  // Only one of the six transitions declared impossible.
  m.b.declare(Task::make(m.b.universe(), {m.s}, {{{m.wp}, {m.w0}}}), Possibility::Impossible);
  m.b.close();
  WorkVariableVerdict v = is_work_variable(m.b, m.w, m.b.energy());
  CHECK(v.status == Possibility::Unknown);
  bool pairwise_open = false;
  for (const AxiomCheck& ax : v.axioms)
    pairwise_open |= ax.axiom == "pairwise-impossible" && ax.status == Possibility::Unknown;
  CHECK(pairwise_open);
}

TEST_CASE("a possible member transition refutes certification") {
  Medium m;
  m.declare_axioms(true, false);
  m.b.declare(Task::make(m.b.universe(), {m.s}, {{{m.w0}, {m.wp}}}), Possibility::Possible);
  m.b.close();
  WorkVariableVerdict v = is_work_variable(m.b, m.w, m.b.energy());
  CHECK(v.status == Possibility::Impossible);
  bool refused = false;
  for (const AxiomCheck& ax : v.axioms) {
    if (ax.axiom == "pairwise-impossible" && ax.status == Possibility::Impossible) {
      refused = true;
      CHECK(ax.witness.has_value());
    }
  }
  CHECK(refused);
}

TEST_CASE("uneven spacing refuses certification with the offending step") {
  Medium m;
  m.declare_axioms();
  m.b.close();
  EnergyLabeling uneven;
  uneven.values[m.w0] = Rational(1);
  uneven.values[m.wm] = Rational(0);
  uneven.values[m.wp] = Rational(3);
  WorkVariableVerdict v = is_work_variable(m.b, m.w, uneven);
  CHECK(v.status == Possibility::Impossible);
  bool spacing = false;
  for (const AxiomCheck& ax : v.axioms)
    spacing |= ax.axiom == "spacing" && ax.status == Possibility::Impossible;
  CHECK(spacing);
  CHECK(v.note.find("uneven spacing") != std::string::npos);
}

TEST_CASE("zero spacing is no ladder at all") {
  Medium m;
  m.declare_axioms();
  m.b.close();
  EnergyLabeling flat;
  flat.values[m.w0] = Rational(0);
  flat.values[m.wm] = Rational(0);
  flat.values[m.wp] = Rational(0);
  WorkVariableVerdict v = is_work_variable(m.b, m.w, flat);
  CHECK(v.status == Possibility::Impossible);
}

TEST_CASE("the literal same-class reading is self-contradictory") {
  Medium m;
  m.declare_axioms();
  m.b.close();
  WorkVariableVerdict v = is_work_variable(m.b, m.w, m.b.energy(), true);
  CHECK(v.status == Possibility::Impossible);
  bool same_class = false;
  for (const AxiomCheck& ax : v.axioms)
    same_class |= ax.axiom == "same-class" && ax.status == Possibility::Impossible;
  CHECK(same_class);
}

TEST_CASE("extraction tasks read the source into raised records") {
  Medium m;
  Universe& u = m.b.universe_mut();
  SubstrateId src = u.add_substrate("src");
  AttributeId x0 = u.add_attribute("x0", src);
  AttributeId x1 = u.add_attribute("x1", src);

  WorkExtractionSpec spec;
  spec.source = make_variable(u, {{x0}, {x1}});
  spec.residuals = {{x0}, {x1}};
  spec.work_out = {m.wp, m.wm};
  Task t = build_extraction_task(u, spec, m.w);
  Task expected = Task::make(u, {src, m.s},
                             {{{x0, m.w0}, {x0, m.wp}}, {{x1, m.w0}, {x1, m.wm}}});
  CHECK(t == expected);

  // Residuals may land anywhere, but the work record must be injective.
  WorkExtractionSpec merged = spec;
  merged.work_out = {m.wp, m.wp};
  CHECK_THROWS_AS(build_extraction_task(u, merged, m.w), NonInjectiveWorkMapError);

  WorkExtractionSpec stray = spec;
  stray.work_out = {m.wp};
  CHECK_THROWS_AS(build_extraction_task(u, stray, m.w), Error);
}

TEST_CASE("extraction implies distinguishability on quantum models") {
  // Random two- and three-member sources over small dimensions: whenever the
  // readout task is possible the source must come out distinguishable, and the
  // consequence check never reports a violation.
  std::mt19937 rng(5150);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> dim_dist(2, 4);
  std::uniform_int_distribution<int> count_dist(2, 3);
  std::uniform_int_distribution<int> kind(0, 2);

  auto started = std::chrono::steady_clock::now();
  int possible_runs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int dim = dim_dist(rng);
    int count = std::min(count_dist(rng), dim);

    QuantumModel m;
    SubstrateId src = m.add_system("src", dim);
    SubstrateId lad = m.add_system("lad", 3);
    m.set_hamiltonian(lad, {Rational(-1), Rational(0), Rational(1)});
    AttributeId wm = m.add_basis_state(lad, "wm", 0);
    AttributeId w0 = m.add_basis_state(lad, "w0", 1);
    AttributeId wp = m.add_basis_state(lad, "wp", 2);
    m.add_composite("slad", src, lad);
    WorkVariable w{lad, wp, w0, wm};

    std::vector<AttrTuple> members;
    bool degenerate = false;
    for (int i = 0; i < count; ++i) {
      Vec v(dim);
      if (kind(rng) == 0) {
        v.setZero();
        v[i] = 1.0;  // orthogonal draw: basis states
      } else {
        for (int k = 0; k < dim; ++k) v[k] = std::complex<double>(gauss(rng), gauss(rng));
      }
      try {
        members.push_back({m.add_state(src, "s" + std::to_string(i), v)});
      } catch (const Error&) {
        degenerate = true;
      }
    }
    if (degenerate) continue;

    WorkExtractionSpec spec;
    spec.source = make_variable(m.universe(), members);
    for (int i = 0; i < count; ++i) spec.residuals.push_back(members[std::size_t(i)]);
    spec.work_out = count == 2 ? std::vector<AttributeId>{wp, wm}
                               : std::vector<AttributeId>{wp, w0, wm};

    TheoremVerdict verdict = theorem1_check(m, spec, w);
    CHECK(verdict.outcome != TheoremOutcome::Violation);
    if (verdict.extraction_status == Possibility::Possible) {
      ++possible_runs;
      CHECK(verdict.outcome == TheoremOutcome::Holds);
      CHECK(verdict.distinguishability.status == Possibility::Possible);
    }
  }
  CHECK(possible_runs > 0);  // the orthogonal draws must actually exercise the claim
  auto elapsed = std::chrono::steady_clock::now() - started;
  CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 60);
}

TEST_CASE("non-orthogonal sources leave the readout impossible, not violated") {
  QuantumModel m;
  SubstrateId src = m.add_system("src", 2);
  SubstrateId lad = m.add_system("lad", 3);
  m.set_hamiltonian(lad, {Rational(-1), Rational(0), Rational(1)});
  AttributeId wm = m.add_basis_state(lad, "wm", 0);
  AttributeId w0 = m.add_basis_state(lad, "w0", 1);
  AttributeId wp = m.add_basis_state(lad, "wp", 2);
  m.add_composite("slad", src, lad);
  AttributeId z = m.add_basis_state(src, "z", 0);
  Vec plus(2);
  plus << 1.0, 1.0;
  AttributeId p = m.add_state(src, "p", plus);

  WorkExtractionSpec spec;
  spec.source = make_variable(m.universe(), {{z}, {p}});
  spec.residuals = {{z}, {p}};
  spec.work_out = {wp, wm};
  TheoremVerdict verdict = theorem1_check(m, spec, WorkVariable{lad, wp, w0, wm});
  CHECK(verdict.extraction_status == Possibility::Impossible);
  CHECK(verdict.outcome == TheoremOutcome::Holds);
  CHECK(verdict.note == "extraction impossible; nothing to transfer");
  CHECK(is_distinguishable(m, spec.source).status == Possibility::Impossible);
}

TEST_CASE("asymptotic extractor tasks stack shift records") {
  Medium m;
  const Universe& u = m.b.universe();
  Task ext = build_asymptotic_extractor_task(u, m.w, 1);
  REQUIRE(ext.slots().size() == 3);
  REQUIRE(ext.size() == 2);
  // One run of the shift leaves (w+,w-) behind w0 and (w-,w+)... the records
  // differ in at least one slot, which is all the construction promises.
  const AttrTuple* rec_plus = ext.output_for({m.wp, m.w0, m.w0});
  const AttrTuple* rec_zero = ext.output_for({m.w0, m.w0, m.w0});
  REQUIRE(rec_plus != nullptr);
  REQUIRE(rec_zero != nullptr);
  CHECK(*rec_plus != *rec_zero);
  CHECK((*rec_plus)[0] == m.wp);
  CHECK((*rec_zero)[0] == m.w0);

  Task ext2 = build_asymptotic_extractor_task(u, m.w, 2);
  CHECK(ext2.slots().size() == 5);
}

TEST_CASE("adiabatic possibility scans the work members") {
  Medium m;
  Universe& u = m.b.universe_mut();
  SubstrateId src = u.add_substrate("src");
  AttributeId lo = u.add_attribute("lo", src);
  AttributeId hi = u.add_attribute("hi", src);
  u.add_composite("srcs", src, m.s);

  // Dropping lo->hi costs the medium one step; no lift brings hi back down.
  Task drop = Task::make(u, {src, m.s}, {{{lo, m.w0}, {hi, m.wm}}});
  m.b.declare(drop, Possibility::Possible);
  for (AttributeId w1 : m.w.members())
    m.b.declare(Task::make(u, {src, m.s}, {{{hi, m.w0}, {lo, w1}}}), Possibility::Impossible);
  m.b.close();

  Task forward = Task::make(u, {src}, {{{lo}, {hi}}});
  AdiabaticVerdict fwd = is_adiabatically_possible(m.b, forward, m.w);
  CHECK(fwd.status == Possibility::Possible);
  CHECK(fwd.witness_member == m.wm);
  CHECK(fwd.lifts.size() == 3);

  Task reverse = Task::make(u, {src}, {{{hi}, {lo}}});
  AdiabaticVerdict rev = is_adiabatically_possible(m.b, reverse, m.w);
  CHECK(rev.status == Possibility::Impossible);

  auto witness = second_law_witness(m.b, m.w, {forward, reverse});
  REQUIRE(witness.has_value());
  CHECK(witness->task == forward);
  CHECK(witness->forward.status == Possibility::Possible);
  CHECK(witness->reverse.status == Possibility::Impossible);
}

TEST_CASE("an undecided reverse direction is no irreversibility witness") {
  Medium m;
  Universe& u = m.b.universe_mut();
  SubstrateId src = u.add_substrate("src");
  AttributeId lo = u.add_attribute("lo", src);
  AttributeId hi = u.add_attribute("hi", src);
  u.add_composite("srcs", src, m.s);

  Task drop = Task::make(u, {src, m.s}, {{{lo, m.w0}, {hi, m.wm}}});
  m.b.declare(drop, Possibility::Possible);
  // Only one reverse lift is refused; the other two stay open, so the model
  // has not yet affirmed irreversibility.
  m.b.declare(Task::make(u, {src, m.s}, {{{hi, m.w0}, {lo, m.w0}}}), Possibility::Impossible);
  m.b.close();

  Task forward = Task::make(u, {src}, {{{lo}, {hi}}});
  Task reverse = Task::make(u, {src}, {{{hi}, {lo}}});
  CHECK(is_adiabatically_possible(m.b, reverse, m.w).status == Possibility::Unknown);
  CHECK_FALSE(second_law_witness(m.b, m.w, {forward, reverse}).has_value());
}

TEST_CASE("no witness is reported when everything is reversible") {
  Medium m;
  Universe& u = m.b.universe_mut();
  SubstrateId src = u.add_substrate("src");
  AttributeId lo = u.add_attribute("lo", src);
  AttributeId hi = u.add_attribute("hi", src);
  u.add_composite("srcs", src, m.s);
  Task swap = Task::make(u, {src}, {{{lo}, {hi}}, {{hi}, {lo}}});
  m.b.declare(parallel_compose(u, swap, make_identity(u, {m.s}, {{m.w0}})),
              Possibility::Possible);
  m.b.close();

  Task forward = Task::make(u, {src}, {{{lo}, {hi}}});
  Task reverse = Task::make(u, {src}, {{{hi}, {lo}}});
  CHECK(is_adiabatically_possible(m.b, forward, m.w).status == Possibility::Possible);
  CHECK(is_adiabatically_possible(m.b, reverse, m.w).status == Possibility::Possible);
  CHECK_FALSE(second_law_witness(m.b, m.w, {forward, reverse}).has_value());
}
