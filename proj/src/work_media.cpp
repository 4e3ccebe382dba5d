#include "ct/work_media.hpp"

#include <algorithm>

namespace ct {

namespace {

void require_distinct(const WorkVariable& w) {
  if (w.w_plus == w.w_zero || w.w_zero == w.w_minus || w.w_plus == w.w_minus)
    throw Error("a work variable needs three distinct attributes");
}

}  // namespace

Task build_work_axiom_task(const Universe& u, const WorkVariable& w) {
  require_distinct(w);
  std::vector<SubstrateId> slots{w.substrate, w.substrate};
  std::vector<TaskPair> pairs{
      TaskPair{{w.w_plus, w.w_zero}, {w.w_zero, w.w_plus}},
      TaskPair{{w.w_zero, w.w_zero}, {w.w_plus, w.w_minus}},
  };
  return Task::make(u, std::move(slots), std::move(pairs));
}

WorkVariableVerdict is_work_variable(const ModelBackend& backend, const WorkVariable& w,
                                     const EnergyLabeling& labeling, bool strict_same_class) {
  require_distinct(w);
  const Universe& u = backend.universe();
  WorkVariableVerdict verdict;

  AxiomCheck shift;
  shift.axiom = "shift-task";
  Task axiom_task = build_work_axiom_task(u, w);
  Decision d = backend.decide_task(axiom_task);
  shift.status = d.status;
  shift.witness = axiom_task;
  shift.note = d.note;
  verdict.axioms.push_back(shift);

  AxiomCheck pairwise;
  pairwise.axiom = "pairwise-impossible";
  pairwise.status = Possibility::Possible;  // satisfied until contradicted
  for (AttributeId m : w.members()) {
    for (AttributeId n : w.members()) {
      if (m == n) continue;
      Task t = Task::make(u, {w.substrate}, {TaskPair{{m}, {n}}});
      Possibility st = backend.decide_task(t).status;
      if (st == Possibility::Possible) {
        pairwise.status = Possibility::Impossible;
        pairwise.witness = t;
        pairwise.note = format_task(u, t) + " is possible but must not be";
        break;
      }
      if (st == Possibility::Unknown && pairwise.status == Possibility::Possible) {
        pairwise.status = Possibility::Unknown;
        pairwise.witness = t;
        pairwise.note = format_task(u, t) + " is undecided";
      }
    }
    if (pairwise.status == Possibility::Impossible) break;
  }
  verdict.axioms.push_back(pairwise);

  auto energy_of = [&](AttributeId a) {
    auto e = labeling.attribute_energy(a);
    if (!e)
      throw MissingLabelError("no energy label for work attribute " + u.attribute(a).name);
    return *e;
  };
  Rational up = energy_of(w.w_plus) - energy_of(w.w_zero);
  Rational down = energy_of(w.w_zero) - energy_of(w.w_minus);

  AxiomCheck spacing;
  if (strict_same_class) {
    // Literal reading: all six one-sided transitions in one class means every
    // gap equals every other, including each gap and its negation - so all
    // gaps are zero, which clashes with the transitions being impossible
    // alongside possible identity tasks. Report the contradiction as such.
    spacing.axiom = "same-class";
    spacing.status = Possibility::Impossible;
    spacing.note = up == 0 && down == 0
                       ? "all gaps zero: impossible transitions would share a class with "
                         "possible identity tasks"
                       : "gaps " + format_rational(up) + " and " + format_rational(-up) +
                             " cannot share a class; the literal reading admits no model";
  } else {
    spacing.axiom = "spacing";
    if (up == down && up != 0) {
      spacing.status = Possibility::Possible;
      spacing.note = "even step of " + format_rational(up);
    } else {
      spacing.status = Possibility::Impossible;
      spacing.note = up != down
                         ? "uneven spacing: raising costs " + format_rational(up) +
                               ", lowering releases " + format_rational(down) +
                               "; the shift task's second pair changes the energy sum by " +
                               format_rational(up - down)
                         : "zero step: the three attributes share one energy";
    }
  }
  verdict.axioms.push_back(spacing);

  verdict.status = Possibility::Possible;
  for (const AxiomCheck& a : verdict.axioms) {
    verdict.status = kleene_and(verdict.status, a.status);
    if (a.status != Possibility::Possible && verdict.note.empty())
      verdict.note = a.axiom + ": " + a.note;
  }
  if (verdict.status == Possibility::Possible) verdict.note = "certified";
  return verdict;
}

Task build_extraction_task(const Universe& u, const WorkExtractionSpec& spec,
                           const WorkVariable& w) {
  require_distinct(w);
  const std::size_t n = spec.source.members.size();
  if (spec.residuals.size() != n || spec.work_out.size() != n)
    throw Error("extraction spec needs one residual and one work attribute per member");
  std::vector<AttributeId> allowed = w.members();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(allowed.begin(), allowed.end(), spec.work_out[i]) == allowed.end())
      throw Error("work output " + u.attribute(spec.work_out[i]).name +
                  " is not a member of the work variable");
    for (std::size_t j = i + 1; j < n; ++j)
      if (spec.work_out[i] == spec.work_out[j])
        throw NonInjectiveWorkMapError(
            "two members raise the same work attribute " + u.attribute(spec.work_out[i]).name +
            "; the record could not tell them apart");
  }

  std::vector<SubstrateId> slots = spec.source.slots;
  slots.push_back(w.substrate);
  std::vector<TaskPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    AttrTuple in = spec.source.members[i];
    in.push_back(w.w_zero);
    AttrTuple out = spec.residuals[i];
    out.push_back(spec.work_out[i]);
    pairs.push_back(TaskPair{std::move(in), std::move(out)});
  }
  return Task::make(u, std::move(slots), std::move(pairs));
}

const char* to_string(TheoremOutcome o) {
  switch (o) {
    case TheoremOutcome::Holds: return "holds";
    case TheoremOutcome::Violation: return "violation";
    case TheoremOutcome::Undecided: return "undecided";
  }
  return "?";
}

TheoremVerdict theorem1_check(const ModelBackend& backend, const WorkExtractionSpec& spec,
                              const WorkVariable& w) {
  TheoremVerdict verdict;
  verdict.extraction_task = build_extraction_task(backend.universe(), spec, w);
  verdict.extraction_status = backend.decide_task(verdict.extraction_task).status;

  switch (verdict.extraction_status) {
    case Possibility::Impossible:
      verdict.outcome = TheoremOutcome::Holds;
      verdict.note = "extraction impossible; nothing to transfer";
      return verdict;
    case Possibility::Unknown:
      verdict.outcome = TheoremOutcome::Undecided;
      verdict.note = "extraction task undecided";
      return verdict;
    case Possibility::Possible:
      break;
  }

  if (spec.source.members.size() < 2) {
    verdict.outcome = TheoremOutcome::Holds;
    verdict.note = "single-member source is trivially read out";
    return verdict;
  }
  verdict.distinguishability = is_distinguishable(backend, spec.source);
  switch (verdict.distinguishability.status) {
    case Possibility::Possible:
      verdict.outcome = TheoremOutcome::Holds;
      verdict.note = "extraction possible and the source is distinguishable";
      break;
    case Possibility::Impossible:
      verdict.outcome = TheoremOutcome::Violation;
      verdict.note = "work extraction is possible from a source that is not distinguishable";
      break;
    case Possibility::Unknown:
      verdict.outcome = TheoremOutcome::Undecided;
      verdict.note = "source distinguishability undecided";
      break;
  }
  return verdict;
}

Task build_asymptotic_extractor_task(const Universe& u, const WorkVariable& w, std::size_t n) {
  require_distinct(w);
  if (n < 1) throw Error("the asymptotic extractor needs n >= 1");
  std::vector<SubstrateId> slots(2 * n + 1, w.substrate);

  AttrTuple in_plus{w.w_plus}, in_zero{w.w_zero};
  for (std::size_t i = 0; i < 2 * n; ++i) {
    in_plus.push_back(w.w_zero);
    in_zero.push_back(w.w_zero);
  }
  AttrTuple out_plus{w.w_plus}, out_zero{w.w_zero};
  for (std::size_t i = 0; i < n; ++i) {
    out_plus.push_back(w.w_plus);
    out_plus.push_back(w.w_minus);
    out_zero.push_back(w.w_minus);
    out_zero.push_back(w.w_plus);
  }
  return Task::make(u, std::move(slots),
                    {TaskPair{std::move(in_plus), std::move(out_plus)},
                     TaskPair{std::move(in_zero), std::move(out_zero)}});
}

AdiabaticVerdict is_adiabatically_possible(const ModelBackend& backend, const Task& pairwise,
                                           const WorkVariable& w) {
  if (pairwise.size() != 1)
    throw NonPairwiseTaskError("adiabatic possibility applies to pairwise tasks, got " +
                               format_task(backend.universe(), pairwise));
  const Universe& u = backend.universe();
  const TaskPair& p = pairwise.pairs()[0];

  AdiabaticVerdict verdict;
  verdict.status = Possibility::Impossible;
  for (AttributeId w1 : w.members()) {
    std::vector<SubstrateId> slots = pairwise.slots();
    slots.push_back(w.substrate);
    AttrTuple in = p.in, out = p.out;
    in.push_back(w.w_zero);
    out.push_back(w1);
    Task lift = Task::make(u, std::move(slots), {TaskPair{std::move(in), std::move(out)}});
    Possibility st = backend.decide_task(lift).status;
    verdict.lifts.push_back(TaskVerdict{std::move(lift), st});
    verdict.status = kleene_or(verdict.status, st);
    if (st == Possibility::Possible) {
      verdict.witness_member = w1;
      verdict.note = "lift through " + u.attribute(w1).name + " is possible";
      return verdict;
    }
  }
  verdict.note = verdict.status == Possibility::Impossible
                     ? "every lift through the work variable is impossible"
                     : "some lift is undecided";
  return verdict;
}

std::optional<SecondLawWitness> second_law_witness(const ModelBackend& backend,
                                                   const WorkVariable& w,
                                                   const std::vector<Task>& candidates) {
  for (const Task& t : candidates) {
    if (t.size() != 1) continue;
    if (t.is_identity()) continue;  // its transpose is itself
    AdiabaticVerdict fwd = is_adiabatically_possible(backend, t, w);
    if (fwd.status != Possibility::Possible) continue;
    AdiabaticVerdict rev =
        is_adiabatically_possible(backend, transpose(backend.universe(), t), w);
    if (rev.status == Possibility::Impossible)
      return SecondLawWitness{t, std::move(fwd), std::move(rev)};
  }
  return std::nullopt;
}

}  // namespace ct
