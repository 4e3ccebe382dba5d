#include "ct/principles.hpp"

#include <algorithm>
#include <sstream>

namespace ct {

const char* to_string(PrincipleStatus s) {
  switch (s) {
    case PrincipleStatus::Pass: return "pass";
    case PrincipleStatus::Fail: return "fail";
    case PrincipleStatus::Gap: return "gap";
  }
  return "?";
}

bool PrincipleReport::any_fail() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const PrincipleFinding& f) { return f.status == PrincipleStatus::Fail; });
}

const PrincipleFinding* PrincipleReport::find(const std::string& principle) const {
  for (const PrincipleFinding& f : findings)
    if (f.principle == principle) return &f;
  return nullptr;
}

std::optional<EnergyLabeling> solve_model_labeling(const AbstractBackend& model,
                                                   std::string* infeasibility_note) {
  const Universe& u = model.universe();

  std::vector<AttributeId> attrs;
  auto touch = [&attrs](const AttrTuple& t) {
    for (AttributeId a : t)
      if (std::find(attrs.begin(), attrs.end(), a) == attrs.end()) attrs.push_back(a);
  };
  for (const auto& [task, fact] : model.facts().facts()) {
    (void)fact;
    for (const TaskPair& p : task.pairs()) {
      touch(p.in);
      touch(p.out);
    }
  }
  std::sort(attrs.begin(), attrs.end());
  auto var_of = [&attrs](AttributeId a) {
    return static_cast<std::size_t>(std::lower_bound(attrs.begin(), attrs.end(), a) -
                                    attrs.begin());
  };

  // Every pair of a possible task balances; its single-pair restrictions are
  // possible, and a possible pairwise task shares a class with its transpose,
  // which pins that class at zero.
  LinearSystem system;
  system.vars = attrs.size();
  std::vector<const Task*> row_task;
  for (const Task* t : model.facts().sorted_tasks()) {
    if (model.facts().status(*t) != Possibility::Possible) continue;
    for (const TaskPair& p : t->pairs()) {
      std::vector<Rational> row(system.vars, Rational(0));
      for (AttributeId a : p.out) row[var_of(a)] += 1;
      for (AttributeId a : p.in) row[var_of(a)] -= 1;
      system.add_row(std::move(row));
      row_task.push_back(t);
    }
  }
  LinearSystem::Reduced reduced = system.reduce();

  // An impossible pairwise task cannot sit in the zero class next to the
  // (possible) identity tasks, so its energies must differ.
  std::vector<std::vector<Rational>> avoid;
  for (const Task* t : model.facts().sorted_tasks()) {
    if (model.facts().status(*t) != Possibility::Impossible || t->size() != 1) continue;
    const TaskPair& p = t->pairs()[0];
    std::vector<Rational> form(system.vars, Rational(0));
    for (AttributeId a : p.out) form[var_of(a)] += 1;
    for (AttributeId a : p.in) form[var_of(a)] -= 1;
    std::vector<Rational> combination;
    if (forced_zero(reduced, form, &combination)) {
      if (infeasibility_note) {
        std::ostringstream note;
        note << "possible tasks force " << format_task(u, *t)
             << " to conserve energy although it is impossible; forcing constraints:";
        for (std::size_t r = 0; r < combination.size(); ++r)
          if (combination[r] != 0) note << " " << format_task(u, *row_task[r]);
        *infeasibility_note = note.str();
      }
      return std::nullopt;
    }
    avoid.push_back(std::move(form));
  }

  std::vector<Rational> x = generic_solution(reduced, system.vars, avoid);
  EnergyLabeling lab;
  for (std::size_t i = 0; i < attrs.size(); ++i) lab.values[attrs[i]] = x[i];

  // Attributes untouched by any fact are unconstrained; give them values far
  // from everything so no accidental class merges occur.
  Rational spread = Rational(1000000007);
  for (AttributeId a = 0; a < u.attribute_count(); ++a) {
    if (!lab.values.count(a)) {
      lab.values[a] = spread;
      spread += 1000000007;
    }
  }
  return lab;
}

PrincipleReport check_principles(const AbstractBackend& model, long n_truncation,
                                 const PrincipleToggles& toggles) {
  PrincipleReport report;
  const Universe& u = model.universe();

  if (toggles.conservation) {
    PrincipleFinding f;
    f.principle = "conservation";
    f.status = PrincipleStatus::Pass;

    std::string note;
    bool declared_complete = !model.energy().values.empty();
    for (AttributeId a = 0; declared_complete && a < u.attribute_count(); ++a)
      declared_complete = model.energy().values.count(a) != 0;

    if (declared_complete) {
      report.labeling = model.energy();
    } else if (!model.energy().values.empty()) {
      f.status = PrincipleStatus::Gap;
      f.note = "declared energies cover only part of the attributes";
    } else {
      report.labeling = solve_model_labeling(model, &note);
      if (!report.labeling) {
        f.status = PrincipleStatus::Fail;
        f.note = note;
      }
    }

    if (report.labeling) {
      std::size_t checks = 0, unknown = 0;
      for (SubstrateId s = 0; s < u.substrate_count() && f.status == PrincipleStatus::Pass;
           ++s) {
        const auto& attr_list = u.attributes_of(s);
        if (attr_list.empty()) continue;
        std::vector<AttrTuple> tuples;
        for (AttributeId a : attr_list) tuples.push_back({a});
        TaskPartition partition = classify_by_labeling(u, tuples, *report.labeling);
        ClassConditionReport cc = check_class_conditions(
            u, partition, [&](const Task& t) { return model.status_of(t); });
        checks += cc.checks;
        unknown += cc.unknown;
        if (!cc.valid) {
          f.status = PrincipleStatus::Fail;
          f.note = "class conditions: " + cc.violations.front().kind + " on " +
                   format_task(u, cc.violations.front().witness);
        }
      }
      if (f.status == PrincipleStatus::Pass) {
        std::ostringstream ok;
        ok << "labeling found; class conditions hold (" << checks << " checks, " << unknown
           << " undecided)";
        f.note = ok.str();
      }
    }
    report.findings.push_back(std::move(f));
  }

  if (toggles.asymptotic) {
    PrincipleFinding f;
    f.principle = "asymptotic";
    f.status = PrincipleStatus::Pass;
    std::size_t pairs = 0;
    for (SubstrateId s = 0; s < u.substrate_count(); ++s) {
      const auto& attr_list = u.attributes_of(s);
      for (std::size_t i = 0; i < attr_list.size(); ++i) {
        for (std::size_t j = i + 1; j < attr_list.size(); ++j) {
          ++pairs;
          AsymptoticVerdict v = check_asymptotic_distinguishability(
              model, {attr_list[i]}, {attr_list[j]}, n_truncation, 1e-6);
          if (v.status == Possibility::Possible) continue;
          report.asymptotic_affirmative = false;
          std::string pair_name =
              u.attribute(attr_list[i]).name + "/" + u.attribute(attr_list[j]).name;
          if (v.status == Possibility::Impossible) {
            f.status = PrincipleStatus::Fail;
            f.note = pair_name + " refused at every level up to " + std::to_string(n_truncation);
          } else if (f.status == PrincipleStatus::Pass) {
            f.status = PrincipleStatus::Gap;
            f.note = pair_name + " undecided within the truncation";
          }
        }
      }
    }
    if (pairs == 0) f.note = "no attribute pairs to check";
    if (f.status == PrincipleStatus::Pass && pairs > 0)
      f.note = "all " + std::to_string(pairs) + " pairs distinguishable within the truncation";
    report.findings.push_back(std::move(f));
  }

  if (toggles.interoperability) {
    PrincipleFinding f;
    f.principle = "interoperability";
    f.status = PrincipleStatus::Pass;
    std::vector<const Variable*> certified;
    for (const Variable& v : model.variables())
      if (is_information_variable(model, v).status == Possibility::Possible)
        certified.push_back(&v);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < certified.size(); ++i) {
      for (std::size_t j = i + 1; j < certified.size(); ++j) {
        ++checked;
        InteroperabilityReport r = check_interoperability(model, *certified[i], *certified[j]);
        if (r.holds == Possibility::Impossible) {
          f.status = PrincipleStatus::Fail;
          f.note = r.note;
        } else if (r.holds == Possibility::Unknown && f.status == PrincipleStatus::Pass) {
          f.status = PrincipleStatus::Gap;
          f.note = r.note;
        }
      }
    }
    if (f.note.empty())
      f.note = checked == 0 ? "no certified variable pairs to combine"
                            : "all products certified";
    report.findings.push_back(std::move(f));
  }

  return report;
}

}  // namespace ct
