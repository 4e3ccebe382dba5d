#include "ct/conservation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace ct {

// --------------------------------------------------------------------------
// EnergyLabeling
// --------------------------------------------------------------------------

std::optional<Rational> EnergyLabeling::attribute_energy(AttributeId a) const {
  auto it = values.find(a);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

std::optional<Rational> EnergyLabeling::tuple_energy(const AttrTuple& t) const {
  Rational sum = 0;
  for (AttributeId a : t) {
    auto e = attribute_energy(a);
    if (!e) return std::nullopt;
    sum += *e;
  }
  return sum;
}

std::optional<std::size_t> TaskPartition::zero_class() const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].gap && *classes[i].gap == 0) return i;
  return std::nullopt;
}

// --------------------------------------------------------------------------
// classify_by_labeling
// --------------------------------------------------------------------------

TaskPartition classify_by_labeling(const Universe& u, const std::vector<AttrTuple>& attrs,
                                   const EnergyLabeling& labeling) {
  if (attrs.empty()) return {};
  std::vector<SubstrateId> slots = u.slots_of_tuple(attrs[0]);
  std::vector<Rational> energy(attrs.size());
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (u.slots_of_tuple(attrs[i]) != slots)
      throw TupleMismatchError("classification needs attributes of one substrate, got " +
                               u.tuple_name(attrs[i]));
    auto e = labeling.tuple_energy(attrs[i]);
    if (!e) throw MissingLabelError("no energy label for attribute " + u.tuple_name(attrs[i]));
    energy[i] = *e;
  }

  std::map<Rational, std::vector<Task>> by_gap;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    for (std::size_t j = 0; j < attrs.size(); ++j) {
      Task t = Task::make(u, slots, {TaskPair{attrs[i], attrs[j]}});
      by_gap[energy[j] - energy[i]].push_back(std::move(t));
    }
  }

  TaskPartition partition;
  for (auto& [gap, members] : by_gap) {
    std::sort(members.begin(), members.end());
    partition.classes.push_back(TaskClass{gap, std::move(members)});
  }
  return partition;
}

// --------------------------------------------------------------------------
// check_class_conditions
// --------------------------------------------------------------------------

ClassConditionReport check_class_conditions(const Universe& u, const TaskPartition& partition,
                                            const StatusFn& status) {
  ClassConditionReport report;

  for (std::size_t ci = 0; ci < partition.classes.size(); ++ci) {
    const TaskClass& cls = partition.classes[ci];
    for (const Task& t : cls.members) {
      if (t.size() != 1)
        throw NonPairwiseTaskError("class conditions apply to pairwise tasks, got " +
                                   format_task(u, t));
    }

    // Condition (i): members and their transposes share one status.
    const Task* possible_witness = nullptr;
    const Task* impossible_witness = nullptr;
    std::vector<Task> group;
    group.reserve(cls.members.size() * 2);
    for (const Task& t : cls.members) {
      group.push_back(t);
      group.push_back(transpose(u, t));
    }
    for (const Task& t : group) {
      ++report.checks;
      switch (status(t)) {
        case Possibility::Possible:
          if (!possible_witness) possible_witness = &t;
          break;
        case Possibility::Impossible:
          if (!impossible_witness) impossible_witness = &t;
          break;
        case Possibility::Unknown:
          ++report.unknown;
          break;
      }
    }
    if (possible_witness && impossible_witness) {
      report.violations.push_back(ClassConditionViolation{
          "status-mismatch", ci, *impossible_witness,
          "class mixes a possible member (" + format_task(u, *possible_witness) +
              ") with an impossible one"});
    }

    // Separation consequence: only the gap-0 class may hold a possible task
    // together with its (necessarily same-gap) transpose. A class with a
    // nonzero gap, or one not closed under transposition, must be all
    // impossible.
    bool nonzero = false;
    if (cls.gap) {
      nonzero = *cls.gap != 0;
    } else {
      for (const Task& t : cls.members) {
        Task tt = transpose(u, t);
        if (std::find(cls.members.begin(), cls.members.end(), tt) == cls.members.end()) {
          nonzero = true;
          break;
        }
      }
    }
    if (nonzero && possible_witness) {
      report.violations.push_back(ClassConditionViolation{
          "nonzero-class-possible", ci, *possible_witness,
          "a class separated from the zero-gap class contains a possible task"});
    }

    // Condition (ii): for any two members, composing one with the other's
    // transpose side by side is possible, and so is the transpose of that.
    for (const Task& t1 : cls.members) {
      for (const Task& t2 : cls.members) {
        Task product = parallel_compose(u, t1, transpose(u, t2));
        for (const Task& probe : {product, transpose(u, product)}) {
          ++report.checks;
          switch (status(probe)) {
            case Possibility::Possible:
              break;
            case Possibility::Impossible:
              report.violations.push_back(ClassConditionViolation{
                  "product-impossible", ci, probe,
                  "pair product of same-class tasks is impossible"});
              break;
            case Possibility::Unknown:
              ++report.unknown;
              break;
          }
        }
      }
    }
  }

  report.valid = report.violations.empty();
  return report;
}

// --------------------------------------------------------------------------
// Exact linear algebra
// --------------------------------------------------------------------------

void LinearSystem::add_row(std::vector<Rational> row) {
  if (row.size() != vars) throw Error("linear system row width mismatch");
  rows.push_back(std::move(row));
}

LinearSystem::Reduced LinearSystem::reduce(bool with_provenance) const {
  Reduced red;
  red.pivot_of_col.assign(vars, std::nullopt);
  std::vector<std::vector<Rational>> work = rows;
  std::vector<std::vector<Rational>> prov;
  if (with_provenance) {
    prov.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      prov[i].assign(rows.size(), Rational(0));
      prov[i][i] = 1;
    }
  }

  std::size_t rank = 0;
  for (std::size_t col = 0; col < vars && rank < work.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < work.size() && work[pivot][col] == 0) ++pivot;
    if (pivot == work.size()) continue;
    std::swap(work[pivot], work[rank]);
    if (with_provenance) std::swap(prov[pivot], prov[rank]);

    Rational inv = Rational(1) / work[rank][col];
    for (auto& v : work[rank]) v *= inv;
    if (with_provenance)
      for (auto& v : prov[rank]) v *= inv;

    for (std::size_t r = 0; r < work.size(); ++r) {
      if (r == rank || work[r][col] == 0) continue;
      Rational factor = work[r][col];
      for (std::size_t c = 0; c < vars; ++c) work[r][c] -= factor * work[rank][c];
      if (with_provenance)
        for (std::size_t c = 0; c < prov[r].size(); ++c) prov[r][c] -= factor * prov[rank][c];
    }
    red.pivot_col.push_back(col);
    red.pivot_of_col[col] = rank;
    ++rank;
  }

  work.resize(rank);
  if (with_provenance) prov.resize(rank);
  red.rows = std::move(work);
  red.provenance = std::move(prov);
  return red;
}

bool forced_zero(const LinearSystem::Reduced& reduced, const std::vector<Rational>& form,
                 std::vector<Rational>* combination) {
  std::vector<Rational> residual = form;
  std::vector<Rational> combo;
  if (!reduced.provenance.empty()) combo.assign(reduced.provenance[0].size(), Rational(0));
  for (std::size_t r = 0; r < reduced.rows.size(); ++r) {
    std::size_t col = reduced.pivot_col[r];
    if (residual[col] == 0) continue;
    Rational factor = residual[col];
    for (std::size_t c = 0; c < residual.size(); ++c) residual[c] -= factor * reduced.rows[r][c];
    if (!combo.empty())
      for (std::size_t c = 0; c < combo.size(); ++c) combo[c] += factor * reduced.provenance[r][c];
  }
  bool zero = std::all_of(residual.begin(), residual.end(), [](const Rational& v) { return v == 0; });
  if (zero && combination) *combination = std::move(combo);
  return zero;
}

std::vector<Rational> solution_at(const LinearSystem::Reduced& reduced, std::size_t vars,
                                  long m) {
  // Free variables take values 1, M, M^2, ...; back-substitution fills the rest.
  std::vector<Rational> x(vars, Rational(0));
  Rational power = 1;
  for (std::size_t c = 0; c < vars; ++c) {
    if (reduced.pivot_of_col[c]) continue;
    x[c] = power;
    power *= m;
  }
  for (std::size_t r = 0; r < reduced.rows.size(); ++r) {
    std::size_t pc = reduced.pivot_col[r];
    Rational value = 0;
    for (std::size_t c = pc + 1; c < vars; ++c)
      if (reduced.rows[r][c] != 0) value -= reduced.rows[r][c] * x[c];
    x[pc] = value;
  }
  return x;
}

std::vector<Rational> generic_solution(const LinearSystem::Reduced& reduced, std::size_t vars,
                                       const std::vector<std::vector<Rational>>& avoid_zero_forms) {
  // Each avoid-form is a nonzero polynomial in M under the power assignment,
  // so some small M clears every hyperplane.
  for (long m = 1; m <= 100000; ++m) {
    std::vector<Rational> x = solution_at(reduced, vars, m);
    bool ok = true;
    for (const auto& form : avoid_zero_forms) {
      Rational value = 0;
      for (std::size_t c = 0; c < vars; ++c)
        if (form[c] != 0) value += form[c] * x[c];
      if (value == 0) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  throw Error("generic point search exhausted (inconsistent avoid-forms?)");
}

// --------------------------------------------------------------------------
// solve_labeling
// --------------------------------------------------------------------------

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

SolveOutcome solve_labeling(const Universe& u, const TaskPartition& partition) {
  SolveOutcome out;

  // Variable layout: one per attribute that occurs, then one gap per class.
  std::vector<AttributeId> attrs;
  auto touch = [&attrs](const AttrTuple& t) {
    for (AttributeId a : t)
      if (std::find(attrs.begin(), attrs.end(), a) == attrs.end()) attrs.push_back(a);
  };
  for (const TaskClass& cls : partition.classes) {
    for (const Task& t : cls.members) {
      if (t.size() != 1)
        throw NonPairwiseTaskError("labeling recovery applies to pairwise tasks, got " +
                                   format_task(u, t));
      touch(t.pairs()[0].in);
      touch(t.pairs()[0].out);
    }
  }
  std::sort(attrs.begin(), attrs.end());
  auto attr_var = [&attrs](AttributeId a) {
    return static_cast<std::size_t>(std::lower_bound(attrs.begin(), attrs.end(), a) - attrs.begin());
  };
  const std::size_t n_attr = attrs.size();
  const std::size_t n_vars = n_attr + partition.classes.size();

  // Declared gap values are authoritative; two classes declaring one value can
  // never be separated by any labeling.
  {
    std::map<Rational, std::size_t> declared;
    for (std::size_t ci = 0; ci < partition.classes.size(); ++ci) {
      if (!partition.classes[ci].gap) continue;
      auto [it, fresh] = declared.emplace(*partition.classes[ci].gap, ci);
      if (fresh) continue;
      out.feasible = false;
      out.conflict_class_a = it->second;
      out.conflict_class_b = ci;
      std::ostringstream note;
      note << "classes " << it->second << " and " << ci << " both declare gap "
           << format_rational(*partition.classes[ci].gap) << "; no labeling separates them";
      out.note = note.str();
      return out;
    }
  }

  LinearSystem system;
  system.vars = n_vars;
  std::vector<std::pair<std::size_t, const Task*>> row_source;  // class index + member
  for (std::size_t ci = 0; ci < partition.classes.size(); ++ci) {
    for (const Task& t : partition.classes[ci].members) {
      std::vector<Rational> row(n_vars, Rational(0));
      for (AttributeId a : t.pairs()[0].out) row[attr_var(a)] += 1;
      for (AttributeId a : t.pairs()[0].in) row[attr_var(a)] -= 1;
      row[n_attr + ci] -= 1;
      system.add_row(std::move(row));
      row_source.emplace_back(ci, &t);
    }
  }
  LinearSystem::Reduced reduced = system.reduce(false);

  // Forced-equal gaps mean the partition cannot be reproduced by any labeling.
  // Gaps separated at either probe point below are provably not forced equal,
  // so the exact elimination runs only for the pairs that collide at both, and
  // the provenance-carrying reduction is recomputed only for those.
  std::vector<Rational> probe2 = solution_at(reduced, n_vars, 2);
  std::vector<Rational> probe3 = solution_at(reduced, n_vars, 3);
  std::optional<LinearSystem::Reduced> traced;
  for (std::size_t a = 0; a < partition.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < partition.classes.size(); ++b) {
      if (probe2[n_attr + a] != probe2[n_attr + b]) continue;
      if (probe3[n_attr + a] != probe3[n_attr + b]) continue;
      std::vector<Rational> form(n_vars, Rational(0));
      form[n_attr + a] = 1;
      form[n_attr + b] = -1;
      std::vector<Rational> combination;
      if (!traced) traced = system.reduce(true);
      if (!forced_zero(*traced, form, &combination)) continue;

      // Greedy minimization: drop any constraint whose removal keeps the
      // forcing, so the witness is an irredundant cycle.
      std::vector<std::size_t> support;
      for (std::size_t r = 0; r < combination.size(); ++r)
        if (combination[r] != 0) support.push_back(r);
      bool shrunk = true;
      while (shrunk) {
        shrunk = false;
        for (std::size_t drop = 0; drop < support.size(); ++drop) {
          LinearSystem sub;
          sub.vars = n_vars;
          for (std::size_t r : support)
            if (r != support[drop]) sub.add_row(system.rows[r]);
          std::vector<Rational> sub_combo;
          if (forced_zero(sub.reduce(), form, &sub_combo)) {
            std::vector<std::size_t> next;
            std::size_t k = 0;
            for (std::size_t r : support) {
              if (r == support[drop]) continue;
              if (sub_combo[k] != 0) next.push_back(r);
              ++k;
            }
            support = std::move(next);
            shrunk = true;
            break;
          }
        }
      }
      // Recompute exact multipliers on the minimal support.
      LinearSystem minimal;
      minimal.vars = n_vars;
      for (std::size_t r : support) minimal.add_row(system.rows[r]);
      std::vector<Rational> multipliers;
      forced_zero(minimal.reduce(), form, &multipliers);

      out.feasible = false;
      out.conflict_class_a = a;
      out.conflict_class_b = b;
      for (std::size_t k = 0; k < support.size(); ++k) {
        if (multipliers[k] == 0) continue;
        out.witness.push_back(WitnessConstraint{*row_source[support[k]].second,
                                                row_source[support[k]].first, multipliers[k]});
      }
      std::ostringstream note;
      note << "within-class constraints force class " << a << " and class " << b
           << " onto one gap; no labeling separates them";
      out.note = note.str();
      return out;
    }
  }

  // Extend with a unit column so declared gap values pin their class
  // variables: gap_ci − g·unit = 0, rescaled afterwards so unit = 1 and the
  // declared values come out verbatim.
  const std::size_t one_col = n_vars;
  LinearSystem pinned;
  pinned.vars = n_vars + 1;
  // The echelon rows span the same space as the originals and the reduced form
  // of a row space is unique, so seeding with them changes nothing but speed.
  for (const auto& row : reduced.rows) {
    std::vector<Rational> r = row;
    r.push_back(Rational(0));
    pinned.add_row(std::move(r));
  }
  for (std::size_t ci = 0; ci < partition.classes.size(); ++ci) {
    if (!partition.classes[ci].gap) continue;
    std::vector<Rational> row(n_vars + 1, Rational(0));
    row[n_attr + ci] = 1;
    row[one_col] = -*partition.classes[ci].gap;
    pinned.add_row(std::move(row));
  }
  LinearSystem::Reduced pinned_reduced = pinned.reduce(false);

  std::vector<Rational> one_form(n_vars + 1, Rational(0));
  one_form[one_col] = 1;
  if (forced_zero(pinned_reduced, one_form)) {
    out.feasible = false;
    out.note = "declared gap values contradict the within-class equations";
    return out;
  }
  std::vector<Rational> pinned2 = solution_at(pinned_reduced, n_vars + 1, 2);
  std::vector<Rational> pinned3 = solution_at(pinned_reduced, n_vars + 1, 3);
  for (std::size_t a = 0; a < partition.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < partition.classes.size(); ++b) {
      if (pinned2[n_attr + a] != pinned2[n_attr + b] ||
          pinned3[n_attr + a] != pinned3[n_attr + b])
        continue;
      std::vector<Rational> form(n_vars + 1, Rational(0));
      form[n_attr + a] = 1;
      form[n_attr + b] = -1;
      if (!forced_zero(pinned_reduced, form)) continue;
      out.feasible = false;
      out.conflict_class_a = a;
      out.conflict_class_b = b;
      std::ostringstream note;
      note << "declared gap values force class " << a << " and class " << b
           << " onto one gap; no labeling separates them";
      out.note = note.str();
      return out;
    }
  }

  // Feasible: pick a point keeping all class gaps pairwise distinct, then
  // rescale to unit = 1.
  std::vector<std::vector<Rational>> avoid;
  for (std::size_t a = 0; a < partition.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < partition.classes.size(); ++b) {
      std::vector<Rational> form(n_vars + 1, Rational(0));
      form[n_attr + a] = 1;
      form[n_attr + b] = -1;
      avoid.push_back(std::move(form));
    }
  }
  avoid.push_back(one_form);
  std::vector<Rational> x = generic_solution(pinned_reduced, n_vars + 1, avoid);
  const Rational unit = x[one_col];
  for (Rational& v : x) v /= unit;

  // Anchor the smallest attribute of each connected component at zero.
  DisjointSet components(n_attr);
  for (const TaskClass& cls : partition.classes) {
    for (const Task& t : cls.members) {
      const auto& p = t.pairs()[0];
      std::size_t first = p.in.empty() ? attr_var(p.out[0]) : attr_var(p.in[0]);
      for (AttributeId a : p.in) components.unite(first, attr_var(a));
      for (AttributeId a : p.out) components.unite(first, attr_var(a));
    }
  }
  std::vector<std::optional<Rational>> shift(n_attr);
  for (std::size_t i = 0; i < n_attr; ++i) {
    std::size_t root = components.find(i);
    if (!shift[root]) shift[root] = x[i];  // first (smallest) member anchors
  }
  for (std::size_t i = 0; i < n_attr; ++i)
    out.labeling.values[attrs[i]] = x[i] - *shift[components.find(i)];

  for (std::size_t ci = 0; ci < partition.classes.size(); ++ci)
    out.class_gaps.push_back(x[n_attr + ci]);
  out.feasible = true;
  return out;
}

}  // namespace ct
