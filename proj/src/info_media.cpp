#include "ct/info_media.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ct {

Possibility kleene_and(Possibility a, Possibility b) {
  if (a == Possibility::Impossible || b == Possibility::Impossible)
    return Possibility::Impossible;
  if (a == Possibility::Unknown || b == Possibility::Unknown) return Possibility::Unknown;
  return Possibility::Possible;
}

Possibility kleene_or(Possibility a, Possibility b) {
  if (a == Possibility::Possible || b == Possibility::Possible) return Possibility::Possible;
  if (a == Possibility::Unknown || b == Possibility::Unknown) return Possibility::Unknown;
  return Possibility::Impossible;
}

Task build_cloning_task(const Universe& u, const Variable& x, const AttrTuple& x0) {
  if (std::find(x.members.begin(), x.members.end(), x0) == x.members.end()) {
    bool nameable = std::all_of(x0.begin(), x0.end(),
                                [&](AttributeId a) { return a < u.attribute_count(); });
    throw ReceptacleNotInVariableError("receptacle " + (nameable ? u.tuple_name(x0) : "(undeclared)") +
                                       " is not a member of the variable");
  }
  std::vector<SubstrateId> slots = x.slots;
  slots.insert(slots.end(), x.slots.begin(), x.slots.end());
  std::vector<TaskPair> pairs;
  for (const AttrTuple& m : x.members) {
    AttrTuple in = m, out = m;
    in.insert(in.end(), x0.begin(), x0.end());
    out.insert(out.end(), m.begin(), m.end());
    pairs.push_back(TaskPair{std::move(in), std::move(out)});
  }
  return Task::make(u, std::move(slots), std::move(pairs));
}

Task build_permutation_task(const Universe& u, const Variable& x,
                            const std::vector<std::size_t>& perm) {
  const std::size_t n = x.members.size();
  if (perm.size() != n) throw NotABijectionError("permutation length does not match the variable");
  std::vector<bool> seen(n, false);
  for (std::size_t i : perm) {
    if (i >= n || seen[i]) throw NotABijectionError("index list is not a bijection");
    seen[i] = true;
  }
  std::vector<TaskPair> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.push_back(TaskPair{x.members[i], x.members[perm[i]]});
  return Task::make(u, x.slots, std::move(pairs));
}

InfoVariableCertificate is_information_variable(const ModelBackend& backend, const Variable& x) {
  const Universe& u = backend.universe();
  InfoVariableCertificate cert;
  cert.variable = x;
  const std::size_t n = x.members.size();
  if (n == 0) throw Error("information variable check needs a nonempty variable");

  Possibility perms = Possibility::Possible;
  auto probe = [&](Task t) {
    Possibility st = backend.decide_task(t).status;
    if (st != Possibility::Possible && cert.note.empty())
      cert.note = std::string(st == Possibility::Impossible ? "impossible: " : "undecided: ") +
                  format_task(u, t);
    cert.witnesses.push_back(TaskVerdict{std::move(t), st});
    return st;
  };

  if (n <= 6) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      perms = kleene_and(perms, probe(build_permutation_task(u, x, perm)));
      if (perms == Possibility::Impossible) break;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // A transposition and a full cycle generate everything else by serial
    // composition, which preserves possibility.
    std::vector<std::size_t> swap01(n), cycle(n);
    std::iota(swap01.begin(), swap01.end(), 0);
    std::swap(swap01[0], swap01[1]);
    for (std::size_t i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
    perms = kleene_and(probe(build_permutation_task(u, x, swap01)),
                       probe(build_permutation_task(u, x, cycle)));
  }

  Possibility cloning = Possibility::Impossible;
  if (perms != Possibility::Impossible) {
    for (const AttrTuple& x0 : x.members) {
      Task c = build_cloning_task(u, x, x0);
      Possibility st = backend.decide_task(c).status;
      cert.witnesses.push_back(TaskVerdict{c, st});
      cloning = kleene_or(cloning, st);
      if (st == Possibility::Possible) {
        cert.receptacle = x0;
        break;
      }
    }
    if (cloning != Possibility::Possible && cert.note.empty())
      cert.note = std::string(cloning == Possibility::Impossible ? "impossible" : "undecided") +
                  ": cloning for every receptacle";
  }

  cert.status = kleene_and(perms, cloning);
  if (cert.status == Possibility::Possible) cert.note = "certified";
  return cert;
}

namespace {

// Candidate pool is complete when we can afford every same-size subset of the
// substrate's attributes (single-slot variables only).
bool pool_is_exhaustive(const Universe& u, const Variable& y) {
  if (y.slots.size() != 1) return false;
  const std::size_t n = u.attributes_of(y.slots[0]).size();
  const std::size_t k = y.members.size();
  if (k > n) return true;  // nothing else to try
  double combos = 1.0;
  for (std::size_t i = 0; i < k; ++i) combos *= double(n - i) / double(i + 1);
  return combos <= 64.0;
}

}  // namespace

DistinguishabilityVerdict is_distinguishable(const ModelBackend& backend, const Variable& y) {
  const Universe& u = backend.universe();
  DistinguishabilityVerdict verdict;
  if (y.members.size() < 2) throw Error("distinguishability needs at least two members");

  if (auto direct = backend.distinguishable_shortcut(y)) {
    verdict.status = direct->status;
    verdict.note = direct->note;
    if (verdict.status == Possibility::Possible) verdict.target = y;
    return verdict;
  }

  std::vector<Variable> candidates = backend.candidate_variables(y.slots, y.members.size());
  if (std::find(candidates.begin(), candidates.end(), y) == candidates.end())
    candidates.insert(candidates.begin(), y);
  verdict.exhaustive = pool_is_exhaustive(u, y);

  const std::size_t n = y.members.size();
  bool bijections_complete = n <= 6;
  Possibility overall = Possibility::Impossible;
  for (const Variable& q : candidates) {
    InfoVariableCertificate target_cert = is_information_variable(backend, q);
    if (target_cert.status == Possibility::Impossible) continue;  // route dead either way

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<TaskPair> pairs;
      for (std::size_t i = 0; i < n; ++i)
        pairs.push_back(TaskPair{y.members[i], q.members[perm[i]]});
      Task relabel = Task::make(u, y.slots, std::move(pairs));
      Possibility route =
          kleene_and(backend.decide_task(relabel).status, target_cert.status);
      overall = kleene_or(overall, route);
      if (route == Possibility::Possible) {
        verdict.status = Possibility::Possible;
        verdict.witness = std::move(relabel);
        verdict.target = q;
        verdict.note = "maps onto an information variable";
        return verdict;
      }
    } while (bijections_complete && std::next_permutation(perm.begin(), perm.end()));
    if (!bijections_complete) verdict.exhaustive = false;
  }

  if (overall == Possibility::Impossible && !verdict.exhaustive) overall = Possibility::Unknown;
  verdict.status = overall;
  verdict.note = overall == Possibility::Impossible
                     ? "no possible map onto any information variable of this substrate"
                     : "candidate targets undecided or pool truncated";
  return verdict;
}

Variable product_variable(const Universe& u, const Variable& x1, const Variable& x2) {
  Variable p;
  p.slots = x1.slots;
  p.slots.insert(p.slots.end(), x2.slots.begin(), x2.slots.end());
  for (const AttrTuple& a : x1.members) {
    for (const AttrTuple& b : x2.members) {
      AttrTuple m = a;
      m.insert(m.end(), b.begin(), b.end());
      p.members.push_back(std::move(m));
    }
  }
  (void)u;
  return p;
}

InteroperabilityReport check_interoperability(const ModelBackend& backend, const Variable& x1,
                                              const Variable& x2) {
  InteroperabilityReport r;
  r.first = is_information_variable(backend, x1);
  r.second = is_information_variable(backend, x2);
  r.product = is_information_variable(backend, product_variable(backend.universe(), x1, x2));
  r.premise = kleene_and(r.first.status, r.second.status);
  // premise -> product, i.e. NOT premise OR product.
  Possibility not_premise = r.premise == Possibility::Possible     ? Possibility::Impossible
                            : r.premise == Possibility::Impossible ? Possibility::Possible
                                                                   : Possibility::Unknown;
  r.holds = kleene_or(not_premise, r.product.status);
  if (r.premise != Possibility::Possible)
    r.note = "inputs not both certified; nothing to enforce";
  else if (r.product.status == Possibility::Possible)
    r.note = "product variable certified";
  else if (r.product.status == Possibility::Impossible)
    r.note = "product variable refused: " + r.product.note;
  else
    r.note = "product variable undecided";
  return r;
}

std::optional<long> minimal_copies_below(double c, double epsilon, long cap) {
  if (c < 0 || epsilon <= 0) return std::nullopt;
  double acc = 1.0;
  for (long n = 1; n <= cap; ++n) {
    acc *= c;
    if (acc < epsilon) return n;
  }
  return std::nullopt;
}

AsymptoticVerdict check_asymptotic_distinguishability(const ModelBackend& backend,
                                                      const AttrTuple& x, const AttrTuple& xp,
                                                      long n, double epsilon) {
  AsymptoticVerdict v;
  v.level = n;
  if (n < 1) throw Error("asymptotic level must be at least 1");
  if (x == xp) throw Error("asymptotic distinguishability needs two distinct attributes");

  if (auto c = backend.max_cross_overlap(x, xp)) {
    v.overlap = *c;
    v.minimal_level = minimal_copies_below(*c, epsilon);
    bool at_n = v.minimal_level && *v.minimal_level <= n;
    v.status = at_n ? Possibility::Possible : Possibility::Impossible;
    std::ostringstream note;
    note << "overlap " << *c << "; " << n << " copies give " << std::pow(*c, double(n))
         << (at_n ? " < " : " >= ") << epsilon;
    v.note = note.str();
    return v;
  }

  // Abstract route: status of the distinguishing variable on k joint copies,
  // taking the best verdict over k <= n.
  Possibility overall = Possibility::Impossible;
  for (long k = 1; k <= n; ++k) {
    Variable yk = make_variable(backend.universe(),
                                {n_fold_tuple(x, std::size_t(k)), n_fold_tuple(xp, std::size_t(k))});
    DistinguishabilityVerdict dk = is_distinguishable(backend, yk);
    overall = kleene_or(overall, dk.status);
    if (dk.status == Possibility::Possible) {
      v.minimal_level = k;
      break;
    }
  }
  v.status = overall;
  v.note = overall == Possibility::Possible
               ? "distinguishable within the level bound"
               : (overall == Possibility::Impossible ? "refused at every level up to the bound"
                                                     : "undecided within the level bound");
  return v;
}

}  // namespace ct
