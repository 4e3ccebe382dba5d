#include "ct/enumeration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "ct/info_media.hpp"
#include "ct/work_media.hpp"

namespace ct {
namespace {

struct Layout {
  std::size_t A = 0;
  std::vector<std::pair<int, int>> ordered;    // (i,j), i != j, lex
  std::vector<std::pair<int, int>> unordered;  // (i,j), i < j, lex
  std::vector<std::array<int, 3>> triples;     // ordered distinct, lex
  std::vector<std::uint64_t> radix;            // one entry per digit
  std::uint64_t total = 1;

  std::size_t sigma_at(int i, int j) const {
    return static_cast<std::size_t>(
        std::find(ordered.begin(), ordered.end(), std::make_pair(i, j)) - ordered.begin());
  }
  std::size_t pair_at(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(
        std::find(unordered.begin(), unordered.end(), std::make_pair(i, j)) -
        unordered.begin());
  }
  std::size_t swap_base() const { return ordered.size(); }
  std::size_t clone_base() const { return ordered.size() + unordered.size(); }
  std::size_t axiom_pos() const { return ordered.size() + 2 * unordered.size(); }

  int triple_value(int p, int z, int m) const {
    std::array<int, 3> t{p, z, m};
    return 1 + static_cast<int>(std::find(triples.begin(), triples.end(), t) -
                                triples.begin());
  }
};

Layout build_layout(const SearchBounds& bounds) {
  if (bounds.attributes < 2) throw BoundsTooLargeError("need at least two attributes");
  Layout lay;
  lay.A = bounds.attributes;
  int A = static_cast<int>(lay.A);
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j)
      if (i != j) lay.ordered.emplace_back(i, j);
  for (int i = 0; i < A; ++i)
    for (int j = i + 1; j < A; ++j) lay.unordered.emplace_back(i, j);
  for (int p = 0; p < A; ++p)
    for (int z = 0; z < A; ++z)
      for (int m = 0; m < A; ++m)
        if (p != z && z != m && p != m) lay.triples.push_back({p, z, m});

  double estimate = std::pow(2.0, static_cast<double>(lay.ordered.size())) *
                    std::pow(3.0, 2.0 * static_cast<double>(lay.unordered.size())) *
                    static_cast<double>(1 + lay.triples.size());
  if (estimate > 1e7) {
    std::ostringstream msg;
    msg << "about " << estimate << " models at " << lay.A
        << " attributes; the scan is capped at 1e7";
    throw BoundsTooLargeError(msg.str());
  }

  lay.radix.assign(lay.ordered.size(), 2);
  lay.radix.insert(lay.radix.end(), 2 * lay.unordered.size(), 3);
  lay.radix.push_back(1 + static_cast<std::uint64_t>(lay.triples.size()));
  for (std::uint64_t r : lay.radix) lay.total *= r;
  return lay;
}

std::vector<int> decode(const Layout& lay, std::uint64_t index) {
  std::vector<int> digits(lay.radix.size());
  for (std::size_t k = lay.radix.size(); k-- > 0;) {
    digits[k] = static_cast<int>(index % lay.radix[k]);
    index /= lay.radix[k];
  }
  return digits;
}

// The image of a digit vector under an attribute relabeling: relation digits
// move to the relabeled pair slots, the shift digit relabels its triple.
std::vector<int> permuted(const Layout& lay, const std::vector<int>& d,
                          const std::vector<int>& pi) {
  std::vector<int> out(d.size(), 0);
  for (std::size_t k = 0; k < lay.ordered.size(); ++k) {
    auto [i, j] = lay.ordered[k];
    out[lay.sigma_at(pi[i], pi[j])] = d[k];
  }
  for (std::size_t k = 0; k < lay.unordered.size(); ++k) {
    auto [i, j] = lay.unordered[k];
    out[lay.swap_base() + lay.pair_at(pi[i], pi[j])] = d[lay.swap_base() + k];
    out[lay.clone_base() + lay.pair_at(pi[i], pi[j])] = d[lay.clone_base() + k];
  }
  int v = d[lay.axiom_pos()];
  if (v > 0) {
    const auto& t = lay.triples[v - 1];
    v = lay.triple_value(pi[t[0]], pi[t[1]], pi[t[2]]);
  }
  out[lay.axiom_pos()] = v;
  return out;
}

bool is_canonical(const Layout& lay, const std::vector<int>& d) {
  std::vector<int> pi(lay.A);
  std::iota(pi.begin(), pi.end(), 0);
  while (std::next_permutation(pi.begin(), pi.end()))
    if (permuted(lay, d, pi) < d) return false;
  return true;
}

enum class Fate : std::uint8_t {
  NotCanonical,
  Contradictory,
  PrincipleFiltered,
  NoWorkVariable,
  TheoremHeld,
  Counterexample,
};

struct ModelOutcome {
  Fate fate = Fate::NotCanonical;
  std::unique_ptr<CounterexampleModel> hit;
};

// Runs one canonical model through closure, the enabled principles, and the
// work/extraction scan.
ModelOutcome evaluate(const Layout& lay, std::uint64_t index, const std::vector<int>& d,
                      const SearchBounds& bounds, const PrincipleToggles& toggles) {
  ModelOutcome out;

  // The asymptotic principle at these bounds is decided by the level-1 digits
  // alone: a pair distinguishes only through its own swap and cloning tasks,
  // and wider levels never reach an affirmative verdict under the arity bound.
  if (toggles.asymptotic) {
    for (std::size_t k = 0; k < lay.unordered.size(); ++k) {
      if (d[lay.swap_base() + k] != 2 || d[lay.clone_base() + k] != 2) {
        out.fate = Fate::PrincipleFiltered;
        return out;
      }
    }
  }

  ClosureRules rules;
  rules.max_arity = bounds.arity;
  rules.max_facts = 50000;
  AbstractBackend model(rules);
  SubstrateId s = model.universe_mut().add_substrate("cell");
  std::vector<AttributeId> attr;
  for (std::size_t i = 0; i < lay.A; ++i)
    attr.push_back(model.universe_mut().add_attribute("a" + std::to_string(i), s));
  const Universe& uni = model.universe();

  auto status_of_digit = [](int digit) {
    return digit == 1 ? Possibility::Impossible : Possibility::Possible;
  };
  for (std::size_t k = 0; k < lay.ordered.size(); ++k) {
    auto [i, j] = lay.ordered[k];
    Task t = Task::make(uni, {s}, {{{attr[i]}, {attr[j]}}});
    model.declare(t, d[k] == 1 ? Possibility::Possible : Possibility::Impossible);
  }
  for (std::size_t k = 0; k < lay.unordered.size(); ++k) {
    auto [i, j] = lay.unordered[k];
    Variable pair = make_variable(uni, {{attr[i]}, {attr[j]}});
    if (int sw = d[lay.swap_base() + k]; sw != 0)
      model.declare(build_permutation_task(uni, pair, {1, 0}), status_of_digit(sw));
    if (int cl = d[lay.clone_base() + k]; cl != 0) {
      model.declare(build_cloning_task(uni, pair, {attr[i]}), status_of_digit(cl));
      model.declare(build_cloning_task(uni, pair, {attr[j]}), status_of_digit(cl));
    }
  }
  if (int v = d[lay.axiom_pos()]; v > 0) {
    const auto& t = lay.triples[v - 1];
    WorkVariable axiom_w{s, attr[t[0]], attr[t[1]], attr[t[2]]};
    model.declare(build_work_axiom_task(uni, axiom_w), Possibility::Possible);
  }

  try {
    model.close();
  } catch (const InconsistentModelError&) {
    out.fate = Fate::Contradictory;
    return out;
  }

  PrincipleReport report = check_principles(model, bounds.n_truncation, toggles);
  if (report.any_fail() || (toggles.asymptotic && !report.asymptotic_affirmative)) {
    out.fate = Fate::PrincipleFiltered;
    return out;
  }

  std::optional<EnergyLabeling> labeling =
      report.labeling ? report.labeling : solve_model_labeling(model);
  if (!labeling) {
    out.fate = Fate::NoWorkVariable;
    return out;
  }

  out.fate = Fate::NoWorkVariable;
  std::map<std::pair<AttributeId, AttributeId>, DistinguishabilityVerdict> memo;
  auto distinguish = [&](AttributeId x, AttributeId y) -> const DistinguishabilityVerdict& {
    auto key = std::minmax(x, y);
    auto it = memo.find(key);
    if (it == memo.end())
      it = memo.emplace(key, is_distinguishable(model, make_variable(uni, {{key.first}, {key.second}})))
               .first;
    return it->second;
  };

  for (const auto& t : lay.triples) {
    WorkVariable w{s, attr[t[0]], attr[t[1]], attr[t[2]]};
    if (is_work_variable(model, w, *labeling).status != Possibility::Possible) continue;
    if (out.fate == Fate::NoWorkVariable) out.fate = Fate::TheoremHeld;

    std::vector<AttributeId> work_members = w.members();
    for (std::size_t i = 0; i < lay.A; ++i) {
      for (std::size_t j = i + 1; j < lay.A; ++j) {
        Variable source = make_variable(uni, {{attr[i]}, {attr[j]}});
        for (AttributeId fi : attr) {
          for (AttributeId fj : attr) {
            for (AttributeId wi : work_members) {
              for (AttributeId wj : work_members) {
                if (wi == wj) continue;
                WorkExtractionSpec spec{source, {{fi}, {fj}}, {wi, wj}};
                Task extraction = build_extraction_task(uni, spec, w);
                if (model.status_of(extraction) != Possibility::Possible) continue;
                const DistinguishabilityVerdict& v = distinguish(attr[i], attr[j]);
                if (v.status != Possibility::Impossible) continue;

                auto hit = std::make_unique<CounterexampleModel>();
                hit->index = index;
                hit->digits = d;
                for (const Task* ft : model.facts().sorted_tasks()) {
                  const Fact& fact = model.facts().facts().at(*ft);
                  if (fact.origin.rule != "declared") continue;
                  (fact.status == Possibility::Possible ? hit->possible : hit->impossible)
                      .push_back(format_task(uni, *ft));
                }
                std::ostringstream energies;
                for (std::size_t a = 0; a < attr.size(); ++a)
                  energies << (a ? ", " : "") << uni.attribute(attr[a]).name << "="
                           << format_rational(labeling->values.at(attr[a]));
                hit->energies = energies.str();
                hit->work_variable = "(" + uni.attribute(w.w_plus).name + ", " +
                                     uni.attribute(w.w_zero).name + ", " +
                                     uni.attribute(w.w_minus).name + ")";
                hit->source = "{" + uni.attribute(attr[i]).name + ", " +
                              uni.attribute(attr[j]).name + "}";
                hit->extraction = format_task(uni, extraction);
                hit->note = v.note;
                out.fate = Fate::Counterexample;
                out.hit = std::move(hit);
                return out;
              }
            }
          }
        }
      }
    }
  }
  return out;
}

SearchResult run_search(const SearchBounds& bounds, const PrincipleToggles& toggles,
                        bool parallel) {
  auto started = std::chrono::steady_clock::now();
  Layout lay = build_layout(bounds);

  SearchResult result;
  result.raw_models = lay.total;

  constexpr std::uint64_t kChunk = 4096;
  bool stopped = false;
  for (std::uint64_t base = 0; base < lay.total && !stopped; base += kChunk) {
    std::uint64_t count = std::min(kChunk, lay.total - base);
    std::vector<ModelOutcome> outcomes(count);

#ifdef CT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#endif
    for (std::int64_t off = 0; off < static_cast<std::int64_t>(count); ++off) {
      std::uint64_t index = base + static_cast<std::uint64_t>(off);
      std::vector<int> d = decode(lay, index);
      if (!is_canonical(lay, d)) continue;
      outcomes[static_cast<std::size_t>(off)] =
          evaluate(lay, index, d, bounds, toggles);
    }

    // Fold the chunk in index order so every counter and the reported model
    // are independent of the thread schedule.
    for (std::uint64_t off = 0; off < count && !stopped; ++off) {
      ModelOutcome& o = outcomes[off];
      if (o.fate == Fate::NotCanonical) continue;
      ++result.canonical_models;
      switch (o.fate) {
        case Fate::Contradictory: ++result.contradictory; break;
        case Fate::PrincipleFiltered: ++result.principle_filtered; break;
        case Fate::NoWorkVariable: ++result.no_work_variable; break;
        case Fate::TheoremHeld: ++result.theorem_held; break;
        case Fate::Counterexample:
          result.outcome = SearchOutcome::Counterexample;
          result.counterexample = std::move(*o.hit);
          stopped = true;
          break;
        case Fate::NotCanonical: break;
      }
    }
  }

  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace

SearchResult search_counterexample(const SearchBounds& bounds, const PrincipleToggles& toggles) {
  return run_search(bounds, toggles, true);
}

SearchResult search_counterexample_serial(const SearchBounds& bounds,
                                          const PrincipleToggles& toggles) {
  return run_search(bounds, toggles, false);
}

}  // namespace ct
