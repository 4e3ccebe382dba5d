#include "ct/engine.hpp"

#include <cxxabi.h>

#include <cstdlib>
#include <typeinfo>

#include "ct/derive.hpp"
#include "ct/info_media.hpp"
#include "ct/principles.hpp"
#include "ct/report.hpp"
#include "ct/work_media.hpp"

namespace ct {
namespace {

using nlohmann::json;

SubstrateId sid(const Universe& u, const std::string& name) {
  return u.find_substrate(name).value();
}
AttributeId aid(const Universe& u, const std::string& name) {
  return u.find_attribute(name).value();
}
AttrTuple tuple_of(const Universe& u, const std::vector<std::string>& names) {
  AttrTuple t;
  for (const auto& n : names) t.push_back(aid(u, n));
  return t;
}
Task task_of(const Universe& u, const TaskLiteral& lit) {
  std::vector<TaskPair> pairs;
  for (const auto& [in, out] : lit.pairs)
    pairs.push_back({tuple_of(u, in), tuple_of(u, out)});
  // A composite name stands for its primitive slot expansion.
  return Task::make(u, u.substrate(sid(u, lit.substrate)).slots, std::move(pairs));
}

// "ct::MissingLabelError" -> "MissingLabel": the name a report shows.
std::string error_type(const std::exception& e) {
  int status = 0;
  char* demangled = abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status);
  std::string name = (status == 0 && demangled) ? demangled : typeid(e).name();
  std::free(demangled);
  if (auto pos = name.rfind("::"); pos != std::string::npos) name = name.substr(pos + 2);
  if (name.size() > 5 && name.compare(name.size() - 5, 5, "Error") == 0)
    name.resize(name.size() - 5);
  return name;
}

json error_json(const std::exception& e) {
  return json{{"type", error_type(e)}, {"message", e.what()}};
}

struct Runner {
  BuiltModel& model;
  const EngineOptions& opts;
  const Universe& u;
  ModelBackend& backend;

  Runner(BuiltModel& m, const EngineOptions& o)
      : model(m), opts(o), u(m.universe()), backend(m.backend()) {}

  void guard(const AttrTuple& t) const {
    if (model.multi_state.empty()) return;
    for (AttributeId a : t)
      if (model.multi_state.count(u.attribute(a).name))
        throw UnsupportedAttributeError("attribute '" + u.attribute(a).name +
                                        "' carries several states; task decisions need "
                                        "singleton-state attributes");
  }
  void guard(const Variable& v) const {
    for (const AttrTuple& m : v.members) guard(m);
  }
  void guard(const Task& t) const {
    for (const TaskPair& p : t.pairs()) {
      guard(p.in);
      guard(p.out);
    }
  }

  const Variable& variable(const std::string& name) const { return model.variables.at(name); }

  WorkVariable work_of(const std::vector<std::string>& names) const {
    AttributeId wp = aid(u, names[0]), w0 = aid(u, names[1]), wm = aid(u, names[2]);
    SubstrateId s = u.attribute(wp).substrate;
    if (u.attribute(w0).substrate != s || u.attribute(wm).substrate != s)
      throw EngineError("work attributes " + names[0] + ", " + names[1] + ", " + names[2] +
                        " must share one substrate");
    guard({wp, w0, wm});
    return WorkVariable{s, wp, w0, wm};
  }

  EnergyLabeling labeling_for(const std::vector<AttributeId>& attrs) const {
    if (model.quantum) return model.quantum->induce_energy_labeling(attrs);
    const EnergyLabeling& declared = model.abstract->energy();
    bool covered = true;
    for (AttributeId a : attrs) covered = covered && declared.values.count(a);
    if (covered && !attrs.empty()) return declared;
    auto solved = solve_model_labeling(*model.abstract);
    if (!solved)
      throw MissingLabelError("no energy labeling fits the declared possibility facts");
    return *solved;
  }

  WorkExtractionSpec spec_of(const QueryStmt& q) const {
    WorkExtractionSpec spec;
    spec.source = variable(q.names[0]);
    guard(spec.source);
    for (const auto& t : q.tuples) {
      spec.residuals.push_back(tuple_of(u, t));
      guard(spec.residuals.back());
    }
    for (const auto& r : q.raising) spec.work_out.push_back(aid(u, r));
    guard(spec.work_out);
    return spec;
  }

  json members_json(const Variable& v) const {
    json out = json::array();
    for (const AttrTuple& m : v.members) out.push_back(u.tuple_name(m));
    return out;
  }
  json verdict_json(const std::vector<TaskVerdict>& ws) const {
    json out = json::array();
    for (const TaskVerdict& w : ws)
      out.push_back(json{{"task", format_task(u, w.task)},
                         {"status", possibility_name(w.status)}});
    return out;
  }

  json info_variable(const QueryStmt& q) const {
    const Variable& v = variable(q.names[0]);
    guard(v);
    InfoVariableCertificate cert = is_information_variable(backend, v);
    json r;
    r["variable"] = q.names[0];
    r["status"] = possibility_name(cert.status);
    r["receptacle"] = cert.receptacle ? json(u.tuple_name(*cert.receptacle)) : json();
    r["witnesses"] = verdict_json(cert.witnesses);
    r["note"] = cert.note;
    return r;
  }

  json distinguishable(const QueryStmt& q) const {
    const Variable& v = variable(q.names[0]);
    guard(v);
    DistinguishabilityVerdict verdict = is_distinguishable(backend, v);
    json r;
    r["variable"] = q.names[0];
    r["status"] = possibility_name(verdict.status);
    r["witness"] = verdict.witness ? json(format_task(u, *verdict.witness)) : json();
    r["target"] = verdict.target ? members_json(*verdict.target) : json();
    r["exhaustive"] = verdict.exhaustive;
    r["note"] = verdict.note;
    return r;
  }

  json interoperable(const QueryStmt& q) const {
    const Variable& a = variable(q.names[0]);
    const Variable& b = variable(q.names[1]);
    guard(a);
    guard(b);
    InteroperabilityReport rep = check_interoperability(backend, a, b);
    json r;
    r["first"] = q.names[0];
    r["second"] = q.names[1];
    r["premise"] = possibility_name(rep.premise);
    r["product_status"] = possibility_name(rep.product.status);
    r["holds"] = possibility_name(rep.holds);
    r["note"] = rep.note;
    return r;
  }

  json work_variable(const QueryStmt& q) const {
    WorkVariable w = work_of(q.names);
    EnergyLabeling lab = labeling_for(w.members());
    WorkVariableVerdict verdict = is_work_variable(backend, w, lab, opts.strict_work_axiom);
    json r;
    r["work"] = json::array({q.names[0], q.names[1], q.names[2]});
    json energies;
    for (AttributeId a : w.members())
      energies[u.attribute(a).name] = format_rational(lab.values.at(a));
    r["energies"] = energies;
    r["status"] = possibility_name(verdict.status);
    json axioms = json::array();
    for (const AxiomCheck& ax : verdict.axioms) {
      json a;
      a["axiom"] = ax.axiom;
      a["status"] = possibility_name(ax.status);
      a["witness"] = ax.witness ? json(format_task(u, *ax.witness)) : json();
      a["note"] = ax.note;
      axioms.push_back(std::move(a));
    }
    r["axioms"] = axioms;
    r["note"] = verdict.note;
    return r;
  }

  json extract(const QueryStmt& q) const {
    WorkVariable w = work_of(q.work);
    WorkExtractionSpec spec = spec_of(q);
    Task t = build_extraction_task(u, spec, w);
    Decision d = backend.decide_task(t);
    json r;
    r["task"] = format_task(u, t);
    r["status"] = possibility_name(d.status);
    r["note"] = d.note;
    return r;
  }

  json theorem1(const QueryStmt& q, bool& violation) const {
    WorkVariable w = work_of(q.work);
    WorkExtractionSpec spec = spec_of(q);
    TheoremVerdict v = theorem1_check(backend, spec, w);
    violation = v.outcome == TheoremOutcome::Violation;
    json r;
    r["outcome"] = to_string(v.outcome);
    r["extraction_task"] = format_task(u, v.extraction_task);
    r["extraction_status"] = possibility_name(v.extraction_status);
    r["distinguishability"] =
        json{{"status", possibility_name(v.distinguishability.status)},
             {"exhaustive", v.distinguishability.exhaustive},
             {"note", v.distinguishability.note}};
    r["note"] = v.note;
    return r;
  }

  json classify_energy(const QueryStmt& q) const {
    SubstrateId s = sid(u, q.names[0]);
    const std::vector<AttributeId>& attrs = u.attributes_of(s);
    if (attrs.empty())
      throw EngineError("substrate " + q.names[0] + " has no attributes to classify");
    guard(attrs);
    EnergyLabeling lab = labeling_for(attrs);
    const char* source = model.quantum                       ? "induced"
                         : model.abstract->energy().values.size() ? "declared"
                                                                  : "solved";
    std::vector<AttrTuple> tuples;
    for (AttributeId a : attrs) tuples.push_back({a});
    TaskPartition partition = classify_by_labeling(u, tuples, lab);
    ClassConditionReport cc = check_class_conditions(
        u, partition, [&](const Task& t) { return backend.decide_task(t).status; });
    json r;
    r["substrate"] = q.names[0];
    r["labeling_source"] = source;
    json energies;
    for (AttributeId a : attrs) energies[u.attribute(a).name] = format_rational(lab.values.at(a));
    r["energies"] = energies;
    json classes = json::array();
    for (const TaskClass& c : partition.classes) {
      json entry;
      entry["gap"] = c.gap ? json(format_rational(*c.gap)) : json();
      json members = json::array();
      for (const Task& t : c.members) members.push_back(format_task(u, t));
      entry["members"] = members;
      classes.push_back(std::move(entry));
    }
    r["classes"] = classes;
    r["valid"] = cc.valid;
    json violations = json::array();
    for (const ClassConditionViolation& v : cc.violations)
      violations.push_back(json{{"kind", v.kind},
                                {"class", v.class_index},
                                {"witness", format_task(u, v.witness)},
                                {"note", v.note}});
    r["violations"] = violations;
    r["checks"] = cc.checks;
    r["unknown"] = cc.unknown;
    return r;
  }

  json adiabatic(const QueryStmt& q) const {
    Task t = task_of(u, q.tasks[0]);
    guard(t);
    WorkVariable w = work_of(q.work);
    AdiabaticVerdict v = is_adiabatically_possible(backend, t, w);
    json r;
    r["task"] = format_task(u, t);
    r["status"] = possibility_name(v.status);
    r["witness_member"] = v.witness_member ? json(u.attribute(*v.witness_member).name) : json();
    r["lifts"] = verdict_json(v.lifts);
    r["note"] = v.note;
    return r;
  }

  json derive(const QueryStmt& q) const {
    Task target = task_of(u, q.tasks[0]);
    guard(target);
    std::vector<Task> generators;
    for (std::size_t i = 1; i < q.tasks.size(); ++i) {
      generators.push_back(task_of(u, q.tasks[i]));
      guard(generators.back());
    }
    Derivation d = derive_task(u, target, generators, static_cast<std::size_t>(q.depth));
    json r;
    r["target"] = format_task(u, target);
    r["found"] = d.found;
    r["depth"] = d.depth;
    json steps = json::array();
    for (const DerivationStep& s : d.steps)
      steps.push_back(
          json{{"kind", s.kind}, {"generator", s.generator}, {"positions", s.positions}});
    r["steps"] = steps;
    r["explored"] = d.explored;
    r["frontier"] = d.frontier;
    r["note"] = d.note;
    return r;
  }

  json asymptotic(const QueryStmt& q) const {
    AttrTuple x = tuple_of(u, q.tuples[0]);
    AttrTuple xp = tuple_of(u, q.tuples[1]);
    guard(x);
    guard(xp);
    AsymptoticVerdict v = check_asymptotic_distinguishability(backend, x, xp, q.level, q.epsilon);
    json r;
    r["pair"] = json::array({u.tuple_name(x), u.tuple_name(xp)});
    r["n"] = q.level;
    r["epsilon"] = format_double(q.epsilon);
    r["status"] = possibility_name(v.status);
    r["level"] = v.level;
    r["minimal_level"] = v.minimal_level ? json(*v.minimal_level) : json();
    r["overlap"] = v.overlap ? json(format_double(*v.overlap)) : json();
    r["note"] = v.note;
    return r;
  }

  json search(const QueryStmt& q) const {
    SearchBounds bounds;
    bounds.attributes = static_cast<std::size_t>(q.attributes);
    bounds.arity = static_cast<std::size_t>(q.arity);
    bounds.n_truncation = q.n_trunc;
    PrincipleToggles toggles;
    for (const std::string& p : q.disabled) {
      if (p == "conservation")
        toggles.conservation = false;
      else if (p == "asymptotic")
        toggles.asymptotic = false;
      else if (p == "interoperability")
        toggles.interoperability = false;
      else
        throw EngineError("unknown principle '" + p +
                          "' (conservation, asymptotic, interoperability)");
    }
    return search_report(bounds, toggles, search_counterexample(bounds, toggles));
  }

  json run(const QueryStmt& q, bool& violation) const {
    if (q.check == "info-variable") return info_variable(q);
    if (q.check == "distinguishable") return distinguishable(q);
    if (q.check == "interoperable") return interoperable(q);
    if (q.check == "work-variable") return work_variable(q);
    if (q.check == "extract") return extract(q);
    if (q.check == "theorem1") return theorem1(q, violation);
    if (q.check == "classify-energy") return classify_energy(q);
    if (q.check == "adiabatic") return adiabatic(q);
    if (q.check == "derive") return derive(q);
    if (q.check == "asymptotic") return asymptotic(q);
    if (q.check == "search-counterexample") return search(q);
    throw EngineError("unhandled check '" + q.check + "'");
  }
};

}  // namespace

BuiltModel build_model(const Document& doc) {
  BuiltModel m;
  if (doc.kind == DocumentKind::StateVector) {
    if (!doc.facts.empty())
      throw EngineError("fact declarations need an abstract document; state-vector models "
                        "decide tasks themselves");
    m.quantum = std::make_unique<QuantumModel>();
    QuantumModel& q = *m.quantum;
    const Universe& u = q.universe();
    for (const SubstrateDecl& s : doc.substrates) {
      if (s.is_compose)
        q.add_composite(s.name, sid(u, s.left), sid(u, s.right));
      else
        q.add_system(s.name, s.dim);
    }
    for (const HamiltonianDecl& h : doc.hamiltonians)
      q.set_hamiltonian(sid(u, h.substrate), h.eigenvalues);
    for (const AttributeDecl& a : doc.attributes) {
      if (a.states.empty())
        throw EngineError("attribute '" + a.name +
                          "' needs states [...] in a state-vector document");
      SubstrateId s = sid(u, a.substrate);
      Vec psi(static_cast<Eigen::Index>(a.states[0].size()));
      for (std::size_t k = 0; k < a.states[0].size(); ++k)
        psi[static_cast<Eigen::Index>(k)] = a.states[0][k];
      q.add_state(s, a.name, std::move(psi));
      if (a.states.size() > 1) m.multi_state.insert(a.name);
    }
  } else {
    if (!doc.hamiltonians.empty())
      throw EngineError("Hamiltonians need a state-vector document; abstract attributes "
                        "take 'energy <rational>'");
    m.abstract = std::make_unique<AbstractBackend>();
    AbstractBackend& ab = *m.abstract;
    for (const SubstrateDecl& s : doc.substrates) {
      if (s.is_compose)
        ab.universe_mut().add_composite(s.name, sid(ab.universe(), s.left),
                                        sid(ab.universe(), s.right));
      else
        ab.universe_mut().add_substrate(s.name);
    }
    for (const AttributeDecl& a : doc.attributes) {
      if (!a.states.empty())
        throw EngineError("attribute '" + a.name +
                          "' declares states in an abstract document");
      AttributeId id = ab.universe_mut().add_attribute(a.name, sid(ab.universe(), a.substrate));
      if (a.energy) ab.set_energy(id, *a.energy);
    }
  }

  const Universe& u = m.universe();
  for (const VariableDecl& v : doc.variables) {
    std::vector<AttrTuple> members;
    for (const auto& t : v.members) members.push_back(tuple_of(u, t));
    Variable var = make_variable(u, members);
    if (m.abstract) m.abstract->declare_variable(var);
    m.variables.emplace(v.name, std::move(var));
  }

  if (m.abstract) {
    for (const FactDecl& f : doc.facts) {
      Task t = task_of(u, f.task);
      Possibility status = f.possible ? Possibility::Possible : Possibility::Impossible;
      if (const Fact* conflict = m.abstract->declare(t, status))
        throw InconsistentModelError("conflicting declarations for " + format_task(u, t), t,
                                     FactOrigin{"declared", {}}, conflict->origin);
    }
    m.abstract->close();
  }
  return m;
}

Task task_of_query(const BuiltModel& model, const QueryStmt& q) {
  const Universe& u = model.universe();
  if (q.check == "info-variable" || q.check == "distinguishable") {
    const Variable& v = model.variables.at(q.names[0]);
    return build_cloning_task(u, v, v.members.front());
  }
  if (q.check == "work-variable") {
    AttributeId wp = aid(u, q.names[0]);
    return build_work_axiom_task(
        u, WorkVariable{u.attribute(wp).substrate, wp, aid(u, q.names[1]), aid(u, q.names[2])});
  }
  if (q.check == "extract" || q.check == "theorem1") {
    WorkExtractionSpec spec;
    spec.source = model.variables.at(q.names[0]);
    for (const auto& t : q.tuples) spec.residuals.push_back(tuple_of(u, t));
    for (const auto& r : q.raising) spec.work_out.push_back(aid(u, r));
    AttributeId wp = aid(u, q.work[0]);
    return build_extraction_task(
        u, spec,
        WorkVariable{u.attribute(wp).substrate, wp, aid(u, q.work[1]), aid(u, q.work[2])});
  }
  if (q.check == "derive") return task_of(u, q.tasks[0]);
  if (q.check == "adiabatic") return task_of(u, q.tasks[0]);
  throw EngineError("query '" + q.check + "' does not name a task to maximise over");
}

nlohmann::json search_report(const SearchBounds& bounds, const PrincipleToggles& toggles,
                             const SearchResult& result) {
  json r;
  r["bounds"] = json{{"attributes", bounds.attributes},
                     {"arity", bounds.arity},
                     {"n_truncation", bounds.n_truncation}};
  json disabled = json::array();
  if (!toggles.conservation) disabled.push_back("conservation");
  if (!toggles.asymptotic) disabled.push_back("asymptotic");
  if (!toggles.interoperability) disabled.push_back("interoperability");
  r["disabled_principles"] = disabled;
  r["outcome"] = result.outcome == SearchOutcome::Exhausted ? "exhausted" : "counterexample";
  r["raw_models"] = result.raw_models;
  r["canonical_models"] = result.canonical_models;
  r["contradictory"] = result.contradictory;
  r["principle_filtered"] = result.principle_filtered;
  r["no_work_variable"] = result.no_work_variable;
  r["theorem_held"] = result.theorem_held;
  if (result.counterexample) {
    const CounterexampleModel& c = *result.counterexample;
    json ce;
    ce["index"] = c.index;
    ce["digits"] = c.digits;
    ce["possible"] = c.possible;
    ce["impossible"] = c.impossible;
    ce["energies"] = c.energies;
    ce["work_variable"] = c.work_variable;
    ce["source"] = c.source;
    ce["extraction"] = c.extraction;
    ce["note"] = c.note;
    r["counterexample"] = ce;
  } else {
    r["counterexample"] = json();
  }
  return r;
}

RunOutcome run_document(const Document& doc, const std::string& input_bytes,
                        const EngineOptions& opts) {
  RunOutcome out;
  json report;
  report["version"] = kEngineVersion;
  report["input_sha256"] = sha256_hex(input_bytes);
  report["seed"] = opts.seed;

  bool violation = false;
  bool errored = false;

  std::optional<BuiltModel> model;
  json model_info;
  try {
    model.emplace(build_model(doc));
    model_info["kind"] =
        doc.kind == DocumentKind::StateVector ? "state-vector" : "abstract";
    model_info["status"] = "ok";
    model_info["substrates"] = doc.substrates.size();
    model_info["attributes"] = doc.attributes.size();
    model_info["facts"] = doc.facts.size();
  } catch (const InconsistentModelError& e) {
    violation = true;
    model_info["status"] = "inconsistent";
    model_info["error"] = json{{"type", "InconsistentModel"},
                               {"message", e.what()},
                               {"derived_rule", e.derived.rule},
                               {"declared_rule", e.declared.rule}};
  } catch (const std::exception& e) {
    errored = true;
    model_info["status"] = "error";
    model_info["error"] = error_json(e);
  }
  report["model"] = model_info;

  json results = json::array();
  std::optional<Runner> runner;
  if (model) runner.emplace(*model, opts);
  for (std::size_t i = 0; i < doc.queries.size(); ++i) {
    const QueryStmt& q = doc.queries[i];
    json entry;
    entry["index"] = i;
    entry["kind"] = q.check;
    entry["query"] = print_query(q);
    if (!runner) {
      entry["error"] = json{{"type", "ModelUnavailable"},
                            {"message", "the model failed to build; query skipped"}};
    } else {
      try {
        bool q_violation = false;
        entry["result"] = runner->run(q, q_violation);
        violation = violation || q_violation;
      } catch (const std::exception& e) {
        errored = true;
        entry["error"] = error_json(e);
      }
    }
    results.push_back(std::move(entry));
  }
  report["results"] = results;

  out.report = std::move(report);
  out.exit_code = violation ? 2 : (errored ? 1 : 0);
  return out;
}

}  // namespace ct
