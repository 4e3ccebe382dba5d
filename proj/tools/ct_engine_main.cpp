#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ct/engine.hpp"
#include "ct/oracle.hpp"
#include "ct/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_text(const nlohmann::json& report, std::ostream& os) {
  const auto& model = report.at("model");
  os << "model: " << model.at("status").get<std::string>();
  if (model.contains("kind")) os << " (" << model.at("kind").get<std::string>() << ")";
  os << "\n";
  for (const auto& entry : report.at("results")) {
    os << "[" << entry.at("index").get<std::size_t>() << "] "
       << entry.at("kind").get<std::string>() << ": ";
    if (entry.contains("error")) {
      os << "error (" << entry.at("error").at("type").get<std::string>() << ") "
         << entry.at("error").at("message").get<std::string>() << "\n";
      continue;
    }
    const auto& r = entry.at("result");
    if (r.contains("outcome"))
      os << r.at("outcome").get<std::string>();
    else if (r.contains("status"))
      os << r.at("status").get<std::string>();
    else if (r.contains("found"))
      os << (r.at("found").get<bool>() ? "found" : "not found");
    else if (r.contains("valid"))
      os << (r.at("valid").get<bool>() ? "valid" : "violated");
    if (r.contains("note") && !r.at("note").get<std::string>().empty())
      os << " -- " << r.at("note").get<std::string>();
    os << "\n";
  }
}

int run_check(const std::string& path, std::uint64_t seed, bool strict, bool text) {
  std::string bytes = read_file(path);
  ct::Document doc = ct::parse_document(bytes);
  ct::EngineOptions opts;
  opts.seed = seed;
  opts.strict_work_axiom = strict;
  ct::RunOutcome out = ct::run_document(doc, bytes, opts);
  if (text)
    print_text(out.report, std::cout);
  else
    std::cout << ct::render_report(out.report);
  return out.exit_code;
}

int run_oracle(const std::string& path, std::size_t query_index, int restarts, int iters,
               int ancilla, std::uint64_t seed) {
  std::string bytes = read_file(path);
  ct::Document doc = ct::parse_document(bytes);
  if (query_index >= doc.queries.size())
    throw std::runtime_error("the document has " + std::to_string(doc.queries.size()) +
                             " queries; index " + std::to_string(query_index) +
                             " is out of range");
  ct::BuiltModel model = ct::build_model(doc);
  if (!model.quantum)
    throw std::runtime_error("the variational check needs a state-vector document");
  ct::Task task = ct::task_of_query(model, doc.queries[query_index]);

  ct::OracleParams params;
  params.ancilla_dim = ancilla;
  params.restarts = restarts;
  params.iterations = iters;
  params.seed = seed;
  ct::OracleResult result = ct::oracle_max_fidelity(*model.quantum, task, params);

  nlohmann::json report;
  report["version"] = ct::kEngineVersion;
  report["input_sha256"] = ct::sha256_hex(bytes);
  report["task"] = ct::format_task(model.universe(), task);
  report["query_index"] = query_index;
  report["params"] = nlohmann::json{{"ancilla_dim", ancilla},
                                    {"restarts", restarts},
                                    {"iterations", iters},
                                    {"seed", seed}};
  report["fidelity"] = ct::format_double(result.fidelity);
  report["best_restart"] = result.best_restart;
  report["ascent_steps"] = result.iterations;
  std::cout << ct::render_report(report);
  return 0;
}

int run_enumerate(long attributes, long arity, long n_trunc,
                  const std::vector<std::string>& disabled) {
  ct::SearchBounds bounds;
  bounds.attributes = static_cast<std::size_t>(attributes);
  bounds.arity = static_cast<std::size_t>(arity);
  bounds.n_truncation = n_trunc;
  ct::PrincipleToggles toggles;
  for (const std::string& p : disabled) {
    if (p == "conservation")
      toggles.conservation = false;
    else if (p == "asymptotic")
      toggles.asymptotic = false;
    else if (p == "interoperability")
      toggles.interoperability = false;
    else
      throw std::runtime_error("unknown principle '" + p +
                               "' (conservation, asymptotic, interoperability)");
  }
  ct::SearchResult result = ct::search_counterexample(bounds, toggles);
  nlohmann::json report = ct::search_report(bounds, toggles, result);
  report["version"] = ct::kEngineVersion;
  std::cout << ct::render_report(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructor-theory task engine"};
  app.require_subcommand(1);

  std::string file;
  std::uint64_t seed = 0;
  bool strict = false;
  bool json_mode = false;
  bool text_mode = false;
  auto* check = app.add_subcommand("check", "parse a document and run its queries");
  check->add_option("file", file, "model/query document")->required();
  check->add_option("--seed", seed, "seed stamped into the report");
  check->add_flag("--strict-work-axiom", strict, "use the literal same-class work axiom");
  auto* jflag = check->add_flag("--json", json_mode, "JSON report on stdout (default)");
  check->add_flag("--text", text_mode, "brief text report instead")->excludes(jflag);

  std::string oracle_file;
  std::size_t task_index = 0;
  int restarts = 8, iters = 600, ancilla = 4;
  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle", "variational fidelity for one query's task");
  oracle->add_option("file", oracle_file, "state-vector document")->required();
  oracle->add_option("--task", task_index, "query index naming the task")->required();
  oracle->add_option("--restarts", restarts, "random restarts");
  oracle->add_option("--iters", iters, "ascent iterations per restart");
  oracle->add_option("--ancilla", ancilla, "ancilla dimension");
  oracle->add_option("--seed", oracle_seed, "root seed");

  long attributes = 3, arity = 2, n_trunc = 2;
  std::vector<std::string> disabled;
  auto* enumerate = app.add_subcommand("enumerate", "scan small models for counterexamples");
  enumerate->add_option("--attributes", attributes, "attributes on the single substrate");
  enumerate->add_option("--arity", arity, "closure arity bound");
  enumerate->add_option("--n-trunc", n_trunc, "asymptotic truncation level");
  enumerate->add_option("--disable-principle", disabled, "drop a principle (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(file, seed, strict, text_mode);
    if (oracle->parsed())
      return run_oracle(oracle_file, task_index, restarts, iters, ancilla, oracle_seed);
    if (enumerate->parsed()) return run_enumerate(attributes, arity, n_trunc, disabled);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
