#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ct/core.hpp"
#include "ct/rational.hpp"

namespace ct {

struct ParseError : Error {
  using Error::Error;
};
struct UndeclaredIdentifierError : ParseError {
  using ParseError::ParseError;
};
struct DuplicateDeclarationError : ParseError {
  using ParseError::ParseError;
};

struct SourcePos {
  int line = 0;
  int col = 0;
};

// Declaration statements, in source order within their own kind. Name
// resolution happens at parse time, so a well-formed Document never dangles.
struct SubstrateDecl {
  SourcePos pos;
  std::string name;
  bool is_abstract = false;
  bool is_compose = false;
  int dim = 0;                    // state-vector substrates
  std::string left, right;        // compose operands
};

struct HamiltonianDecl {
  SourcePos pos;
  std::string substrate;
  std::vector<Rational> eigenvalues;
};

struct AttributeDecl {
  SourcePos pos;
  std::string name;
  std::string substrate;
  // `states [ ... ]` form: one amplitude row per state, semicolon-separated.
  std::vector<std::vector<std::complex<double>>> states;
  std::optional<Rational> energy;  // `energy <rational>` form
};

struct VariableDecl {
  SourcePos pos;
  std::string name;
  std::vector<std::vector<std::string>> members;  // attr tuples
};

// `task { x->y, (a,b)->(c,d), ... } on S`
struct TaskLiteral {
  SourcePos pos;
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
  std::string substrate;
};

struct FactDecl {
  SourcePos pos;
  bool possible = true;
  TaskLiteral task;
};

// One parsed `query <check> ...` statement; only the fields its check uses are
// filled. The argument grammars:
//   info-variable X | distinguishable X | interoperable X Y
//   work-variable w+ w0 w-
//   extract X residuals r... raising o... via w+ w0 w-   (theorem1 alike)
//   classify-energy S
//   adiabatic task { x->y } on S via w+ w0 w-
//   derive depth N task {...} on S from task {...} on S [task {...} on S]...
//   asymptotic x x' n N [epsilon E]
//   search-counterexample attributes A arity K n-trunc N [disable P]...
struct QueryStmt {
  SourcePos pos;
  std::string check;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> tuples;  // residuals / the asymptotic pair
  std::vector<std::string> raising;
  std::vector<std::string> work;  // w+, w0, w-
  std::vector<TaskLiteral> tasks;
  long depth = 6;
  long level = 1;
  double epsilon = 1e-6;
  long attributes = 3;
  long arity = 2;
  long n_trunc = 2;
  std::vector<std::string> disabled;
};

enum class DocumentKind { StateVector, Abstract };

struct Document {
  DocumentKind kind = DocumentKind::Abstract;
  std::vector<SubstrateDecl> substrates;  // compose entries interleaved in order
  std::vector<HamiltonianDecl> hamiltonians;
  std::vector<AttributeDecl> attributes;
  std::vector<VariableDecl> variables;
  std::vector<FactDecl> facts;
  std::vector<QueryStmt> queries;
};

// Parses a whole document; throws ParseError (with line:col and what was
// expected) on the first problem.
Document parse_document(const std::string& text);

// Canonical one-line rendering of a query, used to label report entries.
std::string print_query(const QueryStmt& q);

}  // namespace ct
