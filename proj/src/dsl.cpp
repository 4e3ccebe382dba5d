#include "ct/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace ct {
namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End };
  Kind kind = End;
  std::string text;
  SourcePos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-' ||
         c == '\'';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (text.compare(i, 3, "(+)") == 0) {
      t.kind = Token::Punct;
      t.text = "(+)";
      advance(3);
    } else if (text.compare(i, 2, "->") == 0) {
      t.kind = Token::Punct;
      t.text = "->";
      advance(2);
    } else if (digit(c) || ((c == '-' || c == '+') && i + 1 < text.size() && digit(text[i + 1]))) {
      std::size_t j = i + ((c == '-' || c == '+') ? 1 : 0);
      while (j < text.size() && digit(text[j])) ++j;
      if (j < text.size() && text[j] == '/' && j + 1 < text.size() && digit(text[j + 1])) {
        ++j;
        while (j < text.size() && digit(text[j])) ++j;
      } else if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && digit(text[j])) ++j;
        if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
          if (k < text.size() && digit(text[k])) {
            j = k;
            while (j < text.size() && digit(text[j])) ++j;
          }
        }
      }
      t.kind = Token::Number;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (ident_start(c)) {
      std::size_t j = i + 1;
      // '-' stays in names like w-, but never eats into a '->' arrow.
      while (j < text.size() && ident_char(text[j]) &&
             !(text[j] == '-' && j + 1 < text.size() && text[j + 1] == '>'))
        ++j;
      t.kind = Token::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (std::string("={}[](),;").find(c) != std::string::npos) {
      t.kind = Token::Punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      std::ostringstream msg;
      msg << "line " << line << ":" << col << ": stray character '" << c << "'";
      throw ParseError(msg.str());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::End;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

const std::set<std::string> kChecks = {
    "info-variable", "distinguishable",       "interoperable", "work-variable",
    "extract",       "theorem1",              "classify-energy", "adiabatic",
    "derive",        "search-counterexample", "asymptotic"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Document parse() {
    while (!at_end()) statement();
    if (!saw_quantum_ && !saw_abstract_)
      throw ParseError("document declares no substrates");
    if (saw_quantum_ && saw_abstract_)
      throw ParseError("one backend kind per document: 'dim' and 'abstract' substrates mix");
    doc_.kind = saw_quantum_ ? DocumentKind::StateVector : DocumentKind::Abstract;
    return std::move(doc_);
  }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& expected) {
    std::ostringstream msg;
    msg << "line " << t.pos.line << ":" << t.pos.col << ": expected " << expected << ", found ";
    if (t.kind == Token::End)
      msg << "end of input";
    else
      msg << "'" << t.text << "'";
    throw ParseError(msg.str());
  }

  const Token& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().kind == Token::End; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(const std::string& text) {
    if (peek().text == text && peek().kind != Token::End) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect(const std::string& text) {
    if (peek().text != text || peek().kind == Token::End) fail(peek(), "'" + text + "'");
    return next();
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Token::Ident) fail(peek(), what);
    return next().text;
  }
  Rational rational(const std::string& what) {
    if (peek().kind != Token::Number) fail(peek(), what);
    const Token& t = next();
    auto r = parse_rational(t.text);
    if (!r) fail(t, "a rational number");
    return *r;
  }
  long integer(const std::string& what) {
    if (peek().kind != Token::Number) fail(peek(), what);
    const Token& t = next();
    try {
      std::size_t used = 0;
      long v = std::stol(t.text, &used);
      if (used != t.text.size()) fail(t, what);
      return v;
    } catch (const std::logic_error&) {
      fail(t, what);
    }
  }
  double real(const std::string& what) {
    if (peek().kind != Token::Number) fail(peek(), what);
    return std::stod(next().text);
  }

  void declare(std::set<std::string>& table, const std::string& name, const Token& at,
               const std::string& what) {
    if (!table.insert(name).second) {
      std::ostringstream msg;
      msg << "line " << at.pos.line << ":" << at.pos.col << ": duplicate " << what << " '"
          << name << "'";
      throw DuplicateDeclarationError(msg.str());
    }
  }
  void require(const std::set<std::string>& table, const std::string& name, const Token& at,
               const std::string& what) {
    if (!table.count(name)) {
      std::ostringstream msg;
      msg << "line " << at.pos.line << ":" << at.pos.col << ": undeclared " << what << " '"
          << name << "'";
      throw UndeclaredIdentifierError(msg.str());
    }
  }

  std::string substrate_ref() {
    const Token& t = peek();
    std::string name = ident("a substrate name");
    require(substrates_, name, t, "substrate");
    return name;
  }
  std::string attribute_ref() {
    const Token& t = peek();
    std::string name = ident("an attribute name");
    require(attributes_, name, t, "attribute");
    return name;
  }

  // IDENT | '(' IDENT (',' IDENT)* ')'
  std::vector<std::string> attr_tuple() {
    std::vector<std::string> parts;
    if (accept("(")) {
      parts.push_back(attribute_ref());
      while (accept(",")) parts.push_back(attribute_ref());
      expect(")");
    } else {
      parts.push_back(attribute_ref());
    }
    return parts;
  }

  TaskLiteral task_literal() {
    TaskLiteral lit;
    lit.pos = peek().pos;
    expect("task");
    expect("{");
    for (;;) {
      std::vector<std::string> in = attr_tuple();
      expect("->");
      std::vector<std::string> out = attr_tuple();
      lit.pairs.emplace_back(std::move(in), std::move(out));
      if (!accept(",")) break;
    }
    expect("}");
    expect("on");
    lit.substrate = substrate_ref();
    return lit;
  }

  void statement() {
    const Token& head = peek();
    if (head.kind != Token::Ident)
      fail(head, "a statement (substrate, compose, hamiltonian, attribute, variable, fact, query)");
    if (head.text == "substrate") return substrate_stmt();
    if (head.text == "compose") return compose_stmt();
    if (head.text == "hamiltonian") return hamiltonian_stmt();
    if (head.text == "attribute") return attribute_stmt();
    if (head.text == "variable") return variable_stmt();
    if (head.text == "fact") return fact_stmt();
    if (head.text == "query") return query_stmt();
    fail(head, "a statement (substrate, compose, hamiltonian, attribute, variable, fact, query)");
  }

  void substrate_stmt() {
    SubstrateDecl d;
    d.pos = next().pos;  // 'substrate'
    const Token& name_tok = peek();
    d.name = ident("a substrate name");
    if (accept("dim")) {
      long dim = integer("a positive dimension");
      if (dim < 1) fail(name_tok, "a positive dimension");
      d.dim = static_cast<int>(dim);
      saw_quantum_ = true;
    } else if (accept("abstract")) {
      d.is_abstract = true;
      saw_abstract_ = true;
    } else {
      fail(peek(), "'dim <d>' or 'abstract'");
    }
    declare(substrates_, d.name, name_tok, "substrate");
    doc_.substrates.push_back(std::move(d));
  }

  void compose_stmt() {
    SubstrateDecl d;
    d.is_compose = true;
    d.pos = next().pos;
    const Token& name_tok = peek();
    d.name = ident("a substrate name");
    expect("=");
    d.left = substrate_ref();
    expect("(+)");
    d.right = substrate_ref();
    declare(substrates_, d.name, name_tok, "substrate");
    doc_.substrates.push_back(std::move(d));
  }

  void hamiltonian_stmt() {
    HamiltonianDecl d;
    d.pos = next().pos;
    d.substrate = substrate_ref();
    expect("eigenvalues");
    d.eigenvalues.push_back(rational("an eigenvalue"));
    while (peek().kind == Token::Number) d.eigenvalues.push_back(rational("an eigenvalue"));
    doc_.hamiltonians.push_back(std::move(d));
  }

  void attribute_stmt() {
    AttributeDecl d;
    d.pos = next().pos;
    const Token& name_tok = peek();
    d.name = ident("an attribute name");
    expect("on");
    d.substrate = substrate_ref();
    if (accept("states")) {
      expect("[");
      for (;;) {
        std::vector<std::complex<double>> row;
        while (peek().text == "(") {
          expect("(");
          double re = real("a real part");
          expect(",");
          double im = real("an imaginary part");
          expect(")");
          row.emplace_back(re, im);
        }
        if (row.empty()) fail(peek(), "an amplitude '(re,im)'");
        d.states.push_back(std::move(row));
        if (!accept(";")) break;
      }
      expect("]");
    } else if (accept("energy")) {
      d.energy = rational("a rational energy");
    }
    declare(attributes_, d.name, name_tok, "attribute");
    doc_.attributes.push_back(std::move(d));
  }

  void variable_stmt() {
    VariableDecl d;
    d.pos = next().pos;
    const Token& name_tok = peek();
    d.name = ident("a variable name");
    expect("=");
    expect("{");
    d.members.push_back(attr_tuple());
    while (accept(",")) d.members.push_back(attr_tuple());
    expect("}");
    declare(variables_, d.name, name_tok, "variable");
    doc_.variables.push_back(std::move(d));
  }

  void fact_stmt() {
    FactDecl d;
    d.pos = next().pos;
    if (accept("possible"))
      d.possible = true;
    else if (accept("impossible"))
      d.possible = false;
    else
      fail(peek(), "'possible' or 'impossible'");
    d.task = task_literal();
    doc_.facts.push_back(std::move(d));
  }

  std::string variable_ref() {
    const Token& t = peek();
    std::string name = ident("a variable name");
    require(variables_, name, t, "variable");
    return name;
  }

  void query_stmt() {
    QueryStmt q;
    q.pos = next().pos;
    const Token& check_tok = peek();
    q.check = ident("a check name");
    if (!kChecks.count(q.check)) fail(check_tok, "a known check name");

    if (q.check == "info-variable" || q.check == "distinguishable") {
      q.names.push_back(variable_ref());
    } else if (q.check == "interoperable") {
      q.names.push_back(variable_ref());
      q.names.push_back(variable_ref());
    } else if (q.check == "work-variable") {
      for (int k = 0; k < 3; ++k) q.names.push_back(attribute_ref());
    } else if (q.check == "extract" || q.check == "theorem1") {
      q.names.push_back(variable_ref());
      expect("residuals");
      while (peek().text != "raising") q.tuples.push_back(attr_tuple());
      expect("raising");
      while (peek().text != "via") q.raising.push_back(attribute_ref());
      expect("via");
      for (int k = 0; k < 3; ++k) q.work.push_back(attribute_ref());
    } else if (q.check == "classify-energy") {
      q.names.push_back(substrate_ref());
    } else if (q.check == "adiabatic") {
      q.tasks.push_back(task_literal());
      expect("via");
      for (int k = 0; k < 3; ++k) q.work.push_back(attribute_ref());
    } else if (q.check == "derive") {
      expect("depth");
      q.depth = integer("a depth bound");
      q.tasks.push_back(task_literal());
      expect("from");
      q.tasks.push_back(task_literal());
      while (peek().text == "task") q.tasks.push_back(task_literal());
    } else if (q.check == "asymptotic") {
      q.tuples.push_back(attr_tuple());
      q.tuples.push_back(attr_tuple());
      expect("n");
      q.level = integer("a copy count");
      if (accept("epsilon")) q.epsilon = real("a threshold");
    } else if (q.check == "search-counterexample") {
      expect("attributes");
      q.attributes = integer("an attribute count");
      expect("arity");
      q.arity = integer("an arity bound");
      expect("n-trunc");
      q.n_trunc = integer("a truncation level");
      while (accept("disable")) q.disabled.push_back(ident("a principle name"));
    }
    doc_.queries.push_back(std::move(q));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Document doc_;
  bool saw_quantum_ = false;
  bool saw_abstract_ = false;
  std::set<std::string> substrates_, attributes_, variables_;
};

std::string join_tuple(const std::vector<std::string>& t) {
  if (t.size() == 1) return t[0];
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
  return s + ")";
}

std::string print_task(const TaskLiteral& t) {
  std::string s = "task { ";
  for (std::size_t i = 0; i < t.pairs.size(); ++i) {
    if (i) s += ", ";
    s += join_tuple(t.pairs[i].first) + "->" + join_tuple(t.pairs[i].second);
  }
  return s + " } on " + t.substrate;
}

}  // namespace

Document parse_document(const std::string& text) { return Parser(tokenize(text)).parse(); }

std::string print_query(const QueryStmt& q) {
  std::ostringstream s;
  s << "query " << q.check;
  if (q.check == "info-variable" || q.check == "distinguishable" ||
      q.check == "interoperable" || q.check == "work-variable" ||
      q.check == "classify-energy") {
    for (const auto& n : q.names) s << " " << n;
  } else if (q.check == "extract" || q.check == "theorem1") {
    s << " " << q.names[0] << " residuals";
    for (const auto& t : q.tuples) s << " " << join_tuple(t);
    s << " raising";
    for (const auto& r : q.raising) s << " " << r;
    s << " via " << q.work[0] << " " << q.work[1] << " " << q.work[2];
  } else if (q.check == "adiabatic") {
    s << " " << print_task(q.tasks[0]) << " via " << q.work[0] << " " << q.work[1] << " "
      << q.work[2];
  } else if (q.check == "derive") {
    s << " depth " << q.depth << " " << print_task(q.tasks[0]) << " from";
    for (std::size_t i = 1; i < q.tasks.size(); ++i) s << " " << print_task(q.tasks[i]);
  } else if (q.check == "asymptotic") {
    s << " " << join_tuple(q.tuples[0]) << " " << join_tuple(q.tuples[1]) << " n " << q.level;
  } else if (q.check == "search-counterexample") {
    s << " attributes " << q.attributes << " arity " << q.arity << " n-trunc " << q.n_trunc;
    for (const auto& p : q.disabled) s << " disable " << p;
  }
  return s.str();
}

}  // namespace ct
