// Copyright 2026 The Wigner Simulator Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wigner/dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <utility>

namespace wigner {

namespace {

struct Token {
  enum class Kind { Ident, Int, Number, Punct };

  Kind kind = Kind::Punct;
  std::string text;
  int column = 1;
};

/// Aborts the current statement; caught by the statement loop and turned
/// into a ParseDiagnostic on the statement's line.
struct StatementError {
  int column;
  std::string message;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

const char kPunctChars[] = ",=|>[];()*+-/";

/// Tokens of one source line, or nullopt after pushing a lexical
/// diagnostic. Comments run from '#' to the end of the line.
std::optional<std::vector<Token>> lex_line(std::string_view text, int line,
                                           std::vector<ParseDiagnostic>& diagnostics) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    const int column = static_cast<int>(i) + 1;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      tokens.push_back({Token::Kind::Ident, std::string(text.substr(i, j - i)), column});
      i = j;
      continue;
    }
    if (digit(c)) {
      std::size_t j = i;
      bool fractional = false;
      while (j < text.size() && digit(text[j])) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        if (j >= text.size() || !digit(text[j])) {
          diagnostics.push_back({line, column, "malformed number", ParseDiagnostic::Severity::Error});
          return std::nullopt;
        }
        while (j < text.size() && digit(text[j])) ++j;
        fractional = true;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k >= text.size() || !digit(text[k])) {
          diagnostics.push_back({line, column, "malformed number", ParseDiagnostic::Severity::Error});
          return std::nullopt;
        }
        while (k < text.size() && digit(text[k])) ++k;
        j = k;
        fractional = true;
      }
      tokens.push_back({fractional ? Token::Kind::Number : Token::Kind::Int,
                        std::string(text.substr(i, j - i)), column});
      i = j;
      continue;
    }
    if (std::string_view(kPunctChars).find(c) != std::string_view::npos) {
      tokens.push_back({Token::Kind::Punct, std::string(1, c), column});
      ++i;
      continue;
    }
    diagnostics.push_back({line, column, std::string("unexpected character '") + c + "'",
                           ParseDiagnostic::Severity::Error});
    return std::nullopt;
  }
  return tokens;
}

class Cursor {
 public:
  Cursor(const std::vector<Token>& tokens, int line_length)
      : tokens_(tokens), end_column_(line_length + 1) {}

  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }
  bool at_end() const { return pos_ >= tokens_.size(); }
  int end_column() const { return end_column_; }

  const Token& take(const std::string& what) {
    if (at_end()) throw StatementError{end_column_, "expected " + what};
    return tokens_[pos_++];
  }

  std::string take_ident(const std::string& what) {
    const Token& t = take(what);
    if (t.kind != Token::Kind::Ident) throw StatementError{t.column, "expected " + what};
    return t.text;
  }

  void take_keyword(const std::string& word) {
    const Token& t = take("'" + word + "'");
    if (t.kind != Token::Kind::Ident || t.text != word) {
      throw StatementError{t.column, "expected '" + word + "'"};
    }
  }

  const Token& take_label(const std::string& what) {
    const Token& t = take(what);
    if (t.kind != Token::Kind::Ident && t.kind != Token::Kind::Int) {
      throw StatementError{t.column, "expected " + what};
    }
    return t;
  }

  const Token& take_punct(char c, const std::string& what = "") {
    const Token& t = take(what.empty() ? "'" + std::string(1, c) + "'" : what);
    if (t.kind != Token::Kind::Punct || t.text[0] != c) {
      throw StatementError{t.column,
                           "expected " + (what.empty() ? "'" + std::string(1, c) + "'" : what)};
    }
    return t;
  }

  long take_int(const std::string& what) {
    const Token& t = take(what);
    if (t.kind != Token::Kind::Int) throw StatementError{t.column, "expected " + what};
    try {
      return std::stol(t.text);
    } catch (const std::exception&) {
      throw StatementError{t.column, "integer out of range"};
    }
  }

  bool peek_punct(char c, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t != nullptr && t->kind == Token::Kind::Punct && t->text[0] == c;
  }

  bool peek_keyword(const std::string& word) const {
    const Token* t = peek();
    return t != nullptr && t->kind == Token::Kind::Ident && t->text == word;
  }

  void expect_end() {
    if (!at_end()) {
      const Token& t = tokens_[pos_];
      throw StatementError{t.column, "unexpected token '" + t.text + "'"};
    }
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
  int end_column_;
};

struct Builder {
  Scenario scenario;
  std::map<std::string, int> entity_line;
  std::vector<ParseDiagnostic> diagnostics;
};

const SystemSpec& resolve_system(const Builder& b, const Token& name) {
  for (const auto& sys : b.scenario.systems) {
    if (sys.name == name.text) return sys;
  }
  throw StatementError{name.column, "unknown system '" + name.text + "'"};
}

std::vector<SystemSpec> parse_system_list(Cursor& c, const Builder& b) {
  std::vector<SystemSpec> systems;
  while (true) {
    const Token& t = c.take("system name");
    if (t.kind != Token::Kind::Ident) throw StatementError{t.column, "expected system name"};
    systems.push_back(resolve_system(b, t));
    if (!c.peek_punct(',')) break;
    c.take_punct(',');
  }
  return systems;
}

Complex parse_coeff_factor(Cursor& c) {
  const Token& t = c.take("coefficient");
  if (t.kind == Token::Kind::Ident && t.text == "i") return Complex(0.0, 1.0);
  if (t.kind == Token::Kind::Ident && t.text == "sqrt") {
    c.take_punct('(');
    const double num = static_cast<double>(c.take_int("numerator"));
    double den = 1.0;
    if (c.peek_punct('/')) {
      c.take_punct('/');
      const Token* den_tok = c.peek();
      den = static_cast<double>(c.take_int("denominator"));
      if (den == 0.0) {
        throw StatementError{den_tok->column, "division by zero in fraction"};
      }
    }
    c.take_punct(')');
    return Complex(std::sqrt(num / den), 0.0);
  }
  if (t.kind == Token::Kind::Int) {
    const double num = std::strtod(t.text.c_str(), nullptr);
    if (c.peek_punct('/')) {
      c.take_punct('/');
      const Token* den_tok = c.peek();
      const double den = static_cast<double>(c.take_int("denominator"));
      if (den == 0.0) {
        throw StatementError{den_tok->column, "division by zero in fraction"};
      }
      return Complex(num / den, 0.0);
    }
    return Complex(num, 0.0);
  }
  if (t.kind == Token::Kind::Number) {
    return Complex(std::strtod(t.text.c_str(), nullptr), 0.0);
  }
  throw StatementError{t.column, "expected coefficient"};
}

Complex parse_coeff(Cursor& c) {
  Complex value = parse_coeff_factor(c);
  while (c.peek_punct('*') && !c.peek_punct('|', 1)) {
    c.take_punct('*');
    value *= parse_coeff_factor(c);
  }
  return value;
}

Eigen::VectorXcd parse_ketexpr(Cursor& c, const std::vector<SystemSpec>& systems) {
  Eigen::Index dim = 1;
  for (const auto& sys : systems) dim *= sys.dimension;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);

  Complex sign(1.0, 0.0);
  if (c.peek_punct('-')) {
    sign = Complex(-1.0, 0.0);
    c.take_punct('-');
  }
  while (true) {
    Complex coeff = sign;
    if (!c.peek_punct('|')) {
      coeff *= parse_coeff(c);
      c.take_punct('*', "'*' between coefficient and ket");
    }
    const Token& bar = c.take_punct('|');
    std::vector<Token> labels;
    labels.push_back(c.take_label("basis label"));
    while (c.peek_punct(',')) {
      c.take_punct(',');
      labels.push_back(c.take_label("basis label"));
    }
    c.take_punct('>');
    if (labels.size() != systems.size()) {
      std::ostringstream msg;
      msg << "expected " << systems.size() << " labels in ket, got " << labels.size();
      throw StatementError{bar.column, msg.str()};
    }
    Eigen::Index index = 0;
    for (std::size_t k = 0; k < systems.size(); ++k) {
      const int li = systems[k].label_index(labels[k].text);
      if (li < 0) {
        throw StatementError{labels[k].column, "unknown label '" + labels[k].text +
                                                   "' for system '" + systems[k].name + "'"};
      }
      index = index * systems[k].dimension + li;
    }
    v(index) += coeff;

    if (c.peek_punct('+')) {
      sign = Complex(1.0, 0.0);
      c.take_punct('+');
    } else if (c.peek_punct('-')) {
      sign = Complex(-1.0, 0.0);
      c.take_punct('-');
    } else {
      break;
    }
  }
  return v;
}

Eigen::MatrixXcd parse_rowspec(Cursor& c, const SystemSpec& target) {
  const Token& bracket = c.take_punct('[');
  std::vector<Eigen::VectorXcd> columns;
  const std::vector<SystemSpec> target_only = {target};
  columns.push_back(parse_ketexpr(c, target_only));
  while (c.peek_punct(';')) {
    c.take_punct(';');
    columns.push_back(parse_ketexpr(c, target_only));
  }
  c.take_punct(']');
  if (static_cast<int>(columns.size()) != target.dimension) {
    std::ostringstream msg;
    msg << "expected " << target.dimension << " basis images, got " << columns.size();
    throw StatementError{bracket.column, msg.str()};
  }
  Eigen::MatrixXcd m(target.dimension, target.dimension);
  for (std::size_t j = 0; j < columns.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = columns[j];
  return m;
}

void parse_system_stmt(Cursor& c, Builder& b, int line) {
  const Token& name = c.take("system name");
  if (name.kind != Token::Kind::Ident) {
    throw StatementError{name.column, "expected system name"};
  }
  for (const auto& sys : b.scenario.systems) {
    if (sys.name == name.text) {
      throw StatementError{name.column, "duplicate system name '" + name.text + "'"};
    }
  }
  c.take_keyword("dim");
  const long dim = c.take_int("dimension");
  c.take_keyword("labels");
  std::vector<std::string> labels;
  labels.push_back(c.take_label("basis label").text);
  while (c.peek_punct(',')) {
    c.take_punct(',');
    labels.push_back(c.take_label("basis label").text);
  }
  c.expect_end();

  SystemSpec spec{name.text, static_cast<int>(dim), std::move(labels)};
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw StatementError{name.column, e.what()};
  }
  b.scenario.systems.push_back(std::move(spec));
  b.entity_line["system " + name.text] = line;
}

void parse_state_stmt(Cursor& c, Builder& b, int line) {
  const Token& name = c.take("state name");
  if (name.kind != Token::Kind::Ident) throw StatementError{name.column, "expected state name"};
  if (b.scenario.find_state(name.text) != nullptr) {
    throw StatementError{name.column, "duplicate state name '" + name.text + "'"};
  }
  c.take_keyword("on");
  const std::vector<SystemSpec> systems = parse_system_list(c, b);
  c.take_punct('=');
  Eigen::VectorXcd v = parse_ketexpr(c, systems);
  c.expect_end();
  try {
    b.scenario.states.emplace_back(name.text, PureState(systems, std::move(v)));
  } catch (const std::exception& e) {
    throw StatementError{name.column, e.what()};
  }
  b.entity_line["state " + name.text] = line;
}

void parse_observable_stmt(Cursor& c, Builder& b, int line) {
  const Token& name = c.take("observable name");
  if (name.kind != Token::Kind::Ident) {
    throw StatementError{name.column, "expected observable name"};
  }
  if (b.scenario.find_observable(name.text) != nullptr) {
    throw StatementError{name.column, "duplicate observable name '" + name.text + "'"};
  }
  c.take_keyword("on");
  const std::vector<SystemSpec> systems = parse_system_list(c, b);
  std::vector<std::pair<std::string, PureState>> outcomes;
  while (!c.at_end()) {
    c.take_keyword("outcome");
    const Token& label = c.take_label("outcome label");
    c.take_punct('=');
    Eigen::VectorXcd v = parse_ketexpr(c, systems);
    try {
      outcomes.emplace_back(label.text, PureState(systems, std::move(v)));
    } catch (const std::exception& e) {
      throw StatementError{label.column, e.what()};
    }
  }
  try {
    b.scenario.observables.push_back(observable_from_eigenstates(name.text, outcomes));
  } catch (const std::exception& e) {
    throw StatementError{name.column, e.what()};
  }
  b.entity_line["observable " + name.text] = line;
}

void parse_unitary_stmt(Cursor& c, Builder& b, int line) {
  const Token& name = c.take("unitary name");
  if (name.kind != Token::Kind::Ident) throw StatementError{name.column, "expected unitary name"};
  if (b.scenario.find_unitary(name.text) != nullptr) {
    throw StatementError{name.column, "duplicate unitary name '" + name.text + "'"};
  }
  c.take_keyword("on");
  const Token& target_tok = c.take("system name");
  if (target_tok.kind != Token::Kind::Ident) {
    throw StatementError{target_tok.column, "expected system name"};
  }
  const SystemSpec target = resolve_system(b, target_tok);
  c.take_keyword("controlled");
  c.take_keyword("by");
  const Token& control_tok = c.take("system name");
  if (control_tok.kind != Token::Kind::Ident) {
    throw StatementError{control_tok.column, "expected system name"};
  }
  const SystemSpec control = resolve_system(b, control_tok);

  ControlledUnitary cu{name.text, control.name, target.name, {}};
  while (!c.at_end()) {
    c.take_keyword("when");
    const Token& label = c.take_label("control label");
    c.take_keyword("apply");
    cu.branches.emplace_back(label.text, parse_rowspec(c, target));
  }
  b.scenario.unitaries.push_back(std::move(cu));
  b.entity_line["unitary " + name.text] = line;
}

void parse_step_stmt(Cursor& c, Builder& b, int line) {
  const Token& id = c.take("step id");
  if (id.kind != Token::Kind::Ident) throw StatementError{id.column, "expected step id"};
  if (b.scenario.find_step(id.text) != nullptr) {
    throw StatementError{id.column, "duplicate step id '" + id.text + "'"};
  }
  const Token& kind = c.take("step action");
  Step step;
  step.id = id.text;
  if (kind.kind == Token::Kind::Ident && kind.text == "measure") {
    const std::string obs = c.take_ident("observable name");
    c.take_keyword("by");
    const std::string agent = c.take_ident("agent name");
    step.action = MeasureAction{agent, obs};
  } else if (kind.kind == Token::Kind::Ident && kind.text == "apply") {
    step.action = ApplyAction{c.take_ident("unitary name")};
  } else if (kind.kind == Token::Kind::Ident && kind.text == "prepare") {
    const std::string system = c.take_ident("system name");
    c.take_keyword("as");
    const std::string state = c.take_ident("state name");
    step.action = PrepareAction{system, state};
  } else {
    throw StatementError{kind.column, "expected 'measure', 'apply', or 'prepare'"};
  }
  c.expect_end();
  b.scenario.steps.push_back(std::move(step));
  b.entity_line["step " + id.text] = line;
}

void parse_perspective_stmt(Cursor& c, Builder& b, int line) {
  const Token& name = c.take("perspective name");
  if (name.kind != Token::Kind::Ident) {
    throw StatementError{name.column, "expected perspective name"};
  }
  if (b.scenario.find_perspective(name.text) != nullptr) {
    throw StatementError{name.column, "duplicate perspective name '" + name.text + "'"};
  }
  c.take_keyword("collapse");
  Perspective p{name.text, {}};
  if (c.peek_keyword("none")) {
    c.take_keyword("none");
  } else {
    p.collapsing_steps.insert(c.take_ident("step id"));
    while (c.peek_punct(',')) {
      c.take_punct(',');
      p.collapsing_steps.insert(c.take_ident("step id"));
    }
  }
  c.expect_end();
  b.scenario.perspectives.push_back(std::move(p));
  b.entity_line["perspective " + name.text] = line;
}

void parse_statement(const std::vector<Token>& tokens, int line, int line_length, Builder& b) {
  Cursor c(tokens, line_length);
  try {
    const Token& head = c.take("statement");
    if (head.kind != Token::Kind::Ident) {
      throw StatementError{head.column, "expected statement keyword"};
    }
    if (head.text == "system") {
      parse_system_stmt(c, b, line);
    } else if (head.text == "state") {
      parse_state_stmt(c, b, line);
    } else if (head.text == "observable") {
      parse_observable_stmt(c, b, line);
    } else if (head.text == "unitary") {
      parse_unitary_stmt(c, b, line);
    } else if (head.text == "step") {
      parse_step_stmt(c, b, line);
    } else if (head.text == "perspective") {
      parse_perspective_stmt(c, b, line);
    } else {
      throw StatementError{head.column, "unknown statement '" + head.text + "'"};
    }
  } catch (const StatementError& e) {
    b.diagnostics.push_back({line, e.column, e.message, ParseDiagnostic::Severity::Error});
  }
}

}  // namespace

ParseResult parse_scenario(std::string_view text) {
  Builder b;
  bool saw_statement = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    ++line_no;
    const auto tokens = lex_line(line, line_no, b.diagnostics);
    if (tokens.has_value() && !tokens->empty()) {
      saw_statement = true;
      parse_statement(*tokens, line_no, static_cast<int>(line.size()), b);
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  if (!saw_statement && b.diagnostics.empty()) {
    b.diagnostics.push_back({1, 1, "empty scenario", ParseDiagnostic::Severity::Error});
  }
  if (b.diagnostics.empty()) {
    for (const auto& issue : validate_scenario(b.scenario)) {
      const auto it = b.entity_line.find(issue.entity);
      const int line = it != b.entity_line.end() ? it->second : 1;
      b.diagnostics.push_back(
          {line, 1, issue.entity + ": " + issue.message, ParseDiagnostic::Severity::Error});
    }
  }

  ParseResult result;
  result.diagnostics = std::move(b.diagnostics);
  if (result.diagnostics.empty()) result.scenario = std::move(b.scenario);
  return result;
}

namespace {

std::string format_coeff(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

void append_term(std::string& out, bool& first, bool negative, const std::string& body) {
  if (first) {
    if (negative) out += "-";
    first = false;
  } else {
    out += negative ? " - " : " + ";
  }
  out += body;
}

/// The unit vector v with P = v v^dagger, largest-magnitude component made
/// real positive. Throws when P has rank above one.
Eigen::VectorXcd rank_one_vector(const Projector& proj, const std::string& context) {
  const Eigen::MatrixXcd& m = proj.entries();
  Eigen::Index pivot = 0;
  m.colwise().norm().maxCoeff(&pivot);
  Eigen::VectorXcd v = m.col(pivot);
  const double n = v.norm();
  if (n <= kTol) throw DomainError(context + " is zero; cannot serialize");
  v /= n;
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  v *= std::abs(v(lead)) / v(lead);
  if ((m - v * v.adjoint()).cwiseAbs().maxCoeff() > kTol) {
    throw DomainError(context + " has rank above one; cannot serialize");
  }
  return v;
}

const SystemSpec& system_or_throw(const Scenario& s, const std::string& name,
                                  const std::string& context) {
  for (const auto& sys : s.systems) {
    if (sys.name == name) return sys;
  }
  throw DomainError(context + " references undeclared system '" + name + "'");
}

}  // namespace

std::string ket_expression(const PureState& state, int significant_digits, double drop_below) {
  std::string out;
  bool first = true;
  for (Eigen::Index i = 0; i < state.dimension(); ++i) {
    const Complex c = state.amplitudes()(i);
    const std::string ket = "|" + join(state.labels_at(i), ",") + ">";
    const double re = c.real();
    const double im = c.imag();
    if (std::abs(re) >= drop_below) {
      const std::string body =
          std::abs(re) == 1.0 ? ket : format_coeff(std::abs(re), significant_digits) + "*" + ket;
      append_term(out, first, re < 0.0, body);
    }
    if (std::abs(im) >= drop_below) {
      append_term(out, first, im < 0.0,
                  "i*" + format_coeff(std::abs(im), significant_digits) + "*" + ket);
    }
  }
  if (out.empty()) {
    out = "0*|" + join(state.labels_at(0), ",") + ">";
  }
  return out;
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  for (const auto& sys : s.systems) {
    out << "system " << sys.name << " dim " << sys.dimension << " labels "
        << join(sys.basis_labels, ", ") << "\n";
  }
  for (const auto& [name, state] : s.states) {
    std::vector<std::string> names;
    for (const auto& sys : state.systems()) names.push_back(sys.name);
    out << "state " << name << " on " << join(names, ", ") << " = " << ket_expression(state, 17)
        << "\n";
  }
  for (const auto& obs : s.observables) {
    std::vector<std::string> names;
    for (const auto& sys : obs.systems) names.push_back(sys.name);
    out << "observable " << obs.name << " on " << join(names, ", ");
    for (const auto& [label, proj] : obs.outcomes) {
      const Eigen::VectorXcd v = rank_one_vector(
          proj, "observable '" + obs.name + "' outcome '" + label + "' projector");
      out << " outcome " << label << " = "
          << ket_expression(PureState(obs.systems, v), 17);
    }
    out << "\n";
  }
  for (const auto& decl : s.unitaries) {
    if (const auto* plain = std::get_if<PlainUnitary>(&decl)) {
      throw DomainError("unitary '" + plain->name +
                        "' cannot be serialized: only controlled unitaries have a textual form");
    }
    const auto& cu = std::get<ControlledUnitary>(decl);
    const SystemSpec& target = system_or_throw(s, cu.target, "unitary '" + cu.name + "'");
    out << "unitary " << cu.name << " on " << cu.target << " controlled by " << cu.control;
    for (const auto& [label, matrix] : cu.branches) {
      out << " when " << label << " apply [";
      for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        if (j > 0) out << "; ";
        out << ket_expression(PureState({target}, matrix.col(j)), 17);
      }
      out << "]";
    }
    out << "\n";
  }
  for (const auto& step : s.steps) {
    out << "step " << step.id << " ";
    if (const auto* m = std::get_if<MeasureAction>(&step.action)) {
      out << "measure " << m->observable << " by " << m->agent;
    } else if (const auto* a = std::get_if<ApplyAction>(&step.action)) {
      out << "apply " << a->unitary;
    } else {
      const auto& pr = std::get<PrepareAction>(step.action);
      out << "prepare " << pr.system << " as " << pr.state;
    }
    out << "\n";
  }
  for (const auto& p : s.perspectives) {
    out << "perspective " << p.name << " collapse ";
    if (p.collapsing_steps.empty()) {
      out << "none";
    } else {
      std::vector<std::string> ids(p.collapsing_steps.begin(), p.collapsing_steps.end());
      out << join(ids, ", ");
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace wigner
