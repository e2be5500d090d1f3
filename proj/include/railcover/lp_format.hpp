#ifndef RAILCOVER_LP_FORMAT_HPP
#define RAILCOVER_LP_FORMAT_HPP

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "railcover/problem.hpp"

namespace railcover {

// Renders a number with up to 9 significant digits, fixed notation only.
// The output is byte-stable and survives a parse/re-export round trip.
inline std::string lp_number(double v) {
  if (v == 0.0) return "0";  // normalizes -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  std::string s = buf;
  if (s.find('e') == std::string::npos && s.find('E') == std::string::npos) return s;
  // %.9g switched to scientific notation; expand to plain fixed form.
  int exponent = 0;
  std::snprintf(buf, sizeof buf, "%.8e", v);
  std::string sci = buf;
  exponent = std::atoi(sci.c_str() + sci.find('e') + 1);
  int decimals = std::max(0, 8 - exponent);
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  s = buf;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

namespace detail {

// Appends "term op term ..." with deterministic wrapping; subsequent lines of
// one expression are indented.
class LpExpressionWriter {
 public:
  explicit LpExpressionWriter(std::string head) : line_(std::move(head)) {}

  void add_term(double coefficient, const std::string& name, bool first) {
    std::string piece;
    if (first) {
      if (coefficient == 1.0) piece = name;
      else if (coefficient == -1.0) piece = "- " + name;
      else piece = lp_number(coefficient) + " " + name;
    } else {
      if (coefficient >= 0.0)
        piece = "+ " + (coefficient == 1.0 ? name : lp_number(coefficient) + " " + name);
      else
        piece = "- " + (coefficient == -1.0 ? name : lp_number(-coefficient) + " " + name);
    }
    if (line_.size() + piece.size() + 1 > 200) {
      out_ << line_ << "\n";
      line_ = "   ";
    }
    line_ += " " + piece;
  }

  void finish(const std::string& tail) {
    if (!tail.empty()) line_ += " " + tail;
    out_ << line_ << "\n";
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  std::string line_;
};

}  // namespace detail

// Classic LP text format: objective, `Subject To` rows named in construction
// order, a `Binary` section listing every variable, `End`. Zero objective
// coefficients are omitted; variable order is recoverable from the Binary
// section.
inline std::string write_lp(const BinaryProgram& bp) {
  std::ostringstream out;
  out << (bp.sense == ObjectiveSense::maximize ? "Maximize" : "Minimize") << "\n";

  detail::LpExpressionWriter obj(" obj:");
  bool first = true;
  for (std::size_t v = 0; v < bp.variables.size(); ++v) {
    if (bp.objective[v] == 0.0) continue;
    obj.add_term(bp.objective[v], bp.variables[v].name, first);
    first = false;
  }
  obj.finish("");
  out << obj.str();

  out << "Subject To\n";
  for (const auto& c : bp.constraints) {
    detail::LpExpressionWriter row(" " + c.name + ":");
    bool row_first = true;
    for (const auto& [v, coef] : c.terms) {
      row.add_term(coef, bp.variables[v].name, row_first);
      row_first = false;
    }
    row.finish((c.comparator == BinaryProgram::Comparator::equal ? "= " : "<= ") +
               lp_number(c.rhs));
    out << row.str();
  }

  out << "Binary\n";
  for (const auto& v : bp.variables) out << " " << v.name << "\n";
  out << "End\n";
  return out.str();
}

namespace detail {

struct LpToken {
  enum class Kind { word, number, plus, minus, op_le, op_eq, colon } kind;
  std::string text;
  double value = 0.0;
};

inline std::vector<LpToken> lp_tokenize(const std::string& text) {
  std::vector<LpToken> tokens;
  std::size_t k = 0;
  while (k < text.size()) {
    char c = text[k];
    if (c == '\\') {  // comment to end of line
      while (k < text.size() && text[k] != '\n') ++k;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) { ++k; continue; }
    if (c == '+') { tokens.push_back({LpToken::Kind::plus, "+"}); ++k; continue; }
    if (c == '-') { tokens.push_back({LpToken::Kind::minus, "-"}); ++k; continue; }
    if (c == ':') { tokens.push_back({LpToken::Kind::colon, ":"}); ++k; continue; }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (k + 1 < text.size() && text[k + 1] == '=') { op += '='; ++k; }
      ++k;
      if (op == "<=" || op == "=<") tokens.push_back({LpToken::Kind::op_le, "<="});
      else if (op == "=") tokens.push_back({LpToken::Kind::op_eq, "="});
      else throw ParseError("unsupported comparator '" + op + "' in LP input");
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = k;
      while (end < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.' ||
              text[end] == 'e' || text[end] == 'E' ||
              ((text[end] == '+' || text[end] == '-') && end > k &&
               (text[end - 1] == 'e' || text[end - 1] == 'E'))))
        ++end;
      std::string num = text.substr(k, end - k);
      tokens.push_back({LpToken::Kind::number, num, std::stod(num)});
      k = end;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = k;
      while (end < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
        ++end;
      tokens.push_back({LpToken::Kind::word, text.substr(k, end - k)});
      k = end;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "' in LP input");
  }
  return tokens;
}

}  // namespace detail

// Minimal reader for the dialect write_lp produces; exists for round-trip
// verification, not for general LP files. Variable identity (kind, rescuer,
// station) is reconstructed from the x_{i}_{j} / y_{k} naming scheme.
inline BinaryProgram read_lp(const std::string& text) {
  using detail::LpToken;
  std::vector<LpToken> tokens = detail::lp_tokenize(text);
  std::size_t pos = 0;
  auto peek = [&]() -> const LpToken* { return pos < tokens.size() ? &tokens[pos] : nullptr; };
  auto word_is = [&](const char* w) {
    const LpToken* t = peek();
    return t && t->kind == LpToken::Kind::word && t->text == w;
  };

  BinaryProgram bp;
  if (word_is("Maximize")) bp.sense = ObjectiveSense::maximize;
  else if (word_is("Minimize")) bp.sense = ObjectiveSense::minimize;
  else throw ParseError("LP input must start with Maximize or Minimize");
  ++pos;

  std::map<std::string, std::size_t> index_of;
  struct PendingTerm { std::string name; double coefficient; };
  struct PendingRow {
    std::string name;
    std::vector<PendingTerm> terms;
    BinaryProgram::Comparator comparator;
    double rhs;
  };
  std::vector<PendingTerm> objective_terms;
  std::vector<PendingRow> rows;
  std::vector<std::string> binaries;

  auto parse_expression = [&](std::vector<PendingTerm>& into, auto stop) {
    double sign = 1.0;
    bool have_coefficient = false;
    double coefficient = 1.0;
    while (peek() && !stop()) {
      const LpToken& t = *peek();
      if (t.kind == LpToken::Kind::plus) { sign = 1.0; ++pos; continue; }
      if (t.kind == LpToken::Kind::minus) { sign = -1.0; ++pos; continue; }
      if (t.kind == LpToken::Kind::number) {
        coefficient = t.value;
        have_coefficient = true;
        ++pos;
        continue;
      }
      if (t.kind == LpToken::Kind::word) {
        into.push_back({t.text, sign * (have_coefficient ? coefficient : 1.0)});
        sign = 1.0;
        have_coefficient = false;
        coefficient = 1.0;
        ++pos;
        continue;
      }
      throw ParseError("unexpected token '" + t.text + "' in LP expression");
    }
  };

  // objective: "obj: <expr>" up to Subject To
  if (!word_is("obj")) throw ParseError("expected objective label 'obj'");
  ++pos;
  if (!peek() || peek()->kind != LpToken::Kind::colon) throw ParseError("expected ':' after obj");
  ++pos;
  parse_expression(objective_terms, [&] { return word_is("Subject"); });

  if (!word_is("Subject")) throw ParseError("expected 'Subject To'");
  ++pos;
  if (!word_is("To")) throw ParseError("expected 'Subject To'");
  ++pos;

  while (peek() && !word_is("Binary")) {
    const LpToken* name_token = peek();
    if (name_token->kind != LpToken::Kind::word)
      throw ParseError("expected a constraint name");
    PendingRow row;
    row.name = name_token->text;
    ++pos;
    if (!peek() || peek()->kind != LpToken::Kind::colon)
      throw ParseError("expected ':' after constraint name " + row.name);
    ++pos;
    parse_expression(row.terms, [&] {
      const LpToken* t = peek();
      return t && (t->kind == LpToken::Kind::op_le || t->kind == LpToken::Kind::op_eq);
    });
    if (!peek()) throw ParseError("constraint " + row.name + " has no comparator");
    row.comparator = peek()->kind == LpToken::Kind::op_eq ? BinaryProgram::Comparator::equal
                                                          : BinaryProgram::Comparator::less_equal;
    ++pos;
    if (!peek() || peek()->kind != LpToken::Kind::number)
      throw ParseError("constraint " + row.name + " has no right-hand side");
    row.rhs = peek()->value;
    ++pos;
    rows.push_back(std::move(row));
  }

  if (!word_is("Binary")) throw ParseError("expected 'Binary' section");
  ++pos;
  while (peek() && !word_is("End")) {
    if (peek()->kind != LpToken::Kind::word)
      throw ParseError("expected a variable name in Binary section");
    binaries.push_back(peek()->text);
    ++pos;
  }
  if (!word_is("End")) throw ParseError("expected 'End'");

  auto classify = [](const std::string& name) {
    BinaryProgram::Variable v;
    v.name = name;
    if (name.rfind("x_", 0) == 0) {
      std::size_t second = name.find('_', 2);
      if (second != std::string::npos) {
        try {
          v.kind = BinaryProgram::VarKind::assignment;
          v.rescuer = std::stoi(name.substr(2, second - 2));
          v.station = std::stoi(name.substr(second + 1));
          return v;
        } catch (const std::exception&) {
          v.kind = BinaryProgram::VarKind::other;
        }
      }
    } else if (name.rfind("y_", 0) == 0) {
      try {
        v.kind = BinaryProgram::VarKind::opening;
        v.rescuer = std::stoi(name.substr(2));
        return v;
      } catch (const std::exception&) {
        v.kind = BinaryProgram::VarKind::other;
      }
    }
    return v;
  };

  for (const std::string& name : binaries) {
    if (index_of.count(name)) throw ParseError("duplicate variable " + name + " in Binary");
    index_of[name] = bp.add_variable(classify(name), 0.0);
  }
  auto var_index = [&](const std::string& name) {
    auto it = index_of.find(name);
    if (it == index_of.end()) throw ParseError("variable " + name + " is not declared Binary");
    return it->second;
  };
  for (const PendingTerm& t : objective_terms) bp.objective[var_index(t.name)] += t.coefficient;
  for (const PendingRow& r : rows) {
    BinaryProgram::Constraint c;
    c.name = r.name;
    for (const PendingTerm& t : r.terms) c.terms.push_back({var_index(t.name), t.coefficient});
    c.comparator = r.comparator;
    c.rhs = r.rhs;
    bp.constraints.push_back(std::move(c));
  }
  return bp;
}

}  // namespace railcover

#endif  // RAILCOVER_LP_FORMAT_HPP
