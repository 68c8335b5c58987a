#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "cpnet/model.hpp"

namespace cpnet {

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ":" +
                           std::to_string(column_) + ": " + what),
        line(line_),
        column(column_) {}
};

namespace io_detail {

struct Token {
  std::string text;
  int line;
  int col;
  bool punct;  // one of ( ) , : > = -
};

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Tokenizes one logical line (comments already stripped).
inline std::vector<Token> tokenize(const std::string& s, int line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    int col = static_cast<int>(i) + 1;
    if (c == '(' || c == ')' || c == ',' || c == ':' || c == '>' || c == '=' ||
        c == '-') {
      out.push_back({std::string(1, c), line, col, true});
      ++i;
      continue;
    }
    if (ident_char(c)) {
      size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({s.substr(i, j - i), line, col, false});
      i = j;
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  return out;
}

}  // namespace io_detail

// Parses the line-oriented .cpnet format:
//
//   # comment
//   var <name> : <v1> <v2> ...
//   cpt <name>
//   cpt <name> ( <p1> , <p2> , ... )
//   <pv1> , <pv2> , ... : <expr>      row of the open cpt block
//   - : <expr>                        row of a parentless cpt
//
// where <expr> chains values with '>' (strict) and '=' (indifferent),
// e.g. "x1 > x2 = x3". Repeating a context merges statements into the
// same row, which is how partial rows with unchained statements are
// written. Validation is not run here.
inline CPNet parse_net(const std::string& text) {
  using io_detail::Token;
  CPNet net;
  // statement accumulation per (variable, context); finalized at the end
  std::vector<std::map<std::vector<ValueId>, std::vector<Statement>>> pending;
  std::vector<bool> has_cpt;
  int open_cpt = -1;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw = raw.substr(0, pos);
    std::vector<Token> toks = io_detail::tokenize(raw, lineno);
    if (toks.empty()) continue;

    auto expect_ident = [&](size_t i, const char* what) -> const Token& {
      if (i >= toks.size())
        throw ParseError(lineno, static_cast<int>(raw.size()) + 1,
                         std::string("expected ") + what);
      if (toks[i].punct)
        throw ParseError(toks[i].line, toks[i].col,
                         std::string("expected ") + what + ", got '" +
                             toks[i].text + "'");
      return toks[i];
    };
    auto expect_punct = [&](size_t i, const char* p) {
      if (i >= toks.size() || !toks[i].punct || toks[i].text != p)
        throw ParseError(lineno,
                         i < toks.size() ? toks[i].col
                                         : static_cast<int>(raw.size()) + 1,
                         std::string("expected '") + p + "'");
    };

    if (!toks[0].punct && toks[0].text == "var") {
      const Token& name = expect_ident(1, "variable name");
      if (name.text == "var" || name.text == "cpt")
        throw ParseError(name.line, name.col, "reserved word '" + name.text + "'");
      if (net.var_index(name.text))
        throw ParseError(name.line, name.col,
                         "duplicate variable '" + name.text + "'");
      expect_punct(2, ":");
      Variable v;
      v.name = name.text;
      for (size_t i = 3; i < toks.size(); ++i) {
        if (toks[i].punct)
          throw ParseError(toks[i].line, toks[i].col,
                           "unexpected '" + toks[i].text + "' in domain");
        for (const std::string& existing : v.values)
          if (existing == toks[i].text)
            throw ParseError(toks[i].line, toks[i].col,
                             "duplicate domain value '" + toks[i].text + "'");
        v.values.push_back(toks[i].text);
      }
      if (v.values.empty())
        throw ParseError(lineno, static_cast<int>(raw.size()) + 1,
                         "variable needs at least one value");
      net.variables.push_back(v);
      CPT cpt;
      cpt.variable = static_cast<VarId>(net.variables.size()) - 1;
      net.cpts.push_back(cpt);
      pending.emplace_back();
      has_cpt.push_back(false);
      open_cpt = -1;
      continue;
    }

    if (!toks[0].punct && toks[0].text == "cpt") {
      const Token& name = expect_ident(1, "variable name");
      auto xi = net.var_index(name.text);
      if (!xi)
        throw ParseError(name.line, name.col,
                         "unknown variable '" + name.text + "'");
      if (has_cpt[*xi])
        throw ParseError(name.line, name.col,
                         "duplicate cpt for variable '" + name.text + "'");
      has_cpt[*xi] = true;
      CPT& cpt = net.cpts[*xi];
      if (toks.size() > 2) {
        expect_punct(2, "(");
        size_t i = 3;
        while (true) {
          const Token& p = expect_ident(i, "parent name");
          auto pi = net.var_index(p.text);
          if (!pi)
            throw ParseError(p.line, p.col, "unknown parent '" + p.text + "'");
          for (VarId existing : cpt.parents)
            if (existing == *pi)
              throw ParseError(p.line, p.col,
                               "duplicate parent '" + p.text + "'");
          cpt.parents.push_back(*pi);
          ++i;
          if (i < toks.size() && toks[i].punct && toks[i].text == ",") {
            ++i;
            continue;
          }
          expect_punct(i, ")");
          if (i + 1 != toks.size())
            throw ParseError(toks[i].line, toks[i].col + 1,
                             "trailing tokens after ')'");
          break;
        }
      }
      open_cpt = *xi;
      continue;
    }

    // Row line for the open cpt block.
    if (open_cpt < 0)
      throw ParseError(toks[0].line, toks[0].col,
                       "row outside of a cpt block");
    CPT& cpt = net.cpts[open_cpt];
    const Variable& xvar = net.variables[open_cpt];

    size_t i = 0;
    std::vector<ValueId> ctx;
    if (cpt.parents.empty()) {
      expect_punct(0, "-");
      i = 1;
    } else {
      for (size_t pi = 0; pi < cpt.parents.size(); ++pi) {
        const Token& t = expect_ident(i, "parent value");
        const Variable& pv = net.variables[cpt.parents[pi]];
        auto vi = pv.value_index(t.text);
        if (!vi)
          throw ParseError(t.line, t.col,
                           "'" + t.text + "' is not a value of " + pv.name);
        ctx.push_back(*vi);
        ++i;
        if (pi + 1 < cpt.parents.size()) {
          expect_punct(i, ",");
          ++i;
        }
      }
    }
    expect_punct(i, ":");
    ++i;

    // value (> value | = value)*
    const Token& first = expect_ident(i, "value");
    auto cur = xvar.value_index(first.text);
    if (!cur)
      throw ParseError(first.line, first.col,
                       "'" + first.text + "' is not a value of " + xvar.name);
    ++i;
    std::vector<Statement>& acc = pending[open_cpt][ctx];
    while (i < toks.size()) {
      if (!toks[i].punct || (toks[i].text != ">" && toks[i].text != "="))
        throw ParseError(toks[i].line, toks[i].col, "expected '>' or '='");
      StatementKind kind = toks[i].text == ">" ? StatementKind::Strict
                                               : StatementKind::Indifferent;
      ++i;
      const Token& t = expect_ident(i, "value");
      auto nxt = xvar.value_index(t.text);
      if (!nxt)
        throw ParseError(t.line, t.col,
                         "'" + t.text + "' is not a value of " + xvar.name);
      acc.push_back({kind, *cur, *nxt});
      cur = nxt;
      ++i;
    }
  }

  for (size_t x = 0; x < net.size(); ++x) {
    int d = static_cast<int>(net.variables[x].values.size());
    for (auto& [ctx, stmts] : pending[x])
      net.cpts[x].rows.emplace(ctx, LocalRelation(stmts, d));
  }
  return net;
}

namespace io_detail {

// Emits a statement set as chain expressions, merging runs where one
// statement's right value starts the next.
inline std::vector<std::string> chain_expressions(const CPNet& net, VarId x,
                                                  const LocalRelation& rel) {
  const Variable& var = net.variables[x];
  std::vector<Statement> st = rel.statements();
  std::vector<bool> used(st.size(), false);
  std::vector<std::string> lines;
  if (st.empty()) return {var.values[0]};  // row present, nothing related
  for (size_t i = 0; i < st.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::string expr = var.values[st[i].left];
    expr += st[i].kind == StatementKind::Strict ? " > " : " = ";
    expr += var.values[st[i].right];
    ValueId tail = st[i].right;
    bool extended = true;
    while (extended) {
      extended = false;
      for (size_t j = 0; j < st.size(); ++j) {
        if (used[j] || st[j].left != tail) continue;
        used[j] = true;
        expr += st[j].kind == StatementKind::Strict ? " > " : " = ";
        expr += var.values[st[j].right];
        tail = st[j].right;
        extended = true;
        break;
      }
    }
    lines.push_back(expr);
  }
  return lines;
}

}  // namespace io_detail

// Canonical text form: declarations in variable order, rows in
// lexicographic context order, chained statements. parse(serialize(net))
// equals net at the model level.
inline std::string serialize_net(const CPNet& net) {
  std::string out;
  for (const Variable& v : net.variables) {
    out += "var " + v.name + " :";
    for (const std::string& val : v.values) out += " " + val;
    out += "\n";
  }
  for (size_t x = 0; x < net.size(); ++x) {
    const CPT& cpt = net.cpts[x];
    out += "cpt " + net.variables[x].name;
    if (!cpt.parents.empty()) {
      out += " (";
      for (size_t i = 0; i < cpt.parents.size(); ++i) {
        if (i) out += " ,";
        out += " " + net.variables[cpt.parents[i]].name;
      }
      out += " )";
    }
    out += "\n";
    for (const auto& [ctx, rel] : cpt.rows) {
      std::string prefix;
      if (cpt.parents.empty()) {
        prefix = "- : ";
      } else {
        for (size_t i = 0; i < ctx.size(); ++i) {
          if (i) prefix += " , ";
          prefix += net.variables[cpt.parents[i]].values[ctx[i]];
        }
        prefix += " : ";
      }
      for (const std::string& expr : io_detail::chain_expressions(net, static_cast<VarId>(x), rel))
        out += prefix + expr + "\n";
    }
  }
  return out;
}

// "X=v,Y=w" (whitespace tolerated). With require_total the result must
// assign every variable of the net.
inline PartialAssignment parse_assignment(const std::string& text,
                                          const CPNet& net, bool require_total) {
  PartialAssignment pa(net.size());
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip_ws();
  while (i < text.size()) {
    size_t start = i;
    while (i < text.size() && io_detail::ident_char(text[i])) ++i;
    if (i == start) throw InputError("expected variable name in assignment");
    std::string name = text.substr(start, i - start);
    auto xi = net.var_index(name);
    if (!xi) throw InputError("unknown variable '" + name + "'");
    skip_ws();
    if (i >= text.size() || text[i] != '=')
      throw InputError("expected '=' after '" + name + "'");
    ++i;
    skip_ws();
    start = i;
    while (i < text.size() && io_detail::ident_char(text[i])) ++i;
    if (i == start) throw InputError("expected value for '" + name + "'");
    std::string val = text.substr(start, i - start);
    auto vi = net.variables[*xi].value_index(val);
    if (!vi)
      throw InputError("'" + val + "' is not a value of " + name);
    if (pa.assigned(*xi))
      throw InputError("duplicate variable '" + name + "' in assignment");
    pa.values[*xi] = *vi;
    skip_ws();
    if (i < text.size()) {
      if (text[i] != ',')
        throw InputError(std::string("expected ',' in assignment, got '") +
                         text[i] + "'");
      ++i;
      skip_ws();
    }
  }
  if (require_total)
    for (size_t v = 0; v < net.size(); ++v)
      if (!pa.assigned(static_cast<VarId>(v)))
        throw InputError("missing " + net.variables[v].name);
  return pa;
}

inline std::string format_assignment(const CPNet& net, const Outcome& o) {
  std::string s;
  for (size_t v = 0; v < net.size(); ++v) {
    if (v) s += ",";
    s += net.variables[v].name + "=" + net.variables[v].values[o.values[v]];
  }
  return s;
}

inline std::string format_assignment(const CPNet& net,
                                     const PartialAssignment& pa) {
  std::string s;
  for (size_t v = 0; v < net.size(); ++v) {
    if (!pa.assigned(static_cast<VarId>(v))) continue;
    if (!s.empty()) s += ",";
    s += net.variables[v].name + "=" + net.variables[v].values[pa.values[v]];
  }
  return s;
}

}  // namespace cpnet
