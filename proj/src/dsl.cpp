#include "rmono/polysys.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace rmono {

namespace {

enum class Tok { ident, number, op, semicolon, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      advance(1);
      continue;
    }
    const int l = line;
    const int cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      out.push_back({Tok::number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
    } else if (c == '+' || c == '-' || c == '*' || c == '^' || c == '(' || c == ')') {
      out.push_back({Tok::op, std::string(1, c), l, cl});
      advance(1);
    } else if (c == ';') {
      out.push_back({Tok::semicolon, ";", l, cl});
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  PolySystem parse() {
    std::optional<std::vector<std::string>> vars;
    std::optional<std::vector<std::string>> pars;
    std::vector<Polynomial> eqs;
    while (peek().kind != Tok::end) {
      const Token& kw = next();
      if (kw.kind != Tok::ident) throw ParseError("expected 'var', 'par' or 'eq'", kw.line, kw.column);
      if (kw.text == "var" || kw.text == "par") {
        auto& target = kw.text == "var" ? vars : pars;
        if (target) throw ParseError("duplicate '" + kw.text + "' declaration", kw.line, kw.column);
        if (!eqs.empty()) throw ParseError("declarations must precede equations", kw.line, kw.column);
        std::vector<std::string> names;
        while (peek().kind == Tok::ident) {
          const Token& id = next();
          if (id.text == "i" || id.text == "var" || id.text == "par" || id.text == "eq") {
            throw ParseError("reserved identifier '" + id.text + "'", id.line, id.column);
          }
          if (index_.count(id.text)) throw ParseError("duplicate identifier '" + id.text + "'", id.line, id.column);
          index_[id.text] = -1;
          names.push_back(id.text);
        }
        if (names.empty()) throw ParseError("empty declaration", kw.line, kw.column);
        expect_semicolon();
        target = std::move(names);
      } else if (kw.text == "eq") {
        if (!vars || !pars) throw ParseError("'var' and 'par' must be declared before 'eq'", kw.line, kw.column);
        if (eqs.empty()) assign_indices(*vars, *pars);
        Polynomial poly = expr();
        if (poly.is_zero()) throw ParseError("equation is the zero polynomial", kw.line, kw.column);
        eqs.push_back(std::move(poly));
        expect_semicolon();
      } else {
        throw ParseError("unknown statement '" + kw.text + "'", kw.line, kw.column);
      }
    }
    const Token& end = peek();
    if (!vars) throw ParseError("missing 'var' declaration", end.line, end.column);
    if (!pars) throw ParseError("missing 'par' declaration", end.line, end.column);
    if (eqs.size() != vars->size()) {
      throw ParseError("non-square system: " + std::to_string(eqs.size()) + " equations in " +
                           std::to_string(vars->size()) + " variables",
                       end.line, end.column);
    }
    return PolySystem(*vars, *pars, eqs);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  void expect_semicolon() {
    const Token& t = next();
    if (t.kind != Tok::semicolon) throw ParseError("expected ';'", t.line, t.column);
  }

  void assign_indices(const std::vector<std::string>& vars, const std::vector<std::string>& pars) {
    nvars_ = static_cast<int>(vars.size() + pars.size());
    for (size_t k = 0; k < vars.size(); ++k) index_[vars[k]] = static_cast<int>(k);
    for (size_t k = 0; k < pars.size(); ++k) index_[pars[k]] = static_cast<int>(vars.size() + k);
  }

  bool at_op(char c) const { return peek().kind == Tok::op && peek().text[0] == c; }

  Polynomial expr() {
    Polynomial acc = term();
    while (at_op('+') || at_op('-')) {
      const bool plus = next().text[0] == '+';
      Polynomial rhs = term();
      if (plus) {
        acc += rhs;
      } else {
        acc -= rhs;
      }
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (at_op('*')) {
      next();
      acc *= unary();
    }
    return acc;
  }

  Polynomial unary() {
    if (at_op('-')) {
      next();
      return -unary();
    }
    if (at_op('+')) {
      next();
      return unary();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (at_op('^')) {
      next();
      const Token& t = next();
      int e = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e);
      if (t.kind != Tok::number || ec != std::errc() || ptr != t.text.data() + t.text.size() || e < 0) {
        throw ParseError("exponent must be a nonnegative integer", t.line, t.column);
      }
      return base.pow(e);
    }
    return base;
  }

  Polynomial atom() {
    const Token& t = next();
    if (t.kind == Tok::number) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
        throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
      }
      return Polynomial::constant(nvars_, v);
    }
    if (t.kind == Tok::ident) {
      if (t.text == "i") return Polynomial::constant(nvars_, Complex(0.0, 1.0));
      auto it = index_.find(t.text);
      if (it == index_.end() || it->second < 0) {
        throw ParseError("undeclared identifier '" + t.text + "'", t.line, t.column);
      }
      return Polynomial::indeterminate(nvars_, it->second);
    }
    if (t.kind == Tok::op && t.text == "(") {
      Polynomial inner = expr();
      const Token& close = next();
      if (close.kind != Tok::op || close.text != ")") throw ParseError("expected ')'", close.line, close.column);
      return inner;
    }
    throw ParseError(t.kind == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'", t.line,
                     t.column);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  int nvars_ = 0;
  std::unordered_map<std::string, int> index_;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PolySystem parse_system(std::string_view text) { return Parser(tokenize(text)).parse(); }

std::string print_system(const PolySystem& sys) {
  std::ostringstream os;
  os << "var";
  for (const auto& v : sys.var_names()) os << ' ' << v;
  os << ";\npar";
  for (const auto& p : sys.param_names()) os << ' ' << p;
  os << ";\n";
  std::vector<std::string> names = sys.var_names();
  names.insert(names.end(), sys.param_names().begin(), sys.param_names().end());
  for (const auto& eq : sys.equations()) {
    os << "eq";
    bool first = true;
    for (const Monomial& m : eq) {
      os << (first ? " " : " + ");
      first = false;
      const Complex c = m.coefficient;
      if (c.imag() == 0.0) {
        os << format_double(c.real());
      } else {
        os << '(' << format_double(c.real()) << " + " << format_double(c.imag()) << "*i)";
      }
      for (size_t k = 0; k < m.exponents.size(); ++k) {
        if (m.exponents[k] == 0) continue;
        os << '*' << names[k];
        if (m.exponents[k] > 1) os << '^' << m.exponents[k];
      }
    }
    os << ";\n";
  }
  return os.str();
}

}  // namespace rmono
