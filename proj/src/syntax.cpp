// Recursive-descent parser and printer for the ASCII formula syntax.

#include <cctype>
#include <sstream>

#include "pfl/formula.hpp"

namespace pfl {

namespace {

std::string describe(const std::vector<std::string>& expected, const std::string& found,
                     std::size_t offset) {
  std::ostringstream os;
  os << "syntax error at offset " << offset << ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
  os << "; found " << found;
  return os.str();
}

enum class Tok { End, Ident, Top, Bot, Not, BoxP, BoxF, DiaP, DiaF, And, Or, Imp, Iff, LParen, RParen };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

const std::vector<std::string> kUnaryStart = {"~", "[p]", "[f]", "<p>", "<f>", "T", "F", "identifier", "("};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  Formula parse_all() {
    Formula f = formula();
    if (cur_.kind != Tok::End) fail({"->", "<->", "|", "&", "end of input"});
    return f;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string found = cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'";
    throw ParseError(cur_.offset, std::move(expected), found);
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      cur_ = {Tok::End, start, ""};
      return;
    }
    auto rest = text_.substr(pos_);
    auto take = [&](Tok k, std::size_t n) {
      cur_ = {k, start, std::string(rest.substr(0, n))};
      pos_ += n;
    };
    if (rest.starts_with("<->")) return take(Tok::Iff, 3);
    if (rest.starts_with("->")) return take(Tok::Imp, 2);
    if (rest.starts_with("[p]")) return take(Tok::BoxP, 3);
    if (rest.starts_with("[f]")) return take(Tok::BoxF, 3);
    if (rest.starts_with("<p>")) return take(Tok::DiaP, 3);
    if (rest.starts_with("<f>")) return take(Tok::DiaF, 3);
    char c = rest[0];
    switch (c) {
      case '~': return take(Tok::Not, 1);
      case '&': return take(Tok::And, 1);
      case '|': return take(Tok::Or, 1);
      case '(': return take(Tok::LParen, 1);
      case ')': return take(Tok::RParen, 1);
      case 'T': return take(Tok::Top, 1);
      case 'F': return take(Tok::Bot, 1);
      default: break;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t n = 1;
      while (n < rest.size() && (std::islower(static_cast<unsigned char>(rest[n])) ||
                                 std::isdigit(static_cast<unsigned char>(rest[n])) || rest[n] == '_'))
        ++n;
      return take(Tok::Ident, n);
    }
    throw ParseError(start, kUnaryStart, "'" + std::string(1, c) + "'");
  }

  Formula formula() {
    Formula lhs = imp();
    if (cur_.kind == Tok::Iff) {
      advance();
      return iff(lhs, imp());
    }
    return lhs;
  }

  Formula imp() {
    Formula lhs = disjunction();
    if (cur_.kind == Tok::Imp) {
      advance();
      return implies(lhs, imp());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (cur_.kind == Tok::Or) {
      advance();
      acc = disj(acc, conjunction());
    }
    return acc;
  }

  Formula conjunction() {
    Formula acc = unary();
    while (cur_.kind == Tok::And) {
      advance();
      acc = conj(acc, unary());
    }
    return acc;
  }

  Formula unary() {
    switch (cur_.kind) {
      case Tok::Not: advance(); return neg(unary());
      case Tok::BoxP: advance(); return box_p(unary());
      case Tok::BoxF: advance(); return box_f(unary());
      case Tok::DiaP: advance(); return dia_p(unary());
      case Tok::DiaF: advance(); return dia_f(unary());
      default: return atom();
    }
  }

  Formula atom() {
    switch (cur_.kind) {
      case Tok::Top: advance(); return top();
      case Tok::Bot: advance(); return bot();
      case Tok::Ident: {
        Formula v = var(cur_.text);
        advance();
        return v;
      }
      case Tok::LParen: {
        advance();
        Formula inner = formula();
        if (cur_.kind != Tok::RParen) fail({")", "->", "<->", "|", "&"});
        advance();
        return inner;
      }
      default: fail(kUnaryStart);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token cur_{Tok::End, 0, ""};
};

void print_into(const Formula& a, std::string& out) {
  switch (a.op()) {
    case Op::Var: out += a.name(); return;
    case Op::Top: out += 'T'; return;
    case Op::Bot: out += 'F'; return;
    case Op::Not: {
      const Formula& c = a.child();
      if ((c.is(Op::BoxP) || c.is(Op::BoxF)) && c.child().is(Op::Not)) {
        out += c.is(Op::BoxP) ? "<p>" : "<f>";
        print_into(c.child().child(), out);
        return;
      }
      out += '~';
      print_into(c, out);
      return;
    }
    case Op::BoxP: out += "[p]"; print_into(a.child(), out); return;
    case Op::BoxF: out += "[f]"; print_into(a.child(), out); return;
    case Op::And:
    case Op::Or:
    case Op::Imp: {
      const char* sym = a.is(Op::And) ? " & " : a.is(Op::Or) ? " | " : " -> ";
      out += '(';
      print_into(a.lhs(), out);
      out += sym;
      print_into(a.rhs(), out);
      out += ')';
      return;
    }
  }
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, std::string found)
    : std::runtime_error(describe(expected, found, offset)), offset_(offset), expected_(std::move(expected)) {}

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Formula& a) {
  std::string out;
  print_into(a, out);
  return out;
}

}  // namespace pfl
