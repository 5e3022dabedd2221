#include "gvn/program.hpp"

#include <cctype>
#include <functional>
#include <unordered_set>

#include "gvn/error.hpp"

namespace gvn {

namespace {

enum class Tok { Ident, Int, Assign, Colon, Semi, LParen, RParen, LBrace, RBrace, Operator, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool is_keyword(std::string_view s) { return s == "if" || s == "else" || s == "while"; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
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
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::End, {}, line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == ':') {
      if (i + 1 < src.size() && src[i + 1] == '=') {
        t.kind = Tok::Assign;
        t.text = ":=";
        advance(2);
      } else {
        t.kind = Tok::Colon;
        t.text = ":";
        advance(1);
      }
    } else {
      switch (c) {
        case ';':
          t.kind = Tok::Semi;
          break;
        case '(':
          t.kind = Tok::LParen;
          break;
        case ')':
          t.kind = Tok::RParen;
          break;
        case '{':
          t.kind = Tok::LBrace;
          break;
        case '}':
          t.kind = Tok::RBrace;
          break;
        default:
          if (op_from_symbol(c)) {
            t.kind = Tok::Operator;
          } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
          }
      }
      t.text = std::string(1, c);
      advance(1);
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::End, "<end of input>", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program program() {
    Program p;
    p.items = items(/*nested=*/false);
    expect(Tok::End, "end of input");
    return p;
  }

  Term standalone_term() {
    Term t = expr();
    expect(Tok::End, "end of expression");
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw ParseError(what + ", found '" + at.text + "'", at.line, at.column);
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(peek(), "expected " + what);
    return take();
  }

  void expect_star_condition() {
    expect(Tok::LParen, "'(*)'");
    if (peek().kind != Tok::Operator || peek().text != "*") fail(peek(), "expected '(*)'");
    take();
    expect(Tok::RParen, "'(*)'");
  }

  std::string identifier(const Token& t) {
    if (is_keyword(t.text)) throw ParseError("reserved keyword '" + t.text + "' used as identifier", t.line, t.column);
    if (t.text.starts_with(kReservedPrefix)) {
      throw ParseError("identifier '" + t.text + "' uses the reserved prefix '__'", t.line, t.column);
    }
    return t.text;
  }

  std::vector<Item> items(bool nested) {
    std::vector<Item> out;
    while (true) {
      const Token& t = peek();
      if (t.kind == Tok::End || (nested && t.kind == Tok::RBrace)) break;
      if (t.kind != Tok::Ident) fail(t, "expected statement, label, 'if' or 'while'");
      if (t.text == "if") {
        take();
        expect_star_condition();
        Branch b;
        expect(Tok::LBrace, "'{'");
        b.then_body = items(true);
        expect(Tok::RBrace, "'}'");
        const Token& kw = peek();
        if (kw.kind != Tok::Ident || kw.text != "else") fail(kw, "expected 'else'");
        take();
        expect(Tok::LBrace, "'{'");
        b.else_body = items(true);
        expect(Tok::RBrace, "'}'");
        out.push_back(Item{std::move(b)});
      } else if (t.text == "while") {
        take();
        expect_star_condition();
        Loop l;
        expect(Tok::LBrace, "'{'");
        l.body = items(true);
        expect(Tok::RBrace, "'}'");
        out.push_back(Item{std::move(l)});
      } else if (peek(1).kind == Tok::Colon) {
        const Token& name_tok = take();
        std::string name = identifier(name_tok);
        if (!labels_.insert(name).second) {
          throw ParseError("duplicate label '" + name + "'", name_tok.line, name_tok.column);
        }
        take();
        out.push_back(Item{Label{std::move(name)}});
      } else if (peek(1).kind == Tok::Assign) {
        std::string target = identifier(take());
        take();
        Term rhs = expr();
        expect(Tok::Semi, "';'");
        out.push_back(Item{Statement{std::move(target), std::move(rhs)}});
      } else {
        fail(peek(1), "expected ':=' or ':' after identifier");
      }
    }
    return out;
  }

  Term expr() {
    Term lhs = atom();
    while (peek().kind == Tok::Operator) {
      Op op = *op_from_symbol(take().text[0]);
      Term rhs = atom();
      lhs = Term::apply(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Term atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        return Term::variable(identifier(take()));
      case Tok::Int:
        return Term::constant(Integer::parse(take().text));
      case Tok::LParen: {
        take();
        Term inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(t, "expected identifier, integer or '('");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::unordered_set<std::string> labels_;
};

void walk(const std::vector<Item>& items, const std::function<void(const Item&)>& fn) {
  for (const Item& it : items) {
    fn(it);
    if (auto* b = std::get_if<Branch>(&it.node)) {
      walk(b->then_body, fn);
      walk(b->else_body, fn);
    } else if (auto* l = std::get_if<Loop>(&it.node)) {
      walk(l->body, fn);
    }
  }
}

void collect_subterms(const Term& t, std::unordered_set<Term, TermHash>& out) {
  if (!out.insert(t).second) return;
  if (t.is_apply()) {
    collect_subterms(t.left(), out);
    collect_subterms(t.right(), out);
  }
}

void term_symbols(const Term& t, std::set<std::string>& vars, std::set<Integer>& consts, std::set<Op>& ops) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      vars.insert(t.name());
      break;
    case Term::Kind::Constant:
      consts.insert(t.value());
      break;
    case Term::Kind::Apply:
      ops.insert(t.op());
      term_symbols(t.left(), vars, consts, ops);
      term_symbols(t.right(), vars, consts, ops);
      break;
  }
}

void print_items(const std::vector<Item>& items, int depth, std::string& out) {
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  for (const Item& it : items) {
    if (auto* s = std::get_if<Statement>(&it.node)) {
      out += indent + s->target + " := " + s->rhs.to_string() + ";\n";
    } else if (auto* l = std::get_if<Label>(&it.node)) {
      out += indent + l->name + ":\n";
    } else if (auto* b = std::get_if<Branch>(&it.node)) {
      out += indent + "if (*) {\n";
      print_items(b->then_body, depth + 1, out);
      out += indent + "} else {\n";
      print_items(b->else_body, depth + 1, out);
      out += indent + "}\n";
    } else if (auto* w = std::get_if<Loop>(&it.node)) {
      out += indent + "while (*) {\n";
      print_items(w->body, depth + 1, out);
      out += indent + "}\n";
    }
  }
}

}  // namespace

std::set<std::string> Program::variables() const {
  std::set<std::string> vars;
  std::set<Integer> consts;
  std::set<Op> ops;
  for (const Statement& s : statements()) {
    vars.insert(s.target);
    term_symbols(s.rhs, vars, consts, ops);
  }
  return vars;
}

std::set<Integer> Program::constants() const {
  std::set<std::string> vars;
  std::set<Integer> consts;
  std::set<Op> ops;
  for (const Statement& s : statements()) term_symbols(s.rhs, vars, consts, ops);
  return consts;
}

std::set<Op> Program::operators() const {
  std::set<std::string> vars;
  std::set<Integer> consts;
  std::set<Op> ops;
  for (const Statement& s : statements()) term_symbols(s.rhs, vars, consts, ops);
  return ops;
}

std::vector<std::string> Program::labels() const {
  std::vector<std::string> out;
  walk(items, [&](const Item& it) {
    if (auto* l = std::get_if<Label>(&it.node)) out.push_back(l->name);
  });
  return out;
}

std::vector<Statement> Program::statements() const {
  std::vector<Statement> out;
  walk(items, [&](const Item& it) {
    if (auto* s = std::get_if<Statement>(&it.node)) out.push_back(*s);
  });
  return out;
}

std::size_t Program::max_term_size() const {
  std::size_t m = 0;
  for (const Statement& s : statements()) m = std::max(m, s.rhs.size());
  return m;
}

std::size_t Program::distinct_expressions() const {
  std::unordered_set<Term, TermHash> seen;
  for (const Statement& s : statements()) {
    seen.insert(Term::variable(s.target));
    collect_subterms(s.rhs, seen);
  }
  return seen.size();
}

bool Program::has_loops() const {
  bool found = false;
  walk(items, [&](const Item& it) { found = found || std::holds_alternative<Loop>(it.node); });
  return found;
}

Program parse_program(std::string_view text) { return Parser(lex(text)).program(); }

Term parse_term(std::string_view text) { return Parser(lex(text)).standalone_term(); }

std::string print_program(const Program& program) {
  std::string out;
  print_items(program.items, 0, out);
  return out;
}

}  // namespace gvn
