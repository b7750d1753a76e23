#include "cplogic/parser.hpp"

#include <cctype>

namespace cplogic {

namespace {

struct Token {
  enum Kind { Ident, Number, Arrow, Dot, Pipe, Colon, Comma, LParen, RParen, Tilde, Hash, Slash, End };
  Kind kind = End;
  std::string text;
  int line = 1;
  int column = 1;
};

const char* kind_name(Token::Kind k) {
  switch (k) {
    case Token::Ident: return "identifier";
    case Token::Number: return "number";
    case Token::Arrow: return "'<-'";
    case Token::Dot: return "'.'";
    case Token::Pipe: return "'|'";
    case Token::Colon: return "':'";
    case Token::Comma: return "','";
    case Token::LParen: return "'('";
    case Token::RParen: return "')'";
    case Token::Tilde: return "'~'";
    case Token::Hash: return "'#'";
    case Token::Slash: return "'/'";
    case Token::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.column = col_;
    if (eof()) return t;
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Ident;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
        t.text += take();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      // '.' is a law terminator unless it starts/continues a numeral.
      if (c == '.' && (text_.size() <= pos_ + 1 ||
                       !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        take();
        t.kind = Token::Dot;
        return t;
      }
      t.kind = Token::Number;
      bool saw_dot = false;
      while (!eof()) {
        char d = peek();
        if (std::isdigit(static_cast<unsigned char>(d))) {
          t.text += take();
        } else if (d == '.' && !saw_dot && pos_ + 1 < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
          saw_dot = true;
          t.text += take();
        } else {
          break;
        }
      }
      return t;
    }
    switch (c) {
      case '<':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
          take();
          take();
          t.kind = Token::Arrow;
          return t;
        }
        break;
      case '|': take(); t.kind = Token::Pipe; return t;
      case ':': take(); t.kind = Token::Colon; return t;
      case ',': take(); t.kind = Token::Comma; return t;
      case '(': take(); t.kind = Token::LParen; return t;
      case ')': take(); t.kind = Token::RParen; return t;
      case '~': take(); t.kind = Token::Tilde; return t;
      case '#': take(); t.kind = Token::Hash; return t;
      case '/': take(); t.kind = Token::Slash; return t;
      default: break;
    }
    throw ParseError({line_, col_, std::string("unexpected character '") + c + "'"});
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '%') {
        while (!eof() && peek() != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  CPTheory theory() {
    std::vector<CPLaw> laws;
    int next_id = 1;
    while (cur_.kind != Token::End) laws.push_back(law(next_id++));
    try {
      return CPTheory::create(std::move(laws));
    } catch (const BudgetError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError({1, 1, e.what()});
    }
  }

  Literal literal_only() {
    Literal l = literal();
    expect(Token::End);
    return l;
  }

  std::vector<Literal> literals_only() {
    std::vector<Literal> out;
    out.push_back(literal());
    while (accept(Token::Comma)) out.push_back(literal());
    expect(Token::End);
    return out;
  }

 private:
  CPLaw law(int id) {
    CPLaw law;
    law.id = id;
    if (accept(Token::Hash)) law.label = expect(Token::Ident).text;
    if (cur_.kind == Token::Ident) {
      law.head.push_back(disjunct());
      while (accept(Token::Pipe)) law.head.push_back(disjunct());
    }
    expect(Token::Arrow);
    if (cur_.kind == Token::Ident || cur_.kind == Token::Tilde) {
      law.body.push_back(literal());
      while (accept(Token::Comma)) law.body.push_back(literal());
    }
    expect(Token::Dot);
    return law;
  }

  Disjunct disjunct() {
    Disjunct d;
    d.atom = atom();
    d.prob = Rational(1);
    if (accept(Token::Colon)) d.prob = probability();
    return d;
  }

  Rational probability() {
    Token t = expect(Token::Number);
    std::string text = t.text;
    if (accept(Token::Slash)) text += "/" + expect(Token::Number).text;
    Rational p;
    try {
      p = Rational::parse(text);
    } catch (const Error& e) {
      throw ParseError({t.line, t.column, e.what()});
    }
    if (p <= Rational(0) || p > Rational(1))
      throw ParseError({t.line, t.column, "probability " + p.to_string() + " outside (0,1]"});
    return p;
  }

  Literal literal() {
    bool positive = !accept(Token::Tilde);
    return Literal{atom(), positive};
  }

  Atom atom() {
    Atom a;
    a.name = expect(Token::Ident).text;
    if (accept(Token::LParen)) {
      a.args.push_back(expect(Token::Ident).text);
      while (accept(Token::Comma)) a.args.push_back(expect(Token::Ident).text);
      expect(Token::RParen);
    }
    return a;
  }

  void advance() { cur_ = lexer_.next(); }

  bool accept(Token::Kind k) {
    if (cur_.kind != k) return false;
    advance();
    return true;
  }

  Token expect(Token::Kind k) {
    if (cur_.kind != k)
      throw ParseError({cur_.line, cur_.column,
                        std::string("expected ") + kind_name(k) + ", found " + kind_name(cur_.kind) +
                            (cur_.text.empty() ? "" : " '" + cur_.text + "'")});
    Token t = cur_;
    advance();
    return t;
  }

  Lexer lexer_;
  Token cur_;
};

}  // namespace

CPTheory parse_theory(std::string_view text) { return Parser(text).theory(); }

Literal parse_literal(std::string_view text) { return Parser(text).literal_only(); }

std::vector<Literal> parse_literals(std::string_view text) { return Parser(text).literals_only(); }

std::string format_law(const CPLaw& law) {
  std::string out;
  if (!law.label.empty()) out += "#" + law.label + " ";
  for (size_t i = 0; i < law.head.size(); ++i) {
    if (i) out += " | ";
    out += law.head[i].atom.to_string();
    if (!law.head[i].prob.is_one()) out += ":" + law.head[i].prob.to_string();
  }
  if (!law.head.empty()) out += " ";
  out += "<-";
  for (size_t i = 0; i < law.body.size(); ++i) {
    out += i ? ", " : " ";
    out += law.body[i].to_string();
  }
  out += ".";
  return out;
}

std::string format_theory(const CPTheory& theory) {
  std::string out;
  for (const auto& law : theory.laws()) out += format_law(law) + "\n";
  return out;
}

namespace {

// "lawref:outcome" with no interior whitespace.
Step parse_step(const std::string& word, const CPTheory& theory) {
  auto colon = word.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= word.size())
    throw DomainError("malformed story step '" + word + "' (want lawref:outcome)");
  std::string ref = word.substr(0, colon);
  std::string out = word.substr(colon + 1);

  Step step;
  bool numeric = true;
  for (char c : ref)
    if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
  if (numeric && !ref.empty()) {
    step.law_id = std::stoi(ref);
    if (!theory.law_by_id(step.law_id))
      throw DomainError("story step references unknown law id " + ref);
  } else if (const CPLaw* law = theory.law_by_label(ref)) {
    step.law_id = law->id;
  } else {
    throw DomainError("story step references unknown law '" + ref + "'");
  }

  const CPLaw& law = theory.law_checked(step.law_id);
  if (out == "none") {
    step.outcome = kOutcomeNone;
    if (law.head_remainder().is_zero())
      throw DomainError("law " + std::to_string(step.law_id) + " has no empty disjunct");
  } else {
    for (char c : out)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw DomainError("malformed outcome '" + out + "' in step '" + word + "'");
    step.outcome = std::stoi(out);
    if (step.outcome < 1 || step.outcome > static_cast<int>(law.head.size()))
      throw DomainError("outcome index " + out + " out of range for law " +
                        std::to_string(step.law_id));
  }
  return step;
}

}  // namespace

std::vector<Step> parse_story_steps(std::string_view text, const CPTheory& theory) {
  std::vector<Step> steps;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      steps.push_back(parse_step(word, theory));
      word.clear();
    }
  };
  bool in_comment = false;
  for (char c : text) {
    if (in_comment) {
      if (c == '\n') in_comment = false;
      continue;
    }
    if (c == '%') {
      in_comment = true;
      flush();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      word += c;
    }
  }
  flush();
  return steps;
}

std::string format_steps(const std::vector<Step>& steps) {
  std::string out;
  for (size_t i = 0; i < steps.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(steps[i].law_id) + ":";
    out += steps[i].outcome == kOutcomeNone ? "none" : std::to_string(steps[i].outcome);
  }
  return out;
}

}  // namespace cplogic
