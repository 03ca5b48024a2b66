#include "planforge/pddl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string_view>

#include "planforge/error.hpp"

namespace planforge::pddl {

namespace {

struct Token {
  enum class Kind { LParen, RParen, Symbol, End };
  Kind kind;
  std::string text;  // lower-cased for symbols
  int line = 1;
  int col = 1;
  std::size_t offset = 0;  // byte offset into source
  std::size_t length = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  const std::string& source() const { return src_; }

 private:
  void advance() {
    skip_trivia();
    tok_.line = line_;
    tok_.col = col_;
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      tok_.length = 0;
      return;
    }
    char c = src_[pos_];
    if (c == '(') {
      bump();
      tok_.kind = Token::Kind::LParen;
      tok_.text = "(";
      tok_.length = 1;
      return;
    }
    if (c == ')') {
      bump();
      tok_.kind = Token::Kind::RParen;
      tok_.text = ")";
      tok_.length = 1;
      return;
    }
    std::string text;
    std::size_t start = pos_;
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (ch == '(' || ch == ')' || ch == ';' || std::isspace(static_cast<unsigned char>(ch)))
        break;
      text += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      bump();
    }
    tok_.kind = Token::Kind::Symbol;
    tok_.text = std::move(text);
    tok_.length = pos_ - start;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

[[noreturn]] void fail(Errc code, const std::string& msg, const Token& at) {
  throw Error(code, msg, at.line, at.col);
}

const std::set<std::string> kAllowedRequirements = {
    ":strips", ":typing", ":negative-preconditions", ":equality"};

// Formula heads we recognise but refuse, mapped to the feature they imply.
std::optional<std::string> unsupported_head(const std::string& head) {
  if (head == "or") return ":disjunctive-preconditions";
  if (head == "forall") return ":universal-preconditions";
  if (head == "exists") return ":existential-preconditions";
  if (head == "when") return ":conditional-effects";
  if (head == "imply") return ":adl";
  if (head == "increase" || head == "decrease" || head == "assign" ||
      head == "scale-up" || head == "scale-down")
    return ":numeric-fluents";
  if (head == "preference") return ":preferences";
  if (head == "oneof" || head == "unknown") return ":non-deterministic";
  return std::nullopt;
}

class Parser {
 public:
  Parser(const std::string& text, std::string source_name)
      : lex_(text), source_(std::move(source_name)) {}

  Domain domain() {
    expect_lparen();
    expect_symbol("define");
    expect_lparen();
    expect_symbol("domain");
    Domain d;
    d.name = symbol("domain name");
    expect_rparen();
    while (lex_.peek().kind == Token::Kind::LParen) {
      lex_.next();
      Token head = lex_.next();
      if (head.kind != Token::Kind::Symbol)
        fail(Errc::SyntaxError, "expected section keyword", head);
      if (head.text == ":requirements") {
        requirements(d);
      } else if (head.text == ":types") {
        types(d);
      } else if (head.text == ":predicates") {
        predicates(d);
      } else if (head.text == ":action") {
        d.actions.push_back(action());
      } else {
        fail(Errc::UnsupportedFeature, "domain section " + head.text, head);
      }
    }
    expect_rparen();
    expect_end();
    check_type_forest(d);
    return d;
  }

  Problem problem() {
    expect_lparen();
    expect_symbol("define");
    expect_lparen();
    expect_symbol("problem");
    Problem p;
    p.name = symbol("problem name");
    expect_rparen();
    bool saw_goal = false;
    while (lex_.peek().kind == Token::Kind::LParen) {
      lex_.next();
      Token head = lex_.next();
      if (head.kind != Token::Kind::Symbol)
        fail(Errc::SyntaxError, "expected section keyword", head);
      if (head.text == ":domain") {
        p.domain_name = symbol("domain name");
        expect_rparen();
      } else if (head.text == ":objects") {
        p.objects = typed_list(/*variables=*/false);
        expect_rparen();
        check_unique_names(p.objects, "object");
      } else if (head.text == ":init") {
        init_section(p);
      } else if (head.text == ":goal") {
        p.goal = formula(AtomContext::Ground);
        expect_rparen();
        saw_goal = true;
      } else {
        fail(Errc::UnsupportedFeature, "problem section " + head.text, head);
      }
    }
    expect_rparen();
    expect_end();
    if (p.domain_name.empty())
      throw Error(Errc::SyntaxError, "problem has no (:domain ...) section");
    if (!saw_goal || p.goal.empty())
      throw Error(Errc::EmptyGoal, "problem " + p.name + " has no goal literal");
    return p;
  }

  std::vector<Literal> condition() {
    std::vector<Literal> lits = formula(AtomContext::Lifted);
    expect_end();
    return lits;
  }

  std::vector<Literal> ground_condition() {
    std::vector<Literal> lits = formula(AtomContext::Ground);
    expect_end();
    return lits;
  }

 private:
  enum class AtomContext { Lifted, Ground };

  void expect_lparen() {
    Token t = lex_.next();
    if (t.kind != Token::Kind::LParen) fail(Errc::SyntaxError, "expected (", t);
  }

  void expect_rparen() {
    Token t = lex_.next();
    if (t.kind != Token::Kind::RParen) fail(Errc::SyntaxError, "expected )", t);
  }

  void expect_end() {
    Token t = lex_.next();
    if (t.kind != Token::Kind::End) fail(Errc::SyntaxError, "trailing input", t);
  }

  void expect_symbol(const std::string& s) {
    Token t = lex_.next();
    if (t.kind != Token::Kind::Symbol || t.text != s)
      fail(Errc::SyntaxError, "expected " + s, t);
  }

  std::string symbol(const std::string& what) {
    Token t = lex_.next();
    if (t.kind != Token::Kind::Symbol || t.text.empty())
      fail(Errc::SyntaxError, "expected " + what, t);
    return t.text;
  }

  void requirements(Domain& d) {
    while (lex_.peek().kind == Token::Kind::Symbol) {
      Token t = lex_.next();
      if (!kAllowedRequirements.count(t.text))
        fail(Errc::UnsupportedFeature, "requirement " + t.text, t);
      if (std::find(d.requirements.begin(), d.requirements.end(), t.text) ==
          d.requirements.end())
        d.requirements.push_back(t.text);
    }
    expect_rparen();
  }

  void types(Domain& d) {
    std::vector<TypedName> entries = typed_list(/*variables=*/false);
    expect_rparen();
    for (auto& e : entries) {
      if (e.name == "object") continue;
      e.type = e.effective_type();  // parents are stored explicitly
      for (const auto& prev : d.types)
        if (prev.name == e.name && prev.type != e.type)
          throw Error(Errc::SyntaxError, "type " + e.name + " redeclared with a different parent");
      if (!d.type_declared(e.name)) d.types.push_back(e);
    }
  }

  void predicates(Domain& d) {
    while (lex_.peek().kind == Token::Kind::LParen) {
      Token open = lex_.next();
      Predicate pred;
      pred.name = symbol("predicate name");
      if (pred.name[0] == '?' || pred.name == "=")
        fail(Errc::SyntaxError, "bad predicate name " + pred.name, open);
      pred.params = typed_list(/*variables=*/true);
      Token close = lex_.next();
      if (close.kind != Token::Kind::RParen) fail(Errc::SyntaxError, "expected )", close);
      pred.raw = slice(open, close);
      check_unique_names(pred.params, "parameter");
      d.predicates.push_back(std::move(pred));
    }
    expect_rparen();
  }

  Action action() {
    Action a;
    a.name = symbol("action name");
    while (lex_.peek().kind == Token::Kind::Symbol) {
      Token key = lex_.next();
      if (key.text == ":parameters") {
        expect_lparen();
        a.params = typed_list(/*variables=*/true);
        expect_rparen();
        check_unique_names(a.params, "parameter");
      } else if (key.text == ":precondition") {
        a.preconditions = formula_or_empty(AtomContext::Lifted);
      } else if (key.text == ":effect") {
        a.effects = formula_or_empty(AtomContext::Lifted);
        for (const auto& lit : a.effects)
          if (lit.atom.predicate == "=")
            fail(Errc::SyntaxError, "equality in effects", key);
      } else {
        fail(Errc::UnsupportedFeature, "action field " + key.text, key);
      }
    }
    expect_rparen();
    return a;
  }

  void init_section(Problem& p) {
    while (lex_.peek().kind == Token::Kind::LParen) {
      lex_.next();
      Token head = lex_.next();
      if (head.kind != Token::Kind::Symbol)
        fail(Errc::SyntaxError, "expected atom", head);
      if (head.text == "not")
        fail(Errc::SyntaxError, "negative literal in :init (closed world)", head);
      if (head.text == "=")
        fail(Errc::UnsupportedFeature, "numeric or equality :init entry", head);
      auto maybe = unsupported_head(head.text);
      if (maybe) fail(Errc::UnsupportedFeature, *maybe, head);
      Atom atom;
      atom.predicate = head.text;
      while (lex_.peek().kind == Token::Kind::Symbol) {
        Token arg = lex_.next();
        if (!arg.text.empty() && arg.text[0] == '?')
          fail(Errc::SyntaxError, "variable in :init atom", arg);
        atom.args.push_back(arg.text);
      }
      expect_rparen();
      if (std::find(p.init.begin(), p.init.end(), atom) == p.init.end())
        p.init.push_back(std::move(atom));
    }
    expect_rparen();
  }

  // A formula restricted to conjunctions of literals. `(and)` yields {}.
  std::vector<Literal> formula_or_empty(AtomContext ctx) {
    if (lex_.peek().kind == Token::Kind::LParen) return formula(ctx);
    Token t = lex_.peek();
    fail(Errc::SyntaxError, "expected formula", t);
  }

  std::vector<Literal> formula(AtomContext ctx) {
    std::vector<Literal> out;
    formula_into(ctx, out, /*negated=*/false);
    return out;
  }

  void formula_into(AtomContext ctx, std::vector<Literal>& out, bool negated) {
    Token open = lex_.next();
    if (open.kind != Token::Kind::LParen) fail(Errc::SyntaxError, "expected (", open);
    Token head = lex_.peek();
    if (head.kind == Token::Kind::RParen) {
      lex_.next();  // tolerate "()" as an empty conjunction
      return;
    }
    if (head.kind != Token::Kind::Symbol)
      fail(Errc::SyntaxError, "expected formula head", head);
    if (head.text == "and") {
      if (negated) fail(Errc::UnsupportedFeature, "negated conjunction", head);
      lex_.next();
      while (lex_.peek().kind == Token::Kind::LParen)
        formula_into(ctx, out, false);
      expect_rparen();
      return;
    }
    if (head.text == "not") {
      if (negated) fail(Errc::SyntaxError, "doubly negated literal", head);
      lex_.next();
      formula_into(ctx, out, true);
      expect_rparen();
      return;
    }
    auto maybe = unsupported_head(head.text);
    if (maybe) fail(Errc::UnsupportedFeature, *maybe, head);
    out.push_back(literal(ctx, negated));
  }

  Literal literal(AtomContext ctx, bool negated) {
    Token head = lex_.next();  // predicate symbol, ( already consumed
    Literal lit;
    lit.positive = !negated;
    lit.atom.predicate = head.text;
    while (lex_.peek().kind == Token::Kind::Symbol) {
      Token arg = lex_.next();
      bool is_var = !arg.text.empty() && arg.text[0] == '?';
      if (ctx == AtomContext::Lifted && !is_var)
        fail(Errc::UnsupportedFeature, ":constants (object name in action body)", arg);
      if (ctx == AtomContext::Ground && is_var)
        fail(Errc::SyntaxError, "variable in ground literal", arg);
      lit.atom.args.push_back(arg.text);
    }
    expect_rparen();
    if (lit.atom.predicate == "=") {
      if (ctx == AtomContext::Ground)
        fail(Errc::SyntaxError, "equality not allowed in goals", head);
      if (lit.atom.args.size() != 2)
        fail(Errc::SyntaxError, "equality takes exactly two arguments", head);
    }
    return lit;
  }

  // "a b - t c - u d" style list. When `variables`, names must start with ?.
  std::vector<TypedName> typed_list(bool variables) {
    std::vector<TypedName> out;
    std::vector<std::size_t> pending;
    while (lex_.peek().kind == Token::Kind::Symbol) {
      Token t = lex_.next();
      if (t.text == "-") {
        std::string ty = symbol("type name");
        if (pending.empty())
          fail(Errc::SyntaxError, "dangling type in typed list", t);
        for (std::size_t i : pending) out[i].type = ty;
        pending.clear();
        continue;
      }
      bool is_var = !t.text.empty() && t.text[0] == '?';
      if (variables && !is_var)
        fail(Errc::SyntaxError, "expected variable beginning with ?", t);
      if (!variables && is_var)
        fail(Errc::SyntaxError, "unexpected variable " + t.text, t);
      pending.push_back(out.size());
      out.push_back(TypedName{t.text, ""});
    }
    return out;
  }

  void check_unique_names(const std::vector<TypedName>& list, const std::string& what) {
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j)
        if (list[i].name == list[j].name)
          throw Error(Errc::SyntaxError, "duplicate " + what + " " + list[i].name);
  }

  void check_type_forest(const Domain& d) {
    for (const auto& t : d.types) {
      std::string cur = t.effective_type();
      std::size_t hops = 0;
      while (cur != "object") {
        if (++hops > d.types.size())
          throw Error(Errc::SyntaxError, "type cycle involving " + t.name);
        const TypedName* node = nullptr;
        for (const auto& e : d.types)
          if (e.name == cur) {
            node = &e;
            break;
          }
        if (!node) break;  // unresolved parent; the checks report it
        cur = node->effective_type();
      }
    }
  }

  std::string slice(const Token& from, const Token& to) {
    std::size_t begin = from.offset;
    std::size_t end = to.offset + to.length;
    std::string raw = lex_.source().substr(begin, end - begin);
    std::transform(raw.begin(), raw.end(), raw.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return raw;
  }

  Lexer lex_;
  std::string source_;
};

}  // namespace

Domain parse_domain(const std::string& text, const std::string& source_name) {
  Parser p(text, source_name);
  return p.domain();
}

Problem parse_problem(const std::string& text, const std::string& source_name) {
  Parser p(text, source_name);
  return p.problem();
}

std::vector<Literal> parse_condition_text(const std::string& text) {
  Parser p(text, "<condition>");
  return p.condition();
}

std::vector<Literal> parse_ground_condition_text(const std::string& text) {
  Parser p(text, "<condition>");
  return p.ground_condition();
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Predicate parse_predicate_signature(const std::string& line) {
  std::string work = trim(line);
  if (work.empty() || work.front() != '(')
    throw Error(Errc::MalformedSignature, "expected ( in: " + line);
  // Split off a trailing ": description" that sits outside the parens.
  int depth = 0;
  std::size_t close = std::string::npos;
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (work[i] == '(') ++depth;
    if (work[i] == ')' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string::npos)
    throw Error(Errc::MalformedSignature, "unbalanced parens in: " + line);
  std::string sig = work.substr(0, close + 1);
  std::string rest = trim(work.substr(close + 1));
  std::string desc;
  if (!rest.empty()) {
    if (rest.front() != ':')
      throw Error(Errc::MalformedSignature, "unexpected trailing text in: " + line);
    desc = trim(rest.substr(1));
  }

  Predicate pred;
  try {
    Lexer lex(sig);
    Token open = lex.next();
    Token name = lex.next();
    if (open.kind != Token::Kind::LParen || name.kind != Token::Kind::Symbol ||
        name.text.empty() || name.text[0] == '?' || name.text == "=" ||
        name.text == "-")
      throw Error(Errc::MalformedSignature, "bad predicate name in: " + line);
    pred.name = name.text;
    std::vector<std::size_t> pending;
    while (lex.peek().kind == Token::Kind::Symbol) {
      Token t = lex.next();
      if (t.text == "-") {
        Token ty = lex.next();
        if (ty.kind != Token::Kind::Symbol || pending.empty())
          throw Error(Errc::MalformedSignature, "bad type annotation in: " + line);
        for (std::size_t i : pending) pred.params[i].type = ty.text;
        pending.clear();
        continue;
      }
      if (t.text.empty() || t.text[0] != '?')
        throw Error(Errc::MalformedSignature, "parameter must start with ? in: " + line);
      pending.push_back(pred.params.size());
      pred.params.push_back(TypedName{t.text, ""});
    }
    Token close_tok = lex.next();
    if (close_tok.kind != Token::Kind::RParen)
      throw Error(Errc::MalformedSignature, "unbalanced parens in: " + line);
    if (lex.next().kind != Token::Kind::End)
      throw Error(Errc::MalformedSignature, "trailing tokens in: " + line);
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedSignature) throw;
    throw Error(Errc::MalformedSignature, std::string(e.what()) + " in: " + line);
  }
  for (std::size_t i = 0; i < pred.params.size(); ++i)
    for (std::size_t j = i + 1; j < pred.params.size(); ++j)
      if (pred.params[i].name == pred.params[j].name)
        throw Error(Errc::MalformedSignature, "duplicate parameter in: " + line);
  pred.desc = desc;
  pred.raw = trim(line);
  return pred;
}

}  // namespace planforge::pddl
