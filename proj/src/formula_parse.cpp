#include <cctype>

#include "gps/formula.hpp"

namespace gps {

namespace {

struct FTok {
  enum Kind { TInt, TIdent, TOp, TEnd } kind;
  std::string text;
  Int value;
  size_t pos;
};

class FLexer {
 public:
  explicit FLexer(const std::string& s) : s_(&s) { advance(); }
  const FTok& peek() const { return tok_; }
  FTok take() {
    FTok t = tok_;
    advance();
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw UsageError("formula parse error at offset " +
                     std::to_string(tok_.pos) + ": " + msg);
  }

 private:
  void advance() {
    const std::string& s = *s_;
    while (i_ < s.size() && std::isspace(static_cast<unsigned char>(s[i_])))
      ++i_;
    tok_.pos = i_;
    if (i_ >= s.size()) {
      tok_ = {FTok::TEnd, "", 0, i_};
      return;
    }
    char c = s[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      tok_ = {FTok::TInt, s.substr(i_, j - i_), Int(s.substr(i_, j - i_)), i_};
      i_ = j;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      std::string id = s.substr(i_, j - i_);
      int primes = 0;
      while (j < s.size() && s[j] == '\'') ++j, ++primes;
      if (primes > 1)
        throw UsageError("double-primed variables are not writable: " + id);
      tok_ = {FTok::TIdent, id + (primes ? "'" : ""), 0, i_};
      i_ = j;
      return;
    }
    auto two = s.substr(i_, 2);
    if (two == "<=" || two == ">=" || two == "==" || two == "!=" ||
        two == "&&" || two == "||") {
      tok_ = {FTok::TOp, two, 0, i_};
      i_ += 2;
      return;
    }
    std::string one(1, c);
    if (std::string("<>=&|!(),.+-*").find(c) != std::string::npos) {
      tok_ = {FTok::TOp, one, 0, i_};
      i_ += 1;
      return;
    }
    throw UsageError("unexpected character '" + one + "' at offset " +
                     std::to_string(i_));
  }

  const std::string* s_;
  size_t i_ = 0;
  FTok tok_;
};

class FParser {
 public:
  explicit FParser(const std::string& s) : lx_(s) {}

  Formula parse() {
    Formula f = formula();
    if (lx_.peek().kind != FTok::TEnd) lx_.fail("trailing input");
    return f;
  }

 private:
  bool is_op(const std::string& o) const {
    return lx_.peek().kind == FTok::TOp && lx_.peek().text == o;
  }
  bool is_kw(const std::string& k) const {
    return lx_.peek().kind == FTok::TIdent && lx_.peek().text == k;
  }
  void expect(const std::string& o) {
    if (!is_op(o)) lx_.fail("expected '" + o + "'");
    lx_.take();
  }

  Formula formula() { return or_expr(); }

  Formula or_expr() {
    std::vector<Formula> fs{and_expr()};
    while (is_op("|") || is_op("||")) {
      lx_.take();
      fs.push_back(and_expr());
    }
    return Formula::disj(std::move(fs));
  }

  Formula and_expr() {
    std::vector<Formula> fs{unary()};
    while (is_op("&") || is_op("&&")) {
      lx_.take();
      fs.push_back(unary());
    }
    return Formula::conj(std::move(fs));
  }

  Formula unary() {
    if (is_op("!")) {
      lx_.take();
      return unary().negated();
    }
    if (is_kw("exists")) {
      lx_.take();
      std::vector<Var> binders;
      for (;;) {
        if (lx_.peek().kind != FTok::TIdent) lx_.fail("expected binder name");
        binders.push_back(cur(lx_.take().text));
        if (is_op(","))
          lx_.take();
        else
          break;
      }
      expect(".");
      return Formula::exists(std::move(binders), or_expr());
    }
    return primary();
  }

  Formula primary() {
    if (is_kw("true")) {
      lx_.take();
      return Formula::truth(true);
    }
    if (is_kw("false")) {
      lx_.take();
      return Formula::truth(false);
    }
    if (is_op("(")) {
      // '(' opens either a subformula or a parenthesized atom lhs like
      // "(x + 1) <= y"; disambiguate by backtracking.
      FLexer save = lx_;
      try {
        lx_.take();
        Formula f = formula();
        expect(")");
        return f;
      } catch (const UsageError&) {
        lx_ = save;
        return relation(term());
      }
    }
    return atom();
  }

  Term term() {
    Term t = factor();
    for (;;) {
      if (is_op("+")) {
        lx_.take();
        t = t + factor();
      } else if (is_op("-")) {
        lx_.take();
        t = t - factor();
      } else {
        return t;
      }
    }
  }

  Term factor() {
    if (is_op("-")) {
      lx_.take();
      return -factor();
    }
    if (is_op("(")) {
      lx_.take();
      Term t = term();
      expect(")");
      return t;
    }
    if (lx_.peek().kind == FTok::TInt) {
      Int k = lx_.take().value;
      if (is_op("*")) {
        lx_.take();
        return factor().scaled(k);
      }
      return Term::constant(k);
    }
    if (lx_.peek().kind == FTok::TIdent) {
      std::string id = lx_.take().text;
      if (id == "true" || id == "false" || id == "exists")
        lx_.fail("keyword in term position");
      if (!id.empty() && id.back() == '\'')
        return Term::variable(nxt(id.substr(0, id.size() - 1)));
      return Term::variable(cur(id));
    }
    lx_.fail("expected term");
  }

  Formula atom() {
    // Divisibility: INT '|' term.
    if (lx_.peek().kind == FTok::TInt) {
      FTok t = lx_.take();
      if (is_op("|")) {
        lx_.take();
        return Formula::divides(t.value, term());
      }
      // Re-seed: the INT begins an ordinary term; continue it.
      Term lhs = Term::constant(t.value);
      if (is_op("*")) {
        lx_.take();
        lhs = factor().scaled(t.value);
      }
      for (;;) {
        if (is_op("+")) {
          lx_.take();
          lhs = lhs + factor();
        } else if (is_op("-")) {
          lx_.take();
          lhs = lhs - factor();
        } else {
          break;
        }
      }
      return relation(lhs);
    }
    return relation(term());
  }

  Formula relation(const Term& lhs) {
    if (lx_.peek().kind != FTok::TOp) lx_.fail("expected relation");
    std::string op = lx_.take().text;
    Term rhs = term();
    if (op == "<") return Formula::lt(lhs, rhs);
    if (op == "<=") return Formula::le(lhs, rhs);
    if (op == ">") return Formula::gt(lhs, rhs);
    if (op == ">=") return Formula::ge(lhs, rhs);
    if (op == "=" || op == "==") return Formula::eq(lhs, rhs);
    if (op == "!=") return Formula::ne(lhs, rhs);
    lx_.fail("unknown relation '" + op + "'");
  }

  FLexer lx_;
};

}  // namespace

Formula parse_formula(const std::string& text) { return FParser(text).parse(); }

}  // namespace gps
