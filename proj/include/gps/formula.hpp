#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gps {

using Int = boost::multiprecision::cpp_int;

Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
Int gcd(Int a, Int b);
Int lcm(const Int& a, const Int& b);
// mod with result in [0, |b|)
Int pos_mod(const Int& a, const Int& b);

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by evaluate() when a quantified formula cannot be decided locally.
struct NeedsSolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class VarTag : uint8_t { Cur = 0, Next = 1 };

// A program variable occurrence: unprimed (Cur) or primed (Next).
// Binder variables (loop counters, composition midpoints) are Cur-tagged
// and carry reserved "__k"/"__m" name prefixes.
struct Var {
  std::string name;
  VarTag tag = VarTag::Cur;

  bool operator==(const Var& o) const { return tag == o.tag && name == o.name; }
  bool operator<(const Var& o) const {
    return name != o.name ? name < o.name : tag < o.tag;
  }
  Var primed() const { return {name, VarTag::Next}; }
  Var unprimed() const { return {name, VarTag::Cur}; }
  std::string str() const { return tag == VarTag::Next ? name + "'" : name; }
};

inline Var cur(std::string name) { return {std::move(name), VarTag::Cur}; }
inline Var nxt(std::string name) { return {std::move(name), VarTag::Next}; }

bool is_reserved_name(const std::string& name);  // gas / __k* / __m*

// The ordered program vocabulary X.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  // Appends a name; throws UsageError on duplicates/empty.
  void add(const std::string& name);
  bool contains(const std::string& name) const;
  std::optional<size_t> index_of(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }
  size_t size() const { return names_.size(); }
  bool operator==(const Vocabulary& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, size_t> index_;
};

// A linear integer term: constant + sum of coeff * var.  Construction
// canonicalizes (sorted vars, no zero coefficients), which keeps the
// linearity invariant by shape.
class Term {
 public:
  Term() = default;  // zero
  static Term constant(Int k);
  static Term variable(const Var& v);

  Term operator+(const Term& o) const;
  Term operator-(const Term& o) const;
  Term operator-() const { return scaled(-1); }
  Term scaled(const Int& k) const;

  const Int& constant_part() const { return k_; }
  const std::vector<std::pair<Var, Int>>& coeffs() const { return coeffs_; }
  Int coeff(const Var& v) const;
  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && k_ == 0; }
  void vars_into(std::set<Var>& out) const;

  // Replaces v by t (t must not mention v).
  Term substituted(const Var& v, const Term& t) const;
  Term renamed(const std::function<Var(const Var&)>& f) const;

  Int eval(const std::function<Int(const Var&)>& lookup) const;
  std::string str() const;

  bool operator==(const Term& o) const {
    return k_ == o.k_ && coeffs_ == o.coeffs_;
  }
  size_t hash() const;

 private:
  std::vector<std::pair<Var, Int>> coeffs_;  // sorted by Var
  Int k_ = 0;
};

// Canonical atom forms over a linear term t:
//   LeZ: t <= 0,  EqZ: t = 0,  NeZ: t != 0,
//   Div: d | t,   NotDiv: !(d | t)   (d >= 1)
enum class AtomKind : uint8_t { LeZ, EqZ, NeZ, Div, NotDiv };

struct Atom {
  AtomKind kind = AtomKind::LeZ;
  Term lhs;
  Int modulus = 0;  // Div/NotDiv only

  Atom negated() const;
  // Evaluates the ground relation given a variable lookup.
  bool eval(const std::function<Int(const Var&)>& lookup) const;
  std::string str() const;
  bool operator==(const Atom& o) const {
    return kind == o.kind && modulus == o.modulus && lhs == o.lhs;
  }
  size_t hash() const;
};

// Immutable NNF formula: True | False | Atom | And | Or | Exists.
// Negation is pushed to atoms on construction; only existential binders
// are representable (universal queries are a solver concern).
class Formula {
 public:
  enum class Kind : uint8_t { True, False, Atom, And, Or, Exists };

  Formula();  // True
  static Formula truth(bool b);

  static Formula atom(Atom a);
  // Two-sided constructors (canonicalize to <=0 form over the integers).
  static Formula le(const Term& a, const Term& b);
  static Formula lt(const Term& a, const Term& b);
  static Formula ge(const Term& a, const Term& b) { return le(b, a); }
  static Formula gt(const Term& a, const Term& b) { return lt(b, a); }
  static Formula eq(const Term& a, const Term& b);
  static Formula ne(const Term& a, const Term& b);
  static Formula divides(const Int& d, const Term& t);

  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula exists(std::vector<Var> binders, Formula body);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  const Atom& atom_data() const;
  const std::vector<Formula>& children() const;  // And/Or
  const std::vector<Var>& binders() const;       // Exists
  const Formula& body() const;                   // Exists

  // NNF negation; throws UsageError if the formula contains binders.
  Formula negated() const;

  Formula and_with(const Formula& o) const;
  Formula or_with(const Formula& o) const;

  std::set<Var> free_vars() const;
  size_t node_count() const;

  // Substitutes free occurrences of v; never captures (binder names are
  // reserved and never substituted into).
  Formula substituted(const Var& v, const Term& t) const;
  Formula substituted(const std::map<Var, Term>& sub) const;
  Formula renamed(const std::function<Var(const Var&)>& f) const;

  // Ground evaluation; binders are searched within `binder_radius` when
  // nonzero, otherwise NeedsSolverError is raised.
  bool eval(const std::function<Int(const Var&)>& lookup,
            long binder_radius = 0) const;

  std::string str() const;
  size_t hash() const;
  bool equal(const Formula& o) const;  // structural
  bool same_node(const Formula& o) const { return node_ == o.node_; }

  struct Node;  // implementation detail, public for construction helpers

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Identity transition over a vocabulary: /\ x' = x.
Formula identity_formula(const Vocabulary& voc);

// Relational composition f . g = exists X''. f[X'->X''] /\ g[X->X''],
// with the midpoint variables emitted as fresh "__m" binders (and
// eliminated on the spot when they are fixed by unit equalities).
Formula compose(const Formula& f, const Formula& g, const Vocabulary& voc);

// Equivalence-preserving cleanup: constant folding, T/F absorption,
// flattening, duplicate-conjunct removal, unit-equality binder elimination.
Formula simplify(const Formula& f);

// Fresh reserved names.
std::string fresh_mid_name(const std::string& base);
std::string fresh_counter_name();

// A total assignment over a vocabulary.
class State {
 public:
  State() = default;
  State(const Vocabulary& voc, std::vector<Int> values);
  static State zeros(const Vocabulary& voc);

  const Int& get(const std::string& name) const;
  void set(const std::string& name, Int v);
  const Vocabulary& vocab() const { return voc_; }
  const std::vector<Int>& values() const { return vals_; }
  std::string str() const;
  bool operator==(const State& o) const = default;

 private:
  Vocabulary voc_;
  std::vector<Int> vals_;
};

// M ->f M' : pre on unprimed, post on primed.
bool evaluate(const Formula& f, const State& pre, const State& post,
              long binder_radius = 0);
// State-formula evaluation (unprimed only).
bool evaluate_state(const Formula& f, const State& m, long binder_radius = 0);

// Parses the textual formula grammar: infix atoms `x' <= 2*x + 1`,
// `&`, `|`, `!`, `true`/`false`, `2 | x`, `exists k, j. ...`.
Formula parse_formula(const std::string& text);

}  // namespace gps

template <>
struct std::hash<gps::Var> {
  size_t operator()(const gps::Var& v) const {
    return std::hash<std::string>()(v.name) * 2 + static_cast<size_t>(v.tag);
  }
};
