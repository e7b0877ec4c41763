#include "gps/formula.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <unordered_map>

namespace gps {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

Int gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  Int g = gcd(a, b);
  Int r = (a / g) * b;
  return r < 0 ? -r : r;
}

Int pos_mod(const Int& a, const Int& b) {
  Int m = b < 0 ? -b : b;
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

bool is_reserved_name(const std::string& name) {
  return name == "gas" || name.rfind("__k", 0) == 0 || name.rfind("__m", 0) == 0;
}

// --- Vocabulary ---

Vocabulary::Vocabulary(std::vector<std::string> names) {
  for (auto& n : names) add(n);
}

void Vocabulary::add(const std::string& name) {
  if (name.empty()) throw UsageError("empty variable name");
  if (contains(name)) throw UsageError("duplicate variable: " + name);
  index_[name] = names_.size();
  names_.push_back(name);
}

bool Vocabulary::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

std::optional<size_t> Vocabulary::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// --- Term ---

Term Term::constant(Int k) {
  Term t;
  t.k_ = std::move(k);
  return t;
}

Term Term::variable(const Var& v) {
  Term t;
  t.coeffs_.emplace_back(v, 1);
  return t;
}

Term Term::operator+(const Term& o) const {
  Term r;
  r.k_ = k_ + o.k_;
  size_t i = 0, j = 0;
  while (i < coeffs_.size() || j < o.coeffs_.size()) {
    if (j == o.coeffs_.size() ||
        (i < coeffs_.size() && coeffs_[i].first < o.coeffs_[j].first)) {
      r.coeffs_.push_back(coeffs_[i++]);
    } else if (i == coeffs_.size() || o.coeffs_[j].first < coeffs_[i].first) {
      r.coeffs_.push_back(o.coeffs_[j++]);
    } else {
      Int c = coeffs_[i].second + o.coeffs_[j].second;
      if (c != 0) r.coeffs_.emplace_back(coeffs_[i].first, std::move(c));
      ++i, ++j;
    }
  }
  return r;
}

Term Term::operator-(const Term& o) const { return *this + o.scaled(-1); }

Term Term::scaled(const Int& k) const {
  Term r;
  if (k == 0) return r;
  r.k_ = k_ * k;
  r.coeffs_.reserve(coeffs_.size());
  for (auto& [v, c] : coeffs_) r.coeffs_.emplace_back(v, c * k);
  return r;
}

Int Term::coeff(const Var& v) const {
  auto it = std::lower_bound(
      coeffs_.begin(), coeffs_.end(), v,
      [](const auto& p, const Var& x) { return p.first < x; });
  if (it != coeffs_.end() && it->first == v) return it->second;
  return 0;
}

void Term::vars_into(std::set<Var>& out) const {
  for (auto& [v, c] : coeffs_) out.insert(v);
}

Term Term::substituted(const Var& v, const Term& t) const {
  Int c = coeff(v);
  if (c == 0) return *this;
  Term r = *this;
  auto it = std::lower_bound(
      r.coeffs_.begin(), r.coeffs_.end(), v,
      [](const auto& p, const Var& x) { return p.first < x; });
  r.coeffs_.erase(it);
  return r + t.scaled(c);
}

Term Term::renamed(const std::function<Var(const Var&)>& f) const {
  Term r = Term::constant(k_);
  for (auto& [v, c] : coeffs_) r = r + Term::variable(f(v)).scaled(c);
  return r;
}

Int Term::eval(const std::function<Int(const Var&)>& lookup) const {
  Int r = k_;
  for (auto& [v, c] : coeffs_) r += c * lookup(v);
  return r;
}

std::string Term::str() const {
  if (coeffs_.empty()) return k_.str();
  std::ostringstream os;
  bool first = true;
  for (auto& [v, c] : coeffs_) {
    if (first) {
      if (c == -1)
        os << "-";
      else if (c != 1)
        os << c.str() << "*";
    } else {
      os << (c < 0 ? " - " : " + ");
      Int a = c < 0 ? Int(-c) : c;
      if (a != 1) os << a.str() << "*";
    }
    os << v.str();
    first = false;
  }
  if (k_ > 0)
    os << " + " << k_.str();
  else if (k_ < 0)
    os << " - " << Int(-k_).str();
  return os.str();
}

size_t Term::hash() const {
  size_t h = std::hash<std::string>()(k_.str());
  for (auto& [v, c] : coeffs_) {
    h = h * 1000003 + std::hash<Var>()(v);
    h = h * 1000003 + std::hash<long>()(static_cast<long>(c % 1000000007));
  }
  return h;
}

// --- Atom ---

Atom Atom::negated() const {
  switch (kind) {
    case AtomKind::LeZ:  // !(t<=0)  <=>  -t+1 <= 0
      return {AtomKind::LeZ, Term::constant(1) - lhs, 0};
    case AtomKind::EqZ:
      return {AtomKind::NeZ, lhs, 0};
    case AtomKind::NeZ:
      return {AtomKind::EqZ, lhs, 0};
    case AtomKind::Div:
      return {AtomKind::NotDiv, lhs, modulus};
    case AtomKind::NotDiv:
      return {AtomKind::Div, lhs, modulus};
  }
  throw std::logic_error("bad atom kind");
}

bool Atom::eval(const std::function<Int(const Var&)>& lookup) const {
  Int v = lhs.eval(lookup);
  switch (kind) {
    case AtomKind::LeZ:
      return v <= 0;
    case AtomKind::EqZ:
      return v == 0;
    case AtomKind::NeZ:
      return v != 0;
    case AtomKind::Div:
      return pos_mod(v, modulus) == 0;
    case AtomKind::NotDiv:
      return pos_mod(v, modulus) != 0;
  }
  throw std::logic_error("bad atom kind");
}

namespace {

// Splits t into (pos, neg) with t = pos - neg and both sides cosmetic.
std::pair<Term, Term> split_sides(const Term& t) {
  Term pos, neg;
  for (auto& [v, c] : t.coeffs()) {
    if (c > 0)
      pos = pos + Term::variable(v).scaled(c);
    else
      neg = neg + Term::variable(v).scaled(-c);
  }
  const Int& k = t.constant_part();
  if (k > 0)
    pos = pos + Term::constant(k);
  else if (k < 0)
    neg = neg + Term::constant(-k);
  return {pos, neg};
}

}  // namespace

std::string Atom::str() const {
  auto [pos, neg] = split_sides(lhs);
  switch (kind) {
    case AtomKind::LeZ:
      return pos.str() + " <= " + neg.str();
    case AtomKind::EqZ:
      return pos.str() + " = " + neg.str();
    case AtomKind::NeZ:
      return pos.str() + " != " + neg.str();
    case AtomKind::Div:
      return modulus.str() + " | " + lhs.str();
    case AtomKind::NotDiv:
      return "!(" + modulus.str() + " | " + lhs.str() + ")";
  }
  throw std::logic_error("bad atom kind");
}

size_t Atom::hash() const {
  size_t h = lhs.hash() * 5 + static_cast<size_t>(kind);
  if (modulus != 0) h = h * 1000003 + std::hash<std::string>()(modulus.str());
  return h;
}

// --- Formula ---

struct Formula::Node {
  Kind kind;
  Atom atom;                   // Atom
  std::vector<Formula> kids;   // And/Or, Exists body at kids[0]
  std::vector<Var> binders;    // Exists
  size_t hash_cache = 0;
  size_t size_cache = 1;
};

namespace {
const std::shared_ptr<const Formula::Node>& true_node() {
  static const std::shared_ptr<const Formula::Node> n = [] {
    auto p = std::make_shared<Formula::Node>();
    p->kind = Formula::Kind::True;
    p->hash_cache = 1;
    return p;
  }();
  return n;
}
const std::shared_ptr<const Formula::Node>& false_node() {
  static const std::shared_ptr<const Formula::Node> n = [] {
    auto p = std::make_shared<Formula::Node>();
    p->kind = Formula::Kind::False;
    p->hash_cache = 2;
    return p;
  }();
  return n;
}
}  // namespace

Formula::Formula() : node_(true_node()) {}

Formula Formula::truth(bool b) { return Formula(b ? true_node() : false_node()); }

Formula Formula::atom(Atom a) {
  // Ground atoms fold to truth values.
  if (a.lhs.is_constant()) {
    return truth(a.eval([](const Var&) -> Int {
      throw std::logic_error("constant atom has no vars");
    }));
  }
  if (a.kind == AtomKind::Div || a.kind == AtomKind::NotDiv) {
    if (a.modulus < 1) throw UsageError("divisibility modulus must be >= 1");
    if (a.modulus == 1) return truth(a.kind == AtomKind::Div);
    // Normalize coefficients mod d.
    Term t = Term::constant(pos_mod(a.lhs.constant_part(), a.modulus));
    for (auto& [v, c] : a.lhs.coeffs()) {
      Int cc = pos_mod(c, a.modulus);
      if (cc != 0) t = t + Term::variable(v).scaled(cc);
    }
    if (t.is_constant())
      return truth((t.constant_part() == 0) == (a.kind == AtomKind::Div));
    a.lhs = t;
  } else {
    // Divide out the gcd of the coefficients.
    Int g = 0;
    for (auto& [v, c] : a.lhs.coeffs()) g = gcd(g, c);
    if (g > 1) {
      Term t;
      for (auto& [v, c] : a.lhs.coeffs()) t = t + Term::variable(v).scaled(c / g);
      switch (a.kind) {
        case AtomKind::LeZ:
          t = t + Term::constant(ceil_div(a.lhs.constant_part(), g));
          break;
        case AtomKind::EqZ:
        case AtomKind::NeZ: {
          if (a.lhs.constant_part() % g != 0)
            return truth(a.kind == AtomKind::NeZ);
          t = t + Term::constant(a.lhs.constant_part() / g);
          break;
        }
        default:
          break;
      }
      a.lhs = t;
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  n->hash_cache = n->atom.hash() * 7 + 3;
  return Formula(std::move(n));
}

Formula Formula::le(const Term& a, const Term& b) {
  return atom({AtomKind::LeZ, a - b, 0});
}
Formula Formula::lt(const Term& a, const Term& b) {
  return atom({AtomKind::LeZ, a - b + Term::constant(1), 0});
}
Formula Formula::eq(const Term& a, const Term& b) {
  return atom({AtomKind::EqZ, a - b, 0});
}
Formula Formula::ne(const Term& a, const Term& b) {
  return atom({AtomKind::NeZ, a - b, 0});
}
Formula Formula::divides(const Int& d, const Term& t) {
  return atom({AtomKind::Div, t, d});
}

Formula Formula::conj(std::vector<Formula> fs) {
  std::vector<Formula> kids;
  for (auto& f : fs) {
    if (f.is_false()) return truth(false);
    if (f.is_true()) continue;
    if (f.kind() == Kind::And) {
      for (auto& k : f.children()) kids.push_back(k);
    } else {
      kids.push_back(f);
    }
  }
  if (kids.empty()) return truth(true);
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->kids = std::move(kids);
  size_t h = 11;
  for (auto& k : n->kids) {
    h = h * 1000003 + k.hash();
    n->size_cache += k.node_count();
  }
  n->hash_cache = h;
  return Formula(std::move(n));
}

Formula Formula::disj(std::vector<Formula> fs) {
  std::vector<Formula> kids;
  for (auto& f : fs) {
    if (f.is_true()) return truth(true);
    if (f.is_false()) continue;
    if (f.kind() == Kind::Or) {
      for (auto& k : f.children()) kids.push_back(k);
    } else {
      kids.push_back(f);
    }
  }
  if (kids.empty()) return truth(false);
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->kids = std::move(kids);
  size_t h = 13;
  for (auto& k : n->kids) {
    h = h * 1000003 + k.hash();
    n->size_cache += k.node_count();
  }
  n->hash_cache = h;
  return Formula(std::move(n));
}

Formula Formula::exists(std::vector<Var> binders, Formula body) {
  if (binders.empty()) return body;
  if (body.is_true() || body.is_false()) return body;
  // Drop binders that do not occur.
  auto fv = body.free_vars();
  std::vector<Var> kept;
  for (auto& b : binders)
    if (fv.count(b)) kept.push_back(b);
  if (kept.empty()) return body;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exists;
  n->kids.push_back(body);
  n->binders = std::move(kept);
  size_t h = 17;
  for (auto& b : n->binders) h = h * 1000003 + std::hash<Var>()(b);
  h = h * 1000003 + body.hash();
  n->hash_cache = h;
  n->size_cache = 1 + body.node_count();
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Atom& Formula::atom_data() const { return node_->atom; }
const std::vector<Formula>& Formula::children() const { return node_->kids; }
const std::vector<Var>& Formula::binders() const { return node_->binders; }
const Formula& Formula::body() const { return node_->kids[0]; }
size_t Formula::hash() const { return node_->hash_cache; }
size_t Formula::node_count() const { return node_->size_cache; }

Formula Formula::negated() const {
  switch (kind()) {
    case Kind::True:
      return truth(false);
    case Kind::False:
      return truth(true);
    case Kind::Atom:
      return atom(node_->atom.negated());
    case Kind::And: {
      std::vector<Formula> fs;
      for (auto& k : node_->kids) fs.push_back(k.negated());
      return disj(std::move(fs));
    }
    case Kind::Or: {
      std::vector<Formula> fs;
      for (auto& k : node_->kids) fs.push_back(k.negated());
      return conj(std::move(fs));
    }
    case Kind::Exists:
      throw UsageError("cannot negate a quantified formula locally");
  }
  throw std::logic_error("bad kind");
}

Formula Formula::and_with(const Formula& o) const { return conj({*this, o}); }
Formula Formula::or_with(const Formula& o) const { return disj({*this, o}); }

namespace {
void free_vars_into(const Formula& f, std::set<Var>& out,
                    std::set<Var>& bound) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom: {
      std::set<Var> vs;
      f.atom_data().lhs.vars_into(vs);
      for (auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (auto& k : f.children()) free_vars_into(k, out, bound);
      return;
    case Formula::Kind::Exists: {
      std::vector<Var> added;
      for (auto& b : f.binders())
        if (bound.insert(b).second) added.push_back(b);
      free_vars_into(f.body(), out, bound);
      for (auto& b : added) bound.erase(b);
      return;
    }
  }
}
}  // namespace

std::set<Var> Formula::free_vars() const {
  std::set<Var> out, bound;
  free_vars_into(*this, out, bound);
  return out;
}

Formula Formula::substituted(const Var& v, const Term& t) const {
  return substituted(std::map<Var, Term>{{v, t}});
}

Formula Formula::substituted(const std::map<Var, Term>& sub) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return *this;
    case Kind::Atom: {
      Atom a = node_->atom;
      for (auto& [v, t] : sub) a.lhs = a.lhs.substituted(v, t);
      return atom(std::move(a));
    }
    case Kind::And: {
      std::vector<Formula> fs;
      for (auto& k : node_->kids) fs.push_back(k.substituted(sub));
      return conj(std::move(fs));
    }
    case Kind::Or: {
      std::vector<Formula> fs;
      for (auto& k : node_->kids) fs.push_back(k.substituted(sub));
      return disj(std::move(fs));
    }
    case Kind::Exists: {
      for (auto& b : node_->binders)
        if (sub.count(b))
          throw UsageError("substitution collides with binder " + b.str());
      return exists(node_->binders, body().substituted(sub));
    }
  }
  throw std::logic_error("bad kind");
}

Formula Formula::renamed(const std::function<Var(const Var&)>& f) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return *this;
    case Kind::Atom: {
      Atom a = node_->atom;
      a.lhs = a.lhs.renamed(f);
      return atom(std::move(a));
    }
    case Kind::And: {
      std::vector<Formula> fs;
      for (auto& k : node_->kids) fs.push_back(k.renamed(f));
      return conj(std::move(fs));
    }
    case Kind::Or: {
      std::vector<Formula> fs;
      for (auto& k : node_->kids) fs.push_back(k.renamed(f));
      return disj(std::move(fs));
    }
    case Kind::Exists: {
      // Binders are untouched; rename must leave them fixed.
      auto g = [&](const Var& v) -> Var {
        for (auto& b : node_->binders)
          if (b == v) return v;
        return f(v);
      };
      return exists(node_->binders, body().renamed(g));
    }
  }
  throw std::logic_error("bad kind");
}

bool Formula::eval(const std::function<Int(const Var&)>& lookup,
                   long binder_radius) const {
  switch (kind()) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Atom:
      return node_->atom.eval(lookup);
    case Kind::And:
      for (auto& k : node_->kids)
        if (!k.eval(lookup, binder_radius)) return false;
      return true;
    case Kind::Or:
      for (auto& k : node_->kids)
        if (k.eval(lookup, binder_radius)) return true;
      return false;
    case Kind::Exists: {
      if (binder_radius <= 0)
        throw NeedsSolverError("needs-solver: unresolved binder " +
                               node_->binders[0].str());
      // Test-oracle fallback: exhaustive search over a small box.
      std::map<Var, Int> assign;
      std::function<bool(size_t)> go = [&](size_t i) -> bool {
        if (i == node_->binders.size()) {
          auto look2 = [&](const Var& v) -> Int {
            auto it = assign.find(v);
            if (it != assign.end()) return it->second;
            return lookup(v);
          };
          return body().eval(look2, binder_radius);
        }
        for (long x = -binder_radius; x <= binder_radius; ++x) {
          assign[node_->binders[i]] = x;
          if (go(i + 1)) return true;
        }
        assign.erase(node_->binders[i]);
        return false;
      };
      return go(0);
    }
  }
  throw std::logic_error("bad kind");
}

bool Formula::equal(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind() || hash() != o.hash()) return false;
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Atom:
      return node_->atom == o.node_->atom;
    case Kind::And:
    case Kind::Or: {
      if (node_->kids.size() != o.node_->kids.size()) return false;
      for (size_t i = 0; i < node_->kids.size(); ++i)
        if (!node_->kids[i].equal(o.node_->kids[i])) return false;
      return true;
    }
    case Kind::Exists:
      return node_->binders == o.node_->binders && body().equal(o.body());
  }
  return false;
}

std::string Formula::str() const {
  switch (kind()) {
    case Kind::True:
      return "true";
    case Kind::False:
      return "false";
    case Kind::Atom:
      return node_->atom.str();
    case Kind::And: {
      std::string s;
      for (auto& k : node_->kids) {
        if (!s.empty()) s += " & ";
        bool paren = k.kind() == Kind::Or || k.kind() == Kind::Exists;
        s += paren ? "(" + k.str() + ")" : k.str();
      }
      return s;
    }
    case Kind::Or: {
      std::string s;
      for (auto& k : node_->kids) {
        if (!s.empty()) s += " | ";
        bool paren = k.kind() == Kind::Exists;
        s += paren ? "(" + k.str() + ")" : k.str();
      }
      return s;
    }
    case Kind::Exists: {
      std::string s = "exists ";
      for (size_t i = 0; i < node_->binders.size(); ++i) {
        if (i) s += ", ";
        s += node_->binders[i].str();
      }
      return s + ". " + body().str();
    }
  }
  throw std::logic_error("bad kind");
}

Formula identity_formula(const Vocabulary& voc) {
  std::vector<Formula> fs;
  for (auto& n : voc.names())
    fs.push_back(Formula::eq(Term::variable(nxt(n)), Term::variable(cur(n))));
  return Formula::conj(std::move(fs));
}

// --- fresh names ---

namespace {
std::atomic<uint64_t> g_fresh{0};
}

std::string fresh_mid_name(const std::string& base) {
  return "__m" + std::to_string(g_fresh.fetch_add(1)) + "_" + base;
}

std::string fresh_counter_name() {
  return "__k" + std::to_string(g_fresh.fetch_add(1));
}

// --- simplify ---

namespace {

// Eliminates binders fixed by unit-coefficient spine equalities.
Formula eliminate_unit_binders(const std::vector<Var>& binders, Formula body) {
  std::vector<Var> remaining = binders;
  bool changed = true;
  while (changed) {
    changed = false;
    if (body.kind() != Formula::Kind::And && body.kind() != Formula::Kind::Atom)
      break;
    std::vector<Formula> spine;
    if (body.kind() == Formula::Kind::And)
      spine = body.children();
    else
      spine = {body};
    for (size_t bi = 0; bi < remaining.size() && !changed; ++bi) {
      const Var& v = remaining[bi];
      for (size_t i = 0; i < spine.size(); ++i) {
        const Formula& c = spine[i];
        if (c.kind() != Formula::Kind::Atom) continue;
        const Atom& a = c.atom_data();
        if (a.kind != AtomKind::EqZ) continue;
        Int cv = a.lhs.coeff(v);
        if (cv != 1 && cv != -1) continue;
        // v = -(rest)/cv ; rest must not mention v after removal.
        Term rest = a.lhs - Term::variable(v).scaled(cv);
        Term def = rest.scaled(cv == 1 ? -1 : 1);
        std::vector<Formula> rebuilt;
        for (size_t j = 0; j < spine.size(); ++j) {
          if (j == i) continue;
          rebuilt.push_back(spine[j].substituted(v, def));
        }
        body = Formula::conj(std::move(rebuilt));
        remaining.erase(remaining.begin() + bi);
        changed = true;
        break;
      }
    }
  }
  return Formula::exists(remaining, body);
}

Formula simplify_rec(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::And: {
      std::vector<Formula> kids;
      for (auto& k : f.children()) kids.push_back(simplify_rec(k));
      Formula flat = Formula::conj(std::move(kids));
      if (flat.kind() != Formula::Kind::And) return flat;
      // Duplicate removal (structural).
      std::vector<Formula> uniq;
      for (auto& k : flat.children()) {
        bool dup = false;
        for (auto& u : uniq)
          if (u.equal(k)) {
            dup = true;
            break;
          }
        if (!dup) uniq.push_back(k);
      }
      // a & !a -> false for atoms.
      for (auto& u : uniq) {
        if (u.kind() != Formula::Kind::Atom) continue;
        Formula neg = Formula::atom(u.atom_data().negated());
        for (auto& w : uniq)
          if (w.equal(neg)) return Formula::truth(false);
      }
      return Formula::conj(std::move(uniq));
    }
    case Formula::Kind::Or: {
      std::vector<Formula> kids;
      for (auto& k : f.children()) kids.push_back(simplify_rec(k));
      Formula flat = Formula::disj(std::move(kids));
      if (flat.kind() != Formula::Kind::Or) return flat;
      std::vector<Formula> uniq;
      for (auto& k : flat.children()) {
        bool dup = false;
        for (auto& u : uniq)
          if (u.equal(k)) {
            dup = true;
            break;
          }
        if (!dup) uniq.push_back(k);
      }
      return Formula::disj(std::move(uniq));
    }
    case Formula::Kind::Exists: {
      Formula b = simplify_rec(f.body());
      return eliminate_unit_binders(f.binders(), std::move(b));
    }
  }
  throw std::logic_error("bad kind");
}

}  // namespace

Formula simplify(const Formula& f) { return simplify_rec(f); }

Formula compose(const Formula& f, const Formula& g, const Vocabulary& voc) {
  std::map<Var, Term> fsub, gsub;
  std::vector<Var> mids;
  for (auto& n : voc.names()) {
    Var m = cur(fresh_mid_name(n));
    mids.push_back(m);
    fsub[nxt(n)] = Term::variable(m);
    gsub[cur(n)] = Term::variable(m);
  }
  Formula body = f.substituted(fsub).and_with(g.substituted(gsub));
  return simplify(Formula::exists(std::move(mids), std::move(body)));
}

// --- State ---

State::State(const Vocabulary& voc, std::vector<Int> values)
    : voc_(voc), vals_(std::move(values)) {
  if (vals_.size() != voc_.size())
    throw UsageError("state arity mismatch with vocabulary");
}

State State::zeros(const Vocabulary& voc) {
  return State(voc, std::vector<Int>(voc.size(), Int(0)));
}

const Int& State::get(const std::string& name) const {
  auto i = voc_.index_of(name);
  if (!i) throw UsageError("state lookup of unknown variable: " + name);
  return vals_[*i];
}

void State::set(const std::string& name, Int v) {
  auto i = voc_.index_of(name);
  if (!i) throw UsageError("state update of unknown variable: " + name);
  vals_[*i] = std::move(v);
}

std::string State::str() const {
  std::string s = "{";
  for (size_t i = 0; i < voc_.size(); ++i) {
    if (i) s += ", ";
    s += voc_.names()[i] + "=" + vals_[i].str();
  }
  return s + "}";
}

bool evaluate(const Formula& f, const State& pre, const State& post,
              long binder_radius) {
  return f.eval(
      [&](const Var& v) -> Int {
        return v.tag == VarTag::Cur ? pre.get(v.name) : post.get(v.name);
      },
      binder_radius);
}

bool evaluate_state(const Formula& f, const State& m, long binder_radius) {
  return f.eval(
      [&](const Var& v) -> Int {
        if (v.tag != VarTag::Cur)
          throw UsageError("primed variable in state formula: " + v.str());
        return m.get(v.name);
      },
      binder_radius);
}

}  // namespace gps
