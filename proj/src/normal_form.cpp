#include "protoforge/normal_form.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>

namespace protoforge {

namespace {

// Clause of a DNF over at most 64 atoms; pos and neg are disjoint bitmasks.
struct Clause {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  bool operator==(const Clause& o) const {
    return pos == o.pos && neg == o.neg;
  }
  bool operator<(const Clause& o) const {
    return pos != o.pos ? pos < o.pos : neg < o.neg;
  }
  bool subsumes(const Clause& o) const {
    return (pos & ~o.pos) == 0 && (neg & ~o.neg) == 0;
  }
};

constexpr std::size_t kMaxAtoms = 64;
constexpr std::size_t kMaxClauses = 4096;

struct ClauseOverflow {};

/// DNF over a sorted list of atom keys, kept in Blake canonical form (the
/// set of all prime implicants), so equal boolean functions over the same
/// atoms have identical clause sets.
struct Dnf {
  std::vector<std::string> atoms;
  std::vector<Clause> clauses;

  bool is_false() const { return clauses.empty(); }
  bool is_true() const {
    return clauses.size() == 1 && clauses[0].pos == 0 && clauses[0].neg == 0;
  }
};

Dnf dnf_true() { return Dnf{{}, {Clause{}}}; }
Dnf dnf_false() { return Dnf{{}, {}}; }

Dnf dnf_atom(std::string key) {
  Dnf d;
  d.atoms = {std::move(key)};
  d.clauses = {Clause{1, 0}};
  return d;
}

void absorb(std::vector<Clause>& cs) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<Clause> kept;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < cs.size() && !dominated; ++j)
      if (j != i && cs[j].subsumes(cs[i]) && !(cs[i] == cs[j] && j > i))
        dominated = true;
    if (!dominated) kept.push_back(cs[i]);
  }
  cs = std::move(kept);
}

/// Iterated consensus + absorption: closes the clause set under consensus,
/// yielding all prime implicants (Blake canonical form).
void blake_closure(std::vector<Clause>& cs) {
  absorb(cs);
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t n = cs.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        std::uint64_t clash =
            (cs[i].pos & cs[j].neg) | (cs[j].pos & cs[i].neg);
        if (clash == 0 || (clash & (clash - 1)) != 0) continue;
        Clause c;
        c.pos = (cs[i].pos | cs[j].pos) & ~clash;
        c.neg = (cs[i].neg | cs[j].neg) & ~clash;
        if (c.pos & c.neg) continue;
        bool dominated = false;
        for (const auto& k : cs)
          if (k.subsumes(c)) {
            dominated = true;
            break;
          }
        if (!dominated) {
          cs.push_back(c);
          if (cs.size() > kMaxClauses) throw ClauseOverflow{};
          changed = true;
        }
      }
    }
    if (changed) absorb(cs);
    // An empty clause makes the whole function true.
    for (const auto& c : cs)
      if (c.pos == 0 && c.neg == 0) {
        cs = {Clause{}};
        return;
      }
  }
  std::sort(cs.begin(), cs.end());
}

/// Remap both operands onto the union of their atom lists.
std::pair<Dnf, Dnf> align(const Dnf& a, const Dnf& b,
                          std::vector<std::string>& atoms) {
  atoms = a.atoms;
  for (const auto& k : b.atoms)
    if (std::find(atoms.begin(), atoms.end(), k) == atoms.end())
      atoms.push_back(k);
  std::sort(atoms.begin(), atoms.end());
  if (atoms.size() > kMaxAtoms) throw ClauseOverflow{};
  auto remap = [&](const Dnf& d) {
    std::vector<int> to(d.atoms.size());
    for (std::size_t i = 0; i < d.atoms.size(); ++i)
      to[i] = static_cast<int>(
          std::find(atoms.begin(), atoms.end(), d.atoms[i]) - atoms.begin());
    Dnf out;
    out.atoms = atoms;
    for (const auto& c : d.clauses) {
      Clause nc;
      for (std::size_t i = 0; i < d.atoms.size(); ++i) {
        if (c.pos & (std::uint64_t(1) << i))
          nc.pos |= std::uint64_t(1) << to[i];
        if (c.neg & (std::uint64_t(1) << i))
          nc.neg |= std::uint64_t(1) << to[i];
      }
      out.clauses.push_back(nc);
    }
    return out;
  };
  return {remap(a), remap(b)};
}

Dnf dnf_or(const Dnf& a, const Dnf& b) {
  std::vector<std::string> atoms;
  auto [ra, rb] = align(a, b, atoms);
  Dnf out;
  out.atoms = std::move(atoms);
  out.clauses = ra.clauses;
  out.clauses.insert(out.clauses.end(), rb.clauses.begin(), rb.clauses.end());
  blake_closure(out.clauses);
  return out;
}

Dnf dnf_and(const Dnf& a, const Dnf& b) {
  std::vector<std::string> atoms;
  auto [ra, rb] = align(a, b, atoms);
  Dnf out;
  out.atoms = std::move(atoms);
  for (const auto& ca : ra.clauses) {
    for (const auto& cb : rb.clauses) {
      Clause c;
      c.pos = ca.pos | cb.pos;
      c.neg = ca.neg | cb.neg;
      if (c.pos & c.neg) continue;
      out.clauses.push_back(c);
      if (out.clauses.size() > kMaxClauses) throw ClauseOverflow{};
    }
  }
  blake_closure(out.clauses);
  return out;
}

Dnf dnf_not(const Dnf& a) {
  Dnf acc = dnf_true();
  acc.atoms = a.atoms;
  for (const auto& c : a.clauses) {
    // negation of one clause: disjunction of flipped literals
    Dnf lits;
    lits.atoms = a.atoms;
    for (std::size_t i = 0; i < a.atoms.size(); ++i) {
      if (c.pos & (std::uint64_t(1) << i))
        lits.clauses.push_back(Clause{0, std::uint64_t(1) << i});
      if (c.neg & (std::uint64_t(1) << i))
        lits.clauses.push_back(Clause{std::uint64_t(1) << i, 0});
    }
    acc = dnf_and(acc, lits);
    if (acc.is_false()) break;
  }
  return acc;
}

/// Restore the sorted-atom invariant after an atom substitution.
void sort_atoms(Dnf& d) {
  std::vector<std::size_t> order(d.atoms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return d.atoms[a] < d.atoms[b];
  });
  std::vector<int> to(d.atoms.size());
  std::vector<std::string> atoms(d.atoms.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    to[order[rank]] = static_cast<int>(rank);
    atoms[rank] = d.atoms[order[rank]];
  }
  for (auto& c : d.clauses) {
    Clause nc;
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      if (c.pos & (std::uint64_t(1) << i)) nc.pos |= std::uint64_t(1) << to[i];
      if (c.neg & (std::uint64_t(1) << i)) nc.neg |= std::uint64_t(1) << to[i];
    }
    c = nc;
  }
  d.atoms = std::move(atoms);
  std::sort(d.clauses.begin(), d.clauses.end());
}

/// Drop atoms not used by any clause (keeps keys canonical).
void prune_atoms(Dnf& d) {
  std::uint64_t used = 0;
  for (const auto& c : d.clauses) used |= c.pos | c.neg;
  std::vector<std::string> atoms;
  std::vector<int> to(d.atoms.size(), -1);
  for (std::size_t i = 0; i < d.atoms.size(); ++i)
    if (used & (std::uint64_t(1) << i)) {
      to[i] = static_cast<int>(atoms.size());
      atoms.push_back(d.atoms[i]);
    }
  std::vector<Clause> clauses;
  for (const auto& c : d.clauses) {
    Clause nc;
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      if (c.pos & (std::uint64_t(1) << i))
        nc.pos |= std::uint64_t(1) << to[i];
      if (c.neg & (std::uint64_t(1) << i))
        nc.neg |= std::uint64_t(1) << to[i];
    }
    clauses.push_back(nc);
  }
  std::sort(clauses.begin(), clauses.end());
  d.atoms = std::move(atoms);
  d.clauses = std::move(clauses);
}

std::string render_dnf(const Dnf& d, char tag) {
  std::string s(1, tag);
  s += "{";
  for (std::size_t i = 0; i < d.atoms.size(); ++i) {
    if (i) s += ",";
    s += d.atoms[i];
  }
  s += ";";
  for (std::size_t ci = 0; ci < d.clauses.size(); ++ci) {
    if (ci) s += "|";
    const auto& c = d.clauses[ci];
    bool first = true;
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      if (c.pos & (std::uint64_t(1) << i)) {
        if (!first) s += "&";
        s += "+" + std::to_string(i);
        first = false;
      }
      if (c.neg & (std::uint64_t(1) << i)) {
        if (!first) s += "&";
        s += "-" + std::to_string(i);
        first = false;
      }
    }
  }
  return s + "}";
}

/// Canonical affine form over opaque integer atoms.
struct IntPoly {
  std::map<std::string, std::int64_t> coeffs;
  std::int64_t constant = 0;

  bool is_const() const { return coeffs.empty(); }
  std::string render() const {
    std::string s = "I{" + std::to_string(constant);
    for (const auto& [k, c] : coeffs)
      s += ";" + std::to_string(c) + "*" + k;
    return s + "}";
  }
};

IntPoly poly_add(IntPoly a, const IntPoly& b, std::int64_t sign) {
  a.constant += sign * b.constant;
  for (const auto& [k, c] : b.coeffs) {
    a.coeffs[k] += sign * c;
    if (a.coeffs[k] == 0) a.coeffs.erase(k);
  }
  return a;
}

struct NfValue {
  enum class Kind { Bool, SetF, Poly, Opaque } kind;
  Dnf dnf;       // Bool: truth function; SetF: membership indicator
  IntPoly poly;  // Poly
  std::string opaque;

  std::string key() const {
    switch (kind) {
      case Kind::Bool:
        return render_dnf(dnf, 'B');
      case Kind::SetF:
        return render_dnf(dnf, 'S');
      case Kind::Poly:
        return poly.render();
      case Kind::Opaque:
        return "O{" + opaque + "}";
    }
    return "?";
  }
};

struct Normalizer {
  std::vector<std::string> bound;  // de Bruijn for quantifier binders

  std::optional<std::size_t> bound_index(const std::string& name) const {
    for (std::size_t i = bound.size(); i > 0;) {
      --i;
      if (bound[i] == name) return bound.size() - 1 - i;
    }
    return std::nullopt;
  }

  std::string ref_key(const ExprPtr& e) const {
    if (e->kind == ExprKind::ArgRef) {
      if (auto i = bound_index(e->name)) return "$" + std::to_string(*i);
    }
    return e->name;
  }

  NfValue mk_opaque(std::string key) {
    NfValue v;
    v.kind = NfValue::Kind::Opaque;
    v.opaque = std::move(key);
    return v;
  }

  NfValue mk_bool(Dnf d) {
    prune_atoms(d);
    NfValue v;
    v.kind = NfValue::Kind::Bool;
    v.dnf = std::move(d);
    return v;
  }

  NfValue mk_setf(Dnf d) {
    prune_atoms(d);
    NfValue v;
    v.kind = NfValue::Kind::SetF;
    v.dnf = std::move(d);
    return v;
  }

  NfValue mk_poly(IntPoly p) {
    NfValue v;
    v.kind = NfValue::Kind::Poly;
    v.poly = std::move(p);
    return v;
  }

  /// Key usable as an opaque atom inside a parent.
  std::string atom_key(const ExprPtr& e) { return norm(e).key(); }

  Dnf as_bool_dnf(const ExprPtr& e) {
    NfValue v = norm(e);
    if (v.kind == NfValue::Kind::Bool) return v.dnf;
    return dnf_atom(v.key());
  }

  Dnf as_set_indicator(const ExprPtr& e) {
    NfValue v = norm(e);
    if (v.kind == NfValue::Kind::SetF) return v.dnf;
    return dnf_atom(v.key());
  }

  IntPoly as_poly(const ExprPtr& e) {
    NfValue v = norm(e);
    if (v.kind == NfValue::Kind::Poly) return v.poly;
    IntPoly p;
    p.coeffs[v.key()] = 1;
    return p;
  }

  /// Equality of two set expressions: emptiness of the symmetric
  /// difference indicator. Returns a Bool NfValue.
  NfValue set_equality(const ExprPtr& a, const ExprPtr& b) {
    Dnf ia = as_set_indicator(a);
    Dnf ib = as_set_indicator(b);
    // xor = (a & !b) | (!a & b)
    Dnf x = dnf_or(dnf_and(ia, dnf_not(ib)), dnf_and(dnf_not(ia), ib));
    return emptiness(std::move(x));
  }

  NfValue emptiness(Dnf indicator) {
    if (indicator.is_false()) {
      NfValue v;
      v.kind = NfValue::Kind::Bool;
      v.dnf = dnf_true();
      return v;
    }
    prune_atoms(indicator);
    return mk_bool(dnf_atom("empty(" + render_dnf(indicator, 'S') + ")"));
  }

  NfValue int_equality(const ExprPtr& a, const ExprPtr& b) {
    IntPoly d = poly_add(as_poly(a), as_poly(b), -1);
    if (d.is_const()) {
      NfValue v;
      v.kind = NfValue::Kind::Bool;
      v.dnf = d.constant == 0 ? dnf_true() : dnf_false();
      return v;
    }
    // sign-normalize so a=b and b=a coincide
    if (d.coeffs.begin()->second < 0) {
      for (auto& [k, c] : d.coeffs) c = -c;
      d.constant = -d.constant;
    }
    return mk_bool(dnf_atom("eqz(" + d.render() + ")"));
  }

  /// a <= b as b - a >= 0; a < b as b - a - 1 >= 0 (integers).
  NfValue int_ge0(const ExprPtr& a, const ExprPtr& b, std::int64_t slack) {
    IntPoly d = poly_add(as_poly(b), as_poly(a), -1);
    d.constant -= slack;
    if (d.is_const()) {
      NfValue v;
      v.kind = NfValue::Kind::Bool;
      v.dnf = d.constant >= 0 ? dnf_true() : dnf_false();
      return v;
    }
    return mk_bool(dnf_atom("ge0(" + d.render() + ")"));
  }

  NfValue equality(const ExprPtr& a, const ExprPtr& b) {
    if (a->type.is_set()) return set_equality(a, b);
    if (a->type.is_int()) return int_equality(a, b);
    if (a->type.is_bool()) {
      Dnf da = as_bool_dnf(a);
      Dnf db = as_bool_dnf(b);
      return mk_bool(dnf_or(dnf_and(da, db),
                            dnf_and(dnf_not(da), dnf_not(db))));
    }
    std::string ka = atom_key(a), kb = atom_key(b);
    if (kb < ka) std::swap(ka, kb);
    if (ka == kb) {
      NfValue v;
      v.kind = NfValue::Kind::Bool;
      v.dnf = dnf_true();
      return v;
    }
    return mk_bool(dnf_atom("eq(" + ka + "," + kb + ")"));
  }

  NfValue norm(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::BoolLit: {
        NfValue v;
        v.kind = NfValue::Kind::Bool;
        v.dnf = e->bool_value ? dnf_true() : dnf_false();
        return v;
      }
      case ExprKind::IntLit: {
        IntPoly p;
        p.constant = e->int_value;
        return mk_poly(p);
      }
      case ExprKind::VarRef:
      case ExprKind::ParamRef:
      case ExprKind::ArgRef: {
        std::string key = ref_key(e);
        if (e->type.is_bool()) return mk_bool(dnf_atom(key));
        if (e->type.is_set()) return mk_setf(dnf_atom(key));
        if (e->type.is_int()) {
          IntPoly p;
          p.coeffs[key] = 1;
          return mk_poly(p);
        }
        return mk_opaque(key);
      }
      case ExprKind::EmptySet: {
        NfValue v;
        v.kind = NfValue::Kind::SetF;
        v.dnf = dnf_false();
        return v;
      }
      case ExprKind::Singleton:
        return mk_setf(dnf_atom("single(" + atom_key(e->children[0]) + ")"));
      case ExprKind::SetLit: {
        Dnf d = dnf_false();
        for (const auto& c : e->children)
          d = dnf_or(d, dnf_atom("single(" + atom_key(c) + ")"));
        return mk_setf(std::move(d));
      }
      case ExprKind::Not:
        return mk_bool(dnf_not(as_bool_dnf(e->children[0])));
      case ExprKind::And:
        return mk_bool(dnf_and(as_bool_dnf(e->children[0]),
                               as_bool_dnf(e->children[1])));
      case ExprKind::Or:
        return mk_bool(dnf_or(as_bool_dnf(e->children[0]),
                              as_bool_dnf(e->children[1])));
      case ExprKind::Implies:
        return mk_bool(dnf_or(dnf_not(as_bool_dnf(e->children[0])),
                              as_bool_dnf(e->children[1])));
      case ExprKind::Eq:
        return equality(e->children[0], e->children[1]);
      case ExprKind::Neq: {
        NfValue v = equality(e->children[0], e->children[1]);
        return mk_bool(dnf_not(v.dnf));
      }
      case ExprKind::Lt:
        return int_ge0(e->children[0], e->children[1], 1);
      case ExprKind::Le:
        return int_ge0(e->children[0], e->children[1], 0);
      case ExprKind::Add:
        return mk_poly(poly_add(as_poly(e->children[0]),
                                as_poly(e->children[1]), 1));
      case ExprKind::Sub:
        return mk_poly(poly_add(as_poly(e->children[0]),
                                as_poly(e->children[1]), -1));
      case ExprKind::Union:
        return mk_setf(dnf_or(as_set_indicator(e->children[0]),
                              as_set_indicator(e->children[1])));
      case ExprKind::Inter:
        return mk_setf(dnf_and(as_set_indicator(e->children[0]),
                               as_set_indicator(e->children[1])));
      case ExprKind::Diff:
        return mk_setf(dnf_and(as_set_indicator(e->children[0]),
                               dnf_not(as_set_indicator(e->children[1]))));
      case ExprKind::Member: {
        std::string xk = atom_key(e->children[0]);
        Dnf ind = as_set_indicator(e->children[1]);
        // substitute membership atoms: x in base_i
        Dnf out;
        for (const auto& base : ind.atoms) {
          // x in {y}  <=>  x = y
          if (base.rfind("single(", 0) == 0) {
            std::string yk = base.substr(7, base.size() - 8);
            std::string a = xk, b = yk;
            if (b < a) std::swap(a, b);
            out.atoms.push_back(a == b ? "true()"
                                       : "eq(" + a + "," + b + ")");
          } else {
            out.atoms.push_back("in(" + xk + "," + base + ")");
          }
        }
        out.clauses = ind.clauses;
        // a trivially-true atom (x in {x}) needs re-canonicalization
        for (std::size_t i = 0; i < out.atoms.size(); ++i) {
          if (out.atoms[i] == "true()") {
            std::vector<Clause> cs;
            for (auto c : out.clauses) {
              if (c.neg & (std::uint64_t(1) << i)) continue;
              c.pos &= ~(std::uint64_t(1) << i);
              cs.push_back(c);
            }
            out.clauses = std::move(cs);
          }
        }
        sort_atoms(out);
        blake_closure(out.clauses);
        return mk_bool(std::move(out));
      }
      case ExprKind::Subset: {
        Dnf ia = as_set_indicator(e->children[0]);
        Dnf ib = as_set_indicator(e->children[1]);
        return emptiness(dnf_and(ia, dnf_not(ib)));
      }
      case ExprKind::Apply:
        return wrap_by_type(e, "ap(" + atom_key(e->children[0]) + "," +
                                   atom_key(e->children[1]) + ")");
      case ExprKind::FuncUpdate:
        return mk_opaque("upd(" + atom_key(e->children[0]) + "," +
                         atom_key(e->children[1]) + "," +
                         atom_key(e->children[2]) + ")");
      case ExprKind::Forall:
      case ExprKind::Exists: {
        bound.push_back(e->name);
        std::string body = atom_key(e->children[0]);
        bound.pop_back();
        std::string q = e->kind == ExprKind::Forall ? "all" : "ex";
        return mk_bool(
            dnf_atom(q + "[" + e->domain + "](" + body + ")"));
      }
      case ExprKind::Ite:
        return wrap_by_type(e, "ite(" + atom_key(e->children[0]) + "," +
                                   atom_key(e->children[1]) + "," +
                                   atom_key(e->children[2]) + ")");
      case ExprKind::HoleCall:
        throw EvalError("cannot normalize a hole call");
      case ExprKind::Placeholder:
        throw EvalError("cannot normalize a grammar placeholder");
    }
    throw EvalError("unreachable");
  }

  NfValue wrap_by_type(const ExprPtr& e, std::string key) {
    if (e->type.is_bool()) return mk_bool(dnf_atom(key));
    if (e->type.is_set()) return mk_setf(dnf_atom(std::move(key)));
    if (e->type.is_int()) {
      IntPoly p;
      p.coeffs[std::move(key)] = 1;
      return mk_poly(p);
    }
    return mk_opaque(std::move(key));
  }
};

}  // namespace

NormalForm normalize(const ExprPtr& e) {
  try {
    Normalizer n;
    return NormalForm{n.norm(e).key()};
  } catch (const ClauseOverflow&) {
    // fall back to the syntactic form; sound, just merges nothing
    return NormalForm{"O{raw:" + to_string(e) + "}"};
  }
}

}  // namespace protoforge
