#include "lpfd/formula.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace lpfd {

namespace {

std::shared_ptr<const fnode> make(fnode n) {
  if (!n.voc) throw formula_error("formula node without vocabulary");
  return std::make_shared<const fnode>(std::move(n));
}

const vocab_ptr& voc_of(const formula& f) {
  if (!f.valid()) throw formula_error("empty formula");
  return f.voc();
}

void check_same_voc(const formula& a, const formula& b) {
  if (a.voc() == b.voc()) return;
  if (*a.voc() != *b.voc())
    throw vocabulary_error("formulas built over different vocabularies");
}

void check_set(const vocab_ptr& voc, var_set s) {
  if (!s.subset_of(voc->all_vars()))
    throw vocabulary_error("variable set exceeds vocabulary");
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

}  // namespace

bool formula::operator==(const formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  const fnode& a = *node_;
  const fnode& b = *o.node_;
  if (a.kind != b.kind || a.xs != b.xs || a.ys != b.ys || a.zs != b.zs ||
      a.ts != b.ts || a.target != b.target || a.sym != b.sym || a.args != b.args)
    return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (a.lhs && !(formula(a.lhs) == formula(b.lhs))) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.rhs && !(formula(a.rhs) == formula(b.rhs))) return false;
  return true;
}

std::size_t formula::hash() const {
  if (!node_) return 0;
  const fnode& n = *node_;
  std::size_t h = static_cast<std::size_t>(n.kind);
  h = mix(h, n.xs.bits());
  h = mix(h, n.ys.bits());
  h = mix(h, n.zs.bits());
  h = mix(h, n.ts.bits());
  h = mix(h, n.target);
  h = mix(h, n.sym);
  for (var_id a : n.args) h = mix(h, a);
  if (n.lhs) h = mix(h, formula(n.lhs).hash());
  if (n.rhs) h = mix(h, formula(n.rhs).hash());
  return h;
}

// ---- constructors ---------------------------------------------------------

formula pred(const vocab_ptr& voc, const std::string& name,
             const std::vector<std::string>& args) {
  std::vector<var_id> ids;
  ids.reserve(args.size());
  for (const auto& a : args) ids.push_back(voc->require_variable(a));
  return pred(voc, voc->require_predicate(name), std::move(ids));
}

formula pred(const vocab_ptr& voc, std::size_t p, std::vector<var_id> args) {
  if (p >= voc->predicates().size()) throw vocabulary_error("predicate index out of range");
  const auto& info = voc->predicate(p);
  if (static_cast<int>(args.size()) != info.arity)
    throw formula_error("predicate " + info.name + " expects " +
                        std::to_string(info.arity) + " arguments, got " +
                        std::to_string(args.size()));
  for (var_id a : args)
    if (a >= voc->var_count()) throw vocabulary_error("argument variable out of range");
  fnode n{.kind = fkind::pred, .voc = voc};
  n.sym = p;
  n.args = std::move(args);
  return formula(make(std::move(n)));
}

formula dep(const vocab_ptr& voc, var_set xs, var_id target) {
  check_set(voc, xs);
  if (target >= voc->var_count()) throw vocabulary_error("dependence target out of range");
  fnode n{.kind = fkind::dep, .voc = voc};
  n.xs = xs;
  n.target = target;
  return formula(make(std::move(n)));
}

formula dep_set(const vocab_ptr& voc, var_set xs, var_set targets) {
  check_set(voc, xs);
  check_set(voc, targets);
  fnode n{.kind = fkind::dep_set, .voc = voc};
  n.xs = xs;
  n.ts = targets;
  return formula(make(std::move(n)));
}

formula nominal(const vocab_ptr& voc, const std::string& name) {
  return nominal(voc, voc->require_nominal(name));
}

formula nominal(const vocab_ptr& voc, std::size_t nom) {
  if (nom >= voc->nominals().size()) throw vocabulary_error("nominal index out of range");
  fnode n{.kind = fkind::nominal, .voc = voc};
  n.sym = nom;
  return formula(make(std::move(n)));
}

formula top(const vocab_ptr& voc) {
  return formula(make(fnode{.kind = fkind::top, .voc = voc}));
}

formula bot(const vocab_ptr& voc) {
  return formula(make(fnode{.kind = fkind::bot, .voc = voc}));
}

formula lnot(formula f) {
  fnode n{.kind = fkind::neg, .voc = voc_of(f)};
  n.lhs = f.ptr();
  return formula(make(std::move(n)));
}

namespace {
formula binary(fkind k, formula a, formula b) {
  check_same_voc(a, b);
  fnode n{.kind = k, .voc = voc_of(a)};
  n.lhs = a.ptr();
  n.rhs = b.ptr();
  return formula(make(std::move(n)));
}
}  // namespace

formula land(formula a, formula b) { return binary(fkind::conj, a, b); }
formula lor(formula a, formula b) { return binary(fkind::disj, a, b); }
formula implies(formula a, formula b) { return binary(fkind::implies, a, b); }

formula box(var_set xs, var_set ys, var_set zs, formula body) {
  const vocab_ptr& voc = voc_of(body);
  check_set(voc, xs);
  check_set(voc, ys);
  check_set(voc, zs);
  fnode n{.kind = fkind::box, .voc = voc};
  n.xs = xs;
  n.ys = ys;
  n.zs = zs;
  n.lhs = body.ptr();
  return formula(make(std::move(n)));
}

formula dia(var_set xs, var_set ys, var_set zs, formula body) {
  const vocab_ptr& voc = voc_of(body);
  check_set(voc, xs);
  check_set(voc, ys);
  check_set(voc, zs);
  fnode n{.kind = fkind::diamond, .voc = voc};
  n.xs = xs;
  n.ys = ys;
  n.zs = zs;
  n.lhs = body.ptr();
  return formula(make(std::move(n)));
}

formula at(std::size_t nom, formula body) {
  const vocab_ptr& voc = voc_of(body);
  if (nom >= voc->nominals().size()) throw vocabulary_error("nominal index out of range");
  fnode n{.kind = fkind::at, .voc = voc};
  n.sym = nom;
  n.lhs = body.ptr();
  return formula(make(std::move(n)));
}

formula at(const std::string& nom, formula body) {
  return at(voc_of(body)->require_nominal(nom), body);
}

formula dd(var_set xs, formula body) { return box(xs, var_set(), var_set(), body); }
formula forall_g(formula body) { return box(var_set(), var_set(), var_set(), body); }
formula exists_g(formula body) { return lnot(forall_g(lnot(body))); }

formula conj_all(const vocab_ptr& voc, const std::vector<formula>& fs) {
  if (fs.empty()) return top(voc);
  formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = land(acc, fs[i]);
  return acc;
}

formula disj_all(const vocab_ptr& voc, const std::vector<formula>& fs) {
  if (fs.empty()) return bot(voc);
  formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = lor(acc, fs[i]);
  return acc;
}

// ---- game-theoretic abbreviations -----------------------------------------

formula mk_wpa(const vocab_ptr& voc, var_set coalition) {
  if (coalition.empty()) throw formula_error("wPa needs a non-empty coalition");
  return box(voc->complement(coalition), var_set(), coalition, bot(voc));
}

formula mk_spa(const vocab_ptr& voc, var_set coalition) {
  if (coalition.empty()) throw formula_error("sPa needs a non-empty coalition");
  std::vector<formula> parts;
  coalition.for_each([&](var_id x) {
    parts.push_back(box(voc->complement(coalition), coalition - var_set::single(x),
                        var_set::single(x), bot(voc)));
  });
  return conj_all(voc, parts);
}

formula mk_na(const vocab_ptr& voc, var_set coalition) {
  if (coalition.empty()) throw formula_error("Na needs a non-empty coalition");
  std::vector<formula> parts;
  coalition.for_each([&](var_id x) {
    parts.push_back(box(voc->complement(var_set::single(x)), var_set(),
                        var_set::single(x), bot(voc)));
  });
  return conj_all(voc, parts);
}

formula mk_coalition_atom(const vocab_ptr& voc, var_set coalition) {
  if (coalition.empty()) throw formula_error("p needs a non-empty coalition");
  std::vector<formula> parts;
  coalition.for_each([&](var_id i) {
    parts.push_back(dep_set(voc, var_set::single(i), coalition));
  });
  voc->complement(coalition).for_each([&](var_id j) {
    parts.push_back(lnot(dep(voc, coalition, j)));
  });
  return conj_all(voc, parts);
}

namespace {
// Non-empty subsets of s in increasing bitmask order.
std::vector<var_set> nonempty_subsets(var_set s) {
  std::vector<var_set> out;
  std::uint32_t bits = s.bits();
  for (std::uint32_t sub = bits; sub != 0; sub = (sub - 1) & bits)
    out.push_back(var_set(sub));
  std::reverse(out.begin(), out.end());
  return out;
}
}  // namespace

formula mk_core(const vocab_ptr& voc, var_set coalition, std::size_t nom) {
  if (coalition.empty()) throw formula_error("Core needs a non-empty coalition");
  var_set rest = voc->complement(coalition);
  std::vector<formula> parts;
  parts.push_back(nominal(voc, nom));
  parts.push_back(mk_coalition_atom(voc, coalition));
  for (var_set c : nonempty_subsets(coalition)) {
    std::vector<formula> escapes;
    c.for_each([&](var_id x) {
      escapes.push_back(dia(rest, var_set::single(x), var_set(), nominal(voc, nom)));
    });
    parts.push_back(dd(rest, implies(mk_coalition_atom(voc, c),
                                     dia(rest | c, var_set(), var_set(),
                                         disj_all(voc, escapes)))));
  }
  return conj_all(voc, parts);
}

formula mk_core_partition(const vocab_ptr& voc,
                          const std::vector<var_set>& partition,
                          std::size_t nom) {
  if (partition.empty()) throw formula_error("Core needs a non-empty partition");
  var_set seen;
  std::vector<formula> parts;
  for (var_set block : partition) {
    if (block.empty()) throw formula_error("partition blocks must be non-empty");
    if (!(seen & block).empty()) throw formula_error("partition blocks must be disjoint");
    seen |= block;
    parts.push_back(mk_core(voc, block, nom));
  }
  if (!(seen == voc->all_vars()))
    throw formula_error("partition must cover all players");
  return conj_all(voc, parts);
}

// ---- expand ----------------------------------------------------------------

namespace {

formula expand_impl(const formula& f);

formula rebuild_unary(const formula& f, fkind k, formula child) {
  if (child.ptr() == f.node().lhs && k == f.kind()) return f;
  fnode n = f.node();
  n.kind = k;
  n.lhs = child.ptr();
  return formula(std::make_shared<const fnode>(std::move(n)));
}

formula expand_impl(const formula& f) {
  const fnode& n = f.node();
  const vocab_ptr& voc = n.voc;
  switch (n.kind) {
    case fkind::pred:
    case fkind::dep:
    case fkind::nominal:
      return f;
    case fkind::neg:
      return rebuild_unary(f, fkind::neg, expand_impl(f.lhs()));
    case fkind::conj: {
      formula a = expand_impl(f.lhs());
      formula b = expand_impl(f.rhs());
      if (a.ptr() == n.lhs && b.ptr() == n.rhs) return f;
      return land(a, b);
    }
    case fkind::box:
      return rebuild_unary(f, fkind::box, expand_impl(f.lhs()));
    case fkind::top:
      // The variable list is non-empty, and D{v}v is valid, so it serves
      // as the canonical tautology.
      return dep(voc, var_set::single(0), 0);
    case fkind::bot:
      return lnot(expand_impl(top(voc)));
    case fkind::disj:
      return lnot(land(lnot(expand_impl(f.lhs())), lnot(expand_impl(f.rhs()))));
    case fkind::implies:
      return lnot(land(expand_impl(f.lhs()), lnot(expand_impl(f.rhs()))));
    case fkind::diamond:
      return lnot(box(n.xs, n.ys, n.zs, lnot(expand_impl(f.lhs()))));
    case fkind::dep_set: {
      std::vector<formula> parts;
      n.ts.for_each([&](var_id y) { parts.push_back(dep(voc, n.xs, y)); });
      return expand_impl(conj_all(voc, parts));
    }
    case fkind::at:
      // @i phi is the global existential applied to (i & phi).
      return expand_impl(exists_g(land(nominal(voc, n.sym), f.lhs())));
    case fkind::wpa:
      return expand_impl(mk_wpa(voc, n.xs));
    case fkind::spa:
      return expand_impl(mk_spa(voc, n.xs));
    case fkind::na:
      return expand_impl(mk_na(voc, n.xs));
    case fkind::coal_atom:
      return expand_impl(mk_coalition_atom(voc, n.xs));
    case fkind::core_x:
      return expand_impl(mk_core(voc, n.xs, n.sym));
  }
  throw formula_error("unreachable formula kind");
}

}  // namespace

formula expand(const formula& f) {
  if (!f.valid()) throw formula_error("empty formula");
  return expand_impl(f);
}

bool is_core(const formula& f) {
  const fnode& n = f.node();
  switch (n.kind) {
    case fkind::pred:
    case fkind::dep:
    case fkind::nominal:
      return true;
    case fkind::neg:
    case fkind::box:
      return is_core(f.lhs());
    case fkind::conj:
      return is_core(f.lhs()) && is_core(f.rhs());
    default:
      return false;
  }
}

int modal_depth(const formula& f) {
  const fnode& n = f.node();
  switch (n.kind) {
    case fkind::pred:
    case fkind::dep:
    case fkind::nominal:
    case fkind::top:
    case fkind::bot:
    case fkind::dep_set:
      return 0;
    case fkind::neg:
      return modal_depth(f.lhs());
    case fkind::conj:
    case fkind::disj:
    case fkind::implies:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
    case fkind::box:
    case fkind::diamond:
    case fkind::at:
      return 1 + modal_depth(f.lhs());
    case fkind::wpa:
    case fkind::na:
    case fkind::spa:
      return 1;
    case fkind::coal_atom:
      return 0;
    case fkind::core_x:
      return 3;  // D_{-X}(p_C -> <...><...>i) nests three modalities
  }
  throw formula_error("unreachable formula kind");
}

// ---- render ----------------------------------------------------------------

namespace {

// Binding strength: implication < disjunction < conjunction < prefix ops.
int precedence(fkind k) {
  switch (k) {
    case fkind::implies: return 1;
    case fkind::disj: return 2;
    case fkind::conj: return 3;
    case fkind::neg:
    case fkind::box:
    case fkind::diamond:
    case fkind::at: return 4;
    default: return 5;
  }
}

void render_rec(const formula& f, int min_prec, std::ostream& out) {
  const fnode& n = f.node();
  const vocabulary& voc = *n.voc;
  int prec = precedence(n.kind);
  bool parens = prec < min_prec;
  if (parens) out << '(';
  switch (n.kind) {
    case fkind::pred: {
      out << voc.predicate(n.sym).name << '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out << ',';
        out << voc.var_name(n.args[i]);
      }
      out << ')';
      break;
    }
    case fkind::dep:
      out << 'D' << voc.render_set(n.xs) << voc.var_name(n.target);
      break;
    case fkind::dep_set:
      out << 'D' << voc.render_set(n.xs) << voc.render_set(n.ts);
      break;
    case fkind::nominal:
      out << "nom:" << voc.nominal_name(n.sym);
      break;
    case fkind::top:
      out << "top";
      break;
    case fkind::bot:
      out << "bot";
      break;
    case fkind::neg:
      out << '~';
      render_rec(f.lhs(), 4, out);
      break;
    case fkind::conj:
      render_rec(f.lhs(), 3, out);
      out << " & ";
      render_rec(f.rhs(), 4, out);
      break;
    case fkind::disj:
      render_rec(f.lhs(), 2, out);
      out << " | ";
      render_rec(f.rhs(), 3, out);
      break;
    case fkind::implies:
      render_rec(f.lhs(), 2, out);
      out << " -> ";
      render_rec(f.rhs(), 1, out);
      break;
    case fkind::box:
      out << '[' << voc.render_set(n.xs) << ';' << voc.render_set(n.ys) << ';'
          << voc.render_set(n.zs) << ']';
      render_rec(f.lhs(), 4, out);
      break;
    case fkind::diamond:
      out << '<' << voc.render_set(n.xs) << ';' << voc.render_set(n.ys) << ';'
          << voc.render_set(n.zs) << '>';
      render_rec(f.lhs(), 4, out);
      break;
    case fkind::at:
      out << '@' << voc.nominal_name(n.sym) << ' ';
      render_rec(f.lhs(), 4, out);
      break;
    case fkind::wpa:
      out << "wPa" << voc.render_set(n.xs);
      break;
    case fkind::spa:
      out << "sPa" << voc.render_set(n.xs);
      break;
    case fkind::na:
      out << "Na" << voc.render_set(n.xs);
      break;
    case fkind::coal_atom:
      out << 'p' << voc.render_set(n.xs);
      break;
    case fkind::core_x:
      out << "Core" << voc.render_set(n.xs) << voc.nominal_name(n.sym);
      break;
  }
  if (parens) out << ')';
}

}  // namespace

std::string render(const formula& f) {
  if (!f.valid()) throw formula_error("empty formula");
  std::ostringstream out;
  render_rec(f, 0, out);
  return out.str();
}

std::vector<formula> conjuncts(const formula& f) {
  std::vector<formula> out;
  std::function<void(const formula&)> walk = [&](const formula& g) {
    if (g.kind() == fkind::conj) {
      walk(g.lhs());
      walk(g.rhs());
    } else {
      out.push_back(g);
    }
  };
  walk(f);
  return out;
}

var_set vars_used(const formula& f) {
  const fnode& n = f.node();
  var_set s = n.xs | n.ys | n.zs | n.ts;
  if (n.kind == fkind::dep) s.insert(n.target);
  for (var_id a : n.args) s.insert(a);
  if (n.lhs) s |= vars_used(f.lhs());
  if (n.rhs) s |= vars_used(f.rhs());
  return s;
}

namespace {
void collect_syms(const formula& f, bool preds, std::set<std::size_t>& out) {
  const fnode& n = f.node();
  if (preds && n.kind == fkind::pred) out.insert(n.sym);
  if (!preds && (n.kind == fkind::nominal || n.kind == fkind::at ||
                 n.kind == fkind::core_x))
    out.insert(n.sym);
  if (n.lhs) collect_syms(f.lhs(), preds, out);
  if (n.rhs) collect_syms(f.rhs(), preds, out);
}
}  // namespace

std::vector<std::size_t> preds_used(const formula& f) {
  std::set<std::size_t> s;
  collect_syms(f, true, s);
  return {s.begin(), s.end()};
}

std::vector<std::size_t> noms_used(const formula& f) {
  std::set<std::size_t> s;
  collect_syms(f, false, s);
  return {s.begin(), s.end()};
}

bool mentions_nominal(const formula& f, std::size_t nom) {
  const fnode& n = f.node();
  if ((n.kind == fkind::nominal || n.kind == fkind::at || n.kind == fkind::core_x) &&
      n.sym == nom)
    return true;
  if (n.lhs && mentions_nominal(f.lhs(), nom)) return true;
  if (n.rhs && mentions_nominal(f.rhs(), nom)) return true;
  return false;
}

}  // namespace lpfd
