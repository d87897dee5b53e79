#include "lpfd/sat.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "lpfd/semantics.hpp"

namespace lpfd {

namespace {

formula neg_of(const formula& f) {
  if (f.kind() == fkind::neg) return f.lhs();
  return lnot(f);
}

// Strips double negations everywhere so that complements come in clean
// two-element orbits ({f, ~f}), which the closure pairing relies on.
formula strip_dneg(const formula& f) {
  switch (f.kind()) {
    case fkind::neg: {
      formula g = strip_dneg(f.lhs());
      if (g.kind() == fkind::neg) return g.lhs();
      return lnot(g);
    }
    case fkind::conj:
      return land(strip_dneg(f.lhs()), strip_dneg(f.rhs()));
    case fkind::box: {
      const fnode& n = f.node();
      return box(n.xs, n.ys, n.zs, strip_dneg(f.lhs()));
    }
    default:
      return f;
  }
}

bool contains_nominal(const formula& f) {
  if (f.kind() == fkind::nominal) return true;
  const fnode& n = f.node();
  if (n.lhs && contains_nominal(f.lhs())) return true;
  if (n.rhs && contains_nominal(f.rhs())) return true;
  return false;
}

// All subsets of s, including the empty set, in increasing bitmask order.
std::vector<var_set> subsets_of(var_set s) {
  std::vector<var_set> out;
  std::uint32_t bits = s.bits();
  std::uint32_t sub = 0;
  while (true) {
    out.push_back(var_set(sub));
    if (sub == bits) break;
    sub = (sub - bits) & bits;  // next subset of bits above sub
  }
  return out;
}

// Atoms that are invariant across the X-agreement cells: predicates with all
// arguments in X and dependence statements with subscript inside X.
bool atom_over(const formula& f, var_set xs) {
  if (f.kind() == fkind::pred) {
    for (var_id a : f.node().args)
      if (!xs.contains(a)) return false;
    return true;
  }
  if (f.kind() == fkind::dep) return f.node().xs.subset_of(xs);
  return false;
}

}  // namespace

// ---- closure ----------------------------------------------------------------

std::size_t closure_set::add(const formula& f, std::size_t hard_cap) {
  std::string key = render(f);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  if (members_.size() >= hard_cap)
    throw sat_resource_error("closure exceeds the hard cap of " +
                             std::to_string(hard_cap) + " members");
  std::size_t idx = members_.size();
  members_.push_back(member{f, idx, std::nullopt, std::nullopt});
  index_.emplace(std::move(key), idx);

  switch (f.kind()) {
    case fkind::neg: {
      std::size_t l = add(f.lhs(), hard_cap);
      members_[idx].lhs = l;
      break;
    }
    case fkind::conj: {
      std::size_t l = add(f.lhs(), hard_cap);
      std::size_t r = add(f.rhs(), hard_cap);
      members_[idx].lhs = l;
      members_[idx].rhs = r;
      break;
    }
    case fkind::box: {
      std::size_t l = add(f.lhs(), hard_cap);
      members_[idx].lhs = l;
      boxes_.push_back(idx);
      break;
    }
    case fkind::pred:
    case fkind::dep:
      break;
    default:
      throw std::logic_error("closure expects core-form, nominal-free formulas");
  }

  std::size_t comp = add(neg_of(f), hard_cap);
  members_[idx].comp = comp;
  members_[comp].comp = idx;
  return idx;
}

closure_set closure_set::build(const formula& root, std::size_t hard_cap) {
  formula core = strip_dneg(expand(root));
  if (contains_nominal(core))
    throw std::invalid_argument(
        "satisfiability covers the nominal-free fragment only");
  if (modal_depth(core) == 0) {
    vocab_ptr voc = core.voc();
    core = strip_dneg(expand(land(core, box(var_set(), var_set(), var_set(), top(voc)))));
  }

  closure_set c;
  c.root_ = c.add(core, hard_cap);

  // Box grid: for every box over (Y,Z), all boxes over pairs of subsets of
  // Y u Z with the same index set X and body.  One pass suffices because the
  // grid of a grid member is contained in the original grid.
  std::size_t initial = c.members_.size();
  for (std::size_t i = 0; i < initial; ++i) {
    if (c.members_[i].f.kind() != fkind::box) continue;
    formula f = c.members_[i].f;
    var_set xs = f.node().xs;
    var_set span = f.node().ys | f.node().zs;
    formula body = f.lhs();
    for (var_set t : subsets_of(span))
      for (var_set u : subsets_of(span)) c.add(box(xs, t, u, body), hard_cap);
  }
  return c;
}

std::optional<std::size_t> closure_set::find(const formula& f) const {
  auto it = index_.find(render(f));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> closure_set::probe(std::size_t box_idx, var_id y) const {
  const formula& f = members_[box_idx].f;
  return find(box(f.node().xs, f.node().ys, f.node().zs | var_set::single(y), f.lhs()));
}

// ---- candidate enumeration ----------------------------------------------------

namespace {

struct horn_clause {
  std::vector<std::size_t> premises;  // all true ...
  std::size_t conclusion;             // ... forces this true
};

// Precomputed structural tables shared by enumeration, elimination, and paths.
struct solver_tables {
  const closure_set& c;

  std::vector<std::size_t> free_reps;                 // undetermined members
  std::vector<std::array<std::size_t, 3>> conjs;      // (node, lhs, rhs)
  std::vector<std::size_t> forced_true;               // reflexive dependences
  std::vector<horn_clause> horns;

  // box -> probe member per preference variable, for the saturation test
  std::map<std::size_t, std::vector<std::pair<var_id, std::size_t>>> probes;
  // box -> (repartition box, its probes), for the saturated-repartition rule
  std::map<std::size_t, std::vector<std::pair<std::size_t, std::vector<std::size_t>>>>
      repartitions;
  // (xs,ys,zs,body) -> box index
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::size_t>,
           std::size_t>
      box_lookup;
  // (xs,target) -> dependence member index
  std::map<std::pair<std::uint32_t, var_id>, std::size_t> dep_lookup;

  explicit solver_tables(const closure_set& cls);

  std::optional<std::size_t> box_at(var_set xs, var_set ys, var_set zs,
                                    std::size_t body) const {
    auto it = box_lookup.find({xs.bits(), ys.bits(), zs.bits(), body});
    if (it == box_lookup.end()) return std::nullopt;
    return it->second;
  }
};

solver_tables::solver_tables(const closure_set& cls) : c(cls) {
  const auto& ms = c.members();

  for (std::size_t i = 0; i < ms.size(); ++i) {
    const formula& f = ms[i].f;
    switch (f.kind()) {
      case fkind::conj:
        conjs.push_back({i, *ms[i].lhs, *ms[i].rhs});
        break;
      case fkind::dep: {
        dep_lookup[{f.node().xs.bits(), f.node().target}] = i;
        if (f.node().xs.contains(f.node().target)) forced_true.push_back(i);
        else free_reps.push_back(i);
        break;
      }
      case fkind::pred:
        free_reps.push_back(i);
        break;
      case fkind::box:
        box_lookup[{f.node().xs.bits(), f.node().ys.bits(), f.node().zs.bits(),
                    *ms[i].lhs}] = i;
        free_reps.push_back(i);
        break;
      default:
        break;  // negations follow their complements
    }
  }

  for (std::size_t b : c.boxes()) {
    const fnode& n = ms[b].f.node();
    std::size_t body = *ms[b].lhs;

    // Box discharge: with no strict part the box reaches its own point.
    if (n.zs.empty()) horns.push_back({{b}, body});

    // Atom invariance: an atom over X forces its X-agreement box.
    if (n.ys.empty() && n.zs.empty() && atom_over(ms[body].f, n.xs))
      horns.push_back({{body}, b});

    // Saturation probes and the repartition table.
    std::vector<std::pair<var_id, std::size_t>> pr;
    n.ys.for_each([&](var_id y) {
      if (auto p = box_at(n.xs, n.ys, n.zs | var_set::single(y), body)) {
        pr.push_back({y, *p});
      }
    });
    probes[b] = std::move(pr);

    var_set span = n.ys | n.zs;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> reps;
    for (var_set t : subsets_of(span)) {
      var_set u = span - t;
      auto rep = box_at(n.xs, t, u, body);
      if (!rep) continue;
      std::vector<std::size_t> rep_probes;
      bool complete = true;
      t.for_each([&](var_id y) {
        if (auto p = box_at(n.xs, t, u | var_set::single(y), body)) {
          rep_probes.push_back(*p);
        } else {
          complete = false;
        }
      });
      if (complete) reps.push_back({*rep, std::move(rep_probes)});
    }
    repartitions[b] = std::move(reps);
  }

  // Monotonicity between boxes sharing a body, and guarded transfer of the
  // box along a dependence of its index set.
  for (std::size_t b1 : c.boxes()) {
    const fnode& n1 = ms[b1].f.node();
    for (std::size_t b2 : c.boxes()) {
      if (b1 == b2) continue;
      const fnode& n2 = ms[b2].f.node();
      if (*ms[b1].lhs != *ms[b2].lhs) continue;
      if (n1.xs.subset_of(n2.xs) && n1.ys.subset_of(n2.ys | n2.zs) &&
          n1.zs.subset_of(n2.zs))
        horns.push_back({{b1}, b2});
      if (n1.ys == n2.ys && n1.zs == n2.zs && !(n1.xs == n2.xs)) {
        // D_{X2}(X1) and [X1;Y;Z]phi force [X2;Y;Z]phi.
        std::vector<std::size_t> prem{b1};
        bool complete = true;
        n1.xs.for_each([&](var_id s) {
          auto it = dep_lookup.find({n2.xs.bits(), s});
          if (it == dep_lookup.end()) complete = false;
          else prem.push_back(it->second);
        });
        if (complete) horns.push_back({std::move(prem), b2});
      }
    }
  }

  // Set-level dependence transitivity: D_A(C) with D_C d forces D_A d.
  std::set<std::uint32_t> subscripts;
  for (const auto& [key, idx] : dep_lookup) subscripts.insert(key.first);
  for (std::uint32_t a_bits : subscripts) {
    for (std::uint32_t c_bits : subscripts) {
      var_set cs(c_bits);
      std::vector<std::size_t> base;
      bool complete = true;
      cs.for_each([&](var_id cvar) {
        auto it = dep_lookup.find({a_bits, cvar});
        if (it == dep_lookup.end()) complete = false;
        else base.push_back(it->second);
      });
      if (!complete) continue;
      for (const auto& [key, idx] : dep_lookup) {
        if (key.first != c_bits) continue;
        auto target = dep_lookup.find({a_bits, key.second});
        if (target == dep_lookup.end() || target->second == idx) continue;
        std::vector<std::size_t> prem = base;
        prem.push_back(idx);
        horns.push_back({std::move(prem), target->second});
      }
    }
  }
}

// Backtracking enumeration with propagation over the tables.
struct candidate_search {
  const solver_tables& t;
  const sat_params& p;
  std::vector<int8_t> val;  // -1 unknown, 0 false, 1 true
  std::vector<std::size_t> trail;
  std::vector<hintikka_set> out;
  std::uint64_t nodes = 0;

  explicit candidate_search(const solver_tables& tables, const sat_params& params)
      : t(tables), p(params), val(tables.c.size(), -1) {}

  bool set(std::size_t i, int8_t v) {
    if (val[i] != -1) return val[i] == v;
    val[i] = v;
    trail.push_back(i);
    std::size_t comp = t.c.complement(i);
    if (val[comp] == -1) {
      val[comp] = static_cast<int8_t>(1 - v);
      trail.push_back(comp);
    } else if (val[comp] == v) {
      return false;
    }
    return true;
  }

  void rewind(std::size_t mark) {
    while (trail.size() > mark) {
      val[trail.back()] = -1;
      trail.pop_back();
    }
  }

  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [node, l, r] : t.conjs) {
        int8_t vn = val[node], vl = val[l], vr = val[r];
        if (vl == 1 && vr == 1 && vn != 1) {
          if (vn == 0 || !set(node, 1)) return false;
          changed = true;
        } else if ((vl == 0 || vr == 0) && vn != 0) {
          if (vn == 1 || !set(node, 0)) return false;
          changed = true;
        } else if (vn == 1 && (vl != 1 || vr != 1)) {
          if (!set(l, 1) || !set(r, 1)) return false;
          changed = true;
        } else if (vn == 0) {
          if (vl == 1 && vr != 0) {
            if (!set(r, 0)) return false;
            changed = true;
          } else if (vr == 1 && vl != 0) {
            if (!set(l, 0)) return false;
            changed = true;
          }
        }
      }
      for (const auto& h : t.horns) {
        bool all = true;
        for (std::size_t q : h.premises)
          if (val[q] != 1) {
            all = false;
            break;
          }
        if (all && val[h.conclusion] != 1) {
          if (val[h.conclusion] == 0 || !set(h.conclusion, 1)) return false;
          changed = true;
        }
      }
    }
    return true;
  }

  // The saturated-repartition rule: every diamond (false box) must admit a
  // repartition of its preference indices that is present and saturated.
  bool repartition_ok() const {
    for (std::size_t b : t.c.boxes()) {
      if (val[b] != 0) continue;
      bool found = false;
      for (const auto& [rep, rep_probes] : t.repartitions.at(b)) {
        if (val[rep] != 0) continue;
        bool saturated = true;
        for (std::size_t q : rep_probes)
          if (val[q] != 1) {
            saturated = false;
            break;
          }
        if (saturated) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  void run() {
    std::size_t mark = trail.size();
    for (std::size_t i : t.forced_true)
      if (!set(i, 1)) return;
    if (propagate()) search(0);
    rewind(mark);
  }

  void search(std::size_t next_free) {
    if (++nodes > p.search_budget)
      throw sat_resource_error("candidate search exceeded the node budget of " +
                               std::to_string(p.search_budget));
    while (next_free < t.free_reps.size() && val[t.free_reps[next_free]] != -1)
      ++next_free;
    if (next_free == t.free_reps.size()) {
      if (!repartition_ok()) return;
      if (out.size() >= p.max_candidates)
        throw sat_resource_error("candidate family exceeds the limit of " +
                                 std::to_string(p.max_candidates) + " sets");
      hintikka_set h(val.size());
      for (std::size_t i = 0; i < val.size(); ++i) h[i] = val[i] == 1;
      out.push_back(std::move(h));
      return;
    }
    std::size_t var = t.free_reps[next_free];
    for (int8_t v : {int8_t(1), int8_t(0)}) {
      std::size_t mark = trail.size();
      if (set(var, v) && propagate()) search(next_free + 1);
      rewind(mark);
    }
  }
};

}  // namespace

std::vector<hintikka_set> enumerate_hintikka(const closure_set& c, const sat_params& p) {
  if (c.class_count() > p.max_closure)
    throw sat_resource_error("closure needs " + std::to_string(c.class_count()) +
                             " slots; the configured limit is " +
                             std::to_string(p.max_closure));
  solver_tables t(c);
  candidate_search s(t, p);
  s.run();
  return std::move(s.out);
}

// ---- relation and elimination ---------------------------------------------------

namespace {

// Pulled-back box of b under the triple (X,Y,Z), if in the closure.
std::optional<std::size_t> pull_back(const solver_tables& t, std::size_t b, var_set xs,
                                     var_set ys, var_set zs) {
  const fnode& n = t.c.members()[b].f.node();
  var_set px = xs & n.xs;
  var_set py = ys & n.ys;
  var_set pz = (zs & n.ys) | (n.zs & ys) | (zs & n.zs);
  return t.box_at(px, py, pz, *t.c.members()[b].lhs);
}

bool rp_related_tables(const solver_tables& t, const hintikka_set& from,
                       const hintikka_set& to, var_set xs, var_set ys, var_set zs) {
  for (std::size_t b : t.c.boxes()) {
    if (to[b]) continue;  // only diamonds of `to` constrain `from`
    if (auto pulled = pull_back(t, b, xs, ys, zs)) {
      if (from[*pulled]) return false;
    }
  }
  return true;
}

struct saturated_diamond {
  std::size_t box_idx;
  var_set xs, ys, zs;
  std::size_t body;  // member index of the box body; the witness refutes it
};

std::vector<saturated_diamond> saturated_of(const solver_tables& t,
                                            const hintikka_set& h) {
  std::vector<saturated_diamond> out;
  for (std::size_t b : t.c.boxes()) {
    if (h[b]) continue;
    const fnode& n = t.c.members()[b].f.node();
    if (!(n.ys & n.zs).empty()) continue;
    bool saturated = true;
    for (const auto& [y, probe] : t.probes.at(b))
      if (!h[probe]) {
        saturated = false;
        break;
      }
    if (saturated) out.push_back({b, n.xs, n.ys, n.zs, *t.c.members()[b].lhs});
  }
  return out;
}

bool has_witness(const solver_tables& t, const std::vector<hintikka_set>& family,
                 const std::vector<char>& alive, std::size_t i,
                 const saturated_diamond& d) {
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (!alive[j]) continue;
    if (family[j][d.body]) continue;  // witness must contain the negated body
    if (!rp_related_tables(t, family[i], family[j], d.xs, d.ys, d.zs)) continue;
    if (!rp_related_tables(t, family[j], family[i], d.xs, d.ys, var_set())) continue;
    return true;
  }
  return false;
}

}  // namespace

bool rp_related(const closure_set& c, const hintikka_set& from, const hintikka_set& to,
                var_set xs, var_set ys, var_set zs) {
  solver_tables t(c);
  return rp_related_tables(t, from, to, xs, ys, zs);
}

std::vector<hintikka_set> eliminate(const closure_set& c,
                                    std::vector<hintikka_set> candidates) {
  solver_tables t(c);
  std::vector<std::vector<saturated_diamond>> needs;
  needs.reserve(candidates.size());
  for (const auto& h : candidates) needs.push_back(saturated_of(t, h));

  std::vector<char> alive(candidates.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!alive[i]) continue;
      for (const auto& d : needs[i]) {
        if (!has_witness(t, candidates, alive, i, d)) {
          alive[i] = 0;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<hintikka_set> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (alive[i]) out.push_back(std::move(candidates[i]));
  return out;
}

// ---- induced model -----------------------------------------------------------------

rpd_model induced_model(const closure_set& c, const std::vector<hintikka_set>& family,
                        std::size_t gamma, std::size_t path_bound,
                        std::size_t max_points) {
  if (gamma >= family.size())
    throw std::invalid_argument("induced_model: the designated set is not in the family");
  solver_tables t(c);

  struct path_point {
    std::size_t cand;
    std::size_t parent;  // SIZE_MAX for the root
    var_set xs, ys, zs;  // step triple from the parent
    std::size_t depth;
  };
  std::vector<path_point> pts;
  pts.push_back({gamma, static_cast<std::size_t>(-1), {}, {}, {}, 0});

  bool truncated = false;
  for (std::size_t i = 0; i < pts.size() && !truncated; ++i) {
    if (pts[i].depth >= path_bound) continue;
    for (const auto& d : saturated_of(t, family[pts[i].cand])) {
      for (std::size_t j = 0; j < family.size() && !truncated; ++j) {
        if (family[j][d.body]) continue;
        if (!rp_related_tables(t, family[pts[i].cand], family[j], d.xs, d.ys, d.zs))
          continue;
        if (!rp_related_tables(t, family[j], family[pts[i].cand], d.xs, d.ys,
                               var_set()))
          continue;
        if (pts.size() >= max_points) {
          truncated = true;
          break;
        }
        pts.push_back({j, i, d.xs, d.ys, d.zs, pts[i].depth + 1});
      }
      if (truncated) break;
    }
    if (truncated) break;
    // A false dependence atom needs a subscript-similar point whose target
    // class differs; a fresh copy of the same set reached by a pure
    // similarity step provides one, and the step realizes the atom at both
    // ends.  Skip the copy when this point's own incoming step already is
    // that witness.
    for (std::size_t k = 0; k < c.size(); ++k) {
      const formula& f = c.members()[k].f;
      if (f.kind() != fkind::dep) continue;
      if (f.node().xs.contains(f.node().target)) continue;
      if (family[pts[i].cand][k]) continue;
      if (pts[i].parent != static_cast<std::size_t>(-1) && pts[i].ys.empty() &&
          pts[i].zs.empty() && pts[i].xs == f.node().xs)
        continue;
      if (pts.size() >= max_points) {
        truncated = true;
        break;
      }
      pts.push_back({pts[i].cand, i, f.node().xs, {}, {}, pts[i].depth + 1});
    }
  }

  const vocab_ptr& voc = c.voc();
  std::vector<std::string> names;
  names.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) names.push_back("p" + std::to_string(i));
  rpd_model m(voc, names);

  const std::size_t n = pts.size();
  for (var_id v = 0; v < voc->var_limit(); ++v) {
    bit_rel leq(n, true);
    bit_rel sim(n, true);
    for (std::size_t q = 0; q < n; ++q) {
      if (pts[q].parent == static_cast<std::size_t>(-1)) continue;
      std::size_t par = pts[q].parent;
      if ((pts[q].ys | pts[q].zs).contains(v)) leq.set(par, q);
      if (pts[q].ys.contains(v)) leq.set(q, par);
      bool agree = pts[q].xs.contains(v);
      if (!agree) {
        auto it = t.dep_lookup.find({pts[q].xs.bits(), v});
        agree = it != t.dep_lookup.end() && family[pts[par].cand][it->second];
      }
      if (agree) {
        sim.set(par, q);
        sim.set(q, par);
      }
    }
    leq.transitive_close();
    sim.transitive_close();
    m.leq(v) = leq;
    m.sim(v) = sim;
  }

  // Valuation from path ends, closed under agreement on the atom's variables.
  for (std::size_t i = 0; i < c.size(); ++i) {
    const formula& f = c.members()[i].f;
    if (f.kind() != fkind::pred) continue;
    std::vector<bool> where(n, false);
    for (std::size_t q = 0; q < n; ++q) where[q] = family[pts[q].cand][i];
    var_set argvars;
    for (var_id a : f.node().args) argvars.insert(a);
    bit_rel agree = m.sim_set(argvars);
    std::vector<bool> closed(n, false);
    for (std::size_t q = 0; q < n; ++q) {
      if (!where[q]) continue;
      agree.for_each_successor(q, [&](std::size_t u) { closed[u] = true; });
    }
    m.set_atom(atom_key{f.node().sym, f.node().args}, std::move(closed));
  }
  return m;
}

bool verify_certificate(const rpd_model& m, const formula& alpha, point_id root) {
  if (!m.validate().empty()) return false;
  return eval(m, root, alpha);
}

// ---- decision pipeline ----------------------------------------------------------

std::string to_string(sat_status s) {
  switch (s) {
    case sat_status::sat_verified: return "sat-verified";
    case sat_status::sat_unverified: return "sat-unverified";
    case sat_status::unsat: return "unsat";
    case sat_status::resource: return "resource";
  }
  return "unknown";
}

sat_result decide_sat(const formula& alpha, const sat_params& p) {
  sat_result r;
  try {
    closure_set c = closure_set::build(alpha);
    r.closure_classes = c.class_count();
    r.analyzed_root = c.root();
    auto candidates = enumerate_hintikka(c, p);
    r.candidate_count = candidates.size();
    auto family = eliminate(c, std::move(candidates));
    r.surviving = family.size();

    std::optional<std::size_t> witness;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (family[i][c.root_index()]) {
        witness = i;
        break;
      }
    }
    if (!witness) {
      r.status = sat_status::unsat;
      r.detail = "no coherent set survives the witness requirement";
      return r;
    }
    r.witness = witness;
    // One level beyond the modal depth leaves room for dependence witnesses
    // below the deepest box.
    std::size_t bound = p.path_bound.value_or(
        static_cast<std::size_t>(std::max(0, modal_depth(c.root()))) + 1);
    rpd_model cert = induced_model(c, family, *witness, bound, p.max_points);
    bool ok = verify_certificate(cert, c.root(), 0);
    r.certificate = std::move(cert);
    r.root_point = 0;
    r.status = ok ? sat_status::sat_verified : sat_status::sat_unverified;
    if (!ok)
      r.detail = "certificate model does not confirm the formula at path bound " +
                 std::to_string(bound);
  } catch (const sat_resource_error& e) {
    r.status = sat_status::resource;
    r.detail = e.what();
  }
  return r;
}

// ---- bounded finite-model search --------------------------------------------------

namespace {

// All partitions of {0..n-1} as relation matrices, via restricted growth
// strings; deterministic order.
std::vector<bit_rel> equivalences_on(std::size_t n) {
  std::vector<bit_rel> out;
  std::vector<std::size_t> label(n, 0);
  // Enumerate restricted growth strings: label[0]=0, label[i] <= max+1.
  std::vector<std::size_t> maxes(n, 0);
  std::size_t i = 1;
  if (n == 1) {
    out.push_back(bit_rel(1, true));
    return out;
  }
  label[0] = 0;
  maxes[0] = 0;
  while (true) {
    if (i == n) {
      bit_rel r(n, true);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (label[a] == label[b]) r.set(a, b);
      out.push_back(std::move(r));
      // backtrack
      --i;
      while (i > 0 && label[i] == maxes[i - 1] + 1) --i;
      if (i == 0) break;
      ++label[i];
      maxes[i] = std::max(maxes[i - 1], label[i]);
      ++i;
      for (; i < n; ++i) {
        label[i] = 0;
        maxes[i] = maxes[i - 1];
      }
      i = n;
    } else {
      label[i] = 0;
      maxes[i] = maxes[i - 1];
      ++i;
    }
  }
  return out;
}

// All preorders on {0..n-1}: reflexive transitive relations.
std::vector<bit_rel> preorders_on(std::size_t n) {
  std::vector<bit_rel> out;
  std::size_t off = n * n - n;  // off-diagonal cells
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) cells.push_back({a, b});
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << off); ++mask) {
    bit_rel r(n, true);
    for (std::size_t k = 0; k < off; ++k)
      if ((mask >> k) & 1) r.set(cells[k].first, cells[k].second);
    if (r.is_transitive()) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::optional<std::pair<rpd_model, point_id>> bounded_model_search(
    const formula& alpha, std::size_t max_points, std::uint64_t budget) {
  formula core = expand(alpha);
  if (contains_nominal(core))
    throw std::invalid_argument("bounded search covers the nominal-free fragment only");
  const vocab_ptr& voc = core.voc();
  var_set used = vars_used(core);

  // Ground atoms mentioned by the formula.
  std::set<atom_key> keys;
  {
    std::vector<formula> stack{core};
    while (!stack.empty()) {
      formula f = stack.back();
      stack.pop_back();
      if (f.kind() == fkind::pred) keys.insert(atom_key{f.node().sym, f.node().args});
      const fnode& nd = f.node();
      if (nd.lhs) stack.push_back(f.lhs());
      if (nd.rhs) stack.push_back(f.rhs());
    }
  }

  std::uint64_t tried = 0;
  for (std::size_t n = 1; n <= max_points; ++n) {
    if (n * n - n > 20)
      throw sat_resource_error(
          "finite-model search cannot enumerate preference relations on " +
          std::to_string(n) + " points");
    auto eqs = equivalences_on(n);
    auto pres = preorders_on(n);
    auto used_vars = used.members();
    const std::size_t k = used_vars.size();

    // Odometer over (equivalence, preorder) choices per used variable.
    std::vector<std::size_t> ei(k, 0), pi(k, 0);
    while (true) {
      rpd_model m(voc, [&] {
        std::vector<std::string> names;
        for (std::size_t w = 0; w < n; ++w) names.push_back("w" + std::to_string(w));
        return names;
      }());
      for (std::size_t idx = 0; idx < k; ++idx) {
        m.sim(used_vars[idx]) = eqs[ei[idx]];
        m.leq(used_vars[idx]) = pres[pi[idx]];
      }

      // Valuations: per atom, any union of agreement cells on its variables.
      std::vector<atom_key> key_list(keys.begin(), keys.end());
      std::vector<std::vector<std::vector<bool>>> options;  // per atom
      for (const auto& key : key_list) {
        var_set argvars;
        for (var_id a : key.args) argvars.insert(a);
        bit_rel agree = m.sim_set(argvars);
        // Collect cell representatives.
        std::vector<std::size_t> rep(n);
        std::vector<std::size_t> cells;
        std::vector<char> seen(n, 0);
        for (std::size_t w = 0; w < n; ++w) {
          if (seen[w]) continue;
          cells.push_back(w);
          agree.for_each_successor(w, [&](std::size_t u) {
            seen[u] = 1;
            rep[u] = w;
          });
        }
        std::vector<std::vector<bool>> opts;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << cells.size()); ++mask) {
          std::vector<bool> where(n, false);
          for (std::size_t w = 0; w < n; ++w) {
            std::size_t ci =
                std::find(cells.begin(), cells.end(), rep[w]) - cells.begin();
            where[w] = (mask >> ci) & 1;
          }
          opts.push_back(std::move(where));
        }
        options.push_back(std::move(opts));
      }

      std::vector<std::size_t> vi(key_list.size(), 0);
      while (true) {
        if (++tried > budget)
          throw sat_resource_error("finite-model search exceeded the budget of " +
                                   std::to_string(budget) + " models");
        rpd_model candidate = m;
        for (std::size_t a = 0; a < key_list.size(); ++a)
          candidate.set_atom(key_list[a], options[a][vi[a]]);
        model_checker mc(candidate);
        for (point_id w = 0; w < n; ++w) {
          if (mc.eval(core, w)) return std::make_pair(std::move(candidate), w);
        }
        // advance valuation odometer
        std::size_t pos = 0;
        while (pos < vi.size() && ++vi[pos] == options[pos].size()) {
          vi[pos] = 0;
          ++pos;
        }
        if (pos == vi.size()) break;
        if (key_list.empty()) break;
      }

      // advance relation odometer
      std::size_t pos = 0;
      while (pos < k) {
        if (++pi[pos] < pres.size()) break;
        pi[pos] = 0;
        if (++ei[pos] < eqs.size()) break;
        ei[pos] = 0;
        ++pos;
      }
      if (pos == k) break;
      if (k == 0) break;
    }
  }
  return std::nullopt;
}

}  // namespace lpfd
