#include "lpfd/calculus.hpp"

#include <algorithm>

#include "lpfd/semantics.hpp"

namespace lpfd {

namespace {

constexpr const char* var_pool[] = {"x", "y", "z", "u", "v", "w", "r", "s"};
constexpr const char* pred_pool[] = {"P", "Q", "R", "S"};
constexpr const char* nom_pool[] = {"i", "j", "k", "l"};

const formula& get_f(const bindings& b, const char* slot) {
  auto it = b.formulas.find(slot);
  if (it == b.formulas.end())
    throw side_condition_error(std::string("missing formula slot ") + slot);
  return it->second;
}

var_set get_s(const bindings& b, const char* slot) {
  auto it = b.sets.find(slot);
  if (it == b.sets.end())
    throw side_condition_error(std::string("missing set slot ") + slot);
  return it->second;
}

var_id get_v(const bindings& b, const char* slot) {
  auto it = b.vars.find(slot);
  if (it == b.vars.end())
    throw side_condition_error(std::string("missing variable slot ") + slot);
  return it->second;
}

std::size_t get_n(const bindings& b, const char* slot) {
  auto it = b.noms.find(slot);
  if (it == b.noms.end())
    throw side_condition_error(std::string("missing nominal slot ") + slot);
  return it->second;
}

std::size_t get_c(const bindings& b, const char* slot) {
  auto it = b.choices.find(slot);
  return it == b.choices.end() ? 0 : it->second;
}

formula iff(formula a, formula b) { return land(implies(a, b), implies(b, a)); }

formula build_tau(const bindings& b) {
  formula phi = get_f(b, "phi"), psi = get_f(b, "psi"), chi = get_f(b, "chi");
  switch (get_c(b, "taut") % 8) {
    case 0: return implies(phi, phi);
    case 1: return lor(phi, lnot(phi));
    case 2: return lnot(land(phi, lnot(phi)));
    case 3: return implies(phi, implies(psi, phi));
    case 4:
      return implies(implies(phi, implies(psi, chi)),
                     implies(implies(phi, psi), implies(phi, chi)));
    case 5: return implies(implies(lnot(phi), lnot(psi)), implies(psi, phi));
    case 6: return implies(land(phi, psi), phi);
    default: return implies(phi, lor(phi, psi));
  }
}

formula build_k(const bindings& b) {
  var_set X = get_s(b, "X"), Y = get_s(b, "Y"), Z = get_s(b, "Z");
  formula phi = get_f(b, "phi"), psi = get_f(b, "psi");
  return implies(box(X, Y, Z, implies(phi, psi)),
                 implies(box(X, Y, Z, phi), box(X, Y, Z, psi)));
}

formula build_ord_a(const bindings& b) {
  return implies(box(get_s(b, "X"), get_s(b, "Y"), var_set{}, get_f(b, "phi")),
                 get_f(b, "phi"));
}

formula build_ord_b(const bindings& b) {
  var_set X = get_s(b, "X"), Y = get_s(b, "Y"), Z = get_s(b, "Z");
  var_set X2 = get_s(b, "X2"), Y2 = get_s(b, "Y2"), Z2 = get_s(b, "Z2");
  formula phi = get_f(b, "phi");
  return implies(dia(X, Y, Z, dia(X2, Y2, Z2, phi)),
                 dia(X & X2, Y & Y2, (Z & Y2) | (Z & Z2) | (Y & Z2), phi));
}

formula build_ord_c(const bindings& b) {
  var_set X = get_s(b, "X"), Y = get_s(b, "Y"), Z = get_s(b, "Z");
  var_set X2 = get_s(b, "X2"), Y2 = get_s(b, "Y2"), Z2 = get_s(b, "Z2");
  if (!X.subset_of(X2) || !Y.subset_of(Y2) || !Z.subset_of(Z2))
    throw side_condition_error(
        "(Ord,c) requires X within X2, Y within Y2 and Z within Z2");
  formula phi = get_f(b, "phi");
  return implies(box(X, Y, Z, phi), box(X2, Y2, Z2, phi));
}

formula build_ord_d(const bindings& b) {
  var_set X = get_s(b, "X"), Y = get_s(b, "Y"), Z = get_s(b, "Z");
  formula phi = get_f(b, "phi");
  return implies(dia(X, Y, Z, phi), dia(X, Y | Z, Z, phi));
}

formula build_ord_e(const bindings& b) {
  var_set X = get_s(b, "X"), Y = get_s(b, "Y"), Z = get_s(b, "Z");
  formula phi = get_f(b, "phi"), psi = get_f(b, "psi");
  std::vector<formula> promoted;
  Y.for_each([&](var_id y) {
    promoted.push_back(dia(X, Y, Z | var_set::single(y), psi));
  });
  return implies(land(phi, dia(X, Y, Z, psi)),
                 lor(dia(X, Y, Z, land(psi, dia(X, Y, var_set{}, phi))),
                     disj_all(b.voc, promoted)));
}

formula build_dep_a(const bindings& b) {
  var_set X = get_s(b, "X");
  return dep_set(b.voc, X, X);
}

formula build_dep_b(const bindings& b, calculus_id system) {
  var_set X = get_s(b, "X");
  formula phi = get_f(b, "phi");
  if (!in_atom_set(phi, X, system))
    throw side_condition_error(system == calculus_id::lpfd
                                   ? "(Dep,b) requires phi in Atom(X): a predicate "
                                     "atom over X or a dependence atom D{Y}z with "
                                     "Y within X"
                                   : "(Dep) requires phi to be a predicate atom "
                                     "with arguments within X");
  // Atoms over X are invariant across the X-agreement cell, so the agreement
  // box is forced by the atom itself.
  return implies(phi, box(X, var_set{}, var_set{}, phi));
}

formula build_dep_c(const bindings& b) {
  var_set X = get_s(b, "X"), S = get_s(b, "S"), T = get_s(b, "T");
  return implies(land(dep_set(b.voc, X, S), dep_set(b.voc, S, T)),
                 dep_set(b.voc, X, T));
}

formula build_dep_d(const bindings& b) {
  var_set X = get_s(b, "X"), S = get_s(b, "S");
  var_set Y = get_s(b, "Y"), Z = get_s(b, "Z");
  formula phi = get_f(b, "phi");
  return implies(land(dep_set(b.voc, X, S), box(S, Y, Z, phi)),
                 box(X, Y, Z, phi));
}

formula build_nom(const bindings& b) {
  std::size_t i = get_n(b, "i");
  formula phi = get_f(b, "phi");
  return implies(at(i, phi),
                 box(var_set{}, var_set{}, var_set{},
                     implies(nominal(b.voc, i), phi)));
}

formula build_dd_1(const bindings& b) {
  var_set X = get_s(b, "X");
  var_id s = get_v(b, "s");
  formula phi = get_f(b, "phi");
  return implies(land(dep(b.voc, X, s),
                      box(var_set::single(s), var_set{}, var_set{}, phi)),
                 box(X, var_set{}, var_set{}, phi));
}

formula build_dd_2(const bindings& b) {
  var_set X = get_s(b, "X");
  var_id s = get_v(b, "s");
  std::size_t i = get_n(b, "i");
  return implies(land(nominal(b.voc, i), lnot(dep(b.voc, X, s))),
                 dia(X, var_set{}, var_set{},
                     box(var_set::single(s), var_set{}, var_set{},
                         lnot(nominal(b.voc, i)))));
}

formula build_ord_2(const bindings& b) {
  var_id v = get_v(b, "v");
  formula phi = get_f(b, "phi");
  return implies(phi, box(var_set::single(v), var_set{}, var_set{},
                          dia(var_set::single(v), var_set{}, var_set{}, phi)));
}

formula build_ord_4(const bindings& b) {
  var_id v = get_v(b, "v");
  std::size_t i = get_n(b, "i"), j = get_n(b, "j");
  var_set vs = var_set::single(v);
  formula lhs = at(i, dia(var_set{}, var_set{}, vs, nominal(b.voc, j)));
  formula rhs = land(at(i, dia(var_set{}, vs, var_set{}, nominal(b.voc, j))),
                     at(j, lnot(dia(var_set{}, vs, var_set{}, nominal(b.voc, i)))));
  return iff(lhs, rhs);
}

formula build_ord_5(const bindings& b) {
  var_set X = get_s(b, "X"), Y = get_s(b, "Y"), Z = get_s(b, "Z");
  var_set X2 = get_s(b, "X2"), Y2 = get_s(b, "Y2"), Z2 = get_s(b, "Z2");
  std::size_t i = get_n(b, "i");
  formula lhs = land(dia(X, Y, Z, nominal(b.voc, i)),
                     dia(X2, Y2, Z2, nominal(b.voc, i)));
  formula rhs = dia(X | X2, Y | Y2, Z | Z2, nominal(b.voc, i));
  return iff(lhs, rhs);
}

std::vector<axiom_schema> make_lpfd_schemas() {
  using b_t = const bindings&;
  return {
      {"Tau", calculus_id::lpfd, "propositional tautologies (template family)",
       build_tau},
      {"K", calculus_id::lpfd,
       "[X;Y;Z](phi -> psi) -> ([X;Y;Z]phi -> [X;Y;Z]psi)", build_k},
      {"Ord-a", calculus_id::lpfd, "[X;Y;{}]phi -> phi", build_ord_a},
      {"Ord-b", calculus_id::lpfd,
       "<X;Y;Z><X2;Y2;Z2>phi -> <X&X2; Y&Y2; (Z&Y2)|(Z&Z2)|(Y&Z2)>phi",
       build_ord_b},
      {"Ord-c", calculus_id::lpfd,
       "[X;Y;Z]phi -> [X2;Y2;Z2]phi  (X <= X2, Y <= Y2, Z <= Z2)", build_ord_c},
      {"Ord-d", calculus_id::lpfd, "<X;Y;Z>phi -> <X;Y|Z;Z>phi", build_ord_d},
      {"Ord-e", calculus_id::lpfd,
       "(phi & <X;Y;Z>psi) -> <X;Y;Z>(psi & <X;Y;{}>phi) | OR_y <X;Y;Z+y>psi",
       build_ord_e},
      {"Dep-a", calculus_id::lpfd, "D{X}{X}", build_dep_a},
      {"Dep-b", calculus_id::lpfd, "phi -> [X;{};{}]phi  (phi in Atom(X))",
       [](b_t b) { return build_dep_b(b, calculus_id::lpfd); }},
      {"Dep-c", calculus_id::lpfd, "D{X}{S} & D{S}{T} -> D{X}{T}", build_dep_c},
      {"Dep-d", calculus_id::lpfd, "D{X}{S} & [S;Y;Z]phi -> [X;Y;Z]phi",
       build_dep_d},
  };
}

std::vector<axiom_schema> make_hlpfd_schemas() {
  using b_t = const bindings&;
  return {
      {"Tau", calculus_id::hlpfd, "propositional tautologies (template family)",
       build_tau},
      {"K", calculus_id::hlpfd,
       "[X;Y;Z](phi -> psi) -> ([X;Y;Z]phi -> [X;Y;Z]psi)", build_k},
      {"Dep", calculus_id::hlpfd,
       "phi -> [X;{};{}]phi  (phi a predicate atom over X)",
       [](b_t b) { return build_dep_b(b, calculus_id::hlpfd); }},
      {"Nom", calculus_id::hlpfd, "@i phi -> [{};{};{}](nom:i -> phi)",
       build_nom},
      {"DD-1", calculus_id::hlpfd, "D{X}s & [{s};{};{}]phi -> [X;{};{}]phi",
       build_dd_1},
      {"DD-2", calculus_id::hlpfd,
       "nom:i & ~D{X}s -> <X;{};{}>[{s};{};{}]~nom:i", build_dd_2},
      {"Ord-1", calculus_id::hlpfd, "[X;Y;{}]phi -> phi", build_ord_a},
      {"Ord-2", calculus_id::hlpfd, "phi -> [{v};{};{}]<{v};{};{}>phi",
       build_ord_2},
      {"Ord-3", calculus_id::hlpfd,
       "<X;Y;Z><X2;Y2;Z2>phi -> <X&X2; Y&Y2; (Z&Y2)|(Z&Z2)|(Y&Z2)>phi",
       build_ord_b},
      {"Ord-4", calculus_id::hlpfd,
       "@i <{};{};{v}>nom:j <-> @i <{};{v};{}>nom:j & @j ~<{};{v};{}>nom:i",
       build_ord_4},
      {"Ord-5", calculus_id::hlpfd,
       "<X;Y;Z>nom:i & <X2;Y2;Z2>nom:i <-> <X|X2;Y|Y2;Z|Z2>nom:i", build_ord_5},
  };
}

}  // namespace

std::string to_string(calculus_id system) {
  return system == calculus_id::lpfd ? "lpfd" : "hlpfd";
}

const std::vector<axiom_schema>& schemas(calculus_id system) {
  static const std::vector<axiom_schema> base = make_lpfd_schemas();
  static const std::vector<axiom_schema> hybrid = make_hlpfd_schemas();
  return system == calculus_id::lpfd ? base : hybrid;
}

const axiom_schema& find_schema(calculus_id system, const std::string& id) {
  for (const auto& s : schemas(system))
    if (s.id == id) return s;
  throw std::out_of_range("unknown schema " + id + " in calculus " +
                          to_string(system));
}

bool in_atom_set(const formula& f, var_set xs, calculus_id system) {
  if (f.kind() == fkind::pred) {
    for (var_id a : f.node().args)
      if (!xs.contains(a)) return false;
    return true;
  }
  if (f.kind() == fkind::dep && system == calculus_id::lpfd)
    return f.node().xs.subset_of(xs);
  return false;
}

formula instantiate(const axiom_schema& schema, const bindings& b) {
  if (!b.voc) throw side_condition_error("bindings carry no vocabulary");
  return schema.build(b);
}

bindings random_bindings(const axiom_schema& schema, const vocab_ptr& voc,
                         generator& gen, int formula_depth) {
  bindings b;
  b.voc = voc;
  var_set all = voc->all_vars();
  auto ms = all.members();
  bool with_noms = schema.system == calculus_id::hlpfd;
  auto rf = [&] {
    return gen.random_formula(voc, static_cast<int>(gen.pick(
                                       0, static_cast<std::size_t>(
                                              std::max(formula_depth, 0)))),
                              with_noms, false);
  };
  auto rv = [&] { return ms[gen.pick(0, ms.size() - 1)]; };
  auto rn = [&] { return gen.pick(0, voc->nominals().size() - 1); };

  b.formulas["phi"] = rf();
  b.formulas["psi"] = rf();
  b.formulas["chi"] = rf();
  b.sets["X"] = gen.random_subset(all);
  b.sets["Y"] = gen.random_subset(all);
  b.sets["Z"] = gen.random_subset(all);
  b.sets["S"] = gen.random_subset(all);
  b.sets["T"] = gen.random_subset(all);
  b.choices["taut"] = gen.pick(0, 7);
  if (schema.id == "Ord-c") {
    // Widen the primed triple so the subset provisos hold.
    b.sets["X2"] = b.sets["X"] | gen.random_subset(all);
    b.sets["Y2"] = b.sets["Y"] | gen.random_subset(all);
    b.sets["Z2"] = b.sets["Z"] | gen.random_subset(all);
  } else {
    b.sets["X2"] = gen.random_subset(all);
    b.sets["Y2"] = gen.random_subset(all);
    b.sets["Z2"] = gen.random_subset(all);
  }
  b.vars["v"] = rv();
  b.vars["s"] = rv();
  b.vars["y"] = rv();
  if (with_noms && !voc->nominals().empty()) {
    b.noms["i"] = rn();
    b.noms["j"] = rn();
  }

  if (schema.id == "Dep-b" || schema.id == "Dep") {
    // The formula slot must come from Atom(X).
    bool base = schema.system == calculus_id::lpfd;
    var_set X = base ? gen.random_subset(all)
                     : gen.random_subset(all, /*allow_empty=*/false);
    std::vector<std::size_t> usable;
    for (std::size_t p = 0; p < voc->predicates().size(); ++p)
      if (voc->predicate(p).arity == 0 || !X.empty()) usable.push_back(p);
    auto xm = X.members();
    if (!base && usable.empty())
      throw side_condition_error("(Dep) needs a predicate in the vocabulary");
    if (!base || (!usable.empty() && gen.coin())) {
      std::size_t p = usable[gen.pick(0, usable.size() - 1)];
      std::vector<var_id> args;
      for (int a = 0; a < voc->predicate(p).arity; ++a)
        args.push_back(xm[gen.pick(0, xm.size() - 1)]);
      b.formulas["phi"] = pred(voc, p, std::move(args));
    } else {
      b.formulas["phi"] = dep(voc, gen.random_subset(X), rv());
    }
    b.sets["X"] = X;
  }
  return b;
}

fuzz_report soundness_fuzz(const gen_params& params, calculus_id system,
                           std::uint64_t trials, std::uint64_t seed) {
  fuzz_report rep;
  rep.system = system;
  rep.trials_per_schema = trials;
  generator gen(seed);
  for (const auto& schema : schemas(system)) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      // Fresh vocabulary per trial: at least one predicate so atom-restricted
      // slots are fillable, nominals (two or more) only for the hybrid system.
      std::vector<std::string> vars(
          var_pool, var_pool + gen.pick(1, std::clamp<std::size_t>(
                                               params.max_vars, 1, 8)));
      std::vector<predicate_info> preds;
      std::size_t np = gen.pick(1, std::clamp<std::size_t>(params.max_preds, 1, 4));
      for (std::size_t p = 0; p < np; ++p)
        preds.push_back({pred_pool[p],
                         static_cast<int>(gen.pick(
                             0, static_cast<std::size_t>(
                                    std::max(params.max_arity, 0))))});
      std::vector<std::string> noms;
      if (system == calculus_id::hlpfd)
        noms.assign(nom_pool,
                    nom_pool + gen.pick(2, std::clamp<std::size_t>(
                                               params.max_nominals, 2, 4)));
      auto voc = std::make_shared<const vocabulary>(
          std::move(vars), std::move(preds), std::move(noms));

      rpd_model m = gen.random_rpd(params, voc);  // names every nominal
      bindings b = random_bindings(schema, voc, gen);
      formula instance = instantiate(schema, b);

      model_checker mc(m);
      point_id bad = 0;
      if (!mc.valid_in_model(instance, &bad))
        rep.counterexamples.push_back(
            {schema.id, t, instance, m, m.point_name(bad)});
      ++rep.per_schema[schema.id];
      ++rep.total_trials;
    }
  }
  return rep;
}

bool rule_check(rule_id rule, const std::vector<formula>& premises,
                const formula& conclusion, const rpd_model& m) {
  switch (rule) {
    case rule_id::mp: {
      if (premises.size() != 2)
        throw side_condition_error("(MP) takes premises phi -> psi and phi");
      const formula& imp = premises[0];
      if (imp.kind() != fkind::implies || imp.lhs() != premises[1] ||
          imp.rhs() != conclusion)
        throw side_condition_error(
            "(MP) premises must be phi -> psi and phi, conclusion psi");
      break;
    }
    case rule_id::nec: {
      if (premises.size() != 1)
        throw side_condition_error("(Nec) takes a single premise");
      if (conclusion.kind() != fkind::box || conclusion.lhs() != premises[0])
        throw side_condition_error(
            "(Nec) conclusion must be [X;Y;Z]phi for the premise phi");
      break;
    }
    case rule_id::name: {
      if (premises.size() != 1)
        throw side_condition_error("(Name) takes a single premise");
      const formula& p = premises[0];
      if (p.kind() != fkind::implies || p.lhs().kind() != fkind::nominal ||
          p.rhs() != conclusion)
        throw side_condition_error(
            "(Name) premise must be nom:i -> phi with conclusion phi");
      if (mentions_nominal(conclusion, p.lhs().node().sym))
        throw side_condition_error("(Name) requires that i not occur in phi");
      break;
    }
    case rule_id::paste: {
      if (premises.size() != 1)
        throw side_condition_error("(Paste) takes a single premise");
      const formula& p = premises[0];
      bool shape = p.kind() == fkind::implies &&
                   p.lhs().kind() == fkind::at &&
                   p.lhs().lhs().kind() == fkind::diamond &&
                   p.lhs().lhs().lhs().kind() == fkind::nominal &&
                   p.rhs().kind() == fkind::at &&
                   conclusion.kind() == fkind::at &&
                   conclusion.lhs().kind() == fkind::box;
      if (!shape)
        throw side_condition_error(
            "(Paste) premise must be @i <X;Y;Z>nom:j -> @j phi with "
            "conclusion @i [X;Y;Z]phi");
      std::size_t i = p.lhs().node().sym;
      std::size_t j = p.lhs().lhs().lhs().node().sym;
      const fnode& d = p.lhs().lhs().node();
      const fnode& bx = conclusion.lhs().node();
      formula phi = p.rhs().lhs();
      if (p.rhs().node().sym != j || conclusion.node().sym != i ||
          d.xs != bx.xs || d.ys != bx.ys || d.zs != bx.zs ||
          conclusion.lhs().lhs() != phi)
        throw side_condition_error(
            "(Paste) premise and conclusion indices do not line up");
      if (i == j) throw side_condition_error("(Paste) requires i distinct from j");
      if (mentions_nominal(phi, j))
        throw side_condition_error("(Paste) requires that j not occur in phi");
      break;
    }
  }
  model_checker mc(m);
  for (const auto& p : premises)
    if (!mc.valid_in_model(p)) return true;
  return mc.valid_in_model(conclusion);
}

}  // namespace lpfd
