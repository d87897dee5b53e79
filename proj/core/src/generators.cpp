#include "lpfd/generators.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace lpfd {

namespace {

constexpr const char* var_pool[] = {"x", "y", "z", "u", "v", "w", "r", "s"};
constexpr const char* pred_pool[] = {"P", "Q", "R", "S"};
constexpr const char* nom_pool[] = {"i", "j", "k", "l"};

// All total maps {0..width-1} -> {0..radix-1}, in odometer order.
std::vector<std::vector<std::size_t>> all_tuples(std::size_t width, std::size_t radix) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(width, 0);
  while (true) {
    out.push_back(cur);
    std::size_t d = 0;
    while (d < width && ++cur[d] == radix) cur[d++] = 0;
    if (d == width) break;
  }
  return out;
}

}  // namespace

std::size_t generator::pick(std::size_t lo, std::size_t hi) {
  std::uniform_int_distribution<std::size_t> d(lo, hi);
  return d(rng_);
}

bool generator::coin(double p) {
  std::bernoulli_distribution d(p);
  return d(rng_);
}

var_set generator::random_subset(var_set universe, bool allow_empty) {
  var_set out;
  universe.for_each([&](var_id v) {
    if (coin()) out.insert(v);
  });
  if (!allow_empty && out.empty() && !universe.empty()) {
    auto ms = universe.members();
    out.insert(ms[pick(0, ms.size() - 1)]);
  }
  return out;
}

var_partition generator::random_partition(var_set universe) {
  var_partition blocks;
  if (universe.empty()) return blocks;
  auto ms = universe.members();
  std::map<std::size_t, var_set> by_label;
  for (var_id v : ms) by_label[pick(0, ms.size() - 1)].insert(v);
  for (auto& [label, block] : by_label) blocks.push_back(block);
  return normalize_partition(std::move(blocks));
}

vocab_ptr generator::random_vocab(const gen_params& p, bool with_nominals) {
  std::size_t nv = pick(1, std::clamp<std::size_t>(p.max_vars, 1, 8));
  std::vector<std::string> vars(var_pool, var_pool + nv);
  std::vector<predicate_info> preds;
  std::size_t np = pick(0, std::min<std::size_t>(p.max_preds, 4));
  for (std::size_t i = 0; i < np; ++i)
    preds.push_back({pred_pool[i], static_cast<int>(pick(0, std::max(p.max_arity, 0)))});
  std::vector<std::string> noms;
  if (with_nominals) {
    std::size_t nn = pick(1, std::clamp<std::size_t>(p.max_nominals, 1, 4));
    noms.assign(nom_pool, nom_pool + nn);
  }
  return std::make_shared<const vocabulary>(std::move(vars), std::move(preds),
                                            std::move(noms));
}

bit_rel generator::random_equivalence(std::size_t n) {
  std::vector<std::size_t> label(n);
  for (auto& l : label) l = pick(0, n - 1);
  bit_rel r(n, true);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (label[i] == label[j]) r.set(i, j);
  return r;
}

bit_rel generator::random_preorder(std::size_t n) {
  bit_rel r(n, true);
  if (coin()) {
    // Total preorder induced by a rank function.
    std::vector<std::size_t> rank(n);
    for (auto& x : rank) x = pick(0, n - 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rank[i] <= rank[j]) r.set(i, j);
  } else {
    // Sparse edges closed under transitivity; may be non-total.
    double density = n > 1 ? 1.5 / static_cast<double>(n) : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && coin(density)) r.set(i, j);
    r.transitive_close();
  }
  return r;
}

rpd_model generator::random_rpd(const gen_params& p, vocab_ptr voc) {
  if (!voc) voc = random_vocab(p, false);
  std::size_t n = pick(1, std::max<std::size_t>(p.max_points, 1));
  std::vector<std::string> names;
  for (std::size_t w = 0; w < n; ++w) names.push_back("w" + std::to_string(w));
  rpd_model m(voc, std::move(names));

  // Agreement relations, resampled until the points are separated by
  // agreement on the full variable set (required for a faithful assignment
  // view); forcing identity on the first variable is the safety net.
  bit_rel identity(n, true);
  for (int attempt = 0;; ++attempt) {
    for (var_id x = 0; x < voc->var_limit(); ++x) m.sim(x) = random_equivalence(n);
    if (m.sim_set(voc->all_vars()) == identity) break;
    if (attempt >= 20) {
      m.sim(0) = identity;
      break;
    }
  }

  for (var_id x = 0; x < voc->var_limit(); ++x) m.leq(x) = random_preorder(n);

  // Valuation: per ground atom, decide truth per agreement cell on the
  // argument variables, so invariance holds by construction.
  for (std::size_t pd = 0; pd < voc->predicates().size(); ++pd) {
    int arity = voc->predicate(pd).arity;
    for (const auto& tuple : all_tuples(static_cast<std::size_t>(arity),
                                        voc->var_count())) {
      atom_key key{pd, {}};
      var_set arg_set;
      for (std::size_t a : tuple) {
        key.args.push_back(static_cast<var_id>(a));
        arg_set.insert(static_cast<var_id>(a));
      }
      std::vector<bool> where(n, false);
      bool any = false;
      for (const auto& cell : m.sim_set(arg_set).cells())
        if (coin()) {
          for (std::size_t w : cell) where[w] = true;
          any = true;
        }
      if (any) m.set_atom(key, std::move(where));
    }
  }

  for (std::size_t nom = 0; nom < voc->nominals().size(); ++nom)
    m.name_point(nom, pick(0, n - 1));
  return m;
}

rpd_model generator::random_rpdn(const gen_params& p) {
  return random_rpd(p, random_vocab(p, true));
}

pd_model generator::random_pd(const gen_params& p, vocab_ptr voc) {
  if (!voc) voc = random_vocab(p, false);
  std::size_t no = pick(1, std::max<std::size_t>(p.max_objects, 1));
  std::vector<std::string> objects;
  for (std::size_t o = 0; o < no; ++o) objects.push_back("o" + std::to_string(o));

  // Distinct assignment rows; the row space bounds how many we can have.
  double space = 1;
  for (std::size_t v = 0; v < voc->var_count(); ++v) space *= static_cast<double>(no);
  std::size_t na = pick(1, std::max<std::size_t>(p.max_points, 1));
  na = std::min<std::size_t>(na, static_cast<std::size_t>(
                                     std::min(space, 1e6)));
  std::set<std::vector<obj_id>> rows;
  while (rows.size() < na) {
    std::vector<obj_id> row;
    for (std::size_t v = 0; v < voc->var_count(); ++v) row.push_back(pick(0, no - 1));
    rows.insert(std::move(row));
  }

  std::vector<std::string> names;
  for (std::size_t a = 0; a < na; ++a) names.push_back("a" + std::to_string(a));
  pd_model m(voc, std::move(objects), std::move(names));
  {
    point_id a = 0;
    for (const auto& row : rows) {
      for (var_id x = 0; x < voc->var_limit(); ++x) m.set_assignment(a, x, row[x]);
      ++a;
    }
  }

  for (std::size_t pd = 0; pd < voc->predicates().size(); ++pd) {
    int arity = voc->predicate(pd).arity;
    for (const auto& tuple : all_tuples(static_cast<std::size_t>(arity), no))
      if (coin()) m.add_tuple(pd, std::vector<obj_id>(tuple.begin(), tuple.end()));
  }

  for (var_id x = 0; x < voc->var_limit(); ++x) m.pref(x) = random_preorder(na);

  for (std::size_t nom = 0; nom < voc->nominals().size(); ++nom)
    m.name_point(nom, pick(0, na - 1));
  return m;
}

cpd_model generator::random_cpd(const gen_params& p) {
  std::size_t np = pick(1, std::clamp<std::size_t>(p.max_vars, 1, 8));
  std::size_t ns = pick(2, std::max<std::size_t>(p.max_strategies, 2));
  game_spec g;
  for (std::size_t i = 0; i < np; ++i) g.players.push_back(std::to_string(i + 1));
  for (std::size_t s = 0; s < ns; ++s)
    g.strategies.push_back(std::string(1, static_cast<char>('c' + s)));

  var_set universe;
  for (std::size_t i = 0; i < np; ++i) universe.insert(static_cast<var_id>(i));
  auto assignments = all_tuples(np, ns);

  // Admissible-assignment sets grow monotonically toward coarser coalition
  // structures: each structure inherits everything admissible under its
  // refinements, plus fresh random entries.
  auto partitions = all_partitions(universe);  // finest first
  for (const auto& pi : partitions) {
    std::set<std::vector<strat_id>> adm;
    for (const auto& [rho, rows] : g.table)
      if (refines(rho, pi))
        adm.insert(rows.begin(), rows.end());
    for (const auto& s : assignments)
      if (coin(0.35)) adm.insert(std::vector<strat_id>(s.begin(), s.end()));
    if (adm.empty()) {
      const auto& s = assignments[pick(0, assignments.size() - 1)];
      adm.insert(std::vector<strat_id>(s.begin(), s.end()));
    }
    g.table.push_back({pi, {adm.begin(), adm.end()}});
  }

  for (const auto& s : assignments) {
    std::vector<double> u;
    for (std::size_t i = 0; i < np; ++i) u.push_back(static_cast<double>(pick(0, 9)));
    g.utilities[std::vector<strat_id>(s.begin(), s.end())] = std::move(u);
  }
  return build_cpd_from_game(g);
}

cpd_model generator::random_rcpd(const gen_params& p) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    cpd_model m = random_cpd(p);
    bool ok = m.validate_rcpd().empty();
    for (profile_id a = 0; ok && a < m.profile_count(); ++a)
      ok = m.p_recoverable(a);
    if (ok) return m;
  }
  // Fallback: with every assignment admissible everywhere and at least two
  // strategies, no block ever determines an outside player's choice.
  std::size_t np = pick(1, std::clamp<std::size_t>(p.max_vars, 1, 8));
  std::size_t ns = std::max<std::size_t>(2, p.max_strategies);
  std::vector<std::string> players, strategies;
  for (std::size_t i = 0; i < np; ++i) players.push_back(std::to_string(i + 1));
  for (std::size_t s = 0; s < ns; ++s)
    strategies.push_back(std::string(1, static_cast<char>('c' + s)));
  std::vector<std::vector<strat_id>> admissible;
  std::map<std::vector<strat_id>, std::vector<double>> utilities;
  for (const auto& s : all_tuples(np, ns)) {
    admissible.push_back(std::vector<strat_id>(s.begin(), s.end()));
    std::vector<double> u;
    for (std::size_t i = 0; i < np; ++i) u.push_back(static_cast<double>(pick(0, 9)));
    utilities[admissible.back()] = std::move(u);
  }
  return build_uniform_cpd(players, strategies, admissible, utilities);
}

formula generator::random_formula(const vocab_ptr& voc, int depth,
                                  bool allow_nominals, bool allow_sugar) {
  var_set all = voc->all_vars();
  auto ms = all.members();
  auto random_var = [&] { return ms[pick(0, ms.size() - 1)]; };

  bool noms_ok = allow_nominals && !voc->nominals().empty();
  if (depth <= 0 || coin(0.15)) {
    enum { k_pred, k_dep, k_nom, k_top, k_bot };
    std::vector<int> options{k_dep, k_dep, k_dep, k_top, k_bot};
    if (!voc->predicates().empty())
      options.insert(options.end(), {k_pred, k_pred, k_pred});
    if (noms_ok) options.insert(options.end(), {k_nom, k_nom});
    switch (options[pick(0, options.size() - 1)]) {
      case k_pred: {
        std::size_t pd = pick(0, voc->predicates().size() - 1);
        std::vector<var_id> args;
        for (int a = 0; a < voc->predicate(pd).arity; ++a) args.push_back(random_var());
        return pred(voc, pd, std::move(args));
      }
      case k_nom:
        return nominal(voc, pick(0, voc->nominals().size() - 1));
      case k_top:
        return top(voc);
      case k_bot:
        return bot(voc);
      default:
        return dep(voc, random_subset(all), random_var());
    }
  }

  enum { k_neg, k_conj, k_disj, k_impl, k_box, k_dia, k_dd, k_at, k_game };
  std::vector<int> options{k_neg, k_neg,  k_conj, k_conj, k_disj,
                           k_impl, k_box, k_box,  k_dia,  k_dia, k_dd};
  if (noms_ok) options.insert(options.end(), {k_at, k_at});
  if (allow_sugar) options.push_back(k_game);

  auto sub = [&](int d) { return random_formula(voc, d, allow_nominals, allow_sugar); };
  switch (options[pick(0, options.size() - 1)]) {
    case k_neg:
      return lnot(sub(depth - 1));
    case k_conj:
      return land(sub(static_cast<int>(pick(0, depth - 1))), sub(depth - 1));
    case k_disj:
      return lor(sub(static_cast<int>(pick(0, depth - 1))), sub(depth - 1));
    case k_impl:
      return implies(sub(static_cast<int>(pick(0, depth - 1))), sub(depth - 1));
    case k_box:
      return box(random_subset(all), random_subset(all), random_subset(all),
                 sub(depth - 1));
    case k_dia:
      return dia(random_subset(all), random_subset(all), random_subset(all),
                 sub(depth - 1));
    case k_dd:
      return dd(random_subset(all), sub(depth - 1));
    case k_at:
      return at(pick(0, voc->nominals().size() - 1), sub(depth - 1));
    default: {
      var_set coalition = random_subset(all, /*allow_empty=*/false);
      switch (pick(0, noms_ok ? 4 : 3)) {
        case 0: return mk_wpa(voc, coalition);
        case 1: return mk_spa(voc, coalition);
        case 2: return mk_na(voc, coalition);
        case 3: return mk_coalition_atom(voc, coalition);
        default: return mk_core(voc, coalition, pick(0, voc->nominals().size() - 1));
      }
    }
  }
}

}  // namespace lpfd
