#include "lpfd/cpd.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lpfd {

strat_id choice::strategy_for(var_id i) const {
  std::size_t pos = 0;
  strat_id found = 0;
  bool ok = false;
  coalition.for_each([&](var_id m) {
    if (m == i) {
      found = strategy[pos];
      ok = true;
    }
    ++pos;
  });
  if (!ok) throw std::invalid_argument("choice::strategy_for: player not in coalition");
  return found;
}

cpd_model::cpd_model(std::vector<std::string> players,
                     std::vector<std::string> strategies,
                     std::vector<std::string> profile_names)
    : strategies_(std::move(strategies)), profile_names_(std::move(profile_names)) {
  voc_ = std::make_shared<vocabulary>(std::move(players),
                                      std::vector<predicate_info>{}, profile_names_);
  profiles_.assign(profile_names_.size(),
                   std::vector<choice_id>(voc_->var_count(), 0));
  pref_.assign(voc_->var_count(), bit_rel(profile_names_.size(), true));
}

std::optional<strat_id> cpd_model::find_strategy(const std::string& name) const {
  for (strat_id s = 0; s < strategies_.size(); ++s)
    if (strategies_[s] == name) return s;
  return std::nullopt;
}

strat_id cpd_model::require_strategy(const std::string& name) const {
  if (auto s = find_strategy(name)) return *s;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::optional<profile_id> cpd_model::find_profile(const std::string& name) const {
  for (profile_id a = 0; a < profile_names_.size(); ++a)
    if (profile_names_[a] == name) return a;
  return std::nullopt;
}

profile_id cpd_model::require_profile(const std::string& name) const {
  if (auto a = find_profile(name)) return *a;
  throw std::invalid_argument("unknown profile: " + name);
}

choice_id cpd_model::intern_choice(choice c) {
  if (c.coalition.empty())
    throw std::invalid_argument("choice with empty coalition");
  if (c.strategy.size() != static_cast<std::size_t>(c.coalition.size()))
    throw std::invalid_argument("choice strategy count differs from coalition size");
  for (strat_id s : c.strategy)
    if (s >= strategies_.size())
      throw std::invalid_argument("choice mentions a missing strategy");
  if (!c.coalition.subset_of(voc_->all_vars()))
    throw std::invalid_argument("choice coalition outside the player set");
  for (choice_id id = 0; id < pool_.size(); ++id)
    if (pool_[id] == c) return id;
  pool_.push_back(std::move(c));
  return pool_.size() - 1;
}

void cpd_model::set_utilities(std::map<std::vector<strat_id>, std::vector<double>> u) {
  for (const auto& [merged_assign, values] : u) {
    if (merged_assign.size() != voc_->var_count() ||
        values.size() != voc_->var_count())
      throw std::invalid_argument("utility entry has wrong arity");
    for (strat_id s : merged_assign)
      if (s >= strategies_.size())
        throw std::invalid_argument("utility entry mentions a missing strategy");
  }
  utilities_ = std::move(u);
  // Induce the preference preorders from utility comparison.
  std::size_t n = profile_count();
  for (var_id i = 0; i < voc_->var_limit(); ++i) {
    bit_rel r(n);
    for (profile_id a = 0; a < n; ++a) {
      auto ua = utility(a, i);
      if (!ua)
        throw std::invalid_argument("no utility for merged assignment of profile " +
                                    profile_names_[a]);
      for (profile_id b = 0; b < n; ++b) {
        auto ub = utility(b, i);
        if (!ub)
          throw std::invalid_argument("no utility for merged assignment of profile " +
                                      profile_names_[b]);
        if (*ua <= *ub) r.set(a, b);
      }
    }
    pref_[i] = r;
  }
}

std::optional<double> cpd_model::utility(profile_id a, var_id i) const {
  auto it = utilities_.find(merged(a));
  if (it == utilities_.end()) return std::nullopt;
  return it->second[i];
}

bool cpd_model::realizable(profile_id a, std::string* why) const {
  for (var_id i = 0; i < voc_->var_limit(); ++i) {
    const choice& c = choice_at(a, i);
    if (!c.coalition.contains(i)) {
      if (why)
        *why = "player " + voc_->var_name(i) + " is outside their own coalition " +
               voc_->render_set(c.coalition);
      return false;
    }
    bool consistent = true;
    c.coalition.for_each([&](var_id j) {
      if (profiles_[a][j] != profiles_[a][i]) consistent = false;
    });
    if (!consistent) {
      if (why)
        *why = "members of coalition " + voc_->render_set(c.coalition) +
               " committed to different choices";
      return false;
    }
  }
  return true;
}

std::vector<strat_id> cpd_model::merged(profile_id a) const {
  std::vector<strat_id> out(voc_->var_count());
  for (var_id i = 0; i < voc_->var_limit(); ++i)
    out[i] = choice_at(a, i).strategy_for(i);
  return out;
}

var_partition cpd_model::dom_partition(profile_id a) const {
  var_partition blocks;
  var_set seen;
  for (var_id i = 0; i < voc_->var_limit(); ++i) {
    var_set dom = choice_at(a, i).coalition;
    if (seen.contains(i)) continue;
    blocks.push_back(dom);
    seen |= dom;
  }
  return normalize_partition(std::move(blocks));
}

std::vector<std::vector<strat_id>> cpd_model::sigma(const var_partition& pi) const {
  var_partition want = normalize_partition(pi);
  std::set<std::vector<strat_id>> out;
  for (profile_id a = 0; a < profile_count(); ++a)
    if (dom_partition(a) == want) out.insert(merged(a));
  return {out.begin(), out.end()};
}

bool cpd_model::eq_choice(profile_id a, profile_id b, var_set xs) const {
  bool same = true;
  xs.for_each([&](var_id i) {
    if (profiles_[a][i] != profiles_[b][i]) same = false;
  });
  return same;
}

bool cpd_model::dep_at(profile_id a, var_set xs, var_id j) const {
  for (profile_id b = 0; b < profile_count(); ++b)
    if (eq_choice(a, b, xs) && profiles_[a][j] != profiles_[b][j]) return false;
  return true;
}

std::vector<std::string> cpd_model::validate_cpd() const {
  std::vector<std::string> problems;
  // 1. realizability
  for (profile_id a = 0; a < profile_count(); ++a) {
    std::string why;
    if (!realizable(a, &why))
      problems.push_back("profile " + profile_names_[a] + " is not realizable: " + why);
  }
  if (!problems.empty()) return problems;  // structure below assumes realizability
  // distinctness of profiles as functions
  for (profile_id a = 0; a < profile_count(); ++a)
    for (profile_id b = a + 1; b < profile_count(); ++b)
      if (profiles_[a] == profiles_[b])
        problems.push_back("profiles " + profile_names_[a] + " and " +
                           profile_names_[b] + " are the same choice profile");
  // 2. every coalition structure realized
  std::set<var_partition> have;
  for (profile_id a = 0; a < profile_count(); ++a) have.insert(dom_partition(a));
  for (const auto& pi : all_partitions(voc_->all_vars()))
    if (!have.count(pi))
      problems.push_back("no profile realizes coalition structure " +
                         render_partition(*voc_, pi));
  // 3. merged assignments monotone under coarsening
  auto parts = all_partitions(voc_->all_vars());
  for (const auto& fine : parts)
    for (const auto& coarse : parts) {
      if (&fine == &coarse || !refines(fine, coarse)) continue;
      auto sf = sigma(fine), sc = sigma(coarse);
      for (const auto& s : sf)
        if (!std::binary_search(sc.begin(), sc.end(), s)) {
          std::ostringstream os;
          os << "assignment realized under " << render_partition(*voc_, fine)
             << " is lost under coarser " << render_partition(*voc_, coarse);
          problems.push_back(os.str());
        }
    }
  // 4. merged-equal profiles are indifferent for every player
  for (profile_id a = 0; a < profile_count(); ++a)
    for (profile_id b = 0; b < profile_count(); ++b) {
      if (a == b || merged(a) != merged(b)) continue;
      for (var_id i = 0; i < voc_->var_limit(); ++i)
        if (!pref_[i].at(a, b))
          problems.push_back("profiles " + profile_names_[a] + " and " +
                             profile_names_[b] +
                             " merge to the same assignment but player " +
                             voc_->var_name(i) + " is not indifferent");
    }
  // 5. total preorders
  for (var_id i = 0; i < voc_->var_limit(); ++i) {
    if (!pref_[i].is_preorder())
      problems.push_back("preference of player " + voc_->var_name(i) +
                         " is not a preorder");
    else if (!pref_[i].is_total())
      problems.push_back("preference of player " + voc_->var_name(i) +
                         " is not total");
  }
  return problems;
}

std::vector<profile_id> cpd_model::rcpd_violations() const {
  std::vector<profile_id> out;
  for (profile_id a = 0; a < profile_count(); ++a) {
    var_partition pi = dom_partition(a);
    if (pi.size() != 2) continue;
    var_set x = pi[0], y = pi[1];
    auto determines = [&](var_set from, var_set to) {
      bool all = true;
      to.for_each([&](var_id j) {
        if (!dep_at(a, from, j)) all = false;
      });
      return all;
    };
    if (determines(x, y) && determines(y, x)) out.push_back(a);
  }
  return out;
}

std::vector<std::string> cpd_model::validate_rcpd() const {
  std::vector<std::string> problems = validate_cpd();
  for (profile_id a : rcpd_violations()) {
    var_partition pi = dom_partition(a);
    problems.push_back("blocks " + voc_->render_set(pi[0]) + " and " +
                       voc_->render_set(pi[1]) +
                       " functionally determine each other at profile " +
                       profile_names_[a]);
  }
  return problems;
}

bool cpd_model::p_recoverable(profile_id a) const {
  for (var_set b : dom_partition(a)) {
    bool clean = true;
    voc_->complement(b).for_each([&](var_id j) {
      if (dep_at(a, b, j)) clean = false;
    });
    if (!clean) return false;
  }
  return true;
}

pd_model cpd_model::to_pd(bool full_object_space) const {
  std::vector<choice> objects;
  if (full_object_space) {
    // Every partial function from a coalition to strategies, smallest
    // coalitions first; bail out to the compact set when too large.
    double size = 1;
    for (std::size_t i = 0; i < voc_->var_count(); ++i)
      size *= static_cast<double>(strategies_.size() + 1);
    if (size <= 200000 && !strategies_.empty()) {
      std::uint32_t all = voc_->all_vars().bits();
      for (std::uint32_t m = 0; m <= all; ++m) {
        var_set coal(m);
        std::vector<strat_id> strat(static_cast<std::size_t>(coal.size()), 0);
        for (;;) {
          objects.push_back({coal, strat});
          std::size_t i = strat.size();
          while (i > 0 && strat[i - 1] + 1 == strategies_.size()) strat[--i] = 0;
          if (i == 0) break;
          ++strat[i - 1];
        }
      }
    } else {
      full_object_space = false;
    }
  }
  if (!full_object_space) objects = pool_;
  // Ensure every used choice appears (full space always contains them).
  for (const choice& c : pool_)
    if (std::find(objects.begin(), objects.end(), c) == objects.end())
      objects.push_back(c);

  std::vector<std::string> object_names;
  object_names.reserve(objects.size());
  for (const choice& c : objects) object_names.push_back(render_choice(c));

  pd_model out(voc_, std::move(object_names), profile_names_);
  for (profile_id a = 0; a < profile_count(); ++a)
    for (var_id i = 0; i < voc_->var_limit(); ++i) {
      const choice& c = choice_at(a, i);
      auto it = std::find(objects.begin(), objects.end(), c);
      out.set_assignment(a, i, static_cast<obj_id>(it - objects.begin()));
    }
  for (var_id i = 0; i < voc_->var_limit(); ++i) out.pref(i) = pref_[i];
  for (profile_id a = 0; a < profile_count(); ++a) out.name_point(a, a);
  return out;
}

rpd_model cpd_model::to_rpd() const { return pd_to_rpd(to_pd(false)); }

std::string cpd_model::render_choice(const choice& c) const {
  std::ostringstream os;
  os << '{';
  std::size_t pos = 0;
  c.coalition.for_each([&](var_id i) {
    if (pos) os << ',';
    os << '(' << voc_->var_name(i) << ',' << strategies_[c.strategy[pos]] << ')';
    ++pos;
  });
  os << '}';
  return os.str();
}

cpd_model build_cpd_from_game(const game_spec& g) {
  // Count profiles and make names.
  std::vector<std::string> names;
  for (const auto& [pi, rows] : g.table)
    for (std::size_t k = 0; k < rows.size(); ++k) {
      (void)pi;
      (void)k;
      names.push_back("a" + std::to_string(names.size()));
    }
  cpd_model m(g.players, g.strategies, names);
  profile_id a = 0;
  for (const auto& [pi, rows] : g.table) {
    if (!is_partition_of(pi, m.players()))
      throw std::invalid_argument("game table row is not a coalition structure");
    for (const auto& row : rows) {
      if (row.size() != g.players.size())
        throw std::invalid_argument("strategy assignment has wrong arity");
      for (var_set block : pi) {
        std::vector<strat_id> strat;
        block.for_each([&](var_id i) { strat.push_back(row[i]); });
        choice_id c = m.intern_choice({block, std::move(strat)});
        block.for_each([&](var_id i) { m.set_choice(a, i, c); });
      }
      ++a;
    }
  }
  m.set_utilities(g.utilities);
  auto problems = m.validate_cpd();
  if (!problems.empty())
    throw std::invalid_argument("game data violates the model conditions: " +
                                problems.front());
  return m;
}

cpd_model build_uniform_cpd(
    const std::vector<std::string>& players,
    const std::vector<std::string>& strategies,
    const std::vector<std::vector<strat_id>>& admissible,
    const std::map<std::vector<strat_id>, std::vector<double>>& utilities) {
  game_spec g{players, strategies, {}, utilities};
  var_set universe;
  for (std::size_t i = 0; i < players.size(); ++i)
    universe.insert(static_cast<var_id>(i));
  for (const auto& pi : all_partitions(universe)) g.table.push_back({pi, admissible});
  return build_cpd_from_game(g);
}

}  // namespace lpfd
