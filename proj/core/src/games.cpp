#include "lpfd/games.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace lpfd {

namespace {

void check_coalition(const vocab_ptr& voc, var_set coalition) {
  if (coalition.empty()) throw game_error("coalition must be non-empty");
  if (!coalition.subset_of(voc->all_vars()))
    throw game_error("coalition is not a subset of the player set");
}

std::vector<bit_rel> strict_prefs(const pd_model& m) {
  std::vector<bit_rel> out;
  out.reserve(m.voc()->var_count());
  for (var_id x = 0; x < m.voc()->var_limit(); ++x)
    out.push_back(m.pref(x).strict_part());
  return out;
}

std::vector<bool> to_mask(const std::vector<point_id>& ids, std::size_t n) {
  std::vector<bool> out(n, false);
  for (point_id w : ids) out[w] = true;
  return out;
}

// Non-empty subsets in increasing bitmask order (deterministic report order).
std::vector<var_set> nonempty_subsets(var_set s) {
  std::vector<var_set> out;
  for (std::uint32_t mask = 1; mask <= s.bits(); ++mask)
    if (var_set(mask).subset_of(s)) out.push_back(var_set(mask));
  return out;
}

}  // namespace

// ---- solution concepts by definition ---------------------------------------

std::vector<point_id> nash_bruteforce(const pd_model& m, var_set coalition) {
  check_coalition(m.voc(), coalition);
  const var_set all = m.voc()->all_vars();
  const auto strict = strict_prefs(m);
  std::vector<point_id> out;
  for (point_id s = 0; s < m.assignment_count(); ++s) {
    bool stable = true;
    coalition.for_each([&](var_id x) {
      if (!stable) return;
      for (point_id t = 0; t < m.assignment_count(); ++t) {
        if (m.eq_on(t, s, all - var_set::single(x)) && strict[x].at(s, t)) {
          stable = false;
          return;
        }
      }
    });
    if (stable) out.push_back(s);
  }
  return out;
}

std::vector<point_id> wpo_bruteforce(const pd_model& m, var_set coalition) {
  check_coalition(m.voc(), coalition);
  const var_set rest = m.voc()->complement(coalition);
  const auto strict = strict_prefs(m);
  std::vector<point_id> out;
  for (point_id s = 0; s < m.assignment_count(); ++s) {
    bool optimal = true;
    for (point_id t = 0; t < m.assignment_count() && optimal; ++t) {
      if (!m.eq_on(t, s, rest)) continue;
      bool all_strict = true;
      coalition.for_each([&](var_id x) {
        if (!strict[x].at(s, t)) all_strict = false;
      });
      if (all_strict) optimal = false;
    }
    if (optimal) out.push_back(s);
  }
  return out;
}

std::vector<point_id> spo_bruteforce(const pd_model& m, var_set coalition) {
  check_coalition(m.voc(), coalition);
  const var_set rest = m.voc()->complement(coalition);
  const auto strict = strict_prefs(m);
  std::vector<point_id> out;
  for (point_id s = 0; s < m.assignment_count(); ++s) {
    bool optimal = true;
    for (point_id t = 0; t < m.assignment_count() && optimal; ++t) {
      if (!m.eq_on(t, s, rest)) continue;
      bool all_weak = true;
      bool one_strict = false;
      coalition.for_each([&](var_id x) {
        if (!m.pref(x).at(s, t)) all_weak = false;
        if (strict[x].at(s, t)) one_strict = true;
      });
      if (all_weak && one_strict) optimal = false;
    }
    if (optimal) out.push_back(s);
  }
  return out;
}

// ---- solution concepts by formula -------------------------------------------

bool nash_formula(model_checker& mc, var_set coalition, point_id s) {
  return mc.eval(mk_na(mc.model().voc(), coalition), s);
}

bool wpo_formula(model_checker& mc, var_set coalition, point_id s) {
  return mc.eval(mk_wpa(mc.model().voc(), coalition), s);
}

bool spo_formula(model_checker& mc, var_set coalition, point_id s) {
  return mc.eval(mk_spa(mc.model().voc(), coalition), s);
}

bool nash_formula(const pd_model& m, var_set coalition, point_id s) {
  rpd_model r = pd_to_rpd(m);
  model_checker mc(r);
  return nash_formula(mc, coalition, s);
}

bool wpo_formula(const pd_model& m, var_set coalition, point_id s) {
  rpd_model r = pd_to_rpd(m);
  model_checker mc(r);
  return wpo_formula(mc, coalition, s);
}

bool spo_formula(const pd_model& m, var_set coalition, point_id s) {
  rpd_model r = pd_to_rpd(m);
  model_checker mc(r);
  return spo_formula(mc, coalition, s);
}

// ---- cross validation --------------------------------------------------------

namespace {

struct concept_def {
  const char* name;
  std::vector<point_id> (*brute)(const pd_model&, var_set);
  formula (*form)(const vocab_ptr&, var_set);
};

const concept_def k_concepts[] = {
    {"nash", nash_bruteforce, mk_na},
    {"wpo", wpo_bruteforce, mk_wpa},
    {"spo", spo_bruteforce, mk_spa},
};

void compare_concepts(const pd_model& m, model_checker& mc,
                      std::vector<optimality_mismatch>& out) {
  for (var_set coalition : nonempty_subsets(m.voc()->all_vars())) {
    for (const auto& c : k_concepts) {
      const auto brute = to_mask(c.brute(m, coalition), m.assignment_count());
      const auto& ext = mc.extension(c.form(m.voc(), coalition));
      for (point_id s = 0; s < m.assignment_count(); ++s) {
        if (brute[s] != ext[s])
          out.push_back({c.name, coalition, m.voc()->render_set(coalition), s,
                         static_cast<bool>(brute[s]), static_cast<bool>(ext[s])});
      }
    }
  }
}

}  // namespace

std::vector<optimality_mismatch> cross_validate_optimality(const pd_model& m) {
  rpd_model r = pd_to_rpd(m);
  model_checker mc(r);
  std::vector<optimality_mismatch> out;
  compare_concepts(m, mc, out);
  return out;
}

// ---- the core ------------------------------------------------------------------

std::vector<profile_id> core_bruteforce(const cpd_model& m) {
  const std::size_t na = m.profile_count();
  const var_set all = m.players();
  std::vector<bit_rel> strict;
  for (var_id i = 0; i < m.voc()->var_limit(); ++i)
    strict.push_back(m.pref(i).strict_part());

  std::vector<profile_id> out;
  for (profile_id a = 0; a < na; ++a) {
    var_partition dom = m.dom_partition(a);
    if (dom.size() != 1 || !(dom.front() == all)) continue;
    bool dominated = false;
    for (profile_id plan = 0; plan < na && !dominated; ++plan) {
      for (const var_set& block : m.dom_partition(plan)) {
        // The block deviates to its committed choices in `plan`; domination
        // requires every completion of that commitment to be strictly better
        // for all block members.
        bool all_improve = true;
        for (profile_id completion = 0; completion < na && all_improve; ++completion) {
          if (!m.eq_choice(completion, plan, block)) continue;
          block.for_each([&](var_id i) {
            if (!strict[i].at(a, completion)) all_improve = false;
          });
        }
        if (all_improve) {
          dominated = true;
          break;
        }
      }
    }
    if (!dominated) out.push_back(a);
  }
  return out;
}

bool core_formula(const cpd_model& m, profile_id a) {
  auto problems = m.validate_rcpd();
  if (!problems.empty())
    throw game_error("core formula requires a reduced model: " + problems.front());
  rpd_model r = m.to_rpd();
  model_checker mc(r);
  return mc.eval(mk_core(m.voc(), m.players(), a), a);
}

bool core_relativized(const cpd_model& m, var_set coalition, profile_id a) {
  check_coalition(m.voc(), coalition);
  auto problems = m.validate_rcpd();
  if (!problems.empty())
    throw game_error("core formula requires a reduced model: " + problems.front());
  rpd_model r = m.to_rpd();
  model_checker mc(r);
  return mc.eval(mk_core(m.voc(), coalition, a), a);
}

bool core_partition(const cpd_model& m, const var_partition& pi, profile_id a) {
  if (!is_partition_of(pi, m.players()))
    throw game_error("blocks do not partition the player set");
  auto problems = m.validate_rcpd();
  if (!problems.empty())
    throw game_error("core formula requires a reduced model: " + problems.front());
  rpd_model r = m.to_rpd();
  model_checker mc(r);
  return mc.eval(mk_core_partition(m.voc(), pi, a), a);
}

namespace {

std::optional<var_partition> recover_partition(model_checker& mc, const vocab_ptr& voc,
                                               point_id a) {
  var_partition blocks;
  for (var_set x : nonempty_subsets(voc->all_vars()))
    if (mc.eval(mk_coalition_atom(voc, x), a)) blocks.push_back(x);
  if (!is_partition_of(blocks, voc->all_vars())) return std::nullopt;
  return normalize_partition(std::move(blocks));
}

}  // namespace

var_partition coalition_partition_of(const cpd_model& m, profile_id a) {
  rpd_model r = m.to_rpd();
  model_checker mc(r);
  auto rec = recover_partition(mc, m.voc(), a);
  if (!rec)
    throw game_error("recovered coalition sets do not form a partition at profile " +
                     m.profile_name(a));
  return *rec;
}

// ---- bundled analysis ------------------------------------------------------------

bool analysis_report::ok() const {
  if (!mismatches.empty()) return false;
  for (const auto& c : checks)
    if (c.applicable && !c.passed) return false;
  return true;
}

namespace {

std::string describe_mismatch(const analysis_report& r, const optimality_mismatch& mm) {
  std::ostringstream os;
  os << mm.concept_name << " at " << r.profiles[mm.profile] << " for "
     << mm.coalition_name << ": definition says " << (mm.brute ? "true" : "false")
     << ", formula says " << (mm.formula ? "true" : "false");
  return os.str();
}

void fill_concept_rows(analysis_report& r, const pd_model& pd, model_checker& mc) {
  const vocab_ptr& voc = pd.voc();
  for (var_set coalition : nonempty_subsets(voc->all_vars())) {
    for (const auto& c : k_concepts) {
      analysis_report::concept_row row;
      row.coalition = coalition;
      row.coalition_name = voc->render_set(coalition);
      row.by_profile = to_mask(c.brute(pd, coalition), pd.assignment_count());
      const auto& ext = mc.extension(c.form(voc, coalition));
      for (point_id s = 0; s < pd.assignment_count(); ++s)
        if (row.by_profile[s] != ext[s])
          r.mismatches.push_back({c.name, coalition, row.coalition_name, s,
                                  static_cast<bool>(row.by_profile[s]),
                                  static_cast<bool>(ext[s])});
      if (std::string(c.name) == "nash") r.nash.push_back(std::move(row));
      else if (std::string(c.name) == "wpo") r.wpo.push_back(std::move(row));
      else r.spo.push_back(std::move(row));
    }
  }
  check_outcome oc;
  oc.name = "optimality-formulas";
  oc.passed = r.mismatches.empty();
  if (!oc.passed) oc.detail = describe_mismatch(r, r.mismatches.front());
  r.checks.push_back(std::move(oc));
}

void check_nash_as_pareto(analysis_report& r, const pd_model& pd, model_checker& mc) {
  const vocab_ptr& voc = pd.voc();
  check_outcome oc;
  oc.name = "nash-as-pareto";
  oc.passed = true;
  for (var_set coalition : nonempty_subsets(voc->all_vars())) {
    std::vector<formula> strong, weak;
    coalition.for_each([&](var_id x) {
      strong.push_back(mk_spa(voc, var_set::single(x)));
      weak.push_back(mk_wpa(voc, var_set::single(x)));
    });
    const auto& na = mc.extension(mk_na(voc, coalition));
    const auto& sp = mc.extension(conj_all(voc, strong));
    const auto& wp = mc.extension(conj_all(voc, weak));
    for (point_id s = 0; s < pd.assignment_count(); ++s) {
      if (na[s] == sp[s] && na[s] == wp[s]) continue;
      oc.passed = false;
      oc.detail = "Na, per-member sPa and per-member wPa disagree at " +
                  r.profiles[s] + " for " + voc->render_set(coalition);
      r.checks.push_back(std::move(oc));
      return;
    }
  }
  r.checks.push_back(std::move(oc));
}

void skip_check(analysis_report& r, const std::string& name, const std::string& why) {
  check_outcome oc;
  oc.name = name;
  oc.applicable = false;
  oc.detail = why;
  r.checks.push_back(std::move(oc));
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += " ";
    out += x;
  }
  return out;
}

void run_coalitional_checks(analysis_report& r, const cpd_model& m, model_checker& mc,
                            const pd_model& pd) {
  const vocab_ptr& voc = m.voc();

  // Structure recovery: the p_X formulas must read back the stored coalition
  // structure wherever no block determines an outside player.
  {
    check_outcome oc;
    oc.name = "structure-recovery";
    oc.passed = true;
    std::size_t tested = 0;
    for (profile_id a = 0; a < m.profile_count(); ++a) {
      if (!m.p_recoverable(a)) continue;
      ++tested;
      auto rec = recover_partition(mc, voc, a);
      auto stored = normalize_partition(m.dom_partition(a));
      if (!rec || !(*rec == stored)) {
        oc.passed = false;
        oc.detail = "recovered structure differs from the stored one at " +
                    r.profiles[a];
        break;
      }
    }
    if (tested == 0) {
      oc.applicable = false;
      oc.detail = "no profile supports formula-based recovery";
    } else if (oc.passed && !r.unrecoverable.empty()) {
      oc.detail = "skipped at: " + join(r.unrecoverable);
    }
    r.checks.push_back(std::move(oc));
  }

  const auto core_ids = core_bruteforce(m);
  for (profile_id a : core_ids) r.core.push_back(r.profiles[a]);
  std::vector<bool> in_core = to_mask(core_ids, m.profile_count());

  // Core profiles are weakly Pareto optimal for the grand coalition.
  {
    check_outcome oc;
    oc.name = "core-implies-pareto";
    oc.passed = true;
    const auto wpo = to_mask(wpo_bruteforce(pd, m.players()), m.profile_count());
    for (profile_id a : core_ids) {
      if (!wpo[a]) {
        oc.passed = false;
        oc.detail = "core profile " + r.profiles[a] +
                    " is not weakly Pareto optimal for the grand coalition";
        break;
      }
    }
    r.checks.push_back(std::move(oc));
  }

  const bool recovery_everywhere = r.unrecoverable.empty();
  const std::string skip_why =
      "structure recovery unsound at: " + join(r.unrecoverable);

  // Core membership by formula must agree with the deviation enumeration.
  if (!recovery_everywhere) {
    skip_check(r, "core-formula", skip_why);
  } else {
    check_outcome oc;
    oc.name = "core-formula";
    oc.passed = true;
    for (profile_id a = 0; a < m.profile_count(); ++a) {
      bool fval = mc.eval(mk_core(voc, m.players(), a), a);
      if (fval != in_core[a]) {
        oc.passed = false;
        oc.detail = "core formula and deviation enumeration disagree at " +
                    r.profiles[a];
        break;
      }
    }
    r.checks.push_back(std::move(oc));
  }

  // At profiles whose structure is all singletons, the partition core formula
  // collapses to "named here and a Nash equilibrium of the grand coalition".
  if (!recovery_everywhere) {
    skip_check(r, "singleton-core-is-nash", skip_why);
  } else {
    check_outcome oc;
    oc.name = "singleton-core-is-nash";
    oc.passed = true;
    var_partition singletons;
    m.players().for_each([&](var_id i) { singletons.push_back(var_set::single(i)); });
    std::size_t tested = 0;
    for (profile_id a = 0; a < m.profile_count() && oc.passed; ++a) {
      if (!(normalize_partition(m.dom_partition(a)) == singletons)) continue;
      ++tested;
      for (std::size_t nom = 0; nom < m.profile_count(); ++nom) {
        formula lhs = mk_core_partition(voc, singletons, nom);
        formula rhs = land(nominal(voc, nom), mk_na(voc, m.players()));
        if (mc.eval(lhs, a) != mc.eval(rhs, a)) {
          oc.passed = false;
          oc.detail = "partition core and named-Nash disagree at " + r.profiles[a] +
                      " for name " + r.profiles[nom];
          break;
        }
      }
    }
    if (tested == 0) {
      oc.applicable = false;
      oc.detail = "no profile has the all-singletons structure";
    }
    r.checks.push_back(std::move(oc));
  }

  // Partition core membership implies weak Pareto optimality of every block.
  if (!recovery_everywhere) {
    skip_check(r, "partition-core-pareto", skip_why);
  } else {
    check_outcome oc;
    oc.name = "partition-core-pareto";
    oc.passed = true;
    const auto partitions = all_partitions(m.players());
    for (std::size_t nom = 0; nom < m.profile_count() && oc.passed; ++nom) {
      for (const auto& pi : partitions) {
        std::vector<formula> blocks_opt;
        for (var_set block : pi) blocks_opt.push_back(mk_wpa(voc, block));
        formula claim = implies(mk_core_partition(voc, pi, nom),
                                conj_all(voc, blocks_opt));
        point_id bad = 0;
        if (!mc.valid_in_model(claim, &bad)) {
          oc.passed = false;
          oc.detail = "partition core without block optimality at " + r.profiles[bad] +
                      " for name " + r.profiles[nom] + ", structure " +
                      render_partition(*voc, pi);
          break;
        }
      }
    }
    r.checks.push_back(std::move(oc));
  }
}

}  // namespace

analysis_report analyze(const cpd_model& m, const std::string& model_name) {
  auto problems = m.validate_cpd();
  if (!problems.empty())
    throw game_error("invalid coalitional model: " + problems.front());
  if (m.player_count() > 10)
    throw game_error("model too large for exhaustive coalition analysis");

  analysis_report r;
  r.model_name = model_name;
  r.coalitional = true;
  r.profiles = m.profile_names();
  for (profile_id a : m.rcpd_violations()) r.rcpd_violations.push_back(r.profiles[a]);
  for (profile_id a = 0; a < m.profile_count(); ++a)
    if (!m.p_recoverable(a)) r.unrecoverable.push_back(r.profiles[a]);

  pd_model pd = m.to_pd(false);
  rpd_model rel = pd_to_rpd(pd);
  model_checker mc(rel);

  fill_concept_rows(r, pd, mc);
  check_nash_as_pareto(r, pd, mc);
  run_coalitional_checks(r, m, mc, pd);
  return r;
}

analysis_report analyze(const pd_model& m, const std::string& model_name) {
  auto problems = m.validate();
  if (!problems.empty())
    throw game_error("invalid assignment model: " + problems.front());
  if (m.voc()->var_count() > 10)
    throw game_error("model too large for exhaustive coalition analysis");

  analysis_report r;
  r.model_name = model_name;
  r.coalitional = false;
  r.profiles = m.assignment_names();

  rpd_model rel = pd_to_rpd(m);
  model_checker mc(rel);
  fill_concept_rows(r, m, mc);
  check_nash_as_pareto(r, m, mc);
  return r;
}

// ---- rendering --------------------------------------------------------------------

namespace {

std::string satisfying(const analysis_report& r, const analysis_report::concept_row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.by_profile.size(); ++i) {
    if (!row.by_profile[i]) continue;
    if (!out.empty()) out += " ";
    out += r.profiles[i];
  }
  return out.empty() ? "(none)" : out;
}

void render_rows(std::ostringstream& os, const analysis_report& r, const char* label,
                 const std::vector<analysis_report::concept_row>& rows) {
  for (const auto& row : rows)
    os << label << " " << row.coalition_name << ": " << satisfying(r, row) << "\n";
}

}  // namespace

std::string render_report(const analysis_report& r) {
  std::ostringstream os;
  os << "model: " << (r.model_name.empty() ? "(unnamed)" : r.model_name) << "\n";
  os << "kind: " << (r.coalitional ? "coalitional" : "assignment") << "\n";
  os << "profiles: " << join(r.profiles) << "\n";
  render_rows(os, r, "nash", r.nash);
  render_rows(os, r, "weak-pareto", r.wpo);
  render_rows(os, r, "strong-pareto", r.spo);
  if (r.coalitional) {
    os << "core: " << (r.core.empty() ? "(none)" : join(r.core)) << "\n";
    os << "reducedness-violations: "
       << (r.rcpd_violations.empty() ? "(none)" : join(r.rcpd_violations)) << "\n";
    os << "recovery-unsound: "
       << (r.unrecoverable.empty() ? "(none)" : join(r.unrecoverable)) << "\n";
  }
  for (const auto& c : r.checks) {
    os << "check " << c.name << ": ";
    if (!c.applicable) os << "skipped (" << c.detail << ")";
    else if (c.passed) os << "pass" << (c.detail.empty() ? "" : " (" + c.detail + ")");
    else os << "FAIL (" << c.detail << ")";
    os << "\n";
  }
  for (const auto& mm : r.mismatches) {
    os << "mismatch: " << mm.concept_name << " " << mm.coalition_name << " at "
       << r.profiles[mm.profile] << " definition=" << (mm.brute ? "true" : "false")
       << " formula=" << (mm.formula ? "true" : "false") << "\n";
  }
  os << "result: " << (r.ok() ? "ok" : "mismatch") << "\n";
  return os.str();
}

std::string report_to_json(const analysis_report& r) {
  nlohmann::json j;
  j["model"] = r.model_name;
  j["kind"] = r.coalitional ? "coalitional" : "assignment";
  j["profiles"] = r.profiles;
  auto rows = [&](const std::vector<analysis_report::concept_row>& src) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : src) {
      nlohmann::json o;
      o["coalition"] = row.coalition_name;
      nlohmann::json names = nlohmann::json::array();
      for (std::size_t i = 0; i < row.by_profile.size(); ++i)
        if (row.by_profile[i]) names.push_back(r.profiles[i]);
      o["profiles"] = names;
      arr.push_back(std::move(o));
    }
    return arr;
  };
  j["nash"] = rows(r.nash);
  j["weak_pareto"] = rows(r.wpo);
  j["strong_pareto"] = rows(r.spo);
  if (r.coalitional) {
    j["core"] = r.core;
    j["reducedness_violations"] = r.rcpd_violations;
    j["recovery_unsound"] = r.unrecoverable;
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json o;
    o["name"] = c.name;
    o["status"] = !c.applicable ? "skipped" : (c.passed ? "pass" : "fail");
    o["detail"] = c.detail;
    checks.push_back(std::move(o));
  }
  j["checks"] = checks;
  nlohmann::json mms = nlohmann::json::array();
  for (const auto& mm : r.mismatches) {
    nlohmann::json o;
    o["concept"] = mm.concept_name;
    o["coalition"] = mm.coalition_name;
    o["profile"] = r.profiles[mm.profile];
    o["definition"] = mm.brute;
    o["formula"] = mm.formula;
    mms.push_back(std::move(o));
  }
  j["mismatches"] = mms;
  j["result"] = r.ok() ? "ok" : "mismatch";
  return j.dump(2) + "\n";
}

}  // namespace lpfd
