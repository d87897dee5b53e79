#include "lpfd/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace lpfd {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw model_io_error(origin + ": " + msg);
}

const json& need(const json& j, const char* key, const std::string& origin) {
  auto it = j.find(key);
  if (it == j.end()) fail(origin, std::string("missing key '") + key + "'");
  return *it;
}

std::vector<std::string> string_array(const json& j, const std::string& origin,
                                      const char* what) {
  if (!j.is_array()) fail(origin, std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) fail(origin, std::string(what) + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

void check_unique(const std::vector<std::string>& names, const std::string& origin,
                  const char* what) {
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end())
    fail(origin, std::string("duplicate ") + what + " name: " + *dup);
}

class name_index {
public:
  explicit name_index(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) index_[names[i]] = i;
  }
  std::size_t at(const std::string& name, const std::string& origin,
                 const char* what) const {
    auto it = index_.find(name);
    if (it == index_.end())
      fail(origin, std::string("unknown ") + what + ": " + name);
    return it->second;
  }

private:
  std::map<std::string, std::size_t> index_;
};

vocab_ptr load_vocab(const json& j, const std::string& origin) {
  std::vector<std::string> variables =
      string_array(need(j, "variables", origin), origin, "variables");
  std::vector<predicate_info> predicates;
  if (j.contains("predicates")) {
    const json& p = j["predicates"];
    if (!p.is_object()) fail(origin, "predicates must map names to arities");
    for (const auto& [name, arity] : p.items()) {
      if (!arity.is_number_integer())
        fail(origin, "arity of predicate " + name + " must be an integer");
      predicates.push_back({name, arity.get<int>()});
    }
  }
  std::vector<std::string> nominals;
  if (j.contains("nominals"))
    nominals = string_array(j["nominals"], origin, "nominals");
  try {
    return std::make_shared<vocabulary>(std::move(variables), std::move(predicates),
                                        std::move(nominals));
  } catch (const vocabulary_error& e) {
    fail(origin, e.what());
  }
}

bit_rel load_relation(const json& pairs, const name_index& points, std::size_t n,
                      const std::string& origin, const std::string& label,
                      std::vector<std::string>& warnings) {
  bit_rel r(n);
  if (!pairs.is_array()) fail(origin, label + " must be an array of pairs");
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      fail(origin, label + " entries must be [from, to] name pairs");
    r.set(points.at(p[0].get<std::string>(), origin, "point"),
          points.at(p[1].get<std::string>(), origin, "point"));
  }
  bool complete = r.is_reflexive();
  if (!complete) {
    r.reflexive_close();
    warnings.push_back("reflexive closure applied to " + label);
  }
  return r;
}

loaded_model load_rpd(const json& j, const std::string& origin) {
  loaded_model out;
  out.kind = model_kind::rpd;
  vocab_ptr voc = load_vocab(need(j, "vocabulary", origin), origin);
  std::vector<std::string> points =
      string_array(need(j, "points", origin), origin, "points");
  check_unique(points, origin, "point");
  if (points.empty()) fail(origin, "model has no points");
  name_index pidx(points);
  rpd_model m(voc, points);
  const json& rel = need(j, "relations", origin);
  for (const char* family : {"sim", "leq"}) {
    if (!rel.contains(family)) continue;
    const json& fam = rel[family];
    if (!fam.is_object()) fail(origin, std::string(family) + " must map variables to pair lists");
    for (const auto& [var, pairs] : fam.items()) {
      auto v = voc->find_variable(var);
      if (!v) fail(origin, "unknown variable in relations: " + var);
      bit_rel r = load_relation(pairs, pidx, points.size(), origin,
                                std::string(family) + "[" + var + "]", out.warnings);
      (family == std::string("sim") ? m.sim(*v) : m.leq(*v)) = r;
    }
  }
  if (j.contains("valuation")) {
    const json& val = j["valuation"];
    if (!val.is_object()) fail(origin, "valuation must map atoms to point lists");
    for (const auto& [atom_text, where] : val.items()) {
      atom_key key;
      try {
        key = parse_atom(atom_text, *voc);
      } catch (const std::exception& e) {
        fail(origin, e.what());
      }
      for (const std::string& p : string_array(where, origin, "valuation extent"))
        m.add_atom_point(key, pidx.at(p, origin, "point"));
    }
  }
  if (j.contains("nominals")) {
    const json& noms = j["nominals"];
    if (!noms.is_object()) fail(origin, "nominals must map nominal names to points");
    for (const auto& [nom, point] : noms.items()) {
      auto n = voc->find_nominal(nom);
      if (!n) fail(origin, "unknown nominal: " + nom);
      if (!point.is_string()) fail(origin, "nominal " + nom + " must name a point");
      m.name_point(*n, pidx.at(point.get<std::string>(), origin, "point"));
    }
  }
  out.rpd = std::move(m);
  return out;
}

loaded_model load_pd(const json& j, const std::string& origin) {
  loaded_model out;
  out.kind = model_kind::pd;
  vocab_ptr voc = load_vocab(need(j, "vocabulary", origin), origin);
  std::vector<std::string> objects =
      string_array(need(j, "objects", origin), origin, "objects");
  check_unique(objects, origin, "object");
  name_index oidx(objects);
  const json& assigns = need(j, "assignments", origin);
  if (!assigns.is_array()) fail(origin, "assignments must be an array");
  std::vector<std::string> names;
  for (const auto& a : assigns)
    names.push_back(need(a, "name", origin).get<std::string>());
  check_unique(names, origin, "assignment");
  if (names.empty()) fail(origin, "model has no assignments");
  name_index aidx(names);
  pd_model m(voc, objects, names);
  for (std::size_t k = 0; k < names.size(); ++k) {
    const json& values = need(assigns[k], "values", origin);
    if (!values.is_object())
      fail(origin, "assignment " + names[k] + " values must map variables to objects");
    for (var_id x = 0; x < voc->var_limit(); ++x) {
      const std::string& vn = voc->var_name(x);
      if (!values.contains(vn))
        fail(origin, "assignment " + names[k] + " misses variable " + vn);
      m.set_assignment(k, x,
                       oidx.at(values[vn].get<std::string>(), origin, "object"));
    }
  }
  if (j.contains("relations") && j["relations"].contains("pref")) {
    const json& fam = j["relations"]["pref"];
    if (!fam.is_object()) fail(origin, "pref must map variables to pair lists");
    for (const auto& [var, pairs] : fam.items()) {
      auto v = voc->find_variable(var);
      if (!v) fail(origin, "unknown variable in relations: " + var);
      m.pref(*v) = load_relation(pairs, aidx, names.size(), origin,
                                 "pref[" + var + "]", out.warnings);
    }
  }
  if (j.contains("valuation")) {
    const json& val = j["valuation"];
    if (!val.is_object()) fail(origin, "valuation must map predicates to tuple lists");
    for (const auto& [pname, rows] : val.items()) {
      auto p = voc->find_predicate(pname);
      if (!p) fail(origin, "unknown predicate: " + pname);
      if (!rows.is_array()) fail(origin, "valuation of " + pname + " must be an array");
      for (const auto& row : rows) {
        std::vector<obj_id> tuple;
        for (const std::string& o : string_array(row, origin, "tuple"))
          tuple.push_back(oidx.at(o, origin, "object"));
        if (static_cast<int>(tuple.size()) != voc->predicate(*p).arity)
          fail(origin, "tuple of " + pname + " has wrong arity");
        m.add_tuple(*p, std::move(tuple));
      }
    }
  }
  if (j.contains("nominals")) {
    for (const auto& [nom, point] : j["nominals"].items()) {
      auto n = voc->find_nominal(nom);
      if (!n) fail(origin, "unknown nominal: " + nom);
      m.name_point(*n, aidx.at(point.get<std::string>(), origin, "assignment"));
    }
  }
  out.pd = std::move(m);
  return out;
}

loaded_model load_cpd(const json& j, const std::string& origin) {
  loaded_model out;
  out.kind = model_kind::cpd;
  std::vector<std::string> players =
      string_array(need(j, "players", origin), origin, "players");
  std::vector<std::string> strategies =
      string_array(need(j, "strategies", origin), origin, "strategies");
  check_unique(strategies, origin, "strategy");
  if (strategies.empty()) fail(origin, "model has no strategies");
  const json& profiles = need(j, "profiles", origin);
  if (!profiles.is_array()) fail(origin, "profiles must be an array");
  std::vector<std::string> names;
  for (const auto& p : profiles)
    names.push_back(need(p, "name", origin).get<std::string>());
  check_unique(names, origin, "profile");
  if (names.empty()) fail(origin, "model has no profiles");

  cpd_model m;
  try {
    m = cpd_model(players, strategies, names);
  } catch (const vocabulary_error& e) {
    fail(origin, e.what());
  }
  const vocabulary& voc = *m.voc();
  for (profile_id a = 0; a < names.size(); ++a) {
    const json& recs = need(profiles[a], "choices", origin);
    if (!recs.is_array() || recs.size() != players.size())
      fail(origin, "profile " + names[a] + " needs one choice record per player");
    for (var_id i = 0; i < voc.var_limit(); ++i) {
      const json& rec = recs[i];
      std::vector<std::string> coal =
          string_array(need(rec, "coalition", origin), origin, "coalition");
      std::vector<std::string> strat =
          string_array(need(rec, "assign", origin), origin, "assign");
      if (coal.size() != strat.size())
        fail(origin, "profile " + names[a] + ": coalition and assign sizes differ");
      std::vector<std::pair<var_id, strat_id>> entries;
      for (std::size_t k = 0; k < coal.size(); ++k) {
        auto v = voc.find_variable(coal[k]);
        if (!v) fail(origin, "unknown player: " + coal[k]);
        auto s = m.find_strategy(strat[k]);
        if (!s) fail(origin, "unknown strategy: " + strat[k]);
        entries.push_back({*v, *s});
      }
      std::sort(entries.begin(), entries.end());
      choice c;
      for (const auto& [v, s] : entries) {
        if (c.coalition.contains(v))
          fail(origin, "profile " + names[a] + ": player " + voc.var_name(v) +
                           " listed twice in a coalition");
        c.coalition.insert(v);
        c.strategy.push_back(s);
      }
      try {
        m.set_choice(a, i, m.intern_choice(std::move(c)));
      } catch (const std::invalid_argument& e) {
        fail(origin, e.what());
      }
    }
  }
  bool has_utilities = j.contains("utilities");
  bool has_pref = j.contains("relations") && j["relations"].contains("pref");
  if (has_utilities && has_pref)
    fail(origin, "give either utilities or pref relations, not both");
  if (!has_utilities && !has_pref)
    fail(origin, "cpd model needs utilities or pref relations");
  if (has_utilities) {
    const json& rows = j["utilities"];
    if (!rows.is_array()) fail(origin, "utilities must be an array");
    std::map<std::vector<strat_id>, std::vector<double>> table;
    for (const auto& row : rows) {
      std::vector<strat_id> merged;
      for (const std::string& s :
           string_array(need(row, "merged", origin), origin, "merged"))
        merged.push_back(m.require_strategy(s));
      const json& vals = need(row, "values", origin);
      if (!vals.is_array() || vals.size() != players.size())
        fail(origin, "utility values must list one number per player");
      std::vector<double> values;
      for (const auto& v : vals) {
        if (!v.is_number()) fail(origin, "utility values must be numbers");
        values.push_back(v.get<double>());
      }
      if (merged.size() != players.size())
        fail(origin, "merged assignment must list one strategy per player");
      if (!table.emplace(std::move(merged), std::move(values)).second)
        fail(origin, "duplicate utility entry");
    }
    try {
      m.set_utilities(std::move(table));
    } catch (const std::invalid_argument& e) {
      fail(origin, e.what());
    }
  } else {
    name_index aidx(names);
    for (const auto& [var, pairs] : j["relations"]["pref"].items()) {
      auto v = voc.find_variable(var);
      if (!v) fail(origin, "unknown player in relations: " + var);
      m.pref(*v) = load_relation(pairs, aidx, names.size(), origin,
                                 "pref[" + var + "]", out.warnings);
    }
  }
  out.cpd = std::move(m);
  return out;
}

json relation_to_json(const bit_rel& r, const std::vector<std::string>& names) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < r.size(); ++i)
    r.for_each_successor(i, [&](std::size_t k) { pairs.push_back({names[i], names[k]}); });
  std::sort(pairs.begin(), pairs.end());
  json out = json::array();
  for (const auto& [a, b] : pairs) out.push_back(json::array({a, b}));
  return out;
}

json vocab_to_json(const vocabulary& voc) {
  json v;
  v["variables"] = voc.variables();
  if (!voc.predicates().empty()) {
    json p = json::object();
    for (const auto& info : voc.predicates()) p[info.name] = info.arity;
    v["predicates"] = p;
  }
  if (!voc.nominals().empty()) v["nominals"] = voc.nominals();
  return v;
}

json rpd_to_json(const rpd_model& m) {
  const vocabulary& voc = *m.voc();
  json j;
  j["kind"] = "rpd";
  j["vocabulary"] = vocab_to_json(voc);
  std::vector<std::string> points = m.point_names();
  std::sort(points.begin(), points.end());
  j["points"] = points;
  json sim = json::object(), leq = json::object();
  for (var_id x = 0; x < voc.var_limit(); ++x) {
    sim[voc.var_name(x)] = relation_to_json(m.sim(x), m.point_names());
    leq[voc.var_name(x)] = relation_to_json(m.leq(x), m.point_names());
  }
  j["relations"] = {{"sim", sim}, {"leq", leq}};
  if (!m.atoms().empty()) {
    json val = json::object();
    for (const auto& [key, where] : m.atoms()) {
      std::vector<std::string> extent;
      for (point_id w = 0; w < m.point_count(); ++w)
        if (where[w]) extent.push_back(m.point_name(w));
      if (extent.empty()) continue;
      std::sort(extent.begin(), extent.end());
      val[render_atom(voc, key)] = extent;
    }
    if (!val.empty()) j["valuation"] = val;
  }
  json noms = json::object();
  for (std::size_t n = 0; n < voc.nominals().size(); ++n)
    if (auto w = m.named_point(n)) noms[voc.nominal_name(n)] = m.point_name(*w);
  if (!noms.empty()) j["nominals"] = noms;
  return j;
}

json pd_to_json(const pd_model& m) {
  const vocabulary& voc = *m.voc();
  json j;
  j["kind"] = "pd";
  j["vocabulary"] = vocab_to_json(voc);
  std::vector<std::string> objects = m.object_names();
  std::sort(objects.begin(), objects.end());
  j["objects"] = objects;
  std::vector<std::string> names = m.assignment_names();
  std::sort(names.begin(), names.end());
  json assigns = json::array();
  for (const std::string& name : names) {
    point_id a = m.require_assignment(name);
    json values = json::object();
    for (var_id x = 0; x < voc.var_limit(); ++x)
      values[voc.var_name(x)] = m.object_names()[m.value(a, x)];
    assigns.push_back({{"name", name}, {"values", values}});
  }
  j["assignments"] = assigns;
  json pref = json::object();
  for (var_id x = 0; x < voc.var_limit(); ++x)
    pref[voc.var_name(x)] = relation_to_json(m.pref(x), m.assignment_names());
  j["relations"] = {{"pref", pref}};
  if (!m.interpretation().empty()) {
    json val = json::object();
    for (const auto& [p, rows] : m.interpretation()) {
      json list = json::array();
      std::vector<std::vector<std::string>> named_rows;
      for (const auto& row : rows) {
        std::vector<std::string> named;
        for (obj_id o : row) named.push_back(m.object_names()[o]);
        named_rows.push_back(std::move(named));
      }
      std::sort(named_rows.begin(), named_rows.end());
      for (const auto& row : named_rows) list.push_back(row);
      val[voc.predicate(p).name] = list;
    }
    j["valuation"] = val;
  }
  json noms = json::object();
  for (std::size_t n = 0; n < voc.nominals().size(); ++n)
    if (auto a = m.named_point(n)) noms[voc.nominal_name(n)] = m.assignment_name(*a);
  if (!noms.empty()) j["nominals"] = noms;
  return j;
}

json cpd_to_json(const cpd_model& m) {
  const vocabulary& voc = *m.voc();
  json j;
  j["kind"] = "cpd";
  j["players"] = voc.variables();
  j["strategies"] = m.strategy_names();
  std::vector<std::string> names = m.profile_names();
  std::sort(names.begin(), names.end());
  json profiles = json::array();
  for (const std::string& name : names) {
    profile_id a = m.require_profile(name);
    json recs = json::array();
    for (var_id i = 0; i < voc.var_limit(); ++i) {
      const choice& c = m.choice_at(a, i);
      json coal = json::array(), strat = json::array();
      std::size_t pos = 0;
      c.coalition.for_each([&](var_id v) {
        coal.push_back(voc.var_name(v));
        strat.push_back(m.strategy_names()[c.strategy[pos++]]);
      });
      recs.push_back({{"coalition", coal}, {"assign", strat}});
    }
    profiles.push_back({{"name", name}, {"choices", recs}});
  }
  j["profiles"] = profiles;
  if (m.has_utilities()) {
    json rows = json::array();
    for (const auto& [merged, values] : m.utilities()) {
      json ms = json::array();
      for (strat_id s : merged) ms.push_back(m.strategy_names()[s]);
      rows.push_back({{"merged", ms}, {"values", values}});
    }
    j["utilities"] = rows;
  } else {
    json pref = json::object();
    for (var_id i = 0; i < voc.var_limit(); ++i)
      pref[voc.var_name(i)] = relation_to_json(m.pref(i), m.profile_names());
    j["relations"] = {{"pref", pref}};
  }
  return j;
}

}  // namespace

std::string to_string(model_kind k) {
  switch (k) {
    case model_kind::pd: return "pd";
    case model_kind::rpd: return "rpd";
    case model_kind::cpd: return "cpd";
  }
  return "?";
}

const vocab_ptr& loaded_model::voc() const {
  switch (kind) {
    case model_kind::pd: return pd->voc();
    case model_kind::rpd: return rpd->voc();
    case model_kind::cpd: return cpd->voc();
  }
  throw std::logic_error("loaded_model: bad kind");
}

rpd_model loaded_model::as_rpd() const {
  switch (kind) {
    case model_kind::pd: return pd_to_rpd(*pd);
    case model_kind::rpd: return *rpd;
    case model_kind::cpd: return cpd->to_rpd();
  }
  throw std::logic_error("loaded_model: bad kind");
}

std::vector<std::string> loaded_model::validate() const {
  switch (kind) {
    case model_kind::pd: return pd->validate();
    case model_kind::rpd: return rpd->validate();
    case model_kind::cpd: return cpd->validate_cpd();
  }
  throw std::logic_error("loaded_model: bad kind");
}

loaded_model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw model_io_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model_from_string(buf.str(), path);
}

loaded_model load_model_from_string(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw model_io_error(origin + ": " + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");
  std::string kind = need(j, "kind", origin).get<std::string>();
  if (kind == "rpd") return load_rpd(j, origin);
  if (kind == "pd") return load_pd(j, origin);
  if (kind == "cpd") return load_cpd(j, origin);
  fail(origin, "unknown kind '" + kind + "' (expected pd, rpd or cpd)");
}

std::string save_model_text(const pd_model& m) { return pd_to_json(m).dump(2) + "\n"; }
std::string save_model_text(const rpd_model& m) { return rpd_to_json(m).dump(2) + "\n"; }
std::string save_model_text(const cpd_model& m) { return cpd_to_json(m).dump(2) + "\n"; }

std::string save_model_text(const loaded_model& m) {
  switch (m.kind) {
    case model_kind::pd: return save_model_text(*m.pd);
    case model_kind::rpd: return save_model_text(*m.rpd);
    case model_kind::cpd: return save_model_text(*m.cpd);
  }
  throw std::logic_error("loaded_model: bad kind");
}

void save_model(const loaded_model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw model_io_error(path + ": cannot open file for writing");
  out << save_model_text(m);
}

std::string render_atom(const vocabulary& voc, const atom_key& k) {
  std::ostringstream os;
  os << voc.predicate(k.pred).name << '(';
  for (std::size_t i = 0; i < k.args.size(); ++i)
    os << (i ? "," : "") << voc.var_name(k.args[i]);
  os << ')';
  return os.str();
}

atom_key parse_atom(const std::string& text, const vocabulary& voc) {
  auto open = text.find('(');
  std::string pname = open == std::string::npos ? text : text.substr(0, open);
  // trim spaces
  auto trim = [](std::string s) {
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  };
  pname = trim(pname);
  auto p = voc.find_predicate(pname);
  if (!p) throw model_io_error("unknown predicate in atom: " + text);
  atom_key key{*p, {}};
  if (open != std::string::npos) {
    auto close = text.rfind(')');
    if (close == std::string::npos || close < open)
      throw model_io_error("malformed atom: " + text);
    std::string inner = text.substr(open + 1, close - open - 1);
    std::string item;
    std::istringstream is(inner);
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (item.empty()) throw model_io_error("malformed atom: " + text);
      auto v = voc.find_variable(item);
      if (!v) throw model_io_error("unknown variable in atom: " + text);
      key.args.push_back(*v);
    }
  }
  if (static_cast<int>(key.args.size()) != voc.predicate(*p).arity)
    throw model_io_error("atom arity mismatch: " + text);
  return key;
}

}  // namespace lpfd
