#include "lpfd/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lpfd {

// ---------------------------------------------------------------- rpd_model

rpd_model::rpd_model(vocab_ptr voc, std::vector<std::string> point_names)
    : voc_(std::move(voc)), points_(std::move(point_names)) {
  if (!voc_) throw std::invalid_argument("rpd_model: null vocabulary");
  std::size_t n = points_.size();
  sim_.assign(voc_->var_count(), bit_rel(n, true));
  leq_.assign(voc_->var_count(), bit_rel(n, true));
  naming_.assign(voc_->nominals().size(), std::nullopt);
}

std::optional<point_id> rpd_model::find_point(const std::string& name) const {
  for (point_id w = 0; w < points_.size(); ++w)
    if (points_[w] == name) return w;
  return std::nullopt;
}

point_id rpd_model::require_point(const std::string& name) const {
  if (auto w = find_point(name)) return *w;
  throw std::invalid_argument("unknown point: " + name);
}

void rpd_model::set_atom(const atom_key& k, std::vector<bool> where) {
  if (where.size() != points_.size())
    throw std::invalid_argument("set_atom: wrong extent size");
  atoms_[k] = std::move(where);
}

void rpd_model::add_atom_point(const atom_key& k, point_id w) {
  auto it = atoms_.find(k);
  if (it == atoms_.end())
    it = atoms_.emplace(k, std::vector<bool>(points_.size(), false)).first;
  it->second[w] = true;
}

bool rpd_model::atom_holds(const atom_key& k, point_id w) const {
  auto it = atoms_.find(k);
  return it != atoms_.end() && it->second[w];
}

void rpd_model::name_point(std::size_t nominal, point_id w) {
  naming_.at(nominal) = w;
}

std::optional<point_id> rpd_model::named_point(std::size_t nominal) const {
  return naming_.at(nominal);
}

bool rpd_model::fully_named() const {
  for (const auto& n : naming_)
    if (!n) return false;
  return true;
}

bit_rel rpd_model::sim_set(var_set xs) const {
  bit_rel r = bit_rel::full(points_.size());
  xs.for_each([&](var_id x) { r.intersect(sim_[x]); });
  return r;
}

std::vector<std::string> rpd_model::validate() const {
  std::vector<std::string> problems;
  for (var_id x = 0; x < voc_->var_limit(); ++x) {
    const std::string& xn = voc_->var_name(x);
    if (!sim_[x].is_reflexive())
      problems.push_back("agreement relation for " + xn + ": reflexivity");
    if (!sim_[x].is_symmetric())
      problems.push_back("agreement relation for " + xn + ": symmetry");
    if (!sim_[x].is_transitive())
      problems.push_back("agreement relation for " + xn + ": transitivity");
    if (!leq_[x].is_reflexive())
      problems.push_back("preference relation for " + xn + ": reflexivity");
    if (!leq_[x].is_transitive())
      problems.push_back("preference relation for " + xn + ": transitivity");
  }
  for (const auto& [key, where] : atoms_) {
    if (key.pred >= voc_->predicates().size()) {
      problems.push_back("valuation mentions an unknown predicate");
      continue;
    }
    const auto& info = voc_->predicate(key.pred);
    if (static_cast<int>(key.args.size()) != info.arity) {
      problems.push_back("atom of " + info.name + " has wrong arity");
      continue;
    }
    var_set xs;
    for (var_id a : key.args) xs.insert(a);
    bit_rel agree = sim_set(xs);
    bool stable = true;
    for (point_id w = 0; w < points_.size() && stable; ++w)
      agree.for_each_successor(w, [&](point_id u) {
        if (where[w] != where[u]) stable = false;
      });
    if (!stable) {
      std::ostringstream os;
      os << "valuation of " << info.name << "(";
      for (std::size_t i = 0; i < key.args.size(); ++i)
        os << (i ? "," : "") << voc_->var_name(key.args[i]);
      os << ") is not invariant under agreement on its arguments";
      problems.push_back(os.str());
    }
  }
  for (std::size_t i = 0; i < naming_.size(); ++i)
    if (naming_[i] && *naming_[i] >= points_.size())
      problems.push_back("nominal " + voc_->nominal_name(i) + " names a missing point");
  return problems;
}

// ----------------------------------------------------------------- pd_model

pd_model::pd_model(vocab_ptr voc, std::vector<std::string> object_names,
                   std::vector<std::string> assignment_names)
    : voc_(std::move(voc)),
      objects_(std::move(object_names)),
      assignment_names_(std::move(assignment_names)) {
  if (!voc_) throw std::invalid_argument("pd_model: null vocabulary");
  assign_.assign(assignment_names_.size(),
                 std::vector<obj_id>(voc_->var_count(), 0));
  pref_.assign(voc_->var_count(), bit_rel(assignment_names_.size(), true));
  naming_.assign(voc_->nominals().size(), std::nullopt);
}

std::optional<obj_id> pd_model::find_object(const std::string& name) const {
  for (obj_id o = 0; o < objects_.size(); ++o)
    if (objects_[o] == name) return o;
  return std::nullopt;
}

std::optional<point_id> pd_model::find_assignment(const std::string& name) const {
  for (point_id a = 0; a < assignment_names_.size(); ++a)
    if (assignment_names_[a] == name) return a;
  return std::nullopt;
}

point_id pd_model::require_assignment(const std::string& name) const {
  if (auto a = find_assignment(name)) return *a;
  throw std::invalid_argument("unknown assignment: " + name);
}

void pd_model::add_tuple(std::size_t pred, std::vector<obj_id> tuple) {
  auto& rows = interp_[pred];
  auto it = std::lower_bound(rows.begin(), rows.end(), tuple);
  if (it == rows.end() || *it != tuple) rows.insert(it, std::move(tuple));
}

bool pd_model::tuple_holds(std::size_t pred, const std::vector<obj_id>& tuple) const {
  auto it = interp_.find(pred);
  if (it == interp_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), tuple);
}

void pd_model::name_point(std::size_t nominal, point_id a) {
  naming_.at(nominal) = a;
}

std::optional<point_id> pd_model::named_point(std::size_t nominal) const {
  return naming_.at(nominal);
}

bool pd_model::eq_on(point_id a, point_id b, var_set xs) const {
  bool same = true;
  xs.for_each([&](var_id x) {
    if (assign_[a][x] != assign_[b][x]) same = false;
  });
  return same;
}

bit_rel pd_model::eq_rel(var_set xs) const {
  std::size_t n = assignment_count();
  bit_rel r(n);
  for (point_id a = 0; a < n; ++a)
    for (point_id b = 0; b < n; ++b)
      if (eq_on(a, b, xs)) r.set(a, b);
  return r;
}

std::vector<std::string> pd_model::validate() const {
  std::vector<std::string> problems;
  if (objects_.empty()) problems.push_back("model has no objects");
  if (assignment_names_.empty()) problems.push_back("model has no assignments");
  for (point_id a = 0; a < assign_.size(); ++a)
    for (var_id x = 0; x < voc_->var_limit(); ++x)
      if (assign_[a][x] >= objects_.size())
        problems.push_back("assignment " + assignment_names_[a] +
                           " maps " + voc_->var_name(x) + " outside the objects");
  for (point_id a = 0; a < assign_.size(); ++a)
    for (point_id b = a + 1; b < assign_.size(); ++b)
      if (assign_[a] == assign_[b])
        problems.push_back("assignments " + assignment_names_[a] + " and " +
                           assignment_names_[b] + " are identical");
  for (const auto& [pred, rows] : interp_) {
    if (pred >= voc_->predicates().size()) {
      problems.push_back("interpretation mentions an unknown predicate");
      continue;
    }
    const auto& info = voc_->predicate(pred);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != info.arity)
        problems.push_back("tuple of " + info.name + " has wrong arity");
      for (obj_id o : row)
        if (o >= objects_.size())
          problems.push_back("tuple of " + info.name + " mentions a missing object");
    }
  }
  for (var_id x = 0; x < voc_->var_limit(); ++x) {
    const std::string& xn = voc_->var_name(x);
    if (!pref_[x].is_reflexive())
      problems.push_back("preference relation for " + xn + ": reflexivity");
    if (!pref_[x].is_transitive())
      problems.push_back("preference relation for " + xn + ": transitivity");
  }
  for (std::size_t i = 0; i < naming_.size(); ++i)
    if (naming_[i] && *naming_[i] >= assignment_names_.size())
      problems.push_back("nominal " + voc_->nominal_name(i) + " names a missing assignment");
  return problems;
}

// ------------------------------------------------------------- translations

rpd_model pd_to_rpd(const pd_model& m) {
  const auto& voc = m.voc();
  rpd_model out(voc, m.assignment_names());
  std::size_t n = m.assignment_count();
  for (var_id x = 0; x < voc->var_limit(); ++x) {
    out.sim(x) = m.eq_rel(var_set::single(x));
    out.leq(x) = m.pref(x);
  }
  // One ground atom per predicate and argument tuple with a non-empty extent.
  for (std::size_t p = 0; p < voc->predicates().size(); ++p) {
    int arity = voc->predicate(p).arity;
    std::vector<var_id> args(static_cast<std::size_t>(arity), 0);
    auto emit = [&]() {
      std::vector<bool> where(n, false);
      bool any = false;
      for (point_id a = 0; a < n; ++a) {
        std::vector<obj_id> tuple;
        tuple.reserve(args.size());
        for (var_id x : args) tuple.push_back(m.value(a, x));
        if (m.tuple_holds(p, tuple)) where[a] = true, any = true;
      }
      if (any) out.set_atom({p, args}, std::move(where));
    };
    if (arity == 0) {
      emit();
      continue;
    }
    // Odometer over all argument tuples.
    for (;;) {
      emit();
      int i = arity - 1;
      while (i >= 0 && args[static_cast<std::size_t>(i)] + 1u == voc->var_count()) {
        args[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++args[static_cast<std::size_t>(i)];
    }
  }
  for (std::size_t i = 0; i < voc->nominals().size(); ++i)
    if (auto a = m.named_point(i)) out.name_point(i, *a);
  return out;
}

pd_model rpd_to_pd(const rpd_model& m) {
  const auto& voc = m.voc();
  std::size_t n = m.point_count();
  // Objects: one per (variable, agreement cell), named after the variable and
  // the least point of the cell.
  std::vector<std::string> object_names;
  // cell_obj[x][w] = object assigned to variable x at point w
  std::vector<std::vector<obj_id>> cell_obj(voc->var_count(),
                                            std::vector<obj_id>(n, 0));
  for (var_id x = 0; x < voc->var_limit(); ++x) {
    auto cells = m.sim(x).cells();
    for (auto& cell : cells) {
      std::sort(cell.begin(), cell.end());
      obj_id o = object_names.size();
      object_names.push_back(voc->var_name(x) + ":" + m.point_name(cell.front()));
      for (point_id w : cell) cell_obj[x][w] = o;
    }
  }
  // Induced assignments; points with the same induced assignment collapse.
  std::vector<std::vector<obj_id>> rows;    // distinct assignments
  std::vector<std::string> row_names;
  std::vector<point_id> rep_of_row;         // witness point per row
  std::vector<std::size_t> row_of_point(n);
  for (point_id w = 0; w < n; ++w) {
    std::vector<obj_id> row(voc->var_count());
    for (var_id x = 0; x < voc->var_limit(); ++x) row[x] = cell_obj[x][w];
    auto it = std::find(rows.begin(), rows.end(), row);
    if (it == rows.end()) {
      row_of_point[w] = rows.size();
      rep_of_row.push_back(w);
      row_names.push_back(m.point_name(w));
      rows.push_back(std::move(row));
    } else {
      row_of_point[w] = static_cast<std::size_t>(it - rows.begin());
    }
  }
  pd_model out(voc, std::move(object_names), std::move(row_names));
  for (point_id r = 0; r < rows.size(); ++r)
    for (var_id x = 0; x < voc->var_limit(); ++x)
      out.set_assignment(r, x, rows[r][x]);
  // Preferences: images of the point preferences.
  for (var_id x = 0; x < voc->var_limit(); ++x) {
    bit_rel p(rows.size());
    for (point_id w = 0; w < n; ++w)
      m.leq(x).for_each_successor(
          w, [&](point_id v) { p.set(row_of_point[w], row_of_point[v]); });
    out.pref(x) = p;
  }
  // Interpretation: image of the valuation under the induced assignments.
  for (const auto& [key, where] : m.atoms())
    for (point_id w = 0; w < n; ++w)
      if (where[w]) {
        std::vector<obj_id> tuple;
        tuple.reserve(key.args.size());
        for (var_id x : key.args) tuple.push_back(rows[row_of_point[w]][x]);
        out.add_tuple(key.pred, std::move(tuple));
      }
  for (std::size_t i = 0; i < voc->nominals().size(); ++i)
    if (auto w = m.named_point(i)) out.name_point(i, row_of_point[*w]);
  return out;
}

// --------------------------------------------------------------- partitions

bool is_partition_of(const var_partition& blocks, var_set universe) {
  var_set seen;
  for (var_set b : blocks) {
    if (b.empty()) return false;
    if (!(seen & b).empty()) return false;
    seen |= b;
  }
  return seen == universe;
}

bool refines(const var_partition& fine, const var_partition& coarse) {
  for (var_set b : fine) {
    bool inside = false;
    for (var_set c : coarse)
      if (b.subset_of(c)) {
        inside = true;
        break;
      }
    if (inside) continue;
    return false;
  }
  return true;
}

std::vector<var_partition> all_partitions(var_set universe) {
  std::vector<var_id> members = universe.members();
  std::vector<var_partition> out;
  var_partition current;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == members.size()) {
      out.push_back(current);
      return;
    }
    var_id m = members[i];
    // Index loop: the vector grows and shrinks inside the recursion.
    for (std::size_t bi = 0; bi < current.size(); ++bi) {
      current[bi].insert(m);
      self(self, i + 1);
      current[bi].erase(m);
    }
    current.push_back(var_set::single(m));
    self(self, i + 1);
    current.pop_back();
  };
  rec(rec, 0);
  for (auto& p : out) p = normalize_partition(std::move(p));
  std::sort(out.begin(), out.end(), [](const var_partition& a, const var_partition& b) {
    if (a.size() != b.size()) return a.size() > b.size();  // finer first
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].bits() != b[i].bits()) return a[i].bits() < b[i].bits();
    return false;
  });
  return out;
}

std::string render_partition(const vocabulary& voc, const var_partition& blocks) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < blocks.size(); ++i)
    os << (i ? "," : "") << voc.render_set(blocks[i]);
  os << '}';
  return os.str();
}

var_partition normalize_partition(var_partition blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](var_set a, var_set b) { return a.bits() < b.bits(); });
  return blocks;
}

}  // namespace lpfd
