#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpfd/formula.hpp"
#include "lpfd/relation.hpp"
#include "lpfd/vocabulary.hpp"

namespace lpfd {

using point_id = std::size_t;
using obj_id = std::size_t;

// Key identifying a ground atom P(x1,...,xk): predicate index + argument
// variables, in order.
struct atom_key {
  std::size_t pred = 0;
  std::vector<var_id> args;
  auto operator<=>(const atom_key&) const = default;
};

// --------------------------------------------------------------------------
// Relational preference-dependence model: a set of points carrying, per
// variable, an equivalence relation (agreement) and a preorder (preference),
// plus a valuation of ground atoms and a partial naming of points by
// nominals.
// --------------------------------------------------------------------------
class rpd_model {
public:
  rpd_model() = default;
  rpd_model(vocab_ptr voc, std::vector<std::string> point_names);

  const vocab_ptr& voc() const { return voc_; }
  std::size_t point_count() const { return points_.size(); }
  const std::vector<std::string>& point_names() const { return points_; }
  const std::string& point_name(point_id w) const { return points_[w]; }
  std::optional<point_id> find_point(const std::string& name) const;
  point_id require_point(const std::string& name) const;

  bit_rel& sim(var_id x) { return sim_[x]; }
  const bit_rel& sim(var_id x) const { return sim_[x]; }
  bit_rel& leq(var_id x) { return leq_[x]; }
  const bit_rel& leq(var_id x) const { return leq_[x]; }

  // Valuation: set of points where a ground atom holds.  Absent atoms are
  // false everywhere.
  void set_atom(const atom_key& k, std::vector<bool> where);
  void add_atom_point(const atom_key& k, point_id w);
  bool atom_holds(const atom_key& k, point_id w) const;
  const std::map<atom_key, std::vector<bool>>& atoms() const { return atoms_; }

  void name_point(std::size_t nominal, point_id w);
  std::optional<point_id> named_point(std::size_t nominal) const;
  const std::vector<std::optional<point_id>>& naming() const { return naming_; }
  // True when every nominal of the vocabulary names a point.
  bool fully_named() const;

  // Agreement on a set of variables: intersection of sim(x) for x in xs
  // (full relation when xs is empty).
  bit_rel sim_set(var_set xs) const;

  // Structural checks; returns human-readable problems, empty when valid.
  //   - sim(x) is an equivalence relation
  //   - leq(x) is a preorder
  //   - the valuation is invariant under agreement on the atom's variables
  //   - naming targets are in range
  std::vector<std::string> validate() const;

private:
  vocab_ptr voc_;
  std::vector<std::string> points_;
  std::vector<bit_rel> sim_;
  std::vector<bit_rel> leq_;
  std::map<atom_key, std::vector<bool>> atoms_;
  std::vector<std::optional<point_id>> naming_;
};

// --------------------------------------------------------------------------
// Concrete preference-dependence model: assignments of objects to variables,
// a first-order interpretation of the predicates over objects, and per-
// variable preference preorders on the assignments.
// --------------------------------------------------------------------------
class pd_model {
public:
  pd_model() = default;
  pd_model(vocab_ptr voc, std::vector<std::string> object_names,
           std::vector<std::string> assignment_names);

  const vocab_ptr& voc() const { return voc_; }

  std::size_t object_count() const { return objects_.size(); }
  const std::vector<std::string>& object_names() const { return objects_; }
  std::optional<obj_id> find_object(const std::string& name) const;

  std::size_t assignment_count() const { return assignment_names_.size(); }
  const std::vector<std::string>& assignment_names() const { return assignment_names_; }
  const std::string& assignment_name(point_id a) const { return assignment_names_[a]; }
  std::optional<point_id> find_assignment(const std::string& name) const;
  point_id require_assignment(const std::string& name) const;

  void set_assignment(point_id a, var_id x, obj_id o) { assign_[a][x] = o; }
  obj_id value(point_id a, var_id x) const { return assign_[a][x]; }
  const std::vector<obj_id>& assignment(point_id a) const { return assign_[a]; }

  void add_tuple(std::size_t pred, std::vector<obj_id> tuple);
  bool tuple_holds(std::size_t pred, const std::vector<obj_id>& tuple) const;
  const std::map<std::size_t, std::vector<std::vector<obj_id>>>& interpretation() const {
    return interp_;
  }

  bit_rel& pref(var_id x) { return pref_[x]; }
  const bit_rel& pref(var_id x) const { return pref_[x]; }

  void name_point(std::size_t nominal, point_id a);
  std::optional<point_id> named_point(std::size_t nominal) const;
  const std::vector<std::optional<point_id>>& naming() const { return naming_; }

  // a and b give the same objects to every variable in xs.
  bool eq_on(point_id a, point_id b, var_set xs) const;
  // Agreement relation =_xs as a bit_rel over assignments.
  bit_rel eq_rel(var_set xs) const;

  std::vector<std::string> validate() const;

private:
  vocab_ptr voc_;
  std::vector<std::string> objects_;
  std::vector<std::string> assignment_names_;
  std::vector<std::vector<obj_id>> assign_;  // assignment -> per-variable object
  std::map<std::size_t, std::vector<std::vector<obj_id>>> interp_;  // sorted tuples
  std::vector<bit_rel> pref_;
  std::vector<std::optional<point_id>> naming_;
};

// --------------------------------------------------------------------------
// Translations between the two model classes.
// --------------------------------------------------------------------------

// Points are the assignments; agreement is sameness of value, preference is
// carried over pointwise; an atom holds at the assignments sending its
// arguments into the interpretation.  Truth-preserving in both directions.
rpd_model pd_to_rpd(const pd_model& m);

// Objects are pairs (variable, agreement cell); each point induces the
// assignment mapping x to (x, cell of the point under agreement on x).
// Points with identical induced assignments collapse.  Truth-preserving on
// models whose points are separated by agreement on the full vocabulary.
pd_model rpd_to_pd(const rpd_model& m);

// --------------------------------------------------------------------------
// Partitions of the variable set (used as coalition structures).
// --------------------------------------------------------------------------
using var_partition = std::vector<var_set>;

// Blocks non-empty, pairwise disjoint, and jointly covering `universe`.
bool is_partition_of(const var_partition& blocks, var_set universe);
// Every block of `fine` is contained in some block of `coarse`.
bool refines(const var_partition& fine, const var_partition& coarse);
// All partitions of `universe`, deterministic order; the partition into
// singletons comes first and the one-block partition last.
std::vector<var_partition> all_partitions(var_set universe);
// Canonical text like {{x,y},{z}}.
std::string render_partition(const vocabulary& voc, const var_partition& blocks);
// Sort blocks by minimum member so equal partitions compare equal.
var_partition normalize_partition(var_partition blocks);

}  // namespace lpfd
