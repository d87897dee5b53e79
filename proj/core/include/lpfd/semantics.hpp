#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "lpfd/formula.hpp"
#include "lpfd/model.hpp"

namespace lpfd {

struct eval_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model checker over a relational model.  Caches the accessibility relation
// per (X,Y,Z) triple and full extensions per evaluated subformula, which the
// game formulas (Na, Core, ...) reuse heavily.  The model must outlive the
// checker.
class model_checker {
public:
  explicit model_checker(const rpd_model& m);

  const rpd_model& model() const { return m_; }

  // Truth at a point; derived operators are expanded on the fly.
  bool eval(const formula& f, point_id w);
  // Truth vector over all points.
  const std::vector<bool>& extension(const formula& f);

  // Accessibility relation of the triple modality: agreement on X, weak
  // preference for Y, strict preference for Z, intersected.
  const bit_rel& relation(var_set xs, var_set ys, var_set zs);
  std::vector<point_id> accessible(point_id w, var_set xs, var_set ys, var_set zs);

  // True when f holds everywhere; otherwise reports the first failing point.
  bool valid_in_model(const formula& f, point_id* counterexample = nullptr);

private:
  const std::vector<bool>& ext_core(const std::shared_ptr<const fnode>& n);

  const rpd_model& m_;
  std::vector<bit_rel> strict_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, bit_rel> rels_;
  std::unordered_map<const fnode*, std::vector<bool>> memo_;
  // Maps an original node to (the node itself, its expansion).  Holding the
  // original keeps its address from being reused by a later formula, which
  // would poison this pointer-keyed cache.
  std::unordered_map<const fnode*,
                     std::pair<std::shared_ptr<const fnode>, std::shared_ptr<const fnode>>>
      expanded_;
};

// One-shot conveniences.
bool eval(const rpd_model& m, point_id w, const formula& f);
bool valid_in_model(const rpd_model& m, const formula& f,
                    point_id* counterexample = nullptr);

// Effectivity function of a coalition: S is forceable by xs when some
// agreement cell on xs lies entirely inside S.
bool effectivity(const rpd_model& m, var_set xs, const std::vector<bool>& s);

// The superadditivity instance (exists dd_X f1 and exists dd_Y f2) ->
// exists dd_{X u Y}(f1 and f2) for disjoint coalitions.
struct superadd_result {
  bool holds = false;
  std::optional<point_id> counterexample;
  formula instance;
};
superadd_result check_superadditivity(const rpd_model& m, var_set xs, var_set ys,
                                      const formula& f1, const formula& f2);

// Whether every restriction set {a|X : a in A} is the full object power O^X.
bool full_profile_condition(const pd_model& m);

}  // namespace lpfd
