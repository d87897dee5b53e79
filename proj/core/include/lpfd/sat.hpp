#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpfd/formula.hpp"
#include "lpfd/model.hpp"

namespace lpfd {

// Raised when a configured resource limit would be exceeded; distinct from a
// semantic Unsat answer.
struct sat_resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct sat_params {
  // Limit on the closure size, counted up to negation (a formula and its
  // negation share one slot).
  std::size_t max_closure = 18;
  // Limit on the number of enumerated candidate sets.
  std::size_t max_candidates = std::size_t(1) << 18;
  // Backtracking node budget for the candidate search.
  std::uint64_t search_budget = 4'000'000;
  // Path length bound for the certificate model; defaults to the modal depth
  // of the analyzed formula.
  std::optional<std::size_t> path_bound;
  // Point budget for the certificate model.
  std::size_t max_points = 4096;
};

// --------------------------------------------------------------------------
// Closure of a formula: all subformulas in core form, their single
// negations, and for every box [X;Y;Z]psi the full grid of boxes [X;T;U]psi
// with T, U subsets of Y u Z.  The grid covers the repartitions (U = (YuZ)-T)
// used by the saturated-repartition rule and the saturation probes
// (T = Y, U = Z u {y}), and makes the monotonicity constraints effective.
// --------------------------------------------------------------------------
class closure_set {
public:
  struct member {
    formula f;
    std::size_t comp = 0;                // index of the complement ~f
    std::optional<std::size_t> lhs, rhs; // child indices (neg/conj/box body)
  };

  // `root` must be nominal-free; it is expanded to core form and, when its
  // modal depth is 0, first conjoined with [;;]true so that the elimination
  // step has a modality to work with.  `hard_cap` bounds the member count.
  static closure_set build(const formula& root, std::size_t hard_cap = 4096);

  const std::vector<member>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t class_count() const { return members_.size() / 2; }
  std::size_t root_index() const { return root_; }
  const formula& root() const { return members_[root_].f; }
  const vocab_ptr& voc() const { return members_[root_].f.voc(); }

  std::size_t complement(std::size_t i) const { return members_[i].comp; }
  std::optional<std::size_t> find(const formula& f) const;

  // Indices of all box members.
  const std::vector<std::size_t>& boxes() const { return boxes_; }
  // Index of the probe box [X;Y;Zu{y}]psi of a box member, if present.
  std::optional<std::size_t> probe(std::size_t box_idx, var_id y) const;

private:
  std::size_t add(const formula& f, std::size_t hard_cap);

  std::vector<member> members_;
  std::vector<std::size_t> boxes_;
  std::map<std::string, std::size_t> index_;  // render(f) -> index
  std::size_t root_ = 0;
};

// A candidate set: one truth value per closure member; Delta = the true ones.
using hintikka_set = std::vector<bool>;

// The filtration-style relation between candidate sets: every diamond true
// in `to`, pulled back through (X,Y,Z) by intersecting the index sets, must
// be true in `from` whenever the pulled-back formula is in the closure.
bool rp_related(const closure_set& c, const hintikka_set& from, const hintikka_set& to,
                var_set xs, var_set ys, var_set zs);

// All assignments that are propositionally coherent and locally closed under
// the axiom constraints (dependence reflexivity and transitivity, atom
// invariance, box discharge, monotonicity, guarded dependence transfer, and
// the saturated-repartition rule).  Deterministic order.
// Throws sat_resource_error when the closure or the search exceeds `p`.
std::vector<hintikka_set> enumerate_hintikka(const closure_set& c, const sat_params& p = {});

// Greatest family satisfying the witness condition: for every saturated
// diamond of a surviving set there is a surviving witness containing the
// body, related forward, and related back with an empty strict part.
std::vector<hintikka_set> eliminate(const closure_set& c, std::vector<hintikka_set> candidates);

enum class sat_status {
  sat_verified,    // satisfiable; certificate model checks out
  sat_unverified,  // satisfiable by elimination; certificate failed the bound
  unsat,
  resource,        // a configured limit was hit; no verdict
};

std::string to_string(sat_status s);

struct sat_result {
  sat_status status = sat_status::resource;
  std::string detail;
  std::size_t closure_classes = 0;
  std::size_t candidate_count = 0;
  std::size_t surviving = 0;
  std::optional<std::size_t> witness;     // index into the surviving family
  std::optional<formula> analyzed_root;   // possibly depth-0-wrapped
  std::optional<rpd_model> certificate;
  std::optional<point_id> root_point;
};

// Full pipeline: closure, candidate enumeration, elimination, certificate.
// Never guesses: resource limits yield sat_status::resource.
sat_result decide_sat(const formula& alpha, const sat_params& p = {});

// Certificate model built from bounded witness paths out of `gamma`:
// points are paths, preferences and agreements are the closures of the
// step relations, atoms are read off path ends and then closed under
// agreement cells.  Throws std::invalid_argument when gamma is out of range.
rpd_model induced_model(const closure_set& c, const std::vector<hintikka_set>& family,
                        std::size_t gamma, std::size_t path_bound,
                        std::size_t max_points = 4096);

// True when the model is structurally valid and alpha holds at root.
bool verify_certificate(const rpd_model& m, const formula& alpha, point_id root);

// Exhaustive search for a model of alpha with at most max_points points:
// enumerates agreement partitions and preference preorders per variable and
// all valuations of the mentioned atoms.  Throws sat_resource_error when the
// grid exceeds `budget` models.
std::optional<std::pair<rpd_model, point_id>> bounded_model_search(
    const formula& alpha, std::size_t max_points, std::uint64_t budget = 2'000'000);

}  // namespace lpfd
