#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lpfd/vocabulary.hpp"

namespace lpfd {

struct formula_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using vocab_ptr = std::shared_ptr<const vocabulary>;

// Node kinds.  The first six are the core constructors; everything after
// `top` is derived sugar that `expand` rewrites into the core.
enum class fkind : std::uint8_t {
  pred,      // P(x1,...,xk)
  dep,       // D{X}y          (functional dependence, single target)
  nominal,   // nom:i
  neg,       // ~phi
  conj,      // phi & psi
  box,       // [{X};{Y};{Z}]phi
  // ---- derived ----
  top,
  bot,
  disj,      // phi | psi
  implies,   // phi -> psi
  diamond,   // <{X};{Y};{Z}>phi
  dep_set,   // D{X}{Y}        (conjunction of single-target dependences)
  at,        // @i phi
  wpa,       // wPa{X}   weak Pareto optimality for coalition X
  spa,       // sPa{X}   strong Pareto optimality
  na,        // Na{X}    Nash equilibrium
  coal_atom, // p{X}     "X is a formed coalition"
  core_x,    // Core{X}i non-domination of the point named i by coalitions in X
};

class formula;

struct fnode {
  fkind kind{};
  var_set xs{}, ys{}, zs{};      // modality indices; dep subscript in xs
  var_set ts{};                  // dep_set target set
  var_id target = 0;             // dep target
  std::size_t sym = 0;           // predicate or nominal index
  std::vector<var_id> args{};    // predicate arguments
  std::shared_ptr<const fnode> lhs{}, rhs{};
  vocab_ptr voc{};
};

// An immutable formula: a shared pointer into a persistent AST.  Copying is
// cheap; structural equality and hashing walk the tree.
class formula {
public:
  formula() = default;
  explicit formula(std::shared_ptr<const fnode> n) : node_(std::move(n)) {}

  bool valid() const { return node_ != nullptr; }
  const fnode& node() const { return *node_; }
  const std::shared_ptr<const fnode>& ptr() const { return node_; }
  fkind kind() const { return node_->kind; }
  const vocab_ptr& voc() const { return node_->voc; }

  formula lhs() const { return formula(node_->lhs); }
  formula rhs() const { return formula(node_->rhs); }

  bool operator==(const formula& o) const;
  bool operator!=(const formula& o) const { return !(*this == o); }

  std::size_t hash() const;

private:
  std::shared_ptr<const fnode> node_;
};

// ---- constructors -------------------------------------------------------

formula pred(const vocab_ptr& voc, const std::string& name,
             const std::vector<std::string>& args);
formula pred(const vocab_ptr& voc, std::size_t p, std::vector<var_id> args);
formula dep(const vocab_ptr& voc, var_set xs, var_id target);
formula dep_set(const vocab_ptr& voc, var_set xs, var_set targets);
formula nominal(const vocab_ptr& voc, const std::string& name);
formula nominal(const vocab_ptr& voc, std::size_t nom);
formula top(const vocab_ptr& voc);
formula bot(const vocab_ptr& voc);

formula lnot(formula f);
formula land(formula a, formula b);
formula lor(formula a, formula b);
formula implies(formula a, formula b);
formula box(var_set xs, var_set ys, var_set zs, formula body);
formula dia(var_set xs, var_set ys, var_set zs, formula body);
formula at(std::size_t nom, formula body);
formula at(const std::string& nom, formula body);

// D_X phi: phi holds however the variables outside X are varied.
formula dd(var_set xs, formula body);
// Global modalities: derived as the empty-index box / its dual.
formula forall_g(formula body);
formula exists_g(formula body);

// Left-associative folds; empty input yields top (resp. bot).
formula conj_all(const vocab_ptr& voc, const std::vector<formula>& fs);
formula disj_all(const vocab_ptr& voc, const std::vector<formula>& fs);

// ---- game-theoretic abbreviations (displayed box forms) -----------------

formula mk_wpa(const vocab_ptr& voc, var_set coalition);
formula mk_spa(const vocab_ptr& voc, var_set coalition);
formula mk_na(const vocab_ptr& voc, var_set coalition);
formula mk_coalition_atom(const vocab_ptr& voc, var_set coalition);
formula mk_core(const vocab_ptr& voc, var_set coalition, std::size_t nom);
formula mk_core_partition(const vocab_ptr& voc,
                          const std::vector<var_set>& partition,
                          std::size_t nom);

// ---- operations ----------------------------------------------------------

// Rewrites every derived operator into the six core constructors.
// Idempotent: expand(expand(f)) == expand(f).
formula expand(const formula& f);

bool is_core(const formula& f);

int modal_depth(const formula& f);

// Concrete-syntax printer; parse_formula(render(f)) == f.
std::string render(const formula& f);

// Flattens the left-leaning spine of & nodes.
std::vector<formula> conjuncts(const formula& f);

// All variables mentioned anywhere in the formula (indices, arguments,
// dependence targets).
var_set vars_used(const formula& f);
std::vector<std::size_t> preds_used(const formula& f);
std::vector<std::size_t> noms_used(const formula& f);
bool mentions_nominal(const formula& f, std::size_t nom);

}  // namespace lpfd

template <>
struct std::hash<lpfd::formula> {
  std::size_t operator()(const lpfd::formula& f) const { return f.hash(); }
};
