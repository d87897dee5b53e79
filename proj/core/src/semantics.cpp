#include "lpfd/semantics.hpp"

#include <set>

namespace lpfd {

model_checker::model_checker(const rpd_model& m) : m_(m) {
  strict_.reserve(m.voc()->var_count());
  for (var_id x = 0; x < m.voc()->var_limit(); ++x)
    strict_.push_back(m.leq(x).strict_part());
}

const bit_rel& model_checker::relation(var_set xs, var_set ys, var_set zs) {
  auto key = std::make_tuple(xs.bits(), ys.bits(), zs.bits());
  auto it = rels_.find(key);
  if (it != rels_.end()) return it->second;
  bit_rel r = bit_rel::full(m_.point_count());
  xs.for_each([&](var_id x) { r.intersect(m_.sim(x)); });
  ys.for_each([&](var_id y) { r.intersect(m_.leq(y)); });
  zs.for_each([&](var_id z) { r.intersect(strict_[z]); });
  return rels_.emplace(key, std::move(r)).first->second;
}

std::vector<point_id> model_checker::accessible(point_id w, var_set xs, var_set ys,
                                                var_set zs) {
  std::vector<point_id> out;
  relation(xs, ys, zs).for_each_successor(w, [&](std::size_t v) { out.push_back(v); });
  return out;
}

bool model_checker::eval(const formula& f, point_id w) { return extension(f)[w]; }

const std::vector<bool>& model_checker::extension(const formula& f) {
  if (!f.valid()) throw eval_error("eval: empty formula");
  if (f.voc() != m_.voc() && !(*f.voc() == *m_.voc()))
    throw eval_error("eval: formula vocabulary differs from the model's");
  // Expand once per distinct node, so repeated queries reuse the memo.
  auto it = expanded_.find(f.ptr().get());
  if (it == expanded_.end()) {
    formula ex = expand(f);
    it = expanded_.emplace(f.ptr().get(), std::make_pair(f.ptr(), ex.ptr())).first;
  }
  return ext_core(it->second.second);
}

const std::vector<bool>& model_checker::ext_core(const std::shared_ptr<const fnode>& n) {
  auto it = memo_.find(n.get());
  if (it != memo_.end()) return it->second;
  std::size_t count = m_.point_count();
  std::vector<bool> out(count, false);
  switch (n->kind) {
    case fkind::pred: {
      atom_key key{n->sym, n->args};
      for (point_id w = 0; w < count; ++w) out[w] = m_.atom_holds(key, w);
      break;
    }
    case fkind::dep: {
      // Every point agreeing with w on the subscript set agrees on the target.
      const bit_rel& agree = relation(n->xs, {}, {});
      const bit_rel& tgt = m_.sim(n->target);
      for (point_id w = 0; w < count; ++w) {
        bool holds = true;
        agree.for_each_successor(w, [&](std::size_t v) {
          if (!tgt.at(w, v)) holds = false;
        });
        out[w] = holds;
      }
      break;
    }
    case fkind::nominal: {
      auto w = m_.named_point(n->sym);
      if (!w)
        throw eval_error("nominal " + m_.voc()->nominal_name(n->sym) +
                         " names no point in this model");
      out[*w] = true;
      break;
    }
    case fkind::neg: {
      const std::vector<bool>& sub = ext_core(n->lhs);
      for (point_id w = 0; w < count; ++w) out[w] = !sub[w];
      break;
    }
    case fkind::conj: {
      const std::vector<bool>& a = ext_core(n->lhs);
      const std::vector<bool>& b = ext_core(n->rhs);
      for (point_id w = 0; w < count; ++w) out[w] = a[w] && b[w];
      break;
    }
    case fkind::box: {
      const std::vector<bool>& sub = ext_core(n->lhs);
      const bit_rel& r = relation(n->xs, n->ys, n->zs);
      for (point_id w = 0; w < count; ++w) {
        bool holds = true;
        r.for_each_successor(w, [&](std::size_t v) {
          if (!sub[v]) holds = false;
        });
        out[w] = holds;
      }
      break;
    }
    default:
      throw eval_error("eval: unexpanded derived operator");
  }
  return memo_.emplace(n.get(), std::move(out)).first->second;
}

bool model_checker::valid_in_model(const formula& f, point_id* counterexample) {
  const std::vector<bool>& ext = extension(f);
  for (point_id w = 0; w < ext.size(); ++w)
    if (!ext[w]) {
      if (counterexample) *counterexample = w;
      return false;
    }
  return true;
}

bool eval(const rpd_model& m, point_id w, const formula& f) {
  model_checker mc(m);
  return mc.eval(f, w);
}

bool valid_in_model(const rpd_model& m, const formula& f, point_id* counterexample) {
  model_checker mc(m);
  return mc.valid_in_model(f, counterexample);
}

bool effectivity(const rpd_model& m, var_set xs, const std::vector<bool>& s) {
  if (s.size() != m.point_count())
    throw std::invalid_argument("effectivity: set size differs from the model");
  bit_rel agree = m.sim_set(xs);
  for (point_id w = 0; w < m.point_count(); ++w) {
    bool inside = true;
    agree.for_each_successor(w, [&](std::size_t v) {
      if (!s[v]) inside = false;
    });
    if (inside) return true;
  }
  return false;
}

superadd_result check_superadditivity(const rpd_model& m, var_set xs, var_set ys,
                                      const formula& f1, const formula& f2) {
  if (!(xs & ys).empty())
    throw std::invalid_argument("check_superadditivity: coalitions overlap");
  formula premise = land(exists_g(dd(xs, f1)), exists_g(dd(ys, f2)));
  formula conclusion = exists_g(dd(xs | ys, land(f1, f2)));
  superadd_result res{false, std::nullopt, implies(premise, conclusion)};
  point_id cex = 0;
  res.holds = valid_in_model(m, res.instance, &cex);
  if (!res.holds) res.counterexample = cex;
  return res;
}

bool full_profile_condition(const pd_model& m) {
  const vocabulary& voc = *m.voc();
  std::uint32_t all = voc.all_vars().bits();
  for (std::uint32_t mask = 1; mask <= all && all != 0; ++mask) {
    var_set xs(mask);
    std::set<std::vector<obj_id>> restrictions;
    for (point_id a = 0; a < m.assignment_count(); ++a) {
      std::vector<obj_id> row;
      xs.for_each([&](var_id x) { row.push_back(m.value(a, x)); });
      restrictions.insert(std::move(row));
    }
    double expected = 1;
    for (int i = 0; i < xs.size(); ++i) expected *= static_cast<double>(m.object_count());
    if (static_cast<double>(restrictions.size()) != expected) return false;
  }
  return true;
}

}  // namespace lpfd
