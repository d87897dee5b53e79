#include "lpfd/vocabulary.hpp"

#include <set>
#include <sstream>

namespace lpfd {

vocabulary::vocabulary(std::vector<std::string> variables,
                       std::vector<predicate_info> predicates,
                       std::vector<std::string> nominals)
    : variables_(std::move(variables)),
      predicates_(std::move(predicates)),
      nominals_(std::move(nominals)) {
  check();
}

void vocabulary::check() const {
  if (variables_.empty())
    throw vocabulary_error("vocabulary needs at least one variable");
  if (variables_.size() > max_variables)
    throw vocabulary_error("vocabulary supports at most 32 variables");
  std::set<std::string> seen;
  auto add = [&](const std::string& name, const char* what) {
    if (name.empty())
      throw vocabulary_error(std::string(what) + " name must be non-empty");
    if (!seen.insert(name).second)
      throw vocabulary_error("duplicate name across vocabulary namespaces: " + name);
  };
  for (const auto& v : variables_) add(v, "variable");
  for (const auto& p : predicates_) {
    add(p.name, "predicate");
    if (p.arity < 0) throw vocabulary_error("predicate arity must be >= 0: " + p.name);
  }
  for (const auto& n : nominals_) add(n, "nominal");
}

std::optional<var_id> vocabulary::find_variable(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i] == name) return static_cast<var_id>(i);
  return std::nullopt;
}

std::optional<std::size_t> vocabulary::find_predicate(const std::string& name) const {
  for (std::size_t i = 0; i < predicates_.size(); ++i)
    if (predicates_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> vocabulary::find_nominal(const std::string& name) const {
  for (std::size_t i = 0; i < nominals_.size(); ++i)
    if (nominals_[i] == name) return i;
  return std::nullopt;
}

var_id vocabulary::require_variable(const std::string& name) const {
  if (auto v = find_variable(name)) return *v;
  throw vocabulary_error("unknown variable: " + name);
}

std::size_t vocabulary::require_predicate(const std::string& name) const {
  if (auto p = find_predicate(name)) return *p;
  throw vocabulary_error("unknown predicate: " + name);
}

std::size_t vocabulary::require_nominal(const std::string& name) const {
  if (auto n = find_nominal(name)) return *n;
  throw vocabulary_error("unknown nominal: " + name);
}

std::string vocabulary::render_set(var_set s) const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  s.for_each([&](var_id v) {
    if (!first) out << ',';
    first = false;
    out << var_name(v);
  });
  out << '}';
  return out.str();
}

}  // namespace lpfd
