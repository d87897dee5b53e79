#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpfd {

// Raised when a formula or model refers to names outside its vocabulary,
// or when a vocabulary is malformed.
struct vocabulary_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using var_id = std::uint8_t;

// A set of variables, represented as a bitmask over vocabulary indices.
// Vocabularies are capped at 32 variables, which is far beyond the desk
// scale this toolkit targets.
class var_set {
public:
  constexpr var_set() = default;
  constexpr explicit var_set(std::uint32_t bits) : bits_(bits) {}

  static constexpr var_set single(var_id v) { return var_set(1u << v); }

  constexpr bool contains(var_id v) const { return (bits_ >> v) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return __builtin_popcount(bits_); }
  constexpr std::uint32_t bits() const { return bits_; }

  constexpr var_set operator|(var_set o) const { return var_set(bits_ | o.bits_); }
  constexpr var_set operator&(var_set o) const { return var_set(bits_ & o.bits_); }
  constexpr var_set operator-(var_set o) const { return var_set(bits_ & ~o.bits_); }
  constexpr auto operator<=>(const var_set&) const = default;
  constexpr bool subset_of(var_set o) const { return (bits_ & ~o.bits_) == 0; }

  var_set& operator|=(var_set o) { bits_ |= o.bits_; return *this; }
  var_set& operator&=(var_set o) { bits_ &= o.bits_; return *this; }

  void insert(var_id v) { bits_ |= (1u << v); }
  void erase(var_id v) { bits_ &= ~(1u << v); }

  // Iterates set members in increasing index order.
  template <typename F>
  void for_each(F&& f) const {
    std::uint32_t rest = bits_;
    while (rest) {
      var_id v = static_cast<var_id>(__builtin_ctz(rest));
      rest &= rest - 1;
      f(v);
    }
  }

  std::vector<var_id> members() const {
    std::vector<var_id> out;
    for_each([&](var_id v) { out.push_back(v); });
    return out;
  }

private:
  std::uint32_t bits_ = 0;
};

struct predicate_info {
  std::string name;
  int arity = 0;  // >= 0

  bool operator==(const predicate_info&) const = default;
};

// The finite session vocabulary: an ordered, non-empty variable list, a
// predicate table with arities, and a list of nominal names.  All names
// must be unique across the three namespaces.
class vocabulary {
public:
  vocabulary() = default;
  vocabulary(std::vector<std::string> variables,
             std::vector<predicate_info> predicates,
             std::vector<std::string> nominals);

  static constexpr std::size_t max_variables = 32;

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<predicate_info>& predicates() const { return predicates_; }
  const std::vector<std::string>& nominals() const { return nominals_; }

  std::size_t var_count() const { return variables_.size(); }
  // var_count as a var_id, for warning-free loops over variable indices.
  var_id var_limit() const { return static_cast<var_id>(variables_.size()); }
  const std::string& var_name(var_id v) const { return variables_.at(v); }
  const predicate_info& predicate(std::size_t p) const { return predicates_.at(p); }
  const std::string& nominal_name(std::size_t n) const { return nominals_.at(n); }

  std::optional<var_id> find_variable(const std::string& name) const;
  std::optional<std::size_t> find_predicate(const std::string& name) const;
  std::optional<std::size_t> find_nominal(const std::string& name) const;

  var_id require_variable(const std::string& name) const;
  std::size_t require_predicate(const std::string& name) const;
  std::size_t require_nominal(const std::string& name) const;

  // The set of all variables.
  var_set all_vars() const {
    return variables_.size() >= 32
               ? var_set(~0u)
               : var_set((1u << variables_.size()) - 1u);
  }
  var_set complement(var_set s) const { return all_vars() - s; }

  std::string render_set(var_set s) const;

  bool operator==(const vocabulary&) const = default;

private:
  void check() const;

  std::vector<std::string> variables_;
  std::vector<predicate_info> predicates_;
  std::vector<std::string> nominals_;
};

}  // namespace lpfd
