#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "lpfd/formula.hpp"

namespace lpfd {

// Parse failure with the byte offset of the offending token.
struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

// Parses concrete syntax against a fixed vocabulary.  Unknown names are
// vocabulary errors, not parse errors.
formula parse_formula(std::string_view text, const vocab_ptr& voc);

// Parses concrete syntax and infers the vocabulary from usage: set members,
// predicate arguments and dependence targets become variables; applied names
// become predicates (with the observed arity); `nom:`/`@`/`Core` names become
// nominals.  A formula that mentions no variable gets a default variable "x"
// so that the vocabulary stays well-formed.
std::pair<formula, vocab_ptr> parse_formula_infer(std::string_view text);

}  // namespace lpfd
