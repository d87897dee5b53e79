#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpfd/cpd.hpp"
#include "lpfd/model.hpp"

namespace lpfd {

struct model_io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class model_kind { pd, rpd, cpd };

std::string to_string(model_kind k);

// A model read from disk, tagged with its kind.  `warnings` records forgiving
// normalizations applied on load (currently: reflexive closure of relations).
struct loaded_model {
  model_kind kind = model_kind::rpd;
  std::optional<pd_model> pd;
  std::optional<rpd_model> rpd;
  std::optional<cpd_model> cpd;
  std::vector<std::string> warnings;

  const vocab_ptr& voc() const;
  // Uniform relational view: rpd as-is, pd via pd_to_rpd, cpd via to_rpd.
  rpd_model as_rpd() const;
  // Structural validation of the underlying model (cpd also checks the
  // coalitional conditions).
  std::vector<std::string> validate() const;
};

// JSON files with top-level keys: kind ("pd" | "rpd" | "cpd"), vocabulary,
// points|assignments, relations (per-variable pair lists), valuation,
// nominals; cpd files instead carry players, strategies, profiles, utilities.
loaded_model load_model(const std::string& path);
loaded_model load_model_from_string(const std::string& text,
                                    const std::string& origin = "<string>");

// Canonical serialization: sorted names, complete sorted pair lists; loading
// the output reproduces the model exactly and warning-free.
std::string save_model_text(const loaded_model& m);
std::string save_model_text(const pd_model& m);
std::string save_model_text(const rpd_model& m);
std::string save_model_text(const cpd_model& m);
void save_model(const loaded_model& m, const std::string& path);

// Ground-atom text form used in valuation keys: P(x,y); arity 0 is P().
std::string render_atom(const vocabulary& voc, const atom_key& k);
atom_key parse_atom(const std::string& text, const vocabulary& voc);

}  // namespace lpfd
