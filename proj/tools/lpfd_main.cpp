// Command-line front end for the preference-dependence toolkit.
//
// Subcommands: parse, validate, check, valid, effectivity, sat, convert,
// game analyze, fuzz-axioms.  Exit codes: 0 for success / a true or clean
// verdict, 1 for a false, unsat, violated, or mismatching verdict, 2 for
// usage and input errors, 3 when a query ran out of resources before
// reaching a verdict.  Output for a fixed input and seed is byte-identical
// across runs.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpfd/calculus.hpp"
#include "lpfd/cpd.hpp"
#include "lpfd/games.hpp"
#include "lpfd/generators.hpp"
#include "lpfd/model_io.hpp"
#include "lpfd/parser.hpp"
#include "lpfd/sat.hpp"
#include "lpfd/semantics.hpp"

namespace {

using nlohmann::json;
using namespace lpfd;

constexpr int exit_ok = 0;        // success, or the query holds
constexpr int exit_negative = 1;  // the query is false / unsat / violated
constexpr int exit_usage = 2;     // bad arguments or unreadable input
constexpr int exit_resource = 3;  // no verdict within the configured bounds

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --vocab accepts "vars=x,y; preds=p/1,q/2; noms=i,j".  Sections may appear
// in any order; preds without an explicit arity get arity 1.
std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    std::size_t b = item.find_first_not_of(" \t");
    std::size_t e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

vocab_ptr parse_vocab_spec(const std::string& spec) {
  std::vector<std::string> vars;
  std::vector<predicate_info> preds;
  std::vector<std::string> noms;
  for (const std::string& section : split(spec, ';')) {
    if (section.empty()) continue;
    std::size_t eq = section.find('=');
    if (eq == std::string::npos)
      throw usage_error("vocabulary section '" + section + "' is missing '='");
    std::string key = section.substr(0, eq);
    std::size_t ke = key.find_last_not_of(" \t");
    key = key.substr(0, ke == std::string::npos ? 0 : ke + 1);
    for (const std::string& entry : split(section.substr(eq + 1), ',')) {
      if (entry.empty()) continue;
      if (key == "vars") {
        vars.push_back(entry);
      } else if (key == "preds") {
        std::size_t slash = entry.find('/');
        if (slash == std::string::npos) {
          preds.push_back({entry, 1});
        } else {
          preds.push_back(
              {entry.substr(0, slash), std::stoi(entry.substr(slash + 1))});
        }
      } else if (key == "noms") {
        noms.push_back(entry);
      } else {
        throw usage_error("unknown vocabulary section '" + key + "'");
      }
    }
  }
  if (vars.empty()) throw usage_error("the vocabulary needs at least one variable");
  return std::make_shared<vocabulary>(std::move(vars), std::move(preds),
                                      std::move(noms));
}

var_set parse_var_list(const vocabulary& voc, const std::string& text) {
  std::string inner = text;
  if (!inner.empty() && inner.front() == '{' && inner.back() == '}')
    inner = inner.substr(1, inner.size() - 2);
  var_set out;
  for (const std::string& name : split(inner, ',')) {
    if (name.empty()) continue;
    out.insert(voc.require_variable(name));
  }
  return out;
}

loaded_model load_or_throw(const std::string& path) {
  try {
    return load_model(path);
  } catch (const std::exception& e) {
    throw usage_error(std::string("cannot load '") + path + "': " + e.what());
  }
}

formula parse_in(const std::string& text, const vocab_ptr& voc) {
  try {
    return parse_formula(text, voc);
  } catch (const parse_error& e) {
    throw usage_error(std::string("cannot parse formula: ") + e.what());
  }
}

void emit(const std::string& report_mode, const json& j, const std::string& text) {
  if (report_mode == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

// ---- parse ------------------------------------------------------------------

int run_parse(const std::string& input, const std::string& vocab_spec,
              const std::string& report_mode) {
  formula f = [&] {
    if (vocab_spec.empty()) {
      try {
        return parse_formula_infer(input).first;
      } catch (const parse_error& e) {
        throw usage_error(std::string("cannot parse formula: ") + e.what());
      }
    }
    return parse_in(input, parse_vocab_spec(vocab_spec));
  }();
  formula core = expand(f);
  json j{{"input", input},
         {"rendered", render(f)},
         {"core", render(core)},
         {"modal_depth", modal_depth(core)}};
  std::ostringstream text;
  text << "rendered:    " << render(f) << "\n"
       << "core form:   " << render(core) << "\n"
       << "modal depth: " << modal_depth(core) << "\n";
  emit(report_mode, j, text.str());
  return exit_ok;
}

// ---- validate ---------------------------------------------------------------

int run_validate(const std::string& path, const std::string& report_mode) {
  loaded_model m = load_or_throw(path);
  std::vector<std::string> errors = m.validate();
  std::vector<std::string> reduced;
  if (m.kind == model_kind::cpd) {
    for (profile_id a : m.cpd->rcpd_violations())
      reduced.push_back(m.cpd->profile_name(a));
  }
  json j{{"model", path},
         {"kind", to_string(m.kind)},
         {"warnings", m.warnings},
         {"errors", errors},
         {"valid", errors.empty()}};
  if (m.kind == model_kind::cpd) j["reducedness_violations"] = reduced;
  std::ostringstream text;
  text << "kind: " << to_string(m.kind) << "\n";
  for (const std::string& w : m.warnings) text << "warning: " << w << "\n";
  for (const std::string& e : errors) text << "error: " << e << "\n";
  if (m.kind == model_kind::cpd) {
    if (reduced.empty()) {
      text << "reducedness: all profiles reduced\n";
    } else {
      text << "reducedness violations:";
      for (const std::string& n : reduced) text << " " << n;
      text << "\n";
    }
  }
  text << (errors.empty() ? "valid\n" : "invalid\n");
  emit(report_mode, j, text.str());
  return errors.empty() ? exit_ok : exit_negative;
}

// ---- check / valid / effectivity ---------------------------------------------

int run_check(const std::string& path, const std::string& point,
              const std::string& formula_text, const std::string& report_mode) {
  loaded_model m = load_or_throw(path);
  rpd_model r = m.as_rpd();
  std::optional<point_id> w = r.find_point(point);
  if (!w) throw usage_error("model has no point named '" + point + "'");
  formula f = parse_in(formula_text, r.voc());
  bool value = eval(r, *w, f);
  json j{{"model", path},
         {"point", point},
         {"formula", render(f)},
         {"value", value}};
  std::ostringstream text;
  text << render(f) << " at " << point << ": " << (value ? "true" : "false")
       << "\n";
  emit(report_mode, j, text.str());
  return value ? exit_ok : exit_negative;
}

int run_valid(const std::string& path, const std::string& formula_text,
              const std::string& report_mode) {
  loaded_model m = load_or_throw(path);
  rpd_model r = m.as_rpd();
  formula f = parse_in(formula_text, r.voc());
  point_id ce = 0;
  bool ok = valid_in_model(r, f, &ce);
  json j{{"model", path}, {"formula", render(f)}, {"valid", ok}};
  std::ostringstream text;
  if (ok) {
    text << render(f) << ": valid in the model\n";
  } else {
    j["counterexample"] = r.point_name(ce);
    text << render(f) << ": fails at " << r.point_name(ce) << "\n";
  }
  emit(report_mode, j, text.str());
  return ok ? exit_ok : exit_negative;
}

int run_effectivity(const std::string& path, const std::string& coalition,
                    const std::string& formula_text,
                    const std::string& report_mode) {
  loaded_model m = load_or_throw(path);
  rpd_model r = m.as_rpd();
  var_set xs = parse_var_list(*r.voc(), coalition);
  formula f = parse_in(formula_text, r.voc());
  model_checker mc(r);
  const std::vector<bool>& ext = mc.extension(f);
  bool eff = effectivity(r, xs, ext);
  std::vector<std::string> members, extension_names;
  xs.for_each([&](var_id v) { members.push_back(r.voc()->var_name(v)); });
  for (point_id w = 0; w < r.point_count(); ++w)
    if (ext[w]) extension_names.push_back(r.point_name(w));
  json j{{"model", path},
         {"coalition", members},
         {"formula", render(f)},
         {"extension", extension_names},
         {"effective", eff}};
  std::ostringstream text;
  text << "extension of " << render(f) << ":";
  for (const std::string& n : extension_names) text << " " << n;
  text << "\ncoalition " << r.voc()->render_set(xs) << ": "
       << (eff ? "effective" : "not effective") << "\n";
  emit(report_mode, j, text.str());
  return eff ? exit_ok : exit_negative;
}

// ---- sat ----------------------------------------------------------------------

int run_sat(const std::string& formula_text, const std::string& vocab_spec,
            const std::string& emit_path, std::size_t max_closure,
            std::optional<std::size_t> path_bound,
            const std::string& report_mode) {
  formula f = [&] {
    if (vocab_spec.empty()) {
      try {
        return parse_formula_infer(formula_text).first;
      } catch (const parse_error& e) {
        throw usage_error(std::string("cannot parse formula: ") + e.what());
      }
    }
    return parse_in(formula_text, parse_vocab_spec(vocab_spec));
  }();
  sat_params p;
  p.max_closure = max_closure;
  p.path_bound = path_bound;
  sat_result r = decide_sat(f, p);
  json j{{"formula", render(f)},
         {"status", to_string(r.status)},
         {"closure_classes", r.closure_classes},
         {"candidates", r.candidate_count},
         {"surviving", r.surviving}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  std::ostringstream text;
  text << render(f) << ": " << to_string(r.status) << "\n";
  if (!r.detail.empty()) text << "detail: " << r.detail << "\n";
  text << "closure classes: " << r.closure_classes
       << ", candidates: " << r.candidate_count
       << ", surviving: " << r.surviving << "\n";
  if (r.certificate) {
    j["certificate_points"] = r.certificate->point_count();
    text << "certificate: " << r.certificate->point_count() << " points\n";
    if (!emit_path.empty()) {
      std::ofstream out(emit_path);
      if (!out) throw usage_error("cannot write '" + emit_path + "'");
      out << save_model_text(*r.certificate);
      j["certificate_file"] = emit_path;
      text << "certificate written to " << emit_path << "\n";
    }
  }
  emit(report_mode, j, text.str());
  switch (r.status) {
    case sat_status::sat_verified:
    case sat_status::sat_unverified:
      return exit_ok;
    case sat_status::unsat:
      return exit_negative;
    case sat_status::resource:
      return exit_resource;
  }
  return exit_resource;
}

// ---- convert -------------------------------------------------------------------

int run_convert(const std::string& path, const std::string& to,
                const std::string& out_path, const std::string& report_mode) {
  loaded_model m = load_or_throw(path);
  loaded_model out;
  if (to == "rpd") {
    out.kind = model_kind::rpd;
    out.rpd = m.as_rpd();
  } else if (to == "pd") {
    switch (m.kind) {
      case model_kind::pd: out.pd = *m.pd; break;
      case model_kind::rpd: out.pd = rpd_to_pd(*m.rpd); break;
      case model_kind::cpd: out.pd = m.cpd->to_pd(); break;
    }
    out.kind = model_kind::pd;
  } else {
    throw usage_error("--to must be 'pd' or 'rpd'");
  }
  std::string body = save_model_text(out);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw usage_error("cannot write '" + out_path + "'");
    f << body;
    json j{{"model", path}, {"to", to}, {"output", out_path}};
    std::ostringstream text;
    text << "wrote " << to << " model to " << out_path << "\n";
    emit(report_mode, j, text.str());
  } else if (report_mode == "json") {
    std::cout << body;  // the serialized model is already JSON
  } else {
    std::cout << body;
  }
  return exit_ok;
}

// ---- game analyze ---------------------------------------------------------------

int run_game_analyze(const std::string& path, const std::string& report_mode) {
  loaded_model m = load_or_throw(path);
  analysis_report rep;
  switch (m.kind) {
    case model_kind::cpd: rep = analyze(*m.cpd, path); break;
    case model_kind::pd: rep = analyze(*m.pd, path); break;
    case model_kind::rpd:
      throw usage_error(
          "game analysis needs a pd or cpd model; convert the rpd model first");
  }
  if (report_mode == "json")
    std::cout << report_to_json(rep) << "\n";
  else
    std::cout << render_report(rep);
  return rep.ok() ? exit_ok : exit_negative;
}

// ---- fuzz-axioms ------------------------------------------------------------------

int run_fuzz(const std::string& system, std::uint64_t trials, std::uint64_t seed,
             std::size_t max_points, const std::string& report_mode) {
  calculus_id id;
  if (system == "lpfd") {
    id = calculus_id::lpfd;
  } else if (system == "hlpfd") {
    id = calculus_id::hlpfd;
  } else {
    throw usage_error("--system must be 'lpfd' or 'hlpfd'");
  }
  gen_params gp;
  gp.max_points = max_points;
  fuzz_report rep = soundness_fuzz(gp, id, trials, seed);
  json per = json::object();
  for (const auto& [schema, n] : rep.per_schema) per[schema] = n;
  json ces = json::array();
  for (const fuzz_counterexample& ce : rep.counterexamples) {
    ces.push_back(json{{"schema", ce.schema_id},
                       {"trial", ce.trial},
                       {"instance", render(ce.instance)},
                       {"point", ce.point}});
  }
  json j{{"system", to_string(rep.system)},
         {"trials_per_schema", rep.trials_per_schema},
         {"total_trials", rep.total_trials},
         {"per_schema", per},
         {"counterexamples", ces},
         {"sound", rep.counterexamples.empty()}};
  std::ostringstream text;
  text << "system: " << to_string(rep.system) << "\n"
       << "trials per schema: " << rep.trials_per_schema << "\n"
       << "total trials: " << rep.total_trials << "\n";
  for (const auto& [schema, n] : rep.per_schema)
    text << "  " << schema << ": " << n << " trials\n";
  if (rep.counterexamples.empty()) {
    text << "no counterexamples\n";
  } else {
    for (const fuzz_counterexample& ce : rep.counterexamples)
      text << "counterexample: " << ce.schema_id << " trial " << ce.trial
           << " instance " << render(ce.instance) << " fails at " << ce.point
           << "\n";
  }
  emit(report_mode, j, text.str());
  return rep.counterexamples.empty() ? exit_ok : exit_negative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for the logic of preference and functional dependence"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string report_mode = "text";
  app.add_option("--report", report_mode, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse a formula and print it");
  std::string parse_input, parse_vocab;
  cmd_parse->add_option("formula", parse_input, "formula text")->required();
  cmd_parse->add_option("--vocab", parse_vocab,
                        "vocabulary spec 'vars=x,y; preds=p/1; noms=i'");

  // validate
  auto* cmd_validate =
      app.add_subcommand("validate", "load a model file and validate it");
  std::string validate_path;
  cmd_validate->add_option("model", validate_path, "model file")->required();

  // check
  auto* cmd_check =
      app.add_subcommand("check", "evaluate a formula at a point of a model");
  std::string check_path, check_point, check_formula;
  cmd_check->add_option("model", check_path, "model file")->required();
  cmd_check->add_option("--point", check_point, "point or profile name")
      ->required();
  cmd_check->add_option("--formula", check_formula, "formula text")->required();

  // valid
  auto* cmd_valid =
      app.add_subcommand("valid", "test whether a formula holds at every point");
  std::string valid_path, valid_formula;
  cmd_valid->add_option("model", valid_path, "model file")->required();
  cmd_valid->add_option("--formula", valid_formula, "formula text")->required();

  // effectivity
  auto* cmd_eff = app.add_subcommand(
      "effectivity", "test whether a coalition can force a formula's extension");
  std::string eff_path, eff_coalition, eff_formula;
  cmd_eff->add_option("model", eff_path, "model file")->required();
  cmd_eff->add_option("--coalition", eff_coalition, "coalition, e.g. '{1,2}'")
      ->required();
  cmd_eff->add_option("--formula", eff_formula, "formula text")->required();

  // sat
  auto* cmd_sat = app.add_subcommand("sat", "decide satisfiability");
  std::string sat_formula, sat_vocab, sat_emit;
  std::size_t sat_max_closure = sat_params{}.max_closure;
  std::optional<std::size_t> sat_path_bound;
  cmd_sat->add_option("--formula", sat_formula, "formula text")->required();
  cmd_sat->add_option("--vocab", sat_vocab,
                      "vocabulary spec 'vars=x,y; preds=p/1'");
  cmd_sat->add_option("--emit-certificate", sat_emit,
                      "write the certificate model to this file");
  cmd_sat->add_option("--max-closure", sat_max_closure,
                      "closure size limit in negation classes")
      ->capture_default_str();
  cmd_sat->add_option("--path-bound", sat_path_bound,
                      "path length bound for the certificate model");

  // convert
  auto* cmd_convert =
      app.add_subcommand("convert", "convert a model between representations");
  std::string convert_path, convert_to, convert_out;
  cmd_convert->add_option("model", convert_path, "model file")->required();
  cmd_convert->add_option("--to", convert_to, "target kind: pd or rpd")
      ->required();
  cmd_convert->add_option("-o,--output", convert_out, "output file");

  // game analyze
  auto* cmd_game = app.add_subcommand("game", "game-theoretic analysis");
  cmd_game->require_subcommand(1);
  auto* cmd_analyze = cmd_game->add_subcommand(
      "analyze", "solution concepts with formula/definition cross-checks");
  std::string game_path;
  cmd_analyze->add_option("model", game_path, "pd or cpd model file")->required();

  // fuzz-axioms
  auto* cmd_fuzz = app.add_subcommand(
      "fuzz-axioms", "fuzz the axiom schemas against random models");
  std::string fuzz_system;
  std::uint64_t fuzz_trials = 100, fuzz_seed = 0;
  std::size_t fuzz_max_points = 6;
  cmd_fuzz->add_option("--system", fuzz_system, "axiom system: lpfd or hlpfd")
      ->required();
  cmd_fuzz->add_option("--trials", fuzz_trials, "trials per schema")
      ->capture_default_str();
  cmd_fuzz->add_option("--seed", fuzz_seed, "random seed")->capture_default_str();
  cmd_fuzz->add_option("--max-points", fuzz_max_points,
                       "maximum model size during fuzzing")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*cmd_parse) return run_parse(parse_input, parse_vocab, report_mode);
    if (*cmd_validate) return run_validate(validate_path, report_mode);
    if (*cmd_check)
      return run_check(check_path, check_point, check_formula, report_mode);
    if (*cmd_valid) return run_valid(valid_path, valid_formula, report_mode);
    if (*cmd_eff)
      return run_effectivity(eff_path, eff_coalition, eff_formula, report_mode);
    if (*cmd_sat)
      return run_sat(sat_formula, sat_vocab, sat_emit, sat_max_closure,
                     sat_path_bound, report_mode);
    if (*cmd_convert)
      return run_convert(convert_path, convert_to, convert_out, report_mode);
    if (*cmd_game && *cmd_analyze) return run_game_analyze(game_path, report_mode);
    if (*cmd_fuzz)
      return run_fuzz(fuzz_system, fuzz_trials, fuzz_seed, fuzz_max_points,
                      report_mode);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const sat_resource_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return exit_resource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
