#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "protoforge/cegis.hpp"
#include "protoforge/parser.hpp"

namespace protoforge {

/// Unbound grammar template from a [grammar ...] config section. Production
/// bodies stay untyped until the grammar is bound to a hole, because
/// terminals resolve against that hole's argument list. An @args[T]
/// production expands to one terminal per hole argument of type T.
struct GrammarSpec {
  std::string name;
  std::vector<std::string> nt_order;
  std::map<std::string, Type> nt_types;
  std::string start;
  struct ProdSpec {
    UExprPtr expr;                      // null for an @args macro
    std::optional<Type> args_macro;
  };
  std::map<std::string, std::vector<ProdSpec>> rules;
};

struct LoadedConfig {
  InstanceBinding instance;
  std::vector<InstanceBinding> extra_instances;
  std::map<std::string, std::string> hole_grammars;  // hole -> grammar name
  std::map<std::string, GrammarSpec> grammar_specs;

  Strategy strategy = Strategy::Cached;
  bool reduce = true;
  bool shortcircuit = true;
  bool extra_check = true;
  double timeout_s = 3600;
  std::size_t state_cap = 1000000;
  std::optional<int> max_size;
};

LoadedConfig parse_config(const std::string& text);

/// Instantiate a grammar template for one hole: expand @args terminals,
/// resolve production bodies against the hole's arguments, type-check
/// against the nonterminal types, and validate.
Grammar bind_grammar(const GrammarSpec& spec, const Hole& hole,
                     const Sketch& sk);

/// Validate the config against the sketch (parameters bound, holes covered
/// both ways, extra instances at least as large per domain) and assemble
/// the synthesis configuration.
SynthesisConfig make_synthesis_config(const LoadedConfig& cfg,
                                      const Sketch& sk);

}  // namespace protoforge
