#include "protoforge/config.hpp"

#include <algorithm>
#include <sstream>

#include "protoforge/lexer.hpp"

namespace protoforge {

namespace {

struct Section {
  std::string header;  // e.g. "instance", "grammar Foo"
  std::string text;    // newline-padded so token locations match the file
  int line = 0;
};

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Section* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    auto comment = trimmed.find("--");
    if (comment != std::string::npos) trimmed = trimmed.substr(0, comment);
    auto first = trimmed.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      if (current) current->text += "\n";
      continue;
    }
    auto last = trimmed.find_last_not_of(" \t\r");
    std::string body = trimmed.substr(first, last - first + 1);
    if (body.front() == '[') {
      if (body.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header " + body);
      Section s;
      s.header = body.substr(1, body.size() - 2);
      s.line = lineno;
      s.text = std::string(static_cast<std::size_t>(lineno), '\n');
      sections.push_back(std::move(s));
      current = &sections.back();
      continue;
    }
    if (!current)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": content before any [section]");
    current->text += line + "\n";
  }
  return sections;
}

InstanceBinding parse_instance(const Section& s) {
  InstanceBinding inst;
  Lexer lx(s.text);
  while (!lx.at_end()) {
    Token name = lx.next();
    if (name.kind != Tok::Ident)
      throw ConfigError("[" + s.header + "] " + name.loc.str() +
                        ": expected a binding name");
    Token eq = lx.next();
    if (eq.kind != Tok::Eq)
      throw ConfigError("[" + s.header + "] " + eq.loc.str() +
                        ": expected '='");
    if (name.text == "int_universe") {
      Token lo = lx.next();
      std::int64_t lo_v;
      if (lo.kind == Tok::Minus) {
        Token v = lx.next();
        lo_v = -v.int_value;
      } else if (lo.kind == Tok::Int) {
        lo_v = lo.int_value;
      } else {
        throw ConfigError("int_universe expects lo..hi");
      }
      Token dots = lx.next();
      if (dots.kind != Tok::DotDot)
        throw ConfigError("int_universe expects lo..hi");
      Token hi = lx.next();
      std::int64_t hi_v;
      if (hi.kind == Tok::Minus) {
        Token v = lx.next();
        hi_v = -v.int_value;
      } else if (hi.kind == Tok::Int) {
        hi_v = hi.int_value;
      } else {
        throw ConfigError("int_universe expects lo..hi");
      }
      if (hi_v < lo_v) throw ConfigError("int_universe range is empty");
      inst.int_bounds = {lo_v, hi_v};
      continue;
    }
    // a single integer or boolean binds a constant; identifiers bind a
    // domain's element list
    if (lx.peek().kind == Tok::Int || lx.peek().kind == Tok::Minus) {
      Token v = lx.next();
      std::int64_t n = v.int_value;
      if (v.kind == Tok::Minus) n = -lx.next().int_value;
      inst.consts[name.text] = Value::integer(n);
      continue;
    }
    if (lx.peek().kind == Tok::Ident &&
        (lx.peek().text == "true" || lx.peek().text == "false")) {
      inst.consts[name.text] = Value::boolean(lx.next().text == "true");
      continue;
    }
    std::vector<std::string> ids;
    while (lx.peek().kind == Tok::Ident && lx.peek().text != "int_universe") {
      // stop when the next token begins a new binding (ident '=')
      if (lx.peek(1).kind == Tok::Eq && !ids.empty()) break;
      ids.push_back(lx.next().text);
    }
    if (ids.empty())
      throw ConfigError("[" + s.header + "]: domain " + name.text +
                        " needs at least one element");
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        if (ids[i] == ids[j])
          throw ConfigError("domain " + name.text +
                            " has duplicate element " + ids[i]);
    inst.domains[name.text] = std::move(ids);
  }
  return inst;
}

void parse_holes(const Section& s, LoadedConfig& cfg) {
  Lexer lx(s.text);
  while (!lx.at_end()) {
    Token hole = lx.next();
    if (hole.kind != Tok::Ident)
      throw ConfigError("[holes] " + hole.loc.str() + ": expected hole name");
    Token eq = lx.next();
    if (eq.kind != Tok::Eq)
      throw ConfigError("[holes] " + eq.loc.str() + ": expected '='");
    Token g = lx.next();
    if (g.kind != Tok::Ident)
      throw ConfigError("[holes] " + g.loc.str() + ": expected grammar name");
    if (cfg.hole_grammars.count(hole.text))
      throw ConfigError("[holes]: hole " + hole.text + " bound twice");
    cfg.hole_grammars[hole.text] = g.text;
  }
}

GrammarSpec parse_grammar_section(const Section& s, const std::string& name) {
  GrammarSpec spec;
  spec.name = name;
  Lexer lx(s.text);
  while (!lx.at_end()) {
    Token first = lx.next();
    if (first.kind != Tok::Ident)
      throw ConfigError("grammar " + name + " " + first.loc.str() +
                        ": expected a rule");
    if (first.text == "start") {
      Token nt = lx.next();
      if (nt.kind != Tok::Ident)
        throw ConfigError("grammar " + name + ": start expects a nonterminal");
      spec.start = nt.text;
      continue;
    }
    // NT : Type ::= prod | prod | ...
    Token colon = lx.next();
    if (colon.kind != Tok::Colon)
      throw ConfigError("grammar " + name + " " + colon.loc.str() +
                        ": expected ':' after nonterminal " + first.text);
    Type t = parse_type(lx);
    Token defined = lx.next();
    if (defined.kind != Tok::ColonColonEq)
      throw ConfigError("grammar " + name + " " + defined.loc.str() +
                        ": expected '::='");
    if (!spec.nt_types.count(first.text)) {
      spec.nt_types[first.text] = t;
      spec.nt_order.push_back(first.text);
    } else if (!(spec.nt_types[first.text] == t)) {
      throw ConfigError("grammar " + name + ": nonterminal " + first.text +
                        " redeclared with a different type");
    }
    auto& prods = spec.rules[first.text];
    while (true) {
      GrammarSpec::ProdSpec p;
      if (lx.peek().kind == Tok::At) {
        lx.next();
        Token kw = lx.next();
        if (kw.kind != Tok::Ident || kw.text != "args")
          throw ConfigError("grammar " + name + ": expected @args[Type]");
        Token open = lx.next();
        if (open.kind != Tok::LBracket)
          throw ConfigError("grammar " + name + ": expected @args[Type]");
        p.args_macro = parse_type(lx);
        Token close = lx.next();
        if (close.kind != Tok::RBracket)
          throw ConfigError("grammar " + name + ": expected ']' in @args");
      } else {
        p.expr = parse_uexpr(lx);
      }
      prods.push_back(std::move(p));
      if (lx.peek().kind == Tok::Pipe) {
        lx.next();
        continue;
      }
      break;
    }
  }
  if (spec.nt_order.empty())
    throw ConfigError("grammar " + name + " declares no nonterminals");
  if (spec.start.empty()) spec.start = spec.nt_order.front();
  return spec;
}

}  // namespace

LoadedConfig parse_config(const std::string& text) {
  LoadedConfig cfg;
  bool saw_instance = false;
  for (const auto& s : split_sections(text)) {
    if (s.header == "instance") {
      cfg.instance = parse_instance(s);
      saw_instance = true;
    } else if (s.header == "extra_instance") {
      cfg.extra_instances.push_back(parse_instance(s));
    } else if (s.header == "holes") {
      parse_holes(s, cfg);
    } else if (s.header.rfind("grammar ", 0) == 0) {
      std::string name = s.header.substr(8);
      while (!name.empty() && name.front() == ' ') name.erase(name.begin());
      if (name.empty())
        throw ConfigError("grammar section without a name");
      if (cfg.grammar_specs.count(name))
        throw ConfigError("duplicate grammar " + name);
      cfg.grammar_specs[name] = parse_grammar_section(s, name);
    } else if (s.header == "options") {
      Lexer lx(s.text);
      while (!lx.at_end()) {
        Token key = lx.next();
        Token eq = lx.next();
        if (key.kind != Tok::Ident || eq.kind != Tok::Eq)
          throw ConfigError("[options]: expected key = value");
        auto bool_value = [&]() {
          Token v = lx.next();
          if (v.kind == Tok::Ident && (v.text == "true" || v.text == "false"))
            return v.text == "true";
          throw ConfigError("[options] " + key.text + " expects true|false");
        };
        auto int_value = [&]() {
          Token v = lx.next();
          if (v.kind != Tok::Int)
            throw ConfigError("[options] " + key.text + " expects a number");
          return v.int_value;
        };
        if (key.text == "strategy") {
          Token v = lx.next();
          if (v.kind == Tok::Ident && v.text == "naive")
            cfg.strategy = Strategy::Naive;
          else if (v.kind == Tok::Ident && v.text == "cached")
            cfg.strategy = Strategy::Cached;
          else
            throw ConfigError("[options] strategy expects naive|cached");
        } else if (key.text == "reduce") {
          cfg.reduce = bool_value();
        } else if (key.text == "shortcircuit") {
          cfg.shortcircuit = bool_value();
        } else if (key.text == "extra_check") {
          cfg.extra_check = bool_value();
        } else if (key.text == "timeout") {
          cfg.timeout_s = static_cast<double>(int_value());
        } else if (key.text == "state_cap") {
          cfg.state_cap = static_cast<std::size_t>(int_value());
        } else if (key.text == "max_size") {
          cfg.max_size = static_cast<int>(int_value());
        } else {
          throw ConfigError("[options]: unknown option " + key.text);
        }
      }
    } else {
      throw ConfigError("unknown section [" + s.header + "]");
    }
  }
  if (!saw_instance) throw ConfigError("config has no [instance] section");
  return cfg;
}

Grammar bind_grammar(const GrammarSpec& spec, const Hole& hole,
                     const Sketch& sk) {
  Grammar g;
  g.name = spec.name;
  g.nt_order = spec.nt_order;
  g.nonterminals = spec.nt_types;
  g.start = spec.start;

  CheckEnv env;
  env.sk = &sk;
  env.use_vars = false;
  env.use_params = false;
  env.formals = &hole.args;
  env.nonterminals = &g.nonterminals;

  for (const auto& nt : g.nt_order) {
    auto rules = spec.rules.find(nt);
    if (rules == spec.rules.end()) continue;
    for (const auto& p : rules->second) {
      if (p.args_macro) {
        for (const auto& [an, at] : hole.args)
          if (at == *p.args_macro)
            g.productions[nt].push_back(
                make_production(mk::arg(an, at)));
        continue;
      }
      ExprPtr templ = check_expr(p.expr, env, g.nt_type(nt));
      g.productions[nt].push_back(make_production(std::move(templ)));
    }
  }
  g.validate();
  return g;
}

SynthesisConfig make_synthesis_config(const LoadedConfig& cfg,
                                      const Sketch& sk) {
  // every parameter bound, with the declared kind
  auto check_instance = [&](const InstanceBinding& inst, const char* which) {
    for (const auto& p : sk.params) {
      if (p.kind == ParamKind::Domain) {
        if (!inst.has_domain(p.name))
          throw ConfigError(std::string(which) + ": domain " + p.name +
                            " is not bound");
      } else {
        auto c = inst.consts.find(p.name);
        if (c == inst.consts.end())
          throw ConfigError(std::string(which) + ": constant " + p.name +
                            " is not bound");
        if (!type_check(c->second, p.type, inst))
          throw ConfigError(std::string(which) + ": constant " + p.name +
                            " has the wrong type");
      }
    }
    for (const auto& [name, elems] : inst.domains)
      if (!sk.find_param(name))
        throw ConfigError(std::string(which) + ": unknown parameter " + name);
    for (const auto& [name, v] : inst.consts)
      if (!sk.find_param(name))
        throw ConfigError(std::string(which) + ": unknown parameter " + name);
  };
  check_instance(cfg.instance, "instance");
  for (const auto& e : cfg.extra_instances) {
    check_instance(e, "extra instance");
    for (const auto& [name, elems] : cfg.instance.domains) {
      auto it = e.domains.find(name);
      if (it == e.domains.end() || it->second.size() < elems.size())
        throw ConfigError("extra instance must bind domain " + name +
                          " to at least as many elements as the primary "
                          "instance");
    }
  }

  for (const auto& [hole, gname] : cfg.hole_grammars) {
    if (!sk.find_hole(hole))
      throw ConfigError("config binds grammar to unknown hole " + hole);
    if (!cfg.grammar_specs.count(gname))
      throw ConfigError("hole " + hole + " references unknown grammar " +
                        gname);
  }
  for (const auto& h : sk.holes)
    if (!cfg.hole_grammars.count(h.name))
      throw ConfigError("hole " + h.name + " has no grammar in the config");

  SynthesisConfig out;
  out.instance = cfg.instance;
  out.extra_instances = cfg.extra_instances;
  out.strategy = cfg.strategy;
  out.reduce = cfg.reduce;
  out.shortcircuit = cfg.shortcircuit;
  out.extra_check = cfg.extra_check;
  out.timeout = std::chrono::duration<double>(cfg.timeout_s);
  out.state_cap = cfg.state_cap;
  out.max_combined_size = cfg.max_size;
  for (const auto& h : sk.holes)
    out.grammars[h.name] =
        bind_grammar(cfg.grammar_specs.at(cfg.hole_grammars.at(h.name)), h,
                     sk);
  return out;
}

}  // namespace protoforge
