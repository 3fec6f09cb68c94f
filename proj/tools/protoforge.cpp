#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "protoforge/config.hpp"
#include "protoforge/corpus.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitTimedOut = 3;
constexpr int kExitUnrealizable = 4;
constexpr int kExitUsage = 64;

struct SynthArgs {
  std::string spec_path;
  std::string config_path;
  std::string output_path;
  std::string stats_path;
  std::string strategy;
  bool no_equiv_reduction = false;
  bool no_shortcircuit = false;
  bool check_only = false;
  bool extra = true;
  double timeout = -1;
  std::int64_t state_cap = -1;
  int max_size = -1;
  int seed = 0;  // accepted for interface stability; the pipeline is
                 // deterministic
};

void write_or_print_stats(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
}

int run_synth(const SynthArgs& args) {
  using namespace protoforge;
  Sketch sk = parse_sketch(read_file(args.spec_path));
  LoadedConfig lc = parse_config(read_file(args.config_path));
  SynthesisConfig cfg = make_synthesis_config(lc, sk);

  if (!args.strategy.empty())
    cfg.strategy =
        args.strategy == "naive" ? Strategy::Naive : Strategy::Cached;
  if (args.no_equiv_reduction) cfg.reduce = false;
  if (args.no_shortcircuit) cfg.shortcircuit = false;
  cfg.extra_check = args.extra;
  if (args.timeout >= 0)
    cfg.timeout = std::chrono::duration<double>(args.timeout);
  if (args.state_cap >= 0)
    cfg.state_cap = static_cast<std::size_t>(args.state_cap);
  if (args.max_size >= 0) cfg.max_combined_size = args.max_size;

  if (args.check_only) {
    if (sk.has_holes()) {
      std::cerr << "--check-only expects a hole-free protocol\n";
      return kExitUsage;
    }
    CheckerOptions copts;
    copts.state_cap = cfg.state_cap;
    CheckReport rep = verify(sk, cfg.instance, sk.properties, copts);
    std::cout << "states_explored=" << rep.states_explored << "\n";
    if (rep.pass) {
      std::cout << "verdict=pass\n";
      return kExitSolved;
    }
    std::cout << "verdict=fail\n" << rep.cex->str();
    return kExitCheckFailed;
  }

  SynthesisResult res = synthesize(sk, cfg);
  std::cout << "result=" << outcome_name(res.outcome) << "\n";
  write_or_print_stats(args.stats_path, report_stats(res.stats));

  switch (res.outcome) {
    case SynthesisOutcome::Solved: {
      for (const auto& [hole, body] : res.completion->exprs)
        std::cout << hole << " := " << to_string(body) << "\n";
      std::string text = serialize_protocol(*res.protocol);
      if (!args.output_path.empty()) {
        std::ofstream out(args.output_path);
        out << text;
        std::cout << "solution=" << args.output_path << "\n";
      } else {
        std::cout << text;
      }
      return kExitSolved;
    }
    case SynthesisOutcome::Exhausted:
      return kExitExhausted;
    case SynthesisOutcome::TimedOut:
      return kExitTimedOut;
    case SynthesisOutcome::Unrealizable:
      std::cout << "no completion can avoid this run:\n"
                << res.unrealizable_run->str();
      return kExitUnrealizable;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"protoforge: counterexample-guided completion of protocol "
               "sketches"};
  app.require_subcommand(1);

  SynthArgs sargs;
  auto* synth = app.add_subcommand("synth", "synthesize hole completions");
  synth->add_option("--spec", sargs.spec_path, "sketch file (.pspec)")
      ->required();
  synth->add_option("--config", sargs.config_path, "config file (.cfg)")
      ->required();
  synth->add_option("-o,--output", sargs.output_path,
                    "write the solved protocol here");
  synth->add_option("--stats", sargs.stats_path, "write stats here");
  synth->add_option("--strategy", sargs.strategy, "naive|cached")
      ->check(CLI::IsMember({"naive", "cached"}));
  synth->add_flag("--no-equiv-reduction", sargs.no_equiv_reduction,
                  "disable equivalence reduction");
  synth->add_flag("--no-shortcircuit", sargs.no_shortcircuit,
                  "disable commutative short-circuiting");
  synth->add_flag("--check-only", sargs.check_only,
                  "verify a hole-free protocol and exit");
  synth->add_flag("--extra-check,!--no-extra-check", sargs.extra,
                  "model check candidate solutions on the extra instances");
  synth->add_option("--timeout", sargs.timeout, "seconds");
  synth->add_option("--state-cap", sargs.state_cap, "state space cap");
  synth->add_option("--max-size", sargs.max_size,
                    "largest combined completion size");
  synth->add_option("--seed", sargs.seed,
                    "ignored; the pipeline is deterministic");

  std::string corpus_dir = "corpus";
  std::string corpus_filter;
  std::string corpus_stats;
  auto* corpus = app.add_subcommand("corpus", "run the bundled benchmarks");
  corpus->add_option("filter", corpus_filter,
                     "only run cases whose name contains this");
  corpus->add_option("--dir", corpus_dir, "corpus directory");
  corpus->add_option("--stats", corpus_stats, "write the summary table here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      if (sargs.strategy == "naive" && sargs.no_equiv_reduction) {
        std::cerr << "--strategy naive does not use equivalence reduction; "
                     "--no-equiv-reduction is redundant\n";
        return kExitUsage;
      }
      return run_synth(sargs);
    }
    if (corpus->parsed()) {
      auto results = protoforge::run_corpus(corpus_dir, corpus_filter);
      std::string table = protoforge::corpus_table(results);
      std::cout << table;
      if (!corpus_stats.empty()) {
        std::ofstream out(corpus_stats);
        out << table;
      }
      for (const auto& r : results)
        if (!r.ok) return 1;
      return 0;
    }
  } catch (const protoforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
