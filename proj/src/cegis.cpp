#include "protoforge/cegis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace protoforge {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::unique_ptr<SizedExprSource>> make_sources(
    const Sketch& sk, const SynthesisConfig& cfg,
    std::vector<std::string>& hole_names) {
  std::vector<std::unique_ptr<SizedExprSource>> sources;
  for (const auto& h : sk.holes) {
    auto g = cfg.grammars.find(h.name);
    if (g == cfg.grammars.end())
      throw ConfigError("no grammar bound to hole " + h.name);
    if (g->second.nt_type(g->second.start) != h.output_type)
      throw ConfigError("grammar " + g->second.name + " start type " +
                        g->second.nt_type(g->second.start).str() +
                        " does not match hole ?" + h.name + " output type " +
                        h.output_type.str());
    hole_names.push_back(h.name);
    if (cfg.strategy == Strategy::Naive)
      sources.push_back(std::make_unique<NaiveEnumerator>(g->second));
    else
      sources.push_back(std::make_unique<CachedEnumerator>(
          g->second, cfg.reduce, cfg.shortcircuit));
  }
  return sources;
}

}  // namespace

std::string SynthesisStats::k_prime_str() const {
  if (!k_prime) return ">=0";
  if (k_prime_is_solution) return std::to_string(*k_prime);
  return ">=" + std::to_string(*k_prime);
}

const char* outcome_name(SynthesisOutcome o) {
  switch (o) {
    case SynthesisOutcome::Solved: return "solved";
    case SynthesisOutcome::Exhausted: return "exhausted";
    case SynthesisOutcome::TimedOut: return "timed_out";
    case SynthesisOutcome::Unrealizable: return "unrealizable";
  }
  return "?";
}

std::optional<ExtraCheckFailure> extra_check(const Protocol& p,
                                             const SynthesisConfig& cfg) {
  CheckerOptions copts;
  copts.state_cap = cfg.state_cap;
  for (std::size_t i = 0; i < cfg.extra_instances.size(); ++i) {
    CheckReport rep =
        verify(p, cfg.extra_instances[i], p.properties, copts);
    if (!rep.pass) return ExtraCheckFailure{std::move(*rep.cex), i};
  }
  return std::nullopt;
}

SynthesisResult synthesize(const Sketch& sk, const SynthesisConfig& cfg) {
  auto t0 = Clock::now();
  SynthesisResult res;
  res.outcome = SynthesisOutcome::Exhausted;
  SynthesisStats& stats = res.stats;

  validate_sketch(sk);
  std::vector<std::string> hole_names;
  auto sources = make_sources(sk, cfg, hole_names);
  JointEnumerator joint(hole_names, std::move(sources),
                        cfg.max_combined_size);

  auto primary = std::make_shared<InstanceBinding>(cfg.instance);
  std::vector<std::shared_ptr<InstanceBinding>> extras;
  for (const auto& e : cfg.extra_instances)
    extras.push_back(std::make_shared<InstanceBinding>(e));

  CheckerOptions copts;
  copts.state_cap = cfg.state_cap;

  ConstraintSet cs;
  std::set<std::string> fingerprints;

  auto finish = [&](SynthesisOutcome outcome) {
    res.outcome = outcome;
    stats.constraints = cs.size();
    stats.total_time = Clock::now() - t0;
    return res;
  };

  auto note_counterexample = [&](const Counterexample& cex,
                                 std::size_t instance_tag) {
    std::string fp = std::to_string(instance_tag) + "#" + cex.fingerprint();
    if (!fingerprints.insert(fp).second) ++stats.duplicate_counterexamples;
  };

  auto add_constraint = [&](const Counterexample& cex, const Completion& x,
                            std::shared_ptr<InstanceBinding> inst) -> bool {
    PruningConstraint pc = encode_counterexample(cex, sk, x, inst);
    if (pc.terms.empty()) {
      res.unrealizable_run = cex;
      return false;
    }
    // the failing candidate must violate its own constraint
    if (satisfies(x, pc))
      throw Error("internal: new pruning constraint does not prune the "
                  "failing candidate");
    cs.add(std::move(pc));
    return true;
  };

  while (true) {
    if (Clock::now() - t0 > cfg.timeout)
      return finish(SynthesisOutcome::TimedOut);

    auto cand = joint.next();
    if (!cand) return finish(SynthesisOutcome::Exhausted);
    ++stats.generated;
    if (!stats.k_prime || cand->combined_size > *stats.k_prime)
      stats.k_prime = cand->combined_size;

    PccResult pcc = pcc_check(cand->completion, cs);
    if (!pcc.pass) {
      ++stats.pruned;
      continue;
    }

    Protocol proto = apply_completion(sk, cand->completion);
    CheckReport rep;
    try {
      rep = verify(proto, *primary, proto.properties, copts);
    } catch (const StateSpaceLimitError& e) {
      throw Error(std::string(e.what()) + " while checking candidate {" +
                  [&] {
                    std::string s;
                    for (const auto& [h, b] : cand->completion.exprs)
                      s += " " + h + " -> " + to_string(b);
                    return s;
                  }() +
                  " }");
    }
    ++stats.model_checked;
    stats.check_time += rep.check_time;

    if (!rep.pass) {
      note_counterexample(*rep.cex, 0);
      if (!add_constraint(*rep.cex, cand->completion, primary))
        return finish(SynthesisOutcome::Unrealizable);
      continue;
    }

    if (cfg.extra_check && !extras.empty()) {
      bool failed_extra = false;
      for (std::size_t i = 0; i < extras.size(); ++i) {
        CheckReport er;
        try {
          er = verify(proto, *extras[i], proto.properties, copts);
        } catch (const StateSpaceLimitError& e) {
          throw Error(std::string(e.what()) + " during extra-check");
        }
        stats.check_time += er.check_time;
        if (!er.pass) {
          ++stats.extra_check_failures;
          note_counterexample(*er.cex, i + 1);
          if (!add_constraint(*er.cex, cand->completion, extras[i]))
            return finish(SynthesisOutcome::Unrealizable);
          failed_extra = true;
          break;
        }
      }
      if (failed_extra) continue;
    }

    stats.k_prime = cand->combined_size;
    stats.k_prime_is_solution = true;
    res.completion = cand->completion;
    res.protocol = std::move(proto);
    return finish(SynthesisOutcome::Solved);
  }
}

std::string report_stats(const SynthesisStats& stats) {
  std::ostringstream out;
  out << "generated=" << stats.generated << "\n";
  out << "pruned=" << stats.pruned << "\n";
  out << "model_checked=" << stats.model_checked << "\n";
  out << "k_prime=" << stats.k_prime_str() << "\n";
  out << "total_time_s=" << stats.total_time.count() << "\n";
  out << "check_time_s=" << stats.check_time.count() << "\n";
  out << "constraints=" << stats.constraints << "\n";
  out << "extra_check_failures=" << stats.extra_check_failures << "\n";
  out << "duplicate_counterexamples=" << stats.duplicate_counterexamples
      << "\n";
  out << "\n";
  out << "  generated / model checked : " << stats.generated << " / "
      << stats.model_checked << "\n";
  out << "  k'                        : " << stats.k_prime_str() << "\n";
  out << "  total / checking time     : " << stats.total_time.count()
      << "s / " << stats.check_time.count() << "s\n";
  return out.str();
}

}  // namespace protoforge
