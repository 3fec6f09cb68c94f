#include "protoforge/corpus.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "protoforge/config.hpp"

namespace protoforge {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<BenchmarkCase> load_corpus_manifest(const std::string& dir) {
  auto text = read_file(dir + "/cases.json");
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<BenchmarkCase> cases;
  for (const auto& c : j.at("cases")) {
    BenchmarkCase bc;
    bc.name = c.at("name").get<std::string>();
    bc.sketch_file = c.at("sketch").get<std::string>();
    bc.config_file = c.at("config").get<std::string>();
    for (const auto& [hole, expr] : c.at("ground_truth").items())
      bc.ground_truth[hole] = expr.get<std::string>();
    if (c.contains("budget_s")) bc.budget_s = c.at("budget_s").get<double>();
    if (c.contains("expect_extra_check_failure"))
      bc.expect_extra_check_failure =
          c.at("expect_extra_check_failure").get<bool>();
    cases.push_back(std::move(bc));
  }
  return cases;
}

namespace {

Completion parse_ground_truth(const Sketch& sk,
                              const std::map<std::string, std::string>& gt) {
  Completion c;
  for (const auto& [hole, text] : gt) {
    const Hole* h = sk.find_hole(hole);
    if (!h) throw ConfigError("ground truth names unknown hole " + hole);
    CheckEnv env;
    env.sk = &sk;
    env.use_vars = false;
    env.use_params = false;
    env.formals = &h->args;
    c.exprs[hole] = parse_expr_string(text, env, h->output_type);
  }
  return c;
}

bool verify_everywhere(const Protocol& p, const SynthesisConfig& cfg,
                       std::string& err) {
  CheckerOptions copts;
  copts.state_cap = cfg.state_cap;
  CheckReport rep = verify(p, cfg.instance, p.properties, copts);
  if (!rep.pass) {
    err = "primary instance: " + rep.cex->str();
    return false;
  }
  for (std::size_t i = 0; i < cfg.extra_instances.size(); ++i) {
    rep = verify(p, cfg.extra_instances[i], p.properties, copts);
    if (!rep.pass) {
      err = "extra instance " + std::to_string(i) + ": " + rep.cex->str();
      return false;
    }
  }
  return true;
}

}  // namespace

CaseResult run_case(const std::string& dir, const BenchmarkCase& c) {
  CaseResult res;
  res.name = c.name;
  try {
    Sketch sk = parse_sketch(read_file(dir + "/" + c.sketch_file));
    LoadedConfig lc = parse_config(read_file(dir + "/" + c.config_file));
    SynthesisConfig cfg = make_synthesis_config(lc, sk);
    cfg.timeout = std::chrono::duration<double>(
        std::min(c.budget_s, lc.timeout_s));

    // corpus integrity gate: the ground truth passes everywhere
    Completion gt = parse_ground_truth(sk, c.ground_truth);
    Protocol gt_proto = apply_completion(sk, gt);
    std::string err;
    res.ground_truth_ok = verify_everywhere(gt_proto, cfg, err);
    if (!res.ground_truth_ok) {
      res.error = "ground truth fails: " + err;
      return res;
    }

    SynthesisResult sres = synthesize(sk, cfg);
    res.outcome = sres.outcome;
    res.stats = sres.stats;
    if (sres.outcome != SynthesisOutcome::Solved) {
      res.error = std::string("synthesis ") + outcome_name(sres.outcome);
      return res;
    }
    for (const auto& [hole, body] : sres.completion->exprs)
      res.solution[hole] = to_string(body);

    // serialization soundness: the output re-verifies when loaded fresh
    std::string serialized = serialize_protocol(*sres.protocol);
    Protocol reloaded = parse_sketch(serialized);
    res.reverified = verify_everywhere(reloaded, cfg, err);
    if (!res.reverified) {
      res.error = "serialized solution fails to re-verify: " + err;
      return res;
    }

    if (res.stats.duplicate_counterexamples > 0) {
      res.error = "verifier returned a duplicate counterexample";
      return res;
    }
    if (c.expect_extra_check_failure && res.stats.extra_check_failures == 0) {
      res.error = "expected an extra-check rejection, saw none";
      return res;
    }
    res.ok = true;
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  return res;
}

std::vector<CaseResult> run_corpus(const std::string& dir,
                                   const std::string& filter) {
  std::vector<CaseResult> results;
  for (const auto& c : load_corpus_manifest(dir)) {
    if (!filter.empty() && c.name.find(filter) == std::string::npos) continue;
    results.push_back(run_case(dir, c));
  }
  return results;
}

std::string corpus_table(const std::vector<CaseResult>& results) {
  std::ostringstream out;
  out << std::left << std::setw(24) << "case" << std::setw(8) << "status"
      << std::setw(22) << "generated/checked" << std::setw(8) << "k'"
      << std::setw(12) << "total(s)" << std::setw(12) << "check(s)"
      << "solution\n";
  for (const auto& r : results) {
    std::string gen = std::to_string(r.stats.generated) + " / " +
                      std::to_string(r.stats.model_checked);
    std::string sol;
    for (const auto& [h, e] : r.solution) {
      if (!sol.empty()) sol += "  ";
      sol += h + " := " + e;
    }
    out << std::left << std::setw(24) << r.name << std::setw(8)
        << (r.ok ? "ok" : "FAIL") << std::setw(22) << gen << std::setw(8)
        << r.stats.k_prime_str() << std::setw(12) << std::fixed
        << std::setprecision(2) << r.stats.total_time.count() << std::setw(12)
        << r.stats.check_time.count() << sol << "\n";
    if (!r.ok && !r.error.empty()) out << "    " << r.error << "\n";
  }
  return out.str();
}

}  // namespace protoforge
