// tpagg: command-line front end for the prioritization / aggregation
// pipeline. Every stage can run on its own, reading the previous stage's
// files.
//
// Exit codes: 0 ok, 2 input error, 3 config error, 4 internal error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tpagg/consensus.hpp"
#include "tpagg/diversity.hpp"
#include "tpagg/heuristics.hpp"
#include "tpagg/io.hpp"
#include "tpagg/metrics.hpp"
#include "tpagg/pipeline.hpp"
#include "tpagg/schedule.hpp"
#include "tpagg/synthetic.hpp"

namespace fs = std::filesystem;
using namespace tpagg;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

struct SnapshotFlags {
  std::string coverage, delta, cost, traces;

  void add(CLI::App* app, bool required) {
    auto* c = app->add_option("--coverage", coverage, "coverage.csv");
    auto* d = app->add_option("--delta", delta, "delta.txt");
    auto* k = app->add_option("--cost", cost, "cost.csv");
    app->add_option("--traces", traces, "traces.jsonl");
    if (required) {
      c->required();
      d->required();
      k->required();
    }
  }

  SnapshotPaths paths() const {
    SnapshotPaths p{coverage, delta, cost, std::nullopt};
    if (!traces.empty()) p.traces = traces;
    return p;
  }
};

struct KyFlags {
  int iterations = 200;
  int window = 7;
  std::uint64_t seed = 0;

  void add(CLI::App* app) {
    app->add_option("--N", iterations, "Kemeny-Young sweep budget (0..200)");
    app->add_option("--M", window, "Kemeny-Young window size (1..7)");
    app->add_option("--seed", seed, "random seed");
  }

  KYParams params() const { return {iterations, window, seed}; }
};

Method require_method(const std::string& label) {
  if (auto m = parse_method(label)) return *m;
  throw Error(ErrorKind::InvalidParams, "unknown method '" + label + "'");
}

EnsembleConfig ensemble_config(const std::string& path) {
  if (path.empty()) return EnsembleConfig::defaults();
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidParams, "cannot open " + path);
  return EnsembleConfig::parse(in);
}

int cmd_prioritize(const SnapshotFlags& snap, const std::string& cfg_path,
                   const fs::path& out) {
  auto snapshot = load_snapshot(snap.paths());
  for (const auto& w : snapshot.warnings) std::cerr << "warning: " << w << "\n";
  auto cfg = ensemble_config(cfg_path);
  auto ensemble = build_ensemble(snapshot, cfg);
  std::vector<std::string> seen;
  for (const auto& e : ensemble) {
    if (std::find(seen.begin(), seen.end(), e.label) != seen.end()) continue;
    seen.push_back(e.label);
    write_file(out / "standalone" / (e.label + ".json"), ranking_json(e.label, e.ranking) + "\n");
  }
  write_file(out / "ensemble.json", ensemble_json(ensemble));
  std::cout << "wrote " << seen.size() << " strategies, " << ensemble.size()
            << " ensemble entries to " << out.string() << "\n";
  return 0;
}

int cmd_select(const std::string& ensemble_path, double budget, const fs::path& out) {
  auto ensemble = parse_ensemble_json(read_file(ensemble_path));
  auto sel = rank_by_diversity(ensemble, budget);
  write_file(out / "diversity.csv", diversity_csv(ensemble, sel));
  write_file(out / "selected.json", ensemble_json(ensemble.subset(sel.selected)));
  std::cout << diversity_csv(ensemble, sel);
  return 0;
}

int cmd_consensus(const std::string& ensemble_path, const std::string& method_name,
                  const KyFlags& ky, std::optional<double> budget, const fs::path& out) {
  auto profile = parse_ensemble_json(read_file(ensemble_path));
  auto method = require_method(method_name);
  auto params = ky.params();
  auto result = run_consensus(profile, method, params);
  double k = budget.value_or(100.0);
  auto label = budget ? consensus_label(method, k) : std::string(method_label(method));
  auto json = consensus_json(label, result, k, profile.size(), profile.size(), params) + "\n";
  if (out.empty()) {
    std::cout << json;
  } else {
    write_file(out, json);
  }
  return 0;
}

int cmd_schedule(const std::string& consensus_path, std::size_t nproc,
                 const SnapshotFlags& snap, const std::string& failures_path,
                 const fs::path& out) {
  auto ranking = parse_ranking_json(read_file(consensus_path));
  auto plan = make_plan(ranking.ranking, nproc);
  write_file(out / "plan.json", plan_json(plan) + "\n");
  if (!snap.cost.empty()) {
    if (snap.coverage.empty()) {
      throw Error(ErrorKind::InvalidParams, "--cost needs --coverage for test names");
    }
    std::ifstream cov(snap.coverage);
    if (!cov) throw Error(ErrorKind::MalformedFile, "cannot open " + snap.coverage);
    auto names = parse_coverage(cov).names;
    std::ifstream cost_in(snap.cost);
    if (!cost_in) throw Error(ErrorKind::MalformedFile, "cannot open " + snap.cost);
    auto cost = parse_cost(cost_in, names);
    FailureRecord failures;
    if (!failures_path.empty()) failures = load_failures(failures_path, names);
    write_file(out / "timeline.csv", timeline_csv(simulate(plan, cost, failures)));
  }
  std::cout << plan_json(plan) << "\n";
  return 0;
}

int cmd_evaluate(const std::vector<std::string>& rankings,
                 const std::vector<std::string>& plans, const SnapshotFlags& snap,
                 const std::string& failures_path, const fs::path& out) {
  std::ifstream cov(snap.coverage);
  if (!cov) throw Error(ErrorKind::MalformedFile, "cannot open " + snap.coverage);
  auto names = parse_coverage(cov).names;
  FailureRecord failures;
  if (!failures_path.empty()) failures = load_failures(failures_path, names);

  std::string csv;
  if (!plans.empty()) {
    csv = "plan,apfd_batch\n";
    for (const auto& p : plans) {
      auto plan = parse_plan_json(read_file(p));
      auto v = apfd_by_batch(plan, failures);
      csv += fs::path(p).stem().string() + "," + (v ? format_fixed6(*v) : "NA") + "\n";
    }
  } else {
    std::ifstream cost_in(snap.cost);
    if (!cost_in) throw Error(ErrorKind::MalformedFile, "cannot open " + snap.cost);
    auto cost = parse_cost(cost_in, names);
    std::vector<MetricRow> rows;
    for (const auto& path : rankings) {
      auto lr = parse_ranking_json(read_file(path));
      if (lr.ranking.size() != names.size()) {
        throw Error(ErrorKind::SuiteMismatch, path + " does not rank the whole suite");
      }
      auto label = lr.strategy.empty() ? fs::path(path).stem().string() : lr.strategy;
      rows.push_back(evaluate(label, flatten(lr.ranking), cost, failures));
    }
    csv = metrics_csv(rows);
  }
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
  }
  return 0;
}

int cmd_gen(const SyntheticParams& params, const fs::path& out) {
  auto sc = gen_synthetic(params);
  write_scenario(sc, out);
  std::cout << "wrote " << sc.snapshot.n << " tests, " << sc.snapshot.delta.size()
            << " delta blocks, " << sc.failures.count() << " failures to "
            << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ensemble test prioritization: heuristics, diversity selection, "
               "rank aggregation, scheduling and evaluation"};
  app.require_subcommand(1);

  SnapshotFlags snap;
  KyFlags ky;
  std::string failures, ensemble_cfg, ensemble, consensus, out;
  double budget = 75;
  std::size_t nproc = 4;
  std::string method = "ky";
  std::vector<std::string> rankings, plans;

  auto* prio = app.add_subcommand("prioritize", "compute the standalone rankings and the ensemble");
  snap.add(prio, true);
  prio->add_option("--ensemble-config", ensemble_cfg, "label,multiplicity file");
  prio->add_option("--out", out, "output directory")->required();

  auto* sel = app.add_subcommand("select", "keep the top-k% most diverse rankings");
  sel->add_option("--ensemble", ensemble, "ensemble JSON")->required();
  sel->add_option("--budget", budget, "k in (0,100]")->required();
  sel->add_option("--out", out, "output directory")->required();

  auto* cons = app.add_subcommand("consensus", "aggregate an ensemble into one ranking");
  std::optional<double> cons_budget;
  cons->add_option("--ensemble", ensemble, "ensemble JSON")->required();
  cons->add_option("--method", method, "ky|borda|am|gm|hm|med");
  cons->add_option("--budget", cons_budget, "budget the ensemble was selected with (label only)");
  ky.add(cons);
  cons->add_option("--out", out, "output file (stdout when omitted)");

  auto* sched = app.add_subcommand("schedule", "turn a consensus into an execution plan");
  sched->add_option("--consensus", consensus, "ranking JSON")->required();
  sched->add_option("--nproc", nproc, "cores per batch");
  sched->add_option("--coverage", snap.coverage, "coverage.csv (test names)");
  sched->add_option("--cost", snap.cost, "cost.csv");
  sched->add_option("--failures", failures, "failures.txt");
  sched->add_option("--out", out, "output directory")->required();

  auto* eval = app.add_subcommand("evaluate", "APFD / APFD_c / EPS of rankings");
  eval->add_option("--ranking", rankings, "ranking JSON files");
  eval->add_option("--plan", plans, "plan JSON files (batch-position APFD)");
  eval->add_option("--coverage", snap.coverage, "coverage.csv")->required();
  eval->add_option("--cost", snap.cost, "cost.csv");
  eval->add_option("--failures", failures, "failures.txt");
  eval->add_option("--out", out, "output CSV (stdout when omitted)");

  auto* pipe = app.add_subcommand("pipeline", "run all stages end to end");
  std::vector<std::string> methods{"ky"};
  std::vector<double> budgets{75};
  snap.add(pipe, true);
  pipe->add_option("--failures", failures, "failures.txt");
  pipe->add_option("--ensemble-config", ensemble_cfg, "label,multiplicity file");
  pipe->add_option("--budget", budgets, "comma-separated budgets")->delimiter(',');
  pipe->add_option("--method", methods, "comma-separated methods, or 'all'")->delimiter(',');
  ky.add(pipe);
  pipe->add_option("--nproc", nproc, "cores per batch");
  pipe->add_option("--out", out, "output directory")->required();

  auto* gen = app.add_subcommand("gen-synthetic", "generate a synthetic scenario");
  SyntheticParams sp;
  gen->add_option("--tests", sp.tests, "number of tests");
  gen->add_option("--blocks", sp.blocks, "number of basic blocks");
  gen->add_option("--delta-frac", sp.delta_frac, "fraction of blocks changed");
  gen->add_option("--imbalance", sp.imbalance, "cost spread (orders of magnitude)");
  gen->add_option("--fail-frac", sp.fail_frac, "fraction of failing tests");
  gen->add_option("--correlation", sp.correlation, "failure/Δ-relevance correlation");
  gen->add_option("--seed", sp.seed, "random seed");
  gen->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  std::string stage = "cli";
  try {
    if (*prio) {
      stage = "prioritize";
      return cmd_prioritize(snap, ensemble_cfg, out);
    }
    if (*sel) {
      stage = "select";
      return cmd_select(ensemble, budget, out);
    }
    if (*cons) {
      stage = "consensus";
      return cmd_consensus(ensemble, method, ky, cons_budget, out);
    }
    if (*sched) {
      stage = "schedule";
      return cmd_schedule(consensus, nproc, snap, failures, out);
    }
    if (*eval) {
      stage = "evaluate";
      if (rankings.empty() == plans.empty()) {
        throw Error(ErrorKind::InvalidParams, "give either --ranking or --plan files");
      }
      return cmd_evaluate(rankings, plans, snap, failures, out);
    }
    if (*pipe) {
      stage = "pipeline";
      PipelineConfig cfg;
      cfg.snapshot = snap.paths();
      if (!failures.empty()) cfg.failures = failures;
      if (!ensemble_cfg.empty()) cfg.ensemble_config = ensemble_cfg;
      cfg.budgets = budgets;
      cfg.methods.clear();
      for (const auto& m : methods) {
        if (m == "all") {
          cfg.methods = all_methods();
          break;
        }
        cfg.methods.push_back(require_method(m));
      }
      cfg.ky = ky.params();
      cfg.nproc = nproc;
      cfg.out = out;
      auto summary = run_pipeline(cfg);
      std::cout << metrics_csv(summary.metrics);
      return 0;
    }
    if (*gen) {
      stage = "gen-synthetic";
      return cmd_gen(sp, out);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << stage << "]: " << e.what() << "\n";
    switch (classify(e.kind())) {
      case ErrorClass::Input: return kExitInput;
      case ErrorClass::Config: return kExitConfig;
      case ErrorClass::Internal: return kExitInternal;
    }
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage << "]: internal: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
