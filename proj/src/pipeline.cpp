#include "tpagg/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "tpagg/diversity.hpp"
#include "tpagg/schedule.hpp"

namespace tpagg {

void PipelineConfig::validate() const {
  if (budgets.empty()) throw Error(ErrorKind::InvalidParams, "no budget given");
  for (double k : budgets) budget_count(k, 1);
  if (methods.empty()) throw Error(ErrorKind::InvalidParams, "no consensus method given");
  ky.validate();
  if (nproc < 1) throw Error(ErrorKind::InvalidParams, "nproc must be >= 1");
  if (out.empty()) throw Error(ErrorKind::InvalidParams, "no output directory");
}

std::string budget_label(double k_percent) { return format_number(k_percent); }

std::string consensus_label(Method m, double k_percent) {
  return std::string(method_label(m)) + "_" + budget_label(k_percent);
}

std::string diversity_csv(const Ensemble& e, const DiversitySelection& sel) {
  std::vector<char> kept(e.size(), 0);
  for (auto i : sel.selected) kept[i] = 1;
  std::string out = "index,label,div,selected\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    out += std::to_string(i) + "," + e[i].label + "," + std::to_string(sel.div[i]) +
           "," + (kept[i] ? "1" : "0") + "\n";
  }
  return out;
}

std::string consensus_json(const std::string& label, const ConsensusResult& result,
                           double k_percent, std::size_t ensemble_size,
                           std::size_t selected, const KYParams& params) {
  nlohmann::ordered_json obj;
  obj["strategy"] = label;
  auto groups = nlohmann::ordered_json::array();
  for (const auto& g : result.ranking.groups()) groups.push_back(g);
  obj["groups"] = std::move(groups);
  nlohmann::ordered_json prov;
  prov["method"] = std::string(method_label(result.method));
  prov["budget"] = k_percent;
  prov["ensemble_size"] = ensemble_size;
  prov["selected"] = selected;
  if (result.kemeny) {
    prov["N"] = params.iterations;
    prov["M"] = params.window;
    prov["seed"] = params.seed;
    prov["initial_score"] = result.kemeny->initial_score;
    prov["sweeps"] = result.kemeny->sweep_scores.size();
    prov["optimal_orderings"] = result.kemeny->optimal_orderings;
  }
  prov["agreement_score"] = result.agreement;
  obj["provenance"] = std::move(prov);
  return obj.dump();
}

namespace {

class TreeWriter {
 public:
  explicit TreeWriter(std::filesystem::path root) : root_(std::move(root)) {}

  void put(const std::filesystem::path& rel, std::string_view contents) {
    write_file(root_ / rel, contents);
    written_.push_back(rel);
  }

  std::vector<std::filesystem::path> take() { return std::move(written_); }

 private:
  std::filesystem::path root_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace

PipelineSummary run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  auto snapshot = load_snapshot(cfg.snapshot);
  FailureRecord failures;
  if (cfg.failures) failures = load_failures(*cfg.failures, snapshot.names);

  EnsembleConfig ens_cfg = EnsembleConfig::defaults();
  if (cfg.ensemble_config) {
    std::ifstream in(*cfg.ensemble_config);
    if (!in) {
      throw Error(ErrorKind::InvalidParams,
                  "cannot open " + cfg.ensemble_config->string());
    }
    ens_cfg = EnsembleConfig::parse(in);
  }

  TreeWriter tree(cfg.out);
  std::string names;
  for (const auto& name : snapshot.names.names()) names += name + "\n";
  tree.put("names.txt", names);

  const Ensemble ensemble = build_ensemble(snapshot, ens_cfg);
  tree.put("ensemble.json", ensemble_json(ensemble));

  PipelineSummary summary;
  std::vector<std::string> seen;
  for (const auto& entry : ensemble) {
    if (std::find(seen.begin(), seen.end(), entry.label) != seen.end()) continue;
    seen.push_back(entry.label);
    tree.put("standalone/" + entry.label + ".json", ranking_json(entry.label, entry.ranking) + "\n");
    summary.metrics.push_back(evaluate(entry.label, entry.ranking, snapshot.cost, failures));
  }

  for (double k : cfg.budgets) {
    const auto kdir = std::filesystem::path("selection") / ("top_" + budget_label(k));
    Ensemble profile = ensemble;
    if (ensemble.size() >= 2) {
      auto sel = rank_by_diversity(ensemble, k);
      profile = ensemble.subset(sel.selected);
      tree.put(kdir / "diversity.csv", diversity_csv(ensemble, sel));
    } else {
      tree.put(kdir / "diversity.csv",
               "index,label,div,selected\n0," + ensemble[0].label + ",0,1\n");
    }
    tree.put(kdir / "selected.json", ensemble_json(profile));

    for (Method m : cfg.methods) {
      const auto label = consensus_label(m, k);
      auto result = run_consensus(profile, m, cfg.ky);
      tree.put("consensus/" + label + ".json",
               consensus_json(label, result, k, ensemble.size(), profile.size(), cfg.ky) + "\n");
      auto plan = make_plan(result.ranking, cfg.nproc);
      tree.put("plan/" + label + ".json", plan_json(plan) + "\n");
      if (cfg.failures) {
        tree.put("timeline/" + label + ".csv",
                 timeline_csv(simulate(plan, snapshot.cost, failures)));
      }
      summary.metrics.push_back(
          evaluate(label, flatten(result.ranking), snapshot.cost, failures));
    }
  }

  tree.put("metrics.csv", metrics_csv(summary.metrics));
  summary.written = tree.take();
  return summary;
}

}  // namespace tpagg
