#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctxassoc/agreement.hpp"
#include "ctxassoc/aggregate.hpp"
#include "ctxassoc/classifiers.hpp"
#include "ctxassoc/corpus.hpp"
#include "ctxassoc/eval.hpp"
#include "ctxassoc/features.hpp"
#include "ctxassoc/instances.hpp"
#include "ctxassoc/rng.hpp"
#include "ctxassoc/synthetic.hpp"

namespace {

using namespace ctxassoc;

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitIoError = 2;

int default_workers() {
  if (const char* env = std::getenv("CTXASSOC_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// simple "key = value" config file; '#' starts a comment
std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    out[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }
  return out;
}

std::vector<ModelKind> parse_models(const std::string& csv) {
  std::vector<ModelKind> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "baseline") continue; // always evaluated
    bool found = false;
    for (ModelKind k : {ModelKind::LogisticRegression, ModelKind::LinearSVM,
                        ModelKind::RandomForest, ModelKind::FeedForwardNN}) {
      if (item == model_kind_name(k)) {
        out.push_back(k);
        found = true;
      }
    }
    if (!found) throw std::runtime_error("unknown model '" + item + "'");
  }
  return out;
}

int cmd_validate(const std::string& corpus_path) {
  Corpus corpus;
  try {
    corpus = load_corpus(corpus_path);
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitDomainError;
  }
  const ValidationReport report = validate_corpus(corpus);
  std::cout << "documents: " << corpus.documents.size() << "\n";
  std::cout << "errors: " << report.errors.size() << "\n";
  std::cout << "warnings: " << report.warnings.size() << "\n";
  for (const std::string& w : report.warnings) std::cout << "warning: " << w << "\n";
  return report.ok() ? kExitOk : kExitDomainError;
}

int cmd_stats(const std::string& corpus_path, CategoryFilter filter,
              const std::string& dump_candidates, const std::string& dump_features) {
  const Corpus corpus = load_corpus(corpus_path);
  size_t events = 0, mentions = 0;
  std::set<std::string> types;
  long positives = 0, negatives = 0;

  std::ofstream cand_out, feat_out;
  if (!dump_candidates.empty()) {
    cand_out.open(dump_candidates);
    if (!cand_out) throw std::runtime_error("cannot write '" + dump_candidates + "'");
  }
  if (!dump_features.empty()) {
    feat_out.open(dump_features);
    if (!feat_out) throw std::runtime_error("cannot write '" + dump_features + "'");
  }

  for (const Document& doc : corpus.documents) {
    events += doc.events.size();
    mentions += doc.contexts.size();
    for (const ContextMention& c : doc.contexts)
      if (category_allowed(c.category, filter)) types.insert(c.grounding_id);
    for (const TypeLevelCandidate& cand : build_candidates(doc, filter)) {
      (cand.label ? positives : negatives) += 1;
      if (cand_out.is_open()) cand_out << candidate_to_jsonl(cand, doc) << "\n";
      if (feat_out.is_open())
        for (const MentionPair& pair : cand.pairs)
          feat_out << pair_features_to_jsonl(extract_pair_features(pair, doc)) << "\n";
    }
  }
  std::cout << "documents: " << corpus.documents.size() << "\n";
  std::cout << "events: " << events << "\n";
  std::cout << "context_mentions: " << mentions << "\n";
  std::cout << "context_types: " << types.size() << "\n";
  std::cout << "positive_candidates: " << positives << "\n";
  std::cout << "negative_candidates: " << negatives << "\n";
  if (positives > 0)
    std::cout << "negative_to_positive_ratio: "
              << static_cast<double>(negatives) / static_cast<double>(positives) << "\n";
  return kExitOk;
}

std::string config_hash_string(const std::map<std::string, std::string>& effective) {
  std::string canonical;
  for (const auto& [k, v] : effective) canonical += k + "=" + v + "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical)));
  return buf;
}

int cmd_cv(const std::string& corpus_path, const std::string& out_dir, EvalConfig config,
           const std::string& save_models_dir) {
  const Corpus corpus = load_corpus(corpus_path);
  const EvalReport report = run_cv(corpus, config);
  write_report_files(report, out_dir);

  const auto print_metrics = [](const std::string& name, const Metrics& m) {
    std::printf("%-22s P=%.4f R=%.4f F1=%.4f (tp=%ld fp=%ld fn=%ld)\n", name.c_str(), m.precision,
                m.recall, m.f1, m.tp, m.fp, m.fn);
  };
  print_metrics("baseline", report.baseline_pooled);
  for (const auto& [kind, metrics] : report.pooled) print_metrics(model_kind_name(kind), metrics);
  for (const auto& [kind, outcome] : report.bootstrap)
    std::printf("bootstrap %-18s fraction=%.3f significant=%s\n", model_kind_name(kind),
                outcome.fraction, outcome.significant ? "yes" : "no");

  if (!save_models_dir.empty()) {
    std::filesystem::create_directories(save_models_dir);
    for (const FoldResult& fold : report.folds) {
      for (const auto& [kind, outcome] : fold.models) {
        const TrainedModel model =
            train_fold_model(corpus, fold.spec, kind, outcome.subset, config);
        std::ofstream out(std::filesystem::path(save_models_dir) /
                          (fold.spec.test_paper + "_" + model_kind_name(kind) + ".json"));
        out << model_to_json(model);
      }
    }
    std::cout << "winning models written to " << save_models_dir << "\n";
  }
  std::cout << "report written to " << out_dir << "\n";
  return kExitOk;
}

int cmd_agreement(const std::string& corpus_path, const std::vector<std::string>& annotator_paths,
                  const std::string& out_dir, ItemUniverse universe,
                  const std::string& expert_events_path) {
  const Corpus corpus = load_corpus(corpus_path);
  std::vector<AnnotatorJudgments> annotators;
  annotators.reserve(annotator_paths.size());
  for (const std::string& p : annotator_paths) annotators.push_back(load_annotator_file(p));

  const AgreementReport report = kappa_report(annotators, corpus, universe);
  write_agreement_files(report, out_dir);
  std::cout << "shared papers: " << report.shared_papers.size() << "\n";
  std::cout << "context types: " << report.per_type.size() << "\n";

  if (!expert_events_path.empty()) {
    std::ifstream in(expert_events_path);
    if (!in) throw std::runtime_error("cannot open '" + expert_events_path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    std::vector<SpanRef> expert, machine;
    std::set<std::string> expert_papers;
    for (const auto& [pid, spans] : j.items()) {
      expert_papers.insert(pid);
      for (const auto& s : spans)
        expert.push_back(SpanRef{s.at(0).get<int>(), s.at(1).get<int>(), s.at(2).get<int>()});
    }
    for (const Document& doc : corpus.documents) {
      if (!expert_papers.count(doc.paper_id)) continue;
      for (const EventMention& e : doc.events)
        machine.push_back(SpanRef{e.sentence, e.start, e.end});
    }
    const OverlapCounts counts = span_overlap(machine, expert);
    nlohmann::json oj{{"both", counts.both},
                      {"only_machine", counts.only_a},
                      {"only_expert", counts.only_b},
                      {"jaccard", counts.jaccard}};
    std::ofstream out(std::filesystem::path(out_dir) / "overlap.json");
    out << oj.dump(2) << "\n";
    std::cout << "event span jaccard: " << counts.jaccard << "\n";
  }
  return kExitOk;
}

int cmd_synth(const std::string& out_dir, std::uint64_t seed, const SynthParams& params) {
  if (params.n_papers <= 0 || params.events_per_paper <= 0 || params.contexts_per_paper <= 0 ||
      params.types_per_paper <= 0 || params.sentences_per_paper <= 0 || params.min_tokens <= 0 ||
      params.max_tokens < params.min_tokens || params.signal.window < 0) {
    std::cerr << "invalid generator sizes\n";
    return kExitDomainError;
  }
  const Corpus corpus = generate_synthetic_corpus(seed, params);
  save_corpus(corpus, out_dir);
  std::cout << "wrote " << corpus.documents.size() << " paper files to " << out_dir << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"context-event association experiment engine"};
  app.require_subcommand(1);

  // validate
  std::string v_corpus;
  CLI::App* validate = app.add_subcommand("validate", "load and validate a corpus");
  validate->add_option("corpus", v_corpus, "corpus file or directory")->required();

  // stats
  std::string s_corpus, s_dump_candidates, s_dump_features;
  bool s_all_categories = false;
  CLI::App* stats = app.add_subcommand("stats", "corpus and candidate counts");
  stats->add_option("corpus", s_corpus, "corpus file or directory")->required();
  stats->add_flag("--all-categories", s_all_categories,
                  "keep every context category instead of the restricted set");
  stats->add_option("--dump-candidates", s_dump_candidates, "write candidates as JSON lines");
  stats->add_option("--dump-features", s_dump_features, "write pair features as JSON lines");

  // cv
  std::string c_config_file, c_corpus, c_out = "cv-out", c_models, c_save_models;
  std::uint64_t c_seed = 0;
  int c_budget = 16383, c_bootstrap = 1000, c_workers = default_workers();
  bool c_all_categories = false;
  CLI::App* cv = app.add_subcommand("cv", "leave-one-out cross-validation experiment");
  cv->add_option("--config", c_config_file, "key = value config file (flags win)");
  auto* o_corpus = cv->add_option("--corpus", c_corpus, "corpus file or directory");
  auto* o_out = cv->add_option("--out", c_out, "output directory");
  auto* o_seed = cv->add_option("--seed", c_seed, "master seed (required, no wall-clock seeding)");
  auto* o_models = cv->add_option("--models", c_models,
                                  "comma list: logistic_regression,linear_svm,random_forest,feed_forward_nn");
  auto* o_budget = cv->add_option("--budget", c_budget, "feature-subset search budget");
  auto* o_bootstrap = cv->add_option("--bootstrap-iters", c_bootstrap, "bootstrap resample count");
  auto* o_workers = cv->add_option("--workers", c_workers, "worker thread count");
  auto* o_allcat = cv->add_flag("--all-categories", c_all_categories,
                                "keep every context category instead of the restricted set");
  cv->add_option("--save-models", c_save_models, "directory for winning model JSON files");

  // agreement
  std::string a_corpus, a_out = "agreement-out", a_universe = "all", a_expert;
  std::vector<std::string> a_annotators;
  CLI::App* agreement = app.add_subcommand("agreement", "inter-annotator agreement statistics");
  agreement->add_option("--corpus", a_corpus, "corpus file or directory")->required();
  agreement->add_option("--annotators", a_annotators, "annotator judgment files (>= 2)")
      ->required()
      ->expected(-2);
  agreement->add_option("--out", a_out, "output directory");
  agreement->add_option("--item-universe", a_universe, "all | proposed");
  agreement->add_option("--expert-events", a_expert,
                        "expert event spans JSON for span-overlap statistics");

  // synth
  std::string y_out = "synthetic-corpus";
  std::uint64_t y_seed = 1;
  SynthParams y_params;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--out", y_out, "output directory");
  synth->add_option("--seed", y_seed, "generator seed");
  synth->add_option("--papers", y_params.n_papers, "paper count");
  synth->add_option("--events", y_params.events_per_paper, "events per paper");
  synth->add_option("--contexts", y_params.contexts_per_paper, "context mentions per paper");
  synth->add_option("--types", y_params.types_per_paper, "context types per paper");
  synth->add_option("--sentences", y_params.sentences_per_paper, "sentences per paper");
  synth->add_option("--window", y_params.signal.window, "planted signal window");
  synth->add_option("--min-freq", y_params.signal.min_frequency,
                    "planted signal minimum type frequency (0 = off)");
  synth->add_option("--noise", y_params.signal.noise, "label flip probability");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(v_corpus);

    if (stats->parsed())
      return cmd_stats(s_corpus, s_all_categories ? CategoryFilter::All : CategoryFilter::Restricted,
                       s_dump_candidates, s_dump_features);

    if (cv->parsed()) {
      // config file fills in anything not given on the command line
      if (!c_config_file.empty()) {
        const auto file = parse_config_file(c_config_file);
        const auto take = [&](const CLI::Option* opt, const char* key, auto& target) {
          auto it = file.find(key);
          if (opt->count() == 0 && it != file.end()) {
            std::istringstream in(it->second);
            in >> target;
          }
        };
        if (o_corpus->count() == 0 && file.count("corpus")) c_corpus = file.at("corpus");
        if (o_out->count() == 0 && file.count("out")) c_out = file.at("out");
        if (o_models->count() == 0 && file.count("models")) c_models = file.at("models");
        take(o_seed, "seed", c_seed);
        take(o_budget, "budget", c_budget);
        take(o_bootstrap, "bootstrap_iters", c_bootstrap);
        take(o_workers, "workers", c_workers);
        if (o_allcat->count() == 0 && file.count("all_categories"))
          c_all_categories = file.at("all_categories") == "true";
        if (o_seed->count() == 0 && !file.count("seed")) {
          std::cerr << "cv: master seed required (flag --seed or config key 'seed')\n";
          return kExitIoError;
        }
      } else if (o_seed->count() == 0) {
        std::cerr << "cv: master seed required (--seed)\n";
        return kExitIoError;
      }
      if (c_corpus.empty()) {
        std::cerr << "cv: corpus path required\n";
        return kExitIoError;
      }

      EvalConfig config;
      config.master_seed = c_seed;
      config.search_budget = c_budget;
      config.bootstrap_iterations = c_bootstrap;
      config.workers = c_workers;
      config.filter = c_all_categories ? CategoryFilter::All : CategoryFilter::Restricted;
      if (!c_models.empty()) config.models = parse_models(c_models);

      std::map<std::string, std::string> effective{
          {"corpus", c_corpus},
          {"seed", std::to_string(c_seed)},
          {"budget", std::to_string(c_budget)},
          {"bootstrap_iters", std::to_string(c_bootstrap)},
          {"all_categories", c_all_categories ? "true" : "false"},
          {"models", c_models.empty() ? "all" : c_models}};
      config.config_hash = config_hash_string(effective);
      return cmd_cv(c_corpus, c_out, config, c_save_models);
    }

    if (agreement->parsed()) {
      if (a_universe != "all" && a_universe != "proposed") {
        std::cerr << "agreement: --item-universe must be 'all' or 'proposed'\n";
        return kExitIoError;
      }
      if (a_annotators.size() < 2) {
        std::cerr << "agreement: need >= 2 annotator files\n";
        return kExitDomainError;
      }
      return cmd_agreement(a_corpus, a_annotators, a_out,
                           a_universe == "all" ? ItemUniverse::AllEvents
                                               : ItemUniverse::ProposedEvents,
                           a_expert);
    }

    if (synth->parsed()) return cmd_synth(y_out, y_seed, y_params);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const AgreementError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitOk;
}
