#include "dialogaug/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>

#include "dialogaug/corpus.hpp"
#include "dialogaug/extrinsic.hpp"
#include "dialogaug/intrinsic.hpp"
#include "dialogaug/model_services.hpp"
#include "dialogaug/pipeline.hpp"
#include "dialogaug/prompt.hpp"
#include "dialogaug/rank.hpp"

namespace dialogaug::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void ensure_stderr_logging() {
  if (!spdlog::get("dialogaug")) {
    auto logger = spdlog::stderr_color_mt("dialogaug");
    spdlog::set_default_logger(logger);
  }
}

std::string resolve_endpoint(const CLI::Option* opt, const std::string& value, const char* env_name,
                             const std::string& fallback) {
  if (opt->count() > 0) return value;
  if (const char* env = std::getenv(env_name); env != nullptr && *env != '\0') return env;
  return fallback;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

void emit_report(std::ostream& out, const std::string& report, const std::string& out_path) {
  out << report << "\n";
  if (!out_path.empty()) write_text(out_path, report + "\n");
}

const std::map<std::string, SourceFormat> kFormats = {
    {"canonical", SourceFormat::Canonical}, {"multiwoz", SourceFormat::MultiWoZ}, {"sgd", SourceFormat::SGD}};

const std::map<std::string, PromptStyle> kStyles = {{"special", PromptStyle::SpecialTokens},
                                                    {"natural-colon", PromptStyle::NaturalColon},
                                                    {"natural-says", PromptStyle::NaturalSays}};

struct InputArgs {
  std::string path;
  SourceFormat format = SourceFormat::Canonical;
};

void add_input(CLI::App* sub, InputArgs& args) {
  sub->add_option("--input", args.path, "Corpus file (or SGD directory)")->required();
  sub->add_option("--format", args.format, "canonical | multiwoz | sgd")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case).description(""))
      ->type_name("FORMAT")
      ->default_str("canonical");
}

int cmd_validate(const InputArgs& args, std::ostream& out) {
  const Corpus corpus = read_corpus(args.path, args.format);
  const auto violations = validate(corpus);
  json report = {{"dialogs", corpus.dialogs.size()}, {"violations", json::array()}};
  for (const auto& v : violations) {
    json item = {{"dialog_id", v.dialog_id}, {"rule", v.rule}, {"detail", v.detail}};
    item["exchange_index"] = v.exchange_index ? json(*v.exchange_index) : json(nullptr);
    report["violations"].push_back(std::move(item));
  }
  out << report.dump(2) << "\n";
  return violations.empty() ? kExitOk : kExitDataError;
}

int cmd_stats(const InputArgs& args, std::ostream& out) {
  const CorpusStats stats = corpus_stats(load_corpus(args.path, args.format));
  json report = {{"dialogs", stats.dialogs},
                 {"exchanges", stats.exchanges},
                 {"user_turns", stats.user_turns},
                 {"domains", stats.domain_histogram}};
  out << report.dump(2) << "\n";
  return kExitOk;
}

struct AugmentArgs {
  InputArgs input;
  double fraction = 0.0;
  std::uint64_t seed = 0;
  PromptStyle style = PromptStyle::NaturalColon;
  bool bs_slots = false;
  bool no_future = false;
  std::string backend;
  std::string scorer;
  std::optional<double> filter_threshold;
  int num_beams = 25;
  int num_return = 20;
  int max_new_tokens = 64;
  std::size_t concurrency = 4;
  std::string out_corpus;
  std::string out_records;
  std::string out_manifest;
  std::string config;  // consumed by expand_config before parsing
  CLI::Option* backend_opt = nullptr;
  CLI::Option* scorer_opt = nullptr;
};

int cmd_augment(const AugmentArgs& args, std::ostream& out) {
  PipelineConfig config;
  config.fraction = args.fraction;
  config.seed = args.seed;
  config.prompt.style = args.style;
  config.prompt.include_bs_slots = args.bs_slots;
  config.prompt.include_future = !args.no_future;
  config.generation.num_beams = args.num_beams;
  config.generation.num_return = args.num_return;
  config.generation.max_new_tokens = args.max_new_tokens;
  config.filter_threshold = args.filter_threshold;
  config.concurrency = args.concurrency;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const PromptError& e) {
    throw UsageError(e.what());
  }

  const std::string backend_url = resolve_endpoint(args.backend_opt, args.backend, "DIALOGAUG_BACKEND_URL", "stub");
  const std::string scorer_url = resolve_endpoint(args.scorer_opt, args.scorer, "DIALOGAUG_SCORER_URL", "bleu");

  HttpClientOptions http;
  http.max_in_flight = args.concurrency;
  std::unique_ptr<Generator> generator;
  std::unique_ptr<CandidateScorer> scorer;
  try {
    if (backend_url == "stub") generator = std::make_unique<StubGenerator>(args.seed);
    else generator = std::make_unique<HttpGenerator>(backend_url, http);
    if (scorer_url == "bleu") scorer = std::make_unique<BleuScorer>();
    else scorer = std::make_unique<ServiceScorer>(std::make_shared<HttpScoreService>(scorer_url, http));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const Corpus corpus = load_corpus(args.input.path, args.input.format);
  const PipelineResult result = run_pipeline(corpus, config, {generator.get(), scorer.get()});

  const std::string manifest_path =
      args.out_manifest.empty() ? args.out_corpus + ".manifest.json" : args.out_manifest;
  write_corpus(result.corpus, args.out_corpus);
  write_records(result.records, args.out_records);
  write_text(manifest_path, result.manifest_json);

  std::size_t selected = 0;
  for (const auto& r : result.records) selected += r.decision == RankDecision::Selected ? 1 : 0;
  out << "targets: " << result.records.size() << ", selected: " << selected
      << ", output dialogs: " << result.corpus.dialogs.size() << "\n";
  out << "manifest: " << manifest_path << "\n";
  return kExitOk;
}

struct IntrinsicArgs {
  std::string pairs;
  std::string scorer;
  std::string embedding = "none";
  std::size_t embedding_dim = 64;
  std::uint64_t embedding_seed = 0;
  std::string out_report;
  CLI::Option* scorer_opt = nullptr;
};

int cmd_eval_intrinsic(const IntrinsicArgs& args, std::ostream& out) {
  const auto pairs = load_intrinsic_pairs(args.pairs);
  std::unique_ptr<EmbeddingProvider> provider;
  if (args.embedding == "toy") {
    try {
      provider = toy_embedding_provider(args.embedding_dim, args.embedding_seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const std::string scorer_url = resolve_endpoint(args.scorer_opt, args.scorer, "DIALOGAUG_SCORER_URL", "");
  std::unique_ptr<HttpScoreService> service;
  if (!scorer_url.empty() && scorer_url != "bleu") {
    try {
      service = std::make_unique<HttpScoreService>(scorer_url);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  IntrinsicBackends backends{provider.get(), service.get(), service.get()};
  emit_report(out, intrinsic_report_json(corpus_intrinsic(pairs, backends)), args.out_report);
  return kExitOk;
}

struct MultiwozArgs {
  InputArgs input;
  std::string db;
  std::string traces;
  std::string out_report;
};

int cmd_eval_multiwoz(const MultiwozArgs& args, std::ostream& out) {
  const Corpus corpus = load_corpus(args.input.path, args.input.format);
  const VenueDatabase db = load_venue_db(args.db);
  const auto episodes = pair_episodes(corpus, load_traces(args.traces));
  emit_report(out, multiwoz_report_json(multiwoz_rates(episodes, db)), args.out_report);
  return kExitOk;
}

struct SgdArgs {
  std::string predictions;
  std::string golds;
  std::string out_report;
};

int cmd_eval_sgd(const SgdArgs& args, std::ostream& out) {
  emit_report(out, sgd_report_json(sgd_metrics(load_frames(args.predictions), load_frames(args.golds))),
              args.out_report);
  return kExitOk;
}

// CLI11 reads config files only at the top level, so the augment config is
// spliced in here: each key becomes "--key value" unless that flag was given
// on the command line. Keys may sit at top level or under [augment].
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App* augment) {
  auto sub = std::find(args.begin(), args.end(), "augment");
  std::vector<std::string> out(args.begin(), sub == args.end() ? args.end() : sub + 1);
  if (sub == args.end()) return args;

  std::string config_path;
  std::vector<std::string> rest;
  for (auto it = sub + 1; it != args.end(); ++it) {
    if (*it == "--config" && it + 1 != args.end()) {
      config_path = *++it;
    } else if (it->rfind("--config=", 0) == 0) {
      config_path = it->substr(9);
    } else {
      rest.push_back(*it);
    }
  }
  if (config_path.empty()) return args;

  auto given = [&](const std::string& flag) {
    return std::any_of(rest.begin(), rest.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  for (const auto& item : CLI::ConfigINI().from_file(config_path)) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && item.parents != std::vector<std::string>{"augment"}) {
      throw std::runtime_error("config '" + config_path + "': unexpected section for key '" + item.fullname() + "'");
    }
    const std::string flag = "--" + item.name;
    const CLI::Option* opt = augment->get_option_no_throw(flag);
    if (opt == nullptr || flag == "--config" || flag == "--help") {
      throw std::runtime_error("config '" + config_path + "': unknown key '" + item.name + "'");
    }
    if (given(flag)) continue;
    if (opt->get_expected_max() == 0) {
      if (!item.inputs.empty() && CLI::detail::to_flag_value(item.inputs.front()) > 0) out.push_back(flag);
      continue;
    }
    out.push_back(flag);
    out.insert(out.end(), item.inputs.begin(), item.inputs.end());
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ensure_stderr_logging();

  CLI::App app{"Dialog turn augmentation and evaluation", "dialogaug"};
  app.require_subcommand(1);

  InputArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check corpus invariants; writes nothing");
  add_input(validate_cmd, validate_args);

  InputArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Print corpus counts as JSON");
  add_input(stats_cmd, stats_args);

  AugmentArgs aug;
  auto* augment_cmd = app.add_subcommand("augment", "Augment a sampled fraction of dialogs");
  augment_cmd->add_option("--config", aug.config, "key=value config file (INI/TOML); flags take precedence");
  add_input(augment_cmd, aug.input);
  augment_cmd->add_option("--fraction", aug.fraction, "Fraction p of dialogs to augment, in (0, 1]")
      ->required()
      ->check(CLI::Validator(
          [](std::string& v) {
            double p = 0.0;
            if (!CLI::detail::lexical_cast(v, p)) return "fraction must be a number, got '" + v + "'";
            return p > 0.0 && p <= 1.0 ? std::string() : "fraction must lie in (0, 1]";
          },
          ""));
  augment_cmd->add_option("--seed", aug.seed, "Seed for sampling and the stub backend")->default_val(0);
  augment_cmd->add_option("--style", aug.style, "special | natural-colon | natural-says")
      ->transform(CLI::CheckedTransformer(kStyles, CLI::ignore_case).description(""))
      ->type_name("STYLE")
      ->default_str("natural-colon");
  augment_cmd->add_flag("--bs-slots", aug.bs_slots, "Insert belief-state slot phrases before the mask");
  augment_cmd->add_flag("--no-future", aug.no_future, "Drop exchanges after the masked turn");
  aug.backend_opt = augment_cmd->add_option("--backend", aug.backend, "stub | http://host:port of /generate");
  aug.scorer_opt = augment_cmd->add_option("--scorer", aug.scorer, "bleu | http://host:port of /score (bleurt)");
  augment_cmd->add_option("--filter-threshold", aug.filter_threshold, "Drop selections scoring below this");
  augment_cmd->add_option("--num-beams", aug.num_beams, "Beam width")->default_val(25);
  augment_cmd->add_option("--num-return", aug.num_return, "Candidates returned per target")->default_val(20);
  augment_cmd->add_option("--max-new-tokens", aug.max_new_tokens, "Generation length cap")->default_val(64);
  augment_cmd->add_option("--concurrency", aug.concurrency, "Targets in flight")->default_val(4)->check(CLI::PositiveNumber);
  augment_cmd->add_option("--out-corpus", aug.out_corpus, "Augmented corpus (canonical JSON)")->required();
  augment_cmd->add_option("--out-records", aug.out_records, "Augmentation records (JSONL)")->required();
  augment_cmd->add_option("--out-manifest", aug.out_manifest, "Run manifest (default: <out-corpus>.manifest.json)");

  IntrinsicArgs intr;
  auto* intrinsic_cmd = app.add_subcommand("eval-intrinsic", "BLEU / BERTScore / BLEURT / perplexity over pairs");
  intrinsic_cmd->add_option("--pairs", intr.pairs, "JSONL of {augmentation, reference}")->required();
  intr.scorer_opt = intrinsic_cmd->add_option("--scorer", intr.scorer, "http://host:port of /score");
  intrinsic_cmd->add_option("--embedding", intr.embedding, "none | toy")
      ->check(CLI::IsMember({"none", "toy"}))
      ->default_str("none");
  intrinsic_cmd->add_option("--embedding-dim", intr.embedding_dim, "Toy embedding dimension")->default_val(64);
  intrinsic_cmd->add_option("--embedding-seed", intr.embedding_seed, "Toy embedding seed")->default_val(0);
  intrinsic_cmd->add_option("--out-report", intr.out_report, "Also write the report here");

  MultiwozArgs mw;
  auto* multiwoz_cmd = app.add_subcommand("eval-extrinsic-multiwoz", "Inform / Success over episode traces");
  add_input(multiwoz_cmd, mw.input);
  multiwoz_cmd->add_option("--db", mw.db, "Venue database JSON")->required();
  multiwoz_cmd->add_option("--traces", mw.traces, "Episode traces JSONL")->required();
  multiwoz_cmd->add_option("--out-report", mw.out_report, "Also write the report here");

  SgdArgs sgd;
  auto* sgd_cmd = app.add_subcommand("eval-extrinsic-sgd", "SGD dialog-state-tracking metrics");
  sgd_cmd->add_option("--predictions", sgd.predictions, "Predicted frames JSONL")->required();
  sgd_cmd->add_option("--golds", sgd.golds, "Gold frames JSONL")->required();
  sgd_cmd->add_option("--out-report", sgd.out_report, "Also write the report here");

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args, augment_cmd);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::vector<const char*> argv;
  argv.reserve(expanded.size());
  for (const auto& a : expanded) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(validate_args, out);
    if (*stats_cmd) return cmd_stats(stats_args, out);
    if (*augment_cmd) return cmd_augment(aug, out);
    if (*intrinsic_cmd) return cmd_eval_intrinsic(intr, out);
    if (*multiwoz_cmd) return cmd_eval_multiwoz(mw, out);
    if (*sgd_cmd) return cmd_eval_sgd(sgd, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace dialogaug::cli
