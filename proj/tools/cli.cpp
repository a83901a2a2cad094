#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiment_config.hpp"
#include "lesion/archive.hpp"
#include "lesion/attribution.hpp"
#include "lesion/dataset.hpp"
#include "lesion/error.hpp"
#include "lesion/hyperopt.hpp"
#include "lesion/image_io.hpp"
#include "lesion/metrics.hpp"
#include "lesion/model_spec_io.hpp"
#include "lesion/probe.hpp"
#include "lesion/report_io.hpp"
#include "lesion/rng.hpp"
#include "lesion/stats.hpp"
#include "lesion/synth.hpp"
#include "lesion/trainer.hpp"
#include "lesion/transfer.hpp"

namespace lesion::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;

  void wrote(const fs::path& path) const { out << path.string() << "\n"; }
};

void prepare_out_dir(const fs::path& dir, bool overwrite) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw ConfigError("output path '" + dir.string() + "' is not a directory");
    if (!fs::is_empty(dir)) {
      if (!overwrite) {
        throw ConfigError("output directory '" + dir.string() + "' is not empty; pass --overwrite to replace it");
      }
      for (const auto& entry : fs::directory_iterator(dir)) fs::remove_all(entry.path());
    }
  }
  fs::create_directories(dir);
}

void emit(const Context& ctx, const fs::path& path, const std::string& text) {
  write_text(path, text);
  ctx.wrote(path);
}

std::string run_dir_name(std::size_t index, std::size_t n_runs) {
  const std::size_t digits = std::max<std::size_t>(2, std::to_string(n_runs - 1).size());
  std::string s = std::to_string(index);
  return "run_" + std::string(digits - std::min(digits, s.size()), '0') + s;
}

// Options shared by the experiment commands; values given on the command
// line override the config file.
struct ExperimentFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  bool overwrite = false;
  std::string data;
  std::string model_spec;
  std::size_t n_runs = 0;
  std::size_t workers = 0;
  double learning_rate = 0.0;
  std::size_t batch_size = 0;
  std::size_t max_epochs = 0;
  std::string monitor;
  std::vector<std::string> freeze;
  bool augment = false;
  bool no_augment = false;
  std::string from_archive;
  std::size_t synth_n = 0;
  double synth_positive_fraction = 0.0;
  std::string synth_domain;
  std::size_t height = 0;
  std::size_t width = 0;
  double threshold = 0.0;
  std::size_t budget = 0;
  std::size_t search_max_epochs = 0;

  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_experiment_flags(CLI::App* app, ExperimentFlags& f, bool multi_run, bool search) {
  f.opts["config"] = app->add_option("--config", f.config_path, "INI experiment config file")->check(CLI::ExistingFile);
  f.opts["seed"] = app->add_option("--seed", f.seed, "Global seed (required here or in the config)");
  f.opts["out"] = app->add_option("--out", f.out, "Output directory");
  app->add_flag("--overwrite", f.overwrite, "Replace a non-empty output directory");
  f.opts["data"] = app->add_option("--data", f.data, "Dataset directory (metadata.csv + images/); synthetic data when omitted");
  f.opts["model-spec"] = app->add_option("--model-spec", f.model_spec, "Model spec JSON; standard CNN when omitted");
  f.opts["learning-rate"] = app->add_option("--learning-rate", f.learning_rate, "Adam learning rate");
  f.opts["batch-size"] = app->add_option("--batch-size", f.batch_size, "Mini-batch size");
  f.opts["max-epochs"] = app->add_option("--max-epochs", f.max_epochs, "Maximum epochs per run");
  f.opts["monitor"] = app->add_option("--monitor", f.monitor, "Monitored quantity: valid_loss or valid_auroc");
  f.opts["freeze"] = app->add_option("--freeze", f.freeze, "Layer names kept fixed during training")->delimiter(',');
  f.opts["augment"] = app->add_flag("--augment", f.augment, "Enable training-time augmentation");
  f.opts["no-augment"] = app->add_flag("--no-augment", f.no_augment, "Disable training-time augmentation");
  f.opts["synth-n"] = app->add_option("--synth-n", f.synth_n, "Synthetic sample count");
  f.opts["synth-positive-fraction"] =
      app->add_option("--synth-positive-fraction", f.synth_positive_fraction, "Synthetic melanoma fraction");
  f.opts["synth-domain"] = app->add_option("--synth-domain", f.synth_domain, "Synthetic domain: target or source");
  f.opts["height"] = app->add_option("--height", f.height, "Image height");
  f.opts["width"] = app->add_option("--width", f.width, "Image width");
  f.opts["threshold"] = app->add_option("--threshold", f.threshold, "Decision threshold for accuracy and F1");
  if (multi_run || search) {
    f.opts["workers"] = app->add_option("--workers", f.workers, "Parallel worker threads");
  }
  if (multi_run) {
    f.opts["n-runs"] = app->add_option("--n-runs", f.n_runs, "Independent training runs");
  }
  if (search) {
    f.opts["budget"] = app->add_option("--budget", f.budget, "Number of random-search trials");
    f.opts["search-max-epochs"] =
        app->add_option("--search-max-epochs", f.search_max_epochs, "Maximum epochs per trial");
  }
}

void add_archive_flag(CLI::App* app, ExperimentFlags& f, bool required) {
  f.opts["from-archive"] = app->add_option("--from-archive", f.from_archive, "Pretrained weight archive");
  if (required) f.opts["from-archive"]->required();
}

ExperimentConfig resolve(const ExperimentFlags& f) {
  ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : read_experiment_config(f.config_path);
  if (f.given("seed")) c.seed = f.seed;
  if (f.given("out")) c.out = f.out;
  if (f.given("data")) c.data_dir = f.data;
  if (f.given("model-spec")) c.model_spec = f.model_spec;
  if (f.given("n-runs")) c.n_runs = f.n_runs;
  if (f.given("workers")) c.workers = f.workers;
  if (f.given("learning-rate")) c.train.learning_rate = f.learning_rate;
  if (f.given("batch-size")) c.train.batch_size = f.batch_size;
  if (f.given("max-epochs")) c.train.max_epochs = f.max_epochs;
  if (f.given("monitor")) c.train.monitor = parse_monitor(f.monitor);
  if (f.given("freeze")) c.train.frozen_layers = {f.freeze.begin(), f.freeze.end()};
  if (f.given("augment") && f.given("no-augment")) throw ConfigError("--augment and --no-augment conflict");
  if (f.given("augment")) c.augment = true;
  if (f.given("no-augment")) c.augment = false;
  if (f.given("from-archive")) c.from_archive = f.from_archive;
  if (f.given("synth-n")) c.synth_n = f.synth_n;
  if (f.given("synth-positive-fraction")) c.synth_positive_fraction = f.synth_positive_fraction;
  if (f.given("synth-domain")) {
    if (f.synth_domain == "target") c.synth_domain = SynthDomain::target;
    else if (f.synth_domain == "source") c.synth_domain = SynthDomain::source;
    else throw ConfigError("--synth-domain must be 'target' or 'source'");
  }
  if (f.given("height")) c.height = f.height;
  if (f.given("width")) c.width = f.width;
  if (f.given("threshold")) c.threshold = f.threshold;
  if (f.given("budget")) c.search_budget = f.budget;
  if (f.given("search-max-epochs")) c.search_max_epochs = f.search_max_epochs;
  if (!c.out) throw ConfigError("an output directory is required (--out or [run] out)");
  c.validate();
  c.train.seed = *c.seed;
  return c;
}

ModelSpec resolve_spec(const ExperimentConfig& c) {
  if (c.model_spec) return read_model_spec(*c.model_spec);
  return standard_cnn_spec(c.cnn, c.height, c.width);
}

std::vector<Sample> load_data(const ExperimentConfig& c, const ModelSpec& spec) {
  const std::size_t h = spec.input_shape[1], w = spec.input_shape[2];
  if (c.data_dir) return ingest(*c.data_dir / "images", *c.data_dir / "metadata.csv", {h, w});
  const std::uint64_t synth_seed = c.synth_seed.value_or(derive_seed({*c.seed, hash_string("data")}));
  return synth_generate(c.synth_n, c.synth_positive_fraction, synth_seed, {h, w, c.synth_domain});
}

std::vector<Sample> load_dir(const fs::path& dir, const ModelSpec& spec) {
  if (!fs::is_directory(dir)) throw IoError("data directory '" + dir.string() + "' does not exist");
  return ingest(dir / "images", dir / "metadata.csv", {spec.input_shape[1], spec.input_shape[2]});
}

std::vector<Sample> partition(const std::vector<Sample>& samples, const std::string& split_path,
                              const std::string& which) {
  if (split_path.empty()) {
    if (which != "all" && which != "test") throw ConfigError("--partition needs --split");
    return samples;
  }
  const DatasetSplit s = split_from_json(read_text(split_path));
  if (which == "train") return select(samples, s.train);
  if (which == "valid") return select(samples, s.valid);
  if (which == "test") return select(samples, s.test);
  if (which == "all") return samples;
  throw ConfigError("--partition must be train, valid, test or all");
}

std::string epoch_log_text(const std::vector<EpochRecord>& log) {
  std::string text;
  for (const EpochRecord& r : log) text += epoch_record_to_json(r) + "\n";
  return text;
}

struct Prepared {
  ExperimentConfig config;
  ModelSpec spec;
  std::vector<Sample> train, valid, test;
  fs::path out;
};

Prepared prepare_experiment(const Context& ctx, const ExperimentFlags& flags) {
  Prepared p{resolve(flags), {}, {}, {}, {}, {}};
  p.spec = resolve_spec(p.config);
  p.spec.validate();
  p.out = *p.config.out;
  const std::vector<Sample> samples = load_data(p.config, p.spec);
  const DatasetSplit s = split(samples, derive_seed({*p.config.seed, hash_string("split")}));
  p.train = select(samples, s.train);
  p.valid = select(samples, s.valid);
  p.test = select(samples, s.test);
  prepare_out_dir(p.out, flags.overwrite);
  emit(ctx, p.out / "config.ini", experiment_config_to_ini(p.config));
  emit(ctx, p.out / "spec.json", model_spec_to_json(p.spec));
  emit(ctx, p.out / "split.json", split_to_json(s));
  return p;
}

std::optional<AugmentationPolicy> policy_of(const ExperimentConfig& c) {
  if (!c.augment) return std::nullopt;
  AugmentationPolicy policy = c.augmentation;
  policy.seed = *c.seed;
  return policy;
}

int cmd_synth_data(const Context& ctx, std::size_t n, double fraction, std::uint64_t seed, const std::string& out,
                   std::size_t height, std::size_t width, const std::string& domain, bool overwrite) {
  SynthOptions options{height, width, SynthDomain::target};
  if (domain == "source") options.domain = SynthDomain::source;
  else if (domain != "target") throw ConfigError("--domain must be 'target' or 'source'");
  const std::vector<Sample> samples = synth_generate(n, fraction, seed, options);
  prepare_out_dir(out, overwrite);
  write_dataset(out, samples);
  ctx.wrote(fs::path(out) / "metadata.csv");
  ctx.wrote(fs::path(out) / "images");
  return kExitOk;
}

int cmd_pretrain(const Context& ctx, const ExperimentFlags& flags) {
  Prepared p = prepare_experiment(ctx, flags);
  Model model = p.config.from_archive
                    ? load_with_new_head(WeightArchive::read(*p.config.from_archive), p.spec, *p.config.seed)
                    : build(p.spec, *p.config.seed);
  const RunResult result = fit(model, p.train, p.valid, p.config.train, policy_of(p.config));
  result.best_weights.write(p.out / "model.lsnb");
  ctx.wrote(p.out / "model.lsnb");
  emit(ctx, p.out / "epoch_log.jsonl", epoch_log_text(result.epoch_log));
  emit(ctx, p.out / "report.json", metrics_to_json(evaluate_model(model, p.test, p.config.threshold)));
  return kExitOk;
}

int cmd_multi_run(const Context& ctx, const ExperimentFlags& flags, bool finetune) {
  Prepared p = prepare_experiment(ctx, flags);
  MultiRunOptions options;
  options.n_runs = p.config.n_runs;
  options.workers = p.config.workers;
  options.augmentation = policy_of(p.config);
  options.threshold = p.config.threshold;
  if (finetune) {
    if (!p.config.from_archive) throw ConfigError("finetune requires --from-archive");
    options.transfer = WeightArchive::read(*p.config.from_archive);
    // Surfaces an archive/spec mismatch once, before any run starts.
    (void)load_with_new_head(*options.transfer, p.spec, *p.config.seed);
  }
  const std::vector<RunOutcome> outcomes =
      multi_run(p.spec, p.train, p.valid, p.test, p.config.train, options);

  std::vector<MetricsReport> reports;
  std::size_t failures = 0;
  for (const RunOutcome& o : outcomes) {
    const fs::path dir = p.out / run_dir_name(o.run_index, outcomes.size());
    fs::create_directories(dir);
    if (!o.ok()) {
      ++failures;
      emit(ctx, dir / "error.txt", o.error + "\n");
      ctx.err << "run " << o.run_index << " failed: " << o.error << "\n";
      continue;
    }
    o.result->best_weights.write(dir / "model.lsnb");
    ctx.wrote(dir / "model.lsnb");
    emit(ctx, dir / "epoch_log.jsonl", epoch_log_text(o.result->epoch_log));
    emit(ctx, dir / "report.json", metrics_to_json(*o.report));
    reports.push_back(*o.report);
  }
  if (reports.size() >= 2) emit(ctx, p.out / "aggregate.json", aggregate_to_json(aggregate(reports)));
  return failures == 0 ? kExitOk : kExitData;
}

std::vector<MetricsReport> read_run_reports(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("run directory '" + dir.string() + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path report = entry.path() / "report.json";
    if (entry.is_directory() && entry.path().filename().string().rfind("run_", 0) == 0 && fs::exists(report)) {
      files.push_back(report);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2) {
    throw DataError("'" + dir.string() + "' holds " + std::to_string(files.size()) + " run reports, need at least 2");
  }
  std::vector<MetricsReport> reports;
  for (const fs::path& f : files) {
    try {
      reports.push_back(metrics_from_json(read_text(f)));
    } catch (const DataError& e) {
      throw DataError(f.string() + ": " + e.what());
    }
  }
  return reports;
}

int cmd_compare(const Context& ctx, const std::string& a_dir, const std::string& b_dir, const std::string& metric,
                bool paired, const std::string& out_path) {
  const std::vector<MetricsReport> a = read_run_reports(a_dir);
  const std::vector<MetricsReport> b = read_run_reports(b_dir);
  const std::vector<double> va = metric_values(a, metric);
  const std::vector<double> vb = metric_values(b, metric);
  if (paired && va.size() != vb.size()) throw DataError("paired comparison needs equal run counts");
  const SignificanceResult sig = paired ? paired_t_test(va, vb) : welch_t_test(va, vb);
  json j;
  j["metric"] = metric;
  j["test"] = paired ? "paired" : "welch";
  j["a"] = json::parse(aggregate_to_json(aggregate(a)));
  j["b"] = json::parse(aggregate_to_json(aggregate(b)));
  j["significance"] = json::parse(significance_to_json(sig, metric));
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    ctx.out << text;
  } else {
    emit(ctx, out_path, text);
  }
  return sig.p_one_tailed < 0.05 ? kExitOk : kExitNotSignificant;
}

struct Scored {
  std::vector<double> scores;
  std::vector<int> labels;
};

Scored score(const std::string& archive, const std::string& spec_path, const std::string& data,
             const std::string& split_path, const std::string& which) {
  const ModelSpec spec = read_model_spec(spec_path);
  const Model model = load_model(WeightArchive::read(archive), spec);
  const std::vector<Sample> samples = partition(load_dir(data, spec), split_path, which);
  Scored s{predict_proba(model, samples), {}};
  for (const Sample& x : samples) s.labels.push_back(x.label);
  return s;
}

std::string sanitize(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '_';
  }
  return out;
}

struct AttributeFlags {
  std::string archive, spec, data, split, partition = "test", out, mode = "absolute", target = "logit",
                                          format = "pgm";
  std::vector<std::string> ids;
  std::size_t limit = 8;
  std::size_t steps = 256;
  bool dump_phi = false;
  bool overwrite = false;
};

int cmd_attribute(const Context& ctx, const AttributeFlags& f) {
  const ModelSpec spec = read_model_spec(f.spec);
  const Model model = load_model(WeightArchive::read(f.archive), spec);
  const std::vector<Sample> pool = partition(load_dir(f.data, spec), f.split, f.partition);
  std::vector<Sample> chosen;
  if (!f.ids.empty()) {
    chosen = select(pool, f.ids);
    if (chosen.size() != f.ids.size()) throw DataError("some --ids are not in the selected partition");
  } else {
    chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(std::min(f.limit, pool.size())));
  }
  RenderMode mode = RenderMode::absolute;
  if (f.mode == "signed") mode = RenderMode::signed_values;
  else if (f.mode != "absolute") throw ConfigError("--mode must be absolute or signed");
  IntegratedGradientsOptions options;
  options.steps = f.steps;
  if (f.target == "probability") options.target = AttributionTarget::probability;
  else if (f.target != "logit") throw ConfigError("--target must be logit or probability");
  if (f.format != "pgm" && f.format != "png") throw ConfigError("--format must be pgm or png");

  prepare_out_dir(f.out, f.overwrite);
  json summary = json::array();
  WeightArchive phis;
  for (const Sample& s : chosen) {
    const AttributionMap map = integrated_gradients(model, s, options);
    const Tensor gray = render_map(map, mode);
    const fs::path path = fs::path(f.out) / (sanitize(s.id) + "." + f.format);
    if (f.format == "pgm") {
      write_pgm(path, gray);
    } else {
      const Tensor rgb = Tensor({3, gray.dim(0), gray.dim(1)}, [&] {
        std::vector<double> v;
        for (int c = 0; c < 3; ++c) v.insert(v.end(), gray.values().begin(), gray.values().end());
        return v;
      }());
      write_png(path, rgb);
    }
    ctx.wrote(path);
    const double delta = map.output_at_input - map.output_at_baseline;
    json e;
    e["id"] = s.id;
    e["label"] = s.label;
    e["output_at_input"] = map.output_at_input;
    e["output_at_baseline"] = map.output_at_baseline;
    e["completeness_gap"] = map.completeness_gap;
    e["relative_gap"] = delta != 0.0 ? map.completeness_gap / std::abs(delta) : 0.0;
    e["steps_used"] = map.steps_used;
    summary.push_back(e);
    if (f.dump_phi) phis.add(s.id, map.phi);
  }
  json j;
  j["target"] = f.target;
  j["mode"] = f.mode;
  j["baseline"] = "black";
  j["samples"] = summary;
  emit(ctx, fs::path(f.out) / "summary.json", j.dump(2) + "\n");
  if (f.dump_phi) {
    phis.write(fs::path(f.out) / "phi.lsnb");
    ctx.wrote(fs::path(f.out) / "phi.lsnb");
  }
  return kExitOk;
}

int cmd_search(const Context& ctx, const ExperimentFlags& flags) {
  Prepared p = prepare_experiment(ctx, flags);
  const std::size_t h = p.spec.input_shape[1], w = p.spec.input_shape[2];
  TrainConfig base = p.config.train;
  base.max_epochs = p.config.search_max_epochs;
  const Objective objective = [&](const Configuration& trial) {
    const ModelSpec spec = standard_cnn_spec(cnn_config_from(trial), h, w);
    const TrainConfig tc = train_config_from(trial, base);
    Model model = build(spec, tc.seed);
    const RunResult r = fit(model, p.train, p.valid, tc, policy_of(p.config));
    return r.epoch_log.at(r.best_epoch - 1).valid_auroc;
  };
  SearchOptions options;
  options.seed = *p.config.seed;
  options.workers = p.config.workers;
  options.trial_log = p.out / "trials.jsonl";
  const std::vector<Trial> ranked = search(SearchSpace::standard_cnn(), p.config.search_budget, objective, options);
  ctx.wrote(p.out / "trials.jsonl");
  json j = json::array();
  for (const Trial& t : ranked) j.push_back(json::parse(trial_to_json(t)));
  emit(ctx, p.out / "ranking.json", j.dump(2) + "\n");
  return kExitOk;
}

int cmd_make_probes(const Context& ctx, std::size_t n, std::uint64_t seed, const std::string& spec_path,
                    std::vector<std::size_t> shape, const std::string& out) {
  if (!spec_path.empty()) {
    const auto s = read_model_spec(spec_path).input_shape;
    shape.assign(s.begin(), s.end());
  }
  if (shape.size() != 3) throw ConfigError("--shape needs three extents C,H,W");
  if (n < 1) throw ConfigError("--n must be >= 1");
  write_probes(out, random_probes(n, shape, seed));
  ctx.wrote(out);
  return kExitOk;
}

int cmd_probe(const Context& ctx, const std::string& archive, const std::string& spec_path, const std::string& probes,
              const std::string& out) {
  const ModelSpec spec = read_model_spec(spec_path);
  const Model model = load_model(WeightArchive::read(archive), spec);
  const std::vector<double> logits = forward_probes(model, read_probes(probes));
  json j;
  j["logits"] = logits;
  emit(ctx, out, j.dump() + "\n");
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Context ctx{out, err};
  CLI::App app{"Melanoma classification benchmark: training, transfer, evaluation and attribution", "lesionbench"};
  app.require_subcommand(1);

  // synth-data
  std::size_t synth_n = 0, synth_h = 24, synth_w = 24;
  double synth_frac = 0.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out, synth_domain = "target";
  bool synth_overwrite = false;
  CLI::App* synth = app.add_subcommand("synth-data", "Write a synthetic dataset in the ingest layout");
  synth->add_option("--n", synth_n, "Number of samples")->required();
  synth->add_option("--positive-fraction", synth_frac, "Fraction of melanoma samples")->required();
  synth->add_option("--seed", synth_seed, "Generator seed")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--height", synth_h, "Image height")->capture_default_str();
  synth->add_option("--width", synth_w, "Image width")->capture_default_str();
  synth->add_option("--domain", synth_domain, "target or source")->capture_default_str();
  synth->add_flag("--overwrite", synth_overwrite, "Replace a non-empty output directory");

  // pretrain / train / finetune / search
  ExperimentFlags pre_f, train_f, fine_f, search_f;
  CLI::App* pretrain = app.add_subcommand("pretrain", "Train one model and save its weight archive");
  add_experiment_flags(pretrain, pre_f, false, false);
  add_archive_flag(pretrain, pre_f, false);
  CLI::App* train = app.add_subcommand("train", "Independent runs from scratch");
  add_experiment_flags(train, train_f, true, false);
  CLI::App* finetune = app.add_subcommand("finetune", "Independent runs starting from a pretrained archive");
  add_experiment_flags(finetune, fine_f, true, false);
  add_archive_flag(finetune, fine_f, true);
  CLI::App* search_cmd = app.add_subcommand("search", "Random hyperparameter search");
  add_experiment_flags(search_cmd, search_f, false, true);

  // compare
  std::string cmp_a, cmp_b, cmp_metric = "auroc", cmp_out;
  bool cmp_paired = false;
  CLI::App* compare = app.add_subcommand("compare", "One-tailed t-test of run directory b against a");
  compare->add_option("--a", cmp_a, "Baseline run directory")->required();
  compare->add_option("--b", cmp_b, "Candidate run directory")->required();
  compare->add_option("--metric", cmp_metric, "accuracy, auroc, auprc or f1")->capture_default_str();
  compare->add_flag("--paired", cmp_paired, "Paired test for seed-matched runs");
  compare->add_option("--out", cmp_out, "Write the result here instead of stdout");

  // evaluate / curves
  std::string ev_archive, ev_spec, ev_data, ev_split, ev_partition = "test", ev_out;
  double ev_threshold = 0.5;
  auto add_eval_flags = [&](CLI::App* a) {
    a->add_option("--archive", ev_archive, "Trained weight archive")->required();
    a->add_option("--spec", ev_spec, "Model spec JSON")->required();
    a->add_option("--data", ev_data, "Dataset directory")->required();
    a->add_option("--split", ev_split, "Split JSON selecting the partition");
    a->add_option("--partition", ev_partition, "train, valid, test or all")->capture_default_str();
  };
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Metrics report for a trained archive");
  add_eval_flags(evaluate_cmd);
  evaluate_cmd->add_option("--threshold", ev_threshold, "Decision threshold")->capture_default_str();
  evaluate_cmd->add_option("--out", ev_out, "Report file")->required();
  CLI::App* curves = app.add_subcommand("curves", "ROC and precision-recall point files");
  add_eval_flags(curves);
  bool curves_overwrite = false;
  curves->add_option("--out", ev_out, "Output directory")->required();
  curves->add_flag("--overwrite", curves_overwrite, "Replace a non-empty output directory");

  // attribute
  AttributeFlags at;
  CLI::App* attribute = app.add_subcommand("attribute", "Integrated-gradients maps against a black baseline");
  attribute->add_option("--archive", at.archive, "Trained weight archive")->required();
  attribute->add_option("--spec", at.spec, "Model spec JSON")->required();
  attribute->add_option("--data", at.data, "Dataset directory")->required();
  attribute->add_option("--split", at.split, "Split JSON selecting the partition");
  attribute->add_option("--partition", at.partition, "train, valid, test or all")->capture_default_str();
  attribute->add_option("--ids", at.ids, "Sample ids to attribute")->delimiter(',');
  attribute->add_option("--limit", at.limit, "Samples taken from the partition when --ids is absent")
      ->capture_default_str();
  attribute->add_option("--steps", at.steps, "Riemann steps")->capture_default_str();
  attribute->add_option("--mode", at.mode, "absolute or signed")->capture_default_str();
  attribute->add_option("--target", at.target, "logit or probability")->capture_default_str();
  attribute->add_option("--format", at.format, "pgm or png")->capture_default_str();
  attribute->add_flag("--dump-phi", at.dump_phi, "Also write raw attributions as phi.lsnb");
  attribute->add_option("--out", at.out, "Output directory")->required();
  attribute->add_flag("--overwrite", at.overwrite, "Replace a non-empty output directory");

  // make-probes / probe
  std::size_t mp_n = 16;
  std::uint64_t mp_seed = 0;
  std::string mp_spec, mp_out;
  std::vector<std::size_t> mp_shape;
  CLI::App* make_probes = app.add_subcommand("make-probes", "Write random probe inputs");
  make_probes->add_option("--n", mp_n, "Number of probes")->capture_default_str();
  make_probes->add_option("--seed", mp_seed, "Probe seed")->required();
  auto* mp_spec_opt = make_probes->add_option("--spec", mp_spec, "Take the image shape from this model spec");
  make_probes->add_option("--shape", mp_shape, "Image shape C,H,W")->delimiter(',')->excludes(mp_spec_opt);
  make_probes->add_option("--out", mp_out, "Probe file")->required();
  std::string pr_archive, pr_spec, pr_probes, pr_out;
  CLI::App* probe = app.add_subcommand("probe", "Eval-mode logits for a probe file (static features zero)");
  probe->add_option("--archive", pr_archive, "Weight archive")->required();
  probe->add_option("--spec", pr_spec, "Model spec JSON")->required();
  probe->add_option("--probes", pr_probes, "Probe file")->required();
  probe->add_option("--out", pr_out, "Logits JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, err);
    out << help.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      return cmd_synth_data(ctx, synth_n, synth_frac, synth_seed, synth_out, synth_h, synth_w, synth_domain,
                            synth_overwrite);
    }
    if (pretrain->parsed()) return cmd_pretrain(ctx, pre_f);
    if (train->parsed()) return cmd_multi_run(ctx, train_f, false);
    if (finetune->parsed()) return cmd_multi_run(ctx, fine_f, true);
    if (search_cmd->parsed()) return cmd_search(ctx, search_f);
    if (compare->parsed()) return cmd_compare(ctx, cmp_a, cmp_b, cmp_metric, cmp_paired, cmp_out);
    if (evaluate_cmd->parsed()) {
      const Scored s = score(ev_archive, ev_spec, ev_data, ev_split, ev_partition);
      emit(ctx, ev_out, metrics_to_json(evaluate_scores(s.scores, s.labels, ev_threshold)));
      return kExitOk;
    }
    if (curves->parsed()) {
      const Scored s = score(ev_archive, ev_spec, ev_data, ev_split, ev_partition);
      const std::vector<CurvePoint> roc = roc_points(s.scores, s.labels);
      const std::vector<CurvePoint> pr = pr_points(s.scores, s.labels);
      prepare_out_dir(ev_out, curves_overwrite);
      emit(ctx, fs::path(ev_out) / "roc.csv", curve_to_csv(roc, "fpr", "tpr"));
      emit(ctx, fs::path(ev_out) / "pr.csv", curve_to_csv(pr, "recall", "precision"));
      json j;
      j["auroc"] = auroc(s.scores, s.labels);
      j["auprc"] = auprc(s.scores, s.labels);
      j["tpr_at_fpr_0.1"] = tpr_at_fpr(roc, 0.1);
      emit(ctx, fs::path(ev_out) / "summary.json", j.dump(2) + "\n");
      return kExitOk;
    }
    if (attribute->parsed()) return cmd_attribute(ctx, at);
    if (make_probes->parsed()) return cmd_make_probes(ctx, mp_n, mp_seed, mp_spec, mp_shape, mp_out);
    if (probe->parsed()) return cmd_probe(ctx, pr_archive, pr_spec, pr_probes, pr_out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace lesion::cli
