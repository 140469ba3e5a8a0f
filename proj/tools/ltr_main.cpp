// Command-line entry point: gen / train / eval / ablate / sweep.
// Exit codes: 0 success, 1 usage or config error, 2 data or runtime error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltr/dataset.hpp"
#include "ltr/errors.hpp"
#include "ltr/metrics.hpp"
#include "ltr/scorer.hpp"
#include "ltr/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// config file handling

struct DataSpec {
  // single-file mode
  std::string path;
  std::array<double, 3> fractions{0.8, 0.1, 0.1};
  std::uint64_t split_seed = 1;
  bool single_file = false;
  // explicit mode
  std::string train_path, valid_path, test_path;
};

struct RunConfig {
  ltr::TrainConfig train;
  DataSpec data;
  std::string output_dir = ".";
  json resolved;  // canonical document for hashing
};

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ltr::ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

std::string resolve_path(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path.string() : (base / path).string();
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ltr::ConfigError(std::string("bad value for '") + key + "'");
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ltr::ConfigError("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ltr::ConfigError(path + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ltr::ConfigError(path + ": expected an object");
  require_keys(doc,
               {"loss", "weights", "kappa", "negatives_per_query",
                "batch_size", "epochs", "lr", "seed",
                "shuffle_negatives_per_epoch", "approxndcg_tau", "patience",
                "validation_metric", "scorer", "data", "output_dir"},
               "config");

  RunConfig cfg;
  const fs::path base = fs::absolute(fs::path(path)).parent_path();

  if (doc.contains("loss")) {
    const auto loss =
        ltr::loss_kind_from_string(doc["loss"].get<std::string>());
    if (!loss) {
      throw ltr::ConfigError("unknown loss '" +
                             doc["loss"].get<std::string>() + "' (valid: " +
                             ltr::loss_kind_names() + ")");
    }
    cfg.train.loss = *loss;
  }
  if (doc.contains("weights")) {
    const json& w = doc["weights"];
    require_keys(w, {"c1", "c2", "c3", "c4"}, "weights");
    read_field(w, "c1", cfg.train.weights.c1);
    read_field(w, "c2", cfg.train.weights.c2);
    read_field(w, "c3", cfg.train.weights.c3);
    read_field(w, "c4", cfg.train.weights.c4);
  }
  read_field(doc, "kappa", cfg.train.kappa);
  read_field(doc, "negatives_per_query", cfg.train.negatives_per_query);
  read_field(doc, "batch_size", cfg.train.batch_size);
  read_field(doc, "epochs", cfg.train.epochs);
  read_field(doc, "lr", cfg.train.lr);
  read_field(doc, "seed", cfg.train.seed);
  read_field(doc, "shuffle_negatives_per_epoch",
             cfg.train.shuffle_negatives_per_epoch);
  read_field(doc, "approxndcg_tau", cfg.train.approxndcg_tau);
  read_field(doc, "patience", cfg.train.patience);
  if (doc.contains("validation_metric")) {
    const auto metric = ltr::val_metric_from_string(
        doc["validation_metric"].get<std::string>());
    if (!metric) {
      throw ltr::ConfigError(
          "unknown validation_metric (valid: mrr, ndcg, map)");
    }
    cfg.train.validation_metric = *metric;
  }
  if (doc.contains("scorer")) {
    const json& sc = doc["scorer"];
    require_keys(sc, {"kind", "hidden_dims"}, "scorer");
    if (sc.contains("kind")) {
      const auto kind =
          ltr::scorer_kind_from_string(sc["kind"].get<std::string>());
      if (!kind) {
        throw ltr::ConfigError("unknown scorer kind (valid: linear, mlp)");
      }
      cfg.train.scorer_kind = *kind;
      if (*kind == ltr::ScorerKind::linear) cfg.train.hidden_dims.clear();
    }
    if (sc.contains("hidden_dims")) {
      cfg.train.hidden_dims =
          sc["hidden_dims"].get<std::vector<std::size_t>>();
    }
  }

  if (!doc.contains("data")) throw ltr::ConfigError("config needs 'data'");
  const json& data = doc["data"];
  require_keys(data, {"path", "split", "train", "valid", "test"}, "data");
  if (data.contains("path")) {
    cfg.data.single_file = true;
    cfg.data.path = resolve_path(base, data["path"].get<std::string>());
    if (data.contains("split")) {
      const json& sp = data["split"];
      require_keys(sp, {"fractions", "seed"}, "data.split");
      if (sp.contains("fractions")) {
        const auto f = sp["fractions"].get<std::vector<double>>();
        if (f.size() != 3) {
          throw ltr::ConfigError("data.split.fractions needs 3 entries");
        }
        cfg.data.fractions = {f[0], f[1], f[2]};
      }
      read_field(sp, "seed", cfg.data.split_seed);
    }
  } else {
    if (!data.contains("train") || !data.contains("valid")) {
      throw ltr::ConfigError("data needs either 'path' or 'train'+'valid'");
    }
    cfg.data.train_path = resolve_path(base, data["train"].get<std::string>());
    cfg.data.valid_path = resolve_path(base, data["valid"].get<std::string>());
    if (data.contains("test")) {
      cfg.data.test_path = resolve_path(base, data["test"].get<std::string>());
    }
  }

  if (doc.contains("output_dir")) {
    cfg.output_dir = resolve_path(base, doc["output_dir"].get<std::string>());
  } else {
    cfg.output_dir = base.string();
  }
  return cfg;
}

// canonical resolved document (nlohmann objects serialize key-sorted)
json resolved_config_json(const char* command, const RunConfig& cfg) {
  json doc;
  doc["command"] = command;
  doc["loss"] = ltr::to_string(cfg.train.loss);
  doc["weights"] = {{"c1", cfg.train.weights.c1},
                    {"c2", cfg.train.weights.c2},
                    {"c3", cfg.train.weights.c3},
                    {"c4", cfg.train.weights.c4}};
  doc["kappa"] = cfg.train.kappa;
  doc["negatives_per_query"] = cfg.train.negatives_per_query;
  doc["batch_size"] = cfg.train.batch_size;
  doc["epochs"] = cfg.train.epochs;
  doc["lr"] = cfg.train.lr;
  doc["seed"] = cfg.train.seed;
  doc["shuffle_negatives_per_epoch"] = cfg.train.shuffle_negatives_per_epoch;
  doc["approxndcg_tau"] = cfg.train.approxndcg_tau;
  doc["patience"] = cfg.train.patience;
  doc["validation_metric"] = ltr::to_string(cfg.train.validation_metric);
  doc["scorer"] = {{"kind", ltr::to_string(cfg.train.scorer_kind)},
                   {"hidden_dims", cfg.train.hidden_dims}};
  if (cfg.data.single_file) {
    doc["data"] = {{"path", cfg.data.path},
                   {"split",
                    {{"fractions", cfg.data.fractions},
                     {"seed", cfg.data.split_seed}}}};
  } else {
    doc["data"] = {{"train", cfg.data.train_path},
                   {"valid", cfg.data.valid_path},
                   {"test", cfg.data.test_path}};
  }
  return doc;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const json& resolved) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t v = fnv1a64(resolved.dump());
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

struct LoadedData {
  ltr::Dataset train, valid, test;
  bool has_test = false;
  std::string truth_source;  // letor path whose .truth sidecar covers test
};

LoadedData load_data(const DataSpec& spec, bool need_test) {
  LoadedData out;
  if (spec.single_file) {
    const ltr::Dataset full = ltr::load_letor(spec.path);
    const auto parts = ltr::split(full, spec.fractions, spec.split_seed);
    out.train = parts[0];
    out.valid = parts[1];
    out.test = parts[2];
    out.has_test = !out.test.groups.empty();
    out.truth_source = spec.path;
  } else {
    out.train = ltr::load_letor(spec.train_path);
    out.valid = ltr::load_letor(spec.valid_path);
    if (!spec.test_path.empty()) {
      out.test = ltr::load_letor(spec.test_path);
      out.has_test = true;
      out.truth_source = spec.test_path;
    }
  }
  if (need_test && !out.has_test) {
    throw ltr::ConfigError("this command needs a test set (data.test or a "
                           "nonzero test fraction)");
  }
  return out;
}

std::string iso_timestamp_from_env() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch == nullptr) return "";
  char buf[32];
  const std::time_t t =
      static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ltr::DataError("cannot create directory " + dir);
}

// ---------------------------------------------------------------------------
// subcommand state

struct GenArgs {
  std::size_t queries = 200;
  std::size_t docs = 100;
  std::size_t features = 10;
  std::size_t relevant = 5;
  double mislabel = 0.0;
  double noise = 0.1;
  std::uint64_t seed = 1;
  std::string out = ".";
};

struct EvalArgs {
  std::string model;
  std::string data;
  std::string labels = "train";
  std::size_t ndcg_cutoff = 0;
  std::string out = ".";
};

struct CommonOverrides {
  std::string config_path;
  std::string loss;
  std::size_t kappa = 0;
  std::size_t negatives = 0;
  std::size_t batch_size = 0;
  std::size_t epochs = 0;
  double lr = 0.0;
  std::uint64_t seed = 0;
  double tau = 0.0;
  std::size_t patience = 0;
  std::string val_metric;
  std::string out;
  std::string labels = "train";
  std::string kappa_list;  // sweep only
};

void apply_overrides(CLI::App* cmd, const CommonOverrides& args,
                     RunConfig& cfg) {
  if (cmd->count("--loss") > 0) {
    const auto loss = ltr::loss_kind_from_string(args.loss);
    if (!loss) {
      throw ltr::ConfigError("unknown loss '" + args.loss + "' (valid: " +
                             ltr::loss_kind_names() + ")");
    }
    cfg.train.loss = *loss;
  }
  if (cmd->get_option_no_throw("--kappa") != nullptr &&
      cmd->count("--kappa") > 0 && args.kappa > 0) {
    cfg.train.kappa = args.kappa;
  }
  if (cmd->count("--negatives") > 0) {
    cfg.train.negatives_per_query = args.negatives;
  }
  if (cmd->count("--batch-size") > 0) cfg.train.batch_size = args.batch_size;
  if (cmd->count("--epochs") > 0) cfg.train.epochs = args.epochs;
  if (cmd->count("--lr") > 0) cfg.train.lr = args.lr;
  if (cmd->count("--seed") > 0) cfg.train.seed = args.seed;
  if (cmd->count("--tau") > 0) cfg.train.approxndcg_tau = args.tau;
  if (cmd->count("--patience") > 0) cfg.train.patience = args.patience;
  if (cmd->count("--shuffle-negatives") > 0) {
    cfg.train.shuffle_negatives_per_epoch = true;
  }
  if (cmd->count("--val-metric") > 0) {
    const auto metric = ltr::val_metric_from_string(args.val_metric);
    if (!metric) {
      throw ltr::ConfigError("unknown validation metric '" + args.val_metric +
                             "' (valid: mrr, ndcg, map)");
    }
    cfg.train.validation_metric = *metric;
  }
  if (cmd->count("--out") > 0) cfg.output_dir = args.out;
}

ltr::LabelSource label_source_of(const std::string& name) {
  if (name == "train") return ltr::LabelSource::training_labels;
  if (name == "truth") return ltr::LabelSource::ground_truth_sidecar;
  throw ltr::ConfigError("unknown label mode '" + name +
                         "' (valid: train, truth)");
}

// test-set labels plus the truth table when sidecar mode is requested
struct TestLabels {
  ltr::LabelSource source = ltr::LabelSource::training_labels;
  ltr::TruthTable truth;
};

TestLabels test_labels_of(const std::string& mode,
                          const std::string& truth_source) {
  TestLabels out;
  out.source = label_source_of(mode);
  if (out.source == ltr::LabelSource::ground_truth_sidecar) {
    out.truth = ltr::load_truth(truth_source + ".truth");
  }
  return out;
}

// ---------------------------------------------------------------------------
// commands

int cmd_gen(const GenArgs& args) {
  ltr::SynthConfig cfg;
  cfg.num_queries = args.queries;
  cfg.docs_per_query = args.docs;
  cfg.feature_dim = args.features;
  cfg.true_relevant_per_query = args.relevant;
  cfg.mislabel_fraction = args.mislabel;
  cfg.noise_std = args.noise;
  cfg.seed = args.seed;

  fs::path out(args.out);
  if (args.out.ends_with('/') || fs::is_directory(out)) {
    out /= "synth.letor";
  }
  if (out.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
    if (ec) {
      throw ltr::DataError("cannot create " + out.parent_path().string());
    }
  }

  const ltr::Dataset ds = ltr::generate_synthetic(cfg);
  ltr::save_letor(ds, out.string());
  ltr::save_truth(ds, out.string() + ".truth");
  std::cout << "wrote " << out.string() << '\n'
            << "wrote " << out.string() << ".truth\n";
  return 0;
}

int cmd_train(CLI::App* cmd, const CommonOverrides& args) {
  RunConfig cfg = load_run_config(args.config_path);
  apply_overrides(cmd, args, cfg);
  cfg.resolved = resolved_config_json("train", cfg);
  const std::string hash = config_hash(cfg.resolved);

  const LoadedData data = load_data(cfg.data, false);
  const auto start = std::chrono::steady_clock::now();
  const ltr::TrainResult result =
      ltr::train(cfg.train, data.train, data.valid);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  ensure_dir(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  ltr::save_checkpoint(result.scorer, (dir / "checkpoint.json").string());
  ltr::write_run_tsv(result.record, cfg.train.validation_metric,
                     (dir / "run.tsv").string(), hash);
  ltr::write_run_json(result.record, cfg.train.validation_metric,
                      (dir / "run.json").string(), hash);
  std::cout << "config=" << hash << " best_epoch=" << result.record.best_epoch
            << " best_val_" << ltr::to_string(cfg.train.validation_metric)
            << "=" << result.record.best_val << '\n';
  std::cerr << "trained " << result.record.epochs.size() << " epochs in "
            << seconds << " s\n";
  return 0;
}

int cmd_eval(const EvalArgs& args) {
  const ltr::Scorer scorer = ltr::load_checkpoint(args.model);
  const ltr::Dataset ds = ltr::load_letor(args.data);
  const TestLabels labels = test_labels_of(args.labels, args.data);

  json resolved;
  resolved["command"] = "eval";
  resolved["model"] = args.model;
  resolved["data"] = args.data;
  resolved["labels"] = args.labels;
  resolved["ndcg_cutoff"] = args.ndcg_cutoff;
  const std::string hash = config_hash(resolved);

  const std::optional<std::size_t> cutoff =
      args.ndcg_cutoff > 0 ? std::optional<std::size_t>(args.ndcg_cutoff)
                           : std::nullopt;
  ltr::EvalReport report = ltr::evaluate(
      scorer, ds, labels.source,
      labels.source == ltr::LabelSource::ground_truth_sidecar ? &labels.truth
                                                              : nullptr,
      cutoff);
  report.model_path = args.model;
  report.dataset_path = args.data;
  report.timestamp = iso_timestamp_from_env();

  ensure_dir(args.out);
  const fs::path dir(args.out);
  ltr::write_eval_tsv(report, (dir / "eval.tsv").string(), hash);
  ltr::write_eval_json(report, (dir / "eval.json").string(), hash);
  std::cout << "aggregate mrr=" << report.mean_mrr
            << " ndcg=" << report.mean_ndcg << " map=" << report.mean_map
            << " queries=" << report.query_count << '\n';
  return 0;
}

int cmd_ablate(CLI::App* cmd, const CommonOverrides& args) {
  RunConfig cfg = load_run_config(args.config_path);
  apply_overrides(cmd, args, cfg);
  cfg.resolved = resolved_config_json("ablate", cfg);
  cfg.resolved["labels"] = args.labels;
  const std::string hash = config_hash(cfg.resolved);

  const LoadedData data = load_data(cfg.data, true);
  const TestLabels labels = test_labels_of(args.labels, data.truth_source);
  const auto rows = ltr::ablate(
      cfg.train, data.train, data.valid, data.test, labels.source,
      labels.source == ltr::LabelSource::ground_truth_sidecar ? &labels.truth
                                                              : nullptr);

  ensure_dir(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  ltr::write_ablation_tsv(rows, (dir / "ablation.tsv").string(), hash);
  ltr::write_ablation_json(rows, (dir / "ablation.json").string(), hash);
  for (const auto& row : rows) {
    std::cout << row.mask[0] << ' ' << row.mask[1] << ' ' << row.mask[2] << ' '
              << row.mask[3] << " mrr=" << row.mrr << " ndcg=" << row.ndcg
              << " map=" << row.map << '\n';
  }
  return 0;
}

int cmd_sweep(CLI::App* cmd, const CommonOverrides& args) {
  RunConfig cfg = load_run_config(args.config_path);
  apply_overrides(cmd, args, cfg);

  std::vector<std::size_t> kappas;
  std::size_t pos = 0;
  const std::string& list = args.kappa_list;
  while (pos < list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string::npos) comma = list.size();
    const std::string token = list.substr(pos, comma - pos);
    try {
      const unsigned long value = std::stoul(token);
      if (value == 0) throw std::invalid_argument("zero");
      kappas.push_back(value);
    } catch (const std::exception&) {
      throw ltr::ConfigError("bad kappa '" + token + "' in --kappa list");
    }
    pos = comma + 1;
  }
  if (kappas.empty()) throw ltr::ConfigError("--kappa list is empty");

  cfg.resolved = resolved_config_json("sweep", cfg);
  cfg.resolved["kappas"] = kappas;
  cfg.resolved["labels"] = args.labels;
  const std::string hash = config_hash(cfg.resolved);

  const LoadedData data = load_data(cfg.data, true);
  const TestLabels labels = test_labels_of(args.labels, data.truth_source);
  const auto rows = ltr::sweep_pooling(
      cfg.train, kappas, data.train, data.valid, data.test, labels.source,
      labels.source == ltr::LabelSource::ground_truth_sidecar ? &labels.truth
                                                              : nullptr);

  ensure_dir(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  ltr::write_sweep_tsv(rows, (dir / "sweep.tsv").string(), hash);
  ltr::write_sweep_json(rows, (dir / "sweep.json").string(), hash);
  for (const auto& row : rows) {
    std::cout << "kappa=" << row.kappa << " mrr=" << row.mrr
              << " ndcg=" << row.ndcg << " map=" << row.map << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learning-to-rank toolkit: pooling-based and baseline "
               "listwise/pairwise losses over LETOR feature vectors"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen->add_option("--queries", gen_args.queries, "number of queries");
  gen->add_option("--docs", gen_args.docs, "documents per query");
  gen->add_option("--features", gen_args.features, "feature dimension");
  gen->add_option("--relevant", gen_args.relevant,
                  "truly relevant documents per query");
  gen->add_option("--mislabel", gen_args.mislabel,
                  "fraction of relevant docs labeled 0, in [0,1)");
  gen->add_option("--noise", gen_args.noise, "utility noise std");
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--out", gen_args.out,
                  "output file or directory (default .)");

  auto add_common = [](CLI::App* cmd, CommonOverrides& args,
                       bool with_labels, bool with_kappa = true) {
    cmd->add_option("--config", args.config_path, "JSON run config")
        ->required();
    cmd->add_option("--loss", args.loss, "override loss");
    if (with_kappa) {
      cmd->add_option("--kappa", args.kappa, "override pooling window size");
    }
    cmd->add_option("--negatives", args.negatives,
                    "override negatives per query");
    cmd->add_option("--batch-size", args.batch_size, "override batch size");
    cmd->add_option("--epochs", args.epochs, "override epoch count");
    cmd->add_option("--lr", args.lr, "override learning rate");
    cmd->add_option("--seed", args.seed, "override seed");
    cmd->add_option("--tau", args.tau, "override approxndcg temperature");
    cmd->add_option("--patience", args.patience,
                    "override early-stop patience");
    cmd->add_flag("--shuffle-negatives",
                  "reshuffle each group's negatives every epoch");
    cmd->add_option("--val-metric", args.val_metric,
                    "override validation metric (mrr|ndcg|map)");
    cmd->add_option("--out", args.out, "override output directory");
    if (with_labels) {
      cmd->add_option("--labels", args.labels,
                      "test labels: train or truth (sidecar)");
    }
  };

  CommonOverrides train_args;
  CLI::App* train = app.add_subcommand("train", "train a scorer");
  add_common(train, train_args, false);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--model", eval_args.model, "checkpoint path")->required();
  eval->add_option("--data", eval_args.data, "LETOR file")->required();
  eval->add_option("--labels", eval_args.labels,
                   "label source: train or truth (sidecar)");
  eval->add_option("--ndcg-cutoff", eval_args.ndcg_cutoff,
                   "nDCG cutoff (0 = full list)");
  eval->add_option("--out", eval_args.out, "output directory (default .)");

  CommonOverrides ablate_args;
  CLI::App* ablate =
      app.add_subcommand("ablate", "train the 15-mask loss-component grid");
  add_common(ablate, ablate_args, true);

  CommonOverrides sweep_args;
  CLI::App* sweep =
      app.add_subcommand("sweep", "train one model per pooling size");
  add_common(sweep, sweep_args, true, /*with_kappa=*/false);
  sweep->add_option("--kappa", sweep_args.kappa_list,
                    "comma-separated pooling sizes, e.g. 1,5,10,25")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_args);
    if (train->parsed()) return cmd_train(train, train_args);
    if (eval->parsed()) return cmd_eval(eval_args);
    if (ablate->parsed()) return cmd_ablate(ablate, ablate_args);
    if (sweep->parsed()) return cmd_sweep(sweep, sweep_args);
  } catch (const ltr::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ltr::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
