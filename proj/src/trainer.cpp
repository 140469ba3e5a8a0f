#include "ltr/trainer.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "ltr/errors.hpp"
#include "ltr/parallel.hpp"
#include "ltr/rng.hpp"
#include "text_util.hpp"

namespace ltr {

void adam_step(AdamState& state, std::vector<double>& params,
               std::span<const double> grad) {
  if (params.size() != grad.size() || state.m.size() != params.size()) {
    throw DataError("adam_step: vector lengths do not match");
  }
  for (const double g : grad) {
    if (!std::isfinite(g)) throw DataError("adam_step: non-finite gradient");
  }
  ++state.t;
  const double bc1 =
      1.0 - std::pow(state.hp.beta1, static_cast<double>(state.t));
  const double bc2 =
      1.0 - std::pow(state.hp.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    state.m[i] = state.hp.beta1 * state.m[i] + (1.0 - state.hp.beta1) * g;
    state.v[i] = state.hp.beta2 * state.v[i] + (1.0 - state.hp.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= state.hp.lr * m_hat / (std::sqrt(v_hat) + state.hp.eps);
  }
}

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::margin: return "margin";
    case LossKind::ranknet: return "ranknet";
    case LossKind::listnet: return "listnet";
    case LossKind::listmle: return "listmle";
    case LossKind::approxndcg: return "approxndcg";
    case LossKind::poolrank: return "poolrank";
  }
  return "?";
}

std::optional<LossKind> loss_kind_from_string(std::string_view name) {
  for (const LossKind kind :
       {LossKind::margin, LossKind::ranknet, LossKind::listnet,
        LossKind::listmle, LossKind::approxndcg, LossKind::poolrank}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::string loss_kind_names() {
  return "margin, ranknet, listnet, listmle, approxndcg, poolrank";
}

const char* to_string(ValMetric metric) {
  switch (metric) {
    case ValMetric::mrr: return "mrr";
    case ValMetric::ndcg: return "ndcg";
    case ValMetric::map: return "map";
  }
  return "?";
}

std::optional<ValMetric> val_metric_from_string(std::string_view name) {
  for (const ValMetric metric :
       {ValMetric::mrr, ValMetric::ndcg, ValMetric::map}) {
    if (name == to_string(metric)) return metric;
  }
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (kappa == 0) throw ConfigError("kappa must be >= 1");
  if (negatives_per_query == 0) {
    throw ConfigError("negatives_per_query must be >= 1");
  }
  if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
  if (!(approxndcg_tau > 0.0)) throw ConfigError("approxndcg_tau must be > 0");
  if (loss == LossKind::poolrank) weights.validate();
  if (scorer_kind == ScorerKind::linear && !hidden_dims.empty()) {
    throw ConfigError("linear scorer takes no hidden_dims");
  }
  if (scorer_kind == ScorerKind::mlp && hidden_dims.empty()) {
    throw ConfigError("mlp scorer needs at least one hidden layer");
  }
  for (const std::size_t d : hidden_dims) {
    if (d == 0) throw ConfigError("hidden_dims must not contain zero sizes");
  }
}

LossGrad group_loss(const TrainConfig& cfg, std::span<const double> scores_pos,
                    std::span<const double> scores_neg,
                    std::span<const int> labels_pos,
                    std::span<const int> labels_neg) {
  switch (cfg.loss) {
    case LossKind::margin:
      return margin_loss(scores_pos, scores_neg);
    case LossKind::ranknet:
      return ranknet_loss(scores_pos, scores_neg);
    case LossKind::poolrank:
      return poolrank_loss(scores_pos, scores_neg, cfg.kappa, cfg.weights);
    default:
      break;
  }
  std::vector<double> scores(scores_pos.begin(), scores_pos.end());
  scores.insert(scores.end(), scores_neg.begin(), scores_neg.end());
  std::vector<int> labels(labels_pos.begin(), labels_pos.end());
  labels.insert(labels.end(), labels_neg.begin(), labels_neg.end());
  switch (cfg.loss) {
    case LossKind::listnet:
      return listnet_loss(scores, labels, scores_pos.size());
    case LossKind::listmle:
      return listmle_loss(scores, labels, scores_pos.size());
    default:
      return approxndcg_loss(scores, labels, cfg.approxndcg_tau,
                             scores_pos.size());
  }
}

namespace {

std::vector<int> labels_of(const std::vector<Candidate>& candidates) {
  std::vector<int> labels;
  labels.reserve(candidates.size());
  for (const Candidate& cand : candidates) labels.push_back(cand.label);
  return labels;
}

}  // namespace

double batch_gradient(const TrainConfig& cfg, const Scorer& sc,
                      std::span<const QueryGroup* const> groups,
                      GradBuffer& out) {
  if (groups.empty()) throw DataError("batch_gradient: empty batch");
  out.grad.assign(sc.params.size(), 0.0);

  std::vector<GradBuffer> buffers(groups.size());
  std::vector<double> losses(groups.size(), 0.0);
  parallel_for(groups.size(), [&](std::size_t g) {
    const QueryGroup& group = *groups[g];
    const ScoredList scored = score_list(sc, group);
    const LossGrad lg =
        group_loss(cfg, scored.scores_pos, scored.scores_neg,
                   labels_of(group.positives), labels_of(group.negatives));
    std::vector<double> upstream(lg.d_pos.begin(), lg.d_pos.end());
    upstream.insert(upstream.end(), lg.d_neg.begin(), lg.d_neg.end());
    buffers[g] = GradBuffer(sc.params.size());
    backward(sc, scored.cache, upstream, buffers[g]);
    losses[g] = lg.value;
  });

  // deterministic index-order reduction: parallel == serial bitwise
  double loss_sum = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i = 0; i < out.grad.size(); ++i) {
      out.grad[i] += buffers[g].grad[i];
    }
    loss_sum += losses[g];
  }
  const double inv = 1.0 / static_cast<double>(groups.size());
  for (double& g : out.grad) g *= inv;
  ++out.accumulations;
  const double mean_loss = loss_sum * inv;
  if (!std::isfinite(mean_loss)) {
    throw DataError("batch_gradient: non-finite loss");
  }
  return mean_loss;
}

namespace {

double metric_of(const EvalReport& report, ValMetric metric) {
  switch (metric) {
    case ValMetric::mrr: return report.mean_mrr;
    case ValMetric::ndcg: return report.mean_ndcg;
    case ValMetric::map: return report.mean_map;
  }
  return 0.0;
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const Dataset& train_ds,
                  const Dataset& valid_ds) {
  cfg.validate();
  if (train_ds.groups.empty()) throw DataError("train: empty training set");
  if (valid_ds.groups.empty()) throw DataError("train: empty validation set");
  if (train_ds.feature_dim != valid_ds.feature_dim) {
    throw DataError("train: train/valid feature dimensions differ");
  }

  BuildStats stats;
  Dataset lists = build_lists(train_ds, cfg.negatives_per_query, cfg.seed,
                              &stats);
  if (lists.groups.empty()) {
    throw DataError("train: no trainable groups (each needs a positive and "
                    "a negative)");
  }

  std::vector<std::size_t> dims;
  dims.push_back(train_ds.feature_dim);
  if (cfg.scorer_kind == ScorerKind::mlp) {
    dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  }
  dims.push_back(1);
  Scorer sc = init_scorer(cfg.scorer_kind, dims, cfg.seed);

  AdamState adam(sc.params.size(), AdamConfig{.lr = cfg.lr});
  Rng epoch_rng(cfg.seed);

  TrainResult result;
  result.record.dropped_groups =
      stats.dropped_no_positive + stats.dropped_no_negative;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<double> best_params = sc.params;
  std::size_t best_epoch = 0;
  std::size_t epochs_since_best = 0;

  std::vector<std::size_t> order(lists.groups.size());
  std::iota(order.begin(), order.end(), 0);
  GradBuffer buffer(sc.params.size());
  const auto run_start = std::chrono::steady_clock::now();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    if (cfg.shuffle_negatives_per_epoch) {
      for (QueryGroup& group : lists.groups) {
        epoch_rng.shuffle(group.negatives);
      }
    }
    epoch_rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t end =
          std::min(start + cfg.batch_size, order.size());
      std::vector<const QueryGroup*> batch;
      batch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(&lists.groups[order[i]]);
      }
      const double mean_loss = batch_gradient(cfg, sc, batch, buffer);
      adam_step(adam, sc.params, buffer.grad);
      loss_sum += mean_loss * static_cast<double>(batch.size());
    }

    const EvalReport val_report =
        evaluate(sc, valid_ds, LabelSource::training_labels);
    const double val = metric_of(val_report, cfg.validation_metric);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.val_metric = val;
    rec.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - epoch_start)
                      .count();
    result.record.epochs.push_back(rec);

    if (val > best_val) {
      best_val = val;
      best_epoch = epoch;
      best_params = sc.params;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
    }
    if (cfg.patience > 0 && epochs_since_best >= cfg.patience) break;
  }

  result.record.best_epoch = best_epoch;
  result.record.best_val = best_val;
  result.record.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    run_start)
          .count();
  sc.params = std::move(best_params);
  result.scorer = std::move(sc);
  return result;
}

namespace {

EvalReport eval_test(const Scorer& sc, const Dataset& test_ds,
                     LabelSource source, const TruthTable* truth) {
  return evaluate(sc, test_ds, source, truth);
}

}  // namespace

std::vector<AblationRow> ablate(const TrainConfig& cfg, const Dataset& train_ds,
                                const Dataset& valid_ds, const Dataset& test_ds,
                                LabelSource test_labels,
                                const TruthTable* truth) {
  // all 15 nonzero on/off masks, ordered by component count, then by the
  // mask read as the binary number c1 c2 c3 c4
  std::vector<std::array<int, 4>> masks;
  for (int bits = 1; bits < 16; ++bits) {
    masks.push_back({(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1,
                     bits & 1});
  }
  std::stable_sort(masks.begin(), masks.end(),
                   [](const std::array<int, 4>& a, const std::array<int, 4>& b) {
                     const int pa = a[0] + a[1] + a[2] + a[3];
                     const int pb = b[0] + b[1] + b[2] + b[3];
                     if (pa != pb) return pa < pb;
                     return std::make_tuple(a[0], a[1], a[2], a[3]) <
                            std::make_tuple(b[0], b[1], b[2], b[3]);
                   });

  std::vector<AblationRow> rows;
  rows.reserve(masks.size());
  for (const auto& mask : masks) {
    TrainConfig masked = cfg;
    masked.loss = LossKind::poolrank;
    masked.weights.c1 = mask[0] ? cfg.weights.c1 : 0.0;
    masked.weights.c2 = mask[1] ? cfg.weights.c2 : 0.0;
    masked.weights.c3 = mask[2] ? cfg.weights.c3 : 0.0;
    masked.weights.c4 = mask[3] ? cfg.weights.c4 : 0.0;
    masked.weights.validate();
    const TrainResult trained = train(masked, train_ds, valid_ds);
    const EvalReport report =
        eval_test(trained.scorer, test_ds, test_labels, truth);
    rows.push_back({mask, report.mean_mrr, report.mean_ndcg, report.mean_map});
  }
  return rows;
}

std::vector<SweepRow> sweep_pooling(const TrainConfig& cfg,
                                    std::span<const std::size_t> kappas,
                                    const Dataset& train_ds,
                                    const Dataset& valid_ds,
                                    const Dataset& test_ds,
                                    LabelSource test_labels,
                                    const TruthTable* truth) {
  if (kappas.empty()) throw ConfigError("sweep: empty kappa list");
  std::vector<SweepRow> rows;
  rows.reserve(kappas.size());
  for (const std::size_t kappa : kappas) {
    TrainConfig swept = cfg;
    swept.loss = LossKind::poolrank;
    swept.kappa = kappa;
    const TrainResult trained = train(swept, train_ds, valid_ds);
    const EvalReport report =
        eval_test(trained.scorer, test_ds, test_labels, truth);
    rows.push_back(
        {kappa, report.mean_mrr, report.mean_ndcg, report.mean_map});
  }
  return rows;
}

using detail::fmt_double;

void write_run_tsv(const RunRecord& record, ValMetric metric,
                   const std::string& path, const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "# config=" << config_hash << '\n';
  out << "# epoch\ttrain_loss\tval_" << to_string(metric) << '\n';
  for (const EpochRecord& rec : record.epochs) {
    out << rec.epoch << '\t' << fmt_double(rec.train_loss) << '\t'
        << fmt_double(rec.val_metric) << '\n';
  }
  out << "# best_epoch=" << record.best_epoch
      << " best_val=" << fmt_double(record.best_val)
      << " dropped_groups=" << record.dropped_groups << '\n';
  if (!out) throw DataError("failed writing " + path);
}

void write_run_json(const RunRecord& record, ValMetric metric,
                    const std::string& path, const std::string& config_hash) {
  nlohmann::json doc;
  doc["config"] = config_hash;
  doc["validation_metric"] = to_string(metric);
  doc["best_epoch"] = record.best_epoch;
  doc["best_val"] = record.best_val;
  doc["dropped_groups"] = record.dropped_groups;
  auto& rows = doc["epochs"] = nlohmann::json::array();
  for (const EpochRecord& rec : record.epochs) {
    rows.push_back({{"epoch", rec.epoch},
                    {"train_loss", rec.train_loss},
                    {"val_metric", rec.val_metric}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path);
}

void write_ablation_tsv(std::span<const AblationRow> rows,
                        const std::string& path,
                        const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "# config=" << config_hash << '\n';
  out << "# c1\tc2\tc3\tc4\tmrr\tndcg\tmap\n";
  for (const AblationRow& row : rows) {
    out << row.mask[0] << '\t' << row.mask[1] << '\t' << row.mask[2] << '\t'
        << row.mask[3] << '\t' << fmt_double(row.mrr) << '\t'
        << fmt_double(row.ndcg) << '\t' << fmt_double(row.map) << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

void write_ablation_json(std::span<const AblationRow> rows,
                         const std::string& path,
                         const std::string& config_hash) {
  nlohmann::json doc;
  doc["config"] = config_hash;
  auto& arr = doc["rows"] = nlohmann::json::array();
  for (const AblationRow& row : rows) {
    arr.push_back({{"mask", row.mask},
                   {"mrr", row.mrr},
                   {"ndcg", row.ndcg},
                   {"map", row.map}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path);
}

void write_sweep_tsv(std::span<const SweepRow> rows, const std::string& path,
                     const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "# config=" << config_hash << '\n';
  out << "# kappa\tmrr\tndcg\tmap\n";
  for (const SweepRow& row : rows) {
    out << row.kappa << '\t' << fmt_double(row.mrr) << '\t'
        << fmt_double(row.ndcg) << '\t' << fmt_double(row.map) << '\n';
  }
  if (!out) throw DataError("failed writing " + path);
}

void write_sweep_json(std::span<const SweepRow> rows, const std::string& path,
                      const std::string& config_hash) {
  nlohmann::json doc;
  doc["config"] = config_hash;
  auto& arr = doc["rows"] = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    arr.push_back({{"kappa", row.kappa},
                   {"mrr", row.mrr},
                   {"ndcg", row.ndcg},
                   {"map", row.map}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace ltr
