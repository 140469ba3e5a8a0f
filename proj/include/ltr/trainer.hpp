#ifndef LTR_TRAINER_HPP_
#define LTR_TRAINER_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltr/dataset.hpp"
#include "ltr/losses.hpp"
#include "ltr/metrics.hpp"
#include "ltr/scorer.hpp"

namespace ltr {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  AdamConfig hp;

  explicit AdamState(std::size_t n, AdamConfig cfg = {})
      : m(n, 0.0), v(n, 0.0), hp(cfg) {}
};

// Bias-corrected Adam update. Throws on non-finite gradients.
void adam_step(AdamState& state, std::vector<double>& params,
               std::span<const double> grad);

enum class LossKind { margin, ranknet, listnet, listmle, approxndcg, poolrank };
const char* to_string(LossKind kind);
std::optional<LossKind> loss_kind_from_string(std::string_view name);
// every valid loss name, comma separated (for error messages)
std::string loss_kind_names();

enum class ValMetric { mrr, ndcg, map };
const char* to_string(ValMetric metric);
std::optional<ValMetric> val_metric_from_string(std::string_view name);

struct TrainConfig {
  LossKind loss = LossKind::poolrank;
  LossWeights weights{};
  std::size_t kappa = 10;
  std::size_t negatives_per_query = 100;
  std::size_t batch_size = 4;
  std::size_t epochs = 30;
  double lr = 1e-4;
  std::uint64_t seed = 1;
  bool shuffle_negatives_per_epoch = false;
  double approxndcg_tau = 0.1;
  std::size_t patience = 0;  // 0 disables early stopping
  ValMetric validation_metric = ValMetric::mrr;
  ScorerKind scorer_kind = ScorerKind::mlp;
  std::vector<std::size_t> hidden_dims = {16};

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_metric = 0.0;
  double seconds = 0.0;  // wall time; reported on stderr, never serialized
};

struct RunRecord {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 1-based epoch of the returned checkpoint
  double best_val = 0.0;
  double total_seconds = 0.0;
  std::size_t dropped_groups = 0;  // groups unusable for training
};

struct TrainResult {
  Scorer scorer;
  RunRecord record;
};

// Dispatches the configured loss over one scored group. Listwise losses see
// the list as positives first, then negatives.
LossGrad group_loss(const TrainConfig& cfg, std::span<const double> scores_pos,
                    std::span<const double> scores_neg,
                    std::span<const int> labels_pos,
                    std::span<const int> labels_neg);

// Mean of per-group parameter gradients over a batch, written into out
// (reduced in group index order); returns the mean loss value.
double batch_gradient(const TrainConfig& cfg, const Scorer& sc,
                      std::span<const QueryGroup* const> groups,
                      GradBuffer& out);

// Seeded-shuffled query batches, one Adam step per batch, per-epoch
// validation, best-validation checkpoint selection and optional early
// stopping on patience exhaustion.
TrainResult train(const TrainConfig& cfg, const Dataset& train_ds,
                  const Dataset& valid_ds);

struct AblationRow {
  std::array<int, 4> mask{};  // on/off per weight c1..c4
  double mrr = 0.0;
  double ndcg = 0.0;
  double map = 0.0;
};

// Trains one model per nonzero on/off mask of the configured weights (15
// rows, ordered by component count then mask value) with the same seed and
// data, evaluating each on the test set.
std::vector<AblationRow> ablate(const TrainConfig& cfg, const Dataset& train_ds,
                                const Dataset& valid_ds, const Dataset& test_ds,
                                LabelSource test_labels,
                                const TruthTable* truth = nullptr);

struct SweepRow {
  std::size_t kappa = 0;
  double mrr = 0.0;
  double ndcg = 0.0;
  double map = 0.0;
};

// One training run per pooling size, shared seed and data.
std::vector<SweepRow> sweep_pooling(const TrainConfig& cfg,
                                    std::span<const std::size_t> kappas,
                                    const Dataset& train_ds,
                                    const Dataset& valid_ds,
                                    const Dataset& test_ds,
                                    LabelSource test_labels,
                                    const TruthTable* truth = nullptr);

void write_run_tsv(const RunRecord& record, ValMetric metric,
                   const std::string& path, const std::string& config_hash);
void write_run_json(const RunRecord& record, ValMetric metric,
                    const std::string& path, const std::string& config_hash);
void write_ablation_tsv(std::span<const AblationRow> rows,
                        const std::string& path,
                        const std::string& config_hash);
void write_ablation_json(std::span<const AblationRow> rows,
                         const std::string& path,
                         const std::string& config_hash);
void write_sweep_tsv(std::span<const SweepRow> rows, const std::string& path,
                     const std::string& config_hash);
void write_sweep_json(std::span<const SweepRow> rows, const std::string& path,
                      const std::string& config_hash);

}  // namespace ltr

#endif  // LTR_TRAINER_HPP_
