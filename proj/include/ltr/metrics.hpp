#ifndef LTR_METRICS_HPP_
#define LTR_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltr/dataset.hpp"
#include "ltr/scorer.hpp"

namespace ltr {

// Candidate indices in descending score order, ties broken by ascending
// original index.
using Ranking = std::vector<std::size_t>;

Ranking rank_by_score(std::span<const double> scores);

// 1 / rank of the first relevant document (ranks start at 1); 0 when no
// document is relevant, counted in *warn when provided.
double mrr(const Ranking& ranking, std::span<const int> labels,
           std::size_t* warn = nullptr);

// DCG/IDCG with gains 2^label - 1 and discount 1/log2(1 + rank); full list
// unless a cutoff is given. 0 with a warning when all labels are zero.
double ndcg(const Ranking& ranking, std::span<const int> labels,
            std::optional<std::size_t> cutoff = std::nullopt,
            std::size_t* warn = nullptr);

// Average precision with binary relevance label > 0, averaged over the total
// relevant count. 0 with a warning when nothing is relevant.
double average_precision(const Ranking& ranking, std::span<const int> labels,
                         std::size_t* warn = nullptr);

enum class LabelSource { training_labels, ground_truth_sidecar };

struct QueryEval {
  std::string query_id;
  double mrr = 0.0;
  double ndcg = 0.0;
  double map = 0.0;

  bool operator==(const QueryEval&) const = default;
};

struct EvalReport {
  std::vector<QueryEval> per_query;
  double mean_mrr = 0.0;
  double mean_ndcg = 0.0;
  double mean_map = 0.0;
  std::size_t query_count = 0;
  std::size_t queries_without_relevant = 0;
  // run metadata, filled by the CLI
  std::string model_path;
  std::string dataset_path;
  std::string timestamp;
};

// Scores every candidate (positives first, then negatives), ranks them and
// computes all three metrics per query; aggregates are arithmetic means.
// ground_truth_sidecar mode requires a truth table.
EvalReport evaluate(const Scorer& sc, const Dataset& ds, LabelSource source,
                    const TruthTable* truth = nullptr,
                    std::optional<std::size_t> ndcg_cutoff = std::nullopt);

// One `qid\tmrr\tndcg\tmap` row per query plus an __aggregate__ row; the
// header comment carries the resolved config hash.
void write_eval_tsv(const EvalReport& report, const std::string& path,
                    const std::string& config_hash);
void write_eval_json(const EvalReport& report, const std::string& path,
                     const std::string& config_hash);

}  // namespace ltr

#endif  // LTR_METRICS_HPP_
