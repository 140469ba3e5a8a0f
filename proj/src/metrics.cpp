#include "ltr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>

#include <json.hpp>

#include "ltr/errors.hpp"
#include "ltr/parallel.hpp"
#include "text_util.hpp"

namespace ltr {

Ranking rank_by_score(std::span<const double> scores) {
  if (scores.empty()) throw DataError("rank_by_score: empty score list");
  Ranking idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return idx;
}

double mrr(const Ranking& ranking, std::span<const int> labels,
           std::size_t* warn) {
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    if (labels[ranking[k]] > 0) return 1.0 / static_cast<double>(k + 1);
  }
  if (warn) ++*warn;
  return 0.0;
}

namespace {

double gain(int label) { return std::exp2(static_cast<double>(label)) - 1.0; }

double discounted_gain(std::span<const int> ordered_labels, std::size_t upto) {
  double dcg = 0.0;
  for (std::size_t k = 0; k < upto; ++k) {
    dcg += gain(ordered_labels[k]) / std::log2(static_cast<double>(k) + 2.0);
  }
  return dcg;
}

}  // namespace

double ndcg(const Ranking& ranking, std::span<const int> labels,
            std::optional<std::size_t> cutoff, std::size_t* warn) {
  const std::size_t upto = std::min(cutoff.value_or(labels.size()),
                                    labels.size());
  std::vector<int> ranked(labels.size());
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    ranked[k] = labels[ranking[k]];
  }
  std::vector<int> ideal(labels.begin(), labels.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = discounted_gain(ideal, upto);
  if (idcg == 0.0) {
    if (warn) ++*warn;
    return 0.0;
  }
  return discounted_gain(ranked, upto) / idcg;
}

double average_precision(const Ranking& ranking, std::span<const int> labels,
                         std::size_t* warn) {
  std::size_t relevant = 0;
  for (const int label : labels) relevant += label > 0 ? 1 : 0;
  if (relevant == 0) {
    if (warn) ++*warn;
    return 0.0;
  }
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    if (labels[ranking[k]] > 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(relevant);
}

namespace {

int label_for(const Candidate& cand, const std::string& query_id,
              LabelSource source, const TruthTable* truth) {
  if (source == LabelSource::training_labels) return cand.label;
  const auto qit = truth->find(query_id);
  if (qit == truth->end()) {
    throw DataError("truth table has no query '" + query_id + "'");
  }
  const auto dit = qit->second.find(cand.doc_id);
  if (dit == qit->second.end()) {
    throw DataError("truth table has no doc '" + cand.doc_id + "' for query '" +
                    query_id + "'");
  }
  return dit->second;
}

}  // namespace

EvalReport evaluate(const Scorer& sc, const Dataset& ds, LabelSource source,
                    const TruthTable* truth,
                    std::optional<std::size_t> ndcg_cutoff) {
  if (ds.groups.empty()) throw DataError("evaluate: empty dataset");
  if (source == LabelSource::ground_truth_sidecar && truth == nullptr) {
    throw DataError("ground-truth evaluation requires a truth table");
  }

  EvalReport report;
  report.per_query.resize(ds.groups.size());
  std::vector<std::size_t> warnings(ds.groups.size(), 0);

  parallel_for(ds.groups.size(), [&](std::size_t g) {
    const QueryGroup& group = ds.groups[g];
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(group.num_pos() + group.num_neg());
    labels.reserve(scores.capacity());
    for (const Candidate& cand : group.positives) {
      scores.push_back(score_one(sc, cand.features));
      labels.push_back(label_for(cand, group.query_id, source, truth));
    }
    for (const Candidate& cand : group.negatives) {
      scores.push_back(score_one(sc, cand.features));
      labels.push_back(label_for(cand, group.query_id, source, truth));
    }
    const Ranking ranking = rank_by_score(scores);
    QueryEval& qe = report.per_query[g];
    qe.query_id = group.query_id;
    std::size_t warn = 0;
    qe.mrr = mrr(ranking, labels, &warn);
    qe.ndcg = ndcg(ranking, labels, ndcg_cutoff, &warn);
    qe.map = average_precision(ranking, labels, &warn);
    warnings[g] = warn;
  });

  report.query_count = report.per_query.size();
  double sum_mrr = 0.0, sum_ndcg = 0.0, sum_map = 0.0;
  for (std::size_t g = 0; g < report.per_query.size(); ++g) {
    sum_mrr += report.per_query[g].mrr;
    sum_ndcg += report.per_query[g].ndcg;
    sum_map += report.per_query[g].map;
    // a query counts once even if several metrics warned
    report.queries_without_relevant += warnings[g] > 0 ? 1 : 0;
  }
  const double n = static_cast<double>(report.query_count);
  report.mean_mrr = sum_mrr / n;
  report.mean_ndcg = sum_ndcg / n;
  report.mean_map = sum_map / n;
  return report;
}

void write_eval_tsv(const EvalReport& report, const std::string& path,
                    const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "# config=" << config_hash << '\n';
  out << "# qid\tmrr\tndcg\tmap\n";
  for (const QueryEval& qe : report.per_query) {
    out << qe.query_id << '\t' << detail::fmt_double(qe.mrr) << '\t'
        << detail::fmt_double(qe.ndcg) << '\t' << detail::fmt_double(qe.map)
        << '\n';
  }
  out << "__aggregate__\t" << detail::fmt_double(report.mean_mrr) << '\t'
      << detail::fmt_double(report.mean_ndcg) << '\t'
      << detail::fmt_double(report.mean_map) << '\n';
  if (!out) throw DataError("failed writing " + path);
}

void write_eval_json(const EvalReport& report, const std::string& path,
                     const std::string& config_hash) {
  nlohmann::json doc;
  doc["config"] = config_hash;
  doc["metadata"] = {{"model", report.model_path},
                     {"data", report.dataset_path},
                     {"timestamp", report.timestamp}};
  doc["aggregate"] = {{"mrr", report.mean_mrr},
                      {"ndcg", report.mean_ndcg},
                      {"map", report.mean_map},
                      {"queries", report.query_count},
                      {"queries_without_relevant",
                       report.queries_without_relevant}};
  auto& rows = doc["per_query"] = nlohmann::json::array();
  for (const QueryEval& qe : report.per_query) {
    rows.push_back({{"qid", qe.query_id},
                    {"mrr", qe.mrr},
                    {"ndcg", qe.ndcg},
                    {"map", qe.map}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace ltr
