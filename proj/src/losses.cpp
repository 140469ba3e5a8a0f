#include "ltr/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

#include "ltr/errors.hpp"

namespace ltr {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// softmax of arbitrary reals, shifted by the maximum
std::vector<double> softmax(std::span<const double> values) {
  const double hi = *std::max_element(values.begin(), values.end());
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::exp(values[i] - hi);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

LossGrad make_grad(std::size_t num_pos, std::size_t num_neg) {
  LossGrad g;
  g.d_pos.assign(num_pos, 0.0);
  g.d_neg.assign(num_neg, 0.0);
  return g;
}

// splits a full-list gradient into the positives-first LossGrad layout
LossGrad split_grad(double value, std::span<const double> d_scores,
                    std::size_t num_pos) {
  LossGrad g;
  g.value = value;
  g.d_pos.assign(d_scores.begin(), d_scores.begin() + num_pos);
  g.d_neg.assign(d_scores.begin() + num_pos, d_scores.end());
  return g;
}

void require_pair_lists(std::span<const double> pos,
                        std::span<const double> neg) {
  if (pos.empty()) throw DataError("loss requires at least one positive");
  if (neg.empty()) throw DataError("loss requires at least one negative");
}

}  // namespace

void LossWeights::validate() const {
  if (c1 < 0.0 || c2 < 0.0 || c3 < 0.0 || c4 < 0.0) {
    throw ConfigError("loss weights must be >= 0");
  }
  if (c1 == 0.0 && c2 == 0.0 && c3 == 0.0 && c4 == 0.0) {
    throw ConfigError("loss weights must not all be zero");
  }
}

double avg_positive(std::span<const double> scores_pos) {
  if (scores_pos.empty()) {
    throw DataError("avg_positive requires at least one positive score");
  }
  double sum = 0.0;
  for (const double s : scores_pos) sum += s;
  return sum / static_cast<double>(scores_pos.size());
}

LossGrad margin_loss(std::span<const double> scores_pos,
                     std::span<const double> scores_neg) {
  require_pair_lists(scores_pos, scores_neg);
  LossGrad g = make_grad(scores_pos.size(), scores_neg.size());
  const double w =
      1.0 / static_cast<double>(scores_pos.size() * scores_neg.size());
  for (std::size_t i = 0; i < scores_pos.size(); ++i) {
    for (std::size_t j = 0; j < scores_neg.size(); ++j) {
      const double hinge = 1.0 - scores_pos[i] + scores_neg[j];
      if (hinge > 0.0) {
        g.value += w * hinge;
        g.d_pos[i] -= w;
        g.d_neg[j] += w;
      }
    }
  }
  return g;
}

LossGrad ranknet_loss(std::span<const double> scores_pos,
                      std::span<const double> scores_neg) {
  require_pair_lists(scores_pos, scores_neg);
  LossGrad g = make_grad(scores_pos.size(), scores_neg.size());
  const double w =
      1.0 / static_cast<double>(scores_pos.size() * scores_neg.size());
  for (std::size_t i = 0; i < scores_pos.size(); ++i) {
    for (std::size_t j = 0; j < scores_neg.size(); ++j) {
      const double diff = scores_pos[i] - scores_neg[j];
      g.value += w * softplus(-diff);
      const double slope = w * sigmoid(-diff);
      g.d_pos[i] -= slope;
      g.d_neg[j] += slope;
    }
  }
  return g;
}

LossGrad listnet_loss(std::span<const double> scores,
                      std::span<const int> labels, std::size_t num_pos) {
  if (scores.empty()) throw DataError("listnet_loss: empty list");
  if (scores.size() != labels.size() || num_pos > scores.size()) {
    throw DataError("listnet_loss: length mismatch");
  }
  std::vector<double> label_values(labels.begin(), labels.end());
  const std::vector<double> target = softmax(label_values);
  const std::vector<double> predicted = softmax(scores);

  const double hi = *std::max_element(scores.begin(), scores.end());
  double sum_exp = 0.0;
  for (const double s : scores) sum_exp += std::exp(s - hi);
  const double log_z = hi + std::log(sum_exp);

  double value = 0.0;
  std::vector<double> d(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    value += target[i] * (log_z - scores[i]);
    d[i] = predicted[i] - target[i];
  }
  return split_grad(value, d, num_pos);
}

LossGrad listmle_loss(std::span<const double> scores,
                      std::span<const int> labels, std::size_t num_pos) {
  if (scores.empty()) throw DataError("listmle_loss: empty list");
  if (scores.size() != labels.size() || num_pos > scores.size()) {
    throw DataError("listmle_loss: length mismatch");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a,
                                                 std::size_t b) {
    return labels[a] > labels[b];
  });

  // suffix log-partition terms, back to front
  std::vector<double> log_z(n);
  log_z[n - 1] = scores[perm[n - 1]];
  for (std::size_t k = n - 1; k-- > 0;) {
    log_z[k] = log_add_exp(scores[perm[k]], log_z[k + 1]);
  }

  double value = 0.0;
  for (std::size_t k = 0; k < n; ++k) value += log_z[k] - scores[perm[k]];

  // d/ds_{perm[j]} = sum_{k<=j} softmax_k(perm[j]) - 1; every exponent is <= 0
  std::vector<double> d(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double grad = -1.0;
    const double s = scores[perm[j]];
    for (std::size_t k = 0; k <= j; ++k) grad += std::exp(s - log_z[k]);
    d[perm[j]] = grad;
  }
  return split_grad(value, d, num_pos);
}

LossGrad approxndcg_loss(std::span<const double> scores,
                         std::span<const int> labels, double tau,
                         std::size_t num_pos) {
  if (scores.empty()) throw DataError("approxndcg_loss: empty list");
  if (scores.size() != labels.size() || num_pos > scores.size()) {
    throw DataError("approxndcg_loss: length mismatch");
  }
  if (tau <= 0.0) throw ConfigError("approxndcg tau must be > 0");
  const std::size_t n = scores.size();

  std::vector<double> gains(n);
  bool any_relevant = false;
  for (std::size_t i = 0; i < n; ++i) {
    gains[i] = std::exp2(static_cast<double>(labels[i])) - 1.0;
    any_relevant |= labels[i] > 0;
  }
  if (!any_relevant) {
    throw DataError("approxndcg_loss: undefined nDCG, all labels zero");
  }

  std::vector<double> ideal = gains;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    idcg += ideal[k] / std::log2(static_cast<double>(k) + 2.0);
  }

  // smooth rank of each document
  std::vector<double> rank_hat(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      rank_hat[i] += sigmoid((scores[j] - scores[i]) / tau);
    }
  }

  const double ln2 = std::numbers::ln2;
  double value = 1.0;
  std::vector<double> d_rank(n);  // dvalue / drank_hat[i]
  for (std::size_t i = 0; i < n; ++i) {
    const double log_term = std::log1p(rank_hat[i]);
    value -= gains[i] / idcg * (ln2 / log_term);
    d_rank[i] = gains[i] / idcg * ln2 /
                (log_term * log_term * (1.0 + rank_hat[i]));
  }

  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (d_rank[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double s = sigmoid((scores[j] - scores[i]) / tau);
      const double slope = s * (1.0 - s) / tau;
      d[j] += d_rank[i] * slope;
      d[i] -= d_rank[i] * slope;
    }
  }
  return split_grad(value, d, num_pos);
}

PoolRankComponents poolrank_components(std::span<const double> scores_pos,
                                       std::span<const double> scores_neg,
                                       std::size_t kappa) {
  require_pair_lists(scores_pos, scores_neg);
  const std::size_t num_pos = scores_pos.size();
  const std::size_t num_neg = scores_neg.size();

  PoolRankComponents comp;
  comp.selection = pool_select(scores_neg, kappa);
  comp.g_min = make_grad(num_pos, num_neg);
  comp.g_minmax = make_grad(num_pos, num_neg);
  comp.g_max = make_grad(num_pos, num_neg);
  comp.g_target = make_grad(num_pos, num_neg);

  const double avg = avg_positive(scores_pos);
  const std::size_t m = comp.selection.num_windows;
  const double inv_m = 1.0 / static_cast<double>(m);
  const double inv_n = 1.0 / static_cast<double>(num_pos);

  double d_avg_min = 0.0;  // dL_min / d(avg)
  for (std::size_t w = 0; w < m; ++w) {
    const std::size_t lo_idx = comp.selection.min_indices[w];
    const std::size_t hi_idx = comp.selection.max_indices[w];
    const double s_min = scores_neg[lo_idx];
    const double s_max = scores_neg[hi_idx];

    const double hinge = 1.0 - avg + s_min;
    if (hinge > 0.0) {
      comp.l_min += inv_m * hinge;
      comp.g_min.d_neg[lo_idx] += inv_m;
      d_avg_min -= inv_m;
    }

    const double gap = s_max - s_min;
    comp.l_minmax += inv_m * gap * gap;
    comp.g_minmax.d_neg[hi_idx] += 2.0 * inv_m * gap;
    comp.g_minmax.d_neg[lo_idx] -= 2.0 * inv_m * gap;

    const double lifted = s_max + 1.0;
    comp.l_max += inv_m * lifted * lifted;
    comp.g_max.d_neg[hi_idx] += 2.0 * inv_m * lifted;
  }
  comp.g_min.value = comp.l_min;
  comp.g_minmax.value = comp.l_minmax;
  comp.g_max.value = comp.l_max;

  const double shortfall = 1.0 - avg;
  comp.l_target = shortfall * shortfall;
  comp.g_target.value = comp.l_target;
  const double d_avg_target = -2.0 * shortfall;
  for (std::size_t i = 0; i < num_pos; ++i) {
    comp.g_min.d_pos[i] = d_avg_min * inv_n;
    comp.g_target.d_pos[i] = d_avg_target * inv_n;
  }
  return comp;
}

LossGrad poolrank_loss(std::span<const double> scores_pos,
                       std::span<const double> scores_neg, std::size_t kappa,
                       const LossWeights& weights) {
  weights.validate();
  const PoolRankComponents comp =
      poolrank_components(scores_pos, scores_neg, kappa);

  LossGrad g = make_grad(scores_pos.size(), scores_neg.size());
  g.value = weights.c1 * comp.l_min + weights.c2 * comp.l_minmax +
            weights.c3 * comp.l_max + weights.c4 * comp.l_target;
  const std::array<std::pair<double, const LossGrad*>, 4> parts{{
      {weights.c1, &comp.g_min},
      {weights.c2, &comp.g_minmax},
      {weights.c3, &comp.g_max},
      {weights.c4, &comp.g_target},
  }};
  for (const auto& [weight, part] : parts) {
    if (weight == 0.0) continue;
    for (std::size_t i = 0; i < g.d_pos.size(); ++i) {
      g.d_pos[i] += weight * part->d_pos[i];
    }
    for (std::size_t j = 0; j < g.d_neg.size(); ++j) {
      g.d_neg[j] += weight * part->d_neg[j];
    }
  }
  return g;
}

}  // namespace ltr
