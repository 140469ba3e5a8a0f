#ifndef LTR_LOSSES_HPP_
#define LTR_LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "ltr/pooling.hpp"

namespace ltr {

// Mixture weights on L_min, L_min/max, L_max, L_target.
struct LossWeights {
  double c1 = 0.5;
  double c2 = 1.0;
  double c3 = 0.5;
  double c4 = 1.0;

  // all weights >= 0 and not all zero
  void validate() const;
  bool operator==(const LossWeights&) const = default;
};

// A loss evaluation: the value and its derivative for each candidate score.
struct LossGrad {
  double value = 0.0;
  std::vector<double> d_pos;
  std::vector<double> d_neg;
};

// Mean of the positive scores; its gradient is 1/N per positive.
double avg_positive(std::span<const double> scores_pos);

// (1/(N*M)) sum_ij max(0, 1 - s+_i + s-_j); subgradient 0 at the kink.
LossGrad margin_loss(std::span<const double> scores_pos,
                     std::span<const double> scores_neg);

// (1/(N*M)) sum_ij log(1 + exp(-(s+_i - s-_j))), evaluated with log1p-exp.
LossGrad ranknet_loss(std::span<const double> scores_pos,
                      std::span<const double> scores_neg);

// Top-one cross entropy between softmax(labels) and softmax(scores).
// Scores are laid out positives first; num_pos fixes the d_pos/d_neg split.
LossGrad listnet_loss(std::span<const double> scores,
                      std::span<const int> labels, std::size_t num_pos);

// Plackett-Luce negative log-likelihood of the permutation sorting labels
// descending (ties by original index), computed back-to-front with
// log-sum-exp stabilization.
LossGrad listmle_loss(std::span<const double> scores,
                      std::span<const int> labels, std::size_t num_pos);

// 1 - approxNDCG with smooth ranks r_i = 1 + sum_j sigmoid((s_j - s_i)/tau),
// gains 2^label - 1 and discount 1/log2(1 + r).
LossGrad approxndcg_loss(std::span<const double> scores,
                         std::span<const int> labels, double tau,
                         std::size_t num_pos);

// The four pooling-loss components over one candidate list. Negative-score
// gradients touch only the selected per-window min/max indices; positive
// gradients flow through the averaged positive score.
struct PoolRankComponents {
  double l_min = 0.0;     // (1/m) sum_i max(0, 1 - avg_pos + s-_{min_i})
  double l_minmax = 0.0;  // (1/m) sum_i (s-_{max_i} - s-_{min_i})^2
  double l_max = 0.0;     // (1/m) sum_i (s-_{max_i} + 1)^2
  double l_target = 0.0;  // (1 - avg_pos)^2
  PoolingSelection selection;
  LossGrad g_min, g_minmax, g_max, g_target;
};

PoolRankComponents poolrank_components(std::span<const double> scores_pos,
                                       std::span<const double> scores_neg,
                                       std::size_t kappa);

// c1*L_min + c2*L_min/max + c3*L_max + c4*L_target with matching gradient.
LossGrad poolrank_loss(std::span<const double> scores_pos,
                       std::span<const double> scores_neg, std::size_t kappa,
                       const LossWeights& weights);

}  // namespace ltr

#endif  // LTR_LOSSES_HPP_
