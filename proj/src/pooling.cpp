#include "ltr/pooling.hpp"

#include <algorithm>

#include "ltr/errors.hpp"

namespace ltr {

PoolingSelection pool_select(std::span<const double> scores_neg,
                             std::size_t kappa) {
  const std::size_t total = scores_neg.size();
  if (total == 0) throw DataError("pool_select: empty negative-score array");
  if (kappa == 0) throw ConfigError("pool_select: kappa must be >= 1");

  PoolingSelection sel;
  sel.kappa = kappa;
  sel.num_windows = (total + kappa - 1) / kappa;
  sel.max_indices.reserve(sel.num_windows);
  sel.min_indices.reserve(sel.num_windows);
  for (std::size_t w = 0; w < sel.num_windows; ++w) {
    const std::size_t lo = w * kappa;
    const std::size_t hi = std::min(lo + kappa, total);
    std::size_t arg_max = lo;
    std::size_t arg_min = lo;
    for (std::size_t j = lo + 1; j < hi; ++j) {
      if (scores_neg[j] > scores_neg[arg_max]) arg_max = j;
      if (scores_neg[j] < scores_neg[arg_min]) arg_min = j;
    }
    sel.max_indices.push_back(arg_max);
    sel.min_indices.push_back(arg_min);
  }
  return sel;
}

}  // namespace ltr
