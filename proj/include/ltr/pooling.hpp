#ifndef LTR_POOLING_HPP_
#define LTR_POOLING_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace ltr {

// Per-window argmax/argmin selection over a negative-score array. Window i
// covers indices [i*kappa, min((i+1)*kappa, M)); the last window may be
// shorter when kappa does not divide M. Ties break to the lowest index.
struct PoolingSelection {
  std::size_t kappa = 1;
  std::size_t num_windows = 0;           // ceil(M / kappa)
  std::vector<std::size_t> max_indices;  // one per window
  std::vector<std::size_t> min_indices;

  bool operator==(const PoolingSelection&) const = default;
};

PoolingSelection pool_select(std::span<const double> scores_neg,
                             std::size_t kappa);

}  // namespace ltr

#endif  // LTR_POOLING_HPP_
