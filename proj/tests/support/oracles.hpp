#ifndef LTR_TESTS_SUPPORT_ORACLES_HPP_
#define LTR_TESTS_SUPPORT_ORACLES_HPP_

// Independent brute-force reference implementations and a central
// finite-difference checker. Everything here is written from the metric and
// loss definitions directly and must stay independent of the library code
// paths it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ltr/pooling.hpp"
#include "ltr/rng.hpp"

namespace oracle {

// --- pooling ---------------------------------------------------------------

struct WindowPick {
  std::vector<std::size_t> max_indices;
  std::vector<std::size_t> min_indices;
};

// linear scan per window, first occurrence wins ties
inline WindowPick pool_scan(const std::vector<double>& scores,
                            std::size_t kappa) {
  WindowPick pick;
  for (std::size_t lo = 0; lo < scores.size(); lo += kappa) {
    const std::size_t hi = std::min(lo + kappa, scores.size());
    std::size_t best_max = lo;
    std::size_t best_min = lo;
    for (std::size_t j = lo; j < hi; ++j) {
      if (scores[j] > scores[best_max]) best_max = j;
      if (scores[j] < scores[best_min]) best_min = j;
    }
    pick.max_indices.push_back(best_max);
    pick.min_indices.push_back(best_min);
  }
  return pick;
}

// --- ranking metrics ---------------------------------------------------------

// descending by score, ties by ascending index, via explicit pair sort
inline std::vector<std::size_t> argsort_desc(const std::vector<double>& s) {
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t i = 0; i < s.size(); ++i) keyed.emplace_back(-s[i], i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> order;
  for (const auto& [key, i] : keyed) order.push_back(i);
  return order;
}

inline double mrr_def(const std::vector<double>& scores,
                      const std::vector<int>& labels) {
  const auto order = argsort_desc(scores);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] > 0) return 1.0 / static_cast<double>(k + 1);
  }
  return 0.0;
}

inline double dcg_def(const std::vector<int>& ordered) {
  double dcg = 0.0;
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    dcg += (std::pow(2.0, ordered[k]) - 1.0) /
           (std::log(static_cast<double>(k + 2)) / std::log(2.0));
  }
  return dcg;
}

inline double ndcg_def(const std::vector<double>& scores,
                       const std::vector<int>& labels) {
  const auto order = argsort_desc(scores);
  std::vector<int> ranked;
  for (const std::size_t i : order) ranked.push_back(labels[i]);
  std::vector<int> ideal = labels;
  std::sort(ideal.rbegin(), ideal.rend());
  const double idcg = dcg_def(ideal);
  if (idcg == 0.0) return 0.0;
  return dcg_def(ranked) / idcg;
}

inline double map_def(const std::vector<double>& scores,
                      const std::vector<int>& labels) {
  std::size_t relevant = 0;
  for (const int l : labels) {
    if (l > 0) ++relevant;
  }
  if (relevant == 0) return 0.0;
  const auto order = argsort_desc(scores);
  double sum = 0.0;
  std::size_t seen = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] > 0) {
      ++seen;
      sum += static_cast<double>(seen) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(relevant);
}

// --- finite differences ------------------------------------------------------

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

// central finite differences of f over x, h = 1e-5
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h = 1e-5) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f(x);
    x[i] = saved - h;
    const double down = f(x);
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline double max_rel_err(const std::vector<double>& analytic,
                          const std::vector<double>& numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    // both effectively zero: agreement, not a ratio
    if (std::abs(analytic[i]) < 1e-10 && std::abs(numeric[i]) < 1e-10) {
      continue;
    }
    worst = std::max(worst, rel_err(analytic[i], numeric[i]));
  }
  return worst;
}

// --- random instances --------------------------------------------------------

inline std::vector<double> random_scores(ltr::Rng& rng, std::size_t n,
                                         double lo = -0.95, double hi = 0.95) {
  std::vector<double> s(n);
  for (double& v : s) v = rng.uniform(lo, hi);
  return s;
}

inline std::vector<int> random_labels(ltr::Rng& rng, std::size_t n,
                                      int max_grade = 2,
                                      bool force_relevant = true) {
  std::vector<int> labels(n);
  for (int& l : labels) {
    l = static_cast<int>(rng.index(static_cast<std::size_t>(max_grade) + 1));
  }
  if (force_relevant) {
    bool any = false;
    for (const int l : labels) any |= l > 0;
    if (!any) labels[rng.index(n)] = 1;
  }
  return labels;
}

// margin-style instance with every hinge at least `margin` away from its kink
inline void make_safe_pair_instance(ltr::Rng& rng, std::size_t num_pos,
                                    std::size_t num_neg,
                                    std::vector<double>& pos,
                                    std::vector<double>& neg,
                                    double margin = 1e-3) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    pos = random_scores(rng, num_pos);
    neg = random_scores(rng, num_neg);
    bool safe = true;
    for (const double p : pos) {
      for (const double n : neg) {
        if (std::abs(1.0 - p + n) <= margin) safe = false;
      }
    }
    if (safe) return;
  }
}

// pooling instance whose selection is stable under +-h perturbations and
// whose L_min hinges sit away from their kinks
inline void make_safe_poolrank_instance(ltr::Rng& rng, std::size_t num_pos,
                                        std::size_t num_neg, std::size_t kappa,
                                        std::vector<double>& pos,
                                        std::vector<double>& neg,
                                        double margin = 1e-3) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    pos = random_scores(rng, num_pos);
    neg = random_scores(rng, num_neg);
    double avg = 0.0;
    for (const double p : pos) avg += p;
    avg /= static_cast<double>(num_pos);
    bool safe = true;
    for (std::size_t lo = 0; lo < neg.size() && safe; lo += kappa) {
      const std::size_t hi = std::min(lo + kappa, neg.size());
      std::vector<double> window(neg.begin() + lo, neg.begin() + hi);
      std::sort(window.begin(), window.end());
      if (window.size() > 1) {
        // unique strict argmin and argmax
        if (window[1] - window[0] <= margin) safe = false;
        if (window[window.size() - 1] - window[window.size() - 2] <= margin) {
          safe = false;
        }
      }
      if (std::abs(1.0 - avg + window.front()) <= margin) safe = false;
    }
    if (safe) return;
  }
}

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace oracle

#endif  // LTR_TESTS_SUPPORT_ORACLES_HPP_
