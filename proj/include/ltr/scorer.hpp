#ifndef LTR_SCORER_HPP_
#define LTR_SCORER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltr/dataset.hpp"

namespace ltr {

enum class ScorerKind { linear, mlp };

const char* to_string(ScorerKind kind);
std::optional<ScorerKind> scorer_kind_from_string(std::string_view name);

// Feed-forward scorer with tanh on every layer output including the last, so
// every emitted score lies in [-1, 1]. Parameters are stored flat, layer by
// layer: weights in [out][in] row-major order, then the layer's biases.
struct Scorer {
  ScorerKind kind = ScorerKind::linear;
  std::vector<std::size_t> layer_dims;  // { input, hidden..., 1 }
  std::vector<double> params;

  std::size_t feature_dim() const { return layer_dims.front(); }
  std::size_t num_layers() const { return layer_dims.size() - 1; }
  bool operator==(const Scorer&) const = default;

  static std::size_t param_count(std::span<const std::size_t> dims);
};

// Parameter-gradient accumulator with the same layout as Scorer::params.
struct GradBuffer {
  std::vector<double> grad;
  std::size_t accumulations = 0;

  GradBuffer() = default;
  explicit GradBuffer(std::size_t n) : grad(n, 0.0) {}
  void reset();
};

// Forward activations for one scored group, consumed by backward().
// activations[c][0] is candidate c's input; activations[c][l] the post-tanh
// output of layer l.
struct ForwardCache {
  std::vector<std::size_t> layer_dims;
  std::vector<std::vector<std::vector<double>>> activations;
};

struct ScoredList {
  std::vector<double> scores_pos;
  std::vector<double> scores_neg;
  ForwardCache cache;
};

// Glorot-uniform weights, zero biases, deterministic given seed.
Scorer init_scorer(ScorerKind kind, std::vector<std::size_t> layer_dims,
                   std::uint64_t seed);

double score_one(const Scorer& sc, std::span<const double> features);

// Scores positives then negatives, caching activations for backward().
ScoredList score_list(const Scorer& sc, const QueryGroup& group);

// Accumulates sum_c dL/ds_c * ds_c/dtheta into out. dL_dscores is laid out
// positives first, then negatives, matching score_list. Candidates whose
// upstream gradient is exactly 0.0 are skipped and contribute nothing.
void backward(const Scorer& sc, const ForwardCache& cache,
              std::span<const double> dL_dscores, GradBuffer& out);

// Checkpoint: a JSON document with kind, layer_dims, and the flat parameter
// vector printed with 17 significant digits (lossless for double precision).
void save_checkpoint(const Scorer& sc, const std::string& path);
Scorer load_checkpoint(const std::string& path);

}  // namespace ltr

#endif  // LTR_SCORER_HPP_
