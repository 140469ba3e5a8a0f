#include "ltr/scorer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ltr/errors.hpp"
#include "ltr/rng.hpp"
#include "text_util.hpp"

namespace ltr {

const char* to_string(ScorerKind kind) {
  return kind == ScorerKind::linear ? "linear" : "mlp";
}

std::optional<ScorerKind> scorer_kind_from_string(std::string_view name) {
  if (name == "linear") return ScorerKind::linear;
  if (name == "mlp") return ScorerKind::mlp;
  return std::nullopt;
}

std::size_t Scorer::param_count(std::span<const std::size_t> dims) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    n += dims[l] * dims[l + 1] + dims[l + 1];
  }
  return n;
}

void GradBuffer::reset() {
  std::fill(grad.begin(), grad.end(), 0.0);
  accumulations = 0;
}

namespace {

void validate_dims(ScorerKind kind, const std::vector<std::size_t>& dims) {
  if (dims.size() < 2) {
    throw ConfigError("layer_dims needs at least input and output sizes");
  }
  for (const std::size_t d : dims) {
    if (d == 0) throw ConfigError("layer_dims must not contain zero sizes");
  }
  if (dims.back() != 1) throw ConfigError("output dimension must be 1");
  if (kind == ScorerKind::linear && dims.size() != 2) {
    throw ConfigError("linear scorer requires exactly one weight layer");
  }
}

// post-tanh activations per layer; acts[0] is the input copy
void forward_into(const Scorer& sc, std::span<const double> x,
                  std::vector<std::vector<double>>& acts) {
  if (x.size() != sc.feature_dim()) {
    throw DataError("feature dimension mismatch: scorer expects " +
                    std::to_string(sc.feature_dim()) + ", got " +
                    std::to_string(x.size()));
  }
  acts.clear();
  acts.emplace_back(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < sc.layer_dims.size(); ++l) {
    const std::size_t in = sc.layer_dims[l];
    const std::size_t out = sc.layer_dims[l + 1];
    const double* weights = sc.params.data() + offset;
    const double* biases = weights + in * out;
    const std::vector<double>& prev = acts.back();
    std::vector<double> next(out);
    for (std::size_t o = 0; o < out; ++o) {
      double z = biases[o];
      const double* row = weights + o * in;
      for (std::size_t i = 0; i < in; ++i) z += row[i] * prev[i];
      next[o] = std::tanh(z);
    }
    offset += in * out + out;
    acts.push_back(std::move(next));
  }
}

double checked_score(const std::vector<std::vector<double>>& acts) {
  const double s = acts.back()[0];
  if (!(std::abs(s) <= 1.0)) {
    throw DataError("score outside [-1, 1]; non-finite parameters?");
  }
  return s;
}

}  // namespace

Scorer init_scorer(ScorerKind kind, std::vector<std::size_t> layer_dims,
                   std::uint64_t seed) {
  validate_dims(kind, layer_dims);
  Scorer sc;
  sc.kind = kind;
  sc.layer_dims = std::move(layer_dims);
  sc.params.reserve(Scorer::param_count(sc.layer_dims));
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < sc.layer_dims.size(); ++l) {
    const std::size_t in = sc.layer_dims[l];
    const std::size_t out = sc.layer_dims[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (std::size_t i = 0; i < in * out; ++i) {
      sc.params.push_back(rng.uniform(-limit, limit));
    }
    for (std::size_t i = 0; i < out; ++i) sc.params.push_back(0.0);
  }
  return sc;
}

double score_one(const Scorer& sc, std::span<const double> features) {
  std::vector<std::vector<double>> acts;
  forward_into(sc, features, acts);
  return checked_score(acts);
}

ScoredList score_list(const Scorer& sc, const QueryGroup& group) {
  ScoredList out;
  out.cache.layer_dims = sc.layer_dims;
  out.cache.activations.reserve(group.num_pos() + group.num_neg());
  out.scores_pos.reserve(group.num_pos());
  out.scores_neg.reserve(group.num_neg());
  for (const Candidate& cand : group.positives) {
    auto& acts = out.cache.activations.emplace_back();
    forward_into(sc, cand.features, acts);
    out.scores_pos.push_back(checked_score(acts));
  }
  for (const Candidate& cand : group.negatives) {
    auto& acts = out.cache.activations.emplace_back();
    forward_into(sc, cand.features, acts);
    out.scores_neg.push_back(checked_score(acts));
  }
  return out;
}

void backward(const Scorer& sc, const ForwardCache& cache,
              std::span<const double> dL_dscores, GradBuffer& out) {
  if (cache.layer_dims != sc.layer_dims) {
    throw DataError("forward cache does not match scorer architecture");
  }
  if (dL_dscores.size() != cache.activations.size()) {
    throw DataError("dL_dscores length does not match cached candidates");
  }
  if (out.grad.size() != sc.params.size()) {
    throw DataError("gradient buffer does not match parameter count");
  }

  std::vector<std::size_t> offsets(sc.num_layers());
  std::size_t offset = 0;
  for (std::size_t l = 0; l < sc.num_layers(); ++l) {
    offsets[l] = offset;
    offset += sc.layer_dims[l] * sc.layer_dims[l + 1] + sc.layer_dims[l + 1];
  }

  std::vector<double> delta, delta_prev;
  for (std::size_t c = 0; c < dL_dscores.size(); ++c) {
    const double g = dL_dscores[c];
    if (g == 0.0) continue;  // document-level dropout: exact zero contribution
    const auto& acts = cache.activations[c];
    const double s = acts.back()[0];
    delta.assign(1, g * (1.0 - s * s));
    for (std::size_t l = sc.num_layers(); l-- > 0;) {
      const std::size_t in = sc.layer_dims[l];
      const std::size_t out_n = sc.layer_dims[l + 1];
      const std::vector<double>& prev = acts[l];
      const double* weights = sc.params.data() + offsets[l];
      double* d_weights = out.grad.data() + offsets[l];
      double* d_biases = d_weights + in * out_n;
      for (std::size_t o = 0; o < out_n; ++o) {
        const double d = delta[o];
        double* row = d_weights + o * in;
        for (std::size_t i = 0; i < in; ++i) row[i] += d * prev[i];
        d_biases[o] += d;
      }
      if (l == 0) break;
      delta_prev.assign(in, 0.0);
      for (std::size_t o = 0; o < out_n; ++o) {
        const double d = delta[o];
        const double* row = weights + o * in;
        for (std::size_t i = 0; i < in; ++i) delta_prev[i] += d * row[i];
      }
      for (std::size_t i = 0; i < in; ++i) {
        delta_prev[i] *= 1.0 - prev[i] * prev[i];
      }
      delta.swap(delta_prev);
    }
  }
  ++out.accumulations;
}

void save_checkpoint(const Scorer& sc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "{\n  \"kind\": \"" << to_string(sc.kind) << "\",\n"
      << "  \"layer_dims\": [";
  for (std::size_t i = 0; i < sc.layer_dims.size(); ++i) {
    if (i) out << ", ";
    out << sc.layer_dims[i];
  }
  out << "],\n  \"params\": [";
  for (std::size_t i = 0; i < sc.params.size(); ++i) {
    out << (i ? ",\n    " : "\n    ") << detail::fmt_double17(sc.params[i]);
  }
  out << "\n  ]\n}\n";
  if (!out) throw DataError("failed writing " + path);
}

Scorer load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid checkpoint: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") ||
      !doc.contains("layer_dims") || !doc.contains("params") ||
      doc.size() != 3) {
    throw DataError(path + ": checkpoint must carry exactly kind, "
                           "layer_dims and params");
  }
  const auto kind = scorer_kind_from_string(
      doc["kind"].get_ref<const std::string&>());
  if (!kind) throw DataError(path + ": unknown scorer kind");
  Scorer sc;
  sc.kind = *kind;
  for (const auto& d : doc["layer_dims"]) {
    sc.layer_dims.push_back(d.get<std::size_t>());
  }
  try {
    validate_dims(sc.kind, sc.layer_dims);
  } catch (const ConfigError& e) {
    throw DataError(path + ": " + e.what());
  }
  sc.params.reserve(doc["params"].size());
  for (const auto& p : doc["params"]) {
    const double v = p.get<double>();
    if (!std::isfinite(v)) throw DataError(path + ": non-finite parameter");
    sc.params.push_back(v);
  }
  if (sc.params.size() != Scorer::param_count(sc.layer_dims)) {
    throw DataError(path + ": parameter count does not match layer_dims");
  }
  return sc;
}

}  // namespace ltr
