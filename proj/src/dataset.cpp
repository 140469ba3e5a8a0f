#include "ltr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "ltr/errors.hpp"
#include "ltr/rng.hpp"
#include "text_util.hpp"

namespace ltr {

namespace {

using detail::fmt_double;
using detail::parse_number;
using detail::trim;

struct RawCandidate {
  int label = 0;
  std::string qid;
  std::vector<std::pair<std::size_t, double>> feats;  // strictly increasing fid
  std::string doc_id;  // empty when the line had no comment
};

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& msg) {
  throw DataError(path + ":" + std::to_string(line_no) + ": " + msg);
}

RawCandidate parse_letor_line(const std::string& path, std::size_t line_no,
                              std::string_view line) {
  RawCandidate cand;
  const std::size_t hash = line.find('#');
  if (hash != std::string_view::npos) {
    cand.doc_id = std::string(trim(line.substr(hash + 1)));
    line = line.substr(0, hash);
  }

  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    if (end > pos) tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  if (tokens.size() < 2) {
    parse_fail(path, line_no, "expected `<label> qid:<id> ...`");
  }
  if (!parse_number(tokens[0], cand.label) || cand.label < 0) {
    parse_fail(path, line_no,
               "bad label '" + std::string(tokens[0]) +
                   "' (non-negative integer required)");
  }
  if (!tokens[1].starts_with("qid:") || tokens[1].size() == 4) {
    parse_fail(path, line_no, "missing qid:<id> token");
  }
  cand.qid = std::string(tokens[1].substr(4));

  std::size_t prev_fid = 0;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const std::string_view tok = tokens[i];
    const std::size_t colon = tok.find(':');
    if (colon == std::string_view::npos || colon == 0 ||
        colon + 1 == tok.size()) {
      parse_fail(path, line_no,
                 "bad feature token '" + std::string(tok) + "'");
    }
    std::size_t fid = 0;
    double value = 0.0;
    if (!parse_number(tok.substr(0, colon), fid) || fid == 0) {
      parse_fail(path, line_no,
                 "bad feature id in '" + std::string(tok) + "'");
    }
    if (!parse_number(tok.substr(colon + 1), value)) {
      parse_fail(path, line_no,
                 "bad feature value in '" + std::string(tok) + "'");
    }
    if (fid <= prev_fid) {
      parse_fail(path, line_no, "feature ids not strictly increasing");
    }
    prev_fid = fid;
    cand.feats.emplace_back(fid, value);
  }
  return cand;
}

}  // namespace

Dataset load_letor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  std::vector<RawCandidate> raw;
  std::size_t max_fid = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    raw.push_back(parse_letor_line(path, line_no, line));
    if (!raw.back().feats.empty()) {
      max_fid = std::max(max_fid, raw.back().feats.back().first);
    }
  }
  if (raw.empty()) throw DataError(path + ": empty dataset");

  Dataset ds;
  ds.feature_dim = max_fid;
  ds.provenance = Provenance::letor_file;
  std::unordered_map<std::string, std::size_t> group_index;
  for (auto& rc : raw) {
    auto [it, inserted] = group_index.try_emplace(rc.qid, ds.groups.size());
    if (inserted) {
      ds.groups.push_back(QueryGroup{rc.qid, {}, {}});
    }
    QueryGroup& group = ds.groups[it->second];
    Candidate cand;
    cand.label = rc.label;
    cand.features.assign(max_fid, 0.0);
    for (const auto& [fid, value] : rc.feats) cand.features[fid - 1] = value;
    cand.doc_id = rc.doc_id.empty()
                      ? rc.qid + ":" +
                            std::to_string(group.num_pos() + group.num_neg())
                      : std::move(rc.doc_id);
    if (cand.label > 0) {
      group.positives.push_back(std::move(cand));
    } else {
      group.negatives.push_back(std::move(cand));
    }
  }
  return ds;
}

namespace {

void write_letor_candidate(std::ostream& out, const std::string& qid,
                           const Candidate& cand) {
  out << cand.label << " qid:" << qid;
  for (std::size_t f = 0; f < cand.features.size(); ++f) {
    out << ' ' << (f + 1) << ':' << fmt_double(cand.features[f]);
  }
  out << " # " << cand.doc_id << '\n';
}

}  // namespace

void save_letor(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF on every platform
  if (!out) throw DataError("cannot write " + path);
  for (const QueryGroup& group : ds.groups) {
    for (const Candidate& cand : group.positives) {
      write_letor_candidate(out, group.query_id, cand);
    }
    for (const Candidate& cand : group.negatives) {
      write_letor_candidate(out, group.query_id, cand);
    }
  }
  if (!out) throw DataError("failed writing " + path);
}

namespace {

void validate(const SynthConfig& cfg) {
  if (cfg.num_queries == 0) throw ConfigError("num_queries must be >= 1");
  if (cfg.docs_per_query == 0) throw ConfigError("docs_per_query must be >= 1");
  if (cfg.feature_dim == 0) throw ConfigError("feature_dim must be >= 1");
  if (cfg.true_relevant_per_query == 0) {
    throw ConfigError("true_relevant_per_query must be >= 1");
  }
  if (cfg.true_relevant_per_query >= cfg.docs_per_query) {
    throw ConfigError("true_relevant_per_query must be < docs_per_query");
  }
  if (cfg.mislabel_fraction < 0.0 || cfg.mislabel_fraction >= 1.0) {
    throw ConfigError("mislabel_fraction must lie in [0, 1)");
  }
  if (cfg.noise_std < 0.0) throw ConfigError("noise_std must be >= 0");
}

}  // namespace

Dataset generate_synthetic(const SynthConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);

  // hidden unit-norm utility direction
  std::vector<double> w(cfg.feature_dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : w) {
      v = rng.normal();
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& v : w) v /= norm;

  const std::size_t r = cfg.true_relevant_per_query;
  // 1e-9 nudge keeps floor(r*f) at its exact-rational value when r*f lands
  // just below an integer in floating point (e.g. 5 * 0.6)
  const std::size_t mislabeled = std::min(
      r - 1, static_cast<std::size_t>(
                 std::floor(static_cast<double>(r) * cfg.mislabel_fraction +
                            1e-9)));

  Dataset ds;
  ds.feature_dim = cfg.feature_dim;
  ds.provenance = Provenance::synthetic;
  ds.groups.reserve(cfg.num_queries);

  std::vector<std::vector<double>> features(cfg.docs_per_query);
  std::vector<double> utility(cfg.docs_per_query);
  for (std::size_t q = 0; q < cfg.num_queries; ++q) {
    for (std::size_t d = 0; d < cfg.docs_per_query; ++d) {
      auto& x = features[d];
      x.resize(cfg.feature_dim);
      double u = 0.0;
      for (std::size_t f = 0; f < cfg.feature_dim; ++f) {
        x[f] = rng.normal();
        u += w[f] * x[f];
      }
      utility[d] = u + cfg.noise_std * rng.normal();
    }

    std::vector<std::size_t> order(cfg.docs_per_query);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                     std::size_t b) {
      return utility[a] > utility[b];
    });

    std::vector<bool> truly_relevant(cfg.docs_per_query, false);
    for (std::size_t i = 0; i < r; ++i) truly_relevant[order[i]] = true;

    std::vector<bool> hidden(cfg.docs_per_query, false);
    for (const std::size_t pick : rng.sample_indices(r, mislabeled)) {
      hidden[order[pick]] = true;
    }

    QueryGroup group;
    group.query_id = std::to_string(q + 1);
    for (std::size_t d = 0; d < cfg.docs_per_query; ++d) {
      Candidate cand;
      cand.features = features[d];
      cand.label = (truly_relevant[d] && !hidden[d]) ? 1 : 0;
      cand.doc_id = "d" + std::to_string(d) +
                    (truly_relevant[d] ? "_t1" : "_t0");
      if (cand.label > 0) {
        group.positives.push_back(std::move(cand));
      } else {
        group.negatives.push_back(std::move(cand));
      }
    }
    ds.groups.push_back(std::move(group));
  }
  return ds;
}

namespace {

int truth_label_of(const Candidate& cand) {
  const std::size_t pos = cand.doc_id.rfind("_t");
  int label = 0;
  if (pos == std::string::npos ||
      !parse_number(std::string_view(cand.doc_id).substr(pos + 2), label) ||
      label < 0) {
    throw DataError("candidate '" + cand.doc_id +
                    "' carries no ground-truth suffix");
  }
  return label;
}

}  // namespace

TruthTable truth_from_doc_ids(const Dataset& ds) {
  TruthTable truth;
  for (const QueryGroup& group : ds.groups) {
    auto& per_query = truth[group.query_id];
    for (const Candidate& cand : group.positives) {
      per_query[cand.doc_id] = truth_label_of(cand);
    }
    for (const Candidate& cand : group.negatives) {
      per_query[cand.doc_id] = truth_label_of(cand);
    }
  }
  return truth;
}

void save_truth(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  for (const QueryGroup& group : ds.groups) {
    for (const Candidate& cand : group.positives) {
      out << group.query_id << '\t' << cand.doc_id << '\t'
          << truth_label_of(cand) << '\n';
    }
    for (const Candidate& cand : group.negatives) {
      out << group.query_id << '\t' << cand.doc_id << '\t'
          << truth_label_of(cand) << '\n';
    }
  }
  if (!out) throw DataError("failed writing " + path);
}

TruthTable load_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  TruthTable truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 =
        t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    int label = 0;
    if (t2 == std::string::npos ||
        !parse_number(std::string_view(line).substr(t2 + 1), label) ||
        label < 0) {
      parse_fail(path, line_no, "expected `<qid>\\t<doc_id>\\t<label>`");
    }
    truth[line.substr(0, t1)][line.substr(t1 + 1, t2 - t1 - 1)] = label;
  }
  if (truth.empty()) throw DataError(path + ": empty truth sidecar");
  return truth;
}

Dataset build_lists(const Dataset& ds, std::size_t negatives_per_query,
                    std::uint64_t seed, BuildStats* stats) {
  if (negatives_per_query == 0) {
    throw ConfigError("negatives_per_query must be >= 1");
  }
  Rng rng(seed);
  Dataset out;
  out.feature_dim = ds.feature_dim;
  out.provenance = ds.provenance;
  BuildStats local;
  for (const QueryGroup& group : ds.groups) {
    if (group.positives.empty()) {
      ++local.dropped_no_positive;
      continue;
    }
    if (group.negatives.empty()) {
      ++local.dropped_no_negative;
      continue;
    }
    const std::size_t total = group.negatives.size();
    const std::size_t keep = std::min(total, negatives_per_query);
    QueryGroup sampled;
    sampled.query_id = group.query_id;
    sampled.positives = group.positives;
    sampled.negatives.reserve(keep);
    for (const std::size_t i : rng.sample_indices(total, keep)) {
      sampled.negatives.push_back(group.negatives[i]);
    }
    out.groups.push_back(std::move(sampled));
  }
  if (stats) *stats = local;
  return out;
}

std::array<Dataset, 3> split(const Dataset& ds,
                             const std::array<double, 3>& fractions,
                             std::uint64_t seed) {
  double sum = 0.0;
  std::size_t nonzero = 0;
  for (const double f : fractions) {
    if (f < 0.0) throw ConfigError("split fractions must be >= 0");
    if (f > 0.0) ++nonzero;
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
  if (nonzero == 0) throw ConfigError("split fractions are all zero");
  const std::size_t n = ds.groups.size();
  if (n < nonzero) {
    throw DataError("fewer groups than nonzero split fractions");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    const double exact = fractions[s] * static_cast<double>(n);
    counts[s] = static_cast<std::size_t>(std::floor(exact));
    remainder[s] = exact - std::floor(exact);
    assigned += counts[s];
  }
  // largest remainder first, ties to the earlier split
  std::array<std::size_t, 3> by_remainder{0, 1, 2};
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) {
                     return remainder[a] > remainder[b];
                   });
  for (std::size_t i = 0; assigned < n; ++i) {
    ++counts[by_remainder[i % 3]];
    ++assigned;
  }

  std::array<Dataset, 3> parts;
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    std::vector<std::size_t> chosen(order.begin() + cursor,
                                    order.begin() + cursor + counts[s]);
    cursor += counts[s];
    std::sort(chosen.begin(), chosen.end());
    parts[s].feature_dim = ds.feature_dim;
    parts[s].provenance = ds.provenance;
    parts[s].groups.reserve(chosen.size());
    for (const std::size_t g : chosen) parts[s].groups.push_back(ds.groups[g]);
  }
  return parts;
}

}  // namespace ltr
