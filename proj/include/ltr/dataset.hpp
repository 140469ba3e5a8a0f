#ifndef LTR_DATASET_HPP_
#define LTR_DATASET_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace ltr {

struct Candidate {
  std::vector<double> features;  // dense, dataset-wide dimension
  int label = 0;                 // relevance grade, >= 0
  std::string doc_id;

  bool operator==(const Candidate&) const = default;
};

// One query's candidate list, partitioned by label: positives have label > 0,
// negatives label == 0.
struct QueryGroup {
  std::string query_id;
  std::vector<Candidate> positives;
  std::vector<Candidate> negatives;

  std::size_t num_pos() const { return positives.size(); }
  std::size_t num_neg() const { return negatives.size(); }
  bool operator==(const QueryGroup&) const = default;
};

enum class Provenance { letor_file, synthetic };

struct Dataset {
  std::vector<QueryGroup> groups;
  std::size_t feature_dim = 0;
  Provenance provenance = Provenance::letor_file;

  bool operator==(const Dataset&) const = default;
};

struct SynthConfig {
  std::size_t num_queries = 0;
  std::size_t docs_per_query = 0;
  std::size_t feature_dim = 0;
  std::size_t true_relevant_per_query = 0;
  double mislabel_fraction = 0.0;  // in [0, 1)
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

// query_id -> doc_id -> relevance label (pre-mislabeling ground truth)
using TruthTable =
    std::unordered_map<std::string, std::unordered_map<std::string, int>>;

// Parses `<label> qid:<id> <fid>:<val> ... [# comment]` lines, grouping
// candidates by qid in file order. Feature vectors are densified to the
// file-wide maximum feature id, missing ids filled with 0.0. A trailing
// comment, when present, becomes the candidate's doc_id.
Dataset load_letor(const std::string& path);

// Writes the dataset back in the same format with dense feature lists and a
// `# <doc_id>` trailing comment. load_letor(save_letor(ds)) == ds.
void save_letor(const Dataset& ds, const std::string& path);

// Plants a hidden linear utility: a unit-norm weight vector scores i.i.d.
// standard-normal feature vectors plus Gaussian noise; per query the top
// `true_relevant_per_query` docs are truly relevant, and a mislabel_fraction
// share of them (rounded down, always leaving at least one) is labeled 0.
// The pre-mislabeling relevance is kept in a `_t0`/`_t1` doc_id suffix.
Dataset generate_synthetic(const SynthConfig& cfg);

// Recovers ground-truth labels from the `_t<label>` doc_id suffix.
TruthTable truth_from_doc_ids(const Dataset& ds);

// Sidecar format: one `<qid>\t<doc_id>\t<true_label>` line per candidate.
void save_truth(const Dataset& ds, const std::string& path);
TruthTable load_truth(const std::string& path);

struct BuildStats {
  std::size_t dropped_no_positive = 0;
  std::size_t dropped_no_negative = 0;
};

// Keeps every positive and a uniform sample without replacement of
// min(M, negatives_per_query) negatives per group; the sampled order is the
// stored order from here on. Groups without positives (or without negatives)
// are dropped and counted in stats.
Dataset build_lists(const Dataset& ds, std::size_t negatives_per_query,
                    std::uint64_t seed, BuildStats* stats = nullptr);

// Query-level partition into train/valid/test by floor-then-largest-remainder
// counts over a seeded shuffle; groups keep their original relative order.
std::array<Dataset, 3> split(const Dataset& ds,
                             const std::array<double, 3>& fractions,
                             std::uint64_t seed);

}  // namespace ltr

#endif  // LTR_DATASET_HPP_
