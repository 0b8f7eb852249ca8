#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lyricstat/corpus.hpp"
#include "lyricstat/embeddings.hpp"

namespace lyricstat::sgns {

struct SgnsConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double initial_learning_rate = 0.025;
  std::uint64_t min_count = 5;
  double subsample_threshold = 1e-3;
  std::uint64_t seed = 1;
  /// Single-threaded and bit-reproducible when true; lock-free parallel
  /// (statistically reproducible only) when false.
  bool deterministic = true;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Vocabulary kept after min_count, ordered by descending count then word.
struct Vocabulary {
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> index;
  std::uint64_t total = 0;

  static Vocabulary build(const Corpus& corpus, std::uint64_t min_count);
  std::size_t size() const { return words.size(); }
};

/// Draws word indices with probability proportional to count^0.75.
class NegativeSampler {
 public:
  explicit NegativeSampler(std::span<const std::uint64_t> counts, double power = 0.75);

  /// Inverse-CDF draw; const and safe to share between threads.
  template <class Rng>
  std::uint32_t operator()(Rng& rng) const {
    const double u = std::generate_canonical<double, 53>(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::uint32_t>(it - cdf_.begin());
  }
  std::span<const double> probabilities() const { return probs_; }

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

double sigmoid(double x);

/// -log s(c.o) - sum_k log s(-c.n_k) for one (center, context, negatives) triple.
double pair_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::span<const double>> negatives);

struct PairGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

/// Analytic gradient of pair_loss with respect to each argument.
PairGradient pair_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::span<const double>> negatives);

/// One SGD step on pair_loss, in place: every argument moves by
/// -learning_rate * gradient, with all gradients taken at the old values.
/// `scratch` must have the vectors' dimension.
void apply_pair_update(std::span<double> center, std::span<double> context,
                       std::span<const std::span<double>> negatives, double learning_rate,
                       std::span<double> scratch);

/// A (center, context, negatives) triple in vocabulary indices.
struct Example {
  std::uint32_t center = 0;
  std::uint32_t context = 0;
  std::vector<std::uint32_t> negatives;
};

/// Skip-gram negative-sampling trainer over a tokenized corpus. Each song's
/// token sequence is one training sentence.
class Trainer {
 public:
  Trainer(const Corpus& corpus, const SgnsConfig& config);

  void run_epoch();
  void train();  // remaining epochs up to config.epochs
  std::size_t epochs_done() const { return epochs_done_; }

  const Vocabulary& vocabulary() const { return vocab_; }
  const NegativeSampler& sampler() const { return sampler_; }
  double learning_rate() const { return current_lr_; }

  /// Mean pair_loss over `batch` at the current parameters.
  double loss(std::span<const Example> batch) const;
  /// Draws `n` training examples with the same window and sampling rules as
  /// training, from an RNG seeded with `seed`.
  std::vector<Example> sample_examples(std::size_t n, std::uint64_t seed) const;

  /// Copy of the input (word) vectors.
  EmbeddingTable input_table() const;

  std::span<const double> input_vector(std::uint32_t w) const {
    return {input_.data() + std::size_t{w} * config_.dim, config_.dim};
  }
  std::span<const double> output_vector(std::uint32_t w) const {
    return {output_.data() + std::size_t{w} * config_.dim, config_.dim};
  }

 private:
  template <class Rng>
  std::uint64_t train_sentence(std::span<const std::uint32_t> sentence, Rng& rng,
                               std::vector<std::uint32_t>& kept, std::vector<double>& scratch,
                               std::uint64_t processed_before);
  double rate_at(std::uint64_t processed) const;

  SgnsConfig config_;
  Vocabulary vocab_;
  NegativeSampler sampler_;
  std::vector<double> keep_prob_;
  std::vector<std::vector<std::uint32_t>> sentences_;
  std::uint64_t train_words_ = 0;
  std::vector<double> input_;
  std::vector<double> output_;
  std::size_t epochs_done_ = 0;
  double current_lr_ = 0;
};

/// Builds the vocabulary, trains all epochs and returns the input vectors.
/// Throws DegenerateInputError when no word reaches min_count.
EmbeddingTable train_sgns(const Corpus& corpus, const SgnsConfig& config);

}  // namespace lyricstat::sgns
