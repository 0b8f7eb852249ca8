#include "lyricstat/sgns.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "lyricstat/error.hpp"

namespace lyricstat::sgns {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double log_sigmoid(double x) {
  // log s(x) = -log(1 + e^-x), computed without overflow for large |x|.
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace

void SgnsConfig::validate() const {
  if (dim < 2) throw std::invalid_argument("sgns: dim must be >= 2");
  if (window == 0) throw std::invalid_argument("sgns: window must be positive");
  if (negatives == 0) throw std::invalid_argument("sgns: negatives must be positive");
  if (epochs == 0) throw std::invalid_argument("sgns: epochs must be positive");
  if (!(initial_learning_rate > 0)) throw std::invalid_argument("sgns: learning rate must be > 0");
  if (min_count == 0) throw std::invalid_argument("sgns: min_count must be positive");
  if (!(subsample_threshold > 0)) throw std::invalid_argument("sgns: subsample threshold must be > 0");
}

Vocabulary Vocabulary::build(const Corpus& corpus, std::uint64_t min_count) {
  WordCounts counts = corpus.empty() ? WordCounts{} : token_counts(corpus);
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [w, c] : counts) {
    if (c >= min_count) kept.emplace_back(w, c);
  }
  if (kept.empty()) throw DegenerateInputError("sgns: vocabulary is empty after min_count");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  Vocabulary v;
  v.words.reserve(kept.size());
  v.counts.reserve(kept.size());
  for (auto& [w, c] : kept) {
    v.index.emplace(w, static_cast<std::uint32_t>(v.words.size()));
    v.words.push_back(std::move(w));
    v.counts.push_back(c);
    v.total += c;
  }
  return v;
}

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> counts, double power) {
  probs_.reserve(counts.size());
  double z = 0;
  for (auto c : counts) {
    probs_.push_back(std::pow(static_cast<double>(c), power));
    z += probs_.back();
  }
  cdf_.reserve(probs_.size());
  double acc = 0;
  for (double& p : probs_) {
    p /= z;
    acc += p;
    cdf_.push_back(acc);
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double pair_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::span<const double>> negatives) {
  double loss = -log_sigmoid(dot(center, context));
  for (auto n : negatives) loss -= log_sigmoid(-dot(center, n));
  return loss;
}

PairGradient pair_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::span<const double>> negatives) {
  const std::size_t d = center.size();
  PairGradient g;
  g.center.assign(d, 0.0);
  g.context.assign(d, 0.0);
  const double gp = sigmoid(dot(center, context)) - 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    g.center[i] += gp * context[i];
    g.context[i] = gp * center[i];
  }
  for (auto n : negatives) {
    const double gn = sigmoid(dot(center, n));
    std::vector<double> gneg(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.center[i] += gn * n[i];
      gneg[i] = gn * center[i];
    }
    g.negatives.push_back(std::move(gneg));
  }
  return g;
}

void apply_pair_update(std::span<double> center, std::span<double> context,
                       std::span<const std::span<double>> negatives, double learning_rate,
                       std::span<double> scratch) {
  const std::size_t d = center.size();
  std::fill(scratch.begin(), scratch.end(), 0.0);

  // Scores first so that repeated negatives see the same old parameters.
  double neg_scores[64];
  std::vector<double> neg_scores_heap;
  double* gn = neg_scores;
  if (negatives.size() > 64) {
    neg_scores_heap.resize(negatives.size());
    gn = neg_scores_heap.data();
  }
  const double gp = sigmoid(dot(center, context)) - 1.0;
  for (std::size_t k = 0; k < negatives.size(); ++k) gn[k] = sigmoid(dot(center, negatives[k]));

  for (std::size_t i = 0; i < d; ++i) scratch[i] += gp * context[i];
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const auto n = negatives[k];
    for (std::size_t i = 0; i < d; ++i) scratch[i] += gn[k] * n[i];
  }
  for (std::size_t i = 0; i < d; ++i) context[i] -= learning_rate * gp * center[i];
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    auto n = negatives[k];
    for (std::size_t i = 0; i < d; ++i) n[i] -= learning_rate * gn[k] * center[i];
  }
  for (std::size_t i = 0; i < d; ++i) center[i] -= learning_rate * scratch[i];
}

// --- Trainer ----------------------------------------------------------------

Trainer::Trainer(const Corpus& corpus, const SgnsConfig& config)
    : config_(config),
      vocab_((config.validate(), Vocabulary::build(corpus, config.min_count))),
      sampler_(vocab_.counts) {
  const double t = config_.subsample_threshold * static_cast<double>(vocab_.total);
  keep_prob_.resize(vocab_.size());
  for (std::size_t w = 0; w < vocab_.size(); ++w) {
    const double f = static_cast<double>(vocab_.counts[w]);
    keep_prob_[w] = std::min(1.0, (std::sqrt(f / t) + 1.0) * t / f);
  }

  sentences_.reserve(corpus.size());
  for (const auto& lyric : corpus.tokenized()) {
    std::vector<std::uint32_t> s;
    s.reserve(lyric.token_count());
    lyric.for_each_token([&](std::string_view tok) {
      auto it = vocab_.index.find(tok);
      if (it != vocab_.index.end()) s.push_back(it->second);
    });
    train_words_ += s.size();
    if (s.size() >= 2) sentences_.push_back(std::move(s));
  }

  const std::size_t d = config_.dim;
  input_.resize(vocab_.size() * d);
  output_.assign(vocab_.size() * d, 0.0);
  std::mt19937_64 init_rng(splitmix64(config_.seed));
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (double& x : input_) x = u(init_rng) / static_cast<double>(d);
  current_lr_ = config_.initial_learning_rate;
}

double Trainer::rate_at(std::uint64_t processed) const {
  const double total = static_cast<double>(config_.epochs) * static_cast<double>(train_words_) + 1;
  const double lr =
      config_.initial_learning_rate * (1.0 - static_cast<double>(processed) / total);
  return std::max(lr, config_.initial_learning_rate * 1e-4);
}

template <class Rng>
std::uint64_t Trainer::train_sentence(std::span<const std::uint32_t> sentence, Rng& rng,
                                      std::vector<std::uint32_t>& kept,
                                      std::vector<double>& scratch,
                                      std::uint64_t processed_before) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> shrink(1, config_.window);
  kept.clear();
  for (auto w : sentence) {
    if (keep_prob_[w] >= 1.0 || unit(rng) < keep_prob_[w]) kept.push_back(w);
  }
  const double lr = rate_at(processed_before);
  const std::size_t d = config_.dim;
  std::vector<std::span<double>> negs;
  negs.reserve(config_.negatives);

  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::size_t b = shrink(rng);
    const std::size_t lo = i >= b ? i - b : 0;
    const std::size_t hi = std::min(kept.size() - 1, i + b);
    std::span<double> center(input_.data() + std::size_t{kept[i]} * d, d);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i) continue;
      const std::uint32_t ctx = kept[j];
      negs.clear();
      for (std::size_t k = 0; k < config_.negatives; ++k) {
        const std::uint32_t n = sampler_(rng);
        if (n == ctx) continue;
        negs.emplace_back(output_.data() + std::size_t{n} * d, d);
      }
      apply_pair_update(center, std::span<double>(output_.data() + std::size_t{ctx} * d, d), negs,
                        lr, scratch);
    }
  }
  return sentence.size();
}

void Trainer::run_epoch() {
  const std::uint64_t base = std::uint64_t{epochs_done_} * train_words_;
  if (config_.deterministic) {
    std::mt19937_64 rng(splitmix64(config_.seed ^ splitmix64(epochs_done_ + 1)));
    std::vector<std::uint32_t> kept;
    std::vector<double> scratch(config_.dim);
    std::uint64_t processed = base;
    for (const auto& s : sentences_) processed += train_sentence(s, rng, kept, scratch, processed);
  } else {
    // Lock-free updates of shared vectors from several threads: races on
    // individual coordinates are tolerated, as in the reference word2vec.
    std::atomic<std::uint64_t> processed{base};
    const auto n = static_cast<std::ptrdiff_t>(sentences_.size());
#pragma omp parallel
    {
      const auto tid = static_cast<std::uint64_t>(omp_get_thread_num());
      std::mt19937_64 rng(splitmix64(config_.seed ^ splitmix64((epochs_done_ + 1) * 1000003 + tid)));
      std::vector<std::uint32_t> kept;
      std::vector<double> scratch(config_.dim);
#pragma omp for schedule(dynamic, 32)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto& s = sentences_[static_cast<std::size_t>(i)];
        const std::uint64_t before = processed.fetch_add(s.size(), std::memory_order_relaxed);
        train_sentence(s, rng, kept, scratch, before);
      }
    }
  }
  ++epochs_done_;
  current_lr_ = rate_at(std::uint64_t{epochs_done_} * train_words_);
}

void Trainer::train() {
  while (epochs_done_ < config_.epochs) run_epoch();
}

double Trainer::loss(std::span<const Example> batch) const {
  if (batch.empty()) return 0.0;
  double total = 0;
  std::vector<std::span<const double>> negs;
  for (const auto& ex : batch) {
    negs.clear();
    for (auto n : ex.negatives) negs.push_back(output_vector(n));
    total += pair_loss(input_vector(ex.center), output_vector(ex.context), negs);
  }
  return total / static_cast<double>(batch.size());
}

std::vector<Example> Trainer::sample_examples(std::size_t n, std::uint64_t seed) const {
  std::vector<Example> out;
  if (sentences_.empty()) return out;
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_int_distribution<std::size_t> pick_sentence(0, sentences_.size() - 1);
  std::uniform_int_distribution<std::size_t> shrink(1, config_.window);
  out.reserve(n);
  while (out.size() < n) {
    const auto& s = sentences_[pick_sentence(rng)];
    std::uniform_int_distribution<std::size_t> pick_pos(0, s.size() - 1);
    const std::size_t i = pick_pos(rng);
    const std::size_t b = shrink(rng);
    const std::size_t lo = i >= b ? i - b : 0;
    const std::size_t hi = std::min(s.size() - 1, i + b);
    std::uniform_int_distribution<std::size_t> pick_ctx(lo, hi);
    const std::size_t j = pick_ctx(rng);
    if (j == i) continue;
    Example ex{s[i], s[j], {}};
    for (std::size_t k = 0; k < config_.negatives; ++k) {
      const std::uint32_t neg = sampler_(rng);
      if (neg != ex.context) ex.negatives.push_back(neg);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

EmbeddingTable Trainer::input_table() const {
  EmbeddingTable table(config_.dim);
  for (std::uint32_t w = 0; w < vocab_.size(); ++w) table.set(vocab_.words[w], input_vector(w));
  return table;
}

EmbeddingTable train_sgns(const Corpus& corpus, const SgnsConfig& config) {
  Trainer trainer(corpus, config);
  trainer.train();
  return trainer.input_table();
}

}  // namespace lyricstat::sgns
