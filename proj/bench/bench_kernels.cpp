// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to the
// number of cores to compare.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "lyricstat/style.hpp"
#include "lyricstat/weat.hpp"

using namespace lyricstat;

namespace {

const Corpus& bench_corpus() {
  static const Corpus corpus = [] {
    std::mt19937_64 rng(1);
    std::vector<std::string> vocab;
    for (int i = 0; i < 3000; ++i) vocab.push_back("w" + std::to_string(i));
    std::vector<double> weights(vocab.size());
    for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = 1.0 / double(i + 1);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::vector<SongRecord> recs;
    std::vector<TokenizedLyric> toks;
    for (int s = 0; s < 20000; ++s) {
      SongRecord r;
      r.id = "s" + std::to_string(s);
      r.year = 1960 + s % 50;
      r.cohort = s % 5 == 0 ? Cohort::popular : Cohort::other;
      r.duration_seconds = 200.0 + s % 100;
      std::vector<std::vector<std::string>> lines(30);
      for (auto& line : lines) {
        for (int i = 0; i < 10; ++i) line.push_back(vocab[pick(rng)]);
      }
      toks.emplace_back(r.id, lines);
      recs.push_back(std::move(r));
    }
    return Corpus(std::move(recs), std::move(toks), {});
  }();
  return corpus;
}

const style::Lexicon& lexicon() {
  static const style::Lexicon lex({"w5", "w17", "w99"}, "bench");
  return lex;
}

void BM_metrics_serial(benchmark::State& state) {
  const Corpus& corpus = bench_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(style::serial::compute_all(corpus, lexicon()));
}
void BM_metrics_parallel(benchmark::State& state) {
  const Corpus& corpus = bench_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(style::compute_all(corpus, lexicon()));
}
void BM_token_counts_serial(benchmark::State& state) {
  const Corpus& corpus = bench_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(serial::token_counts(corpus));
}
void BM_token_counts_parallel(benchmark::State& state) {
  const Corpus& corpus = bench_corpus();
  for (auto _ : state) benchmark::DoNotOptimize(token_counts(corpus));
}

// Monte Carlo p-value at 1 thread vs all threads; the result is identical.
void BM_monte_carlo(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<double> x(25), y(25);
  for (auto& v : x) v = g(rng) + 0.05;
  for (auto& v : y) v = g(rng);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(state.range(0) == 0 ? saved : static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(weat::permutation_p(x, y, weat::PValueMode::monte_carlo(100000, 3)));
  }
  omp_set_num_threads(saved);
}

}  // namespace

BENCHMARK(BM_metrics_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_metrics_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_token_counts_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_token_counts_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_monte_carlo)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
