#include <omp.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "lyricstat/weat.hpp"

namespace lyricstat::weat {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::size_t kBlock = 4096;

// Statistic of the partition marked by `in_x`, summed in index order so the
// observed partition reproduces S exactly.
double partition_statistic(std::span<const double> all, const std::vector<char>& in_x) {
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (in_x[i]) {
      sx += all[i];
    } else {
      sy += all[i];
    }
  }
  return sx - sy;
}

struct Comparator {
  double observed;
  double tol;
  bool inclusive;
  bool counts(double s) const { return inclusive ? s >= observed - tol : s > observed + tol; }
};

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // r * num / i is exact at every step; saturate on overflow.
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t r2 = r / g, i2 = i / g;
    const std::uint64_t num2 = num / i2;
    if (num2 != 0 && r2 > std::numeric_limits<std::uint64_t>::max() / num2) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r2 * num2;
  }
  return r;
}

PValue permutation_p(std::span<const double> x_scores, std::span<const double> y_scores,
                     const PValueMode& mode) {
  const std::size_t n = x_scores.size();
  if (n != y_scores.size()) throw std::invalid_argument("permutation_p: |X| != |Y|");
  if (n < 1) throw std::invalid_argument("permutation_p: need at least one word per target set");

  std::vector<double> all(x_scores.begin(), x_scores.end());
  all.insert(all.end(), y_scores.begin(), y_scores.end());
  const std::size_t m = all.size();
  double scale = 0;
  for (double v : all) scale += std::abs(v);

  std::vector<char> observed_mask(m, 0);
  std::fill(observed_mask.begin(), observed_mask.begin() + static_cast<std::ptrdiff_t>(n), 1);
  const Comparator cmp{partition_statistic(all, observed_mask), 1e-12 * std::max(1.0, scale),
                       mode.inclusive};

  const std::uint64_t partitions = binomial(m, n);
  PValueMode::Kind kind = mode.kind;
  if (kind == PValueMode::Kind::automatic) {
    kind = partitions <= kExactPartitionBudget ? PValueMode::Kind::exact
                                               : PValueMode::Kind::monte_carlo;
  }

  if (kind == PValueMode::Kind::exact) {
    if (partitions > kExactPartitionBudget) {
      throw BudgetExceededError("exact permutation test needs C(" + std::to_string(m) + "," +
                                std::to_string(n) + ") partitions, above the budget of " +
                                std::to_string(kExactPartitionBudget) + "; use monte_carlo");
    }
    // Lexicographic walk over n-subsets of {0..m-1}.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<char> mask(m, 0);
    std::uint64_t hits = 0, total = 0;
    for (;;) {
      std::fill(mask.begin(), mask.end(), 0);
      for (auto i : idx) mask[i] = 1;
      if (cmp.counts(partition_statistic(all, mask))) ++hits;
      ++total;
      std::size_t k = n;
      while (k > 0 && idx[k - 1] == m - n + (k - 1)) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return {static_cast<double>(hits) / static_cast<double>(total), "exact"};
  }

  if (!mode.seed) throw std::invalid_argument("Monte Carlo permutation test requires a seed");
  if (mode.samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const std::uint64_t seed = *mode.seed;
  const std::size_t samples = mode.samples;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::uint64_t hits = 0;

  // Each block owns an RNG seeded from (seed, block), so the count does not
  // depend on how blocks are spread over threads.
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(blocks); ++blk) {
    const auto b = static_cast<std::size_t>(blk);
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(b + 1)));
    std::vector<std::size_t> perm(m);
    std::vector<char> mask(m);
    const std::size_t end = std::min(samples, (b + 1) * kBlock);
    for (std::size_t s = b * kBlock; s < end; ++s) {
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t k = 0; k < n; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, m - 1);
        std::swap(perm[k], perm[pick(rng)]);
      }
      std::fill(mask.begin(), mask.end(), 0);
      for (std::size_t k = 0; k < n; ++k) mask[perm[k]] = 1;
      if (cmp.counts(partition_statistic(all, mask))) ++hits;
    }
  }
  return {static_cast<double>(hits) / static_cast<double>(samples),
          "monte_carlo(n=" + std::to_string(samples) + ",seed=" + std::to_string(seed) + ")"};
}

}  // namespace lyricstat::weat
