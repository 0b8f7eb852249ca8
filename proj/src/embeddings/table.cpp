#include <cmath>
#include <stdexcept>

#include "lyricstat/embeddings.hpp"

namespace lyricstat {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
}

bool EmbeddingTable::set(std::string_view word, std::span<const double> vec) {
  if (vec.size() != dim_) {
    throw std::invalid_argument("vector for '" + std::string(word) + "' has dimension " +
                                std::to_string(vec.size()) + ", table has " +
                                std::to_string(dim_));
  }
  bool zero = true;
  for (double x : vec) zero = zero && x == 0.0;

  auto it = index_.find(word);
  if (it != index_.end()) {
    std::copy(vec.begin(), vec.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
    zero_[it->second] = zero;
    return false;
  }
  const std::size_t idx = words_.size();
  words_.emplace_back(word);
  index_.emplace(words_.back(), idx);
  data_.insert(data_.end(), vec.begin(), vec.end());
  zero_.push_back(zero);
  return true;
}

std::optional<std::size_t> EmbeddingTable::index_of(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool EmbeddingTable::usable(std::string_view word) const {
  auto idx = index_of(word);
  return idx && !is_zero(*idx);
}

std::size_t EmbeddingTable::zero_vector_count() const {
  std::size_t n = 0;
  for (auto z : zero_) n += z;
  return n;
}

std::span<const double> EmbeddingTable::vector(std::string_view word) const {
  auto idx = index_of(word);
  if (!idx) throw std::out_of_range("word not in embedding table: " + std::string(word));
  return vector(*idx);
}

void EmbeddingTable::scale(double factor) {
  for (double& x : data_) x *= factor;
  if (factor == 0.0) std::fill(zero_.begin(), zero_.end(), 1);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw std::invalid_argument("cosine: zero vector");
  const double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace lyricstat
