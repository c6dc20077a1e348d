#include "dynoracle/omv.hpp"

#include <utility>

namespace dynoracle {

std::size_t BoolVector::popcount() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t BoolVector::hamming(const BoolVector& other) const {
  if (other.n_ != n_) throw ContractViolation("BoolVector::hamming: length mismatch");
  std::size_t total = 0;
  for (std::size_t i = 0; i < words_.size(); ++i)
    total += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
  return total;
}

OmvState::OmvState(const BoolMatrix& m, std::vector<BoolVector> predicted)
    : n_(m.size()), columns_(m.size()), predicted_(std::move(predicted)) {
  if (predicted_.size() != n_) throw ContractViolation("OmvState: need exactly n predictions");
  for (const auto& v : predicted_) {
    if (v.size() != n_) throw ContractViolation("OmvState: prediction length mismatch");
  }
  for (std::size_t k = 0; k < n_; ++k) {
    columns_[k].resize(n_);
    for (std::size_t j = 0; j < n_; ++j) columns_[k][j] = m.get(j, k) ? 1 : 0;
  }
  precomputed_.assign(n_, std::vector<std::uint32_t>(n_, 0));
  for (std::size_t i = 0; i < n_; ++i) {
    const auto& words = predicted_[i].words();
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& rw = m.row(j).words();
      std::uint32_t c = 0;
      for (std::size_t w = 0; w < words.size(); ++w)
        c += static_cast<std::uint32_t>(std::popcount(rw[w] & words[w]));
      precomputed_[i][j] = c;
    }
  }
}

BoolVector OmvState::query(const BoolVector& v) {
  if (cursor_ >= n_) throw ContractViolation("OmvState::query: all n queries consumed");
  if (v.size() != n_) throw ContractViolation("OmvState::query: vector length mismatch");
  const BoolVector& guess = predicted_[cursor_];
  std::vector<std::uint32_t> counts = precomputed_[cursor_];
  for (std::size_t k = 0; k < n_; ++k) {
    const bool actual = v.get(k);
    if (actual == guess.get(k)) continue;
    const auto& col = columns_[k];
    if (actual) {
      for (std::size_t j = 0; j < n_; ++j) counts[j] += col[j];
    } else {
      for (std::size_t j = 0; j < n_; ++j) counts[j] -= col[j];
    }
    work_.add(n_);
  }
  BoolVector out(n_);
  for (std::size_t j = 0; j < n_; ++j) out.set(j, counts[j] > 0);
  ++cursor_;
  return out;
}

}  // namespace dynoracle
