// Online Boolean matrix-vector multiplication when the query vectors are
// predicted in advance. Work is charged per differing position only.
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynoracle/field.hpp"

namespace dynoracle {

class BoolVector {
 public:
  BoolVector() = default;
  explicit BoolVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const noexcept { return n_; }
  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  std::size_t popcount() const noexcept;
  /// Number of positions where the two vectors differ.
  std::size_t hamming(const BoolVector& other) const;

  bool operator==(const BoolVector&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n) : n_(n), rows_(n, BoolVector(n)) {}

  std::size_t size() const noexcept { return n_; }
  bool get(std::size_t r, std::size_t c) const noexcept { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool value) noexcept { rows_[r].set(c, value); }
  const BoolVector& row(std::size_t r) const noexcept { return rows_[r]; }

 private:
  std::size_t n_ = 0;
  std::vector<BoolVector> rows_;
};

class OmvState {
 public:
  OmvState(const BoolMatrix& m, std::vector<BoolVector> predicted);

  /// Answers the next query; charges n work units per position where v
  /// differs from its prediction.
  BoolVector query(const BoolVector& v);

  std::size_t cursor() const noexcept { return cursor_; }
  std::uint64_t work() const noexcept { return work_.ops; }
  /// Integer product M * predicted[i].
  const std::vector<std::uint32_t>& precomputed(std::size_t i) const { return precomputed_.at(i); }

 private:
  std::size_t n_;
  std::vector<std::vector<std::uint32_t>> columns_;  // columns_[k][j] = M[j][k]
  std::vector<BoolVector> predicted_;
  std::vector<std::vector<std::uint32_t>> precomputed_;
  std::size_t cursor_ = 0;
  OpCounter work_;
};

}  // namespace dynoracle
