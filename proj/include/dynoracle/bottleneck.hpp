// (min,max) algebra over integers extended with -inf/+inf, and hop-bounded
// all-pairs bottleneck paths.
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "dynoracle/field.hpp"

namespace dynoracle {

using Weight = std::int64_t;
inline constexpr Weight kMinusInf = std::numeric_limits<Weight>::min();
inline constexpr Weight kPlusInf = std::numeric_limits<Weight>::max();

class BottleneckMatrix {
 public:
  BottleneckMatrix() = default;
  /// n x n matrix filled with `fill`.
  explicit BottleneckMatrix(std::size_t n, Weight fill = kPlusInf);

  /// -inf on the diagonal, +inf elsewhere: the identity of the product.
  static BottleneckMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  Weight& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
  Weight operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }
  const Weight* row(std::size_t r) const noexcept { return data_.data() + r * n_; }

  bool operator==(const BottleneckMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Weight> data_;
};

/// (a * b)[i][j] = min_k max(a[i][k], b[k][j]).
BottleneckMatrix minmax_product(const BottleneckMatrix& a, const BottleneckMatrix& b,
                                OpCounter* counter = nullptr);

/// Bottleneck values over paths with at most d edges. w must have -inf on
/// its diagonal.
BottleneckMatrix hop_bounded_apbp(const BottleneckMatrix& w, std::size_t d,
                                  OpCounter* counter = nullptr);

struct LadderRung {
  std::size_t hops;
  BottleneckMatrix bottleneck;
};

/// Hop bounds ceil((1+eps)^k), deduplicated, up to the first value >= n,
/// each with its hop-bounded matrix. eps = +inf gives the single rung d = n.
std::vector<LadderRung> build_d_ladder(const BottleneckMatrix& w, double eps, std::size_t n,
                                       OpCounter* counter = nullptr);

/// Just the hop values build_d_ladder would use.
std::vector<std::size_t> ladder_hops(double eps, std::size_t n);

}  // namespace dynoracle
