#include "dynoracle/bottleneck.hpp"

#include <algorithm>
#include <cmath>

namespace dynoracle {

BottleneckMatrix::BottleneckMatrix(std::size_t n, Weight fill) : n_(n), data_(n * n, fill) {}

BottleneckMatrix BottleneckMatrix::identity(std::size_t n) {
  BottleneckMatrix m(n, kPlusInf);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = kMinusInf;
  return m;
}

BottleneckMatrix minmax_product(const BottleneckMatrix& a, const BottleneckMatrix& b,
                                OpCounter* counter) {
  if (a.size() != b.size()) throw ContractViolation("minmax_product: dimension mismatch");
  const std::size_t n = a.size();
  BottleneckMatrix c(n, kPlusInf);
  std::uint64_t ops = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Weight* arow = a.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      Weight best = kPlusInf;
      for (std::size_t k = 0; k < n; ++k) {
        ++ops;
        const Weight v = std::max(arow[k], b(k, j));
        if (v < best) {
          best = v;
          if (best == kMinusInf) break;
        }
      }
      c(i, j) = best;
    }
  }
  count(counter, ops);
  return c;
}

namespace {

// squares[j] = w^(2^j); returns the product of the squares selected by d's bits.
BottleneckMatrix power_from_squares(const std::vector<BottleneckMatrix>& squares, std::size_t d,
                                    OpCounter* counter) {
  BottleneckMatrix result;
  bool have = false;
  for (std::size_t j = 0; d != 0; ++j, d >>= 1) {
    if ((d & 1) == 0) continue;
    if (!have) {
      result = squares[j];
      have = true;
    } else {
      result = minmax_product(result, squares[j], counter);
    }
  }
  return result;
}

void extend_squares(std::vector<BottleneckMatrix>& squares, std::size_t d, OpCounter* counter) {
  while ((std::size_t{1} << (squares.size() - 1)) * 2 <= d) {
    squares.push_back(minmax_product(squares.back(), squares.back(), counter));
  }
}

}  // namespace

BottleneckMatrix hop_bounded_apbp(const BottleneckMatrix& w, std::size_t d, OpCounter* counter) {
  if (d == 0) throw ContractViolation("hop_bounded_apbp: hop bound must be positive");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w(i, i) != kMinusInf) throw ContractViolation("hop_bounded_apbp: diagonal must be -inf");
  }
  std::vector<BottleneckMatrix> squares{w};
  extend_squares(squares, d, counter);
  return power_from_squares(squares, d, counter);
}

std::vector<std::size_t> ladder_hops(double eps, std::size_t n) {
  if (!(eps > 0)) throw ContractViolation("ladder_hops: eps must be positive");
  const std::size_t target = std::max<std::size_t>(n, 1);
  if (std::isinf(eps)) return {target};
  std::vector<std::size_t> hops;
  for (int k = 0;; ++k) {
    const double x = std::pow(1.0 + eps, k);
    // tolerance keeps exact powers such as 1.5^2 = 2.25 from rounding up twice
    const auto d = static_cast<std::size_t>(std::ceil(x - 1e-9));
    if (hops.empty() || d > hops.back()) hops.push_back(d);
    if (hops.back() >= target) break;
  }
  return hops;
}

std::vector<LadderRung> build_d_ladder(const BottleneckMatrix& w, double eps, std::size_t n,
                                       OpCounter* counter) {
  const auto hops = ladder_hops(eps, n);
  std::vector<BottleneckMatrix> squares{w};
  std::vector<LadderRung> ladder;
  ladder.reserve(hops.size());
  for (std::size_t d : hops) {
    extend_squares(squares, d, counter);
    ladder.push_back({d, power_from_squares(squares, d, counter)});
  }
  return ladder;
}

}  // namespace dynoracle
