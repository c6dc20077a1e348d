#include "dynoracle/field.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>

namespace dynoracle {

namespace {

bool is_prime(Residue p) {
  if (p < 2) return false;
  for (Residue d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

void require_same_field(const FieldMatrix& a, const FieldMatrix& b, const char* op) {
  if (!(a.field() == b.field())) {
    throw ContractViolation(std::string(op) + ": operands live in different fields");
  }
}

// Products of two residues are < 2^62, so four of them plus a reduced
// accumulator still fit in 64 bits.
constexpr std::size_t kFoldEvery = 4;

void fold_all(const PrimeField& f, std::span<std::uint64_t> acc) {
  for (auto& x : acc) x = f.reduce(x);
}

}  // namespace

PrimeField::PrimeField(Residue p) : p_(p), mersenne_(p == kMersenne31) {
  if (p >= (Residue{1} << 31) + 1 || !is_prime(p)) {
    throw ContractViolation("PrimeField: modulus must be a prime below 2^31");
  }
}

Residue PrimeField::pow(Residue base, std::uint64_t exp) const noexcept {
  Residue result = 1 % p_;
  base %= p_;
  while (exp > 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw std::domain_error("PrimeField::inv: zero has no inverse");
  return pow(a, p_ - 2);
}

Residue PrimeField::from_signed(std::int64_t v) const noexcept {
  const auto p = static_cast<std::int64_t>(p_);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return static_cast<Residue>(r);
}

std::int64_t PrimeField::to_signed(Residue a) const noexcept {
  return a > p_ / 2 ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(p_)
                    : static_cast<std::int64_t>(a);
}

FieldMatrix::FieldMatrix(const PrimeField& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FieldMatrix FieldMatrix::identity(const PrimeField& field, std::size_t n) {
  FieldMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FieldMatrix FieldMatrix::from_rows(
    const PrimeField& field, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  FieldMatrix m(field, r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw ContractViolation("FieldMatrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (auto v : row) m(i, j++) = field.from_signed(v);
    ++i;
  }
  return m;
}

std::vector<Residue> FieldMatrix::column(std::size_t c) const {
  std::vector<Residue> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

FieldMatrix FieldMatrix::transposed() const {
  FieldMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

FieldMatrix FieldMatrix::block(std::size_t r0, std::size_t c0, std::size_t rows,
                               std::size_t cols) const {
  if (r0 + rows > rows_ || c0 + cols > cols_) {
    throw ContractViolation("FieldMatrix::block: out of range");
  }
  FieldMatrix out(field_, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0), cols,
                out.data_.begin() + static_cast<std::ptrdiff_t>(r * cols));
  return out;
}

void FieldMatrix::set_block(std::size_t r0, std::size_t c0, const FieldMatrix& src) {
  if (r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_) {
    throw ContractViolation("FieldMatrix::set_block: out of range");
  }
  for (std::size_t r = 0; r < src.rows_; ++r)
    std::copy_n(src.data_.begin() + static_cast<std::ptrdiff_t>(r * src.cols_), src.cols_,
                data_.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0));
}

namespace {

// Cubic product, k-loop blocked in groups of four rows of b so that products
// are reduced once per group.
FieldMatrix mul_blocked(const FieldMatrix& a, const FieldMatrix& b) {
  const PrimeField& f = a.field();
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  FieldMatrix c(f, n, m);
  std::vector<std::uint64_t> acc(m);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    const auto arow = a.row(i);
    std::size_t k = 0;
    for (; k + kFoldEvery <= inner; k += kFoldEvery) {
      const Residue a0 = arow[k], a1 = arow[k + 1], a2 = arow[k + 2], a3 = arow[k + 3];
      if ((a0 | a1 | a2 | a3) == 0) continue;
      const Residue* b0 = b.row(k).data();
      const Residue* b1 = b.row(k + 1).data();
      const Residue* b2 = b.row(k + 2).data();
      const Residue* b3 = b.row(k + 3).data();
      for (std::size_t j = 0; j < m; ++j) {
        acc[j] = f.reduce(acc[j] + a0 * b0[j] + a1 * b1[j] + a2 * b2[j] + a3 * b3[j]);
      }
    }
    for (; k < inner; ++k) {
      const Residue ak = arow[k];
      if (ak == 0) continue;
      const Residue* bk = b.row(k).data();
      for (std::size_t j = 0; j < m; ++j) acc[j] = f.reduce(acc[j] + ak * bk[j]);
    }
    std::copy(acc.begin(), acc.end(), c.row(i).begin());
  }
  return c;
}

constexpr std::size_t kStrassenLeaf = 64;

FieldMatrix strassen_square(const FieldMatrix& a, const FieldMatrix& b) {
  const std::size_t n = a.rows();
  if (n <= kStrassenLeaf || n % 2 != 0) return mul_blocked(a, b);
  const std::size_t h = n / 2;
  const FieldMatrix a11 = a.block(0, 0, h, h), a12 = a.block(0, h, h, h),
                    a21 = a.block(h, 0, h, h), a22 = a.block(h, h, h, h);
  const FieldMatrix b11 = b.block(0, 0, h, h), b12 = b.block(0, h, h, h),
                    b21 = b.block(h, 0, h, h), b22 = b.block(h, h, h, h);
  const FieldMatrix m1 = strassen_square(mat_add(a11, a22), mat_add(b11, b22));
  const FieldMatrix m2 = strassen_square(mat_add(a21, a22), b11);
  const FieldMatrix m3 = strassen_square(a11, mat_sub(b12, b22));
  const FieldMatrix m4 = strassen_square(a22, mat_sub(b21, b11));
  const FieldMatrix m5 = strassen_square(mat_add(a11, a12), b22);
  const FieldMatrix m6 = strassen_square(mat_sub(a21, a11), mat_add(b11, b12));
  const FieldMatrix m7 = strassen_square(mat_sub(a12, a22), mat_add(b21, b22));
  FieldMatrix c(a.field(), n, n);
  c.set_block(0, 0, mat_add(mat_sub(mat_add(m1, m4), m5), m7));
  c.set_block(0, h, mat_add(m3, m5));
  c.set_block(h, 0, mat_add(m2, m4));
  c.set_block(h, h, mat_add(mat_add(mat_sub(m1, m2), m3), m6));
  return c;
}

FieldMatrix mul_strassen(const FieldMatrix& a, const FieldMatrix& b) {
  std::size_t size = 1;
  while (size < std::max({a.rows(), a.cols(), b.cols()})) size *= 2;
  FieldMatrix pa(a.field(), size, size), pb(a.field(), size, size);
  pa.set_block(0, 0, a);
  pb.set_block(0, 0, b);
  return strassen_square(pa, pb).block(0, 0, a.rows(), b.cols());
}

}  // namespace

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b, OpCounter* counter,
                    MulKernel kernel) {
  require_same_field(a, b, "mat_mul");
  if (a.cols() != b.rows()) throw ContractViolation("mat_mul: inner dimensions differ");
  count(counter, static_cast<std::uint64_t>(a.rows()) * a.cols() * b.cols());
  return kernel == MulKernel::kStrassen ? mul_strassen(a, b) : mul_blocked(a, b);
}

FieldMatrix mat_add(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b, "mat_add");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractViolation("mat_add: shape mismatch");
  FieldMatrix c(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < c.data().size(); ++i)
    c.data()[i] = a.field().add(a.data()[i], b.data()[i]);
  return c;
}

FieldMatrix mat_sub(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_field(a, b, "mat_sub");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractViolation("mat_sub: shape mismatch");
  FieldMatrix c(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < c.data().size(); ++i)
    c.data()[i] = a.field().sub(a.data()[i], b.data()[i]);
  return c;
}

namespace {

// row_dst[from..] -= factor * row_src[from..]
void eliminate_row(const PrimeField& f, std::span<Residue> dst, std::span<const Residue> src,
                   Residue factor, std::size_t from) {
  const Residue neg = f.neg(factor);
  for (std::size_t j = from; j < dst.size(); ++j) dst[j] = f.reduce(dst[j] + neg * src[j]);
}

void scale_row(const PrimeField& f, std::span<Residue> row, Residue s, std::size_t from) {
  for (std::size_t j = from; j < row.size(); ++j) row[j] = f.mul(row[j], s);
}

}  // namespace

std::optional<FieldMatrix> mat_inverse(const FieldMatrix& a, OpCounter* counter) {
  if (!a.square()) throw ContractViolation("mat_inverse: matrix is not square");
  const PrimeField& f = a.field();
  const std::size_t n = a.rows();
  FieldMatrix work = a;
  FieldMatrix inv = FieldMatrix::identity(f, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      std::swap_ranges(work.row(pivot).begin(), work.row(pivot).end(), work.row(col).begin());
      std::swap_ranges(inv.row(pivot).begin(), inv.row(pivot).end(), inv.row(col).begin());
    }
    const Residue s = f.inv(work(col, col));
    scale_row(f, work.row(col), s, col);
    scale_row(f, inv.row(col), s, 0);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Residue factor = work(r, col);
      if (factor == 0) continue;
      eliminate_row(f, work.row(r), work.row(col), factor, col);
      eliminate_row(f, inv.row(r), inv.row(col), factor, 0);
      count(counter, 2 * n - col);
    }
  }
  return inv;
}

Residue determinant(const FieldMatrix& a, OpCounter* counter) {
  if (!a.square()) throw ContractViolation("determinant: matrix is not square");
  const PrimeField& f = a.field();
  const std::size_t n = a.rows();
  FieldMatrix work = a;
  Residue det = 1 % f.modulus();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work(pivot, col) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap_ranges(work.row(pivot).begin(), work.row(pivot).end(), work.row(col).begin());
      det = f.neg(det);
    }
    det = f.mul(det, work(col, col));
    const Residue s = f.inv(work(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const Residue factor = work(r, col);
      if (factor == 0) continue;
      eliminate_row(f, work.row(r), work.row(col), f.mul(factor, s), col);
      count(counter, n - col);
    }
  }
  return det;
}

std::size_t rank(const FieldMatrix& a, OpCounter* counter) {
  const PrimeField& f = a.field();
  FieldMatrix work = a;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < a.rows() && work(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != r)
      std::swap_ranges(work.row(pivot).begin(), work.row(pivot).end(), work.row(r).begin());
    const Residue s = f.inv(work(r, col));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      const Residue factor = work(i, col);
      if (factor == 0) continue;
      eliminate_row(f, work.row(i), work.row(r), f.mul(factor, s), col);
      count(counter, a.cols() - col);
    }
    ++r;
  }
  return r;
}

FieldMatrix random_matrix(const PrimeField& field, std::size_t rows, std::size_t cols,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Residue> dist(0, field.modulus() - 1);
  FieldMatrix m(field, rows, cols);
  for (auto& x : m.data()) x = dist(rng);
  return m;
}

std::vector<Residue> row_times(std::span<const Residue> x, const FieldMatrix& a,
                               OpCounter* counter) {
  if (x.size() != a.rows()) throw ContractViolation("row_times: length mismatch");
  const PrimeField& f = a.field();
  std::vector<std::uint64_t> acc(a.cols(), 0);
  std::size_t pending = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0) continue;
    const Residue* row = a.row(k).data();
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += x[k] * row[j];
    count(counter, a.cols());
    if (++pending == kFoldEvery - 1) {
      fold_all(f, acc);
      pending = 0;
    }
  }
  fold_all(f, acc);
  return {acc.begin(), acc.end()};
}

std::vector<Residue> times_column(const FieldMatrix& a, std::span<const Residue> y,
                                  OpCounter* counter) {
  if (y.size() != a.cols()) throw ContractViolation("times_column: length mismatch");
  std::vector<Residue> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = dot(a.field(), a.row(r), y);
  count(counter, a.rows() * a.cols());
  return out;
}

Residue dot(const PrimeField& field, std::span<const Residue> x, std::span<const Residue> y) {
  if (x.size() != y.size()) throw ContractViolation("dot: length mismatch");
  std::uint64_t acc = 0;
  std::size_t pending = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * y[i];
    if (++pending == kFoldEvery - 1) {
      acc = field.reduce(acc);
      pending = 0;
    }
  }
  return field.reduce(acc);
}

}  // namespace dynoracle
