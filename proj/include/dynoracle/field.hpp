// Dense exact linear algebra over a prime field Z_p.
//
// Every matrix carries the field it lives in. Operations on matrices from
// different fields, or with incompatible shapes, throw ContractViolation.
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dynoracle {

/// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Counts abstract work units (field multiply-adds, comparisons, row copies).
struct OpCounter {
  std::uint64_t ops = 0;
  void add(std::uint64_t n) noexcept { ops += n; }
};

inline void count(OpCounter* counter, std::uint64_t n) noexcept {
  if (counter != nullptr) counter->add(n);
}

using Residue = std::uint64_t;

/// Arithmetic modulo a prime p < 2^31, so a product of two residues fits in
/// 62 bits and a few products can be summed before reduction.
class PrimeField {
 public:
  static constexpr Residue kMersenne31 = (Residue{1} << 31) - 1;

  explicit PrimeField(Residue p = kMersenne31);

  Residue modulus() const noexcept { return p_; }

  /// Reduces any 64-bit value into [0, p).
  Residue reduce(std::uint64_t x) const noexcept {
    if (mersenne_) {
      x = (x & p_) + (x >> 31);
      x = (x & p_) + (x >> 31);
      return x >= p_ ? x - p_ : x;
    }
    return x % p_;
  }

  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept { return reduce(a * b); }
  Residue pow(Residue base, std::uint64_t exp) const noexcept;
  /// Multiplicative inverse; throws std::domain_error for zero.
  Residue inv(Residue a) const;

  Residue from_signed(std::int64_t v) const noexcept;
  /// Maps a residue to the symmetric range (-p/2, p/2].
  std::int64_t to_signed(Residue a) const noexcept;

  bool operator==(const PrimeField& other) const noexcept { return p_ == other.p_; }

 private:
  Residue p_;
  bool mersenne_;
};

/// Row-major dense matrix over a PrimeField.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(const PrimeField& field, std::size_t rows, std::size_t cols);

  static FieldMatrix identity(const PrimeField& field, std::size_t n);
  /// Builds from signed integer literals, reducing each into the field.
  static FieldMatrix from_rows(const PrimeField& field,
                               std::initializer_list<std::initializer_list<std::int64_t>> rows);

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Residue& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  Residue operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<Residue> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Residue> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<Residue> column(std::size_t c) const;

  std::span<Residue> data() noexcept { return data_; }
  std::span<const Residue> data() const noexcept { return data_; }

  FieldMatrix transposed() const;
  /// Copy of the rows x cols block whose top-left corner is (r0, c0).
  FieldMatrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;
  /// Writes `src` with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const FieldMatrix& src);

  bool operator==(const FieldMatrix& other) const noexcept {
    return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           data_ == other.data_;
  }

 private:
  PrimeField field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

enum class MulKernel { kBlocked, kStrassen };

/// Exact product a*b. Both kernels give identical results.
FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b, OpCounter* counter = nullptr,
                    MulKernel kernel = MulKernel::kBlocked);

FieldMatrix mat_add(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix mat_sub(const FieldMatrix& a, const FieldMatrix& b);

/// Inverse by Gauss-Jordan elimination, or nullopt when singular.
std::optional<FieldMatrix> mat_inverse(const FieldMatrix& a, OpCounter* counter = nullptr);

Residue determinant(const FieldMatrix& a, OpCounter* counter = nullptr);

std::size_t rank(const FieldMatrix& a, OpCounter* counter = nullptr);

/// Entries i.i.d. uniform on [0, p); same seed gives the same matrix.
FieldMatrix random_matrix(const PrimeField& field, std::size_t rows, std::size_t cols,
                          std::uint64_t seed);

/// x^T * a for a row vector x.
std::vector<Residue> row_times(std::span<const Residue> x, const FieldMatrix& a,
                               OpCounter* counter = nullptr);

/// a * y for a column vector y.
std::vector<Residue> times_column(const FieldMatrix& a, std::span<const Residue> y,
                                  OpCounter* counter = nullptr);

Residue dot(const PrimeField& field, std::span<const Residue> x, std::span<const Residue> y);

}  // namespace dynoracle
