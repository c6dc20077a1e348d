// Dynamic matrix inverse with ranged lookahead.
//
// The inverse of the current matrix is kept as
//
//   top_inverse * (I - L_{K-1} R_{K-1}) * ... * (I - L_0 R_0)
//
// where level i is refreshed every 2^i calls and the explicit top inverse
// every 2^K calls. Rows of each level's inverse indexed by a predicted set
// F_i are precomputed, so a call whose vector is a predicted unit vector
// only pays for the levels below the one that cached it.
#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dynoracle/field.hpp"

namespace dynoracle {

struct SparseEntry {
  std::size_t index;
  Residue value;
};
using SparseVector = std::vector<SparseEntry>;

SparseVector unit_vector(std::size_t index);
SparseVector sparsify(std::span<const Residue> dense, std::size_t offset = 0);

/// The requested rank-1 update would make the matrix singular.
class SingularUpdate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A refresh hit a singular inner system; the owner has to rebuild.
class RebuildRequired : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ApplyPolicy {
  kNever,          // pure query
  kAlways,         // throw SingularUpdate instead of applying a singular update
  kIfNonsingular,  // apply only when the result stays invertible
};

struct UpdateResult {
  std::vector<Residue> row;  // v^T M^{-1} for the matrix before the call
  Residue det_factor = 0;    // 1 + v^T M^{-1} u
  bool applied = false;
};

/// Woodbury factors for (M + U V^T)^{-1} = M^{-1} (I - L R), given the rows
/// R = V^T M^{-1}. Returns nullopt when I + R U is singular.
struct WoodburyFactors {
  FieldMatrix left;   // n x k
  FieldMatrix right;  // k x n
};
std::optional<WoodburyFactors> woodbury_factors(const std::vector<SparseVector>& u_cols,
                                                FieldMatrix r_rows, std::size_t n,
                                                OpCounter* counter = nullptr);
/// Dense form: U and V are n x k, R is computed as V^T m_inverse.
std::optional<WoodburyFactors> woodbury_factors(const FieldMatrix& m_inverse, const FieldMatrix& u,
                                                const FieldMatrix& v, OpCounter* counter = nullptr);

class InverseHierarchy {
 public:
  /// Candidate indices for F_level, asked for right after a level refresh.
  using PredictionSource = std::function<std::vector<std::size_t>(std::size_t level)>;

  /// Throws ContractViolation if m is singular.
  explicit InverseHierarchy(FieldMatrix m, OpCounter* counter = nullptr, std::size_t c = 3);
  /// Uses a known inverse instead of computing one.
  InverseHierarchy(FieldMatrix m, FieldMatrix m_inverse, OpCounter* counter = nullptr,
                   std::size_t c = 3);

  /// Installing a source before the first call also seeds F_0..F_{K-1}.
  void set_prediction_source(PredictionSource source);
  void set_counter(OpCounter* counter) noexcept { counter_ = counter; }

  UpdateResult update(const SparseVector& u, const SparseVector& v, ApplyPolicy policy);

  /// v^T M^{-1} without counting as a call.
  std::vector<Residue> peek_row(const SparseVector& v) const;

  /// Replaces F_0..F_level; only legal right after a level-`level` refresh.
  void set_predictions(std::size_t level, const std::vector<std::vector<std::size_t>>& sets);

  /// Multiplies the representation out.
  FieldMatrix reconstruct_inverse() const;

  const FieldMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }
  std::size_t top_level() const noexcept { return top_; }
  std::uint64_t calls() const noexcept { return t_; }
  std::size_t factor_width(std::size_t level) const { return levels_.at(level).right.rows(); }
  const std::vector<std::size_t>& prediction_set(std::size_t level) const {
    return levels_.at(level).predicted;
  }
  bool cached(std::size_t level, std::size_t index) const {
    return levels_.at(level).rows.count(index) > 0;
  }
  std::size_t size_constant() const noexcept { return c_; }

 private:
  struct Level {
    FieldMatrix left;   // dim x k
    FieldMatrix right;  // k x dim
    std::vector<std::size_t> predicted;
    std::unordered_map<std::size_t, std::vector<Residue>> rows;
  };
  using RowChain = std::vector<std::vector<Residue>>;  // per level, empty if not computed
  struct LoggedUpdate {
    std::uint64_t time;
    SparseVector u, v;
    RowChain chain;
  };

  std::vector<Residue> row_at(std::size_t level, const SparseVector& v,
                              RowChain* chain = nullptr) const;
  void refresh(std::size_t level);
  void rebuild_top();
  void rebuild_cache(std::size_t level);
  void request_predictions(std::size_t level);

  FieldMatrix m_;
  FieldMatrix top_inverse_;
  std::vector<Level> levels_;  // 0..top_-1
  std::size_t top_;
  std::size_t c_;
  std::uint64_t t_ = 0;
  std::deque<LoggedUpdate> log_;
  OpCounter* counter_;
  PredictionSource source_;
};

}  // namespace dynoracle
