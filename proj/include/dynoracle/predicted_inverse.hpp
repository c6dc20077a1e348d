// Dynamic matrix inverse driven by a queue of predicted rank-1 updates.
//
// The first q queued updates of an epoch are written into the U, V blocks of
// a larger matrix B (see build_formula_embedding), so performing one of them
// is a single entry flip in B's D block. Anything else is a dense rank-1
// update. Rank is tracked with a bordered gadget matrix whose invertibility
// encodes a rank threshold.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dynoracle/field.hpp"
#include "dynoracle/inverse_hierarchy.hpp"

namespace dynoracle {

/// Offsets of the four block rows/columns of B. Row and column offsets coincide.
struct EmbeddingLayout {
  std::size_t n = 0;  // size of the inner matrix
  std::size_t q = 0;  // number of embedded updates
  std::size_t block1() const noexcept { return 0; }
  std::size_t block2() const noexcept { return q + 1; }
  std::size_t block3() const noexcept { return q + 1 + n; }
  std::size_t block4() const noexcept { return q + 1 + n + q; }
  std::size_t dim() const noexcept { return q + 1 + n + q + q; }
};

/// B = [[I, V'^T, 0, 0], [0, M, 0, U], [0, V^T, -I, 0], [0, 0, D, -I]] with
/// U, V of shape n x q, V' of shape n x (q+1) and D = diag(d).
FieldMatrix build_formula_embedding(const FieldMatrix& m, const FieldMatrix& u,
                                    const FieldMatrix& v, const FieldMatrix& v_query,
                                    const std::vector<Residue>& d);

/// The (1,2) block of B^{-1}, which equals -V'^T (M + U D V^T)^{-1}.
FieldMatrix formula_block(const FieldMatrix& b_inverse, const EmbeddingLayout& layout);

/// B^{-1} for D = 0 written out from m_inverse, without eliminating on B.
FieldMatrix embedding_inverse_at_zero(const FieldMatrix& m_inverse, const FieldMatrix& u,
                                      const FieldMatrix& v, const FieldMatrix& v_query);

/// [[M, X, 0], [Y, 0, I], [0, I, I_k]] where I_k has ones in its first k
/// diagonal slots. Invertible iff rank(M) >= n - k, with high probability
/// over random X, Y.
FieldMatrix rank_gadget(const FieldMatrix& m, const FieldMatrix& x, const FieldMatrix& y,
                        std::size_t k);

struct RankOneUpdate {
  std::vector<Residue> u;
  std::vector<Residue> v;
  bool operator==(const RankOneUpdate&) const = default;
};

struct PredictedInverseOptions {
  bool track_rank = true;  // off: the matrix must stay invertible
  std::uint64_t seed = 1;
  std::size_t size_constant = 3;
};

struct Outcome {
  std::size_t rank = 0;
  Residue det = 0;
  /// v^T M^{-1} for the matrix before the update, when that was invertible.
  std::optional<std::vector<Residue>> row;
  bool predicted_path = false;
  std::uint64_t work = 0;
};

class PredictedInverse {
 public:
  PredictedInverse(FieldMatrix m, std::vector<RankOneUpdate> initial_queue,
                   PredictedInverseOptions options = {});

  /// Adds an update at the back of the queue and returns its id.
  std::uint64_t append_update(RankOneUpdate update);

  /// Performs the update at 1-based queue position eta. When `realized`
  /// differs from what was queued, the realized vectors are applied.
  Outcome perform_update(std::size_t eta, const std::optional<RankOneUpdate>& realized = {});

  /// w^T M^{-1} for the current matrix, or nullopt when it is singular.
  std::optional<std::vector<Residue>> query_row(const std::vector<Residue>& w);

  /// Rows e_j^T M^{-1} the caller expects to query soon.
  void set_query_hints(std::vector<std::size_t> rows) { hints_ = std::move(rows); }

  std::size_t rank() const noexcept { return n_ - k_; }
  Residue det() const noexcept;
  const FieldMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return n_; }
  std::size_t queue_size() const noexcept { return queue_.size(); }
  /// 1-based.
  const RankOneUpdate& queued(std::size_t pos) const { return queue_.at(pos - 1).update; }
  std::uint64_t queued_id(std::size_t pos) const { return queue_.at(pos - 1).id; }
  std::uint64_t work() const noexcept { return work_.ops; }
  std::size_t epochs() const noexcept { return epochs_; }
  std::size_t gadget_k() const noexcept { return k_; }

  /// The matrix B of the current epoch and its inverse as represented by
  /// the hierarchy, for checkpoint verification.
  const FieldMatrix& embedded_matrix() const { return hierarchy_->matrix(); }
  FieldMatrix represented_inverse() const { return hierarchy_->reconstruct_inverse(); }
  const EmbeddingLayout& layout() const noexcept { return layout_; }
  const InverseHierarchy& hierarchy() const { return *hierarchy_; }

 private:
  struct QueueItem {
    std::uint64_t id;
    RankOneUpdate update;
  };

  FieldMatrix inner_matrix() const;
  void restart_epoch();
  std::vector<std::size_t> predicted_indices(std::size_t level) const;
  SparseVector lift(const std::vector<Residue>& x) const;
  /// Applies a rank-1 update to B while keeping the gadget invertible.
  /// Returns the first call's row and whether the matrix was invertible before.
  std::vector<Residue> apply(const SparseVector& u, const SparseVector& v, bool& was_invertible);
  void check_vectors(const RankOneUpdate& upd) const;

  PredictedInverseOptions options_;
  FieldMatrix m_;
  std::size_t n_;
  std::size_t inner_n_;
  FieldMatrix gadget_x_, gadget_y_;
  std::size_t k_ = 0;
  Residue det_embedded_ = 0;

  std::vector<QueueItem> queue_;
  std::uint64_t next_id_ = 0;
  std::unordered_map<std::uint64_t, std::size_t> slot_of_;
  std::vector<std::size_t> hints_;

  EmbeddingLayout layout_;
  std::unique_ptr<InverseHierarchy> hierarchy_;
  std::size_t performs_in_epoch_ = 0;
  std::size_t epoch_length_;
  std::size_t epochs_ = 0;
  OpCounter work_;
};

}  // namespace dynoracle
