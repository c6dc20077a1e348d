#include "dynoracle/predicted_inverse.hpp"

#include <algorithm>
#include <utility>

namespace dynoracle {

namespace {

FieldMatrix negated(const FieldMatrix& a) {
  FieldMatrix out = a;
  for (auto& x : out.data()) x = a.field().neg(x);
  return out;
}

FieldMatrix minus_identity(const PrimeField& f, std::size_t n) {
  return negated(FieldMatrix::identity(f, n));
}

}  // namespace

FieldMatrix build_formula_embedding(const FieldMatrix& m, const FieldMatrix& u,
                                    const FieldMatrix& v, const FieldMatrix& v_query,
                                    const std::vector<Residue>& d) {
  const PrimeField& f = m.field();
  const std::size_t n = m.rows();
  const std::size_t q = u.cols();
  if (!m.square() || u.rows() != n || v.rows() != n || v.cols() != q || v_query.rows() != n ||
      v_query.cols() != q + 1 || d.size() != q)
    throw ContractViolation("build_formula_embedding: shape mismatch");
  const EmbeddingLayout lay{n, q};
  FieldMatrix b(f, lay.dim(), lay.dim());
  b.set_block(lay.block1(), lay.block1(), FieldMatrix::identity(f, q + 1));
  b.set_block(lay.block1(), lay.block2(), v_query.transposed());
  b.set_block(lay.block2(), lay.block2(), m);
  b.set_block(lay.block2(), lay.block4(), u);
  b.set_block(lay.block3(), lay.block2(), v.transposed());
  b.set_block(lay.block3(), lay.block3(), minus_identity(f, q));
  for (std::size_t t = 0; t < q; ++t) b(lay.block4() + t, lay.block3() + t) = d[t] % f.modulus();
  b.set_block(lay.block4(), lay.block4(), minus_identity(f, q));
  return b;
}

FieldMatrix formula_block(const FieldMatrix& b_inverse, const EmbeddingLayout& layout) {
  return b_inverse.block(layout.block1(), layout.block2(), layout.q + 1, layout.n);
}

FieldMatrix embedding_inverse_at_zero(const FieldMatrix& m_inverse, const FieldMatrix& u,
                                      const FieldMatrix& v, const FieldMatrix& v_query) {
  const PrimeField& f = m_inverse.field();
  const std::size_t n = m_inverse.rows();
  const std::size_t q = u.cols();
  const EmbeddingLayout lay{n, q};
  const FieldMatrix qu = mat_mul(m_inverse, u);
  const FieldMatrix vtq = mat_mul(v.transposed(), m_inverse);
  const FieldMatrix vqtq = mat_mul(v_query.transposed(), m_inverse);
  FieldMatrix x(f, lay.dim(), lay.dim());
  x.set_block(lay.block1(), lay.block1(), FieldMatrix::identity(f, q + 1));
  x.set_block(lay.block1(), lay.block2(), negated(vqtq));
  x.set_block(lay.block1(), lay.block4(), negated(mat_mul(vqtq, u)));
  x.set_block(lay.block2(), lay.block2(), m_inverse);
  x.set_block(lay.block2(), lay.block4(), qu);
  x.set_block(lay.block3(), lay.block2(), vtq);
  x.set_block(lay.block3(), lay.block3(), minus_identity(f, q));
  x.set_block(lay.block3(), lay.block4(), mat_mul(vtq, u));
  x.set_block(lay.block4(), lay.block4(), minus_identity(f, q));
  return x;
}

FieldMatrix rank_gadget(const FieldMatrix& m, const FieldMatrix& x, const FieldMatrix& y,
                        std::size_t k) {
  const PrimeField& f = m.field();
  const std::size_t n = m.rows();
  if (!m.square() || x.rows() != n || x.cols() != n || y.rows() != n || y.cols() != n || k > n)
    throw ContractViolation("rank_gadget: shape mismatch");
  FieldMatrix g(f, 3 * n, 3 * n);
  g.set_block(0, 0, m);
  g.set_block(0, n, x);
  g.set_block(n, 0, y);
  g.set_block(n, 2 * n, FieldMatrix::identity(f, n));
  g.set_block(2 * n, n, FieldMatrix::identity(f, n));
  for (std::size_t i = 0; i < k; ++i) g(2 * n + i, 2 * n + i) = 1;
  return g;
}

PredictedInverse::PredictedInverse(FieldMatrix m, std::vector<RankOneUpdate> initial_queue,
                                   PredictedInverseOptions options)
    : options_(options), m_(std::move(m)), n_(m_.rows()) {
  if (!m_.square() || n_ == 0) throw ContractViolation("PredictedInverse: need a square matrix");
  const PrimeField& f = m_.field();
  inner_n_ = options_.track_rank ? 3 * n_ : n_;
  epoch_length_ = std::max<std::size_t>(1, n_ / 2);
  for (auto& upd : initial_queue) {
    check_vectors(upd);
    queue_.push_back({next_id_++, std::move(upd)});
  }
  if (options_.track_rank) {
    gadget_x_ = random_matrix(f, n_, n_, options_.seed);
    gadget_y_ = random_matrix(f, n_, n_, options_.seed ^ 0x5bd1e995u);
    k_ = n_ - dynoracle::rank(m_, &work_);
  }
  det_embedded_ = determinant(inner_matrix(), &work_);
  restart_epoch();
}

void PredictedInverse::check_vectors(const RankOneUpdate& upd) const {
  if (upd.u.size() != n_ || upd.v.size() != n_)
    throw ContractViolation("PredictedInverse: update vectors must have length n");
}

std::uint64_t PredictedInverse::append_update(RankOneUpdate update) {
  check_vectors(update);
  count(&work_, 2 * n_);
  queue_.push_back({next_id_, std::move(update)});
  return next_id_++;
}

FieldMatrix PredictedInverse::inner_matrix() const {
  return options_.track_rank ? rank_gadget(m_, gadget_x_, gadget_y_, k_) : m_;
}

SparseVector PredictedInverse::lift(const std::vector<Residue>& x) const {
  return sparsify(x, layout_.block2());
}

void PredictedInverse::restart_epoch() {
  const PrimeField& f = m_.field();
  const FieldMatrix inner = inner_matrix();
  auto inner_inv = mat_inverse(inner, &work_);
  if (!inner_inv) throw SingularUpdate("PredictedInverse: matrix is singular at epoch start");
  const std::size_t q = std::min(queue_.size(), inner_n_);
  layout_ = EmbeddingLayout{inner_n_, q};
  FieldMatrix u(f, inner_n_, q), v(f, inner_n_, q), v_query(f, inner_n_, q + 1);
  slot_of_.clear();
  for (std::size_t s = 0; s < q; ++s) {
    const auto& item = queue_[s];
    for (std::size_t i = 0; i < n_; ++i) {
      u(i, s) = item.update.u[i];
      v(i, s) = item.update.v[i];
      v_query(i, s) = item.update.v[i];
    }
    slot_of_[item.id] = s;
  }
  FieldMatrix b = build_formula_embedding(inner, u, v, v_query, std::vector<Residue>(q, 0));
  FieldMatrix b_inv = embedding_inverse_at_zero(*inner_inv, u, v, v_query);
  count(&work_, 4 * inner_n_ * inner_n_ * (q + 1) + 2 * b.rows() * b.cols());
  hierarchy_ = std::make_unique<InverseHierarchy>(std::move(b), std::move(b_inv), &work_,
                                                  options_.size_constant);
  hierarchy_->set_prediction_source(
      [this](std::size_t level) { return predicted_indices(level); });
  performs_in_epoch_ = 0;
  ++epochs_;
}

std::vector<std::size_t> PredictedInverse::predicted_indices(std::size_t level) const {
  std::vector<std::size_t> out;
  const std::size_t items = std::min(queue_.size(), std::size_t{2} << level);
  for (std::size_t pos = 0; pos < items; ++pos) {
    auto it = slot_of_.find(queue_[pos].id);
    if (it != slot_of_.end()) out.push_back(layout_.block3() + it->second);
  }
  if (options_.track_rank) {
    const auto width = static_cast<std::ptrdiff_t>(std::size_t{1} << level);
    for (std::ptrdiff_t j = -width; j <= width; ++j) {
      const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(k_) + j;
      if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(n_))
        out.push_back(layout_.block2() + 2 * n_ + static_cast<std::size_t>(idx));
    }
  }
  for (std::size_t h : hints_)
    if (h < n_) out.push_back(layout_.block2() + h);
  return out;
}

std::vector<Residue> PredictedInverse::apply(const SparseVector& u, const SparseVector& v,
                                             bool& was_invertible) {
  const PrimeField& f = m_.field();
  if (!options_.track_rank) {
    auto r = hierarchy_->update(u, v, ApplyPolicy::kIfNonsingular);
    if (!r.applied) throw SingularUpdate("PredictedInverse: update makes the matrix singular");
    det_embedded_ = f.mul(det_embedded_, r.det_factor);
    was_invertible = true;
    return std::move(r.row);
  }
  was_invertible = k_ == 0;
  const std::size_t base = layout_.block2() + 2 * n_;
  auto r = hierarchy_->update(u, v, ApplyPolicy::kIfNonsingular);
  if (r.applied) {
    det_embedded_ = f.mul(det_embedded_, r.det_factor);
    if (k_ > 0) {
      const std::size_t idx = base + k_ - 1;
      auto probe = hierarchy_->update({{idx, f.neg(1)}}, {{idx, 1}}, ApplyPolicy::kIfNonsingular);
      if (probe.applied) {
        det_embedded_ = f.mul(det_embedded_, probe.det_factor);
        --k_;
      }
    }
  } else {
    const std::size_t idx = base + k_;
    auto raise = hierarchy_->update({{idx, 1}}, {{idx, 1}}, ApplyPolicy::kAlways);
    det_embedded_ = f.mul(det_embedded_, raise.det_factor);
    ++k_;
    auto again = hierarchy_->update(u, v, ApplyPolicy::kAlways);
    det_embedded_ = f.mul(det_embedded_, again.det_factor);
  }
  return std::move(r.row);
}

Outcome PredictedInverse::perform_update(std::size_t eta,
                                         const std::optional<RankOneUpdate>& realized) {
  if (queue_.size() < n_)
    throw ContractViolation("PredictedInverse::perform_update: queue shorter than n");
  if (eta == 0 || eta > queue_.size())
    throw ContractViolation("PredictedInverse::perform_update: position out of range");
  const PrimeField& f = m_.field();
  const std::uint64_t start = work_.ops;
  const QueueItem item = queue_[eta - 1];
  const RankOneUpdate real = realized ? *realized : item.update;
  check_vectors(real);
  queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(eta - 1));

  const EmbeddingLayout lay = layout_;
  Outcome out;
  bool was_invertible = false;
  std::vector<Residue> row;
  auto slot = slot_of_.find(item.id);
  if (slot != slot_of_.end() && real.v == item.update.v) {
    const std::size_t s = slot->second;
    slot_of_.erase(slot);
    row = apply({{lay.block4() + s, 1}}, {{lay.block3() + s, 1}}, was_invertible);
    out.predicted_path = true;
    if (real.u != item.update.u) {
      std::vector<Residue> diff(n_);
      for (std::size_t i = 0; i < n_; ++i) diff[i] = f.sub(real.u[i], item.update.u[i]);
      bool ignored = false;
      apply(lift(diff), lift(real.v), ignored);
    }
  } else {
    if (slot != slot_of_.end()) slot_of_.erase(slot);
    row = apply(lift(real.u), lift(real.v), was_invertible);
  }

  for (std::size_t r = 0; r < n_; ++r) {
    if (real.u[r] == 0) continue;
    for (std::size_t c = 0; c < n_; ++c) m_(r, c) = f.add(m_(r, c), f.mul(real.u[r], real.v[c]));
  }
  count(&work_, n_ * n_);

  if (was_invertible) {
    out.row = std::vector<Residue>(row.begin() + static_cast<std::ptrdiff_t>(lay.block2()),
                                   row.begin() + static_cast<std::ptrdiff_t>(lay.block2() + n_));
  }
  if (++performs_in_epoch_ >= epoch_length_) restart_epoch();
  out.rank = rank();
  out.det = det();
  out.work = work_.ops - start;
  return out;
}

std::optional<std::vector<Residue>> PredictedInverse::query_row(const std::vector<Residue>& w) {
  if (w.size() != n_) throw ContractViolation("PredictedInverse::query_row: length mismatch");
  if (options_.track_rank && k_ > 0) return std::nullopt;
  auto r = hierarchy_->update({}, lift(w), ApplyPolicy::kNever);
  return std::vector<Residue>(r.row.begin() + static_cast<std::ptrdiff_t>(layout_.block2()),
                              r.row.begin() + static_cast<std::ptrdiff_t>(layout_.block2() + n_));
}

Residue PredictedInverse::det() const noexcept {
  if (!options_.track_rank) return det_embedded_;
  if (k_ > 0) return 0;
  return n_ % 2 == 1 ? m_.field().neg(det_embedded_) : det_embedded_;
}

}  // namespace dynoracle
