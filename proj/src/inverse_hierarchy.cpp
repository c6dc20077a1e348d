#include "dynoracle/inverse_hierarchy.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

namespace dynoracle {

SparseVector unit_vector(std::size_t index) { return {{index, 1}}; }

SparseVector sparsify(std::span<const Residue> dense, std::size_t offset) {
  SparseVector out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0) out.push_back({i + offset, dense[i]});
  }
  return out;
}

std::optional<WoodburyFactors> woodbury_factors(const std::vector<SparseVector>& u_cols,
                                                FieldMatrix r_rows, std::size_t n,
                                                OpCounter* counter) {
  const PrimeField& f = r_rows.field();
  const std::size_t k = u_cols.size();
  if (r_rows.rows() != k || (k > 0 && r_rows.cols() != n))
    throw ContractViolation("woodbury_factors: R must be k x n");
  FieldMatrix inner = FieldMatrix::identity(f, k);
  for (std::size_t b = 0; b < k; ++b) {
    for (const auto& [i, val] : u_cols[b]) {
      for (std::size_t a = 0; a < k; ++a) inner(a, b) = f.add(inner(a, b), f.mul(r_rows(a, i), val));
      count(counter, k);
    }
  }
  auto inner_inv = mat_inverse(inner, counter);
  if (!inner_inv) return std::nullopt;
  FieldMatrix left(f, n, k);
  for (std::size_t a = 0; a < k; ++a) {
    const auto src = inner_inv->row(a);
    for (const auto& [i, val] : u_cols[a]) {
      auto dst = left.row(i);
      for (std::size_t b = 0; b < k; ++b) dst[b] = f.add(dst[b], f.mul(val, src[b]));
      count(counter, k);
    }
  }
  return WoodburyFactors{std::move(left), std::move(r_rows)};
}

std::optional<WoodburyFactors> woodbury_factors(const FieldMatrix& m_inverse, const FieldMatrix& u,
                                                const FieldMatrix& v, OpCounter* counter) {
  if (!m_inverse.square() || u.rows() != m_inverse.rows() || v.rows() != m_inverse.rows() ||
      u.cols() != v.cols())
    throw ContractViolation("woodbury_factors: shape mismatch");
  std::vector<SparseVector> u_cols;
  for (std::size_t c = 0; c < u.cols(); ++c) u_cols.push_back(sparsify(u.column(c)));
  FieldMatrix r = mat_mul(v.transposed(), m_inverse, counter);
  return woodbury_factors(u_cols, std::move(r), m_inverse.rows(), counter);
}

namespace {

std::size_t ceil_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

void add_scaled(const PrimeField& f, std::vector<Residue>& acc, std::span<const Residue> row,
                Residue scale) {
  for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = f.reduce(acc[j] + scale * row[j]);
}

}  // namespace

InverseHierarchy::InverseHierarchy(FieldMatrix m, OpCounter* counter, std::size_t c)
    : m_(std::move(m)), top_(0), c_(c), counter_(counter) {
  if (!m_.square() || m_.rows() == 0)
    throw ContractViolation("InverseHierarchy: matrix must be square and nonempty");
  auto inv = mat_inverse(m_, counter_);
  if (!inv) throw ContractViolation("InverseHierarchy: initial matrix is singular");
  top_inverse_ = std::move(*inv);
  top_ = std::max<std::size_t>(1, ceil_log2(m_.rows()));
  levels_.resize(top_);
}

InverseHierarchy::InverseHierarchy(FieldMatrix m, FieldMatrix m_inverse, OpCounter* counter,
                                   std::size_t c)
    : m_(std::move(m)), top_inverse_(std::move(m_inverse)), top_(0), c_(c), counter_(counter) {
  if (!m_.square() || m_.rows() == 0 || top_inverse_.rows() != m_.rows() ||
      top_inverse_.cols() != m_.cols())
    throw ContractViolation("InverseHierarchy: matrix and inverse shapes disagree");
  top_ = std::max<std::size_t>(1, ceil_log2(m_.rows()));
  levels_.resize(top_);
}

void InverseHierarchy::set_prediction_source(PredictionSource source) {
  source_ = std::move(source);
  if (t_ == 0) request_predictions(top_ - 1);
}

std::vector<Residue> InverseHierarchy::row_at(std::size_t level, const SparseVector& v,
                                              RowChain* chain) const {
  const PrimeField& f = m_.field();
  const std::size_t n = dim();
  if (level == top_) {
    std::vector<Residue> x(n, 0);
    for (const auto& [i, val] : v) add_scaled(f, x, top_inverse_.row(i), val);
    count(counter_, n * v.size());
    if (chain != nullptr) (*chain)[level] = x;
    return x;
  }
  const Level& lv = levels_[level];
  const bool all_cached = !lv.rows.empty() && std::all_of(v.begin(), v.end(), [&](const auto& e) {
    return lv.rows.count(e.index) > 0;
  });
  if (all_cached) {
    std::vector<Residue> x(n, 0);
    for (const auto& [i, val] : v) add_scaled(f, x, lv.rows.at(i), val);
    count(counter_, n * v.size());
    if (chain != nullptr) (*chain)[level] = x;
    return x;
  }
  std::vector<Residue> x = row_at(level + 1, v, chain);
  if (lv.right.rows() > 0) {
    const auto y = row_times(x, lv.left, counter_);
    const auto z = row_times(y, lv.right, counter_);
    for (std::size_t j = 0; j < n; ++j) x[j] = f.sub(x[j], z[j]);
  }
  if (chain != nullptr) (*chain)[level] = x;
  return x;
}

std::vector<Residue> InverseHierarchy::peek_row(const SparseVector& v) const {
  return row_at(0, v);
}

UpdateResult InverseHierarchy::update(const SparseVector& u, const SparseVector& v,
                                      ApplyPolicy policy) {
  const PrimeField& f = m_.field();
  for (const auto& e : u)
    if (e.index >= dim()) throw ContractViolation("InverseHierarchy::update: u out of range");
  for (const auto& e : v)
    if (e.index >= dim()) throw ContractViolation("InverseHierarchy::update: v out of range");

  UpdateResult result;
  RowChain chain(top_ + 1);
  result.row = row_at(0, v, &chain);
  Residue factor = 1;
  for (const auto& [i, val] : u) factor = f.add(factor, f.mul(result.row[i], val));
  count(counter_, u.size());
  result.det_factor = factor;

  switch (policy) {
    case ApplyPolicy::kNever:
      break;
    case ApplyPolicy::kAlways:
      if (factor == 0) throw SingularUpdate("InverseHierarchy::update: result would be singular");
      result.applied = true;
      break;
    case ApplyPolicy::kIfNonsingular:
      result.applied = factor != 0;
      break;
  }

  if (result.applied) {
    for (const auto& [r, a] : u)
      for (const auto& [c, b] : v) m_(r, c) = f.add(m_(r, c), f.mul(a, b));
    count(counter_, u.size() * v.size());
    chain[0].clear();
    log_.push_back({t_ + 1, u, v, std::move(chain)});
  }
  ++t_;
  const auto level = std::min<std::size_t>(static_cast<std::size_t>(std::countr_zero(t_)), top_);
  refresh(level);
  return result;
}

void InverseHierarchy::refresh(std::size_t level) {
  if (level == top_) {
    rebuild_top();
    return;
  }
  const std::uint64_t window = std::uint64_t{1} << level;
  std::vector<SparseVector> u_cols;
  std::vector<const LoggedUpdate*> entries;
  for (const auto& entry : log_) {
    if (entry.time + window > t_) {
      u_cols.push_back(entry.u);
      entries.push_back(&entry);
    }
  }
  // R rows come from the level above, which has not changed since these
  // updates were logged, so rows computed during the call are reused.
  FieldMatrix r(m_.field(), entries.size(), dim());
  for (std::size_t a = 0; a < entries.size(); ++a) {
    const auto& saved = entries[a]->chain[level + 1];
    if (!saved.empty()) {
      std::copy(saved.begin(), saved.end(), r.row(a).begin());
      count(counter_, dim());
    } else {
      const auto row = row_at(level + 1, entries[a]->v);
      std::copy(row.begin(), row.end(), r.row(a).begin());
    }
  }
  auto factors = woodbury_factors(u_cols, std::move(r), dim(), counter_);
  if (!factors) throw RebuildRequired("InverseHierarchy: singular refresh at level " +
                                      std::to_string(level));
  levels_[level].left = std::move(factors->left);
  levels_[level].right = std::move(factors->right);
  for (std::size_t i = 0; i < level; ++i) {
    levels_[i].left = FieldMatrix();
    levels_[i].right = FieldMatrix();
  }
  const std::uint64_t keep = std::uint64_t{1} << (top_ - 1);
  while (!log_.empty() && log_.front().time + keep <= t_) log_.pop_front();
  request_predictions(level);
}

void InverseHierarchy::rebuild_top() {
  auto inv = mat_inverse(m_, counter_);
  if (!inv) throw RebuildRequired("InverseHierarchy: matrix became singular");
  top_inverse_ = std::move(*inv);
  for (auto& lv : levels_) {
    lv.left = FieldMatrix();
    lv.right = FieldMatrix();
    lv.rows.clear();
  }
  log_.clear();
  request_predictions(top_ - 1);
}

void InverseHierarchy::request_predictions(std::size_t level) {
  std::vector<std::vector<std::size_t>> sets(level + 1);
  for (std::size_t i = level + 1; i-- > 0;) {
    std::vector<std::size_t> cand = source_ ? source_(i) : std::vector<std::size_t>{};
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    const std::vector<std::size_t>* above = nullptr;
    if (i < level) {
      above = &sets[i + 1];
    } else if (i + 1 < top_) {
      above = &levels_[i + 1].predicted;
    }
    std::vector<std::size_t> kept;
    for (std::size_t x : cand) {
      if (x >= dim()) continue;
      if (above != nullptr && !std::binary_search(above->begin(), above->end(), x)) continue;
      kept.push_back(x);
    }
    const std::size_t cap = c_ << (i + 1);
    if (kept.size() > cap) kept.resize(cap);
    sets[i] = std::move(kept);
  }
  set_predictions(level, sets);
}

void InverseHierarchy::set_predictions(std::size_t level,
                                       const std::vector<std::vector<std::size_t>>& sets) {
  if (level >= top_) throw ContractViolation("set_predictions: level out of range");
  if (sets.size() != level + 1) throw ContractViolation("set_predictions: need one set per level");
  if (t_ % (std::uint64_t{1} << level) != 0)
    throw ContractViolation("set_predictions: level " + std::to_string(level) +
                            " is not due for a refresh");
  std::vector<std::vector<std::size_t>> sorted = sets;
  for (std::size_t i = 0; i <= level; ++i) {
    auto& s = sorted[i];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && s.back() >= dim()) throw ContractViolation("set_predictions: index out of range");
    if (s.size() > (c_ << (i + 1)))
      throw ContractViolation("set_predictions: F_" + std::to_string(i) + " is too large");
    const std::vector<std::size_t>* above = nullptr;
    if (i < level) {
      above = &sorted[i + 1];
    } else if (i + 1 < top_) {
      above = &levels_[i + 1].predicted;
    }
    if (above != nullptr && !std::includes(above->begin(), above->end(), s.begin(), s.end()))
      throw ContractViolation("set_predictions: F_" + std::to_string(i) + " not nested");
  }
  for (std::size_t i = 0; i <= level; ++i) {
    levels_[i].predicted = std::move(sorted[i]);
    levels_[i].rows.clear();
  }
  rebuild_cache(level);
}

void InverseHierarchy::rebuild_cache(std::size_t level) {
  // Levels below `level` carry no factors right now, so their rows fall
  // through to this level and need no cache of their own.
  Level& lv = levels_[level];
  for (std::size_t j : lv.predicted) {
    std::vector<Residue> x = row_at(level + 1, unit_vector(j));
    if (lv.right.rows() > 0) {
      const auto y = row_times(x, lv.left, counter_);
      const auto z = row_times(y, lv.right, counter_);
      for (std::size_t c = 0; c < x.size(); ++c) x[c] = m_.field().sub(x[c], z[c]);
    }
    lv.rows.emplace(j, std::move(x));
  }
}

FieldMatrix InverseHierarchy::reconstruct_inverse() const {
  FieldMatrix x = top_inverse_;
  for (std::size_t i = top_; i-- > 0;) {
    const Level& lv = levels_[i];
    if (lv.right.rows() == 0) continue;
    x = mat_sub(x, mat_mul(mat_mul(x, lv.left), lv.right));
  }
  return x;
}

}  // namespace dynoracle
