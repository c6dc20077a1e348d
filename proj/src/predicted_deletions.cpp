#include "dynoracle/predicted_deletions.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace dynoracle {

namespace {

std::int64_t add_distances(std::int64_t a, std::int64_t b) {
  if (a == IncrementalApsp::kUnreachable || b == IncrementalApsp::kUnreachable) {
    return IncrementalApsp::kUnreachable;
  }
  return a + b;
}

}  // namespace

void IncrementalApsp::declare(ElementId v, std::vector<WeightedNeighbour> in_edges,
                              std::vector<WeightedNeighbour> out_edges) {
  if (declared_.count(v) > 0) throw std::invalid_argument("vertex already declared");
  Declaration d;
  auto fill = [v](std::unordered_map<ElementId, std::int64_t>& into,
                  const std::vector<WeightedNeighbour>& from) {
    for (const auto& e : from) {
      if (e.weight < 0) throw std::invalid_argument("negative edge weight");
      if (e.vertex == v) continue;
      auto [it, fresh] = into.emplace(e.vertex, e.weight);
      if (!fresh) it->second = std::min(it->second, e.weight);
    }
  };
  fill(d.in, in_edges);
  fill(d.out, out_edges);
  declared_.emplace(v, std::move(d));
}

void IncrementalApsp::retract(ElementId v) {
  if (contains(v)) throw std::logic_error("cannot retract a present vertex");
  declared_.erase(v);
}

std::optional<std::int64_t> IncrementalApsp::edge_weight(ElementId u, ElementId v) const {
  std::optional<std::int64_t> best;
  auto take = [&best](std::int64_t w) { best = best ? std::min(*best, w) : w; };
  if (auto it = declared_.find(v); it != declared_.end()) {
    if (auto e = it->second.in.find(u); e != it->second.in.end()) take(e->second);
  }
  if (auto it = declared_.find(u); it != declared_.end()) {
    if (auto e = it->second.out.find(v); e != it->second.out.end()) take(e->second);
  }
  return best;
}

void IncrementalApsp::insert(ElementId v) {
  if (contains(v)) throw std::invalid_argument("duplicate vertex id");
  if (declared_.count(v) == 0) declared_.emplace(v, Declaration{});
  const std::uint64_t before = work_.ops;
  const std::size_t k = order_.size();

  std::vector<std::int64_t> w_in(k, kUnreachable), w_out(k, kUnreachable);
  std::vector<std::size_t> in_slots, out_slots;
  for (std::size_t u = 0; u < k; ++u) {
    if (auto w = edge_weight(order_[u], v)) {
      w_in[u] = *w;
      in_slots.push_back(u);
    }
    if (auto w = edge_weight(v, order_[u])) {
      w_out[u] = *w;
      out_slots.push_back(u);
    }
  }
  work_.add(k);

  // Distances to and from v through its neighbours.
  std::vector<std::int64_t> to_v(k, kUnreachable), from_v(k, kUnreachable);
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t u : in_slots) to_v[x] = std::min(to_v[x], add_distances(dist_[x][u], w_in[u]));
  }
  for (std::size_t y = 0; y < k; ++y) {
    for (std::size_t u : out_slots) {
      from_v[y] = std::min(from_v[y], add_distances(w_out[u], dist_[u][y]));
    }
  }
  work_.add(k * (in_slots.size() + out_slots.size()));

  std::vector<Change> changes;
  for (std::size_t x = 0; x < k; ++x) {
    if (to_v[x] == kUnreachable) continue;
    auto& row = dist_[x];
    for (std::size_t y = 0; y < k; ++y) {
      const std::int64_t via = add_distances(to_v[x], from_v[y]);
      if (via < row[y]) {
        changes.push_back({x, y, row[y]});
        row[y] = via;
      }
    }
  }
  work_.add(k * k);

  for (std::size_t x = 0; x < k; ++x) dist_[x].push_back(to_v[x]);
  from_v.push_back(0);
  dist_.push_back(std::move(from_v));
  slot_.emplace(v, k);
  order_.push_back(v);
  log_.push_back(std::move(changes));
  work_.add(k + 1);
  largest_insert_ = std::max(largest_insert_, work_.ops - before);
}

void IncrementalApsp::rewind() {
  if (log_.empty()) throw std::logic_error("nothing to rewind");
  const std::size_t k = order_.size() - 1;
  dist_.pop_back();
  for (std::size_t x = 0; x < k; ++x) dist_[x].pop_back();
  for (const auto& c : log_.back()) dist_[c.row][c.col] = c.old;
  work_.add(k + 1 + log_.back().size());
  log_.pop_back();
  slot_.erase(order_.back());
  order_.pop_back();
}

std::int64_t IncrementalApsp::distance(ElementId u, ElementId v) const {
  auto iu = slot_.find(u);
  auto iv = slot_.find(v);
  if (iu == slot_.end() || iv == slot_.end()) throw std::out_of_range("query on absent vertex");
  return dist_[iu->second][iv->second];
}

bool BucketScheduler::sooner(ElementId a, ElementId b) const {
  const Info& ia = info_.at(a);
  const Info& ib = info_.at(b);
  if (ia.key != ib.key) return ia.key < ib.key;
  return ia.seq < ib.seq;
}

void BucketScheduler::insert(ElementId elem, Key predicted_deletion) {
  if (info_.count(elem) > 0) throw std::invalid_argument("duplicate element");
  base_.insert(elem);
  info_.emplace(elem, Info{predicted_deletion, seq_++});
  stack_.push_back(elem);
  if (bucket_size_.empty()) bucket_size_.push_back(0);
  ++bucket_size_[0];
  after_update();
}

DeletionReport BucketScheduler::erase(ElementId elem) {
  auto found = std::find(stack_.begin(), stack_.end(), elem);
  if (found == stack_.end()) throw std::out_of_range("unknown element");
  const auto index = static_cast<std::size_t>(found - stack_.begin());

  DeletionReport report;
  report.measured_eta = stack_.size() - index - 1;
  for (ElementId other : stack_) {
    if (other != elem && sooner(other, elem)) ++report.predicted_eta;
  }

  // Bucket holding elem: walk down from the top.
  std::size_t depth = stack_.size() - index;  // 1 = top
  std::size_t bucket = 0;
  while (depth > bucket_size_[bucket]) depth -= bucket_size_[bucket++];

  std::vector<ElementId> above(stack_.begin() + static_cast<std::ptrdiff_t>(index) + 1, stack_.end());
  const std::uint64_t before = deletion_rewinds_;
  rewind_to(index, deletion_rewinds_);
  report.rewinds = static_cast<std::size_t>(deletion_rewinds_ - before);
  for (ElementId e : above) {
    base_.insert(e);
    stack_.push_back(e);
  }
  report.reinserts = above.size();
  --bucket_size_[bucket];
  info_.erase(elem);
  after_update();
  return report;
}

void BucketScheduler::rewind_to(std::size_t height, std::uint64_t& counter) {
  while (stack_.size() > height) {
    base_.rewind();
    stack_.pop_back();
    ++counter;
  }
}

void BucketScheduler::after_update() {
  ++t_;
  rebuild(rebuild_level(t_));
}

void BucketScheduler::rebuild(std::size_t level) {
  if (bucket_size_.size() < level + 2) bucket_size_.resize(level + 2, 0);
  std::size_t region = 0;
  for (std::size_t j = 0; j <= level + 1; ++j) region += bucket_size_[j];
  const std::size_t floor = stack_.size() - region;

  // Bottom to top: latest predicted deletion first.
  std::vector<ElementId> order(stack_.begin() + static_cast<std::ptrdiff_t>(floor), stack_.end());
  std::sort(order.begin(), order.end(), [this](ElementId a, ElementId b) { return sooner(b, a); });

  std::size_t keep = 0;
  while (keep < region && stack_[floor + keep] == order[keep]) ++keep;
  rewind_to(floor + keep, rebuild_rewinds_);
  for (std::size_t i = keep; i < region; ++i) {
    base_.insert(order[i]);
    stack_.push_back(order[i]);
  }

  // B_0 takes ranks 1..2, B_j ranks 2^j+1..2^(j+1), the rest stays in B_(level+1).
  std::size_t left = region;
  for (std::size_t j = 0; j <= level; ++j) {
    const std::size_t want = j == 0 ? 2 : (std::size_t{1} << j);
    bucket_size_[j] = std::min(want, left);
    left -= bucket_size_[j];
  }
  bucket_size_[level + 1] = left;
}

std::vector<std::vector<ElementId>> BucketScheduler::buckets() const {
  std::vector<std::vector<ElementId>> out(bucket_size_.size());
  std::size_t pos = stack_.size();
  for (std::size_t j = 0; j < bucket_size_.size(); ++j) {
    for (std::size_t i = 0; i < bucket_size_[j]; ++i) out[j].push_back(stack_[--pos]);
  }
  return out;
}

std::optional<std::string> BucketScheduler::check_invariants(std::size_t size_constant) const {
  std::size_t total = 0;
  for (std::size_t s : bucket_size_) total += s;
  if (total != stack_.size()) return "bucket sizes do not cover the stack";
  if (t_ == 0) return std::nullopt;

  const std::size_t level = rebuild_level(t_);
  std::vector<ElementId> by_key = stack_;
  std::sort(by_key.begin(), by_key.end(), [this](ElementId a, ElementId b) { return sooner(a, b); });

  // Top-down prefix of the stack covering B_0..B_j must contain the
  // 2^(j+1) soonest deletions.
  std::size_t covered = 0;
  for (std::size_t j = 0; j <= level && j < bucket_size_.size(); ++j) {
    covered += bucket_size_[j];
    const std::size_t r = std::min(std::size_t{1} << (j + 1), stack_.size());
    std::vector<ElementId> prefix(stack_.end() - static_cast<std::ptrdiff_t>(covered), stack_.end());
    std::sort(prefix.begin(), prefix.end());
    for (std::size_t i = 0; i < r; ++i) {
      if (!std::binary_search(prefix.begin(), prefix.end(), by_key[i])) {
        return "next " + std::to_string(r) + " deletions not within B_0..B_" + std::to_string(j);
      }
    }
  }

  std::size_t shallow = 0;
  for (std::size_t j = 0; j <= level + 1 && j < bucket_size_.size(); ++j) shallow += bucket_size_[j];
  if (shallow > size_constant * (std::size_t{1} << level)) {
    return "B_0..B_" + std::to_string(level + 1) + " holds " + std::to_string(shallow) +
           " elements, above " + std::to_string(size_constant) + " * 2^" + std::to_string(level);
  }
  return std::nullopt;
}

void PredictedDeletionApsp::insert(ElementId v, BucketScheduler::Key predicted_deletion,
                                   std::vector<WeightedNeighbour> in_edges,
                                   std::vector<WeightedNeighbour> out_edges) {
  if (scheduler_.contains(v)) throw std::invalid_argument("duplicate vertex id");
  apsp_.declare(v, std::move(in_edges), std::move(out_edges));
  try {
    scheduler_.insert(v, predicted_deletion);
  } catch (...) {
    apsp_.retract(v);
    throw;
  }
}

DeletionReport PredictedDeletionApsp::erase(ElementId v) {
  DeletionReport report = scheduler_.erase(v);
  apsp_.retract(v);
  return report;
}

}  // namespace dynoracle
