// Fully dynamic structures from incremental ones with undo, given predicted
// deletion times.
//
// Live elements sit on the insertion stack of an incremental structure in
// reverse predicted-deletion order, grouped into buckets B_0 (top), B_1, ...
// After update t the top buckets up to rebuild_level(t) + 1 are re-sorted,
// where rebuild_level(t) is the number of trailing zero bits of t. Deleting an
// element rewinds everything above it and pushes those elements back.
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynoracle/field.hpp"

namespace dynoracle {

using ElementId = std::uint64_t;

/// Incremental structure whose last insertion can be undone exactly.
class UndoableIncremental {
 public:
  virtual ~UndoableIncremental() = default;
  virtual void insert(ElementId elem) = 0;
  virtual void rewind() = 0;
  virtual std::uint64_t work() const = 0;
};

struct WeightedNeighbour {
  ElementId vertex;
  std::int64_t weight;
};

/// Exact APSP under vertex insertions with non-negative weights.
///
/// Edges are declared per vertex and stay in a catalogue; inserting a vertex
/// activates every declared edge between it and vertices already present.
class IncrementalApsp : public UndoableIncremental {
 public:
  static constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max();

  /// Records the edges a vertex brings with it. Weights must be >= 0.
  void declare(ElementId v, std::vector<WeightedNeighbour> in_edges,
               std::vector<WeightedNeighbour> out_edges);
  /// Drops the declarations of an absent vertex.
  void retract(ElementId v);

  void insert(ElementId v) override;
  void rewind() override;
  std::uint64_t work() const override { return work_.ops; }

  std::int64_t distance(ElementId u, ElementId v) const;
  bool contains(ElementId v) const { return slot_.count(v) > 0; }
  std::size_t size() const noexcept { return order_.size(); }
  /// Present vertices, oldest insertion first.
  const std::vector<ElementId>& order() const noexcept { return order_; }
  /// Effective weight of edge u -> v, if declared by either endpoint.
  std::optional<std::int64_t> edge_weight(ElementId u, ElementId v) const;
  std::uint64_t largest_insert_work() const noexcept { return largest_insert_; }

 private:
  struct Declaration {
    std::unordered_map<ElementId, std::int64_t> in, out;
  };
  struct Change {
    std::size_t row, col;
    std::int64_t old;
  };

  std::unordered_map<ElementId, Declaration> declared_;
  std::unordered_map<ElementId, std::size_t> slot_;
  std::vector<ElementId> order_;
  std::vector<std::vector<std::int64_t>> dist_;
  std::vector<std::vector<Change>> log_;
  OpCounter work_;
  std::uint64_t largest_insert_ = 0;
};

/// Deepest bucket level re-sorted after update t (t >= 1): trailing zero bits of t.
inline std::size_t rebuild_level(std::uint64_t t) noexcept {
  return static_cast<std::size_t>(std::countr_zero(t));
}

struct DeletionReport {
  std::size_t measured_eta = 0;    // elements above it on the stack
  std::size_t predicted_eta = 0;   // live elements with a smaller key
  std::size_t rewinds = 0;
  std::size_t reinserts = 0;
};

class BucketScheduler {
 public:
  using Key = std::int64_t;

  explicit BucketScheduler(UndoableIncremental& base) : base_(base) {}

  /// Smaller key = predicted to be deleted sooner. Ties go to the earlier insert.
  void insert(ElementId elem, Key predicted_deletion);
  DeletionReport erase(ElementId elem);

  std::uint64_t updates() const noexcept { return t_; }
  std::size_t live() const noexcept { return stack_.size(); }
  bool contains(ElementId elem) const { return info_.count(elem) > 0; }
  /// Bucket contents, B_0 first; each listed top of stack first.
  std::vector<std::vector<ElementId>> buckets() const;
  /// Stack order, bottom first.
  const std::vector<ElementId>& stack() const noexcept { return stack_; }

  std::uint64_t rebuild_rewinds() const noexcept { return rebuild_rewinds_; }
  std::uint64_t deletion_rewinds() const noexcept { return deletion_rewinds_; }

  /// Checks the bucket invariants for the current time; returns a
  /// description of the first violation.
  std::optional<std::string> check_invariants(std::size_t size_constant = 5) const;

 private:
  struct Info {
    Key key;
    std::uint64_t seq;
  };
  bool sooner(ElementId a, ElementId b) const;
  void after_update();
  void rebuild(std::size_t level);
  void rewind_to(std::size_t height, std::uint64_t& counter);

  UndoableIncremental& base_;
  std::unordered_map<ElementId, Info> info_;
  std::vector<ElementId> stack_;
  std::vector<std::size_t> bucket_size_;  // bucket_size_[j] = |B_j|
  std::uint64_t t_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t rebuild_rewinds_ = 0;
  std::uint64_t deletion_rewinds_ = 0;
};

/// APSP under vertex insertions and deletions with predicted deletion times.
class PredictedDeletionApsp {
 public:
  PredictedDeletionApsp() : scheduler_(apsp_) {}

  void insert(ElementId v, BucketScheduler::Key predicted_deletion,
              std::vector<WeightedNeighbour> in_edges, std::vector<WeightedNeighbour> out_edges);
  DeletionReport erase(ElementId v);
  std::int64_t distance(ElementId u, ElementId v) const { return apsp_.distance(u, v); }

  const IncrementalApsp& apsp() const noexcept { return apsp_; }
  const BucketScheduler& scheduler() const noexcept { return scheduler_; }
  std::uint64_t work() const noexcept { return apsp_.work(); }

 private:
  IncrementalApsp apsp_;
  BucketScheduler scheduler_;
};

}  // namespace dynoracle
