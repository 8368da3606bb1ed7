#pragma once

#include "cayley/ball.hpp"
#include "cayley/error.hpp"
#include "cayley/isoperimetry.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace cayley {

/// Index-based view of the Cayley graph restricted to B(radius). Vertex 0 is
/// e; vertex ids follow the ball table's BFS order. neighbor(v, s) is the
/// index of v * s, or -1 when that product lies outside the patch.
class CayleyPatch {
 public:
  static CayleyPatch from_ball(const BallTable& table, int radius);

  const Group& group() const { return group_; }
  int radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }
  std::size_t degree() const { return degree_; }

  std::int32_t neighbor(std::size_t v, std::size_t s) const { return neighbors_[v * degree_ + s]; }
  const Element& element(std::size_t v) const { return elements_[v]; }

  FiniteSubset subset(std::span<const std::int32_t> members) const;

 private:
  CayleyPatch(Group group, int radius) : group_(std::move(group)), radius_(radius) {}

  Group group_;
  int radius_;
  std::size_t degree_ = 0;
  std::vector<Element> elements_;
  std::vector<std::int32_t> neighbors_;
};

/// A connected set containing e, as seen by enumeration visitors. Valid only
/// for the duration of the callback.
class SubsetView {
 public:
  SubsetView(const CayleyPatch& patch, std::span<const std::int32_t> members, const std::vector<std::uint8_t>& in_set)
      : patch_(&patch), members_(members), in_set_(&in_set) {}

  std::span<const std::int32_t> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t boundary_size() const {
    std::size_t count = 0;
    for (const auto v : members_) {
      for (std::size_t s = 0; s < patch_->degree(); ++s) {
        const auto n = patch_->neighbor(static_cast<std::size_t>(v), s);
        if (n < 0 || !(*in_set_)[static_cast<std::size_t>(n)]) {
          ++count;
          break;
        }
      }
    }
    return count;
  }

 private:
  const CayleyPatch* patch_;
  std::span<const std::int32_t> members_;
  const std::vector<std::uint8_t>* in_set_;
};

namespace detail {

/// A suspended enumeration branch: members so far, candidate list, and the
/// vertices already marked as reached.
struct EnumerationTask {
  std::vector<std::int32_t> members;
  std::vector<std::int32_t> untried;
  std::vector<std::int32_t> marked;
};

/// Redelmeier-style enumeration of connected vertex sets containing vertex 0:
/// each set is produced exactly once. Candidates reached from a newly added
/// vertex are tried before older candidates.
class SubsetWalker {
 public:
  SubsetWalker(const CayleyPatch& patch, std::size_t min_size, std::size_t max_size, std::size_t split_depth,
               std::vector<EnumerationTask>* tasks)
      : patch_(patch),
        min_size_(min_size),
        max_size_(max_size),
        split_depth_(split_depth),
        tasks_(tasks),
        in_set_(patch.size(), 0),
        marked_(patch.size(), 0),
        buffers_(max_size + 1) {}

  /// Runs from the root. Returns false if the visitor asked to stop.
  template <typename Visit>
  bool run_root(Visit& visit) {
    buffers_[0].assign(1, 0);
    mark(0);
    const bool ok = descend(0, visit);
    unmark_to(0);
    return ok;
  }

  template <typename Visit>
  bool run_task(const EnumerationTask& task, Visit& visit) {
    for (const auto v : task.marked) mark(v);
    for (const auto v : task.members) {
      members_.push_back(v);
      in_set_[static_cast<std::size_t>(v)] = 1;
    }
    const std::size_t depth = members_.size();
    buffers_[depth] = task.untried;
    const bool ok = descend(depth, visit);
    for (const auto v : members_) in_set_[static_cast<std::size_t>(v)] = 0;
    members_.clear();
    unmark_to(0);
    return ok;
  }

 private:
  void mark(std::int32_t v) {
    marked_[static_cast<std::size_t>(v)] = 1;
    marked_list_.push_back(v);
  }
  void unmark_to(std::size_t level) {
    while (marked_list_.size() > level) {
      marked_[static_cast<std::size_t>(marked_list_.back())] = 0;
      marked_list_.pop_back();
    }
  }

  template <typename Visit>
  bool descend(std::size_t depth, Visit& visit) {
    std::vector<std::int32_t>& untried = buffers_[depth];
    for (std::size_t i = 0; i < untried.size(); ++i) {
      const std::int32_t u = untried[i];
      members_.push_back(u);
      in_set_[static_cast<std::size_t>(u)] = 1;
      const std::size_t size = members_.size();
      bool keep_going = true;
      if (size >= min_size_) {
        keep_going = visit(SubsetView(patch_, members_, in_set_));
      }
      if (keep_going && size < max_size_) {
        const std::size_t mark_level = marked_list_.size();
        std::vector<std::int32_t>& child = buffers_[size];
        child.clear();
        for (std::size_t s = 0; s < patch_.degree(); ++s) {
          const auto n = patch_.neighbor(static_cast<std::size_t>(u), s);
          if (n >= 0 && !marked_[static_cast<std::size_t>(n)]) {
            mark(n);
            child.push_back(n);
          }
        }
        child.insert(child.end(), untried.begin() + static_cast<std::ptrdiff_t>(i) + 1, untried.end());
        if (tasks_ != nullptr && size == split_depth_) {
          tasks_->push_back(EnumerationTask{members_, child, marked_list_});
        } else {
          keep_going = descend(size, visit);
        }
        unmark_to(mark_level);
      }
      in_set_[static_cast<std::size_t>(u)] = 0;
      members_.pop_back();
      if (!keep_going) return false;
    }
    return true;
  }

  const CayleyPatch& patch_;
  std::size_t min_size_;
  std::size_t max_size_;
  std::size_t split_depth_;
  std::vector<EnumerationTask>* tasks_;
  std::vector<std::uint8_t> in_set_;
  std::vector<std::uint8_t> marked_;
  std::vector<std::int32_t> marked_list_;
  std::vector<std::int32_t> members_;
  std::vector<std::vector<std::int32_t>> buffers_;
};

}  // namespace detail

/// Enumerates every connected subset of the patch that contains e and has
/// size in [min_size, max_size], each exactly once.
///
/// The work is cut into chunks: chunk 0 holds sets of size <= split depth
/// (3), and each later chunk one suspended branch below that depth. The
/// canonical order is chunk order, then discovery order within a chunk, and
/// it does not depend on `threads`. `visit(acc, view)` returns false to stop
/// its chunk; chunks after the first stopped one are skipped. Returns one
/// accumulator per chunk, in canonical order.
template <typename Acc, typename Visit>
std::vector<Acc> enumerate_connected(const CayleyPatch& patch, std::size_t min_size, std::size_t max_size,
                                     unsigned threads, Visit visit) {
  if (max_size == 0) return {};
  if (max_size > static_cast<std::size_t>(patch.radius()) + 1) {
    throw Error(ErrorCode::HorizonExceeded, "patch radius " + std::to_string(patch.radius()) +
                                                " cannot hold connected sets of size " + std::to_string(max_size));
  }
  constexpr std::size_t kSplitDepth = 3;
  std::vector<detail::EnumerationTask> tasks;
  std::vector<Acc> chunks(1);
  std::atomic<std::size_t> cutoff{std::numeric_limits<std::size_t>::max()};
  {
    detail::SubsetWalker walker(patch, min_size, max_size, kSplitDepth, &tasks);
    auto head_visit = [&](const SubsetView& view) { return visit(chunks[0], view); };
    if (!walker.run_root(head_visit)) {
      tasks.clear();
      return chunks;
    }
  }
  chunks.resize(tasks.size() + 1);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    detail::SubsetWalker walker(patch, min_size, max_size, kSplitDepth, nullptr);
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      if (t + 1 > cutoff.load()) continue;
      Acc& acc = chunks[t + 1];
      auto task_visit = [&](const SubsetView& view) { return visit(acc, view); };
      if (!walker.run_task(tasks[t], task_visit)) {
        std::size_t current = cutoff.load();
        while (t + 1 < current && !cutoff.compare_exchange_weak(current, t + 1)) {
        }
      }
    }
  };
  const unsigned count = std::max(1U, threads);
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  }
  // Chunks past the cutoff may be partially filled; callers must stop at the
  // first stopped chunk, so drop them here.
  const std::size_t stop = cutoff.load();
  if (stop != std::numeric_limits<std::size_t>::max()) chunks.resize(stop + 1);
  return chunks;
}

/// For each (|Omega|, |dOmega|) pair met during enumeration, the first set
/// (in canonical order) that realizes it. Inequality forms and Folner
/// thresholds depend on a set only through this pair.
struct ProfileCensus {
  std::size_t max_size = 0;
  std::uint64_t sets_seen = 0;
  /// first_witness[k][d]: members of the first set of size k with boundary d.
  std::vector<std::vector<std::vector<std::int32_t>>> first_witness;

  bool seen(std::size_t size, std::size_t boundary) const { return !first_witness[size][boundary].empty(); }
};

ProfileCensus census_connected(const CayleyPatch& patch, std::size_t max_size, unsigned threads);

}  // namespace cayley
