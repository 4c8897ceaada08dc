// liefield: vector-field path following on matrix Lie groups
//
// Minimal persistent worker pool for the curve search. Work is split into
// contiguous index chunks handed out through a single generation-tagged
// atomic counter; the caller participates, and workers spin briefly before
// blocking so back-to-back searches (the simulation loop) do not pay a
// wakeup latency every step.

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace liefield {

class WorkerPool {
 public:
  using ChunkFn = std::function<void(int, std::int64_t, std::int64_t)>;

  static WorkerPool& instance();

  /// Runs fn(chunk_index, begin, end) over contiguous chunks of [0, n)
  /// using the calling thread plus pool threads (capped at the hardware
  /// concurrency). workers <= 1 runs inline. Concurrent callers are
  /// serialized; the parallel search itself is not nested.
  void run_chunks(std::int64_t n, int workers, const ChunkFn& fn);

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;
  ~WorkerPool();

 private:
  WorkerPool() = default;
  void ensure_threads(int count);
  void worker_loop();
  bool grab_and_run();

  std::mutex dispatch_mutex_;  // one dispatch at a time

  std::mutex wake_mutex_;
  std::condition_variable wake_;
  std::vector<std::thread> threads_;

  // Upper 32 bits: dispatch generation; lower 32 bits: next chunk index.
  // The dispatcher publishes chunks_/task_/chunk_count_ with one release
  // store of (generation+1, 0); every grab is an acquire RMW on the same
  // word, so a grab that wins an in-range index is always synchronized
  // with the dispatch it belongs to, and indices from an older dispatch
  // can never alias a fresh one (their generation bits differ).
  std::atomic<std::uint64_t> gate_{0};
  std::atomic<int> remaining_{0};
  std::atomic<bool> shutdown_{false};
  const ChunkFn* task_ = nullptr;
  std::vector<std::pair<std::int64_t, std::int64_t>> chunks_;
  int chunk_count_ = 0;
};

}  // namespace liefield
