#include "liefield/parallel.hpp"

#include <algorithm>

namespace liefield {
namespace {

inline void cpu_relax() {
#if defined(__x86_64__) || defined(__i386__)
  __asm__ __volatile__("pause");
#else
  std::this_thread::yield();
#endif
}

inline std::uint64_t generation_of(std::uint64_t gate) { return gate >> 32; }

}  // namespace

WorkerPool& WorkerPool::instance() {
  static WorkerPool pool;
  return pool;
}

WorkerPool::~WorkerPool() {
  shutdown_.store(true, std::memory_order_release);
  {
    std::lock_guard lock(wake_mutex_);
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::ensure_threads(int count) {
  while (static_cast<int>(threads_.size()) < count) {
    threads_.emplace_back([this] { worker_loop(); });
  }
}

bool WorkerPool::grab_and_run() {
  const std::uint64_t packed = gate_.fetch_add(1, std::memory_order_acq_rel);
  const std::uint32_t idx = static_cast<std::uint32_t>(packed);
  if (idx >= static_cast<std::uint32_t>(chunk_count_)) return false;
  (*task_)(static_cast<int>(idx), chunks_[idx].first, chunks_[idx].second);
  remaining_.fetch_sub(1, std::memory_order_release);
  return true;
}

void WorkerPool::worker_loop() {
  std::uint64_t seen = 0;
  while (true) {
    // Spin briefly to bridge the gap between back-to-back searches (the
    // simulation loop dispatches every step), then block. Yields keep
    // co-runnable threads schedulable on oversubscribed hosts.
    bool fresh = false;
    for (int spin = 0; spin < 16384; ++spin) {
      if (shutdown_.load(std::memory_order_acquire)) return;
      if (generation_of(gate_.load(std::memory_order_acquire)) != seen) {
        fresh = true;
        break;
      }
      if ((spin & 255) == 255) {
        std::this_thread::yield();
      } else {
        cpu_relax();
      }
    }
    if (!fresh) {
      std::unique_lock lock(wake_mutex_);
      wake_.wait(lock, [&] {
        return shutdown_.load(std::memory_order_acquire) ||
               generation_of(gate_.load(std::memory_order_acquire)) != seen;
      });
      if (shutdown_.load(std::memory_order_acquire)) return;
    }
    seen = generation_of(gate_.load(std::memory_order_acquire));
    while (grab_and_run()) {
    }
  }
}

void WorkerPool::run_chunks(std::int64_t n, int workers, const ChunkFn& fn) {
  if (n <= 0) return;
  if (workers <= 1 || n < 2 * workers) {
    fn(0, 0, n);
    return;
  }

  std::lock_guard dispatch_lock(dispatch_mutex_);
  // Executing more CPU-bound threads than cores only adds scheduler churn;
  // the requested worker count still sets the partition granularity.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int executors = std::min<int>(workers, static_cast<int>(hw));
  ensure_threads(executors - 1);

  // Finer chunks than workers smooth out scheduling imbalance; the result
  // does not depend on the partition, only the distances array does.
  const std::int64_t chunk_cap = std::max<std::int64_t>(1, n / 64);
  const int count = static_cast<int>(
      std::min<std::int64_t>(std::max(workers, std::min(4 * workers, 64)),
                             std::max<std::int64_t>(workers, chunk_cap)));

  chunks_.clear();
  const std::int64_t base = n / count;
  const std::int64_t extra = n % count;
  std::int64_t begin = 0;
  for (int c = 0; c < count; ++c) {
    const std::int64_t len = base + (c < extra ? 1 : 0);
    chunks_.emplace_back(begin, begin + len);
    begin += len;
  }
  task_ = &fn;
  chunk_count_ = count;
  remaining_.store(count, std::memory_order_relaxed);
  const std::uint64_t next_generation =
      generation_of(gate_.load(std::memory_order_relaxed)) + 1;
  gate_.store(next_generation << 32, std::memory_order_release);
  {
    std::lock_guard lock(wake_mutex_);
  }
  wake_.notify_all();

  while (grab_and_run()) {
  }
  for (int spin = 0; remaining_.load(std::memory_order_acquire) != 0;
       ++spin) {
    if ((spin & 255) == 255) {
      std::this_thread::yield();
    } else {
      cpu_relax();
    }
  }
}

}  // namespace liefield
