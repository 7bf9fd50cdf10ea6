#include "intgeo/parallel.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace intgeo {

namespace {

constexpr std::int64_t kChunk = 1024;

struct ChunkPartial {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t redraws = 0;
};

ChunkPartial run_chunk(std::int64_t begin, std::int64_t end,
                       const std::function<TrialOutcome(std::int64_t)>& fn) {
  ChunkPartial p;
  for (std::int64_t t = begin; t < end; ++t) {
    const TrialOutcome out = fn(t);
    p.sum += out.value;
    p.sum_sq += out.value * out.value;
    p.redraws += out.redraws;
  }
  return p;
}

}  // namespace

int default_thread_count() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

McResult run_trials(std::int64_t trials, int threads,
                    const std::function<TrialOutcome(std::int64_t)>& trial_fn) {
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  if (threads <= 0) threads = default_thread_count();

  const std::int64_t n_chunks = (trials + kChunk - 1) / kChunk;
  std::vector<ChunkPartial> partials(static_cast<std::size_t>(n_chunks));

  if (threads == 1 || n_chunks == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      partials[static_cast<std::size_t>(c)] =
          run_chunk(c * kChunk, std::min(trials, (c + 1) * kChunk), trial_fn);
    }
  } else {
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        partials[static_cast<std::size_t>(c)] =
            run_chunk(c * kChunk, std::min(trials, (c + 1) * kChunk), trial_fn);
      }
    };
    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(std::min<std::int64_t>(threads, n_chunks));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Combine in chunk order: identical result for any worker count.
  double sum = 0.0, sum_sq = 0.0;
  std::int64_t redraws = 0;
  for (const auto& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
    redraws += p.redraws;
  }

  McResult r;
  r.trials = trials;
  r.redraws = redraws;
  r.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * r.mean) / static_cast<double>(trials - 1));
    r.std_error = std::sqrt(var / static_cast<double>(trials));
  }
  return r;
}

}  // namespace intgeo
