#include "qwalk/rng.hpp"

#include <cmath>
#include <exception>
#include <mutex>

namespace qwalk {

SampleStats summarize(const std::vector<std::uint64_t>& samples) {
  SampleStats s;
  if (samples.empty()) return s;
  unsigned __int128 total = 0;
  for (std::uint64_t v : samples) total += v;
  const auto n = static_cast<double>(samples.size());
  s.mean = static_cast<double>(total) / n;
  if (samples.size() < 2) return s;
  double ss = 0.0;
  for (std::uint64_t v : samples) {
    const double d = static_cast<double>(v) - s.mean;
    ss += d * d;
  }
  s.standard_error = std::sqrt(ss / (n - 1.0) / n);
  return s;
}

std::vector<std::uint64_t> run_trials(
    std::uint64_t trials, std::uint64_t seed,
    const std::function<std::uint64_t(std::uint64_t, Engine&)>& trial, unsigned threads) {
  std::vector<std::uint64_t> results(trials, 0);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));

  std::mutex error_mutex;
  std::uint64_t error_trial = trials;
  std::exception_ptr error;

  auto worker = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      try {
        Engine gen = substream(seed, i);
        results[i] = trial(i, gen);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_trial) {
          error_trial = i;
          error = std::current_exception();
        }
        return;
      }
    }
  };

  if (threads <= 1) {
    worker(0, trials);
  } else {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t begin = t * chunk;
      const std::uint64_t end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace qwalk
