#pragma once

// Seeded, reproducible Monte Carlo: every trial draws from its own generator
// derived from (seed, trial index), so results do not depend on how trials
// are distributed over threads.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace qwalk {

using Engine = std::mt19937_64;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Trial `index` of run `seed` gets its own engine; seeding directly avoids
// the cost of std::seed_seq, which dominates short trials.
inline Engine substream(std::uint64_t seed, std::uint64_t index) {
  return Engine(mix64(mix64(seed) ^ (index + 0x9e3779b97f4a7c15ull)));
}

struct SampleStats {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Mean and standard error of integer samples. The sum is exact; the
/// variance pass runs in index order.
SampleStats summarize(const std::vector<std::uint64_t>& samples);

/// Runs trial(i, engine) for i in [0, trials) with engine = substream(seed, i)
/// and returns the per-trial results in trial order. threads == 0 picks
/// std::thread::hardware_concurrency(). The first exception thrown by any
/// trial (lowest trial index) is rethrown.
std::vector<std::uint64_t> run_trials(
    std::uint64_t trials, std::uint64_t seed,
    const std::function<std::uint64_t(std::uint64_t, Engine&)>& trial, unsigned threads = 0);

}  // namespace qwalk
