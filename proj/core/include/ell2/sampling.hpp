#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ell2 {

using Rng = std::mt19937_64;

struct SampleStream {
  std::uint64_t seed = 20240601;
  int chunk_size = 4096;
  int dims = 8;

  // Independent sub-stream for a different purpose under the same seed.
  SampleStream derived(std::uint64_t salt) const;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk);

// Process-wide worker count for chunked estimators. Results never depend on it.
void set_worker_count(int n);
int worker_count();

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
};

// Runs body(chunk_index) for chunk_index in [0, chunks) on the worker pool.
void parallel_chunks(long chunks, const std::function<void(long)>& body);

// Sample mean of `k` statistics per draw. `draw(rng, out)` writes k values.
// Chunk c uses an RNG seeded by chunk_seed(stream.seed, c); per-chunk
// moments are merged in chunk order, so the result is bitwise stable for
// any worker count.
std::vector<Estimate> mc_mean(const SampleStream& stream, long n, int k,
                              const std::function<void(Rng&, double*)>& draw);

Estimate mc_mean(const SampleStream& stream, long n, const std::function<double(Rng&)>& draw);

// n draws of independent centred Gaussians with the given std devs,
// row-major (n x sigmas.size()). Chunked like mc_mean.
std::vector<double> gaussian_samples(const SampleStream& stream, long n,
                                     const std::vector<double>& sigmas);

}  // namespace ell2
