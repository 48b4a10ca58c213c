#include "ell2/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace ell2 {

namespace {

std::atomic<int> g_workers{0};

int default_workers() {
  if (const char* env = std::getenv("ELL2_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

struct Moments {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

// Chan et al. pairwise merge.
Moments merge(const Moments& a, const Moments& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  Moments r;
  r.n = a.n + b.n;
  double d = b.mean - a.mean;
  r.mean = a.mean + d * static_cast<double>(b.n) / static_cast<double>(r.n);
  r.m2 = a.m2 + b.m2 + d * d * static_cast<double>(a.n) * static_cast<double>(b.n) / static_cast<double>(r.n);
  return r;
}

}  // namespace

SampleStream SampleStream::derived(std::uint64_t salt) const {
  SampleStream s = *this;
  s.seed = splitmix64(seed ^ splitmix64(salt + 0x9e3779b97f4a7c15ULL));
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  return splitmix64(splitmix64(seed) ^ (chunk * 0xd1b54a32d192ed03ULL + 1));
}

void set_worker_count(int n) { g_workers = n > 0 ? n : 0; }

int worker_count() {
  int n = g_workers.load();
  return n > 0 ? n : default_workers();
}

void parallel_chunks(long chunks, const std::function<void(long)>& body) {
  if (chunks <= 0) return;
  int w = static_cast<int>(std::min<long>(worker_count(), chunks));
  if (w <= 1) {
    for (long c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (long c = next++; c < chunks; c = next++) body(c);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<Estimate> mc_mean(const SampleStream& stream, long n, int k,
                              const std::function<void(Rng&, double*)>& draw) {
  std::vector<Estimate> out(k);
  if (n <= 0) return out;
  long cs = std::max(1, stream.chunk_size);
  long chunks = (n + cs - 1) / cs;
  std::vector<std::vector<Moments>> parts(chunks, std::vector<Moments>(k));
  parallel_chunks(chunks, [&](long c) {
    Rng rng(chunk_seed(stream.seed, static_cast<std::uint64_t>(c)));
    long begin = c * cs;
    long end = std::min(n, begin + cs);
    std::vector<double> v(k);
    auto& m = parts[c];
    for (long s = begin; s < end; ++s) {
      draw(rng, v.data());
      for (int j = 0; j < k; ++j) {
        Moments one{1, v[j], 0.0};
        m[j] = merge(m[j], one);
      }
    }
  });
  for (int j = 0; j < k; ++j) {
    Moments tot;
    for (long c = 0; c < chunks; ++c) tot = merge(tot, parts[c][j]);
    out[j].n = tot.n;
    out[j].mean = tot.mean;
    out[j].std_error = tot.n > 1 ? std::sqrt(tot.m2 / static_cast<double>(tot.n - 1) / static_cast<double>(tot.n)) : 0.0;
  }
  return out;
}

Estimate mc_mean(const SampleStream& stream, long n, const std::function<double(Rng&)>& draw) {
  return mc_mean(stream, n, 1, [&](Rng& rng, double* out) { out[0] = draw(rng); })[0];
}

std::vector<double> gaussian_samples(const SampleStream& stream, long n,
                                     const std::vector<double>& sigmas) {
  std::size_t d = sigmas.size();
  std::vector<double> out(static_cast<std::size_t>(n) * d);
  if (n <= 0) return out;
  long cs = std::max(1, stream.chunk_size);
  long chunks = (n + cs - 1) / cs;
  parallel_chunks(chunks, [&](long c) {
    Rng rng(chunk_seed(stream.seed, static_cast<std::uint64_t>(c)));
    std::normal_distribution<double> nd(0.0, 1.0);
    long begin = c * cs;
    long end = std::min(n, begin + cs);
    for (long s = begin; s < end; ++s)
      for (std::size_t j = 0; j < d; ++j) out[s * d + j] = sigmas[j] * nd(rng);
  });
  return out;
}

}  // namespace ell2
