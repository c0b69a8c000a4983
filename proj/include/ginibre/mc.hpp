#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace ginibre {

/// Monte Carlo value with its standard error and provenance.
struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::string method;
};

/// Mergeable mean/variance accumulator. Sums are kept relative to the first
/// observed value with Neumaier compensation, so constant input yields an exact
/// zero variance and partial accumulators merge without losing low-order bits.
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);

  std::int64_t count() const { return n_; }
  double mean() const;
  double variance() const;
  double std_error() const;

  /// Throws PreconditionError when fewer than `min_samples` values were added.
  MCEstimate estimate(std::uint64_t seed, std::string method, std::int64_t min_samples = 100) const;

 private:
  struct Compensated {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x);
    double value() const { return sum + carry; }
  };
  std::int64_t n_ = 0;
  double shift_ = 0.0;
  Compensated s1_;
  Compensated s2_;
};

MCEstimate accumulate(std::span<const double> values, std::uint64_t seed = 0, std::string method = "mean");

/// Thread count from an explicit request, else GINIBRE_LAB_THREADS, else hardware concurrency.
int resolve_threads(int requested);

/// Runs body(chunk) for chunk in [0, n_chunks) on up to `threads` workers. Callers
/// write results into per-chunk slots and reduce in chunk order, which makes the
/// reduction independent of the worker count.
template <class Body>
void parallel_chunks(std::size_t n_chunks, int threads, Body&& body) {
  std::size_t workers = std::min<std::size_t>(std::max(1, threads), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) body(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < n_chunks; c += workers) body(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ginibre
