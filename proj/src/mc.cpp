#include "ginibre/mc.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "ginibre/rng.hpp"
#include "ginibre/types.hpp"

namespace ginibre {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(mix64(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632be59bd9b4e019ULL))) {}

RngStream::result_type RngStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

RngStream RngStream::split(std::uint64_t id) const {
  return RngStream(seed_, mix64(stream_ ^ 0xd1b54a32d192ed03ULL) + id);
}

double RngStream::uniform() {
  // 53 random bits, shifted off zero
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_normal_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

double RngStream::exponential() { return -std::log(uniform()); }

void Accumulator::Compensated::add(double x) {
  double t = sum + x;
  if (std::abs(sum) >= std::abs(x))
    carry += (sum - t) + x;
  else
    carry += (x - t) + sum;
  sum = t;
}

void Accumulator::add(double x) {
  if (n_ == 0) shift_ = x;
  double d = x - shift_;
  ++n_;
  s1_.add(d);
  s2_.add(d * d);
}

void Accumulator::merge(const Accumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  double delta = other.shift_ - shift_;
  double o1 = other.s1_.value();
  n_ += other.n_;
  s2_.add(other.s2_.sum);
  s2_.add(other.s2_.carry);
  s2_.add(2.0 * delta * o1);
  s2_.add(static_cast<double>(other.n_) * delta * delta);
  s1_.add(other.s1_.sum);
  s1_.add(other.s1_.carry);
  s1_.add(static_cast<double>(other.n_) * delta);
}

double Accumulator::mean() const { return n_ == 0 ? 0.0 : shift_ + s1_.value() / static_cast<double>(n_); }

double Accumulator::variance() const {
  if (n_ < 2) return 0.0;
  double n = static_cast<double>(n_);
  double s1 = s1_.value();
  double v = (s2_.value() - s1 * s1 / n) / (n - 1.0);
  return v > 0.0 ? v : 0.0;
}

double Accumulator::std_error() const { return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_)); }

MCEstimate Accumulator::estimate(std::uint64_t seed, std::string method, std::int64_t min_samples) const {
  if (n_ < min_samples)
    throw PreconditionError("insufficient samples: " + std::to_string(n_) + " < " + std::to_string(min_samples));
  return MCEstimate{mean(), std_error(), n_, seed, std::move(method)};
}

MCEstimate accumulate(std::span<const double> values, std::uint64_t seed, std::string method) {
  Accumulator acc;
  for (double v : values) acc.add(v);
  return acc.estimate(seed, std::move(method));
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GINIBRE_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace ginibre
