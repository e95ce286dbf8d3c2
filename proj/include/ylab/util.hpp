// Shared numerics plumbing: deterministic reductions, worker pool, RNG.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>

namespace ylab {

// Pairwise (binary-tree) reduction. The tree shape depends only on v.size(),
// so a sum is bit-stable no matter how its terms were produced.
double pairwise_sum(std::span<const double> v);

// Worker cap: min(hardware threads, YAMABE_THREADS if set, njobs).
int worker_count(std::size_t njobs);

// Runs fn(i) for i in [0, n) on up to worker_count(n) threads. Each index is
// handled exactly once; callers keep results in index-addressed slots so the
// output ordering is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::uint64_t splitmix64(std::uint64_t& state);

// mt19937_64 engine with hand-rolled value transforms. The engine is pinned
// by the standard; distributions are not, so uniform/normal are derived here
// to keep seeded runs reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double a, double b);
  double normal();
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// printf "%.17g" — enough digits to round-trip a double in all our formats.
std::string fmt_g17(double x);

}  // namespace ylab
