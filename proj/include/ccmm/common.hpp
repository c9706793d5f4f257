#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ccmm {

using Index = std::size_t;

/// Raised when an input violates a documented precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ball membership is strict; distances within this relative band of the
// radius count as ties and resolve to "not a member".
inline constexpr double kTieTolerance = 1e-12;

// Mass comparisons against 1/2, 1-kappa etc. absorb summation noise.
inline constexpr double kMassTolerance = 1e-12;

// Lipschitz certificates accept L <= target + kLipschitzTolerance.
inline constexpr double kLipschitzTolerance = 1e-10;

inline double tie_band(double r) { return kTieTolerance * std::max(1.0, r); }

/// True when `distance` reaches the open radius `r` (ties count as reached).
inline bool reaches(double distance, double r) {
  return distance >= r - tie_band(r);
}

enum class Strategy { Exact, Family };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

// Largest point count for which subset enumeration is allowed.
inline constexpr Index kExactLimit = 16;

/// Number of worker threads used by parallel loops. Defaults to the
/// CCMM_THREADS environment variable, else 1.
std::size_t thread_count();
void set_thread_count(std::size_t threads);

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend only on n, never on the thread count, so per-chunk partial results
/// combine identically under every schedule.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body);

/// Weighted sum computed in index order.
double ordered_sum(const std::vector<double>& values);

}  // namespace ccmm
