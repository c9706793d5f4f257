#include "ccmm/common.hpp"

#include <atomic>
#include <cstdlib>

namespace ccmm {

namespace {

std::size_t threads_from_env() {
  if (const char* env = std::getenv("CCMM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::atomic<std::size_t>& thread_setting() {
  static std::atomic<std::size_t> value{threads_from_env()};
  return value;
}

}  // namespace

std::string to_string(Strategy s) { return s == Strategy::Exact ? "exact" : "family"; }

Strategy strategy_from_string(const std::string& s) {
  if (s == "exact") return Strategy::Exact;
  if (s == "family") return Strategy::Family;
  throw Error("unknown strategy '" + s + "' (expected exact|family)");
}

std::size_t thread_count() { return thread_setting().load(); }

void set_thread_count(std::size_t threads) { thread_setting().store(std::max<std::size_t>(1, threads)); }

void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(1, chunk);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const std::size_t workers = std::min(thread_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          body(c * chunk, std::min(n, (c + 1) * chunk));
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double ordered_sum(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace ccmm
