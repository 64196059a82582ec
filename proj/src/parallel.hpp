#ifndef CSLAB_SRC_PARALLEL_HPP
#define CSLAB_SRC_PARALLEL_HPP

#include <cslab/errors.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cslab::detail {

[[noreturn]] inline void rethrow_with_trial(std::exception_ptr error, std::int64_t trial)
{
  const std::string prefix = "trial " + std::to_string(trial) + ": ";
  try {
    std::rethrow_exception(error);
  } catch (const DimensionError& e) {
    throw DimensionError(prefix + e.what());
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(prefix + e.what());
  } catch (const RankDeficientError& e) {
    throw RankDeficientError(prefix + e.what(), e.sigma_min());
  } catch (const NonpositiveDenominator& e) {
    throw NonpositiveDenominator(prefix + e.what(), e.gamma());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

// Calls fn(k) for k in [0, trials) on `workers` threads. Work is handed out in
// chunks; the first failure stops the pool and is rethrown tagged with the
// smallest failing trial index seen.
template <typename Fn>
void for_each_trial(std::int64_t trials, int workers, Fn&& fn)
{
  constexpr std::int64_t chunk = 64;
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mutex;
  std::int64_t failed_trial = -1;
  std::exception_ptr error;

  auto body = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::int64_t begin = next.fetch_add(chunk);
      if (begin >= trials) return;
      const std::int64_t end = std::min(trials, begin + chunk);
      for (std::int64_t k = begin; k < end; ++k) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (failed_trial < 0 || k < failed_trial) {
            failed_trial = k;
            error = std::current_exception();
          }
          stop = true;
          return;
        }
      }
    }
  };

  const auto threads = static_cast<std::int64_t>(std::max(1, workers));
  if (threads == 1 || trials <= chunk) {
    body();
  } else {
    std::vector<std::jthread> pool;
    for (std::int64_t w = 0; w < std::min(threads, (trials + chunk - 1) / chunk); ++w)
      pool.emplace_back(body);
  }
  if (error) rethrow_with_trial(error, failed_trial);
}

} // namespace cslab::detail

#endif
