#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace besovch {

/// Hardware concurrency, capped by the BESOVCH_THREADS environment variable when set.
/// Throws InvalidArgument for a value that is not a positive integer.
std::size_t worker_count();

/// Applies `fn` to every input on up to `workers` threads. Results keep input order, so reductions
/// over them are deterministic. The exception of the lowest failing index is rethrown.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn, std::size_t workers = worker_count())
    -> std::vector<std::invoke_result_t<Fn&, const In&>> {
  using Out = std::invoke_result_t<Fn&, const In&>;
  const std::size_t n = inputs.size();
  std::vector<std::optional<Out>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(inputs[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), n);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  std::vector<Out> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace besovch
