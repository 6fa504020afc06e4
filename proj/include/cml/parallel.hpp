#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace cml {

// Work is always split into a fixed number of partitions that does not
// depend on the thread count; partial results are merged in partition
// order. Reports are therefore bit-identical for any --threads value.
inline constexpr std::size_t kPartitions = 64;

void set_thread_limit(unsigned threads);
unsigned thread_limit();

// Half-open sub-range [first, last) of [0, total) for partition `part`.
inline std::pair<std::uint64_t, std::uint64_t> partition_range(std::uint64_t total,
                                                               std::size_t parts,
                                                               std::size_t part) {
  const std::uint64_t base = total / parts;
  const std::uint64_t extra = total % parts;
  const std::uint64_t first = part * base + std::min<std::uint64_t>(part, extra);
  const std::uint64_t len = base + (part < extra ? 1 : 0);
  return {first, first + len};
}

// Evaluates fn(part) for part in [0, parts) on up to thread_limit() threads
// and returns the results indexed by partition.
template <class T, class Fn>
std::vector<T> map_partitions(std::size_t parts, Fn&& fn) {
  std::vector<T> results(parts);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, thread_limit()), parts));
  if (workers <= 1) {
    for (std::size_t i = 0; i < parts; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= parts) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(parts);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

// Mixed-radix odometer over tuples (i_0, ..., i_{k-1}) with 0 <= i_j < radix_j.
// The first coordinate varies slowest, so linear index order is lexicographic.
class Odometer {
 public:
  Odometer(std::size_t dims, std::uint64_t radix) : digits_(dims, 0), radices_(dims, radix) {}
  explicit Odometer(std::vector<std::uint64_t> radices)
      : digits_(radices.size(), 0), radices_(std::move(radices)) {}

  void seek(std::uint64_t index) {
    for (std::size_t j = digits_.size(); j-- > 0;) {
      digits_[j] = index % radices_[j];
      index /= radices_[j];
    }
  }

  // Advances to the next tuple; returns the lowest index of a changed digit.
  std::size_t advance() {
    std::size_t j = digits_.size();
    while (j-- > 0) {
      if (++digits_[j] < radices_[j]) return j;
      digits_[j] = 0;
    }
    return 0;
  }

  const std::vector<std::uint64_t>& digits() const { return digits_; }
  std::uint64_t operator[](std::size_t j) const { return digits_[j]; }

 private:
  std::vector<std::uint64_t> digits_;
  std::vector<std::uint64_t> radices_;
};

// Product of the radices as a double (callers check it against a budget
// before enumerating).
inline double tuple_count(const std::vector<std::uint64_t>& radices) {
  double total = 1.0;
  for (auto r : radices) total *= static_cast<double>(r);
  return total;
}

// Runs fn(acc, digits) for every tuple of the mixed-radix space, split into
// kPartitions contiguous index ranges. Returns the per-partition
// accumulators in partition order; the caller merges them.
template <class Acc, class Fn>
std::vector<Acc> map_tuples(const std::vector<std::uint64_t>& radices, Fn&& fn) {
  std::uint64_t total = 1;
  for (auto r : radices) total *= r;
  return map_partitions<Acc>(kPartitions, [&](std::size_t part) {
    Acc acc{};
    const auto [first, last] = partition_range(total, kPartitions, part);
    if (first == last) return acc;
    Odometer odo(radices);
    odo.seek(first);
    for (std::uint64_t i = first; i < last; ++i) {
      fn(acc, odo.digits());
      odo.advance();
    }
    return acc;
  });
}

}  // namespace cml
