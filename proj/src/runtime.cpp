#include <atomic>
#include <charconv>
#include <cstdlib>
#include <string>
#include <thread>

#include "cml/budget.hpp"
#include "cml/error.hpp"
#include "cml/parallel.hpp"

namespace cml {
namespace {

std::atomic<unsigned> g_thread_limit{0};

}  // namespace

void set_thread_limit(unsigned threads) { g_thread_limit.store(threads); }

unsigned thread_limit() {
  const unsigned t = g_thread_limit.load();
  if (t != 0) return t;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::uint64_t budget_or_env(std::uint64_t fallback) {
  const char* env = std::getenv("CML_BUDGET");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t value = 0;
  const std::string s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value == 0) {
    throw InputError("CML_BUDGET must be a positive integer, got '" + s + "'");
  }
  return value;
}

Budget Budget::density() { return {budget_or_env(kDensityBudget)}; }
Budget Budget::count() { return {budget_or_env(kCountBudget)}; }
Budget Budget::geometry() { return {budget_or_env(kGeometryBudget)}; }
Budget Budget::exp_sum() { return {budget_or_env(kExpSumBudget)}; }
Budget Budget::quadrature() { return {budget_or_env(kQuadratureBudget)}; }

void Budget::require(double needed, std::string_view what) const {
  if (!(needed <= static_cast<double>(max_points))) {
    throw BudgetError(std::string(what) + " needs " + std::to_string(needed) +
                      " points, budget is " + std::to_string(max_points));
  }
}

}  // namespace cml
