#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace cml {

// Segment size (in integers) used by the sieve; each segment is marked with
// the base primes up to sqrt(limit) independently.
inline constexpr std::uint64_t kDefaultSieveSegment = std::uint64_t{1} << 20;
// Refuse sieves whose bit array would exceed 512 MiB.
inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 32;

class PrimeTable {
 public:
  PrimeTable() = default;

  // InputError if limit < 2, BudgetError above kMaxSieveLimit.
  static PrimeTable sieve(std::uint64_t limit, std::uint64_t segment = kDefaultSieveSegment);

  // Cache file: 8-byte magic "CMLSIEVE", limit as uint64 little endian, then
  // floor(limit/8)+1 bytes; bit k of byte j (LSB first) is set iff 8j+k is
  // prime.
  void save(const std::filesystem::path& path) const;
  static PrimeTable load(const std::filesystem::path& path);
  // Reuses the cache when it covers limit, otherwise sieves and rewrites it.
  static PrimeTable load_or_build(const std::filesystem::path& path, std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }
  bool is_prime(std::uint64_t x) const;
  std::vector<std::uint64_t> primes_up_to(std::uint64_t x) const;

 private:
  void collect();

  std::uint64_t limit_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint64_t> primes_;
};

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// log x for prime x, 0 otherwise.
double lambda_star(std::uint64_t x);

// Sum of lambda_star(v) over 0 <= v <= t with v = h (mod q).
double psi_h(const PrimeTable& table, std::uint64_t t, std::uint64_t q, std::uint64_t h);

struct SemiprimeRecord {
  std::uint64_t z;
  std::uint64_t p;
  std::uint64_t q;
  double weight;
};

// All z = p q <= N with primes q <= p, p <= N1, q <= N2, sorted by (z, p).
std::vector<SemiprimeRecord> semiprimes(const PrimeTable& table, std::uint64_t N,
                                        std::uint64_t N1, std::uint64_t N2);

}  // namespace cml
