#include "cml/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "cml/error.hpp"
#include "cml/numeric.hpp"

namespace cml {
namespace {

constexpr char kMagic[8] = {'C', 'M', 'L', 'S', 'I', 'E', 'V', 'E'};

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

PrimeTable PrimeTable::sieve(std::uint64_t limit, std::uint64_t segment) {
  if (limit < 2) throw InputError("sieve limit must be at least 2");
  if (limit > kMaxSieveLimit) {
    throw BudgetError("sieve limit " + std::to_string(limit) + " exceeds the memory cap " +
                      std::to_string(kMaxSieveLimit));
  }
  if (segment == 0) segment = kDefaultSieveSegment;
  PrimeTable t;
  t.limit_ = limit;
  t.bits_.assign(limit / 8 + 1, 0);

  const std::uint64_t root = isqrt(limit);
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }

  std::vector<bool> seg;
  for (std::uint64_t lo = 0; lo <= limit; lo += segment) {
    const std::uint64_t hi = std::min(limit, lo + segment - 1);
    seg.assign(hi - lo + 1, true);
    for (std::uint64_t p : base) {
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = false;
    }
    for (std::uint64_t x = lo; x <= hi; ++x) {
      if (x >= 2 && seg[x - lo]) t.bits_[x >> 3] |= static_cast<std::uint8_t>(1u << (x & 7));
    }
  }
  t.collect();
  return t;
}

void PrimeTable::collect() {
  primes_.clear();
  for (std::uint64_t x = 2; x <= limit_; ++x) {
    if (bits_[x >> 3] >> (x & 7) & 1u) primes_.push_back(x);
  }
}

bool PrimeTable::is_prime(std::uint64_t x) const {
  if (x > limit_) throw InputError("query " + std::to_string(x) + " beyond sieve limit");
  return (bits_[x >> 3] >> (x & 7)) & 1u;
}

std::vector<std::uint64_t> PrimeTable::primes_up_to(std::uint64_t x) const {
  if (x > limit_) throw InputError("primes up to " + std::to_string(x) + " beyond sieve limit");
  auto end = std::upper_bound(primes_.begin(), primes_.end(), x);
  return {primes_.begin(), end};
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write sieve cache " + path.string());
  out.write(kMagic, sizeof kMagic);
  unsigned char header[8];
  for (int i = 0; i < 8; ++i) header[i] = static_cast<unsigned char>(limit_ >> (8 * i));
  out.write(reinterpret_cast<const char*>(header), 8);
  out.write(reinterpret_cast<const char*>(bits_.data()),
            static_cast<std::streamsize>(bits_.size()));
  if (!out) throw InputError("failed writing sieve cache " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open sieve cache " + path.string());
  char magic[8];
  unsigned char header[8];
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(header), 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw InputError("sieve cache " + path.string() + " has a bad header");
  }
  PrimeTable t;
  for (int i = 0; i < 8; ++i) t.limit_ |= static_cast<std::uint64_t>(header[i]) << (8 * i);
  if (t.limit_ < 2 || t.limit_ > kMaxSieveLimit) {
    throw InputError("sieve cache " + path.string() + " has an invalid limit");
  }
  t.bits_.resize(t.limit_ / 8 + 1);
  in.read(reinterpret_cast<char*>(t.bits_.data()), static_cast<std::streamsize>(t.bits_.size()));
  if (!in) throw InputError("sieve cache " + path.string() + " is truncated");
  t.collect();
  return t;
}

PrimeTable PrimeTable::load_or_build(const std::filesystem::path& path, std::uint64_t limit) {
  if (std::filesystem::exists(path)) {
    PrimeTable t = load(path);
    if (t.limit() >= limit) return t;
  }
  PrimeTable t = sieve(limit);
  t.save(path);
  return t;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

double lambda_star(std::uint64_t x) {
  return is_prime_u64(x) ? std::log(static_cast<double>(x)) : 0.0;
}

double psi_h(const PrimeTable& table, std::uint64_t t, std::uint64_t q, std::uint64_t h) {
  if (q == 0) throw InputError("psi_h needs q >= 1");
  if (h >= q) throw InputError("psi_h needs 0 <= h < q");
  CompensatedSum sum;
  for (std::uint64_t p : table.primes_up_to(t)) {
    if (p % q == h) sum.add(std::log(static_cast<double>(p)));
  }
  return sum.value();
}

std::vector<SemiprimeRecord> semiprimes(const PrimeTable& table, std::uint64_t N,
                                        std::uint64_t N1, std::uint64_t N2) {
  std::vector<SemiprimeRecord> out;
  const std::uint64_t pmax = std::min(N1, N / 2);
  if (N < 4 || pmax < 2) return out;
  const auto ps = table.primes_up_to(pmax);
  for (std::uint64_t p : ps) {
    for (std::uint64_t q : ps) {
      if (q > p || q > N2 || p * q > N) break;
      out.push_back({p * q, p, q,
                     std::log(static_cast<double>(p)) * std::log(static_cast<double>(q))});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.z != b.z ? a.z < b.z : a.p < b.p;
  });
  return out;
}

}  // namespace cml
