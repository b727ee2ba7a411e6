#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "primcube/wide.hpp"

namespace primcube::numth {

struct FactorEntry {
  u128 prime;
  int exp;
  friend bool operator==(const FactorEntry&, const FactorEntry&) = default;
};

// Exact factorization of n; primes strictly increasing, exponents >= 1.
// n = 1 has an empty factor list.
struct Factorization {
  u128 n = 1;
  std::vector<FactorEntry> factors;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

// Known small-prime part of m = q^2+q+1 below the smoothness bound X, plus
// the unfactored remainder u. smooth.n * u == m and no prime < X divides u.
struct PartialFactorization {
  u128 m = 1;
  Factorization smooth;
  u128 u = 1;
  u64 smooth_bound = 1 << 20;
};

class RhoBudgetExceeded : public std::runtime_error {
 public:
  explicit RhoBudgetExceeded(u128 n)
      : std::runtime_error("rho iteration budget exceeded while factoring " +
                           to_string_u128(n)) {}
};

// Deterministic for n < 3.3e24 (fixed Miller-Rabin witness set); BPSW-backed
// beyond that, which is exact for every input with no known counterexample.
bool is_prime(u128 n);

inline constexpr u64 kDefaultRhoBudget = 1u << 26;

Factorization factorize(u128 n, u64 rho_budget = kDefaultRhoBudget);

int omega(const Factorization& f);
u128 euler_phi(const Factorization& f);
u128 radical(const Factorization& f);

// (p, e) with p prime and p^e = n, if n is a prime power.
std::optional<std::pair<u64, int>> prime_power(u64 n);

// All primes < limit, by sieve of Eratosthenes.
std::vector<u64> primes_below(u64 limit);

// Merge two factorizations (multiset union of prime powers); n multiplies.
Factorization merge_factorizations(const Factorization& a, const Factorization& b);

struct WindowRecord {
  u64 q;
  Factorization q_minus_1;       // complete
  PartialFactorization q2q1;     // smooth part below X of q^2+q+1
};

// For every prime q in [lo, hi]: the complete factorization of q-1 and the
// partial factorization of q^2+q+1 with smoothness bound X, found by sliding
// window sieves. Chunking into windows is internal.
void windowed_partial_factor(u64 lo, u64 hi, u64 smooth_bound,
                             const std::function<void(WindowRecord&&)>& sink,
                             u64 window_width = 1u << 20);

}  // namespace primcube::numth
