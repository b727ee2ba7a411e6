#include "primcube/numth.hpp"

#include <algorithm>
#include <cmath>

namespace primcube::numth {

namespace {

constexpr u64 kSmallPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

bool mr_witness_u64(u64 n, u64 a) {
  if (a % n == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod_u64(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool mr_witness_u128(const Mont128& m, u128 n, u128 a) {
  a %= n;
  if (a == 0) return true;
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u128 x = m.pow(m.to_mont(a), d);
  u128 one = m.one();
  u128 neg_one = m.sub(0, one);
  if (x == one || x == neg_one) return true;
  for (int i = 1; i < s; ++i) {
    x = m.mul(x, x);
    if (x == neg_one) return true;
  }
  return false;
}

int jacobi(u128 a, u128 n) {
  a %= n;
  int t = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      u128 r = n & 7;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

// Strong Lucas probable-prime test with Selfridge parameters.
bool strong_lucas(u128 n) {
  // find D in 5, -7, 9, -11, ... with jacobi(D, n) == -1
  long long d_signed = 5;
  while (true) {
    u128 d_mod = d_signed >= 0 ? static_cast<u128>(d_signed) % n
                               : n - (static_cast<u128>(-d_signed) % n);
    int j = jacobi(d_mod, n);
    if (j == 0) {
      // gcd(|D|, n) > 1; n > |D| here means composite
      return n == static_cast<u128>(d_signed >= 0 ? d_signed : -d_signed);
    }
    if (j == -1) break;
    d_signed = d_signed > 0 ? -(d_signed + 2) : -(d_signed - 2);
  }
  Mont128 m(n);
  u128 one = m.one();
  u128 d_mont = m.to_mont(d_signed >= 0 ? static_cast<u128>(d_signed) % n
                                        : n - (static_cast<u128>(-d_signed) % n));
  // P = 1, Q = (1 - D) / 4
  long long q_signed = (1 - d_signed) / 4;
  u128 q_mont = m.to_mont(q_signed >= 0 ? static_cast<u128>(q_signed) % n
                                        : n - (static_cast<u128>(-q_signed) % n));

  u128 nd = n + 1;
  int s = 0;
  while ((nd & 1) == 0) {
    nd >>= 1;
    ++s;
  }

  auto halve = [&](u128 x) {
    // division by 2 mod odd n, on the Montgomery representative
    if (x & 1) {
      // x + n may exceed 128 bits only if x, n close to 2^128; n < 2^126 here
      return (x + n) >> 1;
    }
    return x >> 1;
  };

  u128 u = 0, v = m.add(one, one);  // U_0 = 0, V_0 = 2
  u128 qk = one;                    // Q^0
  u128 u1 = one, v1 = one;          // U_1 = 1, V_1 = P = 1
  // binary ladder computing U_nd, V_nd, Q^nd
  int bits = bit_width_u128(nd);
  u = u1;
  v = v1;
  qk = q_mont;
  for (int i = bits - 2; i >= 0; --i) {
    // double: U_2k = U V ; V_2k = V^2 - 2 Q^k ; Q^2k
    u = m.mul(u, v);
    v = m.sub(m.mul(v, v), m.add(qk, qk));
    qk = m.mul(qk, qk);
    if ((nd >> i) & 1) {
      // increment: U_{2k+1} = (U + V)/2 ; V_{2k+1} = (D U + V)/2 ; Q^{2k+1}
      u128 nu = halve(m.add(u, v));
      u128 nv = halve(m.add(m.mul(d_mont, u), v));
      u = nu;
      v = nv;
      qk = m.mul(qk, q_mont);
    }
  }
  if (u == 0 || v == 0) return true;
  for (int r = 1; r < s; ++r) {
    v = m.sub(m.mul(v, v), m.add(qk, qk));
    qk = m.mul(qk, qk);
    if (v == 0) return true;
  }
  return false;
}

u64 isqrt_u64(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 iroot_u64(u64 n, int e) {
  if (e == 1) return n;
  u64 r = static_cast<u64>(std::pow(static_cast<double>(n), 1.0 / e));
  auto pw = [&](u64 b) -> u128 {
    u128 x = 1;
    for (int i = 0; i < e; ++i) {
      x *= b;
      if (x > static_cast<u128>(~0ull)) return x;
    }
    return x;
  };
  while (r > 1 && pw(r) > n) --r;
  while (pw(r + 1) <= n) ++r;
  return r;
}

const std::vector<u64>& trial_primes() {
  static const std::vector<u64> table = primes_below(1'000'000);
  return table;
}

// Brent's cycle-finding rho with batched gcd; returns a nontrivial factor.
// iters tracks f-evaluations against the caller's budget.
u128 brent_rho_u128(u128 n, u64& iters, u64 budget) {
  Mont128 m(n);
  u64 c_seed = 1;
  while (true) {
    u128 c = m.to_mont(c_seed);
    u128 y = m.to_mont(c_seed + 2);
    u128 g = 1, q = m.one(), ys = y, x = y;
    const u64 batch = 128;
    u64 r = 1;
    while (g == 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = m.add(m.mul(y, y), c);
      u64 k = 0;
      while (k < r && g == 1) {
        ys = y;
        u64 lim = std::min(batch, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = m.add(m.mul(y, y), c);
          q = m.mul(q, m.sub(x, y));
        }
        iters += lim;
        if (iters > budget) throw RhoBudgetExceeded(n);
        g = gcd_u128(m.from_mont(q), n);
        k += lim;
      }
      r <<= 1;
    }
    if (g == n) {
      // backtrack one step at a time
      do {
        ys = m.add(m.mul(ys, ys), c);
        ++iters;
        if (iters > budget) throw RhoBudgetExceeded(n);
        g = gcd_u128(m.from_mont(m.sub(x, ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
    ++c_seed;  // degenerate cycle, retry with a new polynomial
  }
}

void factor_rec(u128 n, std::vector<FactorEntry>& out, u64& iters, u64 budget) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back({n, 1});
    return;
  }
  u128 d = brent_rho_u128(n, iters, budget);
  factor_rec(d, out, iters, budget);
  factor_rec(n / d, out, iters, budget);
}

void normalize(std::vector<FactorEntry>& fs) {
  std::sort(fs.begin(), fs.end(),
            [](const FactorEntry& a, const FactorEntry& b) { return a.prime < b.prime; });
  std::vector<FactorEntry> out;
  for (const auto& f : fs) {
    if (!out.empty() && out.back().prime == f.prime)
      out.back().exp += f.exp;
    else
      out.push_back(f);
  }
  fs = std::move(out);
}

// Tonelli-Shanks square root mod odd prime p; returns r with r^2 = a (mod p),
// assuming a is a quadratic residue.
u64 sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (p % 4 == 3) return powmod_u64(a, (p + 1) / 4, p);
  u64 s = p - 1;
  int e = 0;
  while ((s & 1) == 0) {
    s >>= 1;
    ++e;
  }
  u64 nqr = 2;
  while (powmod_u64(nqr, (p - 1) / 2, p) != p - 1) ++nqr;
  u64 x = powmod_u64(a, (s + 1) / 2, p);
  u64 b = powmod_u64(a, s, p);
  u64 g = powmod_u64(nqr, s, p);
  int r = e;
  while (true) {
    u64 t = b;
    int mth = 0;
    while (t != 1) {
      t = mulmod_u64(t, t, p);
      ++mth;
    }
    if (mth == 0) return x;
    u64 gs = g;
    for (int i = 0; i < r - mth - 1; ++i) gs = mulmod_u64(gs, gs, p);
    x = mulmod_u64(x, gs, p);
    g = mulmod_u64(gs, gs, p);
    b = mulmod_u64(b, g, p);
    r = mth;
  }
}

}  // namespace

bool is_prime(u128 n) {
  if (n < 2) return false;
  for (u64 p : kSmallPrimes) {
    if (n % p == 0) return n == p;
  }
  if (n < 73 * 73) return true;
  if ((n >> 64) == 0) {
    u64 n64 = static_cast<u64>(n);
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                  29ull, 31ull, 37ull}) {
      if (!mr_witness_u64(n64, a)) return false;
    }
    return true;
  }
  Mont128 m(n);
  // First 13 prime bases: deterministic below 3.317e24; the Lucas stage makes
  // the composite-pass probability vanish for the handful of larger inputs
  // (q^2+q+1 < 6.5e25) this project ever sees.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull, 41ull}) {
    if (!mr_witness_u128(m, n, a)) return false;
  }
  return strong_lucas(n);
}

Factorization factorize(u128 n, u64 rho_budget) {
  if (n < 1) throw std::invalid_argument("factorize requires n >= 1");
  Factorization f;
  f.n = n;
  if (n == 1) return f;
  u128 cur = n;
  for (u64 p : trial_primes()) {
    if (static_cast<u128>(p) * p > cur) break;
    if (cur % p == 0) {
      int e = 0;
      while (cur % p == 0) {
        cur /= p;
        ++e;
      }
      f.factors.push_back({p, e});
    }
  }
  if (cur > 1) {
    if (cur < static_cast<u128>(1'000'000) * 1'000'000 || is_prime(cur)) {
      f.factors.push_back({cur, 1});
    } else {
      u64 iters = 0;
      std::vector<FactorEntry> rest;
      factor_rec(cur, rest, iters, rho_budget);
      for (auto& e : rest) f.factors.push_back(e);
      normalize(f.factors);
    }
  }
  return f;
}

int omega(const Factorization& f) { return static_cast<int>(f.factors.size()); }

u128 euler_phi(const Factorization& f) {
  u128 phi = 1;
  for (const auto& e : f.factors) {
    phi *= e.prime - 1;
    for (int i = 1; i < e.exp; ++i) phi *= e.prime;
  }
  return phi;
}

u128 radical(const Factorization& f) {
  u128 r = 1;
  for (const auto& e : f.factors) r *= e.prime;
  return r;
}

std::optional<std::pair<u64, int>> prime_power(u64 n) {
  if (n < 2) return std::nullopt;
  for (int e = 42; e >= 2; --e) {
    if ((n >> e) == 0) continue;  // no base >= 2 possible
    u64 r = iroot_u64(n, e);
    if (r < 2) continue;
    u128 pw = 1;
    for (int i = 0; i < e; ++i) pw *= r;
    if (pw == n && is_prime(r)) return std::make_pair(r, e);
  }
  if (is_prime(n)) return std::make_pair(n, 1);
  return std::nullopt;
}

std::vector<u64> primes_below(u64 limit) {
  std::vector<u64> out;
  if (limit <= 2) return out;
  std::vector<bool> comp(limit, false);
  for (u64 i = 2; i * i < limit; ++i) {
    if (!comp[i]) {
      for (u64 j = i * i; j < limit; j += i) comp[j] = true;
    }
  }
  for (u64 i = 2; i < limit; ++i) {
    if (!comp[i]) out.push_back(i);
  }
  return out;
}

Factorization merge_factorizations(const Factorization& a, const Factorization& b) {
  u256 prod = mul_full_u128(a.n, b.n);
  if (prod.hi != 0) throw std::overflow_error("merged factorization exceeds 128 bits");
  Factorization out;
  out.n = prod.lo;
  auto ia = a.factors.begin(), ib = b.factors.begin();
  while (ia != a.factors.end() || ib != b.factors.end()) {
    if (ib == b.factors.end() || (ia != a.factors.end() && ia->prime < ib->prime)) {
      out.factors.push_back(*ia++);
    } else if (ia == a.factors.end() || ib->prime < ia->prime) {
      out.factors.push_back(*ib++);
    } else {
      out.factors.push_back({ia->prime, ia->exp + ib->exp});
      ++ia;
      ++ib;
    }
  }
  return out;
}

void windowed_partial_factor(u64 lo, u64 hi, u64 smooth_bound,
                             const std::function<void(WindowRecord&&)>& sink,
                             u64 window_width) {
  if (lo > hi) throw std::invalid_argument("empty range");
  if (smooth_bound < 2) throw std::invalid_argument("smoothness bound must be >= 2");
  lo = std::max<u64>(lo, 2);
  if (lo > hi) return;

  const u64 sqrt_hi = isqrt_u64(hi);
  const std::vector<u64> qm1_primes = primes_below(sqrt_hi + 1);
  const std::vector<u64> smooth_primes = primes_below(smooth_bound);

  // roots of x^2+x+1 mod p (p = 3: the double root 1; p = 1 mod 3: two roots)
  struct RootedPrime {
    u64 p;
    u64 r1, r2;
    bool two_roots;
  };
  std::vector<RootedPrime> rooted;
  rooted.reserve(smooth_primes.size() / 2);
  for (u64 p : smooth_primes) {
    if (p == 3) {
      rooted.push_back({3, 1, 1, false});
    } else if (p % 3 == 1) {
      u64 s = sqrt_mod(p - 3, p);  // sqrt(-3) exists since p = 1 mod 3
      u64 inv2 = (p + 1) / 2;
      u64 r1 = mulmod_u64((s + p - 1) % p, inv2, p);
      u64 r2 = mulmod_u64((p - s + p - 1) % p, inv2, p);
      rooted.push_back({p, r1, r2, true});
    }
  }

  std::vector<bool> composite;
  std::vector<u64> rem1;
  std::vector<u128> rem2;
  std::vector<std::vector<FactorEntry>> fac1, fac2;

  for (u64 w = lo; w <= hi; w += window_width) {
    const u64 wend = std::min(hi, w + window_width - 1);
    const u64 len = wend - w + 1;
    composite.assign(len, false);
    rem1.resize(len);
    rem2.resize(len);
    fac1.resize(len);
    fac2.resize(len);
    for (u64 i = 0; i < len; ++i) {
      const u64 q = w + i;
      rem1[i] = q - 1;
      rem2[i] = static_cast<u128>(q) * q + q + 1;
      fac1[i].clear();
      fac2[i].clear();
    }

    // primality marks
    for (u64 p : qm1_primes) {
      u64 start = std::max(p * p, (w + p - 1) / p * p);
      for (u64 q = start; q <= wend; q += p) composite[q - w] = true;
    }

    // complete factorization of q-1: divide out every prime <= sqrt(hi)
    for (u64 p : qm1_primes) {
      u64 q = (w <= p + 1) ? p + 1 : ((w - 1 + p - 1) / p * p + 1);
      for (; q <= wend; q += p) {
        u64 i = q - w;
        if (composite[i]) continue;
        int e = 0;
        while (rem1[i] % p == 0) {
          rem1[i] /= p;
          ++e;
        }
        if (e > 0) fac1[i].push_back({p, e});
      }
    }

    // smooth part of q^2+q+1: divide out primes < X at the sieve roots
    for (const auto& rp : rooted) {
      for (int which = 0; which < (rp.two_roots ? 2 : 1); ++which) {
        u64 r = which == 0 ? rp.r1 : rp.r2;
        u64 q = (w <= r) ? r : ((w - r + rp.p - 1) / rp.p * rp.p + r);
        if (q < w) q += rp.p;
        for (; q <= wend; q += rp.p) {
          u64 i = q - w;
          if (composite[i]) continue;
          int e = 0;
          while (rem2[i] % rp.p == 0) {
            rem2[i] /= rp.p;
            ++e;
          }
          if (e > 0) fac2[i].push_back({rp.p, e});
        }
      }
    }

    for (u64 i = 0; i < len; ++i) {
      const u64 q = w + i;
      if (q < 2 || composite[i]) continue;
      WindowRecord rec;
      rec.q = q;
      rec.q_minus_1.n = q - 1;
      rec.q_minus_1.factors = fac1[i];
      if (rem1[i] > 1) rec.q_minus_1.factors.push_back({rem1[i], 1});
      rec.q2q1.m = static_cast<u128>(q) * q + q + 1;
      rec.q2q1.smooth_bound = smooth_bound;
      rec.q2q1.smooth.factors = fac2[i];
      rec.q2q1.smooth.n = 1;
      for (const auto& fe : rec.q2q1.smooth.factors) {
        for (int t = 0; t < fe.exp; ++t) rec.q2q1.smooth.n *= fe.prime;
      }
      rec.q2q1.u = rem2[i];
      sink(std::move(rec));
    }
  }
}

}  // namespace primcube::numth
