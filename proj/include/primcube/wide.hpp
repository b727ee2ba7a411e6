#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <stdexcept>

namespace primcube {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline int bit_width_u128(u128 x) {
  u64 hi = static_cast<u64>(x >> 64);
  if (hi) return 128 - __builtin_clzll(hi);
  u64 lo = static_cast<u64>(x);
  return lo ? 64 - __builtin_clzll(lo) : 0;
}

inline std::string to_string_u128(u128 x) {
  if (x == 0) return "0";
  char buf[48];
  int i = 48;
  while (x > 0) {
    buf[--i] = static_cast<char>('0' + static_cast<unsigned>(x % 10));
    x /= 10;
  }
  return std::string(buf + i, buf + 48);
}

inline u128 parse_u128(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  u128 x = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad digit in integer literal");
    u128 next = x * 10 + static_cast<unsigned>(c - '0');
    if (next < x) throw std::out_of_range("integer literal exceeds 128 bits");
    x = next;
  }
  return x;
}

inline u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// 128x128 -> 256-bit product.
struct u256 {
  u128 lo, hi;
};

inline u256 mul_full_u128(u128 a, u128 b) {
  const u128 mask = (static_cast<u128>(1) << 64) - 1;
  u128 a0 = a & mask, a1 = a >> 64;
  u128 b0 = b & mask, b1 = b >> 64;
  u128 p00 = a0 * b0;
  u128 p01 = a0 * b1;
  u128 p10 = a1 * b0;
  u128 p11 = a1 * b1;
  u128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
  u256 r;
  r.lo = (p00 & mask) | (mid << 64);
  r.hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
  return r;
}

// Montgomery context for odd moduli below 2^126.
class Mont128 {
 public:
  explicit Mont128(u128 n) : n_(n) {
    // -n^{-1} mod 2^128 via Newton iteration (n odd)
    u128 inv = n;
    for (int i = 0; i < 6; ++i) inv *= 2 - n * inv;
    nprime_ = static_cast<u128>(0) - inv;
    // r2 = 2^256 mod n
    u128 r = (static_cast<u128>(0) - n) % n;  // 2^128 mod n
    for (int i = 0; i < 128; ++i) {
      bool carry = (r >> 127) & 1;
      r <<= 1;
      if (carry || r >= n) r -= n;
    }
    r2_ = r;
    one_ = to_mont(1);
  }

  u128 n() const { return n_; }
  u128 one() const { return one_; }

  u128 to_mont(u128 x) const { return redc(mul_full_u128(x % n_, r2_)); }
  u128 from_mont(u128 x) const { return redc(u256{x, 0}); }
  u128 mul(u128 a, u128 b) const { return redc(mul_full_u128(a, b)); }
  u128 add(u128 a, u128 b) const {
    u128 s = a + b;
    if (s < a || s >= n_) s -= n_;
    return s;
  }
  u128 sub(u128 a, u128 b) const { return a >= b ? a - b : a + n_ - b; }

  u128 pow(u128 base_mont, u128 e) const {
    u128 r = one_, b = base_mont;
    while (e > 0) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }

 private:
  // Input t < n * 2^128; output t * 2^-128 mod n.
  // t + m*n < 2n*2^128 <= 2^255 for n < 2^126, so the 256-bit sum cannot
  // overflow and its low 128 bits are exactly zero.
  u128 redc(u256 t) const {
    u128 m = t.lo * nprime_;
    u256 mn = mul_full_u128(m, n_);
    u128 lo = t.lo + mn.lo;
    u128 carry = (lo < t.lo) ? 1 : 0;
    u128 r = t.hi + mn.hi + carry;
    if (r >= n_) r -= n_;
    return r;
  }

  u128 n_, nprime_, r2_, one_;
};

// a*b mod n via Montgomery round trip; for odd n < 2^126.
inline u128 mulmod_u128(u128 a, u128 b, u128 n) {
  if ((n >> 64) == 0) {
    u64 n64 = static_cast<u64>(n);
    return (static_cast<u128>(static_cast<u64>(a % n)) * static_cast<u64>(b % n)) % n64;
  }
  Mont128 m(n);
  return m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
}

inline u64 mulmod_u64(u64 a, u64 b, u64 n) {
  return static_cast<u64>((static_cast<u128>(a) * b) % n);
}

inline u64 powmod_u64(u64 base, u64 e, u64 n) {
  u64 r = 1 % n;
  base %= n;
  while (e > 0) {
    if (e & 1) r = mulmod_u64(r, base, n);
    base = mulmod_u64(base, base, n);
    e >>= 1;
  }
  return r;
}

}  // namespace primcube
