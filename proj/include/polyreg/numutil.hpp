#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace polyreg {

using i64 = long;            // LP64: 64-bit, and native to gmpxx
using u64 = unsigned long;
using u128 = unsigned __int128;
static_assert(sizeof(long) == 8, "LP64 platform required");

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Modular inverse for gcd(a, m) = 1.
u64 invmod(u64 a, u64 m);

// p-adic valuation of a nonzero integer.
int ord_p(u64 v, u64 p);
int ord_p(const mpz_class& v, u64 p);

// p^k as u64; throws std::overflow_error past 2^62.
u64 pow_u64(u64 p, int k);

// Largest k with p^k <= 2^62.
int max_pk_exponent(u64 p);

bool is_prime(u64 n);
std::vector<u64> primes_up_to(u64 n);

u64 euler_phi(u64 n);

// Legendre symbol (a/p) for odd prime p; returns -1, 0, or 1.
int legendre(u64 a, u64 p);

// Least positive quadratic non-residue mod odd prime p.
u64 least_nonresidue(u64 p);

// Square root of s modulo p^k (p odd prime: s a unit with (s/p)=1;
// p=2, k>=3: s odd with s=1 mod 8; k<=2: s=1 mod 2^k). Throws if no root.
u64 sqrt_mod_pk(u64 s, u64 p, int k);

// Reduce an exact rational with p-unit denominator modulo p^k.
u64 mpq_mod_pk(const mpq_class& q, u64 p, int k);

// Word-level helpers on M-bit sets stored as u64 words (bits >= M stay zero).
// dst |= (src << s), truncated to [0, M).
void or_shl_bits(std::vector<u64>& dst, const std::vector<u64>& src, u64 s, u64 M);
// dst |= (src >> s).
void or_shr_bits(std::vector<u64>& dst, const std::vector<u64>& src, u64 s, u64 M);
// dst |= src rotated left by s on the M-bit ring.
void or_rotl_bits(std::vector<u64>& dst, const std::vector<u64>& src, u64 s, u64 M);

inline bool test_bit(const std::vector<u64>& v, u64 i) { return (v[i / 64] >> (i % 64)) & 1; }
inline void set_bit(std::vector<u64>& v, u64 i) { v[i / 64] |= u64(1) << (i % 64); }

}  // namespace polyreg
