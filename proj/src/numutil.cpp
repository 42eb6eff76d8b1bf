#include "polyreg/numutil.hpp"

namespace polyreg {

u64 invmod(u64 a, u64 m) {
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(m), newr = static_cast<long long>(a % m);
    while (newr != 0) {
        long long q = r / newr;
        long long tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    return static_cast<u64>(t < 0 ? t + static_cast<long long>(m) : t);
}

int ord_p(u64 v, u64 p) {
    if (v == 0) throw std::domain_error("ord_p(0)");
    int k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

int ord_p(const mpz_class& v, u64 p) {
    if (v == 0) throw std::domain_error("ord_p(0)");
    mpz_class q, r, n = abs(v);
    int k = 0;
    mpz_class pz = static_cast<unsigned long>(p);
    while (true) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t());
        if (r != 0) break;
        n = q;
        ++k;
    }
    return k;
}

u64 pow_u64(u64 p, int k) {
    u64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > (u64(1) << 62) / p) throw std::overflow_error("pow_u64: p^k exceeds 2^62");
        r *= p;
    }
    return r;
}

int max_pk_exponent(u64 p) {
    int k = 0;
    u64 r = 1;
    while (r <= (u64(1) << 62) / p) {
        r *= p;
        ++k;
    }
    return k;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % d == 0) return n == d;
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
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

std::vector<u64> primes_up_to(u64 n) {
    std::vector<u64> out;
    if (n < 2) return out;
    std::vector<bool> sieve(n + 1, true);
    for (u64 i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) sieve[j] = false;
    }
    return out;
}

u64 euler_phi(u64 n) {
    u64 result = n;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

int legendre(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    u64 r = powmod(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

u64 least_nonresidue(u64 p) {
    for (u64 a = 2; a < p; ++a)
        if (legendre(a, p) == -1) return a;
    throw std::domain_error("least_nonresidue: p has no non-residue");
}

u64 sqrt_mod_pk(u64 s, u64 p, int k) {
    u64 pk = pow_u64(p, k);
    s %= pk;
    if (p == 2) {
        if (k <= 2) {
            if (s % pk != 1 % pk) throw std::domain_error("sqrt_mod_pk: no root");
            return 1;
        }
        if (s % 8 != 1) throw std::domain_error("sqrt_mod_pk: no root");
        u64 x = 1;
        // Fix one bit per step: (x + 2^(j-1))^2 = x^2 + 2^j mod 2^(j+1) for odd x, j >= 3.
        for (int j = 3; j < k; ++j) {
            u64 diff = (s + pk - mulmod(x, x, pk)) % pk;
            if ((diff >> j) & 1) x += u64(1) << (j - 1);
        }
        return x % pk;
    }
    if (s % p == 0) throw std::domain_error("sqrt_mod_pk: not a unit");
    u64 x0 = 0;
    for (u64 a = 1; a < p; ++a) {
        if (mulmod(a, a, p) == s % p) {
            x0 = a;
            break;
        }
    }
    if (x0 == 0) throw std::domain_error("sqrt_mod_pk: non-residue");
    // Newton lift x -> (x + s/x)/2, doubling precision each step.
    u64 x = x0;
    int prec = 1;
    while (prec < k) {
        prec = std::min(k, 2 * prec);
        u64 m = pow_u64(p, prec);
        u64 inv2 = invmod(2, m);
        u64 xm = x % m;
        x = mulmod(inv2, (xm + mulmod(s % m, invmod(xm, m), m)) % m, m);
    }
    return x % pow_u64(p, k);
}

void or_shl_bits(std::vector<u64>& dst, const std::vector<u64>& src, u64 s, u64 M) {
    if (s >= M) return;
    u64 nw = (M + 63) / 64;
    u64 ws = s / 64;
    int bs = static_cast<int>(s % 64);
    u64 top_mask = (M % 64) ? ((u64(1) << (M % 64)) - 1) : ~u64(0);
    for (u64 w = nw; w-- > 0;) {
        u64 lo = (w >= ws) ? src[w - ws] : 0;
        u64 hi = (bs && w >= ws + 1) ? src[w - ws - 1] : 0;
        u64 v = bs ? ((lo << bs) | (hi >> (64 - bs))) : lo;
        if (w == nw - 1) v &= top_mask;
        dst[w] |= v;
    }
}

void or_shr_bits(std::vector<u64>& dst, const std::vector<u64>& src, u64 s, u64 M) {
    if (s >= M) return;
    u64 nw = (M + 63) / 64;
    u64 ws = s / 64;
    int bs = static_cast<int>(s % 64);
    for (u64 w = 0; w + ws < nw; ++w) {
        u64 lo = src[w + ws] >> bs;
        u64 hi = (bs && w + ws + 1 < nw) ? (src[w + ws + 1] << (64 - bs)) : 0;
        dst[w] |= bs ? (lo | hi) : lo;
    }
}

void or_rotl_bits(std::vector<u64>& dst, const std::vector<u64>& src, u64 s, u64 M) {
    s %= M;
    if (s == 0) {
        for (size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
        return;
    }
    or_shl_bits(dst, src, s, M);
    or_shr_bits(dst, src, M - s, M);
}

u64 mpq_mod_pk(const mpq_class& q, u64 p, int k) {
    u64 pk = pow_u64(p, k);
    mpz_class pkz(static_cast<unsigned long>(pk));
    mpz_class num = q.get_num() % pkz;
    if (num < 0) num += pkz;
    mpz_class den = q.get_den() % pkz;
    u64 n = mpz_get_ui(num.get_mpz_t());
    u64 d = mpz_get_ui(den.get_mpz_t());
    if (std::gcd(d, pk) != 1) throw std::domain_error("mpq_mod_pk: denominator not a p-unit");
    return mulmod(n, invmod(d, pk), pk);
}

}  // namespace polyreg
