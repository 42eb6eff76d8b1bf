#include "polyreg/localsolve.hpp"

#include <algorithm>
#include <cassert>

namespace polyreg {

namespace {

constexpr u64 kPatternBudget = u64(1) << 27;

void require_prime(u64 p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
}

}  // namespace

int default_cap(u64 p) { return p == 2 ? 20 : 12; }

PadicTarget PadicTarget::from_mpz(const mpz_class& t, u64 p, int prec) {
    if (t < 0) throw std::invalid_argument("target must be non-negative");
    if (t == 0) return zero();
    PadicTarget out;
    out.is_zero = false;
    out.ord = ord_p(t, p);
    mpz_class u = t;
    for (int i = 0; i < out.ord; ++i) u /= static_cast<unsigned long>(p);
    out.unit_prec = prec;
    u64 pk = pow_u64(p, prec);
    mpz_class r = u % mpz_class(static_cast<unsigned long>(pk));
    out.unit = mpz_get_ui(r.get_mpz_t());
    return out;
}

PadicTarget PadicTarget::from_mpq(const mpq_class& q, u64 p, int prec) {
    if (q == 0) return zero();
    int num_ord = ord_p(mpz_class(q.get_num()), p);
    int den_ord = ord_p(mpz_class(q.get_den()), p);
    if (num_ord - den_ord < 0) throw std::logic_error("target is not a p-adic integer");
    PadicTarget out;
    out.is_zero = false;
    out.ord = num_ord - den_ord;
    out.unit_prec = prec;
    u64 pk = pow_u64(p, prec);
    mpz_class pkz(static_cast<unsigned long>(pk));
    mpz_class num = q.get_num();
    for (int i = 0; i < num_ord; ++i) num /= static_cast<unsigned long>(p);
    mpz_class num_r = num % pkz;
    if (num_r < 0) num_r += pkz;
    mpz_class den_r = q.get_den() % pkz;
    out.unit = mulmod(mpz_get_ui(num_r.get_mpz_t()),
                      invmod(mpz_get_ui(den_r.get_mpz_t()), pk), pk);
    return out;
}

u64 PadicTarget::mod_pk(u64 p, int k) const {
    if (is_zero || ord >= k) return 0;
    if (k - ord > unit_prec) throw std::logic_error("PadicTarget precision exhausted");
    u64 pk = pow_u64(p, k);
    u64 rest = pow_u64(p, k - ord);
    return mulmod(unit % rest, pow_u64(p, ord), pk);
}

QfLocalSolver::QfLocalSolver(std::vector<i64> c, u64 p) : p_(p) {
    require_prime(p);
    if (c.empty()) throw std::invalid_argument("empty coefficient vector");
    ord2p_ = (p == 2) ? 1 : 0;
    for (i64 ci : c) {
        if (ci <= 0) throw std::invalid_argument("coefficients must be positive");
        Coord co;
        co.c = ci;
        co.e = ord_p(static_cast<u64>(ci), p);
        co.u = static_cast<u64>(ci) / pow_u64(p, co.e);
        co_.push_back(co);
        max_e_ = std::max(max_e_, co.e);
        if (co.e == 0) ++unit_count_;
    }
}

// Scans all valuation-shell patterns of solutions mod p^K. shell[i] = -1 means
// y_i = 0; shell[i] = b means ord_p(y_i) = b (requires e_i + 2b < K). Records
// whether any pattern is feasible and whether a Hensel-liftable one is.
bool QfLocalSolver::scan(const PadicTarget& t, int K, bool want_witness, bool& liftable_found,
                         std::vector<u64>* witness_out) const {
    const int n = static_cast<int>(co_.size());
    std::vector<int> nshells(n);
    u64 budget = 1;
    for (int i = 0; i < n; ++i) {
        nshells[i] = std::max(0, (K - co_[i].e + 1) / 2);
        budget *= static_cast<u64>(nshells[i]) + 1;
        if (budget > kPatternBudget) throw std::runtime_error("qf solver: pattern budget exceeded");
    }

    const bool odd = (p_ != 2);
    // Quadratic-residue bitmask over Z/p for odd p (p < 64 uses a single word,
    // otherwise a word vector).
    const u64 p = p_;
    size_t pw = odd ? (p + 63) / 64 : 1;
    std::vector<u64> qr_mask(pw, 0);
    if (odd) {
        for (u64 a = 1; a < p; ++a) {
            u64 sq = mulmod(a, a, p);
            qr_mask[sq / 64] |= u64(1) << (sq % 64);
        }
    }

    bool any_found = false;
    liftable_found = false;
    std::vector<int> shell(n, -1);
    std::vector<u64> scratch(pw), next(pw);

    auto pattern_feasible = [&](bool& liftable) -> bool {
        int mu = K;
        bool a_nonempty = false;
        liftable = false;
        for (int i = 0; i < n; ++i) {
            if (shell[i] < 0) continue;
            a_nonempty = true;
            int alpha = co_[i].e + 2 * shell[i];
            int beta = odd ? 1 : std::min(3, K - alpha);
            mu = std::min(mu, alpha + beta);
            if (2 * (ord2p_ + co_[i].e + shell[i]) < K) liftable = true;
        }
        if (!a_nonempty) return t.is_zero || t.ord >= K;
        if (odd) {
            int a = t.is_zero ? K : t.ord;
            if (a < mu - 1) return false;
            u64 tau = (a >= mu) ? 0 : (t.unit % p);
            // Mandatory digit contributions at level mu-1: each unit variable
            // there adds u_i times a nonzero QR mod p.
            bool have = false;
            for (int i = 0; i < n; ++i) {
                if (shell[i] < 0 || co_[i].e + 2 * shell[i] != mu - 1) continue;
                if (!have) {
                    for (size_t w = 0; w < pw; ++w) scratch[w] = 0;
                    for (u64 q = 1; q < p; ++q) {
                        if (!((qr_mask[q / 64] >> (q % 64)) & 1)) continue;
                        u64 v = mulmod(co_[i].u, q, p);
                        scratch[v / 64] |= u64(1) << (v % 64);
                    }
                    have = true;
                    continue;
                }
                for (size_t w = 0; w < pw; ++w) next[w] = 0;
                for (u64 d = 0; d < p; ++d) {
                    if (!((scratch[d / 64] >> (d % 64)) & 1)) continue;
                    for (u64 q = 1; q < p; ++q) {
                        if (!((qr_mask[q / 64] >> (q % 64)) & 1)) continue;
                        u64 v = (d + mulmod(co_[i].u, q, p)) % p;
                        next[v / 64] |= u64(1) << (v % 64);
                    }
                }
                scratch.swap(next);
            }
            if (!have) return tau == 0;
            return (scratch[tau / 64] >> (tau % 64)) & 1;
        }
        // p = 2: within each shell the value 2^alpha * x is pinned to
        // x = u_i mod 2^min(3, K-alpha), so the sum is forced mod 2^mu.
        u64 pmu = u64(1) << mu;
        u64 sigma = 0;
        for (int i = 0; i < n; ++i) {
            if (shell[i] < 0) continue;
            int alpha = co_[i].e + 2 * shell[i];
            if (alpha >= mu) continue;
            sigma = (sigma + ((co_[i].u << alpha) & (pmu - 1))) & (pmu - 1);
        }
        u64 tmu = t.mod_pk(2, mu);
        return tmu == sigma;
    };

    // Depth-first product over per-coordinate shells.
    std::vector<int> stack;
    auto rec = [&](auto&& self, int i) -> bool {  // returns true to stop early
        if (i == n) {
            bool lift = false;
            if (!pattern_feasible(lift)) return false;
            any_found = true;
            if (lift && !liftable_found) {
                liftable_found = true;
                if (want_witness && witness_out) *witness_out = build_witness(t, K, shell);
            }
            // Stop once both questions are answered.
            return liftable_found;
        }
        for (int b = -1; b < nshells[i]; ++b) {
            shell[i] = b;
            if (self(self, i + 1)) return true;
        }
        shell[i] = -1;
        return false;
    };
    rec(rec, 0);
    return any_found;
}

std::vector<u64> QfLocalSolver::build_witness(const PadicTarget& t, int K,
                                              const std::vector<int>& shell) const {
    const int n = static_cast<int>(co_.size());
    const u64 p = p_;
    const u64 pK = pow_u64(p, K);
    const bool odd = (p != 2);

    int best = K + 4, mu = K, i0 = -1;
    for (int i = 0; i < n; ++i) {
        if (shell[i] < 0) continue;
        int alpha = co_[i].e + 2 * shell[i];
        int beta = odd ? 1 : std::min(3, K - alpha);
        if (alpha + beta < best) {
            best = alpha + beta;
            i0 = i;
        }
    }
    if (i0 < 0) throw std::logic_error("witness: empty pattern");
    mu = std::min(K, best);
    int alpha0 = co_[i0].e + 2 * shell[i0];

    std::vector<u64> y(n, 0);
    if (odd) {
        // Choose the mandatory mod-p digits of every level-(mu-1) coordinate
        // other than i0 so that the leftover digit for i0 is a permitted one.
        std::vector<int> astar;
        for (int i = 0; i < n; ++i)
            if (i != i0 && shell[i] >= 0 && co_[i].e + 2 * shell[i] == mu - 1) astar.push_back(i);
        int a = t.is_zero ? K : t.ord;
        u64 tau = (a >= mu) ? 0 : (t.unit % p);
        auto allowed = [&](u64 u, u64 v) {  // v in u * QR*?
            if (v == 0) return false;
            return legendre(mulmod(v, invmod(u, p), p), p) == 1;
        };
        std::vector<u64> rho(astar.size(), 0);
        auto pick = [&](auto&& self, size_t idx, u64 acc) -> bool {
            if (idx == astar.size()) {
                u64 need = (tau + p - acc % p) % p;
                return allowed(co_[i0].u, need);
            }
            u64 u = co_[astar[idx]].u;
            for (u64 q = 1; q < p; ++q) {
                if (legendre(q, p) != 1) continue;
                rho[idx] = mulmod(u, q, p);
                if (self(self, idx + 1, (acc + rho[idx]) % p)) return true;
            }
            return false;
        };
        if (!pick(pick, 0, 0)) throw std::logic_error("witness: digit selection failed");
        // Small concrete unit parts for everyone except i0.
        for (int i = 0; i < n; ++i) {
            if (i == i0 || shell[i] < 0) continue;
            u64 target_class = 1;  // u_i * 1^2 by default
            if (co_[i].e + 2 * shell[i] == mu - 1) {
                size_t idx = std::find(astar.begin(), astar.end(), i) - astar.begin();
                target_class = mulmod(rho[idx], invmod(co_[i].u, p), p);
            }
            u64 w = sqrt_mod_pk(target_class, p, 1);
            y[i] = mulmod(pow_u64(p, shell[i]), w, pK);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            if (i == i0 || shell[i] < 0) continue;
            y[i] = pow_u64(2, shell[i]) % pK;
        }
    }

    u64 tK = t.mod_pk(p, K);
    u64 S = 0;
    for (int i = 0; i < n; ++i) {
        if (i == i0) continue;
        u64 val = mulmod(mulmod(static_cast<u64>(co_[i].c) % pK, y[i], pK), y[i], pK);
        S = (S + val) % pK;
    }
    u64 R = (tK + pK - S) % pK;
    u64 palpha0 = pow_u64(p, alpha0);
    if (R % palpha0 != 0) throw std::logic_error("witness: residual valuation mismatch");
    u64 x0 = (R / palpha0) % pow_u64(p, K - alpha0);
    u64 rad = mulmod(x0, invmod(co_[i0].u, pow_u64(p, K - alpha0)), pow_u64(p, K - alpha0));
    u64 w0 = sqrt_mod_pk(rad, p, K - alpha0);
    y[i0] = mulmod(pow_u64(p, shell[i0]), w0, pK);

    u64 check = 0;
    for (int i = 0; i < n; ++i)
        check = (check + mulmod(mulmod(static_cast<u64>(co_[i].c) % pK, y[i], pK), y[i], pK)) % pK;
    if (check != tK) throw std::logic_error("witness verification failed");
    return y;
}

LocalVerdict QfLocalSolver::decide(const PadicTarget& t, int cap, bool want_witness,
                                   bool allow_shortcut) const {
    if (cap < 0) cap = default_cap(p_);
    cap = std::min(cap, max_pk_exponent(p_));
    if (t.is_zero)
        return LocalVerdict::make_yes(std::vector<u64>(co_.size(), 0), 1);
    bool shortcut = allow_shortcut && p_ != 2 && unit_count_ >= 3;
    int K0 = t.ord + 2 * max_e_ + 2 * ord2p_ + 1;
    if (K0 > cap) {
        if (shortcut) return LocalVerdict::make_yes(std::nullopt, 0);
        return LocalVerdict::make_undetermined(cap);
    }
    if (shortcut && !want_witness) return LocalVerdict::make_yes(std::nullopt, 0);
    for (int K = K0; K <= cap; ++K) {
        bool liftable = false;
        std::vector<u64> w;
        bool any = scan(t, K, want_witness, liftable, &w);
        if (liftable)
            return LocalVerdict::make_yes(want_witness ? std::make_optional(std::move(w))
                                                       : std::nullopt,
                                          K);
        if (!any) {
            if (shortcut) throw std::logic_error("unit-shortcut contradicts kernel");
            return LocalVerdict::make_no(K);
        }
    }
    return LocalVerdict::make_undetermined(cap);
}

LocalVerdict qf_represents(const std::vector<i64>& c, const mpz_class& t, u64 p, int cap) {
    QfLocalSolver solver(c, p);
    if (cap < 0) cap = default_cap(p);
    cap = std::min(cap, max_pk_exponent(p));
    return solver.decide(PadicTarget::from_mpz(t, p, cap), cap);
}

bool automatic_zp_universal(i64 m, u64 p) {
    if (p == 2) return m % 4 != 0;
    return (m - 2) % static_cast<i64>(p) == 0;
}

LocalVerdict local_represents(const ShiftedForm& form, const mpz_class& N, u64 p, int cap) {
    require_prime(p);
    if (!is_primitive(form)) throw std::invalid_argument("local_represents: form must be primitive");
    if (N < 0) throw std::invalid_argument("local_represents: N must be >= 0");
    if (cap < 0) cap = default_cap(p);
    cap = std::min(cap, max_pk_exponent(p));
    if (automatic_zp_universal(form.m, p)) return LocalVerdict::make_yes(std::nullopt, 0);

    auto dec = quadratic_decomposition(form);
    mpq_class t = (N + dec.constant) / dec.weight;
    t.canonicalize();
    QfLocalSolver solver(form.coefficients, p);
    LocalVerdict v = solver.decide(PadicTarget::from_mpq(t, p, cap), cap);
    if (v.yes() && v.witness) {
        // Translate qf witness y back to form variables x = y + shift.
        int K = v.precision;
        u64 pK = pow_u64(p, K);
        for (size_t i = 0; i < v.witness->size(); ++i) {
            u64 s = mpq_mod_pk(dec.shifts[i], p, K);
            (*v.witness)[i] = ((*v.witness)[i] + s) % pK;
        }
    }
    return v;
}

std::vector<i64> square_class_reps(u64 p) {
    require_prime(p);
    if (p == 2) return {1, 3, 5, 7, 2, 6, 10, 14};
    i64 eps = static_cast<i64>(least_nonresidue(p));
    return {1, eps, static_cast<i64>(p), static_cast<i64>(p) * eps};
}

std::vector<u64> relevant_primes(const ShiftedForm& form) {
    if (!is_primitive(form)) throw std::invalid_argument("relevant_primes: form must be primitive");
    if (form.rank() <= 2)
        throw std::domain_error(
            "relevant_primes: no finite relevant set for rank <= 2; every odd prime with an "
            "anisotropic completion can obstruct");
    std::vector<u64> out;
    if (form.m % 4 == 0) out.push_back(2);
    std::vector<u64> candidates;
    for (i64 a : form.coefficients) {
        u64 v = static_cast<u64>(a);
        for (u64 d = 3; d * d <= v; d += 2) {
            if (v % d == 0) {
                candidates.push_back(d);
                while (v % d == 0) v /= d;
            }
        }
        while (v % 2 == 0) v /= 2;
        if (v > 1) candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (u64 q : candidates) {
        if ((form.m - 2) % static_cast<i64>(q) == 0) continue;
        int units = 0;
        for (i64 a : form.coefficients)
            if (a % static_cast<i64>(q) != 0) ++units;
        if (units <= 2) out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

LocalVerdict is_zp_universal(const ShiftedForm& form, u64 p, int cap) {
    require_prime(p);
    if (!is_primitive(form)) throw std::invalid_argument("is_zp_universal: form must be primitive");
    if (cap < 0) cap = default_cap(p);
    cap = std::min(cap, max_pk_exponent(p));
    if (automatic_zp_universal(form.m, p)) return LocalVerdict::make_yes(std::nullopt, 0);
    QfLocalSolver solver(form.coefficients, p);
    bool undetermined = false;
    int und_cap = cap;
    for (i64 rep : square_class_reps(p)) {
        PadicTarget t = PadicTarget::from_mpz(mpz_class(static_cast<long>(rep)), p, cap);
        LocalVerdict v = solver.decide(t, cap, /*want_witness=*/false);
        if (v.no()) return v;
        if (v.undetermined()) {
            undetermined = true;
            und_cap = v.precision;
        }
    }
    if (undetermined) return LocalVerdict::make_undetermined(und_cap);
    return LocalVerdict::make_yes(std::nullopt, 0);
}

LocalVerdict is_locally_universal(const ShiftedForm& form, int cap) {
    if (!is_primitive(form))
        throw std::invalid_argument("is_locally_universal: form must be primitive");
    if (form.rank() <= 2) {
        // A rank-1 or rank-2 form always misses some p-adic integer at a prime
        // where the completed diagonal form is anisotropic.
        if (form.rank() == 1) {
            for (u64 q = 3;; q += 2) {
                if (!is_prime(q)) continue;
                if ((form.m - 2) % static_cast<i64>(q) == 0) continue;
                if (form.coefficients[0] % static_cast<i64>(q) == 0) continue;
                return is_zp_universal(form, q, cap);
            }
        }
        i64 prod = -form.coefficients[0] * form.coefficients[1];
        for (u64 q = 3;; q += 2) {
            if (!is_prime(q)) continue;
            if ((form.m - 2) % static_cast<i64>(q) == 0) continue;
            if ((form.coefficients[0] * form.coefficients[1]) % static_cast<i64>(q) == 0) continue;
            i64 red = prod % static_cast<i64>(q);
            if (red < 0) red += static_cast<i64>(q);
            if (legendre(static_cast<u64>(red), q) == -1) return is_zp_universal(form, q, cap);
        }
    }
    bool undetermined = false;
    int und_cap = 0;
    for (u64 p : relevant_primes(form)) {
        LocalVerdict v = is_zp_universal(form, p, cap);
        if (v.no()) return v;
        if (v.undetermined()) {
            undetermined = true;
            und_cap = v.precision;
        }
    }
    if (undetermined) return LocalVerdict::make_undetermined(und_cap);
    return LocalVerdict::make_yes(std::nullopt, 0);
}

namespace {

// a_i * P^{(r_i)}(x) mod M for x in [0, 2^26), exact in 128 bits.
u64 term_mod(const ShiftedForm& f, int i, u64 x, u64 M) {
    __int128 v = ((__int128)(f.m - 2) * x - (f.m - 2 - 2 * f.levels[i])) * x;  // >= 0, even
    u64 half = static_cast<u64>(static_cast<u128>(v / 2) % M);
    return mulmod(static_cast<u64>(f.coefficients[i]) % M, half, M);
}

}  // namespace

bool brute_local_oracle(const ShiftedForm& form, const mpz_class& N, u64 p, int k, u64 budget) {
    require_prime(p);
    if (k < 1) throw std::invalid_argument("brute_local_oracle: k must be >= 1");
    int n = form.rank();
    u64 M = pow_u64(p, k);
    u64 X = (p == 2) ? M * 2 : M;  // P mod 2^k depends on x mod 2^(k+1)
    double total = 1;
    for (int i = 0; i < n; ++i) {
        total *= static_cast<double>(X);
        if (total > static_cast<double>(budget))
            throw std::runtime_error("brute_local_oracle: enumeration budget exceeded");
    }
    mpz_class Nm = N % mpz_class(static_cast<unsigned long>(M));
    if (Nm < 0) Nm += mpz_class(static_cast<unsigned long>(M));
    u64 target = mpz_get_ui(Nm.get_mpz_t());

    std::vector<std::vector<u64>> tables(n);
    for (int i = 0; i < n; ++i) {
        tables[i].resize(X);
        for (u64 x = 0; x < X; ++x) tables[i][x] = term_mod(form, i, x, M);
    }
    std::vector<u64> idx(n, 0);
    auto rec = [&](auto&& self, int i, u64 acc) -> bool {
        if (i == n) return acc == target;
        for (u64 x = 0; x < X; ++x)
            if (self(self, i + 1, (acc + tables[i][x]) % M)) return true;
        return false;
    };
    return rec(rec, 0, 0);
}

std::vector<bool> brute_local_set(const ShiftedForm& form, u64 p, int k, u64 budget) {
    require_prime(p);
    int n = form.rank();
    u64 M = pow_u64(p, k);
    u64 X = (p == 2) ? M * 2 : M;
    u64 nw = (M + 63) / 64;

    std::vector<std::vector<u64>> values(n);
    u64 cost = 0;
    for (int i = 0; i < n; ++i) {
        std::vector<u64>& v = values[i];
        v.reserve(X);
        for (u64 x = 0; x < X; ++x) v.push_back(term_mod(form, i, x, M));
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        cost += v.size() * nw;
        if (cost > budget) throw std::runtime_error("brute_local_set: budget exceeded");
    }
    std::vector<u64> reach(nw, 0);
    reach[0] = 1;
    for (int i = 0; i < n; ++i) {
        std::vector<u64> next(nw, 0);
        for (u64 v : values[i]) or_rotl_bits(next, reach, v, M);
        reach.swap(next);
    }
    std::vector<bool> out(M);
    for (u64 t = 0; t < M; ++t) out[t] = test_bit(reach, t);
    return out;
}

LocalVerdict::Status LocalRepOracle::ClassCache::query(int ord, u64 unit_mod) {
    int delta = ord & 1;
    int b = ord >> 1;
    int idx;
    if (p == 2)
        idx = delta * 4 + static_cast<int>((unit_mod % 8) / 2);
    else
        idx = delta * 2 + (legendre(unit_mod % p, p) == 1 ? 0 : 1);
    auto& vec = by_class[idx];
    for (int bb = 0; bb <= b; ++bb) {
        if (bb >= static_cast<int>(vec.size())) vec.resize(bb + 1, 0);
        if (vec[bb] == 0) {
            PadicTarget t;
            t.is_zero = false;
            t.ord = 2 * bb + delta;
            t.unit = class_unit_rep[idx];
            t.unit_prec = cap;
            LocalVerdict v = solver.decide(t, cap, /*want_witness=*/false);
            vec[bb] = v.yes() ? 1 : (v.no() ? 2 : 3);
        }
        if (vec[bb] == 1) return LocalVerdict::Status::Yes;  // closed under *p^2
    }
    return vec[b] == 2 ? LocalVerdict::Status::No : LocalVerdict::Status::Undetermined;
}

LocalRepOracle::LocalRepOracle(const ShiftedForm& form, int cap)
    : form_(form), cap_(cap) {
    if (!is_primitive(form)) throw std::invalid_argument("LocalRepOracle: form must be primitive");
    i64 m = form.m;
    den_factor_ = 8 * (m - 2);
    cd_ = 0;
    for (size_t i = 0; i < form.coefficients.size(); ++i) {
        i64 d = m - 2 - 2 * form.levels[i];
        cd_ += form.coefficients[i] * d * d;
    }
    den_ord2_ = 4;
    low_rank_ = form.rank() <= 2;

    std::vector<u64> primes;
    if (m % 4 == 0) primes.push_back(2);
    std::vector<u64> candidates;
    for (i64 a : form.coefficients) {
        u64 v = static_cast<u64>(a);
        for (u64 d = 3; d * d <= v; d += 2)
            if (v % d == 0) {
                candidates.push_back(d);
                while (v % d == 0) v /= d;
            }
        while (v % 2 == 0) v /= 2;
        if (v > 1) candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (u64 q : candidates) {
        if ((m - 2) % static_cast<i64>(q) == 0) continue;
        int units = 0;
        for (i64 a : form.coefficients)
            if (a % static_cast<i64>(q) != 0) ++units;
        if (units <= 2) primes.push_back(q);
    }
    fixed_primes_ = primes;
    for (u64 p : fixed_primes_) {
        ClassCache cc{p, QfLocalSolver(form.coefficients, p),
                      std::min(cap_ < 0 ? default_cap(p) : cap_, max_pk_exponent(p)), {}, {}};
        if (p == 2) {
            cc.by_class.resize(8);
            cc.class_unit_rep = {1, 3, 5, 7, 1, 3, 5, 7};
        } else {
            cc.by_class.resize(4);
            u64 eps = least_nonresidue(p);
            cc.class_unit_rep = {1, eps, 1, eps};
        }
        caches_.push_back(std::move(cc));
    }
    if (low_rank_) trial_primes_ = primes_up_to(1 << 16);
}

LocalRepOracle::Answer LocalRepOracle::query(i64 N) {
    if (N < 0) throw std::invalid_argument("query: N must be >= 0");
    if (N > ((i64(1) << 62) - cd_) / den_factor_)
        throw std::overflow_error("LocalRepOracle: N too large");
    i64 numer = den_factor_ * N + cd_;
    if (numer == 0) return {LocalVerdict::Status::Yes, 0};

    bool undetermined = false;
    u64 und_p = 0;
    for (auto& cc : caches_) {
        u64 p = cc.p;
        int v = ord_p(static_cast<u64>(numer), p);
        i64 unit_num = numer / static_cast<i64>(pow_u64(p, v));
        int a;
        u64 unit;
        if (p == 2) {
            a = v - den_ord2_;
            if (a < 0) throw std::logic_error("2-adic target not integral");
            unit = static_cast<u64>(unit_num) & 7;  // w^2 = 1 mod 8 cancels the denominator
        } else {
            a = v;  // denominator 4(m-2)^2 is a square unit: class unchanged
            unit = static_cast<u64>(unit_num % static_cast<i64>(p));
        }
        auto st = cc.query(a, unit);
        if (st == LocalVerdict::Status::No) return {st, p};
        if (st == LocalVerdict::Status::Undetermined) {
            undetermined = true;
            und_p = p;
        }
    }

    if (low_rank_) {
        // Remaining primes: all coefficients are units there.
        if (form_.rank() == 1) {
            // x^2 = t/a_1 must be solvable at every remaining prime, which
            // forces t/a_1 to be a rational square.
            mpz_class prod = mpz_class(numer) * (4 * (form_.m - 2) * (form_.m - 2)) *
                             form_.coefficients[0];
            if (mpz_perfect_square_p(prod.get_mpz_t()) == 0)
                return {LocalVerdict::Status::No, 0};
        } else {
            i64 rest = numer;
            i64 a1a2 = form_.coefficients[0] * form_.coefficients[1];
            for (u64 q : trial_primes_) {
                if (static_cast<i64>(q) * static_cast<i64>(q) > rest) break;
                if (rest % static_cast<i64>(q) != 0) continue;
                int e = 0;
                while (rest % static_cast<i64>(q) == 0) {
                    rest /= static_cast<i64>(q);
                    ++e;
                }
                if (q == 2 || (form_.m - 2) % static_cast<i64>(q) == 0) continue;
                if (a1a2 % static_cast<i64>(q) == 0) continue;  // fixed prime, handled above
                if (e % 2 == 1) {
                    i64 red = (-a1a2) % static_cast<i64>(q);
                    if (red < 0) red += static_cast<i64>(q);
                    if (legendre(static_cast<u64>(red), q) == -1)
                        return {LocalVerdict::Status::No, q};
                }
            }
            if (rest > 1) {
                u64 q = static_cast<u64>(rest);
                if (q != 2 && (form_.m - 2) % rest != 0 && a1a2 % rest != 0) {
                    i64 red = (-a1a2) % rest;
                    if (red < 0) red += rest;
                    if (legendre(static_cast<u64>(red), q) == -1)
                        return {LocalVerdict::Status::No, q};
                }
            }
        }
    }

    if (undetermined) return {LocalVerdict::Status::Undetermined, und_p};
    return {LocalVerdict::Status::Yes, 0};
}

}  // namespace polyreg
